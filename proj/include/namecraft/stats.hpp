#pragma once

#include <cstdint>
#include <span>

namespace namecraft {

struct WelchResult {
  double t = 0.0;
  double p = 1.0;  // two-sided
  double dof = 0.0;
};

// Welch's unequal-variance t-test with Welch–Satterthwaite degrees of
// freedom. t is mean(a) - mean(b) over its standard error. Identical samples
// give t = 0, p = 1. Throws when a sample has fewer than two values or zero
// variance.
WelchResult welch_t_test(std::span<const double> a, std::span<const double> b);

// Exact two-sided binomial test of `successes` out of `n` against p0 = 1/2:
// the total probability of outcomes no more likely than the observed one.
double binomial_two_sided_p(std::uint64_t successes, std::uint64_t n);

double mean(std::span<const double> x);
// Sample variance (n - 1 denominator).
double sample_variance(std::span<const double> x);

}  // namespace namecraft
