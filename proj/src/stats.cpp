#include "namecraft/stats.hpp"

#include <boost/math/distributions/binomial.hpp>
#include <boost/math/distributions/students_t.hpp>
#include <algorithm>
#include <cmath>

#include "namecraft/error.hpp"

namespace namecraft {

double mean(std::span<const double> x) {
  if (x.empty()) throw Error("mean of an empty sample");
  double s = 0.0;
  for (double v : x) s += v;
  return s / static_cast<double>(x.size());
}

double sample_variance(std::span<const double> x) {
  if (x.size() < 2) throw Error("variance needs at least two values");
  const double m = mean(x);
  double ss = 0.0;
  for (double v : x) ss += (v - m) * (v - m);
  return ss / static_cast<double>(x.size() - 1);
}

WelchResult welch_t_test(std::span<const double> a, std::span<const double> b) {
  if (a.size() < 2 || b.size() < 2) {
    throw Error("Welch's t-test needs at least two values per sample");
  }
  const bool identical =
      a.size() == b.size() && std::equal(a.begin(), a.end(), b.begin());
  const double va = sample_variance(a);
  const double vb = sample_variance(b);
  if (identical) return {0.0, 1.0, static_cast<double>(a.size() + b.size() - 2)};
  if (!(va > 0.0) || !(vb > 0.0)) {
    throw Error("Welch's t-test needs nonzero variance in both samples");
  }
  const double na = static_cast<double>(a.size());
  const double nb = static_cast<double>(b.size());
  const double sa = va / na;
  const double sb = vb / nb;
  WelchResult r;
  r.t = (mean(a) - mean(b)) / std::sqrt(sa + sb);
  r.dof = (sa + sb) * (sa + sb) /
          (sa * sa / (na - 1.0) + sb * sb / (nb - 1.0));
  const boost::math::students_t dist(r.dof);
  r.p = 2.0 * boost::math::cdf(boost::math::complement(dist, std::abs(r.t)));
  if (r.p > 1.0) r.p = 1.0;
  return r;
}

double binomial_two_sided_p(std::uint64_t successes, std::uint64_t n) {
  if (successes > n) throw Error("successes exceed trials");
  if (n == 0) return 1.0;
  const boost::math::binomial dist(static_cast<double>(n), 0.5);
  const double observed = boost::math::pdf(dist, static_cast<double>(successes));
  // Relative slack so outcomes tied in exact arithmetic are not lost to
  // rounding in the pdf evaluation.
  const double cut = observed * (1.0 + 1e-7);
  double p = 0.0;
  for (std::uint64_t k = 0; k <= n; ++k) {
    const double pk = boost::math::pdf(dist, static_cast<double>(k));
    if (pk <= cut) p += pk;
  }
  return std::min(p, 1.0);
}

}  // namespace namecraft
