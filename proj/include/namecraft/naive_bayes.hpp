#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "namecraft/embedding_table.hpp"
#include "namecraft/evaluate.hpp"
#include "namecraft/labels.hpp"
#include "namecraft/taxonomy.hpp"

namespace namecraft {

inline constexpr double kVarianceFloor = 1e-6;

// Gaussian naive Bayes with a diagonal covariance per class.
struct NbModel {
  std::vector<std::string> classes;
  std::vector<double> log_prior;
  std::vector<std::vector<double>> mean;
  std::vector<std::vector<double>> variance;  // each entry >= variance_floor
  double variance_floor = kVarianceFloor;

  // log p(c) + Σ_j log N(x_j; mean_cj, var_cj), per class.
  std::vector<double> joint_log_likelihood(std::span<const double> x) const;
  // Normalized log posterior (log-sum-exp over classes).
  std::vector<double> log_posterior(std::span<const double> x) const;
  std::size_t predict(std::span<const double> x) const;
  const std::string& predict_label(std::span<const double> x) const {
    return classes[predict(x)];
  }
};

// Classes are ordered by name. Throws naming any class with < 2 examples.
NbModel fit_gaussian_nb(const std::vector<std::vector<double>>& features,
                        const std::vector<std::string>& labels,
                        double variance_floor = kVarianceFloor);

struct NameFeatures {
  std::vector<std::vector<double>> features;  // first ⊕ last input vectors
  std::vector<std::string> labels;
  std::size_t skipped = 0;  // a part missing from the vocabulary
};

NameFeatures full_name_features(const EmbeddingTable& table,
                                const std::vector<FullNameLabel>& labels);

// Concatenated first/last vectors of one full name; throws when a part is out
// of vocabulary.
std::vector<double> full_name_vector(const EmbeddingTable& table,
                                     const NameToken& first,
                                     const NameToken& last);

// Labels must be leaves of the taxonomy.
NbModel train_nationality_nb(const EmbeddingTable& table,
                             const std::vector<FullNameLabel>& labels,
                             const Taxonomy& taxonomy,
                             std::size_t* skipped = nullptr);

struct NationalityEvaluation {
  F1Report report;
  std::size_t train_size = 0;
  std::size_t test_size = 0;
  std::size_t skipped = 0;
};

// Stratified, seeded train/test split per leaf (train_fraction of each leaf,
// at least two), Gaussian NB fit on train, leaf F1 on test.
NationalityEvaluation evaluate_nationality(
    const EmbeddingTable& table, const std::vector<FullNameLabel>& labels,
    const Taxonomy& taxonomy, double train_fraction, std::uint64_t seed);

}  // namespace namecraft
