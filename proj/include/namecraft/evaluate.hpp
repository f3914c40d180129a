#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "namecraft/embedding_table.hpp"
#include "namecraft/labels.hpp"
#include "namecraft/taxonomy.hpp"

namespace namecraft {

struct ClassRatios {
  std::vector<std::string> labels;
  // Mean same-label fraction among each token's k nearest labeled neighbors,
  // averaged over the tokens of each class. NaN for classes with no tokens.
  std::vector<double> ratio;
  std::vector<std::size_t> support;
  // Unweighted mean over classes with support.
  double mean = 0.0;
};

// Neighbors are restricted to labeled tokens present in the table (self
// excluded). Throws when fewer than k + 1 labeled tokens are available.
ClassRatios same_class_ratio(const EmbeddingTable& table,
                             const LabelSet& labels, int k);

// Majority vote among the k nearest labeled tokens. Ties go to the tied label
// whose best-ranked neighbor is nearest.
class KnnClassifier {
 public:
  // Only labeled tokens of `role` (when given) that are in the table vote.
  KnnClassifier(const EmbeddingTable& table, const LabelSet& labels,
                std::optional<Role> role = std::nullopt);

  int classify(const std::string& key, int k) const;
  int classify(std::span<const double> vector, int k,
               std::optional<std::size_t> exclude_row = std::nullopt) const;
  const LabelSet& labels() const { return *labels_; }
  std::size_t voters() const { return index_.rows().size(); }

 private:
  const EmbeddingTable* table_;
  const LabelSet* labels_;
  std::vector<int> row_label_;  // per table row, -1 when not a voter
  CosineIndex index_;
};

// Gender of a first name by kNN majority over census-labeled first names.
// The query itself never votes.
std::string gender_knn_classify(const EmbeddingTable& table,
                                const LabelSet& census_labels,
                                const std::string& query, int k = 10);

struct F1Score {
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
  std::size_t support = 0;  // truth count
};

struct F1Report {
  std::map<std::string, F1Score> leaves;
  // Truth-count-weighted mean of leaf F1.
  double weighted_average = 0.0;
  // One-vs-rest F1 for every internal node, with leaves rolled up to it.
  std::map<std::string, F1Score> internal;
};

// Throws when a label is not a leaf of the taxonomy or lengths differ.
F1Report weighted_f1(const std::vector<std::string>& predictions,
                     const std::vector<std::string>& truth,
                     const Taxonomy& taxonomy);

}  // namespace namecraft
