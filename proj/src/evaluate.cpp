#include "namecraft/evaluate.hpp"

#include <cmath>
#include <limits>

#include "namecraft/error.hpp"

namespace namecraft {

namespace {

struct LabeledRows {
  std::vector<std::size_t> rows;
  std::vector<int> labels;
};

LabeledRows labeled_rows(const EmbeddingTable& table, const LabelSet& labels,
                         std::optional<Role> role) {
  LabeledRows out;
  for (const auto& [key, label] : labels.entries()) {
    if (role) {
      auto token = NameToken::from_key(key);
      if (!token || token->role != *role) continue;
    }
    if (auto row = table.vocab().find(key)) {
      out.rows.push_back(*row);
      out.labels.push_back(label);
    }
  }
  return out;
}

}  // namespace

ClassRatios same_class_ratio(const EmbeddingTable& table,
                             const LabelSet& labels, int k) {
  if (k < 1) throw Error("k must be at least 1");
  const LabeledRows lr = labeled_rows(table, labels, std::nullopt);
  if (lr.rows.size() < static_cast<std::size_t>(k) + 1) {
    throw Error("same_class_ratio needs at least k+1 = " +
                std::to_string(k + 1) + " labeled tokens in the vocabulary, have " +
                std::to_string(lr.rows.size()));
  }
  std::vector<int> row_label(table.size(), -1);
  for (std::size_t i = 0; i < lr.rows.size(); ++i) {
    row_label[lr.rows[i]] = lr.labels[i];
  }
  const std::size_t n_labels = labels.label_names().size();
  std::vector<double> sum(n_labels, 0.0);
  std::vector<std::size_t> support(n_labels, 0);
  const CosineIndex index(table, lr.rows);
  for (std::size_t i = 0; i < lr.rows.size(); ++i) {
    const auto neighbors = index.query(table.input(lr.rows[i]), k, lr.rows[i]);
    std::size_t same = 0;
    for (const auto& n : neighbors) {
      if (row_label[n.row] == lr.labels[i]) ++same;
    }
    sum[lr.labels[i]] += static_cast<double>(same) / neighbors.size();
    ++support[lr.labels[i]];
  }
  ClassRatios out;
  out.labels = labels.label_names();
  out.support = support;
  out.ratio.resize(n_labels);
  double total = 0.0;
  std::size_t present = 0;
  for (std::size_t c = 0; c < n_labels; ++c) {
    if (support[c] == 0) {
      out.ratio[c] = std::numeric_limits<double>::quiet_NaN();
      continue;
    }
    out.ratio[c] = sum[c] / support[c];
    total += out.ratio[c];
    ++present;
  }
  out.mean = present == 0 ? 0.0 : total / present;
  return out;
}

KnnClassifier::KnnClassifier(const EmbeddingTable& table,
                             const LabelSet& labels, std::optional<Role> role)
    : table_(&table),
      labels_(&labels),
      row_label_(table.size(), -1),
      index_([&] {
        const LabeledRows lr = labeled_rows(table, labels, role);
        for (std::size_t i = 0; i < lr.rows.size(); ++i) {
          row_label_[lr.rows[i]] = lr.labels[i];
        }
        return CosineIndex(table, lr.rows);
      }()) {
  if (index_.rows().empty()) {
    throw Error("no labeled tokens present in the embedding vocabulary");
  }
}

int KnnClassifier::classify(const std::string& key, int k) const {
  const std::size_t row = table_->vocab().at(key);
  return classify(table_->input(row), k, row);
}

int KnnClassifier::classify(std::span<const double> vector, int k,
                            std::optional<std::size_t> exclude_row) const {
  if (k < 1) throw Error("k must be at least 1");
  const auto neighbors = index_.query(vector, k, exclude_row);
  if (neighbors.empty()) throw Error("no labeled neighbors available");
  const std::size_t n_labels = labels_->label_names().size();
  std::vector<int> votes(n_labels, 0);
  std::vector<std::size_t> best_rank(n_labels, neighbors.size());
  for (std::size_t r = 0; r < neighbors.size(); ++r) {
    const int label = row_label_[neighbors[r].row];
    ++votes[label];
    best_rank[label] = std::min(best_rank[label], r);
  }
  int winner = -1;
  for (std::size_t c = 0; c < n_labels; ++c) {
    if (votes[c] == 0) continue;
    if (winner < 0 || votes[c] > votes[winner] ||
        (votes[c] == votes[winner] && best_rank[c] < best_rank[winner])) {
      winner = static_cast<int>(c);
    }
  }
  return winner;
}

std::string gender_knn_classify(const EmbeddingTable& table,
                                const LabelSet& census_labels,
                                const std::string& query, int k) {
  if (census_labels.kind() != LabelKind::kGender) {
    throw Error("gender classification needs gender labels");
  }
  const KnnClassifier classifier(table, census_labels, Role::kFirst);
  return census_labels.label_names()[classifier.classify(query, k)];
}

namespace {

F1Score score(std::size_t tp, std::size_t fp, std::size_t fn) {
  F1Score s;
  s.support = tp + fn;
  s.precision = tp + fp == 0 ? 0.0 : static_cast<double>(tp) / (tp + fp);
  s.recall = tp + fn == 0 ? 0.0 : static_cast<double>(tp) / (tp + fn);
  s.f1 = 2 * tp + fp + fn == 0
             ? 0.0
             : 2.0 * static_cast<double>(tp) / (2 * tp + fp + fn);
  return s;
}

std::size_t leaf_node(const Taxonomy& taxonomy, const std::string& label) {
  auto node = taxonomy.find(label);
  if (!node || !taxonomy.is_leaf(*node)) {
    throw Error("label is not a taxonomy leaf: " + label);
  }
  return *node;
}

}  // namespace

F1Report weighted_f1(const std::vector<std::string>& predictions,
                     const std::vector<std::string>& truth,
                     const Taxonomy& taxonomy) {
  if (predictions.size() != truth.size()) {
    throw Error("prediction and truth lengths differ");
  }
  const std::size_t n_nodes = taxonomy.node_count();
  std::vector<std::size_t> tp(n_nodes, 0), fp(n_nodes, 0), fn(n_nodes, 0);
  std::vector<bool> seen(n_nodes, false);
  for (std::size_t i = 0; i < truth.size(); ++i) {
    const std::size_t t = leaf_node(taxonomy, truth[i]);
    const std::size_t p = leaf_node(taxonomy, predictions[i]);
    seen[t] = seen[p] = true;
    // Every node on either path scores this record one-vs-rest.
    for (std::size_t node : taxonomy.path(t)) {
      if (taxonomy.within(p, node)) {
        ++tp[node];
      } else {
        ++fn[node];
      }
    }
    for (std::size_t node : taxonomy.path(p)) {
      if (!taxonomy.within(t, node)) ++fp[node];
    }
  }
  F1Report report;
  double weighted = 0.0;
  std::size_t total = 0;
  for (std::size_t node = 0; node < n_nodes; ++node) {
    if (taxonomy.is_leaf(node)) {
      if (!seen[node]) continue;
      const F1Score s = score(tp[node], fp[node], fn[node]);
      report.leaves[taxonomy.name(node)] = s;
      weighted += s.f1 * s.support;
      total += s.support;
    } else if (tp[node] + fp[node] + fn[node] > 0) {
      report.internal[taxonomy.name(node)] = score(tp[node], fp[node], fn[node]);
    }
  }
  report.weighted_average = total == 0 ? 0.0 : weighted / total;
  return report;
}

}  // namespace namecraft
