#include "namecraft/naive_bayes.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>

#include "namecraft/error.hpp"
#include "namecraft/random.hpp"

namespace namecraft {

std::vector<double> NbModel::joint_log_likelihood(
    std::span<const double> x) const {
  std::vector<double> out(classes.size());
  constexpr double kLog2Pi = 1.8378770664093454836;
  for (std::size_t c = 0; c < classes.size(); ++c) {
    if (x.size() != mean[c].size()) throw Error("feature dimension mismatch");
    double ll = log_prior[c];
    for (std::size_t j = 0; j < x.size(); ++j) {
      const double diff = x[j] - mean[c][j];
      ll -= 0.5 * (kLog2Pi + std::log(variance[c][j]) +
                   diff * diff / variance[c][j]);
    }
    out[c] = ll;
  }
  return out;
}

std::vector<double> NbModel::log_posterior(std::span<const double> x) const {
  std::vector<double> jll = joint_log_likelihood(x);
  const double top = *std::max_element(jll.begin(), jll.end());
  double sum = 0.0;
  for (double v : jll) sum += std::exp(v - top);
  const double norm = top + std::log(sum);
  for (double& v : jll) v -= norm;
  return jll;
}

std::size_t NbModel::predict(std::span<const double> x) const {
  const auto jll = joint_log_likelihood(x);
  return static_cast<std::size_t>(
      std::max_element(jll.begin(), jll.end()) - jll.begin());
}

NbModel fit_gaussian_nb(const std::vector<std::vector<double>>& features,
                        const std::vector<std::string>& labels,
                        double variance_floor) {
  if (features.size() != labels.size()) {
    throw Error("feature and label counts differ");
  }
  if (features.empty()) throw Error("naive Bayes needs training examples");
  if (!(variance_floor > 0.0)) throw Error("variance floor must be positive");
  std::map<std::string, std::vector<std::size_t>> by_class;
  for (std::size_t i = 0; i < labels.size(); ++i) {
    by_class[labels[i]].push_back(i);
  }
  const std::size_t dim = features.front().size();
  NbModel model;
  model.variance_floor = variance_floor;
  for (const auto& [label, members] : by_class) {
    if (members.size() < 2) {
      throw Error("class '" + label + "' has fewer than 2 training examples");
    }
    std::vector<double> mean(dim, 0.0), var(dim, 0.0);
    for (std::size_t i : members) {
      if (features[i].size() != dim) throw Error("ragged feature rows");
      for (std::size_t j = 0; j < dim; ++j) mean[j] += features[i][j];
    }
    for (double& m : mean) m /= members.size();
    for (std::size_t i : members) {
      for (std::size_t j = 0; j < dim; ++j) {
        const double d = features[i][j] - mean[j];
        var[j] += d * d;
      }
    }
    for (double& v : var) v = std::max(v / members.size(), variance_floor);
    model.classes.push_back(label);
    model.log_prior.push_back(
        std::log(static_cast<double>(members.size()) / labels.size()));
    model.mean.push_back(std::move(mean));
    model.variance.push_back(std::move(var));
  }
  return model;
}

std::vector<double> full_name_vector(const EmbeddingTable& table,
                                     const NameToken& first,
                                     const NameToken& last) {
  const auto f = table.vector(first.key());
  const auto l = table.vector(last.key());
  std::vector<double> out(f.begin(), f.end());
  out.insert(out.end(), l.begin(), l.end());
  return out;
}

NameFeatures full_name_features(const EmbeddingTable& table,
                                const std::vector<FullNameLabel>& labels) {
  NameFeatures out;
  for (const auto& label : labels) {
    if (!table.vocab().find(label.first.key()) ||
        !table.vocab().find(label.last.key())) {
      ++out.skipped;
      continue;
    }
    out.features.push_back(full_name_vector(table, label.first, label.last));
    out.labels.push_back(label.label);
  }
  return out;
}

namespace {

void check_leaves(const std::vector<FullNameLabel>& labels,
                  const Taxonomy& taxonomy) {
  for (const auto& label : labels) {
    auto node = taxonomy.find(label.label);
    if (!node || !taxonomy.is_leaf(*node)) {
      throw Error("label is not a taxonomy leaf: " + label.label);
    }
  }
}

}  // namespace

NbModel train_nationality_nb(const EmbeddingTable& table,
                             const std::vector<FullNameLabel>& labels,
                             const Taxonomy& taxonomy, std::size_t* skipped) {
  check_leaves(labels, taxonomy);
  NameFeatures data = full_name_features(table, labels);
  if (skipped != nullptr) *skipped = data.skipped;
  return fit_gaussian_nb(data.features, data.labels);
}

NationalityEvaluation evaluate_nationality(
    const EmbeddingTable& table, const std::vector<FullNameLabel>& labels,
    const Taxonomy& taxonomy, double train_fraction, std::uint64_t seed) {
  if (!(train_fraction > 0.0 && train_fraction < 1.0)) {
    throw Error("train fraction must lie in (0, 1)");
  }
  check_leaves(labels, taxonomy);
  const NameFeatures data = full_name_features(table, labels);
  std::map<std::string, std::vector<std::size_t>> by_leaf;
  for (std::size_t i = 0; i < data.labels.size(); ++i) {
    by_leaf[data.labels[i]].push_back(i);
  }
  Rng rng(seed);
  std::vector<std::size_t> train_idx, test_idx;
  for (auto& [leaf, members] : by_leaf) {
    rng.shuffle(members.begin(), members.end());
    const auto want = static_cast<std::size_t>(
        std::llround(train_fraction * static_cast<double>(members.size())));
    const std::size_t n_train = std::min(members.size(), std::max<std::size_t>(2, want));
    train_idx.insert(train_idx.end(), members.begin(), members.begin() + n_train);
    test_idx.insert(test_idx.end(), members.begin() + n_train, members.end());
  }
  std::vector<std::vector<double>> train_x;
  std::vector<std::string> train_y;
  for (std::size_t i : train_idx) {
    train_x.push_back(data.features[i]);
    train_y.push_back(data.labels[i]);
  }
  const NbModel model = fit_gaussian_nb(train_x, train_y);
  std::vector<std::string> predicted, truth;
  for (std::size_t i : test_idx) {
    predicted.push_back(model.predict_label(data.features[i]));
    truth.push_back(data.labels[i]);
  }
  NationalityEvaluation out;
  out.report = weighted_f1(predicted, truth, taxonomy);
  out.train_size = train_idx.size();
  out.test_size = test_idx.size();
  out.skipped = data.skipped;
  return out;
}

}  // namespace namecraft
