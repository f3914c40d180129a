#include "namecraft/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <iomanip>
#include <mutex>
#include <numeric>
#include <ostream>
#include <thread>

#include "namecraft/error.hpp"
#include "namecraft/random.hpp"
#include "namecraft/seeds.hpp"

namespace namecraft {

void ExperimentConfig::validate() const {
  if (runs < 1) throw Error("runs must be >= 1");
  if (!(train_fraction > 0.0 && train_fraction < 1.0)) {
    throw Error("train fraction must lie in (0, 1)");
  }
  if (!(lambda >= 0.0)) throw Error("lambda must be >= 0");
  if (workers < 1) throw Error("workers must be >= 1");
  if (grid.empty()) throw Error("empty feature grid");
}

const SettingResult& ExperimentResult::at(const FeatureSpec& spec) const {
  for (const auto& s : settings) {
    if (s.spec == spec) return s;
  }
  throw Error("setting not in grid: " + spec.name());
}

std::vector<std::size_t> test_rows(std::size_t n, double train_fraction,
                                   std::uint64_t seed, int run) {
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  Rng rng(splitmix64(seed ^ splitmix64(static_cast<std::uint64_t>(run))));
  rng.shuffle(order.begin(), order.end());
  const auto n_train = static_cast<std::size_t>(
      std::floor(train_fraction * static_cast<double>(n)));
  std::vector<std::size_t> test(order.begin() + static_cast<std::ptrdiff_t>(n_train),
                                order.end());
  std::sort(test.begin(), test.end());
  return test;
}

Eigen::MatrixXd design_matrix(const std::vector<DeathRecord>& records,
                              const std::vector<RecordDemographics>& demographics,
                              const Featurizer& featurizer,
                              const FeatureSpec& spec) {
  if (demographics.size() != records.size()) {
    throw Error("one demographics entry per record is required");
  }
  const FeatureLayout layout = featurizer.layout(spec);
  // Row-major scratch so each record writes a contiguous span.
  Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor> rows =
      Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(records.size()), layout.width);
  for (std::size_t i = 0; i < records.size(); ++i) {
    std::span<double> row(rows.data() + i * static_cast<std::size_t>(layout.width),
                          static_cast<std::size_t>(layout.width));
    featurizer.featurize_into(row, layout, records[i], spec, demographics[i]);
  }
  return rows;
}

Eigen::VectorXd lifespans(const std::vector<DeathRecord>& records) {
  Eigen::VectorXd y(static_cast<Eigen::Index>(records.size()));
  for (std::size_t i = 0; i < records.size(); ++i) {
    y[static_cast<Eigen::Index>(i)] = records[i].lifespan();
  }
  return y;
}

namespace {

SettingResult run_setting(const std::vector<DeathRecord>& records,
                          const std::vector<RecordDemographics>& demographics,
                          const Featurizer& featurizer,
                          const ExperimentConfig& config, const FeatureSpec& spec,
                          const std::vector<std::vector<std::size_t>>& splits,
                          const Eigen::VectorXd& y) {
  const Eigen::MatrixXd X = design_matrix(records, demographics, featurizer, spec);
  const RidgeMoments full = RidgeMoments::of(X, y);
  SettingResult out;
  out.spec = spec;
  out.width = static_cast<int>(X.cols());
  for (const auto& test : splits) {
    RidgeMoments train = full;
    train -= RidgeMoments::of_rows(X, y, test);
    const RidgeModel model = fit_ridge(train, config.lambda);
    double abs_err = 0.0;
    for (std::size_t i : test) {
      const auto row = static_cast<Eigen::Index>(i);
      const double pred = X.row(row).dot(model.weights) + model.intercept;
      abs_err += std::abs(y[row] - pred);
    }
    out.mae.push_back(abs_err / static_cast<double>(test.size()));
  }
  out.mean_mae = mean(out.mae);
  return out;
}

}  // namespace

ExperimentResult run_experiment(const std::vector<DeathRecord>& records,
                                const std::vector<RecordDemographics>& demographics,
                                const Featurizer& featurizer,
                                const ExperimentConfig& config) {
  config.validate();
  if (records.size() < 2) throw Error("need at least two death records");
  std::vector<std::vector<std::size_t>> splits;
  for (int r = 0; r < config.runs; ++r) {
    splits.push_back(test_rows(records.size(), config.train_fraction, config.seed, r));
  }
  if (splits.front().empty() || splits.front().size() == records.size()) {
    throw Error("train fraction leaves an empty train or test set");
  }
  const Eigen::VectorXd y = lifespans(records);

  ExperimentResult result;
  result.settings.resize(config.grid.size());
  result.test_size = splits.front().size();
  result.train_size = records.size() - result.test_size;

  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto worker = [&] {
    for (std::size_t i = next++; i < config.grid.size(); i = next++) {
      const FeatureSpec& spec = config.grid[i];
      try {
        result.settings[i] =
            run_setting(records, demographics, featurizer, config, spec, splits, y);
      } catch (const std::exception& e) {
        std::lock_guard lock(failure_mutex);
        if (!failure) {
          failure = std::make_exception_ptr(
              Error("setting " + spec.name() + ": " + e.what()));
        }
        return;
      }
    }
  };
  const int n_workers =
      std::min<int>(config.workers, static_cast<int>(config.grid.size()));
  if (n_workers <= 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (int w = 0; w < n_workers; ++w) pool.emplace_back(worker);
  }
  if (failure) std::rethrow_exception(failure);
  return result;
}

std::vector<Comparison> compare_to_baseline(const ExperimentResult& result) {
  std::vector<Comparison> out;
  for (const auto& s : result.settings) {
    if (s.spec.embedding == EmbeddingMode::kNone) continue;
    const FeatureSpec base{s.spec.flags, EmbeddingMode::kNone};
    const auto it = std::find_if(result.settings.begin(), result.settings.end(),
                                 [&](const SettingResult& b) { return b.spec == base; });
    if (it == result.settings.end() || s.mae.size() < 2) continue;
    Comparison c;
    c.baseline = base;
    c.candidate = s.spec;
    c.mean_difference = it->mean_mae - s.mean_mae;
    try {
      c.welch = welch_t_test(it->mae, s.mae);
    } catch (const Error&) {
      // Zero spread across runs (e.g. a tiny record set); no test possible.
      c.welch = {std::nan(""), std::nan(""), std::nan("")};
    }
    out.push_back(c);
  }
  return out;
}

void write_grid_csv(std::ostream& out, const ExperimentResult& result) {
  const std::size_t runs = result.settings.empty() ? 0 : result.settings[0].mae.size();
  out << "flags,embedding,width,mean_mae";
  for (std::size_t r = 0; r < runs; ++r) out << ",run_" << r;
  out << '\n' << std::setprecision(17);
  for (const auto& s : result.settings) {
    out << flags_name(s.spec.flags) << ',' << embedding_mode_name(s.spec.embedding)
        << ',' << s.width << ',' << s.mean_mae;
    for (double m : s.mae) out << ',' << m;
    out << '\n';
  }
}

void write_significance_csv(std::ostream& out,
                            const std::vector<Comparison>& comparisons) {
  out << "flags,baseline,candidate,mean_difference,t,dof,p\n" << std::setprecision(10);
  for (const auto& c : comparisons) {
    out << flags_name(c.candidate.flags) << ','
        << embedding_mode_name(c.baseline.embedding) << ','
        << embedding_mode_name(c.candidate.embedding) << ',' << c.mean_difference
        << ',' << c.welch.t << ',' << c.welch.dof << ',' << c.welch.p << '\n';
  }
}

}  // namespace namecraft
