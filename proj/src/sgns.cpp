#include "namecraft/sgns.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <thread>

#include "namecraft/error.hpp"

namespace namecraft {

void SgnsConfig::validate() const {
  if (window < 1) throw Error("window must be >= 1");
  if (negatives < 1) throw Error("negatives must be >= 1");
  if (epochs < 1) throw Error("epochs must be >= 1");
  if (dim < 1) throw Error("dim must be >= 1");
  if (min_count < 1) throw Error("min_count must be >= 1");
  if (!(initial_learning_rate > 0.0) || !std::isfinite(initial_learning_rate))
    throw Error("initial learning rate must be positive");
  if (!std::isfinite(unigram_power)) throw Error("unigram power must be finite");
  if (workers < 1) throw Error("workers must be >= 1");
}

namespace {
constexpr double kSigmoidClamp = 36.0;
constexpr double kFinalRateFraction = 1e-4;
}  // namespace

double sigmoid(double x) {
  x = std::clamp(x, -kSigmoidClamp, kSigmoidClamp);
  return 1.0 / (1.0 + std::exp(-x));
}

double log_sigmoid(double x) {
  if (x >= 0.0) return -std::log1p(std::exp(-x));
  return x - std::log1p(std::exp(x));
}

namespace {

double dot(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

}  // namespace

double pair_objective(std::span<const double> center,
                      std::span<const double> positive,
                      const std::vector<std::span<const double>>& negatives) {
  double obj = log_sigmoid(dot(center, positive));
  for (const auto& neg : negatives) obj += log_sigmoid(-dot(center, neg));
  return obj;
}

PairGradient pair_gradient(
    std::span<const double> center, std::span<const double> positive,
    const std::vector<std::span<const double>>& negatives) {
  const std::size_t d = center.size();
  PairGradient g;
  g.center.assign(d, 0.0);
  // d/dx log σ(x) = 1 - σ(x);  d/dx log σ(-x) = -σ(x).
  const double gp = 1.0 - sigmoid(dot(center, positive));
  g.positive.resize(d);
  for (std::size_t j = 0; j < d; ++j) {
    g.center[j] += gp * positive[j];
    g.positive[j] = gp * center[j];
  }
  for (const auto& neg : negatives) {
    const double gn = -sigmoid(dot(center, neg));
    std::vector<double> gneg(d);
    for (std::size_t j = 0; j < d; ++j) {
      g.center[j] += gn * neg[j];
      gneg[j] = gn * center[j];
    }
    g.negatives.push_back(std::move(gneg));
  }
  return g;
}

NegativeSampler::NegativeSampler(const Vocabulary& vocab, double power) {
  if (vocab.empty()) throw Error("negative sampling needs a non-empty vocabulary");
  std::vector<double> weights(vocab.size());
  for (std::size_t i = 0; i < vocab.size(); ++i) {
    weights[i] = std::pow(static_cast<double>(vocab.count(i)), power);
  }
  alias_ = AliasSampler(weights);
}

namespace {

std::vector<std::vector<std::uint32_t>> index_contexts(
    const TrainingCorpus& corpus, const Vocabulary& vocab) {
  std::vector<std::vector<std::uint32_t>> out;
  out.reserve(corpus.contexts().size());
  for (const auto& context : corpus.contexts()) {
    std::vector<std::uint32_t> rows;
    rows.reserve(context.size());
    for (const auto& token : context) {
      if (auto row = vocab.find(token.key())) {
        rows.push_back(static_cast<std::uint32_t>(*row));
      }
    }
    if (rows.size() >= 2) out.push_back(std::move(rows));
  }
  return out;
}

std::uint64_t pairs_in(std::size_t len, int window) {
  std::uint64_t n = 0;
  const auto w = static_cast<std::size_t>(window);
  for (std::size_t i = 0; i < len; ++i) {
    n += std::min(i, w) + std::min(len - 1 - i, w);
  }
  return n;
}

// Vector kernels. The deterministic path uses plain loops over restrict
// parameters so they vectorize; the concurrent path goes through relaxed
// atomics (lost updates are tolerated, torn values are not).
struct PlainAccess {
  static void copy(double* __restrict dst, const double* __restrict src, int dim) {
    for (int j = 0; j < dim; ++j) dst[j] = src[j];
  }
  static double dot(const double* __restrict a, const double* __restrict u,
                    int dim) {
    // Four independent sums; a single accumulator would serialize the adds.
    double s0 = 0.0, s1 = 0.0, s2 = 0.0, s3 = 0.0;
    int j = 0;
    for (; j + 4 <= dim; j += 4) {
      s0 += a[j] * u[j];
      s1 += a[j + 1] * u[j + 1];
      s2 += a[j + 2] * u[j + 2];
      s3 += a[j + 3] * u[j + 3];
    }
    for (; j < dim; ++j) s0 += a[j] * u[j];
    return (s0 + s1) + (s2 + s3);
  }
  // y += a * x
  static void axpy(double* __restrict y, double a, const double* __restrict x,
                   int dim) {
    for (int j = 0; j < dim; ++j) y[j] += a * x[j];
  }
};

struct SharedAccess {
  static double load(const double& x) {
    return std::atomic_ref<double>(const_cast<double&>(x))
        .load(std::memory_order_relaxed);
  }
  static void add(double& x, double delta) {
    std::atomic_ref<double> ref(x);
    ref.store(ref.load(std::memory_order_relaxed) + delta,
              std::memory_order_relaxed);
  }
  static void copy(double* dst, const double* src, int dim) {
    for (int j = 0; j < dim; ++j) dst[j] = load(src[j]);
  }
  static double dot(const double* a, const double* u, int dim) {
    double s = 0.0;
    for (int j = 0; j < dim; ++j) s += a[j] * load(u[j]);
    return s;
  }
  // y += a * x; only y may be shared.
  static void axpy(double* y, double a, const double* x, int dim) {
    for (int j = 0; j < dim; ++j) add(y[j], a * x[j]);
  }
  static void axpy_from_shared(double* y, double a, const double* x, int dim) {
    for (int j = 0; j < dim; ++j) y[j] += a * load(x[j]);
  }
};

struct Scratch {
  std::vector<double> center;
  std::vector<double> grad;
  std::vector<double> coef;
  std::vector<double*> targets;
};

// σ(f) plus log σ(f) and log σ(-f) from a single exponential.
struct SigmoidTerms {
  double sigma;
  double log_pos;
  double log_neg;
};

SigmoidTerms sigmoid_terms(double f) {
  const double e = std::exp(-std::abs(f));
  const double l = std::log1p(e);
  // Same clamp as sigmoid().
  const double ec = std::abs(f) > kSigmoidClamp ? std::exp(-kSigmoidClamp) : e;
  const double sigma = f >= 0.0 ? 1.0 / (1.0 + ec) : ec / (1.0 + ec);
  if (f >= 0.0) return {sigma, -l, -f - l};
  return {sigma, f - l, -l};
}

// One ascent step on the pair objective. targets[0] is the positive context
// row, the rest are negatives. All gradients are taken at the current state
// before any row moves. Returns the objective at that state.
template <typename Access>
double ascend_pair(double* center, Scratch& s, int dim, double rate) {
  double* cen = s.center.data();
  double* grad = s.grad.data();
  Access::copy(cen, center, dim);
  std::fill(s.grad.begin(), s.grad.end(), 0.0);
  double objective = 0.0;
  const std::size_t n = s.targets.size();
  for (std::size_t t = 0; t < n; ++t) {
    const double* u = s.targets[t];
    const SigmoidTerms st = sigmoid_terms(Access::dot(cen, u, dim));
    if (t == 0) {
      objective += st.log_pos;
      s.coef[t] = 1.0 - st.sigma;
    } else {
      objective += st.log_neg;
      s.coef[t] = -st.sigma;
    }
    if constexpr (std::is_same_v<Access, SharedAccess>) {
      Access::axpy_from_shared(grad, s.coef[t], u, dim);
    } else {
      Access::axpy(grad, s.coef[t], u, dim);
    }
  }
  for (std::size_t t = 0; t < n; ++t) {
    Access::axpy(s.targets[t], rate * s.coef[t], cen, dim);
  }
  Access::axpy(center, rate, grad, dim);
  return objective;
}

struct EpochTotals {
  double objective = 0.0;
  std::uint64_t pairs = 0;
};

template <typename Access>
EpochTotals run_shard(EmbeddingTable& table,
                      const std::vector<std::vector<std::uint32_t>>& contexts,
                      std::size_t begin, std::size_t end,
                      const NegativeSampler& sampler, const SgnsConfig& config,
                      Rng& rng, std::atomic<std::uint64_t>& processed,
                      std::uint64_t total_pairs) {
  const int dim = config.dim;
  Scratch s;
  s.center.resize(dim);
  s.grad.resize(dim);
  s.coef.resize(static_cast<std::size_t>(config.negatives) + 1);
  s.targets.reserve(static_cast<std::size_t>(config.negatives) + 1);
  const double init = config.initial_learning_rate;
  const double total = static_cast<double>(std::max<std::uint64_t>(total_pairs, 1));
  double* in = table.input_data().data();
  double* out = table.output_data().data();

  EpochTotals totals;
  std::uint64_t local_done = 0;
  std::uint64_t done = processed.load(std::memory_order_relaxed);
  for (std::size_t c = begin; c < end; ++c) {
    const auto& rows = contexts[c];
    const auto len = static_cast<std::ptrdiff_t>(rows.size());
    for (std::ptrdiff_t i = 0; i < len; ++i) {
      const std::ptrdiff_t lo = std::max<std::ptrdiff_t>(0, i - config.window);
      const std::ptrdiff_t hi = std::min<std::ptrdiff_t>(len - 1, i + config.window);
      for (std::ptrdiff_t p = lo; p <= hi; ++p) {
        if (p == i) continue;
        const double progress = static_cast<double>(done + local_done) / total;
        const double rate =
            init * std::max(kFinalRateFraction,
                            1.0 - (1.0 - kFinalRateFraction) * progress);
        s.targets.clear();
        s.targets.push_back(out + static_cast<std::size_t>(rows[p]) * dim);
        for (int k = 1; k <= config.negatives; ++k) {
          // A draw of the positive row itself is discarded, as in word2vec.
          const std::size_t r = sampler.sample(rng);
          if (r != rows[p]) s.targets.push_back(out + r * dim);
        }
        totals.objective += ascend_pair<Access>(
            in + static_cast<std::size_t>(rows[i]) * dim, s, dim, rate);
        ++totals.pairs;
        ++local_done;
      }
    }
    // Publish progress per context so concurrent workers share the schedule.
    if constexpr (std::is_same_v<Access, SharedAccess>) {
      done = processed.fetch_add(local_done, std::memory_order_relaxed) +
             local_done;
      local_done = 0;
    }
  }
  processed.fetch_add(local_done, std::memory_order_relaxed);
  return totals;
}

}  // namespace

std::uint64_t count_pairs(const TrainingCorpus& corpus, const Vocabulary& vocab,
                          int window) {
  std::uint64_t n = 0;
  for (const auto& rows : index_contexts(corpus, vocab)) {
    n += pairs_in(rows.size(), window);
  }
  return n;
}

EmbeddingTable train(const TrainingCorpus& corpus, const SgnsConfig& config,
                     TrainReport* report) {
  config.validate();
  Vocabulary vocab = Vocabulary::build(corpus, config.min_count);
  if (vocab.empty()) {
    throw Error("vocabulary is empty after applying min_count " +
                std::to_string(config.min_count));
  }
  const NegativeSampler sampler(vocab, config.unigram_power);
  const auto contexts = index_contexts(corpus, vocab);

  EmbeddingTable table(std::move(vocab), config.dim);
  Rng init_rng(config.seed);
  for (double& v : table.input_data()) {
    v = (init_rng.uniform() - 0.5) / config.dim;
  }

  std::uint64_t per_epoch = 0;
  for (const auto& rows : contexts) per_epoch += pairs_in(rows.size(), config.window);
  const std::uint64_t total_pairs =
      per_epoch * static_cast<std::uint64_t>(config.epochs);

  TrainReport local_report;
  local_report.pairs_per_epoch = per_epoch;
  std::atomic<std::uint64_t> processed{0};
  Rng rng(config.seed ^ 0x9e3779b97f4a7c15ULL);

  for (int epoch = 0; epoch < config.epochs; ++epoch) {
    EpochTotals totals;
    if (config.workers == 1) {
      totals = run_shard<PlainAccess>(table, contexts, 0, contexts.size(),
                                      sampler, config, rng, processed,
                                      total_pairs);
    } else {
      const auto workers = static_cast<std::size_t>(config.workers);
      std::vector<EpochTotals> parts(workers);
      std::vector<std::thread> threads;
      for (std::size_t w = 0; w < workers; ++w) {
        const std::size_t begin = contexts.size() * w / workers;
        const std::size_t end = contexts.size() * (w + 1) / workers;
        threads.emplace_back([&, w, begin, end] {
          Rng worker_rng(config.seed + 0x632be59bd9b4e019ULL *
                                           (epoch * workers + w + 1));
          parts[w] = run_shard<SharedAccess>(table, contexts, begin, end,
                                             sampler, config, worker_rng,
                                             processed, total_pairs);
        });
      }
      for (auto& t : threads) t.join();
      for (const auto& p : parts) {
        totals.objective += p.objective;
        totals.pairs += p.pairs;
      }
    }
    if (!table.all_finite()) {
      throw Error("non-finite embedding entries after epoch " +
                  std::to_string(epoch + 1));
    }
    local_report.epoch_objective.push_back(
        totals.pairs == 0 ? 0.0 : totals.objective / totals.pairs);
  }
  if (report != nullptr) *report = std::move(local_report);
  return table;
}

}  // namespace namecraft
