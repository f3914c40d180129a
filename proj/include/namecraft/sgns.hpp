#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "namecraft/alias_sampler.hpp"
#include "namecraft/corpus.hpp"
#include "namecraft/embedding_table.hpp"

namespace namecraft {

struct SgnsConfig {
  int window = 5;
  int negatives = 10;
  int epochs = 20;
  int dim = 100;
  int min_count = kDefaultMinCount;
  double initial_learning_rate = 0.025;
  double unigram_power = 0.75;
  std::uint64_t seed = 1;
  // 1 = deterministic single worker. More workers update the shared matrices
  // without coordination and give up bit-reproducibility.
  int workers = 1;

  void validate() const;
};

// 1 / (1 + e^-x), with x clamped to [-36, 36] so the result stays in (0, 1).
double sigmoid(double x);
// log(sigmoid(x)) evaluated without overflow.
double log_sigmoid(double x);

// The per-pair skip-gram objective
//   log σ(v_c · u_p) + Σ_i log σ(-v_c · u_i)
// for center input vector v_c, positive context output vector u_p and
// negative output vectors u_i.
double pair_objective(std::span<const double> center,
                      std::span<const double> positive,
                      const std::vector<std::span<const double>>& negatives);

struct PairGradient {
  std::vector<double> center;
  std::vector<double> positive;
  std::vector<std::vector<double>> negatives;
};

// Analytic gradient of pair_objective with respect to each argument.
PairGradient pair_gradient(
    std::span<const double> center, std::span<const double> positive,
    const std::vector<std::span<const double>>& negatives);

// Draws vocabulary rows with probability proportional to count^power.
class NegativeSampler {
 public:
  NegativeSampler(const Vocabulary& vocab, double power);
  std::size_t sample(Rng& rng) const { return alias_.sample(rng); }
  double probability(std::size_t row) const { return alias_.probability(row); }

 private:
  AliasSampler alias_;
};

struct TrainReport {
  std::uint64_t pairs_per_epoch = 0;
  // Mean per-pair objective, evaluated before each update, per epoch.
  std::vector<double> epoch_objective;
};

// Number of (center, context) pairs one pass over the corpus produces after
// out-of-vocabulary tokens are removed from each context.
std::uint64_t count_pairs(const TrainingCorpus& corpus, const Vocabulary& vocab,
                          int window);

// Negative draws that hit the pair's positive context row are skipped.
EmbeddingTable train(const TrainingCorpus& corpus, const SgnsConfig& config,
                     TrainReport* report = nullptr);

}  // namespace namecraft
