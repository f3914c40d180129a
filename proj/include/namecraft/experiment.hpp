#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "namecraft/death_record.hpp"
#include "namecraft/features.hpp"
#include "namecraft/ridge.hpp"
#include "namecraft/stats.hpp"

namespace namecraft {

struct ExperimentConfig {
  int runs = 20;
  double train_fraction = 0.9;
  double lambda = kDefaultLambda;
  std::uint64_t seed = 1;
  int workers = 1;
  std::vector<FeatureSpec> grid = all_feature_specs();

  void validate() const;
};

struct SettingResult {
  FeatureSpec spec;
  std::vector<double> mae;  // one per run
  double mean_mae = 0.0;
  int width = 0;
};

struct ExperimentResult {
  std::vector<SettingResult> settings;  // grid order
  std::size_t train_size = 0;
  std::size_t test_size = 0;

  // Throws when the spec was not part of the grid.
  const SettingResult& at(const FeatureSpec& spec) const;
};

// Held-out rows of run r. Splits depend only on (seed, r, n), so every
// setting of a grid sees the same partitions.
std::vector<std::size_t> test_rows(std::size_t n, double train_fraction,
                                   std::uint64_t seed, int run);

// Dense design matrix of the records under one spec.
Eigen::MatrixXd design_matrix(const std::vector<DeathRecord>& records,
                              const std::vector<RecordDemographics>& demographics,
                              const Featurizer& featurizer,
                              const FeatureSpec& spec);
Eigen::VectorXd lifespans(const std::vector<DeathRecord>& records);

// Fits every grid setting on `runs` random splits and reports test MAE.
// Settings run in parallel; each result lands in its own slot, so the output
// does not depend on the worker count.
ExperimentResult run_experiment(const std::vector<DeathRecord>& records,
                                const std::vector<RecordDemographics>& demographics,
                                const Featurizer& featurizer,
                                const ExperimentConfig& config);

struct Comparison {
  FeatureSpec baseline;
  FeatureSpec candidate;
  double mean_difference = 0.0;  // baseline MAE - candidate MAE
  WelchResult welch;
};

// Each embedding setting against the NoEbd setting with the same flags.
std::vector<Comparison> compare_to_baseline(const ExperimentResult& result);

// "flags,embedding,width,mean_mae,run_0,...".
void write_grid_csv(std::ostream& out, const ExperimentResult& result);
// "flags,baseline,candidate,mean_difference,t,dof,p".
void write_significance_csv(std::ostream& out,
                            const std::vector<Comparison>& comparisons);

}  // namespace namecraft
