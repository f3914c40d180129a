#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "namecraft/death_record.hpp"
#include "namecraft/embedding_table.hpp"
#include "namecraft/features.hpp"
#include "namecraft/ridge.hpp"

namespace namecraft {

// Stage 1 (demographic model) fits lifespans on demographic features; stage 2
// (residual model) fits the stage-1 residuals on [first vector][last vector].
struct ResidualModel {
  RidgeModel demographic;
  RidgeModel residual;
  std::uint8_t demographic_flags = kAllDemographics;
  const EmbeddingTable* table = nullptr;
  int dim = 0;
  // Training-set residual mean, ~0 because stage 1 has an intercept.
  double residual_mean = 0.0;

  std::span<const double> slot_weights(Role role) const;
};

// Embedding block of a record: the two input vectors, zero for
// out-of-vocabulary parts.
void embedding_features(const EmbeddingTable& table, const DeathRecord& record,
                        std::span<double> out);

// `featurizer` supplies the demographic block; its embedding tables are not
// used. Stage 2 always uses `table`.
ResidualModel fit_residual(const std::vector<DeathRecord>& records,
                           const std::vector<RecordDemographics>& demographics,
                           const Featurizer& featurizer,
                           const EmbeddingTable& table,
                           std::uint8_t demographic_flags = kAllDemographics,
                           double lambda = kDefaultLambda);

// w_r restricted to the role's slot, dotted with the vector.
double vector_gain(const ResidualModel& model, Role role,
                   std::span<const double> vector);
// Throws naming the token when it is out of vocabulary.
double name_gain(const ResidualModel& model, const NameToken& token);

struct NameGain {
  NameToken token;
  double gain = 0.0;
  std::size_t count = 0;
};

struct RankedNames {
  std::vector<NameGain> favorable;    // gain desc, then key asc
  std::vector<NameGain> unfavorable;  // gain asc, then key asc
  std::size_t eligible = 0;           // names passing the count filter
};

struct RankOptions {
  std::size_t min_count = 5000;
  int birth_from = 1880;  // inclusive
  int birth_to = 1910;    // inclusive
  std::size_t top_n = 20;
};

// Counts name parts of one role among records born in the range; names seen
// fewer than min_count times or missing from the table are left out.
RankedNames rank_names(const ResidualModel& model,
                       const std::vector<DeathRecord>& records, Role role,
                       const RankOptions& options = {});

using NamePair = std::pair<NameToken, NameToken>;  // (diminutive, formal)

// "diminutive,formal" rows of first names; '#' comments and the header row are
// skipped.
std::vector<NamePair> read_name_pairs(std::istream& in);
std::vector<NamePair> read_name_pairs(const std::string& path);
// The shipped list of 155 English diminutive/formal pairs.
const std::vector<NamePair>& builtin_diminutive_pairs();

struct SignTestResult {
  std::size_t pairs_total = 0;
  std::size_t pairs_used = 0;  // in vocabulary and not tied
  std::size_t formal_wins = 0;
  std::size_t ties = 0;
  std::vector<NamePair> out_of_vocabulary;
  double win_fraction = 0.0;
  double p_value = 1.0;  // exact two-sided binomial, p0 = 1/2
};

// A pair favors the formal name when gain(formal) > gain(diminutive). Tied
// gains are dropped. Throws when no pair is usable.
SignTestResult diminutive_sign_test(const ResidualModel& model,
                                    const std::vector<NamePair>& pairs);

// "token,count,gain" rows.
void write_ranked_csv(std::ostream& out, const std::vector<NameGain>& names);

}  // namespace namecraft
