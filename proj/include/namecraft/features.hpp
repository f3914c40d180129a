#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "namecraft/death_record.hpp"
#include "namecraft/embedding_table.hpp"
#include "namecraft/evaluate.hpp"
#include "namecraft/labels.hpp"
#include "namecraft/naive_bayes.hpp"
#include "namecraft/ssa_areas.hpp"
#include "namecraft/taxonomy.hpp"

namespace namecraft {

enum Demographic : std::uint8_t {
  kBirthYear = 1 << 0,
  kState = 1 << 1,
  kGender = 1 << 2,
  kEthnicity = 1 << 3,
  kNationality = 1 << 4,
};
inline constexpr std::uint8_t kAllDemographics = 0x1f;

enum class EmbeddingMode { kNone, kShuffled, kEmail, kTwitter };

std::string_view embedding_mode_name(EmbeddingMode mode);  // NoEbd, ShEbd, ...
EmbeddingMode parse_embedding_mode(std::string_view name);

struct FeatureSpec {
  std::uint8_t flags = 0;
  EmbeddingMode embedding = EmbeddingMode::kNone;

  bool has(Demographic d) const { return (flags & d) != 0; }
  // e.g. "BSGEN+TwEbd", "-+NoEbd" for the empty subset.
  std::string name() const;
  friend bool operator==(const FeatureSpec&, const FeatureSpec&) = default;
};

// Flags as "BSGEN" letters; "all" and "none" are accepted.
std::uint8_t parse_flags(std::string_view letters);
std::string flags_name(std::uint8_t flags);

// All 32 subsets x 4 embedding modes, subsets in ascending bit order.
std::vector<FeatureSpec> all_feature_specs();

inline constexpr int kBirthYearSlots = 130;
inline constexpr int kGenderSlots = 2;
inline constexpr int kEthnicitySlots = 4;
inline constexpr int kNationalitySlots = 39;

// Demographic labels of one record, inferred once and reused by every spec.
struct RecordDemographics {
  std::optional<int> gender;       // index into {male, female}
  std::optional<int> ethnicity;    // index into {White, Black, API, Hispanic}
  std::optional<int> nationality;  // index into the nationality leaves
};

// Per-record demographic inference. Any member may be empty, in which case
// that block stays all-zero.
struct DemographicLabeler {
  std::function<std::optional<int>(const DeathRecord&)> gender;
  std::function<std::optional<int>(const DeathRecord&)> ethnicity;
  std::function<std::optional<int>(const DeathRecord&)> nationality;

  RecordDemographics infer(const DeathRecord& record) const;
  std::vector<RecordDemographics> infer_all(
      const std::vector<DeathRecord>& records) const;
};

// Direct lookups in label sets keyed by token (first names for gender, last
// names for ethnicity/nationality). Nationality labels are mapped onto the
// nationality taxonomy leaves by name.
std::function<std::optional<int>(const DeathRecord&)> lookup_labeler(
    const LabelSet& labels, Role role);
std::function<std::optional<int>(const DeathRecord&)> nationality_lookup_labeler(
    const LabelSet& labels, const Taxonomy& taxonomy = Taxonomy::nationality());

// kNN majority vote (memoized per token) over an embedding table.
std::function<std::optional<int>(const DeathRecord&)> knn_labeler(
    std::shared_ptr<const KnnClassifier> classifier, Role role, int k);
// Naive Bayes over concatenated first/last vectors; predicted leaf names are
// mapped onto taxonomy leaves.
std::function<std::optional<int>(const DeathRecord&)> nb_labeler(
    std::shared_ptr<const NbModel> model, const EmbeddingTable& table,
    const Taxonomy& taxonomy = Taxonomy::nationality());

struct FeatureLayout {
  int birth_year = -1;  // offsets, -1 when the block is absent
  int state = -1;
  int gender = -1;
  int ethnicity = -1;
  int nationality = -1;
  int state_missing = -1;
  int first_vector = -1;
  int last_vector = -1;
  int first_missing = -1;
  int last_missing = -1;
  int embedding_dim = 0;
  int demographic_width = 0;  // width of the one-hot demographic prefix
  int width = 0;
};

// Turns death records into feature vectors. Layout, in order: birth-year
// one-hot (130), state one-hot (59), gender (2), ethnicity (4), nationality
// (39) for each enabled block; then a state-missing flag when the state block
// is on; then, for embedding modes, first-name vector, last-name vector and
// one missing flag per part (out-of-vocabulary parts stay zero).
class Featurizer {
 public:
  struct Options {
    int birth_year_start = 0;
    const SsaAreaTable* ssa = &SsaAreaTable::builtin();
    const EmbeddingTable* twitter = nullptr;
    const EmbeddingTable* email = nullptr;
    std::uint64_t shuffle_seed = 0;
  };

  explicit Featurizer(Options options);

  // Smallest birth year among the records; the 130 slots start there.
  static int birth_year_start(const std::vector<DeathRecord>& records);

  FeatureLayout layout(const FeatureSpec& spec) const;
  std::vector<double> featurize(const DeathRecord& record,
                                const FeatureSpec& spec,
                                const RecordDemographics& demographics) const;
  // Writes one row into `out` (sized layout(spec).width, zero-filled).
  void featurize_into(std::span<double> out, const FeatureLayout& layout,
                      const DeathRecord& record, const FeatureSpec& spec,
                      const RecordDemographics& demographics) const;

  const EmbeddingTable* table_for(EmbeddingMode mode) const;
  // Row used for a token under a mode (the shuffled permutation for ShEbd).
  std::optional<std::size_t> embedding_row(EmbeddingMode mode,
                                           const std::string& key) const;
  const std::vector<std::size_t>& shuffle_permutation() const {
    return permutation_;
  }
  const Options& options() const { return options_; }

 private:
  Options options_;
  std::vector<std::size_t> permutation_;
};

}  // namespace namecraft
