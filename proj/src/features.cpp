#include "namecraft/features.hpp"

#include <algorithm>
#include <cctype>
#include <limits>
#include <numeric>
#include <unordered_map>

#include "namecraft/error.hpp"
#include "namecraft/random.hpp"

namespace namecraft {

std::string_view embedding_mode_name(EmbeddingMode mode) {
  switch (mode) {
    case EmbeddingMode::kNone:
      return "NoEbd";
    case EmbeddingMode::kShuffled:
      return "ShEbd";
    case EmbeddingMode::kEmail:
      return "EmEbd";
    case EmbeddingMode::kTwitter:
      return "TwEbd";
  }
  return "?";
}

EmbeddingMode parse_embedding_mode(std::string_view name) {
  for (EmbeddingMode m : {EmbeddingMode::kNone, EmbeddingMode::kShuffled,
                          EmbeddingMode::kEmail, EmbeddingMode::kTwitter}) {
    if (embedding_mode_name(m) == name) return m;
  }
  throw Error("unknown embedding mode: " + std::string(name));
}

namespace {
constexpr char kFlagLetters[] = "BSGEN";
}  // namespace

std::string flags_name(std::uint8_t flags) {
  std::string out;
  for (int i = 0; i < 5; ++i) {
    if (flags & (1 << i)) out += kFlagLetters[i];
  }
  return out.empty() ? "-" : out;
}

std::uint8_t parse_flags(std::string_view letters) {
  if (letters == "all") return kAllDemographics;
  if (letters == "none" || letters == "-") return 0;
  std::uint8_t flags = 0;
  for (char c : letters) {
    const char u = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
    const char* pos = std::find(kFlagLetters, kFlagLetters + 5, u);
    if (pos == kFlagLetters + 5) {
      throw Error("unknown demographic flag '" + std::string(1, c) +
                  "' (expected letters from BSGEN)");
    }
    flags |= static_cast<std::uint8_t>(1 << (pos - kFlagLetters));
  }
  return flags;
}

std::string FeatureSpec::name() const {
  return flags_name(flags) + "+" + std::string(embedding_mode_name(embedding));
}

std::vector<FeatureSpec> all_feature_specs() {
  std::vector<FeatureSpec> out;
  for (std::uint8_t flags = 0; flags <= kAllDemographics; ++flags) {
    for (EmbeddingMode m : {EmbeddingMode::kNone, EmbeddingMode::kShuffled,
                            EmbeddingMode::kEmail, EmbeddingMode::kTwitter}) {
      out.push_back({flags, m});
    }
  }
  return out;
}

RecordDemographics DemographicLabeler::infer(const DeathRecord& record) const {
  RecordDemographics d;
  if (gender) d.gender = gender(record);
  if (ethnicity) d.ethnicity = ethnicity(record);
  if (nationality) d.nationality = nationality(record);
  return d;
}

std::vector<RecordDemographics> DemographicLabeler::infer_all(
    const std::vector<DeathRecord>& records) const {
  std::vector<RecordDemographics> out;
  out.reserve(records.size());
  for (const auto& r : records) out.push_back(infer(r));
  return out;
}

namespace {

const NameToken& part(const DeathRecord& r, Role role) {
  return role == Role::kFirst ? r.first : r.last;
}

}  // namespace

std::function<std::optional<int>(const DeathRecord&)> lookup_labeler(
    const LabelSet& labels, Role role) {
  auto map = std::make_shared<std::unordered_map<std::string, int>>();
  for (const auto& [key, label] : labels.entries()) map->emplace(key, label);
  return [map, role](const DeathRecord& r) -> std::optional<int> {
    auto it = map->find(part(r, role).key());
    if (it == map->end()) return std::nullopt;
    return it->second;
  };
}

std::function<std::optional<int>(const DeathRecord&)> nationality_lookup_labeler(
    const LabelSet& labels, const Taxonomy& taxonomy) {
  const auto leaves = taxonomy.leaves();
  auto map = std::make_shared<std::unordered_map<std::string, int>>();
  for (const auto& [key, label] : labels.entries()) {
    const std::string& name = labels.label_names()[label];
    auto it = std::find(leaves.begin(), leaves.end(), name);
    if (it == leaves.end()) {
      throw Error("nationality label is not a taxonomy leaf: " + name);
    }
    map->emplace(key, static_cast<int>(it - leaves.begin()));
  }
  return [map](const DeathRecord& r) -> std::optional<int> {
    auto it = map->find(r.last.key());
    if (it == map->end()) return std::nullopt;
    return it->second;
  };
}

std::function<std::optional<int>(const DeathRecord&)> knn_labeler(
    std::shared_ptr<const KnnClassifier> classifier, Role role, int k) {
  auto memo = std::make_shared<std::unordered_map<std::string, std::optional<int>>>();
  return [classifier, role, k, memo](const DeathRecord& r) -> std::optional<int> {
    const std::string key = part(r, role).key();
    if (auto it = memo->find(key); it != memo->end()) return it->second;
    std::optional<int> label;
    try {
      label = classifier->classify(key, k);
    } catch (const Error&) {
      label = std::nullopt;  // out of vocabulary
    }
    memo->emplace(key, label);
    return label;
  };
}

std::function<std::optional<int>(const DeathRecord&)> nb_labeler(
    std::shared_ptr<const NbModel> model, const EmbeddingTable& table,
    const Taxonomy& taxonomy) {
  const auto leaves = taxonomy.leaves();
  std::vector<int> class_leaf;
  for (const auto& c : model->classes) {
    auto it = std::find(leaves.begin(), leaves.end(), c);
    class_leaf.push_back(it == leaves.end() ? -1 : static_cast<int>(it - leaves.begin()));
  }
  const EmbeddingTable* tab = &table;
  return [model, tab, class_leaf](const DeathRecord& r) -> std::optional<int> {
    if (!tab->vocab().find(r.first.key()) || !tab->vocab().find(r.last.key())) {
      return std::nullopt;
    }
    const int leaf = class_leaf[model->predict(full_name_vector(*tab, r.first, r.last))];
    if (leaf < 0) return std::nullopt;
    return leaf;
  };
}

Featurizer::Featurizer(Options options) : options_(options) {
  if (options_.ssa == nullptr) throw Error("featurizer needs an SSA area table");
  if (options_.twitter != nullptr) {
    permutation_.resize(options_.twitter->size());
    std::iota(permutation_.begin(), permutation_.end(), std::size_t{0});
    Rng rng(options_.shuffle_seed);
    rng.shuffle(permutation_.begin(), permutation_.end());
  }
}

int Featurizer::birth_year_start(const std::vector<DeathRecord>& records) {
  if (records.empty()) throw Error("no records");
  int lo = std::numeric_limits<int>::max();
  for (const auto& r : records) lo = std::min(lo, r.birth_year());
  return lo;
}

const EmbeddingTable* Featurizer::table_for(EmbeddingMode mode) const {
  switch (mode) {
    case EmbeddingMode::kNone:
      return nullptr;
    case EmbeddingMode::kShuffled:
    case EmbeddingMode::kTwitter:
      return options_.twitter;
    case EmbeddingMode::kEmail:
      return options_.email;
  }
  return nullptr;
}

std::optional<std::size_t> Featurizer::embedding_row(
    EmbeddingMode mode, const std::string& key) const {
  const EmbeddingTable* table = table_for(mode);
  if (table == nullptr) return std::nullopt;
  auto row = table->vocab().find(key);
  if (!row) return std::nullopt;
  if (mode == EmbeddingMode::kShuffled) return permutation_[*row];
  return row;
}

FeatureLayout Featurizer::layout(const FeatureSpec& spec) const {
  FeatureLayout l;
  int at = 0;
  if (spec.has(kBirthYear)) { l.birth_year = at; at += kBirthYearSlots; }
  if (spec.has(kState)) {
    l.state = at;
    at += static_cast<int>(options_.ssa->slot_count());
  }
  if (spec.has(kGender)) { l.gender = at; at += kGenderSlots; }
  if (spec.has(kEthnicity)) { l.ethnicity = at; at += kEthnicitySlots; }
  if (spec.has(kNationality)) { l.nationality = at; at += kNationalitySlots; }
  l.demographic_width = at;
  if (spec.has(kState)) l.state_missing = at++;
  if (spec.embedding != EmbeddingMode::kNone) {
    const EmbeddingTable* table = table_for(spec.embedding);
    if (table == nullptr) {
      throw Error("feature spec " + spec.name() +
                  " needs an embedding table that was not supplied");
    }
    l.embedding_dim = table->dim();
    l.first_vector = at;
    at += table->dim();
    l.last_vector = at;
    at += table->dim();
    l.first_missing = at++;
    l.last_missing = at++;
  }
  l.width = at;
  return l;
}

void Featurizer::featurize_into(std::span<double> out, const FeatureLayout& l,
                                const DeathRecord& record,
                                const FeatureSpec& spec,
                                const RecordDemographics& d) const {
  if (out.size() != static_cast<std::size_t>(l.width)) {
    throw Error("feature row has the wrong width");
  }
  if (l.birth_year >= 0) {
    const int slot = record.birth_year() - options_.birth_year_start;
    if (slot < 0 || slot >= kBirthYearSlots) {
      throw Error("birth year " + std::to_string(record.birth_year()) +
                  " outside the 130-year slot range starting at " +
                  std::to_string(options_.birth_year_start));
    }
    out[l.birth_year + slot] = 1.0;
  }
  if (l.state >= 0) {
    if (auto slot = options_.ssa->slot(record.ssn_area)) {
      out[l.state + *slot] = 1.0;
    } else {
      out[l.state_missing] = 1.0;
    }
  }
  if (l.gender >= 0 && d.gender) out[l.gender + *d.gender] = 1.0;
  if (l.ethnicity >= 0 && d.ethnicity) out[l.ethnicity + *d.ethnicity] = 1.0;
  if (l.nationality >= 0 && d.nationality) {
    out[l.nationality + *d.nationality] = 1.0;
  }
  if (l.first_vector >= 0) {
    const EmbeddingTable& table = *table_for(spec.embedding);
    auto place = [&](const NameToken& token, int offset, int missing) {
      auto row = embedding_row(spec.embedding, token.key());
      if (!row) {
        out[missing] = 1.0;
        return;
      }
      const auto v = table.input(*row);
      std::copy(v.begin(), v.end(), out.begin() + offset);
    };
    place(record.first, l.first_vector, l.first_missing);
    place(record.last, l.last_vector, l.last_missing);
  }
}

std::vector<double> Featurizer::featurize(const DeathRecord& record,
                                          const FeatureSpec& spec,
                                          const RecordDemographics& d) const {
  const FeatureLayout l = layout(spec);
  std::vector<double> out(static_cast<std::size_t>(l.width), 0.0);
  featurize_into(out, l, record, spec, d);
  return out;
}

}  // namespace namecraft
