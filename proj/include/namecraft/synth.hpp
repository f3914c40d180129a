#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "namecraft/corpus.hpp"
#include "namecraft/death_record.hpp"
#include "namecraft/labels.hpp"

namespace namecraft {

struct SynthConfig {
  int n_groups = 4;
  int names_per_group = 50;
  int n_users = 5000;
  // Chance that a context member comes from the owner's group; otherwise the
  // member's group is uniform over the other groups.
  double p_within = 0.9;
  std::pair<int, int> context_len_range{5, 20};  // members, inclusive
  // Lifespan shift in years, keyed by the group of the record's last name.
  std::map<int, double> lifespan_effects;
  double demographic_noise_sd = 5.0;
  std::uint64_t seed = 1;

  int n_records = 50000;
  int birth_year_start = 1880;  // birth years cover 130 years from here
  double base_lifespan = 78.0;  // at birth_year_start
  double lifespan_slope = -0.05;  // years per birth year

  void validate() const;
  // Expected lifespan before effects and noise.
  double base(int birth_year) const {
    return base_lifespan + lifespan_slope * (birth_year - birth_year_start);
  }
};

inline constexpr int kSynthBirthYears = 130;

// Letters-only name of a group member, so it survives normalization intact.
std::string synth_name(int group, int index);
std::string synth_group_label(int group);  // "g0", "g1", ...

struct SynthUser {
  NameToken first;
  NameToken last;
  int group = 0;
};

struct SynthCorpus {
  TrainingCorpus corpus;
  // Group of every name token (both roles) that the generator can emit.
  LabelSet groups{LabelKind::kCustom};
  std::vector<SynthUser> users;
  // Per context: the owner's group and each member's group.
  std::vector<int> owner_group;
  std::vector<std::vector<int>> member_groups;
};

// One context per user: its members' first and last names, interleaved.
SynthCorpus generate_corpus(const SynthConfig& config);

struct SynthRecords {
  std::vector<DeathRecord> records;
  std::vector<int> first_group;
  std::vector<int> last_group;
  std::vector<double> effect;  // per group, years
  // Per-token demographic truth, drawn independently of the groups: gender
  // for first names, ethnicity and nationality leaf for last names.
  LabelSet gender{LabelKind::kGender};
  LabelSet ethnicity{LabelKind::kEthnicity};
  LabelSet nationality{LabelKind::kNationality};
};

// lifespan = base(birth year) + effect(last-name group) + N(0, noise_sd²).
// First and last name groups are drawn independently and uniformly.
SynthRecords generate_death_records(const SynthConfig& config);

// "group,effect" rows.
void write_effects_csv(std::ostream& out, const std::vector<double>& effect);

}  // namespace namecraft
