#include "namecraft/synth.hpp"

#include <chrono>
#include <cmath>
#include <iomanip>
#include <ostream>

#include "namecraft/error.hpp"
#include "namecraft/random.hpp"
#include "namecraft/seeds.hpp"
#include "namecraft/ssa_areas.hpp"
#include "namecraft/taxonomy.hpp"

namespace namecraft {

void SynthConfig::validate() const {
  if (n_groups < 2) throw Error("synth needs at least two groups");
  if (names_per_group < 1) throw Error("names_per_group must be >= 1");
  if (n_users < 1) throw Error("n_users must be >= 1");
  if (!(p_within >= 0.0 && p_within <= 1.0)) {
    throw Error("p_within must lie in [0, 1]");
  }
  if (context_len_range.first < 1 ||
      context_len_range.second < context_len_range.first) {
    throw Error("context length range must satisfy 1 <= min <= max");
  }
  for (const auto& [group, years] : lifespan_effects) {
    if (group < 0 || group >= n_groups) {
      throw Error("lifespan effect for unknown group " + std::to_string(group));
    }
    if (!std::isfinite(years)) throw Error("lifespan effects must be finite");
  }
  if (!(demographic_noise_sd >= 0.0) || !std::isfinite(demographic_noise_sd)) {
    throw Error("noise sd must be finite and >= 0");
  }
  if (n_records < 0) throw Error("n_records must be >= 0");
}

namespace {

std::string letters(int value, int width) {
  std::string out(static_cast<std::size_t>(width), 'a');
  for (int i = width - 1; i >= 0; --i) {
    out[static_cast<std::size_t>(i)] = static_cast<char>('a' + value % 26);
    value /= 26;
  }
  if (value != 0) throw Error("synthetic name index out of range");
  return out;
}

// Seeds of the independent generator streams.
std::uint64_t stream(std::uint64_t seed, std::string_view name) {
  return stage_seed(seed, name);
}

}  // namespace

std::string synth_name(int group, int index) {
  // Fixed widths keep names unique.
  return "n" + letters(group, 2) + "o" + letters(index, 3);
}

std::string synth_group_label(int group) { return "g" + std::to_string(group); }

SynthCorpus generate_corpus(const SynthConfig& config) {
  config.validate();
  if (config.names_per_group > 26 * 26 * 26 || config.n_groups > 26 * 26) {
    throw Error("synthetic name space exhausted");
  }
  SynthCorpus out;
  for (int g = 0; g < config.n_groups; ++g) {
    out.groups.label_index(synth_group_label(g));
  }
  for (int g = 0; g < config.n_groups; ++g) {
    for (int i = 0; i < config.names_per_group; ++i) {
      const std::string text = synth_name(g, i);
      out.groups.add(NameToken{text, Role::kFirst}.key(), g);
      out.groups.add(NameToken{text, Role::kLast}.key(), g);
    }
  }

  Rng rng(stream(config.seed, "synth.corpus"));
  std::vector<std::vector<std::size_t>> by_group(static_cast<std::size_t>(config.n_groups));
  for (int u = 0; u < config.n_users; ++u) {
    SynthUser user;
    user.group = static_cast<int>(rng.below(static_cast<std::uint64_t>(config.n_groups)));
    const auto per = static_cast<std::uint64_t>(config.names_per_group);
    user.first = {synth_name(user.group, static_cast<int>(rng.below(per))), Role::kFirst};
    user.last = {synth_name(user.group, static_cast<int>(rng.below(per))), Role::kLast};
    by_group[static_cast<std::size_t>(user.group)].push_back(out.users.size());
    out.users.push_back(std::move(user));
  }

  const auto [lo, hi] = config.context_len_range;
  for (std::size_t owner = 0; owner < out.users.size(); ++owner) {
    const int own = out.users[owner].group;
    const int len = lo + static_cast<int>(rng.below(static_cast<std::uint64_t>(hi - lo + 1)));
    Context context;
    std::vector<int> groups;
    for (int m = 0; m < len; ++m) {
      int g = own;
      if (rng.uniform() >= config.p_within) {
        g = static_cast<int>(rng.below(static_cast<std::uint64_t>(config.n_groups - 1)));
        if (g >= own) ++g;
      }
      const auto& pool = by_group[static_cast<std::size_t>(g)];
      // The owner never lists itself.
      const std::size_t candidates = pool.size() - (g == own ? 1 : 0);
      if (candidates == 0) continue;
      std::size_t pick = pool[rng.below(candidates)];
      if (g == own && pick == owner) pick = pool.back();
      context.push_back(out.users[pick].first);
      context.push_back(out.users[pick].last);
      groups.push_back(g);
    }
    if (out.corpus.add_context(std::move(context))) {
      out.owner_group.push_back(own);
      out.member_groups.push_back(std::move(groups));
    }
  }
  return out;
}

SynthRecords generate_death_records(const SynthConfig& config) {
  config.validate();
  SynthRecords out;
  out.effect.assign(static_cast<std::size_t>(config.n_groups), 0.0);
  for (const auto& [group, years] : config.lifespan_effects) {
    out.effect[static_cast<std::size_t>(group)] = years;
  }

  // Demographic truth first, from its own stream, so it does not depend on
  // the number of records.
  {
    Rng rng(stream(config.seed, "synth.demographics"));
    const auto leaves = Taxonomy::nationality().leaves();
    for (int g = 0; g < config.n_groups; ++g) {
      for (int i = 0; i < config.names_per_group; ++i) {
        const std::string text = synth_name(g, i);
        const std::string first = NameToken{text, Role::kFirst}.key();
        const std::string last = NameToken{text, Role::kLast}.key();
        out.gender.add(first, static_cast<int>(rng.below(2)));
        out.ethnicity.add(last, static_cast<int>(rng.below(4)));
        out.nationality.add(last, leaves[rng.below(leaves.size())]);
      }
    }
  }

  const std::vector<std::string> areas = SsaAreaTable::builtin().assigned_areas();
  Rng rng(stream(config.seed, "synth.records"));
  const auto groups = static_cast<std::uint64_t>(config.n_groups);
  const auto per = static_cast<std::uint64_t>(config.names_per_group);
  out.records.reserve(static_cast<std::size_t>(config.n_records));
  for (int i = 0; i < config.n_records; ++i) {
    const int fg = static_cast<int>(rng.below(groups));
    const int fi = static_cast<int>(rng.below(per));
    const int lg = static_cast<int>(rng.below(groups));
    const int li = static_cast<int>(rng.below(per));
    const int year = config.birth_year_start +
                     static_cast<int>(rng.below(kSynthBirthYears));
    const std::chrono::sys_days jan1{std::chrono::year{year} / 1 / 1};
    const std::chrono::sys_days next{std::chrono::year{year + 1} / 1 / 1};
    const auto year_days = static_cast<std::uint64_t>((next - jan1).count());
    const std::chrono::sys_days birth =
        jan1 + std::chrono::days{static_cast<int>(rng.below(year_days))};
    const double noise = config.demographic_noise_sd * rng.normal();
    const double years = std::max(
        0.0, config.base(year) + out.effect[static_cast<std::size_t>(lg)] + noise);
    const std::chrono::sys_days death =
        birth + std::chrono::days{static_cast<int>(std::lround(years * kDaysPerYear))};

    DeathRecord r;
    r.first = {synth_name(fg, fi), Role::kFirst};
    r.last = {synth_name(lg, li), Role::kLast};
    r.birth = std::chrono::year_month_day{birth};
    r.death = std::chrono::year_month_day{death};
    r.ssn_area = areas[rng.below(areas.size())];
    out.records.push_back(std::move(r));
    out.first_group.push_back(fg);
    out.last_group.push_back(lg);
  }
  return out;
}

void write_effects_csv(std::ostream& out, const std::vector<double>& effect) {
  out << "group,effect\n" << std::setprecision(17);
  for (std::size_t g = 0; g < effect.size(); ++g) {
    out << synth_group_label(static_cast<int>(g)) << ',' << effect[g] << '\n';
  }
}

}  // namespace namecraft
