#include <cmath>
#include <set>
#include <sstream>

#include "doctest.h"
#include "namecraft/error.hpp"
#include "namecraft/ssa_areas.hpp"
#include "namecraft/synth.hpp"

using namespace namecraft;

TEST_CASE("synthetic names survive normalization") {
  CHECK(synth_name(0, 0) == "naaoaaa");
  CHECK(synth_name(1, 27) == "naboabb");
  for (int g = 0; g < 30; g += 7) {
    for (int i = 0; i < 800; i += 13) {
      const std::string n = synth_name(g, i);
      const auto parts = normalize_tokens(n);
      REQUIRE(parts.size() == 1);
      REQUIRE(parts[0] == n);
    }
  }
  CHECK(synth_group_label(3) == "g3");
}

TEST_CASE("config validation") {
  SynthConfig c;
  c.p_within = 1.5;
  CHECK_THROWS_AS(generate_corpus(c), Error);
  c = {};
  c.n_groups = 1;
  CHECK_THROWS_AS(generate_corpus(c), Error);
  c = {};
  c.lifespan_effects = {{7, 1.0}};
  CHECK_THROWS_AS(generate_death_records(c), Error);
  c = {};
  c.lifespan_effects = {{0, std::nan("")}};
  CHECK_THROWS_AS(generate_death_records(c), Error);
  c = {};
  c.context_len_range = {5, 2};
  CHECK_THROWS_AS(generate_corpus(c), Error);
}

TEST_CASE("p_within = 1 gives single-group contexts") {
  SynthConfig c;
  c.p_within = 1.0;
  c.n_users = 500;
  const SynthCorpus s = generate_corpus(c);
  REQUIRE(s.corpus.contexts().size() == s.member_groups.size());
  for (const auto& ctx : s.corpus.contexts()) {
    std::set<int> groups;
    for (const auto& t : ctx) groups.insert(*s.groups.label_of(t.key()));
    REQUIRE(groups.size() == 1);
  }
}

TEST_CASE("contexts interleave first and last names of other users") {
  SynthConfig c;
  c.n_users = 300;
  const SynthCorpus s = generate_corpus(c);
  REQUIRE(s.users.size() == 300);
  for (std::size_t i = 0; i < s.corpus.contexts().size(); ++i) {
    const auto& ctx = s.corpus.contexts()[i];
    REQUIRE(ctx.size() % 2 == 0);
    REQUIRE(ctx.size() / 2 >= static_cast<std::size_t>(c.context_len_range.first));
    REQUIRE(ctx.size() / 2 <= static_cast<std::size_t>(c.context_len_range.second));
    for (std::size_t m = 0; m < ctx.size(); m += 2) {
      REQUIRE(ctx[m].role == Role::kFirst);
      REQUIRE(ctx[m + 1].role == Role::kLast);
      REQUIRE(*s.groups.label_of(ctx[m].key()) == s.member_groups[i][m / 2]);
    }
  }
}

TEST_CASE("within-group fraction tracks p_within") {
  for (double p : {0.25, 0.6, 0.9}) {
    SynthConfig c;
    c.p_within = p;
    const SynthCorpus s = generate_corpus(c);
    std::size_t within = 0, total = 0;
    for (std::size_t i = 0; i < s.member_groups.size(); ++i) {
      for (int g : s.member_groups[i]) {
        within += g == s.owner_group[i];
        ++total;
      }
    }
    const double frac = static_cast<double>(within) / total;
    const double sigma = std::sqrt(p * (1 - p) / total);
    CHECK(std::fabs(frac - p) <= 3 * sigma);
  }
}

TEST_CASE("generators are deterministic per seed") {
  SynthConfig c;
  c.n_users = 400;
  c.n_records = 2000;
  const SynthCorpus a = generate_corpus(c);
  const SynthCorpus b = generate_corpus(c);
  CHECK(a.corpus.contexts() == b.corpus.contexts());
  const SynthRecords ra = generate_death_records(c);
  const SynthRecords rb = generate_death_records(c);
  std::ostringstream wa, wb;
  write_death_records(wa, ra.records);
  write_death_records(wb, rb.records);
  CHECK(wa.str() == wb.str());
  CHECK(ra.gender.entries() == rb.gender.entries());
  c.seed = 2;
  CHECK(generate_corpus(c).corpus.contexts() != a.corpus.contexts());
}

TEST_CASE("records are valid and carry the planted effect") {
  SynthConfig c;
  c.n_records = 50000;
  c.lifespan_effects = {{0, 2.0}};
  const SynthRecords s = generate_death_records(c);
  REQUIRE(s.records.size() == 50000);
  const SsaAreaTable& ssa = SsaAreaTable::builtin();
  double sum_a = 0, sum_o = 0, sq_a = 0, sq_o = 0;
  std::size_t n_a = 0, n_o = 0;
  for (std::size_t i = 0; i < s.records.size(); ++i) {
    const auto& r = s.records[i];
    REQUIRE(r.birth.ok());
    REQUIRE(r.death.ok());
    REQUIRE(std::chrono::sys_days(r.death) >= std::chrono::sys_days(r.birth));
    REQUIRE(r.birth_year() >= c.birth_year_start);
    REQUIRE(r.birth_year() < c.birth_year_start + kSynthBirthYears);
    REQUIRE(ssa.slot(r.ssn_area));
    // Remove the birth-year trend before comparing groups.
    const double y = r.lifespan() - c.base(r.birth_year());
    if (s.last_group[i] == 0) {
      sum_a += y;
      sq_a += y * y;
      ++n_a;
    } else {
      sum_o += y;
      sq_o += y * y;
      ++n_o;
    }
  }
  const double ma = sum_a / n_a, mo = sum_o / n_o;
  const double va = sq_a / n_a - ma * ma, vo = sq_o / n_o - mo * mo;
  const double se = std::sqrt(va / n_a + vo / n_o);
  CHECK(std::fabs((ma - mo) - 2.0) <= 3 * se);
  CHECK(s.effect == std::vector<double>{2.0, 0.0, 0.0, 0.0});
}

TEST_CASE("zero noise and zero effects make lifespan a function of birth year") {
  SynthConfig c;
  c.n_records = 5000;
  c.demographic_noise_sd = 0.0;
  const SynthRecords s = generate_death_records(c);
  for (const auto& r : s.records) {
    // Death dates are whole days.
    REQUIRE(std::fabs(r.lifespan() - c.base(r.birth_year())) <= 0.5 / kDaysPerYear + 1e-12);
  }
}

TEST_CASE("demographic truth covers every name and ignores groups") {
  SynthConfig c;
  c.names_per_group = 200;
  c.n_records = 10;
  const SynthRecords s = generate_death_records(c);
  CHECK(s.gender.size() == 800);
  CHECK(s.ethnicity.size() == 800);
  CHECK(s.nationality.size() == 800);
  // Female share within each group stays near one half.
  for (int g = 0; g < c.n_groups; ++g) {
    int female = 0;
    for (int i = 0; i < c.names_per_group; ++i) {
      female += *s.gender.label_of("f:" + synth_name(g, i)) == *s.gender.find_label("female");
    }
    CHECK(std::fabs(female / 200.0 - 0.5) <= 3 * std::sqrt(0.25 / 200));
  }
}

TEST_CASE("p_within = 1/G makes member groups uniform") {
  SynthConfig c;
  c.p_within = 1.0 / c.n_groups;
  c.n_users = 20000;
  const SynthCorpus s = generate_corpus(c);
  // First two members of each context: independent across contexts, and
  // each member is uniform over groups, so they match with probability 1/G.
  std::size_t same = 0, n = 0;
  std::vector<std::size_t> hist(c.n_groups);
  for (const auto& groups : s.member_groups) {
    same += groups[0] == groups[1];
    ++n;
    ++hist[groups[0]];
  }
  const double prior = 1.0 / c.n_groups;
  CHECK(std::fabs(same / double(n) - prior) <= 3 * std::sqrt(prior * (1 - prior) / n));
  for (std::size_t h : hist) {
    CHECK(std::fabs(h / double(n) - prior) <= 3 * std::sqrt(prior * (1 - prior) / n));
  }
}

TEST_CASE("effects file") {
  std::ostringstream out;
  write_effects_csv(out, {2.0, 0.0});
  CHECK(out.str() == "group,effect\ng0,2\ng1,0\n");
}
