#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include "doctest.h"
#include "namecraft/error.hpp"
#include "namecraft/experiment.hpp"
#include "namecraft/random.hpp"
#include "namecraft/synth.hpp"
#include "oracles.hpp"

using namespace namecraft;
using namespace std::chrono;

namespace {

struct WelchCase {
  std::vector<double> a, b;
  double t, p, dof;
};

const std::vector<WelchCase> kWelchCases = {
#include "welch_reference.inc"
};

DeathRecord record(const std::string& first, const std::string& last, int birth_year,
                   int days, const std::string& area = "050") {
  DeathRecord r;
  r.first = NameToken{first, Role::kFirst};
  r.last = NameToken{last, Role::kLast};
  r.birth = year{birth_year} / January / 1;
  r.death = year_month_day{sys_days(r.birth) + std::chrono::days{days}};
  r.ssn_area = area;
  return r;
}

EmbeddingTable small_table() {
  EmbeddingTable t(Vocabulary::from_keys({"f:ann", "l:lee", "f:bob", "l:kim"}), 3, false);
  for (std::size_t r = 0; r < 4; ++r) {
    for (int j = 0; j < 3; ++j) t.input(r)[j] = 10.0 * r + j + 1;
  }
  return t;
}

Eigen::MatrixXd random_matrix(Rng& rng, int rows, int cols) {
  Eigen::MatrixXd X(rows, cols);
  for (int i = 0; i < rows; ++i) {
    for (int j = 0; j < cols; ++j) X(i, j) = rng.normal();
  }
  return X;
}

Eigen::VectorXd random_vector(Rng& rng, int n) {
  Eigen::VectorXd v(n);
  for (int i = 0; i < n; ++i) v(i) = 10 * rng.normal() + 70;
  return v;
}

}  // namespace

TEST_CASE("birth-year and state slots") {
  Featurizer::Options o;
  o.birth_year_start = 1900;
  const Featurizer f(o);
  const FeatureSpec spec{kBirthYear | kState, EmbeddingMode::kNone};
  const FeatureLayout l = f.layout(spec);
  CHECK(l.width == 130 + 59 + 1);
  const auto v = f.featurize(record("ann", "lee", 1900, 20000), spec, {});
  CHECK(v[0] == 1.0);
  CHECK(std::accumulate(v.begin(), v.begin() + 130, 0.0) == 1.0);
  const auto ny = SsaAreaTable::builtin().slot_of_label("NY");
  REQUIRE(ny);
  CHECK(SsaAreaTable::builtin().slot("050") == ny);
  CHECK(v[l.state + *ny] == 1.0);
  CHECK(v[l.state_missing] == 0.0);
  const auto last = f.featurize(record("ann", "lee", 2029, 100), spec, {});
  CHECK(last[129] == 1.0);
  CHECK_THROWS_AS(f.featurize(record("ann", "lee", 1899, 100), spec, {}), Error);
  CHECK_THROWS_AS(f.featurize(record("ann", "lee", 2030, 100), spec, {}), Error);
  const auto unknown = f.featurize(record("ann", "lee", 1950, 100, "000"), spec, {});
  CHECK(std::accumulate(unknown.begin() + l.state, unknown.begin() + l.state + 59, 0.0) == 0.0);
  CHECK(unknown[l.state_missing] == 1.0);
}

TEST_CASE("SSA table covers the published allocations") {
  const SsaAreaTable& t = SsaAreaTable::builtin();
  CHECK(t.slot_count() == kStateSlots);
  CHECK(t.label(*t.slot("001")) == "NH");
  CHECK(t.label(*t.slot("545")) == "CA");
  CHECK(t.label(*t.slot("586")) == "GU");
  CHECK(t.label(*t.slot("700")) == "RR");
  CHECK_FALSE(t.slot("000"));
  CHECK_FALSE(t.slot("666"));
  CHECK_FALSE(t.slot("12"));
  CHECK_FALSE(t.slot("abc"));
}

TEST_CASE("demographic prefix is shared by every embedding mode") {
  const EmbeddingTable table = small_table();
  Featurizer::Options o;
  o.birth_year_start = 1900;
  o.twitter = &table;
  o.email = &table;
  o.shuffle_seed = 5;
  const Featurizer f(o);
  const RecordDemographics d{1, 2, 17};
  const DeathRecord r = record("ann", "kim", 1950, 25000);
  const auto none = f.featurize(r, {kAllDemographics, EmbeddingMode::kNone}, d);
  const auto tw = f.featurize(r, {kAllDemographics, EmbeddingMode::kTwitter}, d);
  const auto sh = f.featurize(r, {kAllDemographics, EmbeddingMode::kShuffled}, d);
  REQUIRE(f.layout({kAllDemographics, EmbeddingMode::kNone}).demographic_width == 234);
  REQUIRE(none.size() == 235);
  REQUIRE(tw.size() == 235 + 3 + 3 + 2);
  CHECK(std::equal(none.begin(), none.begin() + 234, tw.begin()));
  CHECK(std::equal(none.begin(), none.begin() + 234, sh.begin()));
  const auto l = f.layout({kAllDemographics, EmbeddingMode::kTwitter});
  CHECK(tw[l.gender + 1] == 1.0);
  CHECK(tw[l.ethnicity + 2] == 1.0);
  CHECK(tw[l.nationality + 17] == 1.0);
  CHECK(std::vector<double>(tw.begin() + l.first_vector, tw.begin() + l.first_vector + 3) ==
        std::vector<double>{1, 2, 3});
  CHECK(std::vector<double>(tw.begin() + l.last_vector, tw.begin() + l.last_vector + 3) ==
        std::vector<double>{31, 32, 33});
  CHECK(tw[l.first_missing] == 0.0);
  const auto oov = f.featurize(record("zed", "kim", 1950, 25000),
                               {kAllDemographics, EmbeddingMode::kTwitter}, d);
  CHECK(oov[l.first_missing] == 1.0);
  CHECK(oov[l.first_vector] == 0.0);

  Featurizer::Options bare;
  bare.birth_year_start = 1900;
  CHECK_THROWS_AS(Featurizer(bare).layout({0, EmbeddingMode::kTwitter}), Error);
}

TEST_CASE("shuffled embeddings permute whole rows") {
  Rng rng(3);
  std::vector<std::string> keys;
  for (int i = 0; i < 200; ++i) keys.push_back("l:s" + std::to_string(i));
  EmbeddingTable table(Vocabulary::from_keys(keys), 4, false);
  for (double& x : table.input_data()) x = rng.normal();
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    Featurizer::Options o;
    o.twitter = &table;
    o.shuffle_seed = seed;
    const Featurizer f(o);
    auto perm = f.shuffle_permutation();
    REQUIRE(perm.size() == table.size());
    std::vector<std::size_t> rows;
    std::size_t moved = 0;
    for (std::size_t i = 0; i < keys.size(); ++i) {
      const auto row = f.embedding_row(EmbeddingMode::kShuffled, keys[i]);
      REQUIRE(row);
      rows.push_back(*row);
      moved += *row != i;
      REQUIRE(f.embedding_row(EmbeddingMode::kTwitter, keys[i]) == i);
    }
    std::sort(rows.begin(), rows.end());
    for (std::size_t i = 0; i < rows.size(); ++i) REQUIRE(rows[i] == i);
    CHECK(moved > 150);
    Featurizer::Options again = o;
    CHECK(Featurizer(again).shuffle_permutation() == f.shuffle_permutation());
  }
}

TEST_CASE("ridge examples") {
  Eigen::MatrixXd X(2, 1);
  X << 1, 2;
  Eigen::VectorXd y(2);
  y << 2, 4;
  const RidgeModel exact = fit_ridge(X, y, 0.0);
  CHECK(exact.weights(0) == doctest::Approx(2.0).epsilon(1e-12));
  CHECK(std::fabs(exact.intercept) < 1e-12);

  const RidgeModel heavy = fit_ridge(X, y, 1e12);
  CHECK(std::fabs(heavy.weights(0)) < 1e-9);
  CHECK(heavy.intercept == doctest::Approx(3.0).epsilon(1e-9));

  Eigen::MatrixXd dup(3, 2);
  dup << 1, 1, 2, 2, 3, 3;
  Eigen::VectorXd yd(3);
  yd << 1, 2, 3;
  try {
    fit_ridge(dup, yd, 0.0);
    FAIL("expected an error");
  } catch (const Error& e) {
    CHECK(std::string(e.what()).find("lambda > 0") != std::string::npos);
  }
  CHECK_NOTHROW(fit_ridge(dup, yd, 0.003));
  CHECK_THROWS_AS(fit_ridge(X, y, -1.0), Error);
  CHECK_THROWS_AS(fit_ridge(Eigen::MatrixXd(0, 1), Eigen::VectorXd(0)), Error);
  CHECK_THROWS_AS(fit_ridge(X, Eigen::VectorXd(3)), Error);
}

TEST_CASE("ridge satisfies optimality and matches an independent solve") {
  Rng rng(44);
  for (int trial = 0; trial < 50; ++trial) {
    const int n = 20 + static_cast<int>(rng.below(181));
    const int p = 1 + static_cast<int>(rng.below(50));
    const Eigen::MatrixXd X = random_matrix(rng, n, p);
    const Eigen::VectorXd y = random_vector(rng, n);
    const RidgeModel m = fit_ridge(X, y, kDefaultLambda);
    REQUIRE(ridge_optimality_residual(X, y, m) <= 1e-8);
    const auto [w, b] = oracle::ridge(X, y, kDefaultLambda);
    for (int j = 0; j < p; ++j) REQUIRE(std::fabs(m.weights(j) - w[j]) <= 1e-8);
    REQUIRE(std::fabs(m.intercept - b) <= 1e-8);
  }
}

TEST_CASE("ridge from subtracted moments equals a direct fit") {
  Rng rng(45);
  const Eigen::MatrixXd X = random_matrix(rng, 150, 12);
  const Eigen::VectorXd y = random_vector(rng, 150);
  std::vector<std::size_t> held = {3, 17, 40, 41, 99, 149};
  RidgeMoments m = RidgeMoments::of(X, y);
  m -= RidgeMoments::of_rows(X, y, held);
  std::vector<std::size_t> keep;
  for (std::size_t i = 0; i < 150; ++i) {
    if (std::find(held.begin(), held.end(), i) == held.end()) keep.push_back(i);
  }
  Eigen::MatrixXd Xk(keep.size(), 12);
  Eigen::VectorXd yk(keep.size());
  for (std::size_t i = 0; i < keep.size(); ++i) {
    Xk.row(i) = X.row(keep[i]);
    yk(i) = y(keep[i]);
  }
  const RidgeModel a = fit_ridge(m);
  const RidgeModel b = fit_ridge(Xk, yk);
  CHECK((a.weights - b.weights).lpNorm<Eigen::Infinity>() < 1e-9);
  CHECK(std::fabs(a.intercept - b.intercept) < 1e-9);
}

TEST_CASE("an all-zero column leaves predictions unchanged") {
  Rng rng(46);
  for (int trial = 0; trial < 20; ++trial) {
    const Eigen::MatrixXd X = random_matrix(rng, 80, 6);
    const Eigen::VectorXd y = random_vector(rng, 80);
    Eigen::MatrixXd Xz(80, 7);
    const int at = static_cast<int>(rng.below(7));
    for (int j = 0, k = 0; j < 7; ++j) {
      if (j == at) {
        Xz.col(j).setZero();
      } else {
        Xz.col(j) = X.col(k++);
      }
    }
    const RidgeModel a = fit_ridge(X, y);
    const RidgeModel b = fit_ridge(Xz, y);
    REQUIRE(std::fabs(b.weights(at)) <= 1e-10);
    REQUIRE((a.predict(X) - b.predict(Xz)).lpNorm<Eigen::Infinity>() <= 1e-10);
  }
}

TEST_CASE("Welch test against the reference table") {
  REQUIRE(kWelchCases.size() == 20);
  for (const auto& c : kWelchCases) {
    const WelchResult r = welch_t_test(c.a, c.b);
    REQUIRE(std::fabs(r.t - c.t) <= 1e-9 * std::max(1.0, std::fabs(c.t)));
    REQUIRE(std::fabs(r.p - c.p) <= 1e-9);
    REQUIRE(std::fabs(r.dof - c.dof) <= 1e-9 * std::max(1.0, c.dof));
    const WelchResult s = welch_t_test(c.b, c.a);
    REQUIRE(s.t == doctest::Approx(-r.t).epsilon(1e-14));
    REQUIRE(s.p == doctest::Approx(r.p).epsilon(1e-14));
  }
  const std::vector<double> a = {1, 2, 3}, b = {4, 5, 6};
  const WelchResult r = welch_t_test(a, b);
  CHECK(r.t == doctest::Approx(-3.6742346141747673).epsilon(1e-12));
  CHECK(r.p == doctest::Approx(0.021311641128756727).epsilon(1e-9));
}

TEST_CASE("Welch test edge cases") {
  const std::vector<double> a = {1.5, 2.5, 4.0};
  const WelchResult same = welch_t_test(a, a);
  CHECK(same.t == 0.0);
  CHECK(same.p == 1.0);
  CHECK_THROWS_AS(welch_t_test(std::vector<double>{1.0}, a), Error);
  CHECK_THROWS_AS(welch_t_test(std::vector<double>{2.0, 2.0}, a), Error);
}

TEST_CASE("split helpers") {
  const auto t1 = test_rows(1000, 0.9, 7, 0);
  CHECK(t1.size() == 100);
  CHECK(std::is_sorted(t1.begin(), t1.end()));
  CHECK(std::adjacent_find(t1.begin(), t1.end()) == t1.end());
  CHECK(t1 == test_rows(1000, 0.9, 7, 0));
  CHECK(t1 != test_rows(1000, 0.9, 7, 1));
  CHECK(t1 != test_rows(1000, 0.9, 8, 0));
  CHECK(t1.back() < 1000);
}

TEST_CASE("birth-year-only model fits a realizable target") {
  std::vector<DeathRecord> records;
  Rng rng(2);
  for (int i = 0; i < 3000; ++i) {
    const int y = 1880 + static_cast<int>(rng.below(130));
    records.push_back(record("ann", "lee", y, 20000 + 40 * (y - 1880) + (y % 7) * 300));
  }
  Featurizer::Options o;
  o.birth_year_start = Featurizer::birth_year_start(records);
  const Featurizer f(o);
  ExperimentConfig cfg;
  cfg.runs = 3;
  cfg.grid = {{kBirthYear, EmbeddingMode::kNone}};
  const std::vector<RecordDemographics> d(records.size());
  const ExperimentResult r = run_experiment(records, d, f, cfg);
  CHECK(r.settings[0].mean_mae <= 0.01);
  CHECK(r.train_size + r.test_size == records.size());
}

TEST_CASE("experiment grid is reproducible and beats the constant predictor") {
  SynthConfig sc;
  sc.n_records = 4000;
  sc.lifespan_effects = {{0, 2.0}};
  const SynthRecords s = generate_death_records(sc);
  const EmbeddingTable table = [&] {
    std::vector<std::string> keys;
    for (int g = 0; g < sc.n_groups; ++g) {
      for (int i = 0; i < sc.names_per_group; ++i) {
        keys.push_back("f:" + synth_name(g, i));
        keys.push_back("l:" + synth_name(g, i));
      }
    }
    EmbeddingTable t(Vocabulary::from_keys(keys), 4, false);
    for (std::size_t r = 0; r < t.size(); ++r) {
      const int g = static_cast<int>(r / (2 * sc.names_per_group));
      t.input(r)[g] = 1.0;
    }
    return t;
  }();
  Featurizer::Options o;
  o.birth_year_start = Featurizer::birth_year_start(s.records);
  o.twitter = &table;
  o.shuffle_seed = 9;
  const Featurizer f(o);
  const std::vector<RecordDemographics> d(s.records.size());
  ExperimentConfig cfg;
  cfg.runs = 4;
  cfg.grid = {{kBirthYear, EmbeddingMode::kNone},
              {kBirthYear, EmbeddingMode::kTwitter},
              {kBirthYear | kState, EmbeddingMode::kShuffled},
              {0, EmbeddingMode::kNone}};
  const ExperimentResult a = run_experiment(s.records, d, f, cfg);
  cfg.workers = 3;
  const ExperimentResult b = run_experiment(s.records, d, f, cfg);
  for (std::size_t i = 0; i < a.settings.size(); ++i) {
    for (int r = 0; r < cfg.runs; ++r) REQUIRE(a.settings[i].mae[r] == b.settings[i].mae[r]);
  }
  CHECK(a.at({kBirthYear, EmbeddingMode::kTwitter}).mean_mae <
        a.at({kBirthYear, EmbeddingMode::kNone}).mean_mae);

  // Constant-mean predictor on the same splits.
  const Eigen::VectorXd y = lifespans(s.records);
  for (int r = 0; r < cfg.runs; ++r) {
    const auto held = test_rows(s.records.size(), cfg.train_fraction, cfg.seed, r);
    std::vector<bool> is_test(s.records.size());
    for (auto i : held) is_test[i] = true;
    double sum = 0;
    std::size_t n = 0;
    for (std::size_t i = 0; i < s.records.size(); ++i) {
      if (!is_test[i]) {
        sum += y(i);
        ++n;
      }
    }
    double mae = 0;
    for (auto i : held) mae += std::fabs(y(i) - sum / n);
    mae /= held.size();
    REQUIRE(a.at({0, EmbeddingMode::kNone}).mae[r] == doctest::Approx(mae).epsilon(1e-9));
    for (const auto& setting : a.settings) REQUIRE(setting.mae[r] <= mae + 1e-9);
  }

  const auto cmp = compare_to_baseline(a);
  bool found = false;
  for (const auto& c : cmp) {
    if (c.candidate == FeatureSpec{kBirthYear, EmbeddingMode::kTwitter}) {
      found = true;
      CHECK(c.baseline == FeatureSpec{kBirthYear, EmbeddingMode::kNone});
      CHECK(c.mean_difference > 0);
    }
  }
  CHECK(found);

  std::ostringstream grid;
  write_grid_csv(grid, a);
  CHECK(grid.str().rfind("flags,embedding,width,mean_mae,run_0", 0) == 0);
}

TEST_CASE("feature spec names and grid") {
  const auto grid = all_feature_specs();
  CHECK(grid.size() == 128);
  CHECK(FeatureSpec{kAllDemographics, EmbeddingMode::kTwitter}.name() == "BSGEN+TwEbd");
  CHECK(FeatureSpec{0, EmbeddingMode::kNone}.name() == "-+NoEbd");
  CHECK(parse_flags("all") == kAllDemographics);
  CHECK(parse_flags("none") == 0);
  CHECK(parse_flags("BE") == (kBirthYear | kEthnicity));
  CHECK_THROWS_AS(parse_flags("BX"), Error);
  for (auto m : {EmbeddingMode::kNone, EmbeddingMode::kShuffled, EmbeddingMode::kEmail,
                 EmbeddingMode::kTwitter}) {
    CHECK(parse_embedding_mode(embedding_mode_name(m)) == m);
  }
}

TEST_CASE("death record files round-trip") {
  SynthConfig sc;
  sc.n_records = 500;
  const auto s = generate_death_records(sc);
  std::stringstream buf;
  write_death_records(buf, s.records);
  const std::string text = buf.str();
  const auto back = read_death_records(buf);
  REQUIRE(back.size() == s.records.size());
  for (std::size_t i = 0; i < back.size(); ++i) {
    REQUIRE(back[i].first == s.records[i].first);
    REQUIRE(back[i].last == s.records[i].last);
    REQUIRE(back[i].birth == s.records[i].birth);
    REQUIRE(back[i].death == s.records[i].death);
    REQUIRE(back[i].ssn_area == s.records[i].ssn_area);
  }
  std::stringstream again;
  write_death_records(again, back);
  CHECK(again.str() == text);
}

TEST_CASE("death record reader") {
  std::istringstream in(
      "first,last,birth_date,death_date,ssn_area\n"
      "John,Smith,1900-02-28,1970-03-01,050\n"
      "Cher,,1900-01-01,1950-01-01,050\n"
      "Ann,Lee,1900-02-30,1950-01-01,050\n"
      "Ann,Lee,1950-01-01,1900-01-01,050\n");
  RecordReadStats stats;
  const auto r = read_death_records(in, &stats);
  REQUIRE(r.size() == 1);
  CHECK(r[0].first.text == "john");
  CHECK(r[0].lifespan() == doctest::Approx(25568.0 / kDaysPerYear));
  CHECK(stats.records == 1);
  CHECK(stats.skipped == 3);
  std::istringstream bad("a,b,c\n");
  CHECK_THROWS_AS(read_death_records(bad), Error);
}

TEST_CASE("SSDI master-file reader") {
  auto pad = [](std::string s, std::size_t w) {
    s.resize(w, ' ');
    return s;
  };
  const std::string row = " " + std::string("050123456") + pad("SMITH", 20) + pad("", 4) +
                          pad("JOHN", 15) + pad("Q", 15) + "V" + "03011970" + "02281900";
  REQUIRE(row.size() == 81);
  const std::string zero = " " + std::string("123456789") + pad("DOE", 20) + pad("", 4) +
                           pad("JANE", 15) + pad("", 15) + " " + "00001970" + "02281900";
  std::istringstream in(row + "\n" + zero + "\n");
  RecordReadStats stats;
  const auto r = read_ssdi_master(in, &stats);
  REQUIRE(r.size() == 1);
  CHECK(r[0].first.text == "john");
  CHECK(r[0].last.text == "smith");
  CHECK(r[0].ssn_area == "050");
  CHECK(format_iso_date(r[0].birth) == "1900-02-28");
  CHECK(format_iso_date(r[0].death) == "1970-03-01");
  CHECK(stats.skipped == 1);
}
