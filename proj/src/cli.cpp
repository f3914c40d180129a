#include "namecraft/cli.hpp"

#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <map>
#include <memory>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"
#include "namecraft/corpus.hpp"
#include "namecraft/death_record.hpp"
#include "namecraft/embedding_table.hpp"
#include "namecraft/error.hpp"
#include "namecraft/evaluate.hpp"
#include "namecraft/experiment.hpp"
#include "namecraft/features.hpp"
#include "namecraft/ingest.hpp"
#include "namecraft/labels.hpp"
#include "namecraft/naive_bayes.hpp"
#include "namecraft/residual.hpp"
#include "namecraft/seeds.hpp"
#include "namecraft/sgns.hpp"
#include "namecraft/synth.hpp"
#include "namecraft/taxonomy.hpp"

#ifndef NAMECRAFT_VERSION
#define NAMECRAFT_VERSION "0.0.0"
#endif

namespace namecraft {
namespace {

namespace fs = std::filesystem;
using json = nlohmann::ordered_json;

std::ifstream open_in(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open " + path);
  return in;
}

std::ofstream open_out(const fs::path& path) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream out(path);
  if (!out) throw Error("cannot write " + path.string());
  return out;
}

// Everything needed to rerun a subcommand: its resolved options, the global
// seed and every stage seed derived from it.
class Manifest {
 public:
  Manifest(const CLI::App& sub, std::uint64_t seed) {
    doc_["command"] = sub.get_name();
    doc_["version"] = NAMECRAFT_VERSION;
    json config = json::object();
    for (const CLI::Option* opt : sub.get_options()) {
      if (opt->get_lnames().empty()) continue;
      const std::string name = opt->get_lnames().front();
      if (name == "help") continue;
      std::vector<std::string> values = opt->results();
      if (values.empty()) {
        if (opt->get_default_str().empty()) continue;
        values = {opt->get_default_str()};
      }
      if (values.size() == 1 && opt->get_expected_max() <= 1) {
        config[name] = values.front();
      } else {
        config[name] = values;
      }
    }
    doc_["config"] = std::move(config);
    doc_["seeds"]["global"] = seed;
  }

  std::uint64_t stage(std::string_view name) {
    const std::uint64_t global = doc_["seeds"]["global"].get<std::uint64_t>();
    const std::uint64_t s = stage_seed(global, name);
    doc_["seeds"][std::string(name)] = s;
    return s;
  }

  json& extra() { return doc_["results"]; }

  void write(const fs::path& path) const {
    auto out = open_out(path);
    out << doc_.dump(2) << '\n';
  }

 private:
  json doc_;
};

fs::path manifest_beside(const std::string& file) {
  return fs::path(file + ".manifest.json");
}

std::vector<DeathRecord> load_records(const std::string& path,
                                      const std::string& format) {
  RecordReadStats stats;
  std::vector<DeathRecord> records;
  if (format == "csv") {
    records = read_death_records(path, &stats);
  } else if (format == "ssdi") {
    records = read_ssdi_master(path, &stats);
  } else {
    throw Error("unknown record format: " + format);
  }
  std::cerr << "records: " << stats.records << " read, " << stats.skipped
            << " skipped of " << stats.lines << " lines\n";
  if (records.empty()) throw Error("no usable death records in " + path);
  return records;
}

std::string query_key(const std::string& query, Role default_role_) {
  if (auto token = NameToken::from_key(query)) return token->key();
  auto text = normalize_part(query);
  if (!text) throw Error("query does not contain a name: " + query);
  return NameToken{*text, default_role_}.key();
}

// ---- ingest ---------------------------------------------------------------

struct IngestArgs {
  std::string tweets, profiles, follows, out;
};

void run_ingest(const IngestArgs& a, Manifest& manifest) {
  if (a.tweets.empty() && a.profiles.empty() && a.follows.empty()) {
    throw Error("ingest needs at least one of --tweets, --profiles, --follows");
  }
  const fs::path dir(a.out);
  fs::create_directories(dir);
  json& report = manifest.extra();

  std::unordered_map<std::string, bool> seed_owner;
  if (!a.profiles.empty()) {
    auto in = open_in(a.profiles);
    ParseStats stats;
    const auto profiles = read_profiles(in, &stats);
    auto out = open_out(dir / "profiles.jsonl");
    std::size_t kept = 0, celebrities = 0;
    for (const auto& p : profiles) {
      seed_owner[p.id] = is_seed_user(p);
      if (classify_user(p) == UserClass::kCelebrity) ++celebrities;
      if (!normalize_name(p.raw_name)) continue;
      write_profile(out, p);
      ++kept;
    }
    report["profiles"] = {{"lines", stats.lines},       {"read", profiles.size()},
                          {"malformed", stats.malformed}, {"kept", kept},
                          {"celebrities", celebrities}};
  }
  if (!a.tweets.empty()) {
    auto in = open_in(a.tweets);
    InteractionStreamParser parser(in);
    auto out = open_out(dir / "interactions.jsonl");
    std::size_t retweets = 0, mentions = 0;
    while (auto record = parser.next()) {
      (record->kind == InteractionKind::kRetweet ? retweets : mentions) += 1;
      write_interaction(out, *record);
    }
    const ParseStats& s = parser.stats();
    report["interactions"] = {{"lines", s.lines},         {"retweets", retweets},
                              {"mentions", mentions},     {"skipped", s.skipped},
                              {"malformed", s.malformed}};
  }
  if (!a.follows.empty()) {
    auto in = open_in(a.follows);
    ParseStats stats;
    const auto lists = read_follow_lists(in, &stats);
    auto out = open_out(dir / "follows.jsonl");
    std::size_t kept = 0;
    for (const auto& l : lists) {
      // Owners with a known non-seed profile are dropped; unknown owners stay.
      auto it = seed_owner.find(l.owner);
      if (it != seed_owner.end() && !it->second) continue;
      write_follow_lists(out, l);
      ++kept;
    }
    report["follow_lists"] = {{"lines", stats.lines},
                              {"read", lists.size()},
                              {"malformed", stats.malformed},
                              {"kept", kept}};
  }
  manifest.write(dir / "manifest.json");
  std::cout << report.dump(2) << '\n';
}

// ---- build-corpus ---------------------------------------------------------

struct BuildCorpusArgs {
  std::string variant, in_dir, tweets, profiles, follows, out;
  int min_count = kDefaultMinCount;
};

void run_build_corpus(BuildCorpusArgs a, Manifest& manifest) {
  const CorpusVariant variant = parse_variant(a.variant);
  if (!a.in_dir.empty()) {
    const fs::path dir(a.in_dir);
    auto pick = [&](std::string& slot, const char* name) {
      if (slot.empty() && fs::exists(dir / name)) slot = (dir / name).string();
    };
    pick(a.tweets, "interactions.jsonl");
    pick(a.profiles, "profiles.jsonl");
    pick(a.follows, "follows.jsonl");
  }
  if (a.profiles.empty()) throw Error("build-corpus needs a profile file");

  std::vector<InteractionRecord> interactions;
  std::vector<FollowLists> follow_lists;
  std::vector<UserProfile> profiles;
  {
    auto in = open_in(a.profiles);
    profiles = read_profiles(in);
  }
  if (!a.tweets.empty()) {
    auto in = open_in(a.tweets);
    interactions = read_interactions(in);
  }
  if (!a.follows.empty()) {
    auto in = open_in(a.follows);
    follow_lists = read_follow_lists(in);
  }
  const ProfileIndex index(profiles);
  const TrainingCorpus corpus = build_corpus(variant, interactions, follow_lists, index);
  {
    auto out = open_out(a.out);
    write_corpus(out, corpus);
  }
  const CorpusStats stats = corpus_stats(corpus, a.min_count);
  manifest.extra() = {{"variant", std::string(variant_name(variant))},
                      {"contexts", corpus.contexts().size()},
                      {"tokens", stats.token_count},
                      {"vocab_size", stats.vocab_size}};
  manifest.write(manifest_beside(a.out));
  std::cout << "variant " << variant_name(variant) << ": "
            << corpus.contexts().size() << " contexts, " << stats.token_count
            << " tokens, vocabulary " << stats.vocab_size << " at min count "
            << a.min_count << '\n';
}

// ---- train / knn ----------------------------------------------------------

struct TrainArgs {
  std::string corpus, out;
  SgnsConfig sgns;
};

void run_train(TrainArgs a, Manifest& manifest) {
  a.sgns.seed = manifest.stage("train");
  auto in = open_in(a.corpus);
  const TrainingCorpus corpus = read_corpus(in);
  TrainReport report;
  const EmbeddingTable table = train(corpus, a.sgns, &report);
  save_embeddings(a.out, table);
  manifest.extra() = {{"vocab_size", table.size()},
                      {"pairs_per_epoch", report.pairs_per_epoch},
                      {"epoch_objective", report.epoch_objective}};
  manifest.write(manifest_beside(a.out));
  std::cout << "trained " << table.size() << " x " << table.dim() << " embeddings, "
            << report.pairs_per_epoch << " pairs per epoch\n";
  if (!report.epoch_objective.empty()) {
    std::cout << "mean pair objective: first epoch "
              << report.epoch_objective.front() << ", last epoch "
              << report.epoch_objective.back() << '\n';
  }
}

struct KnnArgs {
  std::string embeddings, query;
  int k = 4;
  bool include_self = false;
};

void run_knn(const KnnArgs& a) {
  const EmbeddingTable table = load_embeddings(a.embeddings);
  const std::string key = query_key(a.query, Role::kFirst);
  for (const Neighbor& n : knn(table, key, a.k, !a.include_self)) {
    std::cout << n.token << ' ' << std::setprecision(6) << n.similarity << '\n';
  }
}

// ---- evaluation -----------------------------------------------------------

struct RatioArgs {
  std::string embeddings, labels, out;
  std::vector<int> ks{1, 10, 50, 100};
  std::vector<std::string> queries;
  int classify_k = 10;
};

void run_ratio_eval(const RatioArgs& a, LabelKind kind, Manifest* manifest) {
  const EmbeddingTable table = load_embeddings(a.embeddings);
  const LabelSet labels = read_token_labels(a.labels, kind);
  std::ostringstream report;
  report << "k,label,support,ratio\n" << std::setprecision(6);
  for (int k : a.ks) {
    const ClassRatios r = same_class_ratio(table, labels, k);
    for (std::size_t c = 0; c < r.labels.size(); ++c) {
      report << k << ',' << r.labels[c] << ',' << r.support[c] << ',' << r.ratio[c]
             << '\n';
    }
    report << k << ",mean,," << r.mean << '\n';
  }
  std::cout << report.str();
  for (const auto& q : a.queries) {
    const std::string key = query_key(q, default_role(kind));
    std::cout << key << " -> "
              << gender_knn_classify(table, labels, key, a.classify_k) << '\n';
  }
  if (!a.out.empty()) {
    auto out = open_out(a.out);
    out << report.str();
    manifest->write(manifest_beside(a.out));
  }
}

struct NationalityArgs {
  std::string embeddings, labels, taxonomy, out;
  double train_fraction = 0.8;
};

void run_eval_nationality(const NationalityArgs& a, Manifest& manifest) {
  const EmbeddingTable table = load_embeddings(a.embeddings);
  const auto labels = read_full_name_labels(a.labels);
  const Taxonomy taxonomy =
      a.taxonomy.empty() ? Taxonomy::nationality() : Taxonomy::load(a.taxonomy);
  const NationalityEvaluation ev = evaluate_nationality(
      table, labels, taxonomy, a.train_fraction, manifest.stage("eval-nationality"));
  std::ostringstream report;
  report << "node,level,precision,recall,f1,support\n" << std::setprecision(6);
  for (const auto& [name, s] : ev.report.leaves) {
    report << name << ",leaf," << s.precision << ',' << s.recall << ',' << s.f1 << ','
           << s.support << '\n';
  }
  for (const auto& [name, s] : ev.report.internal) {
    report << name << ",internal," << s.precision << ',' << s.recall << ',' << s.f1
           << ',' << s.support << '\n';
  }
  report << "weighted_average,,,," << ev.report.weighted_average << ','
         << ev.test_size << '\n';
  std::cout << report.str();
  std::cerr << "train " << ev.train_size << ", test " << ev.test_size << ", skipped "
            << ev.skipped << " (name part out of vocabulary)\n";
  if (!a.out.empty()) {
    auto out = open_out(a.out);
    out << report.str();
    manifest.write(manifest_beside(a.out));
  }
}

// ---- lifespan / residual --------------------------------------------------

struct DemographicArgs {
  std::string gender_labels, ethnicity_labels, nationality_labels,
      nationality_names;
  int gender_k = 10;
};

// Owns the label sets and models the labeler functions point into.
struct DemographicSources {
  std::unique_ptr<LabelSet> gender, ethnicity, nationality;
  std::vector<FullNameLabel> nationality_names;
  DemographicLabeler labeler;
};

std::unique_ptr<DemographicSources> load_demographics(const DemographicArgs& a,
                                                      const EmbeddingTable* table) {
  auto src = std::make_unique<DemographicSources>();
  if (!a.gender_labels.empty()) {
    src->gender =
        std::make_unique<LabelSet>(read_token_labels(a.gender_labels, LabelKind::kGender));
    if (table != nullptr) {
      auto classifier =
          std::make_shared<const KnnClassifier>(*table, *src->gender, Role::kFirst);
      src->labeler.gender = knn_labeler(classifier, Role::kFirst, a.gender_k);
    } else {
      src->labeler.gender = lookup_labeler(*src->gender, Role::kFirst);
    }
  }
  if (!a.ethnicity_labels.empty()) {
    src->ethnicity = std::make_unique<LabelSet>(
        read_token_labels(a.ethnicity_labels, LabelKind::kEthnicity));
    src->labeler.ethnicity = lookup_labeler(*src->ethnicity, Role::kLast);
  }
  if (!a.nationality_labels.empty() && !a.nationality_names.empty()) {
    throw Error("give either --nationality-labels or --nationality-names");
  }
  if (!a.nationality_labels.empty()) {
    src->nationality = std::make_unique<LabelSet>(
        read_token_labels(a.nationality_labels, LabelKind::kNationality));
    src->labeler.nationality = nationality_lookup_labeler(*src->nationality);
  } else if (!a.nationality_names.empty()) {
    if (table == nullptr) throw Error("--nationality-names needs --embeddings");
    src->nationality_names = read_full_name_labels(a.nationality_names);
    auto model = std::make_shared<const NbModel>(train_nationality_nb(
        *table, src->nationality_names, Taxonomy::nationality()));
    src->labeler.nationality = nb_labeler(model, *table);
  }
  return src;
}

struct LifespanArgs {
  std::string records, format = "csv", embeddings, email_embeddings, out;
  DemographicArgs demographics;
  std::vector<std::string> flags;
  std::vector<std::string> modes;
  ExperimentConfig experiment;
};

void run_lifespan(LifespanArgs a, Manifest& manifest) {
  const auto records = load_records(a.records, a.format);
  std::optional<EmbeddingTable> twitter, email;
  if (!a.embeddings.empty()) twitter = load_embeddings(a.embeddings);
  if (!a.email_embeddings.empty()) email = load_embeddings(a.email_embeddings);

  std::vector<std::uint8_t> flag_sets;
  if (a.flags.empty()) {
    for (std::uint8_t f = 0; f <= kAllDemographics; ++f) flag_sets.push_back(f);
  } else {
    for (const auto& f : a.flags) flag_sets.push_back(parse_flags(f));
  }
  std::vector<EmbeddingMode> modes;
  if (a.modes.empty()) {
    modes.push_back(EmbeddingMode::kNone);
    if (twitter) {
      modes.push_back(EmbeddingMode::kShuffled);
      modes.push_back(EmbeddingMode::kTwitter);
    }
    if (email) modes.push_back(EmbeddingMode::kEmail);
  } else {
    for (const auto& m : a.modes) modes.push_back(parse_embedding_mode(m));
  }
  a.experiment.grid.clear();
  for (std::uint8_t f : flag_sets) {
    for (EmbeddingMode m : modes) a.experiment.grid.push_back({f, m});
  }
  a.experiment.seed = manifest.stage("lifespan.splits");

  Featurizer::Options options;
  options.birth_year_start = Featurizer::birth_year_start(records);
  options.twitter = twitter ? &*twitter : nullptr;
  options.email = email ? &*email : nullptr;
  options.shuffle_seed = manifest.stage("lifespan.shuffle");
  const Featurizer featurizer(options);
  const auto sources = load_demographics(a.demographics, options.twitter);
  const auto demographics = sources->labeler.infer_all(records);

  const ExperimentResult result =
      run_experiment(records, demographics, featurizer, a.experiment);
  const auto comparisons = compare_to_baseline(result);

  const fs::path dir(a.out);
  {
    auto out = open_out(dir / "grid.csv");
    write_grid_csv(out, result);
  }
  {
    auto out = open_out(dir / "significance.csv");
    write_significance_csv(out, comparisons);
  }
  manifest.extra() = {{"records", records.size()},
                      {"train_size", result.train_size},
                      {"test_size", result.test_size},
                      {"birth_year_start", options.birth_year_start}};
  manifest.write(dir / "manifest.json");

  std::cout << std::fixed << std::setprecision(4);
  for (const auto& s : result.settings) {
    std::cout << std::setw(6) << flags_name(s.spec.flags) << ' '
              << embedding_mode_name(s.spec.embedding) << "  MAE " << s.mean_mae
              << '\n';
  }
  for (const auto& c : comparisons) {
    std::cout << std::setw(6) << flags_name(c.candidate.flags) << ' '
              << embedding_mode_name(c.candidate.embedding) << " vs NoEbd: "
              << std::showpos << c.mean_difference << std::noshowpos
              << " years, p = " << std::scientific << std::setprecision(3)
              << c.welch.p << std::fixed << std::setprecision(4) << '\n';
  }
}

struct ResidualArgs {
  std::string records, format = "csv", embeddings, pairs, out;
  DemographicArgs demographics;
  std::string flags = "BSGEN";
  double lambda = kDefaultLambda;
  RankOptions rank;
};

void run_residual(const ResidualArgs& a, Manifest& manifest) {
  const auto records = load_records(a.records, a.format);
  const EmbeddingTable table = load_embeddings(a.embeddings);
  Featurizer::Options options;
  options.birth_year_start = Featurizer::birth_year_start(records);
  const Featurizer featurizer(options);
  const auto sources = load_demographics(a.demographics, &table);
  const auto demographics = sources->labeler.infer_all(records);

  const ResidualModel model = fit_residual(records, demographics, featurizer, table,
                                           parse_flags(a.flags), a.lambda);
  const fs::path dir(a.out);
  for (Role role : {Role::kFirst, Role::kLast}) {
    const RankedNames ranked = rank_names(model, records, role, a.rank);
    const std::string part = role == Role::kFirst ? "first" : "last";
    {
      auto out = open_out(dir / ("favorable_" + part + ".csv"));
      write_ranked_csv(out, ranked.favorable);
    }
    {
      auto out = open_out(dir / ("unfavorable_" + part + ".csv"));
      write_ranked_csv(out, ranked.unfavorable);
    }
    std::cout << part << " names passing the count filter: " << ranked.eligible
              << '\n';
  }

  const std::vector<NamePair> pairs =
      a.pairs.empty() ? builtin_diminutive_pairs() : read_name_pairs(a.pairs);
  json sign;
  try {
    const SignTestResult t = diminutive_sign_test(model, pairs);
    json oov = json::array();
    for (const auto& [dim, formal] : t.out_of_vocabulary) {
      oov.push_back(dim.text + "," + formal.text);
    }
    sign = {{"pairs", t.pairs_total},
            {"used", t.pairs_used},
            {"formal_wins", t.formal_wins},
            {"ties", t.ties},
            {"win_fraction", t.win_fraction},
            {"p_value", t.p_value},
            {"out_of_vocabulary", oov}};
    std::cout << "diminutive vs formal: formal wins " << t.formal_wins << " of "
              << t.pairs_used << " (" << t.out_of_vocabulary.size()
              << " pairs out of vocabulary, " << t.ties << " ties), p = " << t.p_value
              << '\n';
  } catch (const Error& e) {
    sign = {{"error", e.what()}};
    std::cout << "diminutive vs formal: " << e.what() << '\n';
  }
  {
    auto out = open_out(dir / "sign_test.json");
    out << sign.dump(2) << '\n';
  }
  manifest.extra() = {{"records", records.size()},
                      {"demographic_intercept", model.demographic.intercept},
                      {"residual_intercept", model.residual.intercept},
                      {"residual_weight_max_abs",
                       model.residual.weights.size() > 0
                           ? model.residual.weights.cwiseAbs().maxCoeff()
                           : 0.0}};
  manifest.write(dir / "manifest.json");
}

// ---- synth ----------------------------------------------------------------

struct SynthArgs {
  std::string out;
  SynthConfig config;
  std::vector<std::string> effects;
};

void run_synth(SynthArgs a, Manifest& manifest) {
  for (const auto& e : a.effects) {
    const auto colon = e.find(':');
    if (colon == std::string::npos) {
      throw Error("--effect expects GROUP:YEARS, got " + e);
    }
    try {
      a.config.lifespan_effects[std::stoi(e.substr(0, colon))] =
          std::stod(e.substr(colon + 1));
    } catch (const std::logic_error&) {
      throw Error("--effect expects GROUP:YEARS, got " + e);
    }
  }
  a.config.seed = manifest.stage("synth");
  const SynthCorpus corpus = generate_corpus(a.config);
  const SynthRecords records = generate_death_records(a.config);
  const fs::path dir(a.out);
  {
    auto out = open_out(dir / "corpus.txt");
    write_corpus(out, corpus.corpus);
  }
  {
    auto out = open_out(dir / "groups.csv");
    write_token_labels(out, corpus.groups);
  }
  {
    auto out = open_out(dir / "records.csv");
    write_death_records(out, records.records);
  }
  {
    auto out = open_out(dir / "effects.csv");
    write_effects_csv(out, records.effect);
  }
  {
    auto out = open_out(dir / "gender.csv");
    write_token_labels(out, records.gender);
  }
  {
    auto out = open_out(dir / "ethnicity.csv");
    write_token_labels(out, records.ethnicity);
  }
  {
    auto out = open_out(dir / "nationality.csv");
    write_token_labels(out, records.nationality);
  }
  manifest.extra() = {{"contexts", corpus.corpus.contexts().size()},
                      {"tokens", corpus.corpus.token_count()},
                      {"records", records.records.size()}};
  manifest.write(dir / "manifest.json");
  std::cout << "wrote " << corpus.corpus.contexts().size() << " contexts and "
            << records.records.size() << " death records to " << dir.string()
            << '\n';
}

// ---- wiring ---------------------------------------------------------------

void add_demographic_options(CLI::App* sub, DemographicArgs& d) {
  sub->add_option("--gender-labels", d.gender_labels,
                  "token,label census first names; gender comes from a kNN vote "
                  "over the embeddings when they are given")
      ->check(CLI::ExistingFile);
  sub->add_option("--gender-k", d.gender_k, "neighbors in the gender vote")
      ->capture_default_str()
      ->check(CLI::PositiveNumber);
  sub->add_option("--ethnicity-labels", d.ethnicity_labels,
                  "token,label last names (White, Black, API, Hispanic)")
      ->check(CLI::ExistingFile);
  sub->add_option("--nationality-labels", d.nationality_labels,
                  "token,leaf last names, leaves of the nationality taxonomy")
      ->check(CLI::ExistingFile);
  sub->add_option("--nationality-names", d.nationality_names,
                  "first,last,leaf full names; trains a naive Bayes classifier "
                  "over the embeddings instead of a lookup")
      ->check(CLI::ExistingFile);
}

}  // namespace

int dispatch(int argc, const char* const* argv) {
  CLI::App app{"Name-part embeddings from social interactions, demographic "
               "evaluation and lifespan modeling.",
               "namecraft"};
  app.set_version_flag("--version", NAMECRAFT_VERSION);
  app.set_config("--config", "",
                 "key=value file; subcommand options are written as "
                 "'train.dim=32' or under a [train] section");
  app.require_subcommand(1);
  std::uint64_t seed = 1;

  auto add_seed = [&](CLI::App* sub) {
    sub->add_option("--seed", seed,
                    "global seed; each stage derives its own seed from it")
        ->capture_default_str();
  };

  IngestArgs ingest;
  CLI::App* ingest_cmd = app.add_subcommand("ingest", "clean raw interaction, profile "
                                                      "and follow-list dumps");
  ingest_cmd->add_option("--tweets", ingest.tweets, "interaction JSONL")
      ->check(CLI::ExistingFile);
  ingest_cmd->add_option("--profiles", ingest.profiles, "profile JSONL")
      ->check(CLI::ExistingFile);
  ingest_cmd->add_option("--follows", ingest.follows, "follow-list JSONL")
      ->check(CLI::ExistingFile);
  ingest_cmd->add_option("--out", ingest.out, "output directory")->required();
  add_seed(ingest_cmd);

  BuildCorpusArgs corpus;
  CLI::App* corpus_cmd =
      app.add_subcommand("build-corpus", "build one of the nine training corpora");
  corpus_cmd
      ->add_option("--variant", corpus.variant,
                   "retweet, mention, follower, followee, followee-star, friend, "
                   "nonfriend, aggregated, aggregated-star")
      ->required();
  corpus_cmd->add_option("--in", corpus.in_dir, "directory written by ingest")
      ->check(CLI::ExistingDirectory);
  corpus_cmd->add_option("--tweets", corpus.tweets, "interaction JSONL")
      ->check(CLI::ExistingFile);
  corpus_cmd->add_option("--profiles", corpus.profiles, "profile JSONL")
      ->check(CLI::ExistingFile);
  corpus_cmd->add_option("--follows", corpus.follows, "follow-list JSONL")
      ->check(CLI::ExistingFile);
  corpus_cmd->add_option("--out", corpus.out, "corpus file")->required();
  corpus_cmd->add_option("--min-count", corpus.min_count,
                         "minimum count for the reported vocabulary size")
      ->capture_default_str();
  add_seed(corpus_cmd);

  TrainArgs train_args;
  CLI::App* train_cmd =
      app.add_subcommand("train", "train skip-gram negative-sampling embeddings");
  train_cmd->add_option("--corpus", train_args.corpus, "corpus file")
      ->required()
      ->check(CLI::ExistingFile);
  train_cmd->add_option("--out", train_args.out, "embedding file")->required();
  train_cmd->add_option("--dim", train_args.sgns.dim, "vector dimension")
      ->capture_default_str();
  train_cmd->add_option("--window", train_args.sgns.window, "context window")
      ->capture_default_str();
  train_cmd->add_option("--negatives", train_args.sgns.negatives,
                        "negative samples per pair")
      ->capture_default_str();
  train_cmd->add_option("--epochs", train_args.sgns.epochs, "passes over the corpus")
      ->capture_default_str();
  train_cmd->add_option("--min-count", train_args.sgns.min_count,
                        "drop tokens seen fewer times")
      ->capture_default_str();
  train_cmd->add_option("--learning-rate", train_args.sgns.initial_learning_rate,
                        "initial learning rate, decayed linearly to 1e-4 of itself")
      ->capture_default_str();
  train_cmd->add_option("--unigram-power", train_args.sgns.unigram_power,
                        "exponent of the negative-sampling distribution")
      ->capture_default_str();
  train_cmd->add_option("--workers", train_args.sgns.workers,
                        "training threads; 1 is deterministic")
      ->capture_default_str();
  add_seed(train_cmd);

  KnnArgs knn_args;
  CLI::App* knn_cmd = app.add_subcommand("knn", "nearest neighbors of a name part");
  knn_cmd->add_option("--embeddings", knn_args.embeddings, "embedding file")
      ->required()
      ->check(CLI::ExistingFile);
  knn_cmd->add_option("--query", knn_args.query,
                      "token key such as f:andy (bare names are taken as first names)")
      ->required();
  knn_cmd->add_option("--k", knn_args.k, "neighbors")->capture_default_str();
  knn_cmd->add_flag("--include-self", knn_args.include_self,
                    "keep the query among the results");

  RatioArgs gender_args;
  RatioArgs ethnicity_args;
  ethnicity_args.ks = {10};
  auto add_ratio = [&](const char* name, const char* help, RatioArgs& r,
                       bool with_queries) {
    CLI::App* sub = app.add_subcommand(name, help);
    sub->add_option("--embeddings", r.embeddings, "embedding file")
        ->required()
        ->check(CLI::ExistingFile);
    sub->add_option("--labels", r.labels, "token,label file")
        ->required()
        ->check(CLI::ExistingFile);
    sub->add_option("--k", r.ks, "neighbor counts to evaluate")->capture_default_str();
    sub->add_option("--out", r.out, "CSV report");
    if (with_queries) {
      sub->add_option("--query", r.queries, "first names to classify by kNN vote");
      sub->add_option("--classify-k", r.classify_k, "neighbors in the vote")
          ->capture_default_str();
    }
    add_seed(sub);
    return sub;
  };
  CLI::App* gender_cmd = add_ratio(
      "eval-gender", "same-gender ratio among nearest neighbors", gender_args, true);
  CLI::App* ethnicity_cmd =
      add_ratio("eval-ethnicity", "same-ethnicity ratio among nearest neighbors",
                ethnicity_args, false);

  NationalityArgs nat_args;
  CLI::App* nat_cmd = app.add_subcommand(
      "eval-nationality", "naive Bayes nationality classifier with weighted F1");
  nat_cmd->add_option("--embeddings", nat_args.embeddings, "embedding file")
      ->required()
      ->check(CLI::ExistingFile);
  nat_cmd->add_option("--labels", nat_args.labels, "first,last,leaf file")
      ->required()
      ->check(CLI::ExistingFile);
  nat_cmd->add_option("--taxonomy", nat_args.taxonomy,
                      "indented taxonomy file (default: the built-in 39-leaf tree)")
      ->check(CLI::ExistingFile);
  nat_cmd->add_option("--train-fraction", nat_args.train_fraction,
                      "per-leaf training share")
      ->capture_default_str();
  nat_cmd->add_option("--out", nat_args.out, "CSV report");
  add_seed(nat_cmd);

  LifespanArgs life;
  CLI::App* life_cmd = app.add_subcommand(
      "lifespan", "ridge lifespan models over the feature grid with Welch tests");
  life_cmd->add_option("--records", life.records, "death records")
      ->required()
      ->check(CLI::ExistingFile);
  life_cmd->add_option("--format", life.format, "csv or ssdi")
      ->capture_default_str()
      ->check(CLI::IsMember({"csv", "ssdi"}));
  life_cmd->add_option("--embeddings", life.embeddings,
                       "name embeddings (TwEbd; ShEbd permutes them)")
      ->check(CLI::ExistingFile);
  life_cmd->add_option("--email-embeddings", life.email_embeddings,
                       "externally trained embeddings (EmEbd)")
      ->check(CLI::ExistingFile);
  add_demographic_options(life_cmd, life.demographics);
  life_cmd->add_option("--flags", life.flags,
                       "demographic subsets such as BSGEN, BS or none "
                       "(default: all 32)");
  life_cmd->add_option("--modes", life.modes,
                       "NoEbd, ShEbd, EmEbd, TwEbd (default: all available)");
  life_cmd->add_option("--runs", life.experiment.runs, "random splits")
      ->capture_default_str();
  life_cmd->add_option("--train-fraction", life.experiment.train_fraction,
                       "training share of each split")
      ->capture_default_str();
  life_cmd->add_option("--lambda", life.experiment.lambda, "ridge penalty")
      ->capture_default_str();
  life_cmd->add_option("--workers", life.experiment.workers,
                       "settings fitted in parallel")
      ->capture_default_str();
  life_cmd->add_option("--out", life.out, "output directory")->required();
  add_seed(life_cmd);

  ResidualArgs res;
  CLI::App* res_cmd = app.add_subcommand(
      "residual", "two-stage residual analysis, name gains and the sign test");
  res_cmd->add_option("--records", res.records, "death records")
      ->required()
      ->check(CLI::ExistingFile);
  res_cmd->add_option("--format", res.format, "csv or ssdi")
      ->capture_default_str()
      ->check(CLI::IsMember({"csv", "ssdi"}));
  res_cmd->add_option("--embeddings", res.embeddings, "name embeddings")
      ->required()
      ->check(CLI::ExistingFile);
  res_cmd->add_option("--pairs", res.pairs,
                      "diminutive,formal file (default: the built-in 155 pairs)")
      ->check(CLI::ExistingFile);
  add_demographic_options(res_cmd, res.demographics);
  res_cmd->add_option("--flags", res.flags, "demographic model features")
      ->capture_default_str();
  res_cmd->add_option("--lambda", res.lambda, "ridge penalty")->capture_default_str();
  res_cmd->add_option("--min-count", res.rank.min_count,
                      "minimum occurrences for ranking")
      ->capture_default_str();
  res_cmd->add_option("--birth-from", res.rank.birth_from, "first birth year counted")
      ->capture_default_str();
  res_cmd->add_option("--birth-to", res.rank.birth_to, "last birth year counted")
      ->capture_default_str();
  res_cmd->add_option("--top", res.rank.top_n, "names per ranked list")
      ->capture_default_str();
  res_cmd->add_option("--out", res.out, "output directory")->required();
  add_seed(res_cmd);

  SynthArgs syn;
  CLI::App* syn_cmd = app.add_subcommand(
      "synth", "synthetic homophily corpus and death records with planted effects");
  syn_cmd->add_option("--out", syn.out, "output directory")->required();
  syn_cmd->add_option("--groups", syn.config.n_groups, "name groups")
      ->capture_default_str();
  syn_cmd->add_option("--names-per-group", syn.config.names_per_group,
                      "names in each group's pool")
      ->capture_default_str();
  syn_cmd->add_option("--users", syn.config.n_users, "users, one context each")
      ->capture_default_str();
  syn_cmd->add_option("--p-within", syn.config.p_within,
                      "chance a context member shares the owner's group")
      ->capture_default_str();
  syn_cmd->add_option("--context-min", syn.config.context_len_range.first,
                      "fewest members per context")
      ->capture_default_str();
  syn_cmd->add_option("--context-max", syn.config.context_len_range.second,
                      "most members per context")
      ->capture_default_str();
  syn_cmd->add_option("--records", syn.config.n_records, "death records")
      ->capture_default_str();
  syn_cmd->add_option("--effect", syn.effects,
                      "GROUP:YEARS lifespan shift for last names of a group");
  syn_cmd->add_option("--noise-sd", syn.config.demographic_noise_sd,
                      "lifespan noise in years")
      ->capture_default_str();
  syn_cmd->add_option("--birth-year-start", syn.config.birth_year_start,
                      "first of 130 birth years")
      ->capture_default_str();
  add_seed(syn_cmd);

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    CLI::App* sub = app.get_subcommands().front();
    Manifest manifest(*sub, seed);
    if (sub == ingest_cmd) {
      run_ingest(ingest, manifest);
    } else if (sub == corpus_cmd) {
      run_build_corpus(corpus, manifest);
    } else if (sub == train_cmd) {
      run_train(train_args, manifest);
    } else if (sub == knn_cmd) {
      run_knn(knn_args);
    } else if (sub == gender_cmd) {
      run_ratio_eval(gender_args, LabelKind::kGender, &manifest);
    } else if (sub == ethnicity_cmd) {
      run_ratio_eval(ethnicity_args, LabelKind::kEthnicity, &manifest);
    } else if (sub == nat_cmd) {
      run_eval_nationality(nat_args, manifest);
    } else if (sub == life_cmd) {
      run_lifespan(life, manifest);
    } else if (sub == res_cmd) {
      run_residual(res, manifest);
    } else if (sub == syn_cmd) {
      run_synth(syn, manifest);
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}

}  // namespace namecraft
