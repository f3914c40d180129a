#include "namecraft/residual.hpp"

#include <algorithm>
#include <fstream>
#include <iomanip>
#include <map>
#include <ostream>
#include <sstream>

#include "namecraft/embedded_data.hpp"
#include "namecraft/error.hpp"
#include "namecraft/experiment.hpp"
#include "namecraft/stats.hpp"

namespace namecraft {

std::span<const double> ResidualModel::slot_weights(Role role) const {
  const auto d = static_cast<std::size_t>(dim);
  const double* base = residual.weights.data() + (role == Role::kFirst ? 0 : d);
  return {base, d};
}

void embedding_features(const EmbeddingTable& table, const DeathRecord& record,
                        std::span<double> out) {
  const auto d = static_cast<std::size_t>(table.dim());
  if (out.size() != 2 * d) throw Error("embedding feature row has the wrong width");
  std::fill(out.begin(), out.end(), 0.0);
  if (auto row = table.vocab().find(record.first.key())) {
    const auto v = table.input(*row);
    std::copy(v.begin(), v.end(), out.begin());
  }
  if (auto row = table.vocab().find(record.last.key())) {
    const auto v = table.input(*row);
    std::copy(v.begin(), v.end(), out.begin() + static_cast<std::ptrdiff_t>(d));
  }
}

ResidualModel fit_residual(const std::vector<DeathRecord>& records,
                           const std::vector<RecordDemographics>& demographics,
                           const Featurizer& featurizer,
                           const EmbeddingTable& table,
                           std::uint8_t demographic_flags, double lambda) {
  if (records.empty()) throw Error("residual analysis needs records");
  if (table.dim() < 1) throw Error("residual analysis needs an embedding table");
  ResidualModel model;
  model.demographic_flags = demographic_flags;
  model.table = &table;
  model.dim = table.dim();

  const Eigen::VectorXd y = lifespans(records);
  const FeatureSpec spec{demographic_flags, EmbeddingMode::kNone};
  Eigen::VectorXd residuals;
  {
    const Eigen::MatrixXd Xd = design_matrix(records, demographics, featurizer, spec);
    try {
      model.demographic = fit_ridge(Xd, y, lambda);
    } catch (const Error& e) {
      throw Error(std::string("demographic model: ") + e.what());
    }
    residuals = y - model.demographic.predict(Xd);
  }
  model.residual_mean = residuals.mean();

  const auto width = 2 * static_cast<std::size_t>(model.dim);
  Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor> Xe(
      static_cast<Eigen::Index>(records.size()), static_cast<Eigen::Index>(width));
  for (std::size_t i = 0; i < records.size(); ++i) {
    embedding_features(table, records[i], {Xe.data() + i * width, width});
  }
  try {
    model.residual = fit_ridge(Eigen::MatrixXd(Xe), residuals, lambda);
  } catch (const Error& e) {
    throw Error(std::string("residual model: ") + e.what());
  }
  return model;
}

double vector_gain(const ResidualModel& model, Role role,
                   std::span<const double> vector) {
  const auto w = model.slot_weights(role);
  if (vector.size() != w.size()) throw Error("vector dimension mismatch in gain");
  double g = 0.0;
  for (std::size_t j = 0; j < w.size(); ++j) g += w[j] * vector[j];
  return g;
}

double name_gain(const ResidualModel& model, const NameToken& token) {
  if (model.table == nullptr) throw Error("residual model has no embedding table");
  return vector_gain(model, token.role, model.table->vector(token.key()));
}

RankedNames rank_names(const ResidualModel& model,
                       const std::vector<DeathRecord>& records, Role role,
                       const RankOptions& options) {
  std::map<std::string, std::size_t> counts;
  for (const auto& r : records) {
    const int year = r.birth_year();
    if (year < options.birth_from || year > options.birth_to) continue;
    ++counts[(role == Role::kFirst ? r.first : r.last).key()];
  }
  std::vector<NameGain> eligible;
  for (const auto& [key, count] : counts) {
    if (count < options.min_count) continue;
    if (!model.table->vocab().find(key)) continue;
    const NameToken token = *NameToken::from_key(key);
    eligible.push_back({token, name_gain(model, token), count});
  }
  RankedNames out;
  out.eligible = eligible.size();
  const std::size_t n = std::min(options.top_n, eligible.size());

  auto by_gain_desc = [](const NameGain& a, const NameGain& b) {
    if (a.gain != b.gain) return a.gain > b.gain;
    return a.token.text < b.token.text;
  };
  auto by_gain_asc = [](const NameGain& a, const NameGain& b) {
    if (a.gain != b.gain) return a.gain < b.gain;
    return a.token.text < b.token.text;
  };
  std::vector<NameGain> sorted = eligible;
  std::partial_sort(sorted.begin(), sorted.begin() + static_cast<std::ptrdiff_t>(n),
                    sorted.end(), by_gain_desc);
  out.favorable.assign(sorted.begin(), sorted.begin() + static_cast<std::ptrdiff_t>(n));
  sorted = eligible;
  std::partial_sort(sorted.begin(), sorted.begin() + static_cast<std::ptrdiff_t>(n),
                    sorted.end(), by_gain_asc);
  out.unfavorable.assign(sorted.begin(), sorted.begin() + static_cast<std::ptrdiff_t>(n));
  return out;
}

namespace {

NameToken first_name_token(const std::string& field, std::size_t line_no) {
  auto text = normalize_part(field);
  if (!text) {
    throw Error("name pairs line " + std::to_string(line_no) +
                ": unusable name '" + field + "'");
  }
  return NameToken{*text, Role::kFirst};
}

}  // namespace

std::vector<NamePair> read_name_pairs(std::istream& in) {
  std::vector<NamePair> out;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line[0] == '#') continue;
    const auto comma = line.find(',');
    if (comma == std::string::npos || line.find(',', comma + 1) != std::string::npos) {
      throw Error("name pairs line " + std::to_string(line_no) +
                  ": expected 'diminutive,formal'");
    }
    const std::string a = line.substr(0, comma);
    const std::string b = line.substr(comma + 1);
    if (out.empty() && a == "diminutive" && b == "formal") continue;
    out.emplace_back(first_name_token(a, line_no), first_name_token(b, line_no));
  }
  return out;
}

std::vector<NamePair> read_name_pairs(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open name pairs file: " + path);
  return read_name_pairs(in);
}

const std::vector<NamePair>& builtin_diminutive_pairs() {
  static const std::vector<NamePair> pairs = [] {
    std::istringstream in{std::string(data::diminutive_pairs())};
    return read_name_pairs(in);
  }();
  return pairs;
}

SignTestResult diminutive_sign_test(const ResidualModel& model,
                                    const std::vector<NamePair>& pairs) {
  SignTestResult out;
  out.pairs_total = pairs.size();
  const Vocabulary& vocab = model.table->vocab();
  for (const auto& pair : pairs) {
    if (!vocab.find(pair.first.key()) || !vocab.find(pair.second.key())) {
      out.out_of_vocabulary.push_back(pair);
      continue;
    }
    const double dim_gain = name_gain(model, pair.first);
    const double formal_gain = name_gain(model, pair.second);
    if (formal_gain == dim_gain) {
      ++out.ties;
      continue;
    }
    ++out.pairs_used;
    if (formal_gain > dim_gain) ++out.formal_wins;
  }
  if (out.pairs_used == 0) {
    throw Error("sign test has no usable pairs (" +
                std::to_string(out.out_of_vocabulary.size()) +
                " out of vocabulary, " + std::to_string(out.ties) + " tied)");
  }
  out.win_fraction =
      static_cast<double>(out.formal_wins) / static_cast<double>(out.pairs_used);
  out.p_value = binomial_two_sided_p(out.formal_wins, out.pairs_used);
  return out;
}

void write_ranked_csv(std::ostream& out, const std::vector<NameGain>& names) {
  out << "token,count,gain\n" << std::setprecision(10);
  for (const auto& n : names) {
    out << n.token.key() << ',' << n.count << ',' << n.gain << '\n';
  }
}

}  // namespace namecraft
