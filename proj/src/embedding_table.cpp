#include "namecraft/embedding_table.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <limits>
#include <sstream>

#include "namecraft/error.hpp"

namespace namecraft {

EmbeddingTable::EmbeddingTable(Vocabulary vocab, int dim, bool with_output)
    : vocab_(std::move(vocab)), dim_(dim) {
  if (dim <= 0) throw Error("embedding dimension must be positive");
  input_.assign(vocab_.size() * static_cast<std::size_t>(dim_), 0.0);
  if (with_output) output_.assign(input_.size(), 0.0);
}

std::span<const double> EmbeddingTable::vector(const std::string& key) const {
  return input(vocab_.at(key));
}

bool EmbeddingTable::all_finite() const {
  auto finite = [](double v) { return std::isfinite(v); };
  return std::all_of(input_.begin(), input_.end(), finite) &&
         std::all_of(output_.begin(), output_.end(), finite);
}

namespace {

double dot(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

}  // namespace

double cosine(std::span<const double> a, std::span<const double> b) {
  const double na = std::sqrt(dot(a, a));
  const double nb = std::sqrt(dot(b, b));
  if (na == 0.0 || nb == 0.0) return 0.0;
  return dot(a, b) / (na * nb);
}

CosineIndex::CosineIndex(const EmbeddingTable& table,
                         std::vector<std::size_t> rows)
    : table_(&table), rows_(std::move(rows)) {
  const auto dim = static_cast<std::size_t>(table.dim());
  unit_.assign(rows_.size() * dim, 0.0);
  for (std::size_t i = 0; i < rows_.size(); ++i) {
    const auto v = table.input(rows_[i]);
    const double norm = std::sqrt(dot(v, v));
    if (norm == 0.0) continue;
    for (std::size_t j = 0; j < dim; ++j) unit_[i * dim + j] = v[j] / norm;
  }
}

CosineIndex::CosineIndex(const EmbeddingTable& table)
    : CosineIndex(table, [&] {
        std::vector<std::size_t> all(table.size());
        for (std::size_t i = 0; i < all.size(); ++i) all[i] = i;
        return all;
      }()) {}

std::vector<IndexedNeighbor> CosineIndex::query(
    std::span<const double> vector, int k,
    std::optional<std::size_t> exclude_row) const {
  if (k < 1) throw Error("k must be at least 1");
  const auto dim = static_cast<std::size_t>(table_->dim());
  if (vector.size() != dim) throw Error("query dimension mismatch");
  const double norm = std::sqrt(dot(vector, vector));

  std::vector<IndexedNeighbor> scored;
  scored.reserve(rows_.size());
  for (std::size_t i = 0; i < rows_.size(); ++i) {
    if (exclude_row && rows_[i] == *exclude_row) continue;
    double sim = 0.0;
    if (norm != 0.0) {
      sim = dot(vector, {unit_.data() + i * dim, dim}) / norm;
    }
    scored.push_back({rows_[i], sim});
  }
  const auto& vocab = table_->vocab();
  auto better = [&](const IndexedNeighbor& a, const IndexedNeighbor& b) {
    if (a.similarity != b.similarity) return a.similarity > b.similarity;
    return vocab.key(a.row) < vocab.key(b.row);
  };
  const std::size_t take =
      std::min(scored.size(), static_cast<std::size_t>(k));
  std::partial_sort(scored.begin(), scored.begin() + take, scored.end(),
                    better);
  scored.resize(take);
  return scored;
}

std::vector<Neighbor> knn(const EmbeddingTable& table, const std::string& query,
                          int k, bool exclude_self) {
  const std::size_t row = table.vocab().at(query);
  CosineIndex index(table);
  std::vector<Neighbor> out;
  for (const auto& n :
       index.query(table.input(row), k,
                   exclude_self ? std::optional<std::size_t>(row)
                                : std::nullopt)) {
    out.push_back({table.vocab().key(n.row), n.similarity});
  }
  return out;
}

void save_embeddings(std::ostream& out, const EmbeddingTable& table) {
  out << table.size() << ' ' << table.dim() << '\n';
  char buf[64];
  for (std::size_t i = 0; i < table.size(); ++i) {
    out << table.vocab().key(i);
    for (double v : table.input(i)) {
      // Shortest representation that round-trips exactly.
      auto [end, ec] = std::to_chars(buf, buf + sizeof(buf), v);
      out << ' ' << std::string_view(buf, end - buf);
    }
    out << '\n';
  }
  if (!out) throw Error("failed to write embeddings");
}

void save_embeddings(const std::string& path, const EmbeddingTable& table) {
  std::ofstream out(path);
  if (!out) throw Error("cannot open for writing: " + path);
  save_embeddings(out, table);
}

namespace {

[[noreturn]] void fail_at(std::size_t line_no, const std::string& what) {
  throw Error("embeddings line " + std::to_string(line_no) + ": " + what);
}

bool parse_double(std::string_view text, double& value) {
  auto [ptr, ec] =
      std::from_chars(text.data(), text.data() + text.size(), value);
  return ec == std::errc() && ptr == text.data() + text.size() &&
         std::isfinite(value);
}

std::vector<std::string_view> split_ws(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && std::isspace(static_cast<unsigned char>(line[i])))
      ++i;
    std::size_t j = i;
    while (j < line.size() &&
           !std::isspace(static_cast<unsigned char>(line[j])))
      ++j;
    if (j > i) out.push_back(line.substr(i, j - i));
    i = j;
  }
  return out;
}

}  // namespace

EmbeddingTable load_embeddings(std::istream& in) {
  std::string line;
  std::size_t line_no = 1;
  if (!std::getline(in, line)) fail_at(1, "missing header");
  const auto header = split_ws(line);
  std::size_t vocab_size = 0;
  int dim = 0;
  {
    double v = 0, d = 0;
    if (header.size() != 2 || !parse_double(header[0], v) ||
        !parse_double(header[1], d) || v < 0 || d < 1 || v != std::floor(v) ||
        d != std::floor(d)) {
      fail_at(1, "malformed header, expected '<vocab_size> <dim>'");
    }
    vocab_size = static_cast<std::size_t>(v);
    dim = static_cast<int>(d);
  }

  std::vector<std::string> keys;
  std::vector<double> values;
  keys.reserve(vocab_size);
  values.reserve(vocab_size * static_cast<std::size_t>(dim));
  std::unordered_map<std::string, std::size_t> seen;
  while (std::getline(in, line)) {
    ++line_no;
    const auto fields = split_ws(line);
    if (fields.empty()) continue;
    if (keys.size() == vocab_size) {
      fail_at(line_no, "more token lines than the header's vocab size " +
                           std::to_string(vocab_size));
    }
    if (fields.size() != static_cast<std::size_t>(dim) + 1) {
      fail_at(line_no, "expected " + std::to_string(dim) + " values, got " +
                           std::to_string(fields.size() - 1));
    }
    std::string key(fields[0]);
    if (!seen.emplace(key, line_no).second) {
      fail_at(line_no, "duplicate token " + key);
    }
    for (std::size_t j = 1; j < fields.size(); ++j) {
      double value = 0.0;
      if (!parse_double(fields[j], value)) {
        fail_at(line_no, "bad number '" + std::string(fields[j]) + "'");
      }
      values.push_back(value);
    }
    keys.push_back(std::move(key));
  }
  if (keys.size() != vocab_size) {
    fail_at(line_no, "header declares " + std::to_string(vocab_size) +
                         " tokens, found " + std::to_string(keys.size()));
  }
  EmbeddingTable table(Vocabulary::from_keys(std::move(keys)), dim,
                       /*with_output=*/false);
  table.input_data() = std::move(values);
  return table;
}

EmbeddingTable load_embeddings(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open embeddings file: " + path);
  return load_embeddings(in);
}

}  // namespace namecraft
