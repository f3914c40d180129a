#pragma once

#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "namecraft/vocabulary.hpp"

namespace namecraft {

// Vocabulary plus the |V| x d input matrix (the exported name vectors) and,
// for tables produced by training, the context-side output matrix.
class EmbeddingTable {
 public:
  EmbeddingTable() = default;
  EmbeddingTable(Vocabulary vocab, int dim, bool with_output = true);

  const Vocabulary& vocab() const { return vocab_; }
  int dim() const { return dim_; }
  std::size_t size() const { return vocab_.size(); }
  bool has_output() const { return !output_.empty(); }

  std::span<double> input(std::size_t row) {
    return {input_.data() + row * dim_, static_cast<std::size_t>(dim_)};
  }
  std::span<const double> input(std::size_t row) const {
    return {input_.data() + row * dim_, static_cast<std::size_t>(dim_)};
  }
  std::span<double> output(std::size_t row) {
    return {output_.data() + row * dim_, static_cast<std::size_t>(dim_)};
  }
  std::span<const double> output(std::size_t row) const {
    return {output_.data() + row * dim_, static_cast<std::size_t>(dim_)};
  }

  // Input vector of a token key; throws naming the token when absent.
  std::span<const double> vector(const std::string& key) const;

  std::vector<double>& input_data() { return input_; }
  const std::vector<double>& input_data() const { return input_; }
  std::vector<double>& output_data() { return output_; }
  const std::vector<double>& output_data() const { return output_; }

  bool all_finite() const;

 private:
  Vocabulary vocab_;
  int dim_ = 0;
  std::vector<double> input_;
  std::vector<double> output_;
};

double cosine(std::span<const double> a, std::span<const double> b);

struct Neighbor {
  std::string token;
  double similarity = 0.0;
};

// Top-k tokens by cosine similarity over input vectors, descending, ties by
// token ascending. k is clamped to the number of candidates.
std::vector<Neighbor> knn(const EmbeddingTable& table, const std::string& query,
                          int k, bool exclude_self);

struct IndexedNeighbor {
  std::size_t row = 0;
  double similarity = 0.0;
};

// Exact cosine search over a fixed set of table rows. Rows are normalized once
// at construction; zero vectors score 0 against everything.
class CosineIndex {
 public:
  CosineIndex(const EmbeddingTable& table, std::vector<std::size_t> rows);
  // Indexes every row of the table.
  explicit CosineIndex(const EmbeddingTable& table);

  // Top-k candidates by similarity desc, ties by token key asc. exclude_row
  // drops that row from the results; k is clamped to the candidate count.
  std::vector<IndexedNeighbor> query(std::span<const double> vector, int k,
                                     std::optional<std::size_t> exclude_row =
                                         std::nullopt) const;

  const std::vector<std::size_t>& rows() const { return rows_; }

 private:
  const EmbeddingTable* table_;
  std::vector<std::size_t> rows_;
  std::vector<double> unit_;  // rows_.size() x dim
};

// Text interchange: "<vocab_size> <dim>" header, then one line per token with
// the token followed by dim decimal values (17 significant digits).
void save_embeddings(std::ostream& out, const EmbeddingTable& table);
void save_embeddings(const std::string& path, const EmbeddingTable& table);
EmbeddingTable load_embeddings(std::istream& in);
EmbeddingTable load_embeddings(const std::string& path);

}  // namespace namecraft
