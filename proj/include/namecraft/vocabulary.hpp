#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "namecraft/corpus.hpp"

namespace namecraft {

// Token key -> dense index, with occurrence counts. Indices are assigned by
// (count desc, key asc).
class Vocabulary {
 public:
  Vocabulary() = default;

  static Vocabulary build(const TrainingCorpus& corpus,
                          int min_count = kDefaultMinCount);
  // Vocabulary for externally supplied tables; keeps the given order and
  // accepts any counts. Throws on duplicate keys.
  static Vocabulary from_keys(std::vector<std::string> keys,
                              std::vector<std::uint64_t> counts = {});

  std::size_t size() const { return keys_.size(); }
  bool empty() const { return keys_.empty(); }
  int min_count() const { return min_count_; }

  std::optional<std::size_t> find(const std::string& key) const;
  // Throws naming the key when it is not in the vocabulary.
  std::size_t at(const std::string& key) const;
  const std::string& key(std::size_t index) const { return keys_[index]; }
  std::uint64_t count(std::size_t index) const { return counts_[index]; }
  const std::vector<std::uint64_t>& counts() const { return counts_; }
  const std::vector<std::string>& keys() const { return keys_; }

 private:
  std::vector<std::string> keys_;
  std::vector<std::uint64_t> counts_;
  std::unordered_map<std::string, std::size_t> index_;
  int min_count_ = 0;
};

}  // namespace namecraft
