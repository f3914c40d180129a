#include "namecraft/vocabulary.hpp"

#include <algorithm>
#include <map>
#include <numeric>

#include "namecraft/error.hpp"

namespace namecraft {

Vocabulary Vocabulary::build(const TrainingCorpus& corpus, int min_count) {
  std::unordered_map<std::string, std::uint64_t> counts;
  for (const auto& context : corpus.contexts()) {
    for (const auto& token : context) ++counts[token.key()];
  }
  std::vector<std::pair<std::string, std::uint64_t>> kept;
  for (auto& [key, count] : counts) {
    if (count >= static_cast<std::uint64_t>(std::max(min_count, 0))) {
      kept.emplace_back(key, count);
    }
  }
  std::sort(kept.begin(), kept.end(), [](const auto& a, const auto& b) {
    if (a.second != b.second) return a.second > b.second;
    return a.first < b.first;
  });

  Vocabulary vocab;
  vocab.min_count_ = min_count;
  vocab.keys_.reserve(kept.size());
  vocab.counts_.reserve(kept.size());
  for (auto& [key, count] : kept) {
    vocab.index_.emplace(key, vocab.keys_.size());
    vocab.keys_.push_back(std::move(key));
    vocab.counts_.push_back(count);
  }
  return vocab;
}

Vocabulary Vocabulary::from_keys(std::vector<std::string> keys,
                                 std::vector<std::uint64_t> counts) {
  if (!counts.empty() && counts.size() != keys.size()) {
    throw Error("vocabulary counts do not match keys");
  }
  if (counts.empty()) counts.assign(keys.size(), 0);
  Vocabulary vocab;
  for (std::size_t i = 0; i < keys.size(); ++i) {
    if (!vocab.index_.emplace(keys[i], i).second) {
      throw Error("duplicate token in vocabulary: " + keys[i]);
    }
  }
  vocab.keys_ = std::move(keys);
  vocab.counts_ = std::move(counts);
  return vocab;
}

std::optional<std::size_t> Vocabulary::find(const std::string& key) const {
  auto it = index_.find(key);
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

std::size_t Vocabulary::at(const std::string& key) const {
  auto index = find(key);
  if (!index) throw Error("token not in vocabulary: " + key);
  return *index;
}

}  // namespace namecraft
