#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "namecraft/ingest.hpp"

namespace namecraft {

enum class CorpusVariant {
  kRetweet,
  kMention,
  kFollower,
  kFollowee,
  kFolloweeStar,
  kFriend,
  kNonFriend,
  kAggregated,
  kAggregatedStar,
};

// Accounts above this follower count are dropped from *_STAR followee lists.
inline constexpr std::int64_t kStarFollowerLimit = 10000;
inline constexpr int kDefaultMinCount = 5;

std::string_view variant_name(CorpusVariant variant);
// Accepts "aggregated-star", "aggregated_star", "followee*", ...; throws on
// anything else.
CorpusVariant parse_variant(std::string_view name);
const std::vector<CorpusVariant>& all_variants();

using Context = std::vector<NameToken>;

class TrainingCorpus {
 public:
  TrainingCorpus() = default;
  explicit TrainingCorpus(std::optional<CorpusVariant> variant)
      : variant_(variant) {}

  // Contexts shorter than two name parts carry no training pair and are
  // dropped; returns whether the context was kept.
  bool add_context(Context context);
  void append(const TrainingCorpus& other);

  std::optional<CorpusVariant> variant() const { return variant_; }
  const std::vector<Context>& contexts() const { return contexts_; }
  std::size_t token_count() const { return token_count_; }
  bool empty() const { return contexts_.empty(); }

 private:
  std::optional<CorpusVariant> variant_;
  std::vector<Context> contexts_;
  std::size_t token_count_ = 0;
};

struct ResolvedUser {
  NameToken first;
  NameToken last;
  std::int64_t follower_count = 0;
};

// user id -> normalized name; profiles whose names do not normalize are left
// out, so ids referring to them drop from contexts.
class ProfileIndex {
 public:
  explicit ProfileIndex(const std::vector<UserProfile>& profiles);

  const ResolvedUser* find(const std::string& id) const;
  std::size_t size() const { return users_.size(); }

 private:
  std::unordered_map<std::string, ResolvedUser> users_;
};

TrainingCorpus build_corpus(CorpusVariant variant,
                            const std::vector<InteractionRecord>& interactions,
                            const std::vector<FollowLists>& follow_lists,
                            const ProfileIndex& profiles);

struct CorpusStats {
  std::size_t vocab_size = 0;
  std::size_t token_count = 0;
};

CorpusStats corpus_stats(const TrainingCorpus& corpus,
                         int min_count = kDefaultMinCount);

// One context per line, tokens separated by single spaces, each carrying its
// role prefix: "f:maria l:garcia f:john l:smith".
void write_corpus(std::ostream& out, const TrainingCorpus& corpus);
TrainingCorpus read_corpus(std::istream& in,
                           std::optional<CorpusVariant> variant = std::nullopt);

}  // namespace namecraft
