#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace namecraft {

enum class Role { kFirst, kLast };

// A normalized name part. Keys carry a role prefix ("f:maria", "l:garcia")
// so that homographs in the two roles stay distinct in one vocabulary.
struct NameToken {
  std::string text;
  Role role = Role::kFirst;

  std::string key() const;
  static std::optional<NameToken> from_key(std::string_view key);

  friend bool operator==(const NameToken&, const NameToken&) = default;
};

std::string_view role_prefix(Role role);

struct UserProfile {
  std::string id;
  std::string raw_name;
  std::int64_t follower_count = 0;
  std::int64_t followee_count = 0;
  double daily_posts = 0.0;

  // follower_count / max(followee_count, 1)
  double celebrity_ratio() const;
};

enum class UserClass { kCelebrity, kOrdinary };

inline constexpr double kCelebrityRatio = 10.0;
inline constexpr std::int64_t kSeedMinLinks = 50;
inline constexpr std::int64_t kSeedMaxLinks = 500;
inline constexpr double kSeedMaxDailyPosts = 10.0;

// NFKD, lowercase, then keep only letters; whitespace separates tokens.
std::vector<std::string> normalize_tokens(std::string_view raw);
// First surviving token of a single name part (a census or SSDI field).
std::optional<std::string> normalize_part(std::string_view raw);

// NFKD, strip combining marks, keep letters and whitespace, lowercase, split.
// Returns (first token, last token) when at least two tokens survive.
std::optional<std::pair<NameToken, NameToken>> normalize_name(
    std::string_view raw);

UserClass classify_user(const UserProfile& profile);
bool is_seed_user(const UserProfile& profile);

enum class InteractionKind { kRetweet, kMention };

struct InteractionRecord {
  InteractionKind kind = InteractionKind::kRetweet;
  std::vector<std::string> participants;
};

// Follower (U_r) and followee (U_e) lists of one seed user. Lists keep input
// order and hold no duplicates.
struct FollowLists {
  std::string owner;
  std::vector<std::string> followers;
  std::vector<std::string> followees;

  // U_r ∩ U_e in follower order.
  std::vector<std::string> friends() const;
  // U_r △ U_e: followers not followed back, then followees not following.
  std::vector<std::string> nonfriends() const;
};

struct ParseStats {
  std::size_t lines = 0;
  std::size_t yielded = 0;
  // Every line not yielded; lines = yielded + skipped.
  std::size_t skipped = 0;
  // The subset of skipped lines that failed to parse.
  std::size_t malformed = 0;
};

// Pulls interaction records from a line-delimited JSON stream:
//   {"kind": "retweet" | "mention" | ..., "users": ["u0", "u1", ...]}
// Other kinds and blank lines are skipped; lines that fail to parse or break
// the participant-count rules are counted as malformed.
class InteractionStreamParser {
 public:
  explicit InteractionStreamParser(std::istream& in);

  std::optional<InteractionRecord> next();
  const ParseStats& stats() const { return stats_; }

 private:
  std::istream& in_;
  ParseStats stats_;
};

std::vector<InteractionRecord> read_interactions(std::istream& in,
                                                 ParseStats* stats = nullptr);
std::vector<UserProfile> read_profiles(std::istream& in,
                                       ParseStats* stats = nullptr);
std::vector<FollowLists> read_follow_lists(std::istream& in,
                                           ParseStats* stats = nullptr);

void write_interaction(std::ostream& out, const InteractionRecord& record);
void write_profile(std::ostream& out, const UserProfile& profile);
void write_follow_lists(std::ostream& out, const FollowLists& lists);

}  // namespace namecraft
