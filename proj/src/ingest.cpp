#include "namecraft/ingest.hpp"

#include <unicode/locid.h>
#include <unicode/normalizer2.h>
#include <unicode/uchar.h>
#include <unicode/unistr.h>

#include <algorithm>
#include <cctype>
#include <istream>
#include <ostream>
#include <string>
#include <unordered_set>

#include "json.hpp"
#include "namecraft/error.hpp"

namespace namecraft {

using nlohmann::json;

std::string_view role_prefix(Role role) {
  return role == Role::kFirst ? "f:" : "l:";
}

std::string NameToken::key() const {
  std::string out(role_prefix(role));
  out += text;
  return out;
}

std::optional<NameToken> NameToken::from_key(std::string_view key) {
  if (key.size() < 3 || key[1] != ':') return std::nullopt;
  NameToken token;
  if (key[0] == 'f') {
    token.role = Role::kFirst;
  } else if (key[0] == 'l') {
    token.role = Role::kLast;
  } else {
    return std::nullopt;
  }
  token.text = std::string(key.substr(2));
  return token;
}

double UserProfile::celebrity_ratio() const {
  return static_cast<double>(follower_count) /
         static_cast<double>(std::max<std::int64_t>(followee_count, 1));
}

namespace {

const icu::Normalizer2& nfkd() {
  UErrorCode status = U_ZERO_ERROR;
  const icu::Normalizer2* n = icu::Normalizer2::getNFKDInstance(status);
  if (U_FAILURE(status) || n == nullptr) {
    throw Error("ICU NFKD normalizer unavailable");
  }
  return *n;
}

icu::UnicodeString decompose(const icu::UnicodeString& s) {
  UErrorCode status = U_ZERO_ERROR;
  icu::UnicodeString out = nfkd().normalize(s, status);
  if (U_FAILURE(status)) return {};
  return out;
}

}  // namespace

std::vector<std::string> normalize_tokens(std::string_view raw) {
  icu::UnicodeString text = icu::UnicodeString::fromUTF8(
      icu::StringPiece(raw.data(), static_cast<int32_t>(raw.size())));
  text = decompose(text);
  text.toLower(icu::Locale::getRoot());
  // Case mapping can reintroduce combining marks (e.g. U+0130).
  text = decompose(text);

  std::vector<std::string> tokens;
  icu::UnicodeString current;
  auto flush = [&] {
    if (!current.isEmpty()) {
      std::string utf8;
      current.toUTF8String(utf8);
      tokens.push_back(std::move(utf8));
      current.remove();
    }
  };
  for (int32_t i = 0; i < text.length();) {
    const UChar32 c = text.char32At(i);
    i += U16_LENGTH(c);
    if (u_isUWhiteSpace(c)) {
      flush();
    } else if ((U_GET_GC_MASK(c) & U_GC_L_MASK) != 0) {
      current.append(c);
    }
    // Marks, digits, punctuation, symbols, emoji and controls are dropped.
  }
  flush();
  return tokens;
}

std::optional<std::pair<NameToken, NameToken>> normalize_name(
    std::string_view raw) {
  const auto tokens = normalize_tokens(raw);
  if (tokens.size() < 2) return std::nullopt;
  return std::make_pair(NameToken{tokens.front(), Role::kFirst},
                        NameToken{tokens.back(), Role::kLast});
}

std::optional<std::string> normalize_part(std::string_view raw) {
  auto tokens = normalize_tokens(raw);
  if (tokens.empty()) return std::nullopt;
  return std::move(tokens.front());
}

UserClass classify_user(const UserProfile& profile) {
  return profile.celebrity_ratio() > kCelebrityRatio ? UserClass::kCelebrity
                                                     : UserClass::kOrdinary;
}

bool is_seed_user(const UserProfile& profile) {
  auto in_range = [](std::int64_t v) {
    return v >= kSeedMinLinks && v <= kSeedMaxLinks;
  };
  return in_range(profile.follower_count) &&
         in_range(profile.followee_count) &&
         profile.daily_posts < kSeedMaxDailyPosts;
}

namespace {

std::vector<std::string> dedupe(const std::vector<std::string>& ids) {
  std::vector<std::string> out;
  std::unordered_set<std::string> seen;
  for (const auto& id : ids) {
    if (seen.insert(id).second) out.push_back(id);
  }
  return out;
}

}  // namespace

std::vector<std::string> FollowLists::friends() const {
  const std::unordered_set<std::string> ees(followees.begin(), followees.end());
  std::vector<std::string> out;
  for (const auto& id : followers) {
    if (ees.count(id) != 0) out.push_back(id);
  }
  return out;
}

std::vector<std::string> FollowLists::nonfriends() const {
  const std::unordered_set<std::string> ers(followers.begin(), followers.end());
  const std::unordered_set<std::string> ees(followees.begin(), followees.end());
  std::vector<std::string> out;
  for (const auto& id : followers) {
    if (ees.count(id) == 0) out.push_back(id);
  }
  for (const auto& id : followees) {
    if (ers.count(id) == 0) out.push_back(id);
  }
  return out;
}

namespace {

bool is_blank(const std::string& line) {
  return std::all_of(line.begin(), line.end(),
                     [](unsigned char c) { return std::isspace(c) != 0; });
}

std::vector<std::string> string_array(const json& j) {
  if (!j.is_array()) throw Error("expected array of ids");
  std::vector<std::string> out;
  out.reserve(j.size());
  for (const auto& v : j) {
    if (!v.is_string()) throw Error("expected string id");
    out.push_back(v.get<std::string>());
  }
  return out;
}

template <typename T>
T nonneg_number(const json& obj, const char* field) {
  const json& v = obj.at(field);
  if (!v.is_number()) throw Error(std::string("non-numeric ") + field);
  const T value = v.get<T>();
  if (value < 0) throw Error(std::string("negative ") + field);
  return value;
}

}  // namespace

InteractionStreamParser::InteractionStreamParser(std::istream& in) : in_(in) {
  if (!in_.good()) throw Error("interaction stream is not readable");
}

std::optional<InteractionRecord> InteractionStreamParser::next() {
  std::string line;
  while (std::getline(in_, line)) {
    ++stats_.lines;
    if (is_blank(line)) {
      ++stats_.skipped;
      continue;
    }
    json obj = json::parse(line, nullptr, /*allow_exceptions=*/false);
    if (obj.is_discarded() || !obj.is_object() || !obj.contains("kind") ||
        !obj["kind"].is_string()) {
      ++stats_.malformed;
      ++stats_.skipped;
      continue;
    }
    const std::string kind = obj["kind"].get<std::string>();
    if (kind != "retweet" && kind != "mention") {
      ++stats_.skipped;
      continue;
    }
    InteractionRecord record;
    try {
      record.participants = string_array(obj.at("users"));
    } catch (const std::exception&) {
      ++stats_.malformed;
      ++stats_.skipped;
      continue;
    }
    if (kind == "retweet") {
      record.kind = InteractionKind::kRetweet;
      if (record.participants.size() != 2) {
        ++stats_.malformed;
        ++stats_.skipped;
        continue;
      }
    } else {
      record.kind = InteractionKind::kMention;
      if (record.participants.size() < 2) {
        ++stats_.malformed;
        ++stats_.skipped;
        continue;
      }
    }
    ++stats_.yielded;
    return record;
  }
  if (in_.bad()) throw Error("read failure on interaction stream");
  return std::nullopt;
}

std::vector<InteractionRecord> read_interactions(std::istream& in,
                                                 ParseStats* stats) {
  InteractionStreamParser parser(in);
  std::vector<InteractionRecord> out;
  while (auto record = parser.next()) out.push_back(std::move(*record));
  if (stats != nullptr) *stats = parser.stats();
  return out;
}

std::vector<UserProfile> read_profiles(std::istream& in, ParseStats* stats) {
  ParseStats local;
  std::vector<UserProfile> out;
  std::string line;
  while (std::getline(in, line)) {
    ++local.lines;
    if (is_blank(line)) {
      ++local.skipped;
      continue;
    }
    try {
      const json obj = json::parse(line);
      UserProfile p;
      p.id = obj.at("id").get<std::string>();
      p.raw_name = obj.at("name").get<std::string>();
      p.follower_count = nonneg_number<std::int64_t>(obj, "followers");
      p.followee_count = nonneg_number<std::int64_t>(obj, "followees");
      p.daily_posts = obj.contains("daily_posts")
                          ? nonneg_number<double>(obj, "daily_posts")
                          : 0.0;
      out.push_back(std::move(p));
      ++local.yielded;
    } catch (const std::exception&) {
      ++local.malformed;
      ++local.skipped;
    }
  }
  if (stats != nullptr) *stats = local;
  return out;
}

std::vector<FollowLists> read_follow_lists(std::istream& in,
                                           ParseStats* stats) {
  ParseStats local;
  std::vector<FollowLists> out;
  std::string line;
  while (std::getline(in, line)) {
    ++local.lines;
    if (is_blank(line)) {
      ++local.skipped;
      continue;
    }
    try {
      const json obj = json::parse(line);
      FollowLists lists;
      lists.owner = obj.at("owner").get<std::string>();
      lists.followers = dedupe(string_array(obj.at("followers")));
      lists.followees = dedupe(string_array(obj.at("followees")));
      out.push_back(std::move(lists));
      ++local.yielded;
    } catch (const std::exception&) {
      ++local.malformed;
      ++local.skipped;
    }
  }
  if (stats != nullptr) *stats = local;
  return out;
}

void write_interaction(std::ostream& out, const InteractionRecord& record) {
  json obj;
  obj["kind"] =
      record.kind == InteractionKind::kRetweet ? "retweet" : "mention";
  obj["users"] = record.participants;
  out << obj.dump() << '\n';
}

void write_profile(std::ostream& out, const UserProfile& profile) {
  json obj;
  obj["id"] = profile.id;
  obj["name"] = profile.raw_name;
  obj["followers"] = profile.follower_count;
  obj["followees"] = profile.followee_count;
  obj["daily_posts"] = profile.daily_posts;
  out << obj.dump() << '\n';
}

void write_follow_lists(std::ostream& out, const FollowLists& lists) {
  json obj;
  obj["owner"] = lists.owner;
  obj["followers"] = lists.followers;
  obj["followees"] = lists.followees;
  out << obj.dump() << '\n';
}

}  // namespace namecraft
