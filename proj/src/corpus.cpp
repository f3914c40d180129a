#include "namecraft/corpus.hpp"

#include <algorithm>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>

#include "namecraft/error.hpp"

namespace namecraft {

namespace {

struct VariantName {
  CorpusVariant variant;
  std::string_view name;
};

constexpr VariantName kVariantNames[] = {
    {CorpusVariant::kRetweet, "retweet"},
    {CorpusVariant::kMention, "mention"},
    {CorpusVariant::kFollower, "follower"},
    {CorpusVariant::kFollowee, "followee"},
    {CorpusVariant::kFolloweeStar, "followee-star"},
    {CorpusVariant::kFriend, "friend"},
    {CorpusVariant::kNonFriend, "nonfriend"},
    {CorpusVariant::kAggregated, "aggregated"},
    {CorpusVariant::kAggregatedStar, "aggregated-star"},
};

}  // namespace

std::string_view variant_name(CorpusVariant variant) {
  for (const auto& v : kVariantNames) {
    if (v.variant == variant) return v.name;
  }
  throw Error("unknown corpus variant");
}

CorpusVariant parse_variant(std::string_view name) {
  std::string norm;
  for (char c : name) {
    if (c == '_') c = '-';
    norm += static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  }
  if (!norm.empty() && norm.back() == '*') {
    norm.pop_back();
    norm += "-star";
  }
  if (norm == "friends") norm = "friend";
  if (norm == "nonfriends") norm = "nonfriend";
  for (const auto& v : kVariantNames) {
    if (v.name == norm) return v.variant;
  }
  throw Error("unknown corpus variant: " + std::string(name));
}

const std::vector<CorpusVariant>& all_variants() {
  static const std::vector<CorpusVariant> kAll = [] {
    std::vector<CorpusVariant> out;
    for (const auto& v : kVariantNames) out.push_back(v.variant);
    return out;
  }();
  return kAll;
}

bool TrainingCorpus::add_context(Context context) {
  if (context.size() < 2) return false;
  token_count_ += context.size();
  contexts_.push_back(std::move(context));
  return true;
}

void TrainingCorpus::append(const TrainingCorpus& other) {
  for (const auto& context : other.contexts_) add_context(context);
}

ProfileIndex::ProfileIndex(const std::vector<UserProfile>& profiles) {
  for (const auto& p : profiles) {
    auto name = normalize_name(p.raw_name);
    if (!name) continue;
    users_.insert_or_assign(
        p.id, ResolvedUser{name->first, name->second, p.follower_count});
  }
}

const ResolvedUser* ProfileIndex::find(const std::string& id) const {
  auto it = users_.find(id);
  return it == users_.end() ? nullptr : &it->second;
}

namespace {

Context resolve(const std::vector<std::string>& ids,
                const ProfileIndex& profiles, bool drop_celebrities) {
  Context context;
  context.reserve(ids.size() * 2);
  for (const auto& id : ids) {
    const ResolvedUser* user = profiles.find(id);
    if (user == nullptr) continue;
    if (drop_celebrities && user->follower_count > kStarFollowerLimit) {
      continue;
    }
    context.push_back(user->first);
    context.push_back(user->last);
  }
  return context;
}

void add_interactions(TrainingCorpus& corpus, InteractionKind kind,
                      const std::vector<InteractionRecord>& interactions,
                      const ProfileIndex& profiles) {
  for (const auto& record : interactions) {
    if (record.kind != kind) continue;
    corpus.add_context(resolve(record.participants, profiles, false));
  }
}

enum class FollowPart { kFollowers, kFollowees, kFriends, kNonFriends };

void add_follow(TrainingCorpus& corpus, FollowPart part, bool drop_celebrities,
                const std::vector<FollowLists>& follow_lists,
                const ProfileIndex& profiles) {
  for (const auto& lists : follow_lists) {
    switch (part) {
      case FollowPart::kFollowers:
        corpus.add_context(resolve(lists.followers, profiles, drop_celebrities));
        break;
      case FollowPart::kFollowees:
        corpus.add_context(resolve(lists.followees, profiles, drop_celebrities));
        break;
      case FollowPart::kFriends:
        corpus.add_context(resolve(lists.friends(), profiles, drop_celebrities));
        break;
      case FollowPart::kNonFriends:
        corpus.add_context(
            resolve(lists.nonfriends(), profiles, drop_celebrities));
        break;
    }
  }
}

}  // namespace

TrainingCorpus build_corpus(CorpusVariant variant,
                            const std::vector<InteractionRecord>& interactions,
                            const std::vector<FollowLists>& follow_lists,
                            const ProfileIndex& profiles) {
  TrainingCorpus corpus(variant);
  switch (variant) {
    case CorpusVariant::kRetweet:
      add_interactions(corpus, InteractionKind::kRetweet, interactions,
                       profiles);
      break;
    case CorpusVariant::kMention:
      add_interactions(corpus, InteractionKind::kMention, interactions,
                       profiles);
      break;
    case CorpusVariant::kFollower:
      add_follow(corpus, FollowPart::kFollowers, false, follow_lists, profiles);
      break;
    case CorpusVariant::kFollowee:
      add_follow(corpus, FollowPart::kFollowees, false, follow_lists, profiles);
      break;
    case CorpusVariant::kFolloweeStar:
      add_follow(corpus, FollowPart::kFollowees, true, follow_lists, profiles);
      break;
    case CorpusVariant::kFriend:
      add_follow(corpus, FollowPart::kFriends, false, follow_lists, profiles);
      break;
    case CorpusVariant::kNonFriend:
      add_follow(corpus, FollowPart::kNonFriends, false, follow_lists,
                 profiles);
      break;
    case CorpusVariant::kAggregated:
    case CorpusVariant::kAggregatedStar: {
      const CorpusVariant followee = variant == CorpusVariant::kAggregated
                                         ? CorpusVariant::kFollowee
                                         : CorpusVariant::kFolloweeStar;
      for (CorpusVariant part :
           {CorpusVariant::kRetweet, CorpusVariant::kMention,
            CorpusVariant::kFollower, followee}) {
        corpus.append(
            build_corpus(part, interactions, follow_lists, profiles));
      }
      break;
    }
    default:
      throw Error("unknown corpus variant");
  }
  return corpus;
}

CorpusStats corpus_stats(const TrainingCorpus& corpus, int min_count) {
  std::map<std::string, std::size_t> counts;
  for (const auto& context : corpus.contexts()) {
    for (const auto& token : context) ++counts[token.key()];
  }
  CorpusStats stats;
  stats.token_count = corpus.token_count();
  for (const auto& [key, count] : counts) {
    if (count >= static_cast<std::size_t>(min_count)) ++stats.vocab_size;
  }
  return stats;
}

void write_corpus(std::ostream& out, const TrainingCorpus& corpus) {
  for (const auto& context : corpus.contexts()) {
    for (std::size_t i = 0; i < context.size(); ++i) {
      if (i != 0) out << ' ';
      out << context[i].key();
    }
    out << '\n';
  }
}

TrainingCorpus read_corpus(std::istream& in,
                           std::optional<CorpusVariant> variant) {
  TrainingCorpus corpus(variant);
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    std::istringstream fields(line);
    Context context;
    std::string key;
    while (fields >> key) {
      auto token = NameToken::from_key(key);
      if (!token) {
        throw Error("corpus line " + std::to_string(line_no) +
                    ": token without f:/l: role prefix: " + key);
      }
      context.push_back(std::move(*token));
    }
    corpus.add_context(std::move(context));
  }
  if (in.bad()) throw Error("read failure on corpus stream");
  return corpus;
}

}  // namespace namecraft
