#include <map>
#include <set>
#include <sstream>

#include "doctest.h"
#include "namecraft/corpus.hpp"
#include "namecraft/error.hpp"
#include "namecraft/random.hpp"

using namespace namecraft;

namespace {

UserProfile profile(const std::string& id, const std::string& name,
                    std::int64_t followers = 100) {
  UserProfile p;
  p.id = id;
  p.raw_name = name;
  p.follower_count = followers;
  p.followee_count = 100;
  return p;
}

std::vector<std::string> keys(const Context& c) {
  std::vector<std::string> out;
  for (const auto& t : c) out.push_back(t.key());
  return out;
}

// Random users, interactions and follow lists; some users are celebrities and
// some ids have no profile.
struct World {
  std::vector<UserProfile> profiles;
  std::vector<InteractionRecord> interactions;
  std::vector<FollowLists> follows;
};

World random_world(std::uint64_t seed) {
  Rng rng(seed);
  World w;
  const int users = 60;
  for (int u = 0; u < users; ++u) {
    const std::int64_t followers =
        rng.uniform() < 0.2 ? 10001 + static_cast<std::int64_t>(rng.below(90000))
                            : static_cast<std::int64_t>(rng.below(10001));
    w.profiles.push_back(profile("u" + std::to_string(u),
                                 "First" + std::string(1, char('a' + u % 26)) +
                                     " Last" + std::string(1, char('a' + u / 26)),
                                 followers));
  }
  auto id = [&] { return "u" + std::to_string(rng.below(users + 10)); };
  for (int i = 0; i < 80; ++i) {
    InteractionRecord r;
    r.kind = rng.uniform() < 0.5 ? InteractionKind::kRetweet : InteractionKind::kMention;
    const int n = r.kind == InteractionKind::kRetweet ? 2 : 2 + static_cast<int>(rng.below(4));
    for (int j = 0; j < n; ++j) r.participants.push_back(id());
    w.interactions.push_back(r);
  }
  for (int s = 0; s < 15; ++s) {
    FollowLists l;
    l.owner = "seed" + std::to_string(s);
    std::set<std::string> ers, ees;
    for (int j = 0; j < 20; ++j) {
      const std::string a = id();
      if (ers.insert(a).second) l.followers.push_back(a);
      const std::string b = id();
      if (ees.insert(b).second) l.followees.push_back(b);
    }
    w.follows.push_back(l);
  }
  return w;
}

}  // namespace

TEST_CASE("friend and nonfriend contexts follow set algebra") {
  const std::vector<UserProfile> profiles = {profile("A", "Ann Alpha"),
                                             profile("B", "Bob Beta"),
                                             profile("C", "Cy Gamma")};
  const ProfileIndex index(profiles);
  const std::vector<FollowLists> follows = {{"seed", {"A", "B"}, {"B", "C"}}};
  const auto friends = build_corpus(CorpusVariant::kFriend, {}, follows, index);
  REQUIRE(friends.contexts().size() == 1);
  CHECK(keys(friends.contexts()[0]) == std::vector<std::string>{"f:bob", "l:beta"});
  const auto non = build_corpus(CorpusVariant::kNonFriend, {}, follows, index);
  REQUIRE(non.contexts().size() == 1);
  CHECK(keys(non.contexts()[0]) ==
        std::vector<std::string>{"f:ann", "l:alpha", "f:cy", "l:gamma"});
}

TEST_CASE("followee-star drops accounts above 10,000 followers") {
  const std::vector<UserProfile> profiles = {profile("A", "Ann Alpha"),
                                             profile("S", "Star Power", 50000),
                                             profile("E", "Edge Case", 10000),
                                             profile("C", "Cy Gamma")};
  const ProfileIndex index(profiles);
  const std::vector<FollowLists> follows = {{"seed", {}, {"A", "S", "E", "C"}}};
  const auto plain = build_corpus(CorpusVariant::kFollowee, {}, follows, index);
  const auto star = build_corpus(CorpusVariant::kFolloweeStar, {}, follows, index);
  REQUIRE(star.contexts().size() == 1);
  CHECK(keys(plain.contexts()[0]).size() == 8);
  CHECK(keys(star.contexts()[0]) == std::vector<std::string>{
                                        "f:ann", "l:alpha", "f:edge", "l:case",
                                        "f:cy", "l:gamma"});
}

TEST_CASE("retweet and mention contexts keep member order") {
  const std::vector<UserProfile> profiles = {profile("0", "Zed Zero"),
                                             profile("1", "Una One"),
                                             profile("2", "Tia Two")};
  const ProfileIndex index(profiles);
  std::vector<InteractionRecord> inter = {
      {InteractionKind::kRetweet, {"0", "1"}},
      {InteractionKind::kMention, {"0", "2", "1"}},
      {InteractionKind::kMention, {"0", "ghost"}}};
  const auto rt = build_corpus(CorpusVariant::kRetweet, inter, {}, index);
  REQUIRE(rt.contexts().size() == 1);
  CHECK(keys(rt.contexts()[0]) ==
        std::vector<std::string>{"f:zed", "l:zero", "f:una", "l:one"});
  const auto mn = build_corpus(CorpusVariant::kMention, inter, {}, index);
  // The mention of an unknown user leaves one member: still two name parts.
  REQUIRE(mn.contexts().size() == 2);
  CHECK(keys(mn.contexts()[0]) == std::vector<std::string>{"f:zed", "l:zero", "f:tia",
                                                           "l:two", "f:una", "l:one"});
  CHECK(keys(mn.contexts()[1]) == std::vector<std::string>{"f:zed", "l:zero"});
}

TEST_CASE("contexts shorter than two name parts are dropped") {
  TrainingCorpus c;
  CHECK_FALSE(c.add_context({}));
  CHECK_FALSE(c.add_context({NameToken{"a", Role::kFirst}}));
  CHECK(c.add_context({NameToken{"a", Role::kFirst}, NameToken{"b", Role::kLast}}));
  CHECK(c.contexts().size() == 1);
  CHECK(c.token_count() == 2);
}

TEST_CASE("empty input gives an empty corpus") {
  const ProfileIndex index(std::vector<UserProfile>{});
  for (CorpusVariant v : all_variants()) {
    const auto c = build_corpus(v, {}, {}, index);
    CHECK(c.empty());
    CHECK(c.token_count() == 0);
  }
}

TEST_CASE("corpus_stats examples") {
  TrainingCorpus c;
  const NameToken smith{"smith", Role::kLast};
  const NameToken jones{"jones", Role::kLast};
  for (int i = 0; i < 5; ++i) c.add_context({smith, NameToken{"x", Role::kFirst}});
  for (int i = 0; i < 4; ++i) c.add_context({jones, NameToken{"y", Role::kFirst}});
  const CorpusStats s = corpus_stats(c);
  // smith (5) and f:x (5) reach the minimum; jones and f:y (4) do not.
  CHECK(s.vocab_size == 2);
  CHECK(s.token_count == 18);
  const CorpusStats empty = corpus_stats(TrainingCorpus{});
  CHECK(empty.vocab_size == 0);
  CHECK(empty.token_count == 0);
}

TEST_CASE("variant names parse in several spellings") {
  CHECK(parse_variant("aggregated-star") == CorpusVariant::kAggregatedStar);
  CHECK(parse_variant("Aggregated*") == CorpusVariant::kAggregatedStar);
  CHECK(parse_variant("followee_star") == CorpusVariant::kFolloweeStar);
  CHECK(parse_variant("friends") == CorpusVariant::kFriend);
  CHECK(parse_variant("nonfriend") == CorpusVariant::kNonFriend);
  CHECK_THROWS_AS(parse_variant("bogus"), Error);
  for (CorpusVariant v : all_variants()) CHECK(parse_variant(variant_name(v)) == v);
  CHECK(all_variants().size() == 9);
}

TEST_CASE("corpus invariants on random worlds") {
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    const World w = random_world(seed);
    const ProfileIndex index(w.profiles);
    std::map<CorpusVariant, TrainingCorpus> c;
    for (CorpusVariant v : all_variants()) {
      c[v] = build_corpus(v, w.interactions, w.follows, index);
      std::size_t tokens = 0;
      for (const auto& ctx : c[v].contexts()) {
        REQUIRE(ctx.size() >= 2);
        tokens += ctx.size();
      }
      REQUIRE(tokens == c[v].token_count());
    }

    // Aggregated corpora are the sum of their parts.
    const auto sum = [&](CorpusVariant followee) {
      return c[CorpusVariant::kRetweet].token_count() +
             c[CorpusVariant::kMention].token_count() +
             c[CorpusVariant::kFollower].token_count() + c[followee].token_count();
    };
    REQUIRE(c[CorpusVariant::kAggregated].token_count() == sum(CorpusVariant::kFollowee));
    REQUIRE(c[CorpusVariant::kAggregatedStar].token_count() ==
            sum(CorpusVariant::kFolloweeStar));
    const auto contexts = [&](CorpusVariant v) { return c[v].contexts().size(); };
    REQUIRE(contexts(CorpusVariant::kAggregated) ==
            contexts(CorpusVariant::kRetweet) + contexts(CorpusVariant::kMention) +
                contexts(CorpusVariant::kFollower) + contexts(CorpusVariant::kFollowee));

    // Followee-star contexts are subsequences of their followee counterparts,
    // built per seed user from the same lists.
    for (const auto& lists : w.follows) {
      const ProfileIndex& idx = index;
      const auto full = build_corpus(CorpusVariant::kFollowee, {}, {lists}, idx);
      const auto star = build_corpus(CorpusVariant::kFolloweeStar, {}, {lists}, idx);
      if (star.empty()) continue;
      REQUIRE(full.contexts().size() == 1);
      const auto& f = full.contexts()[0];
      const auto& s = star.contexts()[0];
      std::size_t j = 0;
      for (std::size_t i = 0; i < f.size() && j < s.size(); ++i) {
        if (f[i] == s[j]) ++j;
      }
      REQUIRE(j == s.size());
    }

    // No celebrity name parts in followee-star contexts, alone or as the
    // followee share of aggregated-star.
    std::set<std::string> celebrity_keys;
    for (const auto& p : w.profiles) {
      if (p.follower_count <= kStarFollowerLimit) continue;
      auto n = normalize_name(p.raw_name);
      celebrity_keys.insert(n->first.key());
      celebrity_keys.insert(n->second.key());
    }
    std::set<std::string> ordinary_keys;
    for (const auto& p : w.profiles) {
      if (p.follower_count > kStarFollowerLimit) continue;
      auto n = normalize_name(p.raw_name);
      ordinary_keys.insert(n->first.key());
      ordinary_keys.insert(n->second.key());
    }
    const auto& agg = c[CorpusVariant::kAggregatedStar].contexts();
    const std::size_t star_from =
        agg.size() - c[CorpusVariant::kFolloweeStar].contexts().size();
    for (std::size_t i = 0; i < agg.size(); ++i) {
      if (i < star_from) continue;
      for (std::size_t t = 0; t + 1 < agg[i].size(); t += 2) {
        // A member is a celebrity only if no ordinary profile shares both parts.
        const bool celeb = celebrity_keys.count(agg[i][t].key()) &&
                           celebrity_keys.count(agg[i][t + 1].key()) &&
                           !(ordinary_keys.count(agg[i][t].key()) &&
                             ordinary_keys.count(agg[i][t + 1].key()));
        REQUIRE_FALSE(celeb);
      }
    }
  }
}

TEST_CASE("no celebrity ever appears in followee-star contexts") {
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    World w = random_world(seed);
    // Unique names, so a token identifies its profile.
    for (std::size_t u = 0; u < w.profiles.size(); ++u) {
      w.profiles[u].raw_name = "F" + std::string(1, char('a' + u % 26)) +
                               std::string(1, char('a' + u / 26)) + " L" +
                               std::string(1, char('a' + u % 26)) +
                               std::string(1, char('a' + u / 26));
    }
    const ProfileIndex index(w.profiles);
    std::set<std::string> celeb;
    for (const auto& p : w.profiles) {
      if (p.follower_count > kStarFollowerLimit) {
        celeb.insert(normalize_name(p.raw_name)->first.key());
      }
    }
    const auto star = build_corpus(CorpusVariant::kFolloweeStar, w.interactions,
                                   w.follows, index);
    for (const auto& ctx : star.contexts()) {
      for (const auto& t : ctx) REQUIRE(celeb.count(t.key()) == 0);
    }
  }
}

TEST_CASE("corpus files round-trip losslessly") {
  const World w = random_world(4);
  const ProfileIndex index(w.profiles);
  const auto corpus =
      build_corpus(CorpusVariant::kAggregated, w.interactions, w.follows, index);
  std::stringstream buf;
  write_corpus(buf, corpus);
  const std::string text = buf.str();
  const auto back = read_corpus(buf);
  REQUIRE(back.contexts().size() == corpus.contexts().size());
  for (std::size_t i = 0; i < back.contexts().size(); ++i) {
    REQUIRE(back.contexts()[i] == corpus.contexts()[i]);
  }
  CHECK(back.token_count() == corpus.token_count());
  std::stringstream again;
  write_corpus(again, back);
  CHECK(again.str() == text);
}

TEST_CASE("corpus reader reports the offending line") {
  std::istringstream in("f:a l:b\nf:a smith\n");
  try {
    read_corpus(in);
    FAIL("expected an error");
  } catch (const Error& e) {
    CHECK(std::string(e.what()).find("line 2") != std::string::npos);
  }
}
