#include "support.hpp"
#include "upset/signals.hpp"

#include <gtest/gtest.h>

using namespace upset;
using namespace testing_support;

namespace {

const Instant kKick = at("2014-07-08T20:00:00Z");

}  // namespace

TEST(MinuteSeries, EmptyGivesEmptyBuckets) {
    auto s = minute_series({}, kKick, PassthroughScorer{});
    ASSERT_EQ(s.size(), 120u);
    for (std::size_t i = 0; i < s.size(); ++i) {
        EXPECT_EQ(s[i].minute, static_cast<int>(i));
        EXPECT_EQ(s[i].volume(), 0u);
        EXPECT_FALSE(s[i].fav_mean);
        EXPECT_FALSE(s[i].und_mean);
    }
}

TEST(MinuteSeries, MeansPerFaction) {
    FactionTweets f;
    for (double sc : {0.2, 0.4, 0.6})
        f.favorite.push_back(make_tweet(std::to_string(sc), kKick + Minutes{7} + Seconds{10}, "u", {"bra"}, sc));
    f.underdog.push_back(make_tweet("x", kKick + Minutes{7}, "v", {"ger"}, 0.9));
    f.match.push_back(make_tweet("m", kKick + Minutes{7}, "w", {"bravsger"}, 0.1));
    auto s = minute_series(f, kKick, PassthroughScorer{});
    EXPECT_EQ(s[7].fav_count, 3u);
    EXPECT_NEAR(*s[7].fav_mean, 0.4, 1e-12);
    EXPECT_DOUBLE_EQ(*s[7].und_mean, 0.9);
    EXPECT_EQ(s[7].volume(), 5u);
    EXPECT_FALSE(s[6].fav_mean);
}

TEST(MinuteSeries, HalfOpenWindow) {
    std::vector<TweetRecord> tw{make_tweet("a", kKick + Minutes{120}, "u", {"bra"}, 0.5),
                                make_tweet("b", kKick + Minutes{119} + Seconds{59}, "u", {"bra"}, 0.5),
                                make_tweet("c", kKick - Seconds{1}, "u", {"bra"}, 0.5)};
    auto f = ingame_tweets(tw, make_tags("bra", "ger"), kKick);
    auto s = minute_series(f, kKick, PassthroughScorer{});
    std::size_t total = 0;
    for (const auto& b : s) total += b.volume();
    EXPECT_EQ(total, 1u);
    EXPECT_EQ(s[119].fav_count, 1u);
}

TEST(Events, Annotation) {
    auto s = minute_series({}, kKick, PassthroughScorer{});
    EXPECT_EQ(annotate_events(s, {}).size(), 120u);
    std::vector<MatchEvent> ev{{30, EventKind::GoalScored, "bra"}, {30, EventKind::YellowCard, "ger"},
                               {120, EventKind::RedCard, "ger"}};
    auto a = annotate_events(s, ev);
    ASSERT_EQ(a[30].events.size(), 2u);
    EXPECT_EQ(a[30].events[0].kind, EventKind::GoalScored);
    EXPECT_EQ(a[30].events[1].kind, EventKind::YellowCard);
    EXPECT_EQ(a[119].events.size(), 1u);
    std::vector<MatchEvent> bad{{121, EventKind::GoalScored, "bra"}};
    try {
        annotate_events(s, bad);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), Errc::EventOutOfRange);
    }
}

TEST(Events, KindNames) {
    for (auto k : {EventKind::GoalScored, EventKind::PenaltyScored, EventKind::YellowCard, EventKind::RedCard})
        EXPECT_EQ(parse_event_kind(to_string(k)), k);
    EXPECT_FALSE(parse_event_kind("corner"));
}

TEST(Interactions, CountingRules) {
    std::unordered_set<std::string> fav{"f1", "f2"}, und{"u1", "u2"};
    auto rt = [](std::string id, std::string user, std::string target) {
        auto t = make_tweet(std::move(id), kKick, std::move(user), {});
        t.retweeted_user = std::move(target);
        return t;
    };
    auto mt = [](std::string id, std::string user, std::vector<std::string> targets) {
        auto t = make_tweet(std::move(id), kKick, std::move(user), {});
        t.mentioned_users = std::move(targets);
        return t;
    };
    std::vector<TweetRecord> tw{rt("1", "f1", "f2"),          mt("2", "u1", {"f1", "f2"}), rt("3", "u1", "u2"),
                                mt("4", "f1", {"u1", "x9"}), rt("5", "x9", "f1"),         rt("6", "f2", "u2")};
    auto c = interaction_counts(tw, fav, und);
    EXPECT_EQ(c.ffrt, 1u);
    EXPECT_EQ(c.ufmt, 2u);
    EXPECT_EQ(c.uurt, 1u);
    EXPECT_EQ(c.fumt, 1u);
    EXPECT_EQ(c.furt, 1u);
    EXPECT_EQ(c.total(), 6u);
    EXPECT_EQ(interaction_counts({}, fav, und), InteractionCounts{});
}

TEST(Interactions, OverlappingGroups) {
    std::unordered_set<std::string> fav{"a"}, und{"a"};
    try {
        interaction_counts({}, fav, und);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), Errc::OverlappingGroups);
    }
}

TEST(FanGroups, MixedUsersExcluded) {
    FactionTweets f;
    f.favorite = {make_tweet("1", kKick, "only_fav", {"bra"}), make_tweet("2", kKick, "both", {"bra"})};
    f.underdog = {make_tweet("3", kKick, "only_und", {"ger"}), make_tweet("4", kKick, "both", {"ger"})};
    f.match = {make_tweet("5", kKick, "matchy", {"bravsger"}), make_tweet("6", kKick, "matchy_fav", {"bravsger"}),
               make_tweet("7", kKick, "matchy_fav", {"bravsger"})};
    f.favorite.push_back(make_tweet("8", kKick, "matchy_fav", {"bra"}));
    auto g = fan_groups(f);
    EXPECT_EQ(g.favorite, (std::unordered_set<std::string>{"only_fav"}));
    EXPECT_EQ(g.underdog, (std::unordered_set<std::string>{"only_und"}));
}

TEST(Interactions, BoundedByRetweetsPlusMentions) {
    Rng rng(21);
    std::unordered_set<std::string> fav, und;
    for (int i = 0; i < 10; ++i) (i < 5 ? fav : und).insert("u" + std::to_string(i));
    std::vector<TweetRecord> tw;
    std::size_t budget = 0;
    for (int i = 0; i < 300; ++i) {
        auto t = make_tweet(std::to_string(i), kKick, "u" + std::to_string(rng.index(14)), {});
        if (rng.uniform() < 0.5) t.retweeted_user = "u" + std::to_string(rng.index(14));
        for (std::size_t m = rng.index(3); m > 0; --m) t.mentioned_users.push_back("u" + std::to_string(rng.index(14)));
        if (fav.count(t.user_id) || und.count(t.user_id)) budget += (t.retweeted_user ? 1 : 0) + t.mentioned_users.size();
        tw.push_back(std::move(t));
    }
    EXPECT_LE(interaction_counts(tw, fav, und).total(), budget);
}
