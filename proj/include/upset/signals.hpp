#pragma once

#include "upset/ingest.hpp"
#include "upset/sentiment.hpp"

#include <algorithm>
#include <chrono>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <unordered_set>
#include <vector>

namespace upset {

enum class EventKind { GoalScored, PenaltyScored, YellowCard, RedCard };

inline std::string_view to_string(EventKind k) {
    switch (k) {
        case EventKind::GoalScored: return "goal_scored";
        case EventKind::PenaltyScored: return "penalty_scored";
        case EventKind::YellowCard: return "yellow_card";
        case EventKind::RedCard: return "red_card";
    }
    return "?";
}

inline std::optional<EventKind> parse_event_kind(std::string_view s) {
    if (s == "goal_scored") return EventKind::GoalScored;
    if (s == "penalty_scored") return EventKind::PenaltyScored;
    if (s == "yellow_card") return EventKind::YellowCard;
    if (s == "red_card") return EventKind::RedCard;
    return std::nullopt;
}

struct MatchEvent {
    int minute = 0;  // 0..120
    EventKind kind = EventKind::GoalScored;
    std::string team;
};

inline constexpr int kGameMinutes = 120;

/// In-game tweets split by faction.
struct FactionTweets {
    std::vector<TweetRecord> favorite;
    std::vector<TweetRecord> underdog;
    std::vector<TweetRecord> match;
};

inline FactionTweets ingame_tweets(std::span<const TweetRecord> tweets, const TeamTags& tags, Instant kickoff,
                                   Minutes duration = Minutes{kGameMinutes}) {
    FactionTweets out;
    for (const auto& t : time_slice(tweets, kickoff, kickoff + duration)) {
        switch (attribute_tweet(t, tags)) {
            case Attribution::FavoriteFans: out.favorite.push_back(t); break;
            case Attribution::UnderdogFans: out.underdog.push_back(t); break;
            case Attribution::MatchBoth: out.match.push_back(t); break;
            case Attribution::Unrelated: break;
        }
    }
    return out;
}

struct MinuteBucket {
    int minute = 0;
    std::size_t fav_count = 0;
    std::size_t und_count = 0;
    std::size_t match_count = 0;
    std::optional<double> fav_mean;  // absent when no favorite tweets
    std::optional<double> und_mean;
    std::vector<MatchEvent> events;

    std::size_t volume() const { return fav_count + und_count + match_count; }
};

/// One bucket per minute of [kickoff, kickoff + duration).
inline std::vector<MinuteBucket> minute_series(const FactionTweets& tweets, Instant kickoff, const ScorerSpec& scorer,
                                               int duration_minutes = kGameMinutes) {
    std::vector<MinuteBucket> series(static_cast<std::size_t>(duration_minutes));
    for (int m = 0; m < duration_minutes; ++m) series[static_cast<std::size_t>(m)].minute = m;
    std::vector<double> fav_sum(series.size(), 0.0), und_sum(series.size(), 0.0);

    auto minute_of = [&](const TweetRecord& t) -> std::optional<std::size_t> {
        if (t.timestamp < kickoff) return std::nullopt;
        auto m = std::chrono::floor<Minutes>(t.timestamp - kickoff).count();
        if (m >= duration_minutes) return std::nullopt;
        return static_cast<std::size_t>(m);
    };
    for (const auto& t : tweets.favorite) {
        if (auto m = minute_of(t)) {
            ++series[*m].fav_count;
            fav_sum[*m] += score_tweet(t, scorer).value();
        }
    }
    for (const auto& t : tweets.underdog) {
        if (auto m = minute_of(t)) {
            ++series[*m].und_count;
            und_sum[*m] += score_tweet(t, scorer).value();
        }
    }
    for (const auto& t : tweets.match) {
        if (auto m = minute_of(t)) ++series[*m].match_count;
    }
    for (std::size_t i = 0; i < series.size(); ++i) {
        auto& b = series[i];
        if (b.fav_count) b.fav_mean = fav_sum[i] / static_cast<double>(b.fav_count);
        if (b.und_count) b.und_mean = und_sum[i] / static_cast<double>(b.und_count);
    }
    return series;
}

/// Attaches each event to its minute bucket, keeping input order within a
/// bucket. Minute 120 (the closing whistle) lands in the last bucket.
inline std::vector<MinuteBucket> annotate_events(std::vector<MinuteBucket> series, std::span<const MatchEvent> events) {
    for (const auto& e : events) {
        if (e.minute < 0 || e.minute > kGameMinutes)
            throw Error(Errc::EventOutOfRange, "event minute " + std::to_string(e.minute) + " outside [0,120]");
    }
    if (series.empty()) return series;
    for (const auto& e : events) {
        auto idx = std::min(static_cast<std::size_t>(e.minute), series.size() - 1);
        series[idx].events.push_back(e);
    }
    return series;
}

// ---------------------------------------------------------------------------
// Group interactions
// ---------------------------------------------------------------------------
struct InteractionCounts {
    std::size_t ffrt = 0, ffmt = 0;  // within favorite fans
    std::size_t furt = 0, fumt = 0;  // favorite fans -> underdog fans
    std::size_t uurt = 0, uumt = 0;  // within underdog fans
    std::size_t ufrt = 0, ufmt = 0;  // underdog fans -> favorite fans

    std::size_t total() const { return ffrt + ffmt + furt + fumt + uurt + uumt + ufrt + ufmt; }
    friend bool operator==(const InteractionCounts&, const InteractionCounts&) = default;
};

struct FanGroups {
    std::unordered_set<std::string> favorite;
    std::unordered_set<std::string> underdog;
};

/// Users whose attributed tweets all name one team. Anyone who also tweeted
/// for the other side or with a match tag belongs to neither group.
inline FanGroups fan_groups(const FactionTweets& tweets) {
    std::unordered_map<std::string, unsigned> seen;  // bit 0 fav, 1 und, 2 match
    for (const auto& t : tweets.favorite) seen[t.user_id] |= 1u;
    for (const auto& t : tweets.underdog) seen[t.user_id] |= 2u;
    for (const auto& t : tweets.match) seen[t.user_id] |= 4u;
    FanGroups g;
    for (const auto& [user, mask] : seen) {
        if (mask == 1u) g.favorite.insert(user);
        if (mask == 2u) g.underdog.insert(user);
    }
    return g;
}

/// Retweets count once per tweet, mentions once per mentioned user. Flows
/// touching users outside both groups are ignored.
inline InteractionCounts interaction_counts(std::span<const TweetRecord> tweets,
                                            const std::unordered_set<std::string>& fav_users,
                                            const std::unordered_set<std::string>& und_users) {
    for (const auto& u : fav_users) {
        if (und_users.count(u)) throw Error(Errc::OverlappingGroups, "user '" + u + "' is in both fan groups");
    }
    auto group_of = [&](const std::string& u) -> int {
        if (fav_users.count(u)) return 0;
        if (und_users.count(u)) return 1;
        return -1;
    };
    InteractionCounts c;
    auto bump = [&](int from, int to, bool retweet) {
        if (from < 0 || to < 0) return;
        if (from == 0 && to == 0) ++(retweet ? c.ffrt : c.ffmt);
        if (from == 0 && to == 1) ++(retweet ? c.furt : c.fumt);
        if (from == 1 && to == 1) ++(retweet ? c.uurt : c.uumt);
        if (from == 1 && to == 0) ++(retweet ? c.ufrt : c.ufmt);
    };
    for (const auto& t : tweets) {
        const int from = group_of(t.user_id);
        if (from < 0) continue;
        if (t.retweeted_user) bump(from, group_of(*t.retweeted_user), true);
        for (const auto& m : t.mentioned_users) bump(from, group_of(m), false);
    }
    return c;
}

}  // namespace upset
