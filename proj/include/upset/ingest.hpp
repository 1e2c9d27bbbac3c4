#pragma once

#include "upset/domain.hpp"

#include <algorithm>
#include <array>
#include <optional>
#include <span>
#include <string>
#include <unordered_set>
#include <vector>

namespace upset {

enum class Attribution { FavoriteFans, UnderdogFans, MatchBoth, Unrelated };

/// Hashtag sets for one game. Combined match tags (e.g. "bravsger") are kept
/// apart from the two team sets.
struct TeamTags {
    std::unordered_set<std::string> favorite;
    std::unordered_set<std::string> underdog;
    std::unordered_set<std::string> match;

    void validate(const std::string& game_id) const {
        for (const auto& t : favorite) {
            if (underdog.count(t))
                throw Error(Errc::MissingTags, game_id + ": tag '" + t + "' listed for both teams");
        }
        if (favorite.empty() || underdog.empty())
            throw Error(Errc::MissingTags, game_id + ": both teams need at least one hashtag");
    }
};

inline constexpr Hours kPregamePeriod{6};

inline Attribution attribute_tweet(const TweetRecord& tweet, const TeamTags& tags) {
    bool fav = false, und = false, both = false;
    for (const auto& h : tweet.hashtags) {
        fav = fav || tags.favorite.count(h) > 0;
        und = und || tags.underdog.count(h) > 0;
        both = both || tags.match.count(h) > 0;
    }
    if (both || (fav && und)) return Attribution::MatchBoth;
    if (fav) return Attribution::FavoriteFans;
    if (und) return Attribution::UnderdogFans;
    return Attribution::Unrelated;
}

/// Orders by (timestamp, tweet_id) so results do not depend on input order.
inline void sort_tweets(std::vector<TweetRecord>& tweets) {
    std::stable_sort(tweets.begin(), tweets.end(), [](const TweetRecord& x, const TweetRecord& y) {
        if (x.timestamp != y.timestamp) return x.timestamp < y.timestamp;
        return x.tweet_id < y.tweet_id;
    });
}

/// Tweets in [from, to), sorted ascending by timestamp; stable for equal timestamps.
inline std::vector<TweetRecord> time_slice(std::span<const TweetRecord> tweets, Instant from, Instant to) {
    std::vector<TweetRecord> out;
    for (const auto& t : tweets) {
        if (t.timestamp >= from && t.timestamp < to) out.push_back(t);
    }
    std::stable_sort(out.begin(), out.end(),
                     [](const TweetRecord& x, const TweetRecord& y) { return x.timestamp < y.timestamp; });
    return out;
}

/// Tweets in [kickoff - 6h, kickoff).
inline std::vector<TweetRecord> pregame_slice(std::span<const TweetRecord> tweets, Instant kickoff) {
    return time_slice(tweets, kickoff - kPregamePeriod, kickoff);
}

struct GameCorpus {
    std::string game_id;
    Instant window_start;
    Instant window_end;
    std::vector<TweetRecord> favorite_tweets;
    std::vector<TweetRecord> underdog_tweets;
    std::vector<TweetRecord> match_tweets;
    /// Set by apply_volume_filter; feature extraction requires `true`.
    std::optional<bool> volume_ok;
};

enum class VolumeSemantics {
    /// mean rate over the whole period
    Average,
    /// every one-hour bucket must reach the rate
    EveryHour,
};

struct VolumeConfig {
    double min_rate = 40.0;  // tweets per team per hour
    VolumeSemantics semantics = VolumeSemantics::Average;
};

namespace detail {

inline bool side_meets_rate(std::span<const TweetRecord> tweets, Instant start, const VolumeConfig& cfg) {
    constexpr auto hours = kPregamePeriod.count();
    if (cfg.semantics == VolumeSemantics::Average)
        return static_cast<double>(tweets.size()) >= cfg.min_rate * static_cast<double>(hours);
    std::array<std::size_t, hours> buckets{};
    for (const auto& t : tweets) {
        auto h = std::chrono::floor<Hours>(t.timestamp - start).count();
        if (h >= 0 && h < hours) ++buckets[static_cast<std::size_t>(h)];
    }
    return std::all_of(buckets.begin(), buckets.end(),
                       [&](std::size_t c) { return static_cast<double>(c) >= cfg.min_rate; });
}

}  // namespace detail

/// True iff both team sides reach min_rate tweets per hour over the pre-game period.
inline bool volume_filter(const GameCorpus& corpus, const VolumeConfig& cfg = {}) {
    return detail::side_meets_rate(corpus.favorite_tweets, corpus.window_start, cfg) &&
           detail::side_meets_rate(corpus.underdog_tweets, corpus.window_start, cfg);
}

inline bool apply_volume_filter(GameCorpus& corpus, const VolumeConfig& cfg = {}) {
    corpus.volume_ok = volume_filter(corpus, cfg);
    return *corpus.volume_ok;
}

/// Attributes and slices the tweets of one game. Unrelated tweets are dropped.
inline GameCorpus build_corpus(const GameRecord& game, std::span<const TweetRecord> tweets, const TeamTags& tags) {
    std::unordered_set<std::string> seen;
    for (const auto& t : tweets) {
        if (!seen.insert(t.tweet_id).second)
            throw Error(Errc::DuplicateTweetId, game.game_id + ": tweet id '" + t.tweet_id + "' repeated");
    }
    GameCorpus c;
    c.game_id = game.game_id;
    c.window_start = game.kickoff - kPregamePeriod;
    c.window_end = game.kickoff;
    for (const auto& t : tweets) {
        if (t.timestamp < c.window_start || t.timestamp >= c.window_end) continue;
        switch (attribute_tweet(t, tags)) {
            case Attribution::FavoriteFans: c.favorite_tweets.push_back(t); break;
            case Attribution::UnderdogFans: c.underdog_tweets.push_back(t); break;
            case Attribution::MatchBoth: c.match_tweets.push_back(t); break;
            case Attribution::Unrelated: break;
        }
    }
    sort_tweets(c.favorite_tweets);
    sort_tweets(c.underdog_tweets);
    sort_tweets(c.match_tweets);
    return c;
}

}  // namespace upset
