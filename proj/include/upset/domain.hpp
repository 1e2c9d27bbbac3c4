#pragma once

#include "upset/error.hpp"
#include "upset/time.hpp"

#include <algorithm>
#include <cmath>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace upset {

enum class OutcomeKind { FavoriteWin, Draw, UnderdogWin };

enum class ClassLabel { Upset, Baseline };

inline std::string_view to_string(ClassLabel l) { return l == ClassLabel::Upset ? "upset" : "baseline"; }

inline std::optional<ClassLabel> parse_label(std::string_view s) {
    if (s == "upset") return ClassLabel::Upset;
    if (s == "baseline") return ClassLabel::Baseline;
    return std::nullopt;
}

/// Single-letter outcome code used in the games file: F, D or U.
inline char outcome_code(OutcomeKind o) {
    switch (o) {
        case OutcomeKind::FavoriteWin: return 'F';
        case OutcomeKind::Draw: return 'D';
        case OutcomeKind::UnderdogWin: return 'U';
    }
    return '?';
}

inline std::optional<OutcomeKind> parse_outcome_code(std::string_view s) {
    if (s == "F") return OutcomeKind::FavoriteWin;
    if (s == "D") return OutcomeKind::Draw;
    if (s == "U") return OutcomeKind::UnderdogWin;
    return std::nullopt;
}

// ---------------------------------------------------------------------------
// OddsTriple: averaged decimal odds on favorite win / draw / underdog win
// ---------------------------------------------------------------------------
class OddsTriple {
public:
    /// Throws Errc::OddsOutOfRange unless every component is a finite value > 1.
    OddsTriple(double fav, double draw, double und) : fav_(fav), draw_(draw), und_(und) {
        for (double o : {fav, draw, und}) {
            if (!std::isfinite(o) || o <= 1.0)
                throw Error(Errc::OddsOutOfRange, "decimal odds must exceed 1, got " + std::to_string(o));
        }
    }

    double fav() const { return fav_; }
    double draw() const { return draw_; }
    double und() const { return und_; }

    double max() const { return std::max({fav_, draw_, und_}); }
    double min() const { return std::min({fav_, draw_, und_}); }

    double of(OutcomeKind o) const {
        switch (o) {
            case OutcomeKind::FavoriteWin: return fav_;
            case OutcomeKind::Draw: return draw_;
            case OutcomeKind::UnderdogWin: return und_;
        }
        return fav_;
    }

    friend bool operator==(const OddsTriple&, const OddsTriple&) = default;

private:
    double fav_;
    double draw_;
    double und_;
};

// ---------------------------------------------------------------------------
// GameRecord
// ---------------------------------------------------------------------------
struct GameRecord {
    std::string game_id;
    std::string tournament;
    std::string favorite;
    std::string underdog;
    Instant kickoff;
    OddsTriple odds;
    std::optional<OutcomeKind> outcome;

    friend bool operator==(const GameRecord&, const GameRecord&) = default;
};

/// Unvalidated fields as read from a games file.
struct RawGame {
    std::string game_id;
    std::string tournament;
    std::string favorite;
    std::string underdog;
    Instant kickoff;
    double odds_fav = 0;
    double odds_draw = 0;
    double odds_und = 0;
    std::optional<OutcomeKind> outcome;
};

/// The favorite column is authoritative on ties; only a strictly smaller
/// draw or underdog price is rejected.
inline GameRecord validate_game(const RawGame& raw) {
    if (raw.game_id.empty()) throw Error(Errc::InvalidConfig, "empty game_id");
    if (raw.favorite == raw.underdog)
        throw Error(Errc::SameTeams, raw.game_id + ": favorite and underdog are both '" + raw.favorite + "'");
    OddsTriple odds(raw.odds_fav, raw.odds_draw, raw.odds_und);
    if (odds.fav() > odds.draw() || odds.fav() > odds.und())
        throw Error(Errc::FavoriteNotMinimum, raw.game_id + ": favorite odds are not the minimum");
    return GameRecord{raw.game_id, raw.tournament, raw.favorite, raw.underdog, raw.kickoff, odds, raw.outcome};
}

// ---------------------------------------------------------------------------
// TweetRecord
// ---------------------------------------------------------------------------
struct TweetRecord {
    std::string tweet_id;
    Instant timestamp;
    std::string user_id;
    std::string text;
    std::vector<std::string> hashtags;  // lowercase, no leading '#'
    std::optional<std::string> retweeted_user;
    std::vector<std::string> mentioned_users;
    std::optional<double> precomputed_sentiment;

    friend bool operator==(const TweetRecord&, const TweetRecord&) = default;
};

/// Lowercases ASCII letters and strips one leading '#'.
inline std::string normalize_hashtag(std::string_view tag) {
    if (!tag.empty() && tag.front() == '#') tag.remove_prefix(1);
    std::string out(tag);
    std::transform(out.begin(), out.end(), out.begin(), [](unsigned char c) {
        return (c >= 'A' && c <= 'Z') ? static_cast<char>(c - 'A' + 'a') : static_cast<char>(c);
    });
    return out;
}

/// Normalizes hashtags and checks the sentiment range.
inline TweetRecord validate_tweet(TweetRecord t) {
    if (t.tweet_id.empty()) throw Error(Errc::InvalidConfig, "empty tweet_id");
    for (auto& h : t.hashtags) h = normalize_hashtag(h);
    if (t.precomputed_sentiment) {
        double s = *t.precomputed_sentiment;
        if (!(s >= 0.0 && s <= 1.0))
            throw Error(Errc::InvalidScore, t.tweet_id + ": sentiment " + std::to_string(s) + " outside [0,1]");
    }
    return t;
}

}  // namespace upset
