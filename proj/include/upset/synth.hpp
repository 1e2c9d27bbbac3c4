#pragma once

#include "upset/domain.hpp"
#include "upset/features.hpp"
#include "upset/ingest.hpp"
#include "upset/io/numbers.hpp"
#include "upset/odds.hpp"
#include "upset/random.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <set>
#include <string>
#include <utility>
#include <vector>

namespace upset {

struct OddsModel {
    double pu_min = 6.0;   // every game must exceed this PU; above theta
    double margin = 0.05;  // implied probabilities sum to 1 + margin
    /// Relative per-game jitter on the upset probability and on its draw/underdog split.
    double jitter = 0.05;
};

struct SynthConfig {
    std::size_t n_games = 60;
    double upset_fraction = 0.33;
    std::set<int> gap_windows{10, 11};
    /// Favorite-minus-underdog mean sentiment in gap windows of Baseline games.
    double gap_effect = 0.3;
    std::size_t tweets_per_side_per_window = 200;
    std::size_t match_tweets_per_window = 0;
    double score_noise_sd = 0.15;
    double base_sentiment = 0.5;
    OddsModel odds_model;
    double theta = 5.0;
    std::uint64_t seed = 0;
    /// Kickoff of the first game; later games follow one day apart.
    Instant first_kickoff = std::chrono::sys_days{std::chrono::year{2014} / 10 / 25} + Hours{18};

    void validate() const {
        auto bad = [](const std::string& why) { return Error(Errc::InvalidConfig, why); };
        if (n_games == 0) throw bad("n_games must be positive");
        if (!(upset_fraction > 0.0 && upset_fraction < 1.0)) throw bad("upset_fraction must lie in (0,1)");
        for (int w : gap_windows)
            if (w < 1 || w > static_cast<int>(kWindowCount)) throw bad("gap window outside 1..12");
        if (!(gap_effect >= 0.0)) throw bad("gap_effect must be >= 0");
        if (tweets_per_side_per_window < 1) throw bad("need at least one tweet per side per window");
        if (!(score_noise_sd > 0.0)) throw bad("score_noise_sd must be positive");
        if (!(base_sentiment >= 0.0 && base_sentiment <= 1.0)) throw bad("base_sentiment outside [0,1]");
        if (!(theta > 1.0)) throw bad("theta must exceed 1");
        if (!(odds_model.pu_min > theta)) throw bad("odds_model.pu_min must exceed theta");
        if (!(odds_model.margin >= 0.0 && odds_model.margin < 0.2)) throw bad("margin must lie in [0, 0.2)");
        if (!(odds_model.jitter >= 0.0 && odds_model.jitter < 0.5)) throw bad("jitter must lie in [0, 0.5)");
    }
};

struct GameTags {
    std::string game_id;
    TeamTags tags;
};

struct SynthCorpus {
    std::vector<GameRecord> games;
    std::vector<TweetRecord> tweets;
    std::vector<GameTags> tags;
    std::vector<ClassLabel> labels;  // gold, aligned with games
};

inline constexpr std::uint64_t kStreamSynthLabels = 0x73796e6c6162ULL;
inline constexpr std::uint64_t kStreamSynthOdds = 0x73796e6f6464ULL;
inline constexpr std::uint64_t kStreamSynthTweets = 0x73796e747774ULL;

/// Seeded corpus with a known sentiment-gap structure. Baseline games get a
/// favorite-over-underdog shift in the gap windows; upsets get none. The
/// bookmaker's implied probabilities follow the generator's own outcome law
/// (favorite wins with probability 1 - upset_fraction) inflated by the margin.
/// Every stored real is already quantized to its file precision, so writing
/// and re-reading the corpus is lossless.
inline SynthCorpus generate(const SynthConfig& cfg) {
    cfg.validate();
    SynthCorpus out;
    const std::size_t n = cfg.n_games;
    auto n_upsets = static_cast<std::size_t>(std::llround(static_cast<double>(n) * cfg.upset_fraction));
    n_upsets = std::min(n_upsets, n);

    // labels and outcomes
    Rng label_rng(derive_seed(cfg.seed, kStreamSynthLabels));
    std::vector<std::size_t> order(n);
    for (std::size_t i = 0; i < n; ++i) order[i] = i;
    label_rng.shuffle(order);
    out.labels.assign(n, ClassLabel::Baseline);
    std::vector<OutcomeKind> outcomes(n, OutcomeKind::FavoriteWin);
    std::vector<std::size_t> upsets(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(n_upsets));
    label_rng.shuffle(upsets);
    // half the upsets are draws; an odd one out is decided by a coin flip
    std::size_t draws = n_upsets / 2 + ((n_upsets % 2 == 1 && label_rng.uniform() < 0.5) ? 1 : 0);
    for (std::size_t j = 0; j < upsets.size(); ++j) {
        out.labels[upsets[j]] = ClassLabel::Upset;
        outcomes[upsets[j]] = j < draws ? OutcomeKind::Draw : OutcomeKind::UnderdogWin;
    }

    // odds
    Rng odds_rng(derive_seed(cfg.seed, kStreamSynthOdds));
    const auto& om = cfg.odds_model;
    const SelectionConfig sel{cfg.theta};
    for (std::size_t i = 0; i < n; ++i) {
        const double q = cfg.upset_fraction * (1.0 + odds_rng.uniform(-om.jitter, om.jitter));
        const double split = odds_rng.uniform(-om.jitter, om.jitter);
        const double p_fav = 1.0 - q, p_draw = q / 2.0 * (1.0 + split), p_und = q / 2.0 * (1.0 - split);
        auto price = [&](double p) { return io::quantize_odds(1.0 / (p * (1.0 + om.margin))); };
        double o_fav = price(p_fav), o_draw = price(p_draw), o_und = price(p_und);

        char buf[16];
        std::snprintf(buf, sizeof buf, "%03zu", i + 1);
        const std::string num = buf;
        RawGame raw{"g" + num,         "synthetic", "FAV" + num, "UND" + num, cfg.first_kickoff + std::chrono::days{i},
                    o_fav,             o_draw,      o_und,       outcomes[i]};
        GameRecord game = [&] {
            try {
                return validate_game(raw);
            } catch (const Error& e) {
                throw Error(Errc::InvalidConfig, "odds model yields invalid odds at this upset_fraction: " + e.message());
            }
        }();
        const auto scored = score_game(game, sel);
        const double min_ratio = std::min(upset_score(game.odds, OutcomeKind::Draw),
                                          upset_score(game.odds, OutcomeKind::UnderdogWin));
        if (!(scored.pu > om.pu_min) || !(min_ratio > cfg.theta))
            throw Error(Errc::InvalidConfig,
                        "odds model cannot keep every upset outcome above theta at this upset_fraction/margin");
        out.games.push_back(std::move(game));

        GameTags gt;
        gt.game_id = "g" + num;
        gt.tags.favorite = {"fav" + num};
        gt.tags.underdog = {"und" + num};
        gt.tags.match = {"fav" + num + "vsund" + num};
        out.tags.push_back(std::move(gt));
    }

    // tweets
    Rng tweet_rng(derive_seed(cfg.seed, kStreamSynthTweets));
    constexpr std::size_t kUsersPerSide = 97;
    for (std::size_t i = 0; i < n; ++i) {
        const auto& game = out.games[i];
        const auto& tags = out.tags[i].tags;
        const bool baseline = out.labels[i] == ClassLabel::Baseline;
        const auto windows = window_partition(game.kickoff);
        const auto window_secs = std::chrono::duration_cast<Seconds>(kWindowLength).count();
        for (const auto& w : windows) {
            const bool gap = baseline && cfg.gap_windows.count(w.index) > 0;
            const double shift = gap ? cfg.gap_effect / 2.0 : 0.0;
            auto emit = [&](char side, std::size_t count, double mean, const std::string& tag) {
                for (std::size_t j = 0; j < count; ++j) {
                    TweetRecord t;
                    char idbuf[64];
                    std::snprintf(idbuf, sizeof idbuf, "%s-%c%02d-%04zu", game.game_id.c_str(), side, w.index, j);
                    t.tweet_id = idbuf;
                    t.timestamp = w.start + Seconds{static_cast<long>(tweet_rng.index(static_cast<std::size_t>(window_secs)))};
                    t.user_id = game.game_id + side + "u" + std::to_string(tweet_rng.index(kUsersPerSide));
                    t.hashtags = {tag};
                    double s = std::clamp(tweet_rng.normal(mean, cfg.score_noise_sd), 0.0, 1.0);
                    t.precomputed_sentiment = io::quantize_sig6(s);
                    out.tweets.push_back(std::move(t));
                }
            };
            emit('f', cfg.tweets_per_side_per_window, cfg.base_sentiment + shift, *tags.favorite.begin());
            emit('u', cfg.tweets_per_side_per_window, cfg.base_sentiment - shift, *tags.underdog.begin());
            emit('m', cfg.match_tweets_per_window, cfg.base_sentiment, *tags.match.begin());
        }
    }
    return out;
}

}  // namespace upset
