#pragma once

#include "upset/ingest.hpp"
#include "upset/sentiment.hpp"
#include "upset/stats.hpp"

#include <array>
#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace upset {

inline constexpr std::size_t kWindowCount = 12;
inline constexpr Minutes kWindowLength{30};

struct Window {
    int index = 0;  // 1..12; window 12 ends at kickoff
    Instant start;
    Instant end;  // exclusive
};

inline std::array<Window, kWindowCount> window_partition(Instant kickoff) {
    std::array<Window, kWindowCount> w{};
    for (int i = 1; i <= static_cast<int>(kWindowCount); ++i) {
        auto& win = w[static_cast<std::size_t>(i - 1)];
        win.index = i;
        win.start = kickoff - (13 - i) * kWindowLength;
        win.end = kickoff - (12 - i) * kWindowLength;
    }
    return w;
}

/// 1-based window holding `t`, or nullopt outside [kickoff - 6h, kickoff).
inline std::optional<int> window_of(Instant t, Instant kickoff) {
    if (t >= kickoff || t < kickoff - kPregamePeriod) return std::nullopt;
    auto offset = std::chrono::floor<Minutes>(t - (kickoff - kPregamePeriod));
    return static_cast<int>(offset / kWindowLength) + 1;
}

struct FeatureVector {
    std::string game_id;
    std::array<double, kWindowCount> p{};  // two-sided U-test p-value per window
    std::array<std::size_t, kWindowCount> counts_fav{};
    std::array<std::size_t, kWindowCount> counts_und{};
    std::optional<ClassLabel> label;

    bool degenerate(std::size_t window, std::size_t min_per_window) const {
        return counts_fav[window] < min_per_window || counts_und[window] < min_per_window;
    }

    friend bool operator==(const FeatureVector&, const FeatureVector&) = default;
};

struct FeatureConfig {
    /// Windows where either side has fewer tweets get p = 1.
    std::size_t min_per_window = 3;
    UTestConfig utest;
};

/// P(g): per-window U-test p-values between favorite-fan and underdog-fan
/// sentiment. Match tweets do not enter the features.
inline FeatureVector feature_vector(const GameCorpus& corpus, const ScorerSpec& scorer,
                                    const FeatureConfig& cfg = {}) {
    if (!corpus.volume_ok.value_or(false))
        throw Error(Errc::CorpusNotFiltered, corpus.game_id + ": corpus has not passed the volume filter");
    const Instant kickoff = corpus.window_end;
    std::array<std::vector<double>, kWindowCount> fav, und;
    auto bucket = [&](const std::vector<TweetRecord>& tweets, auto& out) {
        for (const auto& t : tweets) {
            auto w = window_of(t.timestamp, kickoff);
            if (!w) continue;
            out[static_cast<std::size_t>(*w - 1)].push_back(score_tweet(t, scorer).value());
        }
    };
    bucket(corpus.favorite_tweets, fav);
    bucket(corpus.underdog_tweets, und);

    FeatureVector fv;
    fv.game_id = corpus.game_id;
    for (std::size_t i = 0; i < kWindowCount; ++i) {
        fv.counts_fav[i] = fav[i].size();
        fv.counts_und[i] = und[i].size();
        if (fv.degenerate(i, cfg.min_per_window) || fav[i].empty() || und[i].empty()) {
            fv.p[i] = 1.0;
        } else {
            fv.p[i] = mann_whitney_u(fav[i], und[i], cfg.utest).p_value;
        }
    }
    return fv;
}

struct WindowSignificance {
    std::size_t upset_pass = 0;
    std::size_t upset_total = 0;
    std::size_t baseline_pass = 0;
    std::size_t baseline_total = 0;
};

/// Per window, how many upset / baseline games have p < alpha.
inline std::array<WindowSignificance, kWindowCount> significance_table(std::span<const FeatureVector> features,
                                                                       double alpha = 1e-4) {
    std::array<WindowSignificance, kWindowCount> table{};
    for (const auto& fv : features) {
        if (!fv.label) throw Error(Errc::UnlabeledGame, fv.game_id + ": significance table needs labels");
        const bool upset = *fv.label == ClassLabel::Upset;
        for (std::size_t i = 0; i < kWindowCount; ++i) {
            auto& row = table[i];
            const bool pass = fv.p[i] < alpha;
            if (upset) {
                ++row.upset_total;
                row.upset_pass += pass;
            } else {
                ++row.baseline_total;
                row.baseline_pass += pass;
            }
        }
    }
    return table;
}

}  // namespace upset
