#pragma once

// Shared fixtures and independent reference computations for the tests.

#include "upset/domain.hpp"
#include "upset/ingest.hpp"
#include "upset/io/csv.hpp"
#include "upset/learn.hpp"
#include "upset/time.hpp"

#include <bit>
#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <numbers>
#include <optional>
#include <string>
#include <vector>

namespace testing_support {

using namespace upset;

inline Instant at(const char* rfc3339) { return *parse_rfc3339(rfc3339); }

inline GameRecord make_game(std::string id, double fav, double draw, double und,
                            std::optional<OutcomeKind> outcome = std::nullopt,
                            Instant kickoff = at("2014-06-12T20:00:00Z")) {
    return validate_game(RawGame{std::move(id), "test", "FAV", "UND", kickoff, fav, draw, und, outcome});
}

inline TweetRecord make_tweet(std::string id, Instant ts, std::string user, std::vector<std::string> tags,
                              std::optional<double> score = std::nullopt, std::string text = "") {
    TweetRecord t;
    t.tweet_id = std::move(id);
    t.timestamp = ts;
    t.user_id = std::move(user);
    t.hashtags = std::move(tags);
    t.precomputed_sentiment = score;
    t.text = std::move(text);
    return t;
}

inline TeamTags make_tags(std::string fav, std::string und, std::string match = "") {
    TeamTags t;
    t.favorite = {std::move(fav)};
    t.underdog = {std::move(und)};
    if (!match.empty()) t.match = {std::move(match)};
    return t;
}

inline std::string source_path(const std::string& rel) { return std::string(UPSET_SOURCE_DIR) + "/" + rel; }

// ---------------------------------------------------------------------------
// Reference computations. None of these share code with the library routines
// they check.
// ---------------------------------------------------------------------------

/// U of the first group by direct pair counting, ties half.
inline double u_by_pairs(const std::vector<double>& a, const std::vector<double>& b) {
    double u = 0.0;
    for (double x : a)
        for (double y : b) u += x > y ? 1.0 : (x == y ? 0.5 : 0.0);
    return u;
}

/// Two-sided exact Mann-Whitney p by enumerating every n_a-subset of the
/// pooled sample as a bitmask and recounting U by pairs.
inline double mw_bruteforce_p(const std::vector<double>& a, const std::vector<double>& b) {
    std::vector<double> pooled(a);
    pooled.insert(pooled.end(), b.begin(), b.end());
    const unsigned n = static_cast<unsigned>(pooled.size());
    const unsigned na = static_cast<unsigned>(a.size());
    const double center = static_cast<double>(a.size() * b.size()) / 2.0;
    // U is a multiple of 1/2, so doubled deviations compare exactly as integers
    const long long dev_obs = std::llabs(std::llround(2.0 * (u_by_pairs(a, b) - center)));
    long long extreme = 0, total = 0;
    std::vector<double> ga, gb;
    for (std::uint32_t mask = 0; mask < (1u << n); ++mask) {
        if (static_cast<unsigned>(std::popcount(mask)) != na) continue;
        ga.clear();
        gb.clear();
        for (unsigned i = 0; i < n; ++i) ((mask >> i) & 1u ? ga : gb).push_back(pooled[i]);
        ++total;
        if (std::llabs(std::llround(2.0 * (u_by_pairs(ga, gb) - center))) >= dev_obs) ++extreme;
    }
    return static_cast<double>(extreme) / static_cast<double>(total);
}

/// Posterior of Upset from the textbook Gaussian naive Bayes formula:
/// class frequencies as priors, per-feature population mean and variance,
/// the same variance floor rule as the library.
inline double gnb_hand_posterior_upset(const std::vector<std::vector<double>>& X, const std::vector<ClassLabel>& y,
                                       const std::vector<double>& x) {
    const std::size_t n = X.size(), d = x.size();
    double floor_var = 0.0;
    for (std::size_t j = 0; j < d; ++j) {
        double s = 0.0, ss = 0.0;
        for (const auto& row : X) s += row[j];
        const double m = s / static_cast<double>(n);
        for (const auto& row : X) ss += (row[j] - m) * (row[j] - m);
        floor_var = std::max(floor_var, ss / static_cast<double>(n));
    }
    floor_var = std::max(1e-9 * floor_var, 1e-12);
    double log_joint[2];
    const ClassLabel cls[2] = {ClassLabel::Upset, ClassLabel::Baseline};
    for (int c = 0; c < 2; ++c) {
        std::vector<const std::vector<double>*> rows;
        for (std::size_t i = 0; i < n; ++i)
            if (y[i] == cls[c]) rows.push_back(&X[i]);
        const double nc = static_cast<double>(rows.size());
        double lj = std::log(nc / static_cast<double>(n));
        for (std::size_t j = 0; j < d; ++j) {
            double s = 0.0;
            for (auto* r : rows) s += (*r)[j];
            const double mu = s / nc;
            double v = 0.0;
            for (auto* r : rows) v += ((*r)[j] - mu) * ((*r)[j] - mu);
            v = std::max(v / nc, floor_var);
            lj += std::log(1.0 / std::sqrt(2.0 * std::numbers::pi * v)) - (x[j] - mu) * (x[j] - mu) / (2.0 * v);
        }
        log_joint[c] = lj;
    }
    return 1.0 / (1.0 + std::exp(log_joint[1] - log_joint[0]));
}

}  // namespace testing_support
