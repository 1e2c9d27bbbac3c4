#pragma once

#include "upset/domain.hpp"
#include "upset/features.hpp"
#include "upset/learn.hpp"
#include "upset/random.hpp"

#include <array>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace upset {

struct StakeAllocation {
    double on_fav = 0.0;
    double on_draw = 0.0;
    double on_und = 0.0;

    double total() const { return on_fav + on_draw + on_und; }

    double on(OutcomeKind o) const {
        switch (o) {
            case OutcomeKind::FavoriteWin: return on_fav;
            case OutcomeKind::Draw: return on_draw;
            case OutcomeKind::UnderdogWin: return on_und;
        }
        return 0.0;
    }
};

struct BetSettlement {
    double b = 0.0;       // money bet
    double r = 0.0;       // money returned
    double profit = 0.0;  // (r - b) / b
};

enum class StakeMode {
    /// upset prediction: half on draw, half on underdog
    Split,
    /// upset prediction: the unit is shared between draw and underdog in
    /// proportion to their decimal odds
    Proportional,
};

struct BettingConfig {
    double unit_stake = 1.0;
    std::size_t rounds = 100;
    std::size_t k = 3;
    std::uint64_t seed = 0;
    /// Minimum return multiple of the upset outcomes; recorded, not enforced.
    double sigma = 5.0;
    StakeMode mode = StakeMode::Split;

    void validate() const {
        if (rounds < 1) throw Error(Errc::InvalidConfig, "betting needs at least one round");
        if (!(unit_stake > 0.0)) throw Error(Errc::InvalidConfig, "unit stake must be positive");
        if (k < 1) throw Error(Errc::InvalidConfig, "k must be at least 1");
    }
};

/// Baseline: everything on the favorite. Upset: half on the draw, half on the underdog.
inline StakeAllocation strategy_allocate(ClassLabel prediction, double unit) {
    if (prediction == ClassLabel::Baseline) return {unit, 0.0, 0.0};
    return {0.0, unit / 2.0, unit / 2.0};
}

inline StakeAllocation strategy_allocate(ClassLabel prediction, double unit, const OddsTriple& odds, StakeMode mode) {
    if (mode == StakeMode::Split || prediction == ClassLabel::Baseline) return strategy_allocate(prediction, unit);
    const double w = odds.draw() + odds.und();
    return {0.0, unit * odds.draw() / w, unit * odds.und() / w};
}

/// Decimal-odds settlement: the stake on the realized outcome pays stake * odds.
inline BetSettlement settle(const StakeAllocation& alloc, const OddsTriple& odds, OutcomeKind outcome) {
    BetSettlement s;
    s.b = alloc.total();
    if (!(s.b > 0.0)) throw Error(Errc::ZeroTotalStake, "nothing was staked");
    s.r = alloc.on(outcome) * odds.of(outcome);
    s.profit = (s.r - s.b) / s.b;
    return s;
}

// ---------------------------------------------------------------------------
// Prediction-driven rounds
// ---------------------------------------------------------------------------

/// One potential-upset game ready for backtesting.
struct BettingGame {
    GameRecord game;  // must carry an outcome
    FeatureRow features;
    ClassLabel label;
};

struct RoundResult {
    std::size_t round = 0;
    std::uint64_t seed = 0;  // seed of this round's fold partition
    double b = 0.0;
    double r = 0.0;
    double profit = 0.0;
};

struct BettingReport {
    std::vector<RoundResult> rounds;
    MeanStd profit;
    std::uint64_t seed = 0;
    BettingConfig config;
};

inline constexpr std::uint64_t kStreamBetCv = 0x626574637631ULL;
inline constexpr std::uint64_t kStreamOddsShuffle = 0x6f64647331ULL;

/// Stratified k-fold Gaussian NB predictions.
inline std::vector<ClassLabel> cv_predictions(std::span<const BettingGame> games, std::size_t k, std::uint64_t seed) {
    std::vector<FeatureRow> X;
    std::vector<ClassLabel> y;
    for (const auto& g : games) {
        X.push_back(g.features);
        y.push_back(g.label);
    }
    return cross_validate(X, y, k, seed).predictions;
}

/// Predictions equal to the true labels.
inline std::vector<ClassLabel> oracle_predictions(std::span<const BettingGame> games, std::size_t, std::uint64_t) {
    std::vector<ClassLabel> y;
    for (const auto& g : games) y.push_back(g.label);
    return y;
}

inline std::vector<std::size_t> identity_permutation(std::size_t n, std::uint64_t) {
    std::vector<std::size_t> p(n);
    std::iota(p.begin(), p.end(), std::size_t{0});
    return p;
}

inline std::vector<std::size_t> uniform_permutation(std::size_t n, std::uint64_t seed) {
    auto p = identity_permutation(n, seed);
    Rng rng(seed);
    rng.shuffle(p);
    return p;
}

namespace detail {

/// `odds_for(i)` chooses the odds triple game i is settled against.
template <class OddsFor>
RoundResult run_round(std::span<const BettingGame> games, const std::vector<ClassLabel>& predictions,
                      const BettingConfig& cfg, OddsFor&& odds_for) {
    RoundResult res;
    for (std::size_t i = 0; i < games.size(); ++i) {
        const auto& g = games[i];
        if (!g.game.outcome) throw Error(Errc::MissingOutcome, g.game.game_id + ": cannot settle without an outcome");
        const OddsTriple& odds = odds_for(i);
        const auto s = settle(strategy_allocate(predictions[i], cfg.unit_stake, odds, cfg.mode), odds, *g.game.outcome);
        res.b += s.b;
        res.r += s.r;
    }
    res.profit = (res.r - res.b) / res.b;
    return res;
}

}  // namespace detail

/// Each round draws a fresh fold partition, bets every game on its out-of-fold
/// prediction, and takes one marginal profit over the summed stakes and returns.
/// `permute(n, seed)` reassigns odds triples across games before settlement.
template <class Predictor, class Permuter>
BettingReport run_betting(std::span<const BettingGame> games, const BettingConfig& cfg, Predictor&& predict,
                          Permuter&& permute) {
    cfg.validate();
    if (games.empty()) throw Error(Errc::EmptyList, "no games to bet on");
    BettingReport rep;
    rep.seed = cfg.seed;
    rep.config = cfg;
    for (std::size_t r = 0; r < cfg.rounds; ++r) {
        const std::uint64_t cv_seed = derive_seed(cfg.seed, kStreamBetCv, r);
        const auto predictions = predict(games, cfg.k, cv_seed);
        if (predictions.size() != games.size())
            throw Error(Errc::LengthMismatch, "predictor returned the wrong number of labels");
        const auto perm = permute(games.size(), derive_seed(cfg.seed, kStreamOddsShuffle, r));
        auto res = detail::run_round(games, predictions, cfg,
                                     [&](std::size_t i) -> const OddsTriple& { return games[perm[i]].game.odds; });
        res.round = r;
        res.seed = cv_seed;
        rep.rounds.push_back(res);
    }
    std::vector<double> profits;
    for (const auto& r : rep.rounds) profits.push_back(r.profit);
    rep.profit = mean_std(profits);
    return rep;
}

template <class Predictor = decltype(&cv_predictions)>
BettingReport betting_rounds(std::span<const BettingGame> games, const BettingConfig& cfg,
                             Predictor&& predict = cv_predictions) {
    return run_betting(games, cfg, predict, identity_permutation);
}

/// As betting_rounds, but odds triples are permuted uniformly across games each
/// round; labels, features and outcomes stay put.
template <class Predictor = decltype(&cv_predictions), class Permuter = decltype(&uniform_permutation)>
BettingReport odds_reshuffle_experiment(std::span<const BettingGame> games, const BettingConfig& cfg,
                                        Predictor&& predict = cv_predictions,
                                        Permuter&& permute = uniform_permutation) {
    return run_betting(games, cfg, predict, permute);
}

// ---------------------------------------------------------------------------
// Fixed strategies
// ---------------------------------------------------------------------------
enum class FixedStrategy { FavWins, FavNotWin, FavLoses, Tie };

inline constexpr std::array<FixedStrategy, 4> kFixedStrategies{FixedStrategy::FavWins, FixedStrategy::FavNotWin,
                                                               FixedStrategy::FavLoses, FixedStrategy::Tie};

inline std::string_view to_string(FixedStrategy s) {
    switch (s) {
        case FixedStrategy::FavWins: return "fav_wins";
        case FixedStrategy::FavNotWin: return "fav_not_win";
        case FixedStrategy::FavLoses: return "fav_loses";
        case FixedStrategy::Tie: return "tie";
    }
    return "?";
}

inline StakeAllocation fixed_allocation(FixedStrategy s, double unit) {
    switch (s) {
        case FixedStrategy::FavWins: return {unit, 0.0, 0.0};
        case FixedStrategy::FavNotWin: return {0.0, unit / 2.0, unit / 2.0};
        case FixedStrategy::FavLoses: return {0.0, 0.0, unit};
        case FixedStrategy::Tie: return {0.0, unit, 0.0};
    }
    return {};
}

struct FixedStrategyReport {
    FixedStrategy strategy = FixedStrategy::FavWins;
    std::vector<double> per_game_profit;
    MeanStd profit;
};

/// Per-game marginal profit of a strategy that ignores predictions, then mean/std over games.
inline FixedStrategyReport fixed_strategy_eval(std::span<const GameRecord> games, FixedStrategy strategy,
                                               double unit = 1.0) {
    FixedStrategyReport rep;
    rep.strategy = strategy;
    const auto alloc = fixed_allocation(strategy, unit);
    for (const auto& g : games) {
        if (!g.outcome) throw Error(Errc::MissingOutcome, g.game_id + ": cannot settle without an outcome");
        rep.per_game_profit.push_back(settle(alloc, g.odds, *g.outcome).profit);
    }
    rep.profit = mean_std(rep.per_game_profit);
    return rep;
}

}  // namespace upset
