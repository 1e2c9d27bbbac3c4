#pragma once

#include "upset/domain.hpp"

#include <optional>
#include <span>
#include <vector>

namespace upset {

struct SelectionConfig {
    double theta = 5.0;

    void validate() const {
        if (!(theta > 1.0)) throw Error(Errc::InvalidConfig, "theta must exceed 1");
    }
};

struct ScoredGame {
    GameRecord game;
    double pu = 1.0;
    std::optional<double> u;
    std::optional<ClassLabel> label;
};

/// PU(g) = (O_max - 1) / (O_min - 1): how lopsided the market considers the game.
inline double potential_upset_score(const OddsTriple& odds) {
    return (odds.max() - 1.0) / (odds.min() - 1.0);
}

/// U(g) = (O_realized - 1) / (O_min - 1): how surprising the realized outcome was.
inline double upset_score(const OddsTriple& odds, OutcomeKind outcome) {
    return (odds.of(outcome) - 1.0) / (odds.min() - 1.0);
}

/// Upset iff u > theta (strict).
inline ClassLabel label_from_upset_score(double u, const SelectionConfig& cfg) {
    return u > cfg.theta ? ClassLabel::Upset : ClassLabel::Baseline;
}

inline ClassLabel label_game(const ScoredGame& scored, const SelectionConfig& cfg) {
    if (!scored.u) throw Error(Errc::MissingOutcome, scored.game.game_id + ": no recorded outcome");
    return label_from_upset_score(*scored.u, cfg);
}

/// Computes pu, and u plus label when the outcome is known.
inline ScoredGame score_game(const GameRecord& game, const SelectionConfig& cfg) {
    ScoredGame s{game, potential_upset_score(game.odds), std::nullopt, std::nullopt};
    if (game.outcome) {
        s.u = upset_score(game.odds, *game.outcome);
        s.label = label_from_upset_score(*s.u, cfg);
    }
    return s;
}

/// Keeps the games with PU(g) > theta, in input order.
inline std::vector<ScoredGame> select_potential_upsets(std::span<const GameRecord> games,
                                                       const SelectionConfig& cfg) {
    cfg.validate();
    std::vector<ScoredGame> out;
    for (const auto& g : games) {
        if (potential_upset_score(g.odds) > cfg.theta) out.push_back(score_game(g, cfg));
    }
    return out;
}

/// Component-wise mean over bookmakers.
inline OddsTriple average_odds(std::span<const OddsTriple> per_bookmaker) {
    if (per_bookmaker.empty()) throw Error(Errc::EmptyList, "no bookmaker odds to average");
    double f = 0, d = 0, u = 0;
    for (const auto& o : per_bookmaker) {
        f += o.fav();
        d += o.draw();
        u += o.und();
    }
    const double n = static_cast<double>(per_bookmaker.size());
    return OddsTriple(f / n, d / n, u / n);
}

}  // namespace upset
