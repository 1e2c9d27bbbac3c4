#pragma once

// End-to-end commands over in-memory file contents. The command line tool is a
// thin wrapper that reads inputs, calls these and writes the results.

#include "upset/betting.hpp"
#include "upset/features.hpp"
#include "upset/ingest.hpp"
#include "upset/io/csv.hpp"
#include "upset/io/formats.hpp"
#include "upset/io/numbers.hpp"
#include "upset/learn.hpp"
#include "upset/odds.hpp"
#include "upset/sentiment.hpp"
#include "upset/signals.hpp"
#include "upset/synth.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <unordered_set>
#include <vector>

namespace upset {

using Json = nlohmann::ordered_json;

// ---------------------------------------------------------------------------
// Configuration
// ---------------------------------------------------------------------------
enum class ScorerKind { Passthrough, Lexicon };

struct PipelineConfig {
    double theta = 5.0;
    std::size_t exact_cutoff = 20;
    bool tie_correction = true;
    std::size_t min_per_window = 3;
    VolumeConfig volume;
    NeutralBand band;
    ScorerKind scorer = ScorerKind::Passthrough;
    std::string lexicon_path;
    double alpha = 1e-4;
    std::size_t k = 3;
    std::size_t reshuffle_rounds = 0;
    std::size_t rounds = 100;
    double unit_stake = 1.0;
    StakeMode stake_mode = StakeMode::Split;
    std::uint64_t seed = 0;
    SynthConfig synth;

    /// Applies one `key = value` setting. Unknown keys and malformed values
    /// throw Error(ParseError) so the caller can attach a location.
    void set(std::string_view key, std::string_view value);

    void validate() const {
        SelectionConfig{theta}.validate();
        band.validate();
        if (exact_cutoff > 60) throw Error(Errc::InvalidConfig, "exact_cutoff above 60 is not supported");
        if (!(volume.min_rate >= 0.0)) throw Error(Errc::InvalidConfig, "min_rate must be >= 0");
        if (!(alpha > 0.0 && alpha < 1.0)) throw Error(Errc::InvalidConfig, "alpha must lie in (0,1)");
        if (k < 2) throw Error(Errc::InvalidConfig, "k must be at least 2");
        if (scorer == ScorerKind::Lexicon && lexicon_path.empty())
            throw Error(Errc::InvalidConfig, "scorer = lexicon needs a lexicon path");
        betting().validate();
    }

    FeatureConfig features() const { return {min_per_window, {exact_cutoff, tie_correction}}; }

    BettingConfig betting() const {
        BettingConfig b;
        b.unit_stake = unit_stake;
        b.rounds = rounds;
        b.k = k;
        b.seed = seed;
        b.mode = stake_mode;
        return b;
    }

    SynthConfig synth_config() const {
        SynthConfig s = synth;
        s.theta = theta;
        s.seed = seed;
        return s;
    }
};

namespace detail {

inline Error bad_value(std::string_view key, std::string_view value) {
    return Error(Errc::ParseError, "bad value '" + std::string(value) + "' for " + std::string(key));
}

inline double cfg_double(std::string_view key, std::string_view value) {
    auto v = io::parse_double(value);
    if (!v) throw bad_value(key, value);
    return *v;
}

template <class Int>
Int cfg_int(std::string_view key, std::string_view value) {
    auto v = io::parse_int<Int>(io::trim(value));
    if (!v) throw bad_value(key, value);
    return *v;
}

inline bool cfg_bool(std::string_view key, std::string_view value) {
    if (value == "true" || value == "1") return true;
    if (value == "false" || value == "0") return false;
    throw bad_value(key, value);
}

}  // namespace detail

inline void PipelineConfig::set(std::string_view key, std::string_view value) {
    using namespace detail;
    if (key == "theta") theta = cfg_double(key, value);
    else if (key == "exact_cutoff") exact_cutoff = cfg_int<std::size_t>(key, value);
    else if (key == "tie_correction") tie_correction = cfg_bool(key, value);
    else if (key == "min_per_window") min_per_window = cfg_int<std::size_t>(key, value);
    else if (key == "min_rate") volume.min_rate = cfg_double(key, value);
    else if (key == "volume_semantics") {
        if (value == "average") volume.semantics = VolumeSemantics::Average;
        else if (value == "every_hour") volume.semantics = VolumeSemantics::EveryHour;
        else throw bad_value(key, value);
    } else if (key == "neutral_low") band.low = cfg_double(key, value);
    else if (key == "neutral_high") band.high = cfg_double(key, value);
    else if (key == "scorer") {
        if (value == "passthrough") scorer = ScorerKind::Passthrough;
        else if (value == "lexicon") scorer = ScorerKind::Lexicon;
        else throw bad_value(key, value);
    } else if (key == "lexicon") lexicon_path = std::string(value);
    else if (key == "alpha") alpha = cfg_double(key, value);
    else if (key == "k") k = cfg_int<std::size_t>(key, value);
    else if (key == "reshuffle_rounds") reshuffle_rounds = cfg_int<std::size_t>(key, value);
    else if (key == "rounds") rounds = cfg_int<std::size_t>(key, value);
    else if (key == "unit_stake") unit_stake = cfg_double(key, value);
    else if (key == "stake_mode") {
        if (value == "split") stake_mode = StakeMode::Split;
        else if (value == "proportional") stake_mode = StakeMode::Proportional;
        else throw bad_value(key, value);
    } else if (key == "seed") seed = cfg_int<std::uint64_t>(key, value);
    else if (key == "n_games") synth.n_games = cfg_int<std::size_t>(key, value);
    else if (key == "upset_fraction") synth.upset_fraction = cfg_double(key, value);
    else if (key == "gap_windows") {
        synth.gap_windows.clear();
        for (const auto& w : io::split(value, ',')) synth.gap_windows.insert(cfg_int<int>(key, w));
    } else if (key == "gap_effect") synth.gap_effect = cfg_double(key, value);
    else if (key == "tweets_per_side_per_window") synth.tweets_per_side_per_window = cfg_int<std::size_t>(key, value);
    else if (key == "match_tweets_per_window") synth.match_tweets_per_window = cfg_int<std::size_t>(key, value);
    else if (key == "score_noise_sd") synth.score_noise_sd = cfg_double(key, value);
    else if (key == "base_sentiment") synth.base_sentiment = cfg_double(key, value);
    else if (key == "pu_min") synth.odds_model.pu_min = cfg_double(key, value);
    else if (key == "margin") synth.odds_model.margin = cfg_double(key, value);
    else if (key == "jitter") synth.odds_model.jitter = cfg_double(key, value);
    else throw Error(Errc::ParseError, "unknown key '" + std::string(key) + "'");
}

/// Flat `key = value` lines; '#' starts a comment. Does not validate.
inline void apply_config_text(PipelineConfig& cfg, std::string_view text, std::string_view source = "config") {
    std::size_t line = 0, pos = 0;
    while (pos < text.size()) {
        auto eol = text.find('\n', pos);
        std::string_view raw = text.substr(pos, eol == std::string_view::npos ? std::string_view::npos : eol - pos);
        pos = eol == std::string_view::npos ? text.size() : eol + 1;
        ++line;
        if (auto hash = raw.find('#'); hash != std::string_view::npos) raw = raw.substr(0, hash);
        const std::string body = io::trim(raw);
        if (body.empty()) continue;
        auto eq = body.find('=');
        if (eq == std::string::npos) throw ParseError(source, line, "expected key = value");
        const std::string key = io::trim(std::string_view(body).substr(0, eq));
        const std::string value = io::trim(std::string_view(body).substr(eq + 1));
        try {
            cfg.set(key, value);
        } catch (const Error& e) {
            throw ParseError(source, line, e.message());
        }
    }
}

inline ScorerSpec resolve_scorer(const PipelineConfig& cfg) {
    if (cfg.scorer == ScorerKind::Passthrough) return PassthroughScorer{};
    return LexiconScorer{io::parse_lexicon(io::read_file(cfg.lexicon_path), cfg.lexicon_path)};
}

// ---------------------------------------------------------------------------
// Report helpers
// ---------------------------------------------------------------------------
namespace detail {

inline double prob6(double x) { return std::round(x * 1e6) / 1e6; }

inline Json metrics_json(const Metrics& m) {
    return Json{{"accuracy", prob6(m.accuracy)},
                {"precision", prob6(m.precision)},
                {"recall", prob6(m.recall)},
                {"f1", prob6(m.f1)},
                {"auroc", prob6(m.auroc)},
                {"tp", m.tp},
                {"fp", m.fp},
                {"tn", m.tn},
                {"fn", m.fn}};
}

inline Json mean_std_json(const MeanStd& ms, double (*q)(double)) { return Json{{"mean", q(ms.mean)}, {"std", q(ms.sd)}}; }

inline std::string dump(const Json& j) { return j.dump(2) + "\n"; }

}  // namespace detail

// ---------------------------------------------------------------------------
// select
// ---------------------------------------------------------------------------
struct SelectResult {
    std::vector<ScoredGame> scored;
    std::string csv;
};

/// Potential upsets of a games file, scored and (when an outcome is known) labeled.
inline SelectResult cmd_select(std::string_view games_text, const PipelineConfig& cfg,
                               std::string_view source = "games") {
    cfg.validate();
    const auto games = io::parse_games(games_text, source);
    const SelectionConfig sel{cfg.theta};
    SelectResult res;
    res.scored = select_potential_upsets(games, sel);
    res.csv = io::format_scored(res.scored);
    return res;
}

// ---------------------------------------------------------------------------
// featurize
// ---------------------------------------------------------------------------
struct Exclusion {
    std::string game_id;
    std::string reason;  // "pu" or "volume"
};

struct FeaturizeResult {
    std::vector<FeatureVector> features;
    std::vector<Exclusion> excluded;
    std::string csv;
    std::string excluded_csv;
};

/// Feature vectors for every potential upset whose pre-game corpus passes the
/// volume filter. Labels come from the outcome when it is known.
inline FeaturizeResult featurize(std::span<const GameRecord> games, std::vector<TweetRecord> tweets,
                                 const io::TagsByGame& tags, const PipelineConfig& cfg, const ScorerSpec& scorer) {
    cfg.validate();
    {
        std::unordered_set<std::string> ids;
        for (const auto& t : tweets)
            if (!ids.insert(t.tweet_id).second)
                throw Error(Errc::DuplicateTweetId, "tweet id '" + t.tweet_id + "' repeated");
    }
    sort_tweets(tweets);
    const SelectionConfig sel{cfg.theta};
    const auto fcfg = cfg.features();
    FeaturizeResult res;
    for (const auto& g : games) {
        if (!(potential_upset_score(g.odds) > sel.theta)) {
            res.excluded.push_back({g.game_id, "pu"});
            continue;
        }
        auto it = tags.find(g.game_id);
        if (it == tags.end()) throw Error(Errc::MissingTags, g.game_id + ": no tags for this game");
        const Instant from = g.kickoff - kPregamePeriod;
        auto lo = std::lower_bound(tweets.begin(), tweets.end(), from,
                                   [](const TweetRecord& t, Instant x) { return t.timestamp < x; });
        auto hi = std::lower_bound(lo, tweets.end(), g.kickoff,
                                   [](const TweetRecord& t, Instant x) { return t.timestamp < x; });
        auto corpus = build_corpus(g, std::span<const TweetRecord>(tweets.data() + (lo - tweets.begin()), static_cast<std::size_t>(hi - lo)), it->second);
        if (!apply_volume_filter(corpus, cfg.volume)) {
            res.excluded.push_back({g.game_id, "volume"});
            continue;
        }
        auto fv = feature_vector(corpus, scorer, fcfg);
        if (g.outcome) fv.label = label_game(score_game(g, sel), sel);
        res.features.push_back(std::move(fv));
    }
    res.csv = io::format_features(res.features);
    std::string ex;
    io::append_csv_row(ex, {"game_id", "reason"});
    for (const auto& e : res.excluded) io::append_csv_row(ex, {e.game_id, e.reason});
    res.excluded_csv = std::move(ex);
    return res;
}

// ---------------------------------------------------------------------------
// evaluate
// ---------------------------------------------------------------------------
struct EvaluateResult {
    CvReport cv;
    std::optional<ReshuffleReport> reshuffle;
    std::string report_json;
    std::string predictions_csv;
};

inline EvaluateResult cmd_evaluate(std::span<const FeatureVector> features, const PipelineConfig& cfg) {
    cfg.validate();
    const auto X = feature_rows(features);
    const auto y = feature_labels(features);
    EvaluateResult res;
    res.cv = cross_validate(X, y, cfg.k, cfg.seed);

    Json j;
    j["command"] = "evaluate";
    j["seed"] = cfg.seed;
    j["k"] = cfg.k;
    j["n_games"] = features.size();
    j["n_upsets"] = static_cast<std::size_t>(std::count(y.begin(), y.end(), ClassLabel::Upset));
    j["pooled"] = detail::metrics_json(res.cv.pooled);
    Json folds = Json::array();
    for (const auto& m : res.cv.per_fold) folds.push_back(detail::metrics_json(m));
    j["per_fold"] = std::move(folds);

    Json sig = Json::array();
    const auto table = significance_table(features, cfg.alpha);
    for (std::size_t i = 0; i < kWindowCount; ++i) {
        const auto& w = table[i];
        sig.push_back(Json{{"window", i + 1},
                           {"upset_pass", w.upset_pass},
                           {"upset_total", w.upset_total},
                           {"baseline_pass", w.baseline_pass},
                           {"baseline_total", w.baseline_total}});
    }
    j["significance"] = Json{{"alpha", cfg.alpha}, {"windows", std::move(sig)}};

    if (cfg.reshuffle_rounds > 0) {
        res.reshuffle = reshuffle_labels_experiment(X, y, cfg.reshuffle_rounds, cfg.seed, cfg.k);
        const auto& s = res.reshuffle->summary;
        j["label_reshuffle"] = Json{{"rounds", cfg.reshuffle_rounds},
                                    {"accuracy", detail::mean_std_json(s.accuracy, detail::prob6)},
                                    {"precision", detail::mean_std_json(s.precision, detail::prob6)},
                                    {"recall", detail::mean_std_json(s.recall, detail::prob6)},
                                    {"f1", detail::mean_std_json(s.f1, detail::prob6)},
                                    {"auroc", detail::mean_std_json(s.auroc, detail::prob6)}};
    }
    res.report_json = detail::dump(j);

    std::vector<std::string> ids;
    for (const auto& fv : features) ids.push_back(fv.game_id);
    res.predictions_csv = io::format_predictions(ids, res.cv);
    return res;
}

// ---------------------------------------------------------------------------
// bet
// ---------------------------------------------------------------------------
struct BetResult {
    BettingReport model;
    BettingReport odds_reshuffle;
    std::vector<FixedStrategyReport> fixed;
    std::string report_json;
};

/// Pairs feature rows with their games; every row needs a label and an outcome.
inline std::vector<BettingGame> betting_games(std::span<const FeatureVector> features,
                                              std::span<const GameRecord> games) {
    std::unordered_map<std::string, const GameRecord*> by_id;
    for (const auto& g : games) by_id.emplace(g.game_id, &g);
    std::vector<BettingGame> out;
    for (const auto& fv : features) {
        auto it = by_id.find(fv.game_id);
        if (it == by_id.end()) throw Error(Errc::MissingOutcome, fv.game_id + ": not in the games file");
        if (!it->second->outcome) throw Error(Errc::MissingOutcome, fv.game_id + ": no outcome");
        if (!fv.label) throw Error(Errc::UnlabeledGame, fv.game_id + ": no class label");
        out.push_back({*it->second, FeatureRow(fv.p.begin(), fv.p.end()), *fv.label});
    }
    return out;
}

inline BetResult cmd_bet(std::span<const FeatureVector> features, std::span<const GameRecord> games,
                         const PipelineConfig& cfg, bool oracle = false) {
    cfg.validate();
    const auto bgames = betting_games(features, games);
    const auto bcfg = cfg.betting();
    BetResult res;
    if (oracle) {
        res.model = betting_rounds(bgames, bcfg, oracle_predictions);
        res.odds_reshuffle = odds_reshuffle_experiment(bgames, bcfg, oracle_predictions);
    } else {
        res.model = betting_rounds(bgames, bcfg);
        res.odds_reshuffle = odds_reshuffle_experiment(bgames, bcfg);
    }
    std::vector<GameRecord> records;
    for (const auto& g : bgames) records.push_back(g.game);
    for (auto s : kFixedStrategies) res.fixed.push_back(fixed_strategy_eval(records, s, cfg.unit_stake));

    auto sig6 = [](double x) { return io::quantize_sig6(x); };
    auto rounds_json = [&](const BettingReport& rep) {
        Json rounds = Json::array();
        for (const auto& r : rep.rounds)
            rounds.push_back(Json{{"round", r.round}, {"seed", r.seed}, {"b", sig6(r.b)}, {"r", sig6(r.r)},
                                  {"profit", sig6(r.profit)}});
        return Json{{"profit", detail::mean_std_json(rep.profit, io::quantize_sig6)}, {"rounds", std::move(rounds)}};
    };
    Json j;
    j["command"] = "bet";
    j["seed"] = cfg.seed;
    j["config"] = Json{{"predictor", oracle ? "oracle" : "naive_bayes"},
                       {"unit_stake", bcfg.unit_stake},
                       {"rounds", bcfg.rounds},
                       {"k", bcfg.k},
                       {"sigma", bcfg.sigma},
                       {"stake_mode", bcfg.mode == StakeMode::Split ? "split" : "proportional"},
                       {"theta", cfg.theta}};
    j["n_games"] = bgames.size();
    j["model"] = rounds_json(res.model);
    j["odds_reshuffle"] = rounds_json(res.odds_reshuffle);
    Json fixed = Json::array();
    for (const auto& f : res.fixed) {
        Json per_game = Json::array();
        for (std::size_t i = 0; i < records.size(); ++i)
            per_game.push_back(Json{{"game_id", records[i].game_id}, {"profit", sig6(f.per_game_profit[i])}});
        fixed.push_back(Json{{"strategy", to_string(f.strategy)},
                             {"profit", detail::mean_std_json(f.profit, io::quantize_sig6)},
                             {"per_game", std::move(per_game)}});
    }
    j["fixed_strategies"] = std::move(fixed);
    res.report_json = detail::dump(j);
    return res;
}

// ---------------------------------------------------------------------------
// synth
// ---------------------------------------------------------------------------
struct SynthFiles {
    SynthCorpus corpus;
    std::string games_csv;
    std::string tweets_tsv;
    std::string tags_csv;
};

inline io::TagsByGame tags_by_game(std::span<const GameTags> tags) {
    io::TagsByGame out;
    for (const auto& t : tags) out.emplace(t.game_id, t.tags);
    return out;
}

inline SynthFiles cmd_synth(const PipelineConfig& cfg) {
    cfg.validate();
    SynthFiles f;
    f.corpus = generate(cfg.synth_config());
    f.games_csv = io::format_games(f.corpus.games);
    f.tweets_tsv = io::format_tweets(f.corpus.tweets);
    f.tags_csv = io::format_tags(tags_by_game(f.corpus.tags));
    return f;
}

// ---------------------------------------------------------------------------
// signals
// ---------------------------------------------------------------------------
struct SignalsResult {
    std::vector<MinuteBucket> series;
    InteractionCounts interactions;
    std::string csv;
    std::string interactions_json;
};

inline SignalsResult cmd_signals(const GameRecord& game, std::span<const TweetRecord> tweets, const TeamTags& tags,
                                 std::span<const MatchEvent> events, const PipelineConfig& cfg,
                                 const ScorerSpec& scorer) {
    cfg.validate();
    SignalsResult res;
    const auto faction = ingame_tweets(tweets, tags, game.kickoff);
    res.series = annotate_events(minute_series(faction, game.kickoff, scorer), events);
    const auto groups = fan_groups(faction);
    std::vector<TweetRecord> all;
    all.insert(all.end(), faction.favorite.begin(), faction.favorite.end());
    all.insert(all.end(), faction.underdog.begin(), faction.underdog.end());
    all.insert(all.end(), faction.match.begin(), faction.match.end());
    res.interactions = interaction_counts(all, groups.favorite, groups.underdog);
    res.csv = io::format_signals(res.series);
    const auto& c = res.interactions;
    Json j{{"game_id", game.game_id},
           {"favorite_fans", groups.favorite.size()},
           {"underdog_fans", groups.underdog.size()},
           {"FFRT", c.ffrt}, {"FFMT", c.ffmt}, {"FURT", c.furt}, {"FUMT", c.fumt},
           {"UURT", c.uurt}, {"UUMT", c.uumt}, {"UFRT", c.ufrt}, {"UFMT", c.ufmt}};
    res.interactions_json = detail::dump(j);
    return res;
}

// ---------------------------------------------------------------------------
// bench-sentiment
// ---------------------------------------------------------------------------
inline std::string cmd_bench_sentiment(std::span<const LabeledText> corpus, const PipelineConfig& cfg,
                                       const ScorerSpec& scorer) {
    cfg.validate();
    const double acc = benchmark_scorer(corpus, scorer, cfg.band);
    Json j{{"command", "bench-sentiment"},
           {"scorer", cfg.scorer == ScorerKind::Lexicon ? "lexicon" : "passthrough"},
           {"n", corpus.size()},
           {"neutral_band", Json::array({cfg.band.low, cfg.band.high})},
           {"accuracy", detail::prob6(acc)}};
    return detail::dump(j);
}

}  // namespace upset
