// upset: command line front end for the upset prediction pipeline.
//
// Exit codes: 0 success, 2 parse error, 3 validation error, 4 runtime error.

#include "upset/pipeline.hpp"

#include <CLI11.hpp>

#include <cstdio>
#include <iostream>
#include <string>
#include <utility>
#include <vector>

namespace {

using namespace upset;

constexpr int kExitParse = 2;
constexpr int kExitValidation = 3;
constexpr int kExitRuntime = 4;

struct Settings {
    std::string config_path;
    std::vector<std::pair<std::string, std::string>> overrides;  // applied after the config file, in order

    PipelineConfig load() const {
        PipelineConfig cfg;
        if (!config_path.empty()) apply_config_text(cfg, io::read_file(config_path), config_path);
        for (const auto& [k, v] : overrides) {
            try {
                cfg.set(k, v);
            } catch (const Error& e) {
                throw ParseError("command line", 0, std::string("--") + k + ": " + e.message());
            }
        }
        cfg.validate();
        return cfg;
    }
};

const char* kKeysHelp =
    "Override any config key (repeatable). Keys: theta, exact_cutoff, tie_correction, min_per_window, min_rate, "
    "volume_semantics (average|every_hour), neutral_low, neutral_high, scorer (passthrough|lexicon), lexicon, "
    "alpha, k, reshuffle_rounds, rounds, unit_stake, stake_mode (split|proportional), seed, n_games, "
    "upset_fraction, gap_windows, gap_effect, tweets_per_side_per_window, match_tweets_per_window, score_noise_sd, "
    "base_sentiment, pu_min, margin, jitter";

void add_config_flags(CLI::App* sub, Settings& s) {
    sub->add_option("--config", s.config_path, "Flat key = value config file; flags override it")
        ->check(CLI::ExistingFile);
    sub->add_option_function<std::vector<std::string>>(
           "--set",
           [&s](const std::vector<std::string>& kvs) {
               for (const auto& kv : kvs) {
                   auto eq = kv.find('=');
                   if (eq == std::string::npos) throw CLI::ValidationError("--set", "expected KEY=VALUE, got " + kv);
                   s.overrides.emplace_back(io::trim(kv.substr(0, eq)), io::trim(kv.substr(eq + 1)));
               }
           },
           kKeysHelp)
        ->type_name("KEY=VALUE");
}

void add_key_flag(CLI::App* sub, Settings& s, const std::string& flag, const std::string& key, const std::string& help) {
    sub->add_option_function<std::string>(
        flag, [&s, key](const std::string& v) { s.overrides.emplace_back(key, v); }, help);
}

void write_out(const std::string& path, const std::string& content) { io::write_file_atomic(path, content); }

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Predict soccer upsets from pre-game fan sentiment and backtest betting on the predictions."};
    app.require_subcommand(1);
    Settings settings;
    std::string games_path, tweets_path, tags_path, features_path, out_path, aux_path, events_path, game_id,
        benchmark_path;
    bool oracle = false;

    // select
    auto* select = app.add_subcommand("select", "Score games by PU/U and keep the potential upsets");
    select->add_option("--games", games_path, "Games CSV")->required();
    select->add_option("--out", out_path, "Scored games CSV")->required();
    add_key_flag(select, settings, "--theta", "theta", "Potential-upset threshold (default 5)");
    add_config_flags(select, settings);

    // featurize
    auto* featurize_cmd = app.add_subcommand("featurize", "Build per-window U-test p-value features");
    featurize_cmd->add_option("--games", games_path, "Games CSV")->required();
    featurize_cmd->add_option("--tweets", tweets_path, "Tweets TSV")->required();
    featurize_cmd->add_option("--tags", tags_path, "Tags CSV")->required();
    featurize_cmd->add_option("--out", out_path, "Features CSV")->required();
    featurize_cmd->add_option("--excluded", aux_path, "Excluded games CSV (game_id,reason); default: stderr");
    add_key_flag(featurize_cmd, settings, "--theta", "theta", "Potential-upset threshold (default 5)");
    add_key_flag(featurize_cmd, settings, "--scorer", "scorer", "passthrough or lexicon (default passthrough)");
    add_key_flag(featurize_cmd, settings, "--lexicon", "lexicon", "Lexicon TSV for scorer = lexicon");
    add_key_flag(featurize_cmd, settings, "--min-rate", "min_rate", "Volume filter, tweets per team per hour (default 40)");
    add_key_flag(featurize_cmd, settings, "--volume-semantics", "volume_semantics", "average or every_hour");
    add_key_flag(featurize_cmd, settings, "--min-per-window", "min_per_window",
                 "Windows with fewer tweets on a side get p = 1 (default 3)");
    add_key_flag(featurize_cmd, settings, "--exact-cutoff", "exact_cutoff",
                 "Largest pooled sample size tested exactly (default 20)");
    add_config_flags(featurize_cmd, settings);

    // evaluate
    auto* evaluate = app.add_subcommand("evaluate", "Stratified k-fold Gaussian naive Bayes evaluation");
    evaluate->add_option("--features", features_path, "Features CSV")->required();
    evaluate->add_option("--report", out_path, "Report JSON")->required();
    evaluate->add_option("--predictions", aux_path, "Out-of-fold predictions CSV");
    add_key_flag(evaluate, settings, "--seed", "seed", "Master seed (default 0)");
    add_key_flag(evaluate, settings, "--k", "k", "Number of folds (default 3)");
    add_key_flag(evaluate, settings, "--reshuffle-rounds", "reshuffle_rounds",
                 "Label-reshuffle null rounds (default 0: off)");
    add_key_flag(evaluate, settings, "--alpha", "alpha", "Significance level for the window table (default 1e-4)");
    add_config_flags(evaluate, settings);

    // bet
    auto* bet = app.add_subcommand("bet", "Backtest the betting strategy, the odds reshuffle and fixed strategies");
    bet->add_option("--features", features_path, "Features CSV")->required();
    bet->add_option("--games", games_path, "Games CSV with outcomes")->required();
    bet->add_option("--report", out_path, "Betting report JSON")->required();
    bet->add_flag("--oracle", oracle, "Bet on the true labels instead of model predictions");
    add_key_flag(bet, settings, "--seed", "seed", "Master seed (default 0)");
    add_key_flag(bet, settings, "--rounds", "rounds", "Betting rounds (default 100)");
    add_key_flag(bet, settings, "--k", "k", "Number of folds (default 3)");
    add_key_flag(bet, settings, "--unit-stake", "unit_stake", "Stake per game (default 1)");
    add_key_flag(bet, settings, "--stake-mode", "stake_mode", "split or proportional (default split)");
    add_config_flags(bet, settings);

    // synth
    auto* synth = app.add_subcommand("synth", "Generate a seeded synthetic corpus (games.csv, tweets.tsv, tags.csv)");
    synth->add_option("--out-dir", out_path, "Output directory")->required();
    add_key_flag(synth, settings, "--seed", "seed", "Master seed (default 0)");
    add_key_flag(synth, settings, "--n-games", "n_games", "Number of games (default 60)");
    add_key_flag(synth, settings, "--upset-fraction", "upset_fraction", "Share of upsets (default 0.33)");
    add_key_flag(synth, settings, "--gap-windows", "gap_windows", "Comma-separated window indices (default 10,11)");
    add_key_flag(synth, settings, "--gap-effect", "gap_effect", "Baseline favorite-minus-underdog shift (default 0.3)");
    add_key_flag(synth, settings, "--noise-sd", "score_noise_sd", "Score noise standard deviation (default 0.15)");
    add_key_flag(synth, settings, "--tweets-per-window", "tweets_per_side_per_window",
                 "Tweets per side per window (default 200)");
    add_config_flags(synth, settings);

    // signals
    auto* signals = app.add_subcommand("signals", "Per-minute in-game volume, sentiment and interactions");
    signals->add_option("--games", games_path, "Games CSV")->required();
    signals->add_option("--tweets", tweets_path, "Tweets TSV")->required();
    signals->add_option("--tags", tags_path, "Tags CSV")->required();
    signals->add_option("--game", game_id, "Game id")->required();
    signals->add_option("--events", events_path, "Events CSV (minute,kind,team)");
    signals->add_option("--out", out_path, "Per-minute signal CSV")->required();
    signals->add_option("--interactions", aux_path, "Interaction counts JSON; default: stdout");
    add_key_flag(signals, settings, "--scorer", "scorer", "passthrough or lexicon (default passthrough)");
    add_key_flag(signals, settings, "--lexicon", "lexicon", "Lexicon TSV for scorer = lexicon");
    add_config_flags(signals, settings);

    // bench-sentiment
    auto* bench = app.add_subcommand("bench-sentiment", "Polarity accuracy of a scorer on a labeled corpus");
    bench->add_option("--benchmark", benchmark_path, "Benchmark TSV (label<TAB>text)")->required();
    bench->add_option("--out", out_path, "Result JSON; default: stdout");
    add_key_flag(bench, settings, "--scorer", "scorer", "passthrough or lexicon (default lexicon when --lexicon given)");
    add_key_flag(bench, settings, "--lexicon", "lexicon", "Lexicon TSV");
    add_config_flags(bench, settings);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitParse;
    }

    try {
        if (*bench) {
            // a lexicon on the command line implies the lexicon scorer
            bool has_scorer = false, has_lexicon = false;
            for (const auto& [k, v] : settings.overrides) {
                has_scorer |= k == "scorer";
                has_lexicon |= k == "lexicon";
            }
            if (has_lexicon && !has_scorer) settings.overrides.emplace_back("scorer", "lexicon");
        }
        const PipelineConfig cfg = settings.load();

        if (*select) {
            auto res = cmd_select(io::read_file(games_path), cfg, games_path);
            write_out(out_path, res.csv);
            std::size_t upsets = 0, baselines = 0;
            for (const auto& s : res.scored) {
                if (s.label == ClassLabel::Upset) ++upsets;
                if (s.label == ClassLabel::Baseline) ++baselines;
            }
            std::printf("potential_upsets=%zu upsets=%zu baselines=%zu\n", res.scored.size(), upsets, baselines);
        } else if (*featurize_cmd) {
            const auto games = io::parse_games(io::read_file(games_path), games_path);
            auto tweets = io::parse_tweets(io::read_file(tweets_path), tweets_path);
            const auto tags = io::parse_tags(io::read_file(tags_path), tags_path);
            const auto scorer = resolve_scorer(cfg);
            auto res = featurize(games, std::move(tweets), tags, cfg, scorer);
            write_out(out_path, res.csv);
            if (!aux_path.empty()) {
                write_out(aux_path, res.excluded_csv);
            } else {
                for (const auto& e : res.excluded) std::fprintf(stderr, "excluded %s: %s\n", e.game_id.c_str(), e.reason.c_str());
            }
            std::printf("featurized=%zu excluded=%zu exact_cutoff=%zu tie_correction=%s\n", res.features.size(),
                        res.excluded.size(), cfg.exact_cutoff, cfg.tie_correction ? "true" : "false");
        } else if (*evaluate) {
            std::printf("seed=%llu\n", static_cast<unsigned long long>(cfg.seed));
            const auto features = io::parse_features(io::read_file(features_path), features_path);
            auto res = cmd_evaluate(features, cfg);
            write_out(out_path, res.report_json);
            if (!aux_path.empty()) write_out(aux_path, res.predictions_csv);
            std::printf("accuracy=%s auroc=%s\n", io::format_prob(res.cv.pooled.accuracy).c_str(),
                        io::format_prob(res.cv.pooled.auroc).c_str());
        } else if (*bet) {
            std::printf("seed=%llu\n", static_cast<unsigned long long>(cfg.seed));
            const auto features = io::parse_features(io::read_file(features_path), features_path);
            const auto games = io::parse_games(io::read_file(games_path), games_path);
            auto res = cmd_bet(features, games, cfg, oracle);
            write_out(out_path, res.report_json);
            std::printf("mean_profit=%s odds_reshuffle_mean_profit=%s\n", io::format_sig6(res.model.profit.mean).c_str(),
                        io::format_sig6(res.odds_reshuffle.profit.mean).c_str());
        } else if (*synth) {
            std::printf("seed=%llu\n", static_cast<unsigned long long>(cfg.seed));
            auto files = cmd_synth(cfg);
            std::filesystem::path dir(out_path);
            std::error_code ec;
            std::filesystem::create_directories(dir, ec);
            if (ec) throw Error(Errc::Io, "cannot create " + dir.string());
            write_out((dir / "games.csv").string(), files.games_csv);
            write_out((dir / "tweets.tsv").string(), files.tweets_tsv);
            write_out((dir / "tags.csv").string(), files.tags_csv);
            std::printf("games=%zu tweets=%zu\n", files.corpus.games.size(), files.corpus.tweets.size());
        } else if (*signals) {
            const auto games = io::parse_games(io::read_file(games_path), games_path);
            const auto tweets = io::parse_tweets(io::read_file(tweets_path), tweets_path);
            const auto tags = io::parse_tags(io::read_file(tags_path), tags_path);
            std::vector<MatchEvent> events;
            if (!events_path.empty()) events = io::parse_events(io::read_file(events_path), events_path);
            auto g = std::find_if(games.begin(), games.end(), [&](const GameRecord& r) { return r.game_id == game_id; });
            if (g == games.end()) throw Error(Errc::InvalidConfig, "game '" + game_id + "' is not in " + games_path);
            auto t = tags.find(game_id);
            if (t == tags.end()) throw Error(Errc::MissingTags, game_id + ": no tags for this game");
            auto res = cmd_signals(*g, tweets, t->second, events, cfg, resolve_scorer(cfg));
            write_out(out_path, res.csv);
            if (!aux_path.empty()) write_out(aux_path, res.interactions_json);
            else std::fputs(res.interactions_json.c_str(), stdout);
        } else if (*bench) {
            const auto corpus = io::parse_benchmark(io::read_file(benchmark_path), benchmark_path);
            auto json = cmd_bench_sentiment(corpus, cfg, resolve_scorer(cfg));
            if (!out_path.empty()) write_out(out_path, json);
            else std::fputs(json.c_str(), stdout);
        }
    } catch (const Error& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        switch (e.category()) {
            case ErrorCategory::Parse: return kExitParse;
            case ErrorCategory::Validation: return kExitValidation;
            case ErrorCategory::Runtime: return kExitRuntime;
        }
        return kExitRuntime;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kExitRuntime;
    }
    return 0;
}
