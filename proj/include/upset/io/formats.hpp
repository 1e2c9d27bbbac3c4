#pragma once

// Line-oriented file formats read and written by the command line tool.

#include "upset/domain.hpp"
#include "upset/features.hpp"
#include "upset/ingest.hpp"
#include "upset/io/csv.hpp"
#include "upset/io/numbers.hpp"
#include "upset/learn.hpp"
#include "upset/odds.hpp"
#include "upset/sentiment.hpp"
#include "upset/signals.hpp"

#include <map>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace upset::io {

namespace detail {

inline void expect_header(const std::vector<CsvRecord>& recs, const std::vector<std::string>& header,
                          std::string_view source) {
    if (recs.empty()) return;
    if (recs.front().fields != header)
        throw ParseError(source, recs.front().line, "expected header '" + join(header, ',') + "'");
}

inline void expect_width(const CsvRecord& rec, std::size_t width, std::string_view source) {
    if (rec.fields.size() != width)
        throw ParseError(source, rec.line,
                         "expected " + std::to_string(width) + " fields, got " + std::to_string(rec.fields.size()));
}

inline double field_double(const CsvRecord& rec, std::size_t i, std::string_view name, std::string_view source) {
    auto v = parse_double(rec.fields[i]);
    if (!v) throw ParseError(source, rec.line, "malformed " + std::string(name) + " '" + rec.fields[i] + "'");
    return *v;
}

/// Re-throws a validation error with the offending line attached.
template <class F>
auto at_line(std::string_view source, std::size_t line, F&& f) {
    try {
        return f();
    } catch (const ParseError&) {
        throw;
    } catch (const Error& e) {
        throw Error(e.code(), std::string(source) + ":" + std::to_string(line) + ": " + e.message());
    }
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Games: game_id,tournament,favorite,underdog,kickoff_utc,odds_fav,odds_draw,odds_und,outcome
// ---------------------------------------------------------------------------
inline const std::vector<std::string> kGamesHeader{"game_id",  "tournament", "favorite",  "underdog", "kickoff_utc",
                                                   "odds_fav", "odds_draw",  "odds_und", "outcome"};

inline std::vector<GameRecord> parse_games(std::string_view text, std::string_view source = "games") {
    auto recs = parse_csv(text, source);
    detail::expect_header(recs, kGamesHeader, source);
    std::vector<GameRecord> games;
    for (std::size_t r = 1; r < recs.size(); ++r) {
        const auto& rec = recs[r];
        detail::expect_width(rec, kGamesHeader.size(), source);
        RawGame raw;
        raw.game_id = rec.fields[0];
        raw.tournament = rec.fields[1];
        raw.favorite = rec.fields[2];
        raw.underdog = rec.fields[3];
        auto t = parse_rfc3339(rec.fields[4]);
        if (!t) throw ParseError(source, rec.line, "malformed kickoff '" + rec.fields[4] + "'");
        raw.kickoff = *t;
        raw.odds_fav = detail::field_double(rec, 5, "odds_fav", source);
        raw.odds_draw = detail::field_double(rec, 6, "odds_draw", source);
        raw.odds_und = detail::field_double(rec, 7, "odds_und", source);
        const std::string& oc = rec.fields[8];
        if (!oc.empty() && oc != "\xE2\x88\x85") {
            auto o = parse_outcome_code(oc);
            if (!o) throw ParseError(source, rec.line, "outcome must be F, D, U or empty, got '" + oc + "'");
            raw.outcome = *o;
        }
        games.push_back(detail::at_line(source, rec.line, [&] { return validate_game(raw); }));
    }
    return games;
}

inline std::string format_games(std::span<const GameRecord> games) {
    std::string out;
    append_csv_row(out, kGamesHeader);
    for (const auto& g : games) {
        append_csv_row(out, {g.game_id, g.tournament, g.favorite, g.underdog, format_rfc3339(g.kickoff),
                             format_odds(g.odds.fav()), format_odds(g.odds.draw()), format_odds(g.odds.und()),
                             g.outcome ? std::string(1, outcome_code(*g.outcome)) : std::string()});
    }
    return out;
}

// ---------------------------------------------------------------------------
// Tweets: tab-separated, one record per line, header first.
// Fields: tweet_id, timestamp_utc, user_id, text, hashtags (;-joined),
//         retweeted_user (may be empty), mentions (;-joined), sentiment (may be empty)
// Escapes inside a field: \\ backslash, \t tab, \n newline, \r carriage return.
// ---------------------------------------------------------------------------
inline const std::vector<std::string> kTweetsHeader{"tweet_id", "timestamp_utc",  "user_id",  "text",
                                                    "hashtags", "retweeted_user", "mentions", "sentiment"};

inline std::string tsv_escape(std::string_view s) {
    std::string out;
    out.reserve(s.size());
    for (char c : s) {
        switch (c) {
            case '\\': out += "\\\\"; break;
            case '\t': out += "\\t"; break;
            case '\n': out += "\\n"; break;
            case '\r': out += "\\r"; break;
            default: out.push_back(c);
        }
    }
    return out;
}

inline std::string tsv_unescape(std::string_view s, std::string_view source, std::size_t line) {
    std::string out;
    out.reserve(s.size());
    for (std::size_t i = 0; i < s.size(); ++i) {
        if (s[i] != '\\') {
            out.push_back(s[i]);
            continue;
        }
        if (++i >= s.size()) throw ParseError(source, line, "dangling backslash");
        switch (s[i]) {
            case '\\': out.push_back('\\'); break;
            case 't': out.push_back('\t'); break;
            case 'n': out.push_back('\n'); break;
            case 'r': out.push_back('\r'); break;
            default: throw ParseError(source, line, std::string("unknown escape \\") + s[i]);
        }
    }
    return out;
}

inline std::vector<TweetRecord> parse_tweets(std::string_view text, std::string_view source = "tweets") {
    std::vector<TweetRecord> tweets;
    std::size_t line = 0, pos = 0;
    bool header_seen = false;
    while (pos < text.size()) {
        auto eol = text.find('\n', pos);
        std::string_view raw = text.substr(pos, eol == std::string_view::npos ? std::string_view::npos : eol - pos);
        pos = eol == std::string_view::npos ? text.size() : eol + 1;
        ++line;
        if (!raw.empty() && raw.back() == '\r') raw.remove_suffix(1);
        if (raw.empty()) continue;
        auto cols = split(raw, '\t');
        if (!header_seen) {
            if (cols != kTweetsHeader)
                throw ParseError(source, line, "expected header '" + join(kTweetsHeader, ' ') + "'");
            header_seen = true;
            continue;
        }
        if (cols.size() != kTweetsHeader.size())
            throw ParseError(source, line, "expected 8 tab-separated fields, got " + std::to_string(cols.size()));
        for (auto& c : cols) c = tsv_unescape(c, source, line);
        TweetRecord t;
        t.tweet_id = cols[0];
        auto ts = parse_rfc3339(cols[1]);
        if (!ts) throw ParseError(source, line, "malformed timestamp '" + cols[1] + "'");
        t.timestamp = *ts;
        t.user_id = cols[2];
        t.text = cols[3];
        t.hashtags = split(cols[4], ';');
        if (!cols[5].empty()) t.retweeted_user = cols[5];
        t.mentioned_users = split(cols[6], ';');
        if (!cols[7].empty()) {
            auto s = parse_double(cols[7]);
            if (!s) throw ParseError(source, line, "malformed sentiment '" + cols[7] + "'");
            t.precomputed_sentiment = *s;
        }
        tweets.push_back(detail::at_line(source, line, [&] { return validate_tweet(std::move(t)); }));
    }
    return tweets;
}

inline std::string format_tweets(std::span<const TweetRecord> tweets) {
    std::string out = join(kTweetsHeader, '\t') + "\n";
    for (const auto& t : tweets) {
        std::vector<std::string> cols{tsv_escape(t.tweet_id),
                                      format_rfc3339(t.timestamp),
                                      tsv_escape(t.user_id),
                                      tsv_escape(t.text),
                                      tsv_escape(join(t.hashtags, ';')),
                                      t.retweeted_user ? tsv_escape(*t.retweeted_user) : std::string(),
                                      tsv_escape(join(t.mentioned_users, ';')),
                                      t.precomputed_sentiment ? format_sig6(*t.precomputed_sentiment) : std::string()};
        out += join(cols, '\t');
        out.push_back('\n');
    }
    return out;
}

// ---------------------------------------------------------------------------
// Tags: game_id,favorite_tags,underdog_tags,match_tags (tags ;-joined)
// ---------------------------------------------------------------------------
inline const std::vector<std::string> kTagsHeader{"game_id", "favorite_tags", "underdog_tags", "match_tags"};

using TagsByGame = std::map<std::string, TeamTags>;

inline TagsByGame parse_tags(std::string_view text, std::string_view source = "tags") {
    auto recs = parse_csv(text, source);
    detail::expect_header(recs, kTagsHeader, source);
    TagsByGame out;
    for (std::size_t r = 1; r < recs.size(); ++r) {
        const auto& rec = recs[r];
        detail::expect_width(rec, kTagsHeader.size(), source);
        TeamTags tags;
        for (const auto& t : split(rec.fields[1], ';')) tags.favorite.insert(normalize_hashtag(t));
        for (const auto& t : split(rec.fields[2], ';')) tags.underdog.insert(normalize_hashtag(t));
        for (const auto& t : split(rec.fields[3], ';')) tags.match.insert(normalize_hashtag(t));
        detail::at_line(source, rec.line, [&] {
            tags.validate(rec.fields[0]);
            return 0;
        });
        if (!out.emplace(rec.fields[0], std::move(tags)).second)
            throw ParseError(source, rec.line, "duplicate game_id '" + rec.fields[0] + "'");
    }
    return out;
}

inline std::string format_tags(const TagsByGame& tags) {
    auto sorted = [](const std::unordered_set<std::string>& s) {
        std::vector<std::string> v(s.begin(), s.end());
        std::sort(v.begin(), v.end());
        return join(v, ';');
    };
    std::string out;
    append_csv_row(out, kTagsHeader);
    for (const auto& [id, t] : tags) append_csv_row(out, {id, sorted(t.favorite), sorted(t.underdog), sorted(t.match)});
    return out;
}

// ---------------------------------------------------------------------------
// Scored games: game_id,favorite,underdog,pu,u,label
// ---------------------------------------------------------------------------
inline std::string format_scored(std::span<const ScoredGame> scored) {
    std::string out;
    append_csv_row(out, {"game_id", "favorite", "underdog", "pu", "u", "label"});
    for (const auto& s : scored) {
        append_csv_row(out, {s.game.game_id, s.game.favorite, s.game.underdog, format_sig6(s.pu),
                             s.u ? format_sig6(*s.u) : std::string(),
                             s.label ? std::string(to_string(*s.label)) : std::string()});
    }
    return out;
}

// ---------------------------------------------------------------------------
// Features: game_id,label,p1..p12,nfav1..nfav12,nund1..nund12
// ---------------------------------------------------------------------------
inline std::vector<std::string> features_header() {
    std::vector<std::string> h{"game_id", "label"};
    for (const char* prefix : {"p", "nfav", "nund"})
        for (std::size_t i = 1; i <= kWindowCount; ++i) h.push_back(prefix + std::to_string(i));
    return h;
}

inline std::string format_features(std::span<const FeatureVector> features) {
    std::string out;
    append_csv_row(out, features_header());
    for (const auto& fv : features) {
        std::vector<std::string> row{fv.game_id, fv.label ? std::string(to_string(*fv.label)) : std::string()};
        for (double p : fv.p) row.push_back(format_sig6(p));
        for (auto c : fv.counts_fav) row.push_back(std::to_string(c));
        for (auto c : fv.counts_und) row.push_back(std::to_string(c));
        append_csv_row(out, row);
    }
    return out;
}

inline std::vector<FeatureVector> parse_features(std::string_view text, std::string_view source = "features") {
    auto recs = parse_csv(text, source);
    const auto header = features_header();
    detail::expect_header(recs, header, source);
    std::vector<FeatureVector> out;
    for (std::size_t r = 1; r < recs.size(); ++r) {
        const auto& rec = recs[r];
        detail::expect_width(rec, header.size(), source);
        FeatureVector fv;
        fv.game_id = rec.fields[0];
        if (!rec.fields[1].empty()) {
            auto l = parse_label(rec.fields[1]);
            if (!l) throw ParseError(source, rec.line, "label must be upset, baseline or empty");
            fv.label = *l;
        }
        for (std::size_t i = 0; i < kWindowCount; ++i) {
            fv.p[i] = detail::field_double(rec, 2 + i, "p-value", source);
            if (!(fv.p[i] > 0.0 && fv.p[i] <= 1.0)) throw ParseError(source, rec.line, "p-value outside (0,1]");
            auto nf = parse_int<std::size_t>(rec.fields[2 + kWindowCount + i]);
            auto nu = parse_int<std::size_t>(rec.fields[2 + 2 * kWindowCount + i]);
            if (!nf || !nu) throw ParseError(source, rec.line, "malformed window count");
            fv.counts_fav[i] = *nf;
            fv.counts_und[i] = *nu;
        }
        out.push_back(std::move(fv));
    }
    return out;
}

// ---------------------------------------------------------------------------
// Predictions: game_id,posterior_upset,predicted,fold,seed
// ---------------------------------------------------------------------------
inline std::string format_predictions(std::span<const std::string> game_ids, const CvReport& rep) {
    std::string out;
    append_csv_row(out, {"game_id", "posterior_upset", "predicted", "fold", "seed"});
    for (std::size_t i = 0; i < game_ids.size(); ++i) {
        append_csv_row(out, {game_ids[i], format_prob(rep.posterior_upset[i]), std::string(to_string(rep.predictions[i])),
                             std::to_string(rep.fold[i]), std::to_string(rep.seed)});
    }
    return out;
}

// ---------------------------------------------------------------------------
// Events: minute,kind,team
// ---------------------------------------------------------------------------
inline std::vector<MatchEvent> parse_events(std::string_view text, std::string_view source = "events") {
    auto recs = parse_csv(text, source);
    detail::expect_header(recs, {"minute", "kind", "team"}, source);
    std::vector<MatchEvent> out;
    for (std::size_t r = 1; r < recs.size(); ++r) {
        const auto& rec = recs[r];
        detail::expect_width(rec, 3, source);
        auto minute = parse_int<int>(trim(rec.fields[0]));
        if (!minute) throw ParseError(source, rec.line, "malformed minute '" + rec.fields[0] + "'");
        auto kind = parse_event_kind(rec.fields[1]);
        if (!kind) throw ParseError(source, rec.line, "unknown event kind '" + rec.fields[1] + "'");
        out.push_back({*minute, *kind, rec.fields[2]});
    }
    return out;
}

// ---------------------------------------------------------------------------
// Signals: minute,fav_count,und_count,match_count,volume,fav_mean,und_mean,events
// ---------------------------------------------------------------------------
inline std::string format_signals(std::span<const MinuteBucket> series) {
    std::string out;
    append_csv_row(out, {"minute", "fav_count", "und_count", "match_count", "volume", "fav_mean", "und_mean", "events"});
    for (const auto& b : series) {
        std::vector<std::string> ev;
        for (const auto& e : b.events) ev.push_back(std::string(to_string(e.kind)) + ":" + e.team);
        append_csv_row(out, {std::to_string(b.minute), std::to_string(b.fav_count), std::to_string(b.und_count),
                             std::to_string(b.match_count), std::to_string(b.volume()),
                             b.fav_mean ? format_sig6(*b.fav_mean) : std::string(),
                             b.und_mean ? format_sig6(*b.und_mean) : std::string(), join(ev, ';')});
    }
    return out;
}

// ---------------------------------------------------------------------------
// Lexicon: token<TAB>valence.  Benchmark: label<TAB>text.
// Lines starting with '#' are comments.
// ---------------------------------------------------------------------------
template <class OnLine>
void for_each_tsv_line(std::string_view text, OnLine&& on_line) {
    std::size_t line = 0, pos = 0;
    while (pos < text.size()) {
        auto eol = text.find('\n', pos);
        std::string_view raw = text.substr(pos, eol == std::string_view::npos ? std::string_view::npos : eol - pos);
        pos = eol == std::string_view::npos ? text.size() : eol + 1;
        ++line;
        if (!raw.empty() && raw.back() == '\r') raw.remove_suffix(1);
        if (raw.empty() || raw.front() == '#') continue;
        on_line(line, raw);
    }
}

inline Lexicon parse_lexicon(std::string_view text, std::string_view source = "lexicon") {
    Lexicon lex;
    for_each_tsv_line(text, [&](std::size_t line, std::string_view raw) {
        auto tab = raw.find('\t');
        if (tab == std::string_view::npos) throw ParseError(source, line, "expected token<TAB>valence");
        auto v = parse_double(raw.substr(tab + 1));
        if (!v) throw ParseError(source, line, "malformed valence");
        detail::at_line(source, line, [&] {
            lex.add(std::string(raw.substr(0, tab)), *v);
            return 0;
        });
    });
    return lex;
}

inline std::vector<LabeledText> parse_benchmark(std::string_view text, std::string_view source = "benchmark") {
    std::vector<LabeledText> out;
    for_each_tsv_line(text, [&](std::size_t line, std::string_view raw) {
        auto tab = raw.find('\t');
        if (tab == std::string_view::npos) throw ParseError(source, line, "expected label<TAB>text");
        auto p = parse_polarity(raw.substr(0, tab));
        if (!p) throw ParseError(source, line, "label must be negative, neutral or positive");
        out.push_back({*p, std::string(raw.substr(tab + 1))});
    });
    return out;
}

}  // namespace upset::io
