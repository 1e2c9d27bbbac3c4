#pragma once

#include "upset/domain.hpp"

#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <variant>
#include <vector>

namespace upset {

class SentimentScore {
public:
    explicit SentimentScore(double v) : value_(v) {
        if (!(v >= 0.0 && v <= 1.0))
            throw Error(Errc::InvalidScore, "sentiment score " + std::to_string(v) + " outside [0,1]");
    }
    double value() const { return value_; }
    friend bool operator==(const SentimentScore&, const SentimentScore&) = default;

private:
    double value_;
};

enum class Polarity { Negative, Neutral, Positive };

inline std::string_view to_string(Polarity p) {
    switch (p) {
        case Polarity::Negative: return "negative";
        case Polarity::Neutral: return "neutral";
        case Polarity::Positive: return "positive";
    }
    return "?";
}

inline std::optional<Polarity> parse_polarity(std::string_view s) {
    if (s == "negative") return Polarity::Negative;
    if (s == "neutral") return Polarity::Neutral;
    if (s == "positive") return Polarity::Positive;
    return std::nullopt;
}

struct NeutralBand {
    double low = 0.3;
    double high = 0.7;

    void validate() const {
        if (!(low >= 0.0 && low < high && high <= 1.0))
            throw Error(Errc::InvalidConfig, "neutral band requires 0 <= low < high <= 1");
    }
};

/// Closed neutral band: low and high themselves are Neutral.
inline Polarity classify_polarity(SentimentScore score, const NeutralBand& band) {
    if (score.value() < band.low) return Polarity::Negative;
    if (score.value() > band.high) return Polarity::Positive;
    return Polarity::Neutral;
}

// ---------------------------------------------------------------------------
// Scorers
// ---------------------------------------------------------------------------

/// Token -> valence in [-1, 1].
class Lexicon {
public:
    Lexicon() = default;

    void add(std::string token, double valence) {
        if (!(valence >= -1.0 && valence <= 1.0))
            throw Error(Errc::InvalidConfig, "lexicon valence for '" + token + "' outside [-1,1]");
        entries_[lowercase(token)] = valence;
    }

    std::optional<double> find(std::string_view token) const {
        auto it = entries_.find(std::string(token));
        if (it == entries_.end()) return std::nullopt;
        return it->second;
    }

    std::size_t size() const { return entries_.size(); }

    static std::string lowercase(std::string_view s) {
        std::string out(s);
        for (auto& c : out)
            if (c >= 'A' && c <= 'Z') c = static_cast<char>(c - 'A' + 'a');
        return out;
    }

private:
    std::unordered_map<std::string, double> entries_;
};

struct LexiconScorer {
    Lexicon lexicon;
};

/// Uses the score already attached to each tweet.
struct PassthroughScorer {};

using ScorerSpec = std::variant<LexiconScorer, PassthroughScorer>;

/// Splits on ASCII non-alphanumerics; bytes >= 0x80 are kept as word characters
/// so UTF-8 tokens stay whole. Tokens are lowercased.
inline std::vector<std::string> tokenize(std::string_view text) {
    std::vector<std::string> tokens;
    std::string cur;
    for (char ch : text) {
        auto c = static_cast<unsigned char>(ch);
        bool word = (c >= '0' && c <= '9') || (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || c >= 0x80;
        if (word) {
            cur.push_back((c >= 'A' && c <= 'Z') ? static_cast<char>(c - 'A' + 'a') : ch);
        } else if (!cur.empty()) {
            tokens.push_back(std::move(cur));
            cur.clear();
        }
    }
    if (!cur.empty()) tokens.push_back(std::move(cur));
    return tokens;
}

/// Mean valence of matched tokens mapped from [-1,1] to [0,1]; 0.5 when nothing matches.
inline SentimentScore score_lexicon(std::string_view text, const Lexicon& lexicon) {
    double sum = 0.0;
    std::size_t hits = 0;
    for (const auto& tok : tokenize(text)) {
        if (auto v = lexicon.find(tok)) {
            sum += *v;
            ++hits;
        }
    }
    double mean = hits == 0 ? 0.0 : sum / static_cast<double>(hits);
    return SentimentScore((mean + 1.0) / 2.0);
}

inline SentimentScore score_text(std::string_view text, const ScorerSpec& spec,
                                 std::optional<double> precomputed = std::nullopt) {
    if (const auto* lex = std::get_if<LexiconScorer>(&spec)) return score_lexicon(text, lex->lexicon);
    if (!precomputed) throw Error(Errc::MissingPrecomputedScore, "passthrough scorer needs a stored score");
    return SentimentScore(*precomputed);
}

inline SentimentScore score_tweet(const TweetRecord& tweet, const ScorerSpec& spec) {
    if (std::holds_alternative<PassthroughScorer>(spec) && !tweet.precomputed_sentiment)
        throw Error(Errc::MissingPrecomputedScore, "tweet " + tweet.tweet_id + " has no stored sentiment");
    return score_text(tweet.text, spec, tweet.precomputed_sentiment);
}

struct LabeledText {
    Polarity gold;
    std::string text;
};

/// Fraction of texts whose predicted polarity matches the gold label.
inline double benchmark_scorer(std::span<const LabeledText> corpus, const ScorerSpec& spec,
                               const NeutralBand& band) {
    if (corpus.empty()) throw Error(Errc::EmptyCorpus, "benchmark corpus is empty");
    band.validate();
    std::size_t correct = 0;
    for (const auto& item : corpus) {
        if (classify_polarity(score_text(item.text, spec), band) == item.gold) ++correct;
    }
    return static_cast<double>(correct) / static_cast<double>(corpus.size());
}

}  // namespace upset
