#include "support.hpp"
#include "upset/io/formats.hpp"
#include "upset/sentiment.hpp"

#include <gtest/gtest.h>

using namespace upset;
using namespace testing_support;

namespace {

Lexicon tiny() {
    Lexicon lex;
    lex.add("great", 0.8);
    lex.add("awful", -1.0);
    lex.add("good", 0.4);
    return lex;
}

}  // namespace

TEST(SentimentScore, RangeChecked) {
    EXPECT_NO_THROW(SentimentScore(0.0));
    EXPECT_NO_THROW(SentimentScore(1.0));
    EXPECT_THROW(SentimentScore(1.0001), Error);
    EXPECT_THROW(SentimentScore(-0.1), Error);
}

TEST(Polarity, ClosedNeutralBand) {
    NeutralBand band;
    EXPECT_EQ(classify_polarity(SentimentScore(0.3), band), Polarity::Neutral);
    EXPECT_EQ(classify_polarity(SentimentScore(0.7), band), Polarity::Neutral);
    EXPECT_EQ(classify_polarity(SentimentScore(0.29), band), Polarity::Negative);
    EXPECT_EQ(classify_polarity(SentimentScore(0.71), band), Polarity::Positive);
    EXPECT_THROW((NeutralBand{0.7, 0.3}.validate()), Error);
}

TEST(Tokenize, LowercasesAndSplits) {
    EXPECT_EQ(tokenize("GREAT goal!!  #BRA"), (std::vector<std::string>{"great", "goal", "bra"}));
    EXPECT_EQ(tokenize("ol\xC3\xA9 ole"), (std::vector<std::string>{"ol\xC3\xA9", "ole"}));
    EXPECT_TRUE(tokenize("  ,;  ").empty());
}

TEST(Lexicon, MeanValenceMapped) {
    auto lex = tiny();
    EXPECT_DOUBLE_EQ(score_lexicon("great", lex).value(), 0.9);
    EXPECT_DOUBLE_EQ(score_lexicon("Great and awful", lex).value(), (((0.8 - 1.0) / 2) + 1) / 2);
    EXPECT_DOUBLE_EQ(score_lexicon("nothing here", lex).value(), 0.5);
    EXPECT_DOUBLE_EQ(score_lexicon("", lex).value(), 0.5);
}

TEST(Lexicon, RejectsOutOfRangeValence) {
    Lexicon lex;
    EXPECT_THROW(lex.add("x", 1.5), Error);
}

TEST(Scorers, PassthroughNeedsStoredScore) {
    ScorerSpec pass = PassthroughScorer{};
    auto t = make_tweet("1", at("2014-06-12T19:00:00Z"), "u", {"bra"}, 0.25);
    EXPECT_DOUBLE_EQ(score_tweet(t, pass).value(), 0.25);
    t.precomputed_sentiment.reset();
    try {
        score_tweet(t, pass);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), Errc::MissingPrecomputedScore);
    }
}

TEST(Scorers, LexiconIgnoresStoredScore) {
    ScorerSpec lex = LexiconScorer{tiny()};
    auto t = make_tweet("1", at("2014-06-12T19:00:00Z"), "u", {"bra"}, 0.0, "great");
    EXPECT_DOUBLE_EQ(score_tweet(t, lex).value(), 0.9);
}

TEST(Benchmark, AccuracyOnTinyCorpus) {
    std::vector<LabeledText> corpus{{Polarity::Positive, "great great"},
                                    {Polarity::Negative, "awful"},
                                    {Polarity::Neutral, "the match"},
                                    {Polarity::Positive, "good"}};  // 0.7 sits in the band
    ScorerSpec lex = LexiconScorer{tiny()};
    EXPECT_DOUBLE_EQ(benchmark_scorer(corpus, lex, NeutralBand{}), 0.75);
    EXPECT_THROW(benchmark_scorer({}, lex, NeutralBand{}), Error);
}

TEST(Benchmark, BundledLexiconRunsOnBundledCorpus) {
    auto lex = io::parse_lexicon(io::read_file(source_path("data/lexicon.tsv")));
    auto corpus = io::parse_benchmark(io::read_file(source_path("data/sentiment_benchmark.tsv")));
    ASSERT_EQ(corpus.size(), 60u);
    const double acc = benchmark_scorer(corpus, LexiconScorer{lex}, NeutralBand{});
    EXPECT_GT(acc, 1.0 / 3.0);
    EXPECT_LE(acc, 1.0);
}
