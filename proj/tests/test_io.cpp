#include "support.hpp"
#include "upset/io/formats.hpp"
#include "upset/synth.hpp"

#include <gtest/gtest.h>

#include <filesystem>

using namespace upset;
using namespace testing_support;

TEST(Csv, QuotedFieldsAndLines) {
    auto recs = io::parse_csv("a,b\n\"x,1\",\"he said \"\"hi\"\"\"\n\n\"multi\nline\",z\r\nlast,", "t");
    ASSERT_EQ(recs.size(), 4u);
    EXPECT_EQ(recs[1].fields, (std::vector<std::string>{"x,1", "he said \"hi\""}));
    EXPECT_EQ(recs[2].line, 4u);
    EXPECT_EQ(recs[2].fields[0], "multi\nline");
    EXPECT_EQ(recs[3].line, 6u);
    EXPECT_EQ(recs[3].fields, (std::vector<std::string>{"last", ""}));
}

TEST(Csv, Errors) {
    EXPECT_THROW(io::parse_csv("a,\"open\n", "t"), ParseError);
    try {
        io::parse_csv("a\nb\"c\n", "t");
        FAIL();
    } catch (const ParseError& e) {
        EXPECT_EQ(e.line(), 2u);
    }
}

TEST(Csv, EscapeRoundTrip) {
    std::vector<std::string> row{"plain", "with,comma", "quote\"d", "new\nline", ""};
    std::string out;
    io::append_csv_row(out, row);
    auto recs = io::parse_csv(out, "t");
    ASSERT_EQ(recs.size(), 1u);
    EXPECT_EQ(recs[0].fields, row);
}

TEST(GamesFile, RoundTrip) {
    std::vector<GameRecord> games{make_game("a", 1.2345, 7.5, 11.25, OutcomeKind::Draw),
                                  make_game("b", 2, 3, 4), make_game("c", 1.1, 9, 9, OutcomeKind::UnderdogWin)};
    auto text = io::format_games(games);
    auto back = io::parse_games(text);
    ASSERT_EQ(back.size(), games.size());
    for (std::size_t i = 0; i < games.size(); ++i) {
        EXPECT_EQ(back[i].game_id, games[i].game_id);
        EXPECT_EQ(back[i].odds, games[i].odds);
        EXPECT_EQ(back[i].outcome, games[i].outcome);
        EXPECT_EQ(back[i].kickoff, games[i].kickoff);
    }
    EXPECT_EQ(io::format_games(back), text);
}

TEST(GamesFile, EmptyAndHeaderOnly) {
    EXPECT_TRUE(io::parse_games("").empty());
    EXPECT_TRUE(io::parse_games(io::format_games({})).empty());
}

TEST(GamesFile, ErrorsCarryLine) {
    const std::string header = io::format_games({});
    try {
        io::parse_games(header + "a,t,X,Y,2014-06-12T20:00:00Z,1.5,abc,6,F\n");
        FAIL();
    } catch (const ParseError& e) {
        EXPECT_EQ(e.line(), 2u);
        EXPECT_EQ(e.category(), ErrorCategory::Parse);
    }
    try {
        io::parse_games(header + "a,t,X,Y,2014-06-12T20:00:00Z,1.5,4,6,F\nb,t,X,Y,2014-06-12T20:00:00Z,0.5,4,6,F\n");
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), Errc::OddsOutOfRange);
        EXPECT_NE(std::string(e.what()).find(":3:"), std::string::npos);
    }
    EXPECT_THROW(io::parse_games(header + "a,t,X,Y,2014-06-12T20:00:00Z,1.5,4,6,W\n"), ParseError);
    EXPECT_THROW(io::parse_games(header + "a,t,X,Y,yesterday,1.5,4,6,F\n"), ParseError);
    EXPECT_THROW(io::parse_games(header + "a,t,X\n"), ParseError);
    EXPECT_THROW(io::parse_games("id,odds\n"), ParseError);
}

TEST(TweetsFile, RoundTripWithEscapes) {
    std::vector<TweetRecord> tw{
        make_tweet("1", at("2014-06-12T18:00:05Z"), "user\tone", {"bra", "wc2014"}, 0.123457, "tab\there\nnewline \\ slash"),
        make_tweet("2", at("2014-06-12T18:01:00Z"), "u2", {}, std::nullopt, "")};
    tw[0].retweeted_user = "u2";
    tw[0].mentioned_users = {"a", "b"};
    auto text = io::format_tweets(tw);
    auto back = io::parse_tweets(text);
    ASSERT_EQ(back.size(), 2u);
    EXPECT_EQ(back[0].text, tw[0].text);
    EXPECT_EQ(back[0].user_id, tw[0].user_id);
    EXPECT_EQ(back[0].hashtags, tw[0].hashtags);
    EXPECT_EQ(back[0].retweeted_user, tw[0].retweeted_user);
    EXPECT_EQ(back[0].mentioned_users, tw[0].mentioned_users);
    EXPECT_EQ(back[0].precomputed_sentiment, tw[0].precomputed_sentiment);
    EXPECT_FALSE(back[1].retweeted_user);
    EXPECT_FALSE(back[1].precomputed_sentiment);
    EXPECT_TRUE(back[1].hashtags.empty());
    EXPECT_EQ(io::format_tweets(back), text);
}

TEST(TweetsFile, Errors) {
    const std::string header = io::format_tweets({});
    EXPECT_THROW(io::parse_tweets(header + "1\t2014-06-12T18:00:00Z\tu\n"), ParseError);
    EXPECT_THROW(io::parse_tweets(header + "1\tnope\tu\t\t\t\t\t\n"), ParseError);
    EXPECT_THROW(io::parse_tweets(header + "1\t2014-06-12T18:00:00Z\tu\tbad \\q\t\t\t\t\n"), ParseError);
    try {
        io::parse_tweets(header + "1\t2014-06-12T18:00:00Z\tu\t\t\t\t\t1.5\n");
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), Errc::InvalidScore);
    }
}

TEST(SynthCorpus, FileRoundTripIsLossless) {
    SynthConfig cfg;
    cfg.n_games = 5;
    cfg.tweets_per_side_per_window = 10;
    cfg.seed = 77;
    auto c = generate(cfg);
    auto games = io::parse_games(io::format_games(c.games));
    auto tweets = io::parse_tweets(io::format_tweets(c.tweets));
    ASSERT_EQ(games.size(), c.games.size());
    for (std::size_t i = 0; i < games.size(); ++i) EXPECT_EQ(games[i].odds, c.games[i].odds);
    ASSERT_EQ(tweets.size(), c.tweets.size());
    for (std::size_t i = 0; i < tweets.size(); ++i) {
        EXPECT_EQ(tweets[i].precomputed_sentiment, c.tweets[i].precomputed_sentiment);
        EXPECT_EQ(tweets[i].timestamp, c.tweets[i].timestamp);
    }
}

TEST(TagsFile, RoundTripAndErrors) {
    io::TagsByGame tags{{"g1", make_tags("bra", "ger", "bravsger")}, {"g2", make_tags("ita", "crc")}};
    auto back = io::parse_tags(io::format_tags(tags));
    ASSERT_EQ(back.size(), 2u);
    EXPECT_EQ(back.at("g1").match, tags.at("g1").match);
    EXPECT_TRUE(back.at("g2").match.empty());
    const std::string header = "game_id,favorite_tags,underdog_tags,match_tags\n";
    EXPECT_THROW(io::parse_tags(header + "g1,,ger,\n"), Error);
    EXPECT_THROW(io::parse_tags(header + "g1,a,b,\ng1,c,d,\n"), ParseError);
    EXPECT_EQ(io::parse_tags(header + "g1,#BRA;bra2,ger,\n").at("g1").favorite.count("bra"), 1u);
}

TEST(FeaturesFile, RoundTrip) {
    FeatureVector fv;
    fv.game_id = "g1";
    fv.label = ClassLabel::Upset;
    for (std::size_t i = 0; i < kWindowCount; ++i) {
        fv.p[i] = io::quantize_sig6(1.0 / (3.0 + static_cast<double>(i)));
        fv.counts_fav[i] = i;
        fv.counts_und[i] = 2 * i;
    }
    FeatureVector unlabeled = fv;
    unlabeled.game_id = "g2";
    unlabeled.label.reset();
    std::vector<FeatureVector> v{fv, unlabeled};
    auto back = io::parse_features(io::format_features(v));
    ASSERT_EQ(back.size(), 2u);
    EXPECT_EQ(back[0], fv);
    EXPECT_EQ(back[1], unlabeled);
}

TEST(EventsFile, Parse) {
    auto ev = io::parse_events("minute,kind,team\n30,goal_scored,bra\n45,red_card,ger\n");
    ASSERT_EQ(ev.size(), 2u);
    EXPECT_EQ(ev[1].kind, EventKind::RedCard);
    EXPECT_THROW(io::parse_events("minute,kind,team\n30,corner,bra\n"), ParseError);
    EXPECT_THROW(io::parse_events("minute,kind,team\nxx,goal_scored,bra\n"), ParseError);
}

TEST(Lexicon, ParseAndComments) {
    auto lex = io::parse_lexicon("# comment\nGood\t0.5\nbad\t-0.5\n");
    EXPECT_EQ(lex.size(), 2u);
    EXPECT_EQ(lex.find("good"), 0.5);
    EXPECT_THROW(io::parse_lexicon("good 0.5\n"), ParseError);
    EXPECT_THROW(io::parse_lexicon("good\t3\n"), Error);
}

TEST(Files, AtomicWriteReplaces) {
    auto dir = std::filesystem::temp_directory_path() / "upset_io_test";
    std::filesystem::create_directories(dir);
    auto p = dir / "out.txt";
    io::write_file_atomic(p, "first");
    io::write_file_atomic(p, "second");
    EXPECT_EQ(io::read_file(p), "second");
    for (const auto& e : std::filesystem::directory_iterator(dir))
        EXPECT_EQ(e.path().filename(), "out.txt");
    std::filesystem::remove_all(dir);
    EXPECT_THROW(io::read_file(dir / "missing"), Error);
}
