#include "support.hpp"
#include "upset/io/formats.hpp"
#include "upset/odds.hpp"

#include <gtest/gtest.h>

using namespace upset;
using namespace testing_support;

TEST(Time, ParsesZuluAndOffsets) {
    auto z = parse_rfc3339("2014-07-08T20:00:00Z");
    auto o = parse_rfc3339("2014-07-08T22:00:00+02:00");
    auto f = parse_rfc3339("2014-07-08T20:00:00.750Z");
    ASSERT_TRUE(z && o && f);
    EXPECT_EQ(*z, *o);
    EXPECT_EQ(*z, *f);
    EXPECT_EQ(format_rfc3339(*z), "2014-07-08T20:00:00Z");
}

TEST(Time, RejectsMalformed) {
    EXPECT_FALSE(parse_rfc3339("2014-07-08 20:00:00"));
    EXPECT_FALSE(parse_rfc3339("2014-13-08T20:00:00Z"));
    EXPECT_FALSE(parse_rfc3339("2014-02-30T20:00:00Z"));
    EXPECT_FALSE(parse_rfc3339(""));
}

TEST(OddsTriple, RejectsOddsAtOrBelowOne) {
    EXPECT_THROW(OddsTriple(1.0, 3.0, 4.0), Error);
    EXPECT_THROW(OddsTriple(2.0, 0.5, 4.0), Error);
    EXPECT_THROW(OddsTriple(2.0, 3.0, std::nan("")), Error);
    try {
        OddsTriple(2.0, 3.0, 1.0);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), Errc::OddsOutOfRange);
        EXPECT_EQ(e.category(), ErrorCategory::Validation);
    }
}

TEST(ValidateGame, FavoriteMustCarryMinimumOdds) {
    try {
        make_game("g", 3.0, 2.0, 5.0);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), Errc::FavoriteNotMinimum);
    }
    EXPECT_NO_THROW(make_game("g", 2.0, 2.0, 5.0));
}

TEST(ValidateGame, RejectsSameTeams) {
    RawGame raw{"g", "t", "BRA", "BRA", at("2014-06-12T20:00:00Z"), 2, 3, 4, std::nullopt};
    try {
        validate_game(raw);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), Errc::SameTeams);
    }
}

TEST(Scores, WorkedExample) {
    OddsTriple o(2, 7, 11);
    EXPECT_NEAR(potential_upset_score(o), 10.0, 1e-12);
    EXPECT_NEAR(upset_score(o, OutcomeKind::Draw), 6.0, 1e-12);
    EXPECT_NEAR(upset_score(o, OutcomeKind::FavoriteWin), 1.0, 1e-12);
    EXPECT_NEAR(upset_score(o, OutcomeKind::UnderdogWin), 10.0, 1e-12);
}

TEST(Scores, UpsetScoreBoundedByPotential) {
    Rng rng(11);
    for (int i = 0; i < 2000; ++i) {
        double f = rng.uniform(1.01, 3.0);
        OddsTriple o(f, f + rng.uniform(0.0, 20.0), f + rng.uniform(0.0, 20.0));
        const double pu = potential_upset_score(o);
        EXPECT_GE(pu, 1.0);
        for (auto out : {OutcomeKind::FavoriteWin, OutcomeKind::Draw, OutcomeKind::UnderdogWin}) {
            const double u = upset_score(o, out);
            EXPECT_GE(u, 1.0);
            EXPECT_LE(u, pu);
        }
    }
}

TEST(Labels, StrictThreshold) {
    SelectionConfig cfg{5.0};
    EXPECT_EQ(label_from_upset_score(5.0, cfg), ClassLabel::Baseline);
    EXPECT_EQ(label_from_upset_score(5.0000001, cfg), ClassLabel::Upset);
    EXPECT_EQ(label_game(score_game(make_game("g", 2, 7, 11, OutcomeKind::Draw), cfg), cfg), ClassLabel::Upset);
    EXPECT_EQ(label_game(score_game(make_game("g", 2, 7, 11, OutcomeKind::FavoriteWin), cfg), cfg),
              ClassLabel::Baseline);
}

TEST(Labels, MissingOutcome) {
    SelectionConfig cfg;
    try {
        label_game(score_game(make_game("g", 2, 7, 11), cfg), cfg);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), Errc::MissingOutcome);
    }
}

TEST(Selection, KeepsOrderAndStrictness) {
    std::vector<GameRecord> games{make_game("a", 2, 7, 11), make_game("b", 2, 4, 6), make_game("c", 1.5, 4, 6),
                                  make_game("d", 1.5, 2, 3)};
    auto sel = select_potential_upsets(games, SelectionConfig{5.0});
    ASSERT_EQ(sel.size(), 2u);  // b has PU exactly 5
    EXPECT_EQ(sel[0].game.game_id, "a");
    EXPECT_EQ(sel[1].game.game_id, "c");
    EXPECT_TRUE(select_potential_upsets({}, SelectionConfig{}).empty());
}

TEST(Selection, InvalidTheta) { EXPECT_THROW(select_potential_upsets({}, SelectionConfig{0.5}), Error); }

TEST(AverageOdds, ComponentwiseMean) {
    std::vector<OddsTriple> v{OddsTriple(2, 6, 10), OddsTriple(2.2, 8, 12)};
    auto m = average_odds(v);
    EXPECT_DOUBLE_EQ(m.fav(), 2.1);
    EXPECT_DOUBLE_EQ(m.draw(), 7.0);
    EXPECT_DOUBLE_EQ(m.und(), 11.0);
    EXPECT_THROW(average_odds({}), Error);
}

// Printed training-set score tables, rebuilt as games files.
namespace {

struct PrintedRow {
    std::string game_id;
    double u, pu;
    std::string cls;
};

std::vector<PrintedRow> printed(const std::string& path) {
    auto recs = io::parse_csv(io::read_file(source_path(path)), path);
    std::vector<PrintedRow> out;
    for (std::size_t i = 1; i < recs.size(); ++i)
        out.push_back({recs[i].fields[0], *io::parse_double(recs[i].fields[2]), *io::parse_double(recs[i].fields[3]),
                       recs[i].fields[4]});
    return out;
}

void check_table(const std::string& games_path, const std::string& table_path, std::size_t upsets,
                 std::size_t baselines) {
    const auto games = io::parse_games(io::read_file(source_path(games_path)), games_path);
    const auto rows = printed(table_path);
    ASSERT_EQ(games.size(), rows.size());
    SelectionConfig cfg{5.0};
    std::size_t nu = 0, nb = 0;
    for (std::size_t i = 0; i < games.size(); ++i) {
        const auto s = score_game(games[i], cfg);
        ASSERT_EQ(s.game.game_id, rows[i].game_id);
        EXPECT_NEAR(s.pu, rows[i].pu, 1e-9) << rows[i].game_id;
        EXPECT_NEAR(*s.u, rows[i].u, 1e-9) << rows[i].game_id;
        EXPECT_LE(*s.u, s.pu + 1e-12);
        EXPECT_LE(rows[i].u, rows[i].pu);
        const auto label = label_game(s, cfg);
        EXPECT_EQ(to_string(label), rows[i].cls) << rows[i].game_id;
        (label == ClassLabel::Upset ? nu : nb) += 1;
    }
    EXPECT_EQ(nu, upsets);
    EXPECT_EQ(nb, baselines);
    EXPECT_EQ(select_potential_upsets(games, cfg).size(), games.size());
}

}  // namespace

TEST(PrintedTables, FifaWorldCup) { check_table("tests/data/fifa2014_games.csv", "tests/data/fifa2014_table.csv", 10, 15); }

TEST(PrintedTables, LiveMonitoring) {
    check_table("tests/data/live2014_games.csv", "tests/data/live2014_table.csv", 9, 22);
}
