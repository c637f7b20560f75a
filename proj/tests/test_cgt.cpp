// SPDX-License-Identifier: Apache-2.0
#include <gtest/gtest.h>

#include <random>

#include "rgame/cgt.hpp"

using namespace rgame;
using namespace rgame::cgt;

namespace {

// Every form {L | R} with L, R drawn from the day-1 values: the 256 day-2 forms.
std::vector<Game> day2_forms()
{
    const auto d1 = born_by(1);
    std::vector<Game> out;
    for (std::uint32_t lm = 0; lm < 16; ++lm) {
        for (std::uint32_t rm = 0; rm < 16; ++rm) {
            std::vector<Game> l, r;
            for (int i = 0; i < 4; ++i) {
                if (lm & (1u << i)) l.push_back(d1[i]);
                if (rm & (1u << i)) r.push_back(d1[i]);
            }
            out.push_back(Game::make(l, r));
        }
    }
    return out;
}

}  // namespace

TEST(Cgt, AddExamples)
{
    EXPECT_EQ(add(zero(), zero()), zero());
    EXPECT_EQ(outcome(add(integer(1), integer(-1))), Outcome::Zero);
    EXPECT_TRUE(equal(add(integer(1), integer(-1)), zero()));
    EXPECT_EQ(outcome(add(star(), star())), Outcome::Zero);
    EXPECT_TRUE(equal(add(star(), star()), zero()));
    // {* | *} literally, before simplification.
    EXPECT_EQ(add(star(), star()), Game::make({star()}, {star()}));
}

TEST(Cgt, NegExamples)
{
    EXPECT_EQ(neg(zero()), zero());
    EXPECT_EQ(neg(integer(1)), Game::make({}, {zero()}));
    EXPECT_EQ(neg(star()), star());
    for (const auto& g : day2_forms()) EXPECT_EQ(neg(neg(g)), g);
}

TEST(Cgt, OutcomeExamples)
{
    EXPECT_EQ(outcome(zero()), Outcome::Zero);
    EXPECT_EQ(outcome(star()), Outcome::Fuzzy);
    EXPECT_EQ(outcome(integer(1)), Outcome::Positive);
    EXPECT_EQ(outcome(integer(-2)), Outcome::Negative);
}

TEST(Cgt, GeqExamples)
{
    EXPECT_TRUE(geq(integer(1), zero()));
    EXPECT_FALSE(geq(star(), zero()));
    EXPECT_FALSE(geq(zero(), star()));
    std::mt19937 rng(7);
    const auto forms = day2_forms();
    std::uniform_int_distribution<std::size_t> pick(0, forms.size() - 1);
    for (int i = 0; i < 100; ++i) {
        const auto& g = forms[pick(rng)];
        EXPECT_TRUE(geq(g, g));
    }
}

TEST(Cgt, IsNumberExamples)
{
    EXPECT_TRUE(is_number(zero()));
    EXPECT_FALSE(is_number(star()));
    const Game half = Game::make({zero()}, {integer(1)});
    EXPECT_TRUE(is_number(half));
    EXPECT_TRUE(equal(add(half, half), integer(1)));
}

TEST(Cgt, CanonicalExamples)
{
    EXPECT_EQ(canonical_form(Game::make({zero(), integer(1)}, {})), integer(2));
    EXPECT_EQ(canonical_form(Game::make({integer(-1)}, {integer(1)})), zero());
    EXPECT_TRUE(equal(Game::make({integer(-1)}, {integer(1)}), Game::make({}, {})));
    EXPECT_EQ(canonical_form(add(star(), star())), zero());
    // {0, * | 0} is the canonical up-star; nothing to remove.
    const Game upstar = Game::make({zero(), star()}, {zero()});
    EXPECT_EQ(canonical_form(upstar), upstar);

    std::mt19937 rng(11);
    const auto forms = day2_forms();
    std::uniform_int_distribution<std::size_t> pick(0, forms.size() - 1);
    for (int i = 0; i < 200; ++i) {
        const Game c = canonical_form(forms[pick(rng)]);
        EXPECT_EQ(canonical_form(c), c);
    }
}

TEST(Cgt, BornByDayZeroAndOne)
{
    EXPECT_EQ(born_by(0), std::vector<Game>{zero()});
    const auto d1 = born_by(1);
    ASSERT_EQ(d1.size(), 4u);
    std::set<Game> want{zero(), integer(1), integer(-1), star()};
    EXPECT_EQ(std::set<Game>(d1.begin(), d1.end()), want);
    EXPECT_THROW(born_by(3), rgame::domain_error);
}

TEST(Cgt, DayTwoValueCount)
{
    // Distinct values among the 256 forms, counted by pairwise equality alone.
    const auto forms = day2_forms();
    std::vector<Game> reps;
    for (const auto& g : forms) {
        bool seen = false;
        for (const auto& r : reps) seen = seen || equal(g, r);
        if (!seen) reps.push_back(g);
    }
    EXPECT_EQ(born_by(2).size(), reps.size());
    EXPECT_EQ(reps.size(), 22u);
    EXPECT_EQ(count_undominated_forms(2), 36u);
    EXPECT_EQ(count_undominated_forms(1), 4u);
}

TEST(Cgt, CanonicalFormsAreStructurallyUniquePerValue)
{
    const auto forms = day2_forms();
    for (const auto& g : forms) {
        const Game cg = canonical_form(g);
        EXPECT_TRUE(equal(g, cg));
        for (const auto& h : forms) {
            if (equal(g, h)) {
                EXPECT_EQ(cg, canonical_form(h));
            }
        }
    }
}

TEST(Cgt, GroupLawsAndOutcomes)
{
    const auto values = born_by(2);
    for (const auto& g : values) {
        EXPECT_TRUE(equal(add(g, neg(g)), zero()));
        const Outcome o = outcome(g);
        EXPECT_EQ(o == Outcome::Zero, equal(g, zero()));
        EXPECT_EQ(o == Outcome::Positive, less(zero(), g));
        EXPECT_EQ(o == Outcome::Negative, less(g, zero()));
        EXPECT_EQ(o == Outcome::Fuzzy, fuzzy(g, zero()));
        const Outcome n = outcome(neg(g));
        const Outcome want = o == Outcome::Positive ? Outcome::Negative : o == Outcome::Negative ? Outcome::Positive : o;
        EXPECT_EQ(n, want);
    }
    std::mt19937 rng(3);
    std::uniform_int_distribution<std::size_t> pick(0, values.size() - 1);
    for (int i = 0; i < 200; ++i) {
        const auto& a = values[pick(rng)];
        const auto& b = values[pick(rng)];
        const auto& c = values[pick(rng)];
        EXPECT_TRUE(equal(add(a, b), add(b, a)));
        EXPECT_TRUE(equal(add(add(a, b), c), add(a, add(b, c))));
    }
}

TEST(Cgt, NotationRoundTrip)
{
    EXPECT_EQ(to_string(zero()), "0");
    EXPECT_EQ(to_string(integer(3)), "3");
    EXPECT_EQ(to_string(integer(-2)), "-2");
    EXPECT_EQ(to_string(star()), "*");
    EXPECT_EQ(to_string(Game::make({zero()}, {integer(1)})), "{0|1}");
    EXPECT_EQ(parse_game("{0,1|}"), Game::make({zero(), integer(1)}, {}));
    EXPECT_EQ(parse_game(" { * , -1 | {0|} } "), Game::make({star(), integer(-1)}, {integer(1)}));
    for (const auto& g : day2_forms()) EXPECT_EQ(parse_game(to_string(g)), g);
    for (const auto& g : born_by(2)) EXPECT_EQ(to_string(parse_game(to_string(g))), to_string(g));
    EXPECT_THROW(parse_game("{0|"), rgame::domain_error);
    EXPECT_THROW(parse_game("{0|1}x"), rgame::domain_error);
    EXPECT_THROW(parse_game("?"), rgame::domain_error);
}

TEST(BoardSum, DisjointMatchesSumFormula)
{
    const auto g = BoardGame::single_move(1, 0, true, false);
    const auto h = BoardGame::single_move(1, 0, true, true);
    const auto s = board_sum(g, h, SumMode::disjoint);
    EXPECT_EQ(s.board_size, 2);
    EXPECT_EQ(leaf_count(s), 4u);
    EXPECT_EQ(to_game(s), add(to_game(g), to_game(h)));
    // A second pair: both games give a move to either player.
    const auto a = BoardGame::single_move(2, 1, true, true);
    EXPECT_EQ(to_game(board_sum(a, a, SumMode::disjoint)), add(star(), star()));
}

TEST(BoardSum, ExclusiveBlocksSharedCell)
{
    const auto g = BoardGame::single_move(3, 1, true, false);
    const auto h = BoardGame::single_move(3, 1, false, true);
    const auto s = board_sum(g, h, SumMode::exclusive);
    EXPECT_EQ(leaf_count(s), 2u);
    ASSERT_EQ(s.left.size(), 1u);
    EXPECT_TRUE(s.left[0]->right.empty());
    ASSERT_EQ(s.right.size(), 1u);
    EXPECT_TRUE(s.right[0]->left.empty());

    const auto far = BoardGame::single_move(3, 2, false, true);
    const auto apart = board_sum(g, far, SumMode::exclusive);
    EXPECT_EQ(to_game(apart), add(to_game(g), to_game(far)));
    EXPECT_EQ(leaf_count(apart), leaf_count(board_sum(g, BoardGame::single_move(3, 2, false, true), SumMode::disjoint)));
    EXPECT_THROW(board_sum(g, BoardGame::single_move(4, 0, true, true), SumMode::exclusive), rgame::domain_error);
}
