#include <algorithm>
#include <random>

#include <gtest/gtest.h>

#include "fixtures.h"
#include "knights/consistency.h"
#include "knights/errors.h"
#include "knights/interrogators.h"
#include "knights/secretkeepers.h"

using namespace knights;
using knights::testing::two_component_mole;
using knights::testing::two_component_params;
using knights::testing::two_component_questions;

namespace {

std::vector<std::pair<int, int>> shuffled_pairs(int n, std::mt19937_64& rng) {
  std::vector<std::pair<int, int>> pairs;
  for (int a = 1; a <= n; ++a) {
    for (int b = 1; b <= n; ++b) {
      if (a != b) pairs.emplace_back(a, b);
    }
  }
  std::shuffle(pairs.begin(), pairs.end(), rng);
  return pairs;
}

}  // namespace

TEST(Behavior, KnightsAlwaysTellTheTruth) {
  const Room room = Room::from_spies(GameParams::make(5, 2), {2, 4});
  for (const SpyBehavior& b : {SpyBehavior::truthful(), SpyBehavior::knavish(),
                               SpyBehavior::spyish(), SpyBehavior::random(3)}) {
    EXPECT_EQ(behavior_answer(room, b, 1, 2), Answer::kSpy);
    EXPECT_EQ(behavior_answer(room, b, 1, 3), Answer::kKnight);
  }
}

TEST(Behavior, SpyPolicies) {
  const Room room = Room::from_spies(GameParams::make(5, 2), {2, 4});
  EXPECT_EQ(behavior_answer(room, SpyBehavior::knavish(), 2, 4), Answer::kKnight);
  EXPECT_EQ(behavior_answer(room, SpyBehavior::knavish(), 2, 1), Answer::kSpy);
  EXPECT_EQ(behavior_answer(room, SpyBehavior::spyish(), 2, 1), Answer::kSpy);
  EXPECT_EQ(behavior_answer(room, SpyBehavior::spyish(), 2, 4), Answer::kSpy);
  EXPECT_EQ(behavior_answer(room, SpyBehavior::truthful(), 2, 1), Answer::kKnight);
}

TEST(Behavior, RandomIsAFairStatelessCoin) {
  const Room room = Room::from_spies(GameParams::make(41, 20), {1});
  const SpyBehavior b = SpyBehavior::random(17);
  int spy = 0;
  for (int subject = 2; subject <= 41; ++subject) {
    const Answer a = behavior_answer(room, b, 1, subject);
    EXPECT_EQ(a, behavior_answer(room, b, 1, subject));
    spy += a == Answer::kSpy;
  }
  EXPECT_GT(spy, 8);
  EXPECT_LT(spy, 32);
}

TEST(Behavior, ParseIds) {
  EXPECT_EQ(SpyBehavior::parse("spyish"), SpyBehavior::spyish());
  EXPECT_EQ(SpyBehavior::parse("random:42"), SpyBehavior::random(42));
  EXPECT_EQ(SpyBehavior::random(42).id(), "random:42");
  EXPECT_THROW(SpyBehavior::parse("sneaky"), ParameterError);
  EXPECT_THROW(SpyBehavior::parse("random:x"), ParameterError);
  EXPECT_TRUE(KeeperSpec::parse("mole").mole);
  EXPECT_EQ(KeeperSpec::parse("knavish").id(), "knavish");
}

TEST(Behavior, TruthfulSpiesSaveNothing) {
  std::mt19937_64 rng(5);
  for (int round = 0; round < 200; ++round) {
    const int n = 3 + static_cast<int>(rng() % 30);
    const GameParams p = GameParams::make(n, 1 + static_cast<int>(rng() % ((n - 1) / 2)));
    const Room room = new_room(p, static_cast<int>(rng() % (p.ell + 1)), rng());
    const RunResult r = spider_run(room, SpyBehavior::truthful());
    EXPECT_EQ(r.rejected_knights, 0);
    EXPECT_TRUE(is_consistent(r.transcript, p, room.spies()));
  }
}

TEST(Mole, SingleSpyBudgetSupportsEveryone) {
  MoleState mole(GameParams::make(7, 1));
  EXPECT_EQ(mole.phase(), MoleState::Phase::kTwo);
  EXPECT_TRUE(mole.components().empty());
  for (int a = 1; a <= 7; ++a) {
    for (int b = 1; b <= 7; ++b) {
      if (a != b) {
        EXPECT_EQ(mole.answer(a, b), Answer::kKnight);
      }
    }
  }
}

TEST(Mole, TwoComponentPhases) {
  const auto qs = two_component_questions();
  MoleState mole(two_component_params());
  for (int i = 0; i < 4; ++i) {
    EXPECT_EQ(mole.answer(qs[i].first, qs[i].second), Answer::kSpy) << i;
  }
  EXPECT_EQ(mole.phase(), MoleState::Phase::kTwo);
  EXPECT_EQ(mole.components(), (std::vector<std::vector<int>>{{1, 2, 3}, {4, 5}}));
  EXPECT_EQ(mole.outsiders(), (std::vector<int>{6, 7, 8, 9, 10, 11, 12}));
  // Question 5 is about an outsider.
  EXPECT_EQ(mole.answer(6, 7), Answer::kKnight);
  const std::vector<Answer> expected = {
      Answer::kKnight, Answer::kKnight, Answer::kKnight, Answer::kKnight,
      Answer::kKnight, Answer::kSpy,    Answer::kSpy,    Answer::kKnight,
      Answer::kSpy,    Answer::kKnight, Answer::kKnight};
  for (int i = 5; i < 16; ++i) {
    EXPECT_EQ(mole.answer(qs[i].first, qs[i].second), expected[i - 5]) << "question " << i + 1;
  }
  EXPECT_EQ(mole.kept(0), std::optional<int>(1));
  EXPECT_EQ(mole.kept(1), std::optional<int>(4));
}

TEST(Mole, ComponentMemberSupportedOnlyOnceOthersAsked) {
  MoleState mole(two_component_mole(10));
  EXPECT_EQ(mole.answer(1, 5), Answer::kSpy);    // 4 not yet asked about
  EXPECT_EQ(mole.answer(2, 4), Answer::kKnight);  // 5 already asked about
  EXPECT_EQ(mole.answer(3, 5), Answer::kSpy);    // 4 is the kept member now
  EXPECT_EQ(mole.answer(6, 4), Answer::kKnight);
}

TEST(Mole, RejectsInvalidMoves) {
  MoleState mole(GameParams::make(5, 2));
  mole.answer(1, 2);
  EXPECT_THROW(mole.answer(1, 2), InvalidMoveError);
  EXPECT_THROW(mole.answer(3, 3), InvalidMoveError);
}

TEST(Mole, PureAnswerLeavesStateAlone) {
  const MoleState mole(GameParams::make(5, 2));
  const auto [a, next] = mole_answer(mole, 1, 2);
  EXPECT_EQ(a, Answer::kSpy);
  EXPECT_EQ(mole.answered(), 0);
  EXPECT_EQ(next.answered(), 1);
}

TEST(MoleRefute, EarlyClaimIsRefuted) {
  MoleState mole(GameParams::make(5, 2));
  mole.answer(1, 2);
  mole.answer(3, 4);
  for (const SpySet& claim : knights::testing::subsets_up_to(5, 2)) {
    const auto witness = mole_refute(mole, claim);
    ASSERT_TRUE(witness.has_value()) << format_set(claim);
    EXPECT_NE(*witness, claim);
    EXPECT_TRUE(is_consistent(mole.transcript(), mole.params(), *witness));
  }
}

TEST(MoleRefute, TwoComponentClaimAccepted) {
  const MoleState mole = two_component_mole();
  EXPECT_FALSE(mole_refute(mole, {2, 3, 5}).has_value());
  EXPECT_EQ(mole_refute(mole, {2, 3}), std::optional<SpySet>(SpySet{2, 3, 5}));
  // One question earlier the claim is still refutable.
  EXPECT_TRUE(mole_refute(two_component_mole(15), {2, 3, 5}).has_value());
}

TEST(MoleRefute, SingleSpyAfterOneQuestion) {
  MoleState mole(GameParams::make(3, 1));
  mole.answer(1, 2);
  const auto witness = mole_refute(mole, {});
  ASSERT_TRUE(witness.has_value());
  EXPECT_EQ(witness->size(), 1u);
  EXPECT_TRUE(is_consistent(mole.transcript(), mole.params(), *witness));
}

// Random question orders: the Mole stays consistent, |S| <= l - 1, and
// before n + l - 1 questions both witnesses are consistent and distinct.
TEST(MoleProperty, WitnessesAlongRandomOrders) {
  std::mt19937_64 rng(2024);
  for (int round = 0; round < 400; ++round) {
    const int n = 3 + static_cast<int>(rng() % 10);
    const GameParams p = GameParams::make(n, 1 + static_cast<int>(rng() % ((n - 1) / 2)));
    MoleState mole(p);
    for (const auto& [a, b] : shuffled_pairs(n, rng)) {
      const MoleState::Witnesses w = mole.witnesses();
      EXPECT_LE(static_cast<int>(w.s.size()), p.ell - 1);
      EXPECT_TRUE(is_consistent(mole.transcript(), p, w.s));
      if (mole.answered() < p.n + p.ell - 1) {
        ASSERT_TRUE(w.s_star.has_value());
        EXPECT_NE(*w.s_star, w.s);
        EXPECT_TRUE(is_consistent(mole.transcript(), p, *w.s_star))
            << "n=" << n << " l=" << p.ell << " after " << mole.answered();
      }
      mole.answer(a, b);
      ASSERT_TRUE(has_consistent_set(mole.transcript(), p));
    }
  }
}

TEST(MoleProperty, RefutationAgreesWithAdjudication) {
  std::mt19937_64 rng(77);
  for (int round = 0; round < 150; ++round) {
    const int n = 3 + static_cast<int>(rng() % 6);
    const GameParams p = GameParams::make(n, 1 + static_cast<int>(rng() % ((n - 1) / 2)));
    MoleState mole(p);
    const auto claims = knights::testing::subsets_up_to(n, p.ell);
    for (const auto& [a, b] : shuffled_pairs(n, rng)) {
      mole.answer(a, b);
      const SpySet& claim = claims[rng() % claims.size()];
      const auto refutation = mole_refute(mole, claim);
      const Verdict v = adjudicate(mole.transcript(), p, claim);
      ASSERT_EQ(refutation.has_value(), !v.accepted());
      if (refutation) {
        EXPECT_TRUE(is_consistent(mole.transcript(), p, *refutation));
      }
    }
  }
}
