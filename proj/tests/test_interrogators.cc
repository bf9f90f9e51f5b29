#include <algorithm>
#include <cmath>
#include <cstdio>
#include <random>

#include <gtest/gtest.h>

#include "fixtures.h"
#include "knights/consistency.h"
#include "knights/errors.h"
#include "knights/interrogators.h"

using namespace knights;
using knights::testing::mixed21_answer;
using knights::testing::mixed21_room;
using knights::testing::eleven_seat_room;

namespace {

std::vector<Room> all_rooms(const GameParams& p) {
  std::vector<Room> rooms;
  for (const SpySet& s : knights::testing::subsets_up_to(p.n, p.ell)) {
    rooms.push_back(Room::from_spies(p, s));
  }
  return rooms;
}

const std::vector<SpyBehavior>& behaviours() {
  static const std::vector<SpyBehavior> all = {
      SpyBehavior::truthful(), SpyBehavior::knavish(), SpyBehavior::spyish(),
      SpyBehavior::random(1), SpyBehavior::random(2)};
  return all;
}

// Drives an OnlineInterrogator against a fixed source until it claims.
std::pair<QuestionGraph, SpySet> play_online(const std::string& id, const Room& room,
                                             AnswerSource& source) {
  OnlineInterrogator engine(id);
  InterrogatorView view{room.params(), QuestionGraph(room.n())};
  for (int guard = 0; guard < room.n() * room.n(); ++guard) {
    const Move m = engine.next_move(view);
    if (m.kind == Move::Kind::kClaim) return {view.transcript, m.claim};
    const Answer a = source.answer(view.transcript, m.asker, m.subject);
    view.transcript.append(m.asker, m.subject, a);
  }
  ADD_FAILURE() << "engine never claimed";
  return {};
}

}  // namespace

TEST(Spider, MixedRoomOfTwentyOne) {
  const Room room = mixed21_room();
  ScriptedSource source(room, [&](int a, int s) { return mixed21_answer(room, a, s); });
  const RunResult r = spider_run(room, source);
  EXPECT_EQ(r.questions(), 29);
  EXPECT_EQ(r.rejected_knights, 1);
  EXPECT_EQ(r.detail.step1_questions, 15);
  EXPECT_EQ(r.identities, room.identities());
}

TEST(Spider, MixedRoomOfTwentyOneAllKnavish) {
  const RunResult r = spider_run(mixed21_room(), SpyBehavior::knavish());
  EXPECT_EQ(r.questions(), 28);
  EXPECT_EQ(r.rejected_knights, 2);
}

TEST(Spider, TruthfulSpiesCostTheFullBudget) {
  std::mt19937_64 rng(3);
  for (int round = 0; round < 300; ++round) {
    const int n = 3 + static_cast<int>(rng() % 60);
    const GameParams p = GameParams::make(n, 1 + static_cast<int>(rng() % ((n - 1) / 2)));
    const Room room = new_room(p, static_cast<int>(rng() % (p.ell + 1)), rng());
    EXPECT_EQ(spider_run(room, SpyBehavior::truthful()).questions(), max_questions(p));
  }
}

TEST(Spider, SmallestRoomOfKnights) {
  const Room room = Room::from_spies(GameParams::make(3, 1), {});
  const RunResult r = spider_run(room, SpyBehavior::knavish());
  EXPECT_EQ(r.questions(), 3);
  EXPECT_EQ(r.detail.accepted, 1);
}

TEST(Spider, AsksEachSpyAtMostOnce) {
  std::mt19937_64 rng(8);
  for (int round = 0; round < 500; ++round) {
    const int n = 3 + static_cast<int>(rng() % 40);
    const GameParams p = GameParams::make(n, 1 + static_cast<int>(rng() % ((n - 1) / 2)));
    const Room room = new_room(p, static_cast<int>(rng() % (p.ell + 1)), rng());
    const SpyBehavior b = behaviours()[rng() % behaviours().size()];
    const RunResult r = spider_run(room, b);
    std::vector<int> asked(n + 1, 0);
    for (const Entry& e : r.transcript.entries()) {
      if (room.is_spy(e.asker)) {
        EXPECT_LE(++asked[e.asker], 1);
      }
    }
    EXPECT_EQ(r.questions(), max_questions(p) - r.rejected_knights);
  }
}

TEST(ModifiedSpider, ElevenSeatRoom) {
  const RunResult r = modified_spider_run(eleven_seat_room(), SpyBehavior::knavish());
  EXPECT_EQ(r.questions(), 15);
  EXPECT_EQ(r.identities, eleven_seat_room().identities());
}

TEST(ModifiedSpider, LeadingKnightsCostN) {
  std::mt19937_64 rng(12);
  for (int round = 0; round < 200; ++round) {
    const int n = 5 + static_cast<int>(rng() % 40);
    const GameParams p = GameParams::make(n, 1 + static_cast<int>(rng() % ((n - 1) / 2)));
    // Spies drawn from seats l + 2 .. n only.
    SpySet spies;
    std::vector<int> pool;
    for (int seat = p.ell + 2; seat <= n; ++seat) pool.push_back(seat);
    std::shuffle(pool.begin(), pool.end(), rng);
    const int s = static_cast<int>(rng() % (std::min<int>(p.ell, pool.size()) + 1));
    spies.assign(pool.begin(), pool.begin() + s);
    const Room room = Room::from_spies(p, spies);
    for (const SpyBehavior& b : behaviours()) {
      EXPECT_EQ(modified_spider_run(room, b).questions(), n) << format_set(spies);
    }
  }
  const Room knights_only = Room::from_spies(GameParams::make(5, 2), {});
  EXPECT_EQ(modified_spider_run(knights_only, SpyBehavior::knavish()).questions(), 5);
}

TEST(ChainIdentify, SevenSpiesBeforeAKnight) {
  const std::vector<int> chain = {1, 2, 3, 4, 5, 6, 7};
  const Room room = Room::from_spies(GameParams::make(15, 7), {1, 2, 3, 4, 5, 6, 7});
  int asked = 0;
  const ChainIdentification c = chain_identify(chain, 8, [&](int a, int s) {
    ++asked;
    return behavior_answer(room, SpyBehavior::knavish(), a, s);
  });
  EXPECT_EQ(c.questions, 3);
  EXPECT_EQ(asked, 3);
  EXPECT_EQ(c.identities, std::vector<Identity>(7, Identity::kSpy));
}

TEST(ChainIdentify, SingleMemberNeedsOneQuestion) {
  for (const bool spy : {false, true}) {
    const ChainIdentification c = chain_identify({4}, 1, [&](int, int) {
      return spy ? Answer::kSpy : Answer::kKnight;
    });
    EXPECT_EQ(c.questions, 1);
    EXPECT_EQ(c.identities.front(), spy ? Identity::kSpy : Identity::kKnight);
  }
}

// Chain of k members with b spies first: the search finds b and asks
// exactly floor(log2 k) + 1 questions, whatever b is.
TEST(ChainIdentify, EveryBoundaryUsesTheLogBound) {
  auto run = [](int k, int b) {
    std::vector<int> chain(k);
    for (int i = 0; i < k; ++i) chain[i] = i + 2;
    const ChainIdentification c = chain_identify(chain, 1, [&](int, int s) {
      return s - 2 < b ? Answer::kSpy : Answer::kKnight;
    });
    for (int i = 0; i < k; ++i) {
      EXPECT_EQ(c.identities[i], i < b ? Identity::kSpy : Identity::kKnight);
    }
    return c.questions;
  };
  for (int b = 0; b <= 7; ++b) EXPECT_EQ(run(7, b), 3) << b;
  for (int b = 0; b <= 2; ++b) EXPECT_EQ(run(2, b), 2) << b;
  std::mt19937_64 rng(21);
  for (int k = 1; k <= (1 << 15); k = k < 64 ? k + 1 : k * 2 + static_cast<int>(rng() % 3)) {
    const int bound = static_cast<int>(std::floor(std::log2(k))) + 1;
    std::vector<int> boundaries = {0, k};
    if (k <= 64) {
      for (int b = 1; b < k; ++b) boundaries.push_back(b);
    } else {
      for (int i = 0; i < 40; ++i) boundaries.push_back(static_cast<int>(rng() % (k + 1)));
    }
    for (int b : boundaries) EXPECT_EQ(run(k, b), bound) << "k=" << k << " b=" << b;
  }
}

// k = 2 with two spies: the search settles after one question and the
// second one checks the last spy. A knight there breaks the chain shape.
TEST(ChainIdentify, CheckingQuestionCatchesABrokenChain) {
  std::vector<int> asked;
  const auto ask = [&](int, int s) {
    asked.push_back(s);
    return s == 5 ? Answer::kKnight : Answer::kSpy;
  };
  EXPECT_THROW(chain_identify({5, 6}, 1, ask), InternalError);
  EXPECT_EQ(asked, (std::vector<int>{6, 5}));
}

TEST(ChainIdentify, EmptyChainAsksNothing) {
  EXPECT_EQ(chain_identify({}, 1, [](int, int) { return Answer::kSpy; }).questions, 0);
}

TEST(ChainIdentify, BrokenChainIsAnInternalError) {
  const Room room = Room::from_spies(GameParams::make(5, 2), {});
  RoomSource source(room, SpyBehavior::knavish());
  Interrogation q(room.params(), source);
  q.ask(2, 3);
  EXPECT_THROW(chain_identify({2, 3, 4}, 1, q), InternalError);
  q.ask(3, 4);
  EXPECT_NO_THROW(chain_identify({2, 3, 4}, 1, q));
}

TEST(ChainBuilding, RoomOfKnightsNeedsAtMostN) {
  for (int n = 3; n <= 60; ++n) {
    const Room room = Room::from_spies(GameParams::make(n, (n - 1) / 2), {});
    EXPECT_LE(chain_building_run(room, SpyBehavior::knavish()).questions(), n);
  }
}

// Spyish spies stay within n + l - 1 in every sampled room. The other
// behaviours can exceed it in small rooms; their counts are reported.
TEST(ChainBuilding, BudgetAcrossSmallRooms) {
  std::mt19937_64 rng(31337);
  std::vector<int> over(behaviours().size(), 0);
  constexpr int kRooms = 100000;
  for (int round = 0; round < kRooms; ++round) {
    const int n = 3 + static_cast<int>(rng() % 23);
    const GameParams p = GameParams::make(n, 1 + static_cast<int>(rng() % ((n - 1) / 2)));
    const Room room = new_room(p, static_cast<int>(rng() % (p.ell + 1)), rng());
    const std::size_t bi = round % behaviours().size();
    const RunResult r = chain_building_run(room, behaviours()[bi]);
    if (r.questions() > max_questions(p)) ++over[bi];
  }
  EXPECT_EQ(over[2], 0) << "spyish";
  for (std::size_t i = 0; i < over.size(); ++i) {
    RecordProperty(behaviours()[i].id(), over[i]);
    std::printf("chain-building over n+l-1 with %s spies: %d of %d rooms\n",
                behaviours()[i].id().c_str(), over[i], kRooms / 5);
  }
}

TEST(Majority, RoomOfFiveKnights) {
  const Room room = Room::from_spies(GameParams::make(5, 2), {});
  EXPECT_EQ(majority_baseline_run(room, SpyBehavior::knavish()).questions(), 8);
}

TEST(Majority, QuadraticBoundAndCorrectVerdicts) {
  std::mt19937_64 rng(55);
  for (int round = 0; round < 400; ++round) {
    const int n = 3 + static_cast<int>(rng() % 30);
    const GameParams p = GameParams::make(n, 1 + static_cast<int>(rng() % ((n - 1) / 2)));
    const Room room = new_room(p, static_cast<int>(rng() % (p.ell + 1)), rng());
    const RunResult r =
        majority_baseline_run(room, behaviours()[rng() % behaviours().size()]);
    EXPECT_LE(r.questions(), n * (n - 1));
    EXPECT_EQ(r.identities, room.identities());
  }
}

// Every room with n <= 10, every strategy and behaviour: the runners throw
// when identities come out wrong or the spider family exceeds its bound.
TEST(Exhaustive, EveryStrategyIdentifiesEveryRoom) {
  for (int n = 3; n <= 10; ++n) {
    for (int ell = 1; 2 * ell < n; ++ell) {
      const GameParams p = GameParams::make(n, ell);
      for (const Room& room : all_rooms(p)) {
        for (const std::string& id : strategy_ids()) {
          for (const SpyBehavior& b : behaviours()) {
            RunResult r;
            ASSERT_NO_THROW(r = run_strategy(id, room, b))
                << id << " " << b.id() << " n=" << n << " spies " << format_set(room.spies());
            ASSERT_TRUE(is_consistent(r.transcript, p, room.spies()));
          }
        }
      }
    }
  }
}

TEST(Strategies, UnknownIdIsRejected) {
  EXPECT_THROW(strategy_by_id("oracle"), ParameterError);
  EXPECT_EQ(strategy_ids().size(), 4u);
}

TEST(Online, ReplayMatchesOfflineRun) {
  std::mt19937_64 rng(91);
  for (int round = 0; round < 60; ++round) {
    const int n = 3 + static_cast<int>(rng() % 18);
    const GameParams p = GameParams::make(n, 1 + static_cast<int>(rng() % ((n - 1) / 2)));
    const Room room = new_room(p, static_cast<int>(rng() % (p.ell + 1)), rng());
    const SpyBehavior b = behaviours()[rng() % behaviours().size()];
    for (const std::string& id : strategy_ids()) {
      RoomSource source(room, b);
      const auto [transcript, claim] = play_online(id, room, source);
      const RunResult offline = run_strategy(id, room, b);
      EXPECT_EQ(transcript.entries(), offline.transcript.entries()) << id;
      EXPECT_EQ(claim, room.spies()) << id;
    }
  }
}

TEST(Online, DivergedTranscriptFallsBack) {
  const GameParams p = GameParams::make(3, 1);
  OnlineInterrogator engine("spider");
  QuestionGraph g(3);
  g.append(2, 3, Answer::kKnight);  // the spider would ask 2 about 1 first
  Move m = engine.next_move({p, g});
  ASSERT_EQ(m.kind, Move::Kind::kAsk);
  EXPECT_EQ(std::make_pair(m.asker, m.subject), std::make_pair(1, 2));
  g.append(3, 2, Answer::kKnight);
  g.append(2, 1, Answer::kSpy);
  m = engine.next_move({p, g});
  ASSERT_EQ(m.kind, Move::Kind::kClaim);
  EXPECT_EQ(m.claim, SpySet{1});
}

TEST(Online, RefutedClaimIsNotRepeated) {
  const Room room = Room::from_spies(GameParams::make(5, 2), {2});
  OnlineInterrogator engine("spider");
  RoomSource source(room, SpyBehavior::knavish());
  InterrogatorView view{room.params(), QuestionGraph(5)};
  Move m = engine.next_move(view);
  while (m.kind == Move::Kind::kAsk) {
    view.transcript.append(m.asker, m.subject,
                           source.answer(view.transcript, m.asker, m.subject));
    m = engine.next_move(view);
  }
  EXPECT_EQ(m.claim, SpySet{2});
  engine.claim_refuted(m.claim);
  const Move next = engine.next_move(view);
  EXPECT_FALSE(next.kind == Move::Kind::kClaim && next.claim == SpySet{2});
}
