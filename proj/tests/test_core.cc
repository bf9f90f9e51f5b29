#include <map>
#include <random>
#include <set>

#include <gtest/gtest.h>

#include "knights/core.h"
#include "knights/errors.h"

using namespace knights;

TEST(GameParams, AcceptsStrictMinorityOfSpies) {
  EXPECT_NO_THROW(GameParams::make(3, 1));
  EXPECT_NO_THROW(GameParams::make(21, 10));
  EXPECT_THROW(GameParams::make(10, 5), ParameterError);  // l = n/2
  EXPECT_THROW(GameParams::make(5, 0), ParameterError);
  EXPECT_THROW(GameParams::make(2, 1), ParameterError);
}

TEST(NewRoom, SingleArrangementWithoutSpies) {
  const Room room = new_room(GameParams::make(3, 1), 0, 12345);
  EXPECT_EQ(room.spy_count(), 0);
  for (int seat = 1; seat <= 3; ++seat) EXPECT_FALSE(room.is_spy(seat));
}

TEST(NewRoom, CensusOfElevenKnightsAndTenSpies) {
  const Room room = new_room(GameParams::make(21, 10), 10, 7);
  EXPECT_EQ(room.spy_count(), 10);
  EXPECT_EQ(room.n() - room.spy_count(), 11);
  EXPECT_EQ(room.seed(), std::optional<std::uint64_t>(7));
}

TEST(NewRoom, DeterministicInSeed) {
  const GameParams p = GameParams::make(30, 14);
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    EXPECT_EQ(new_room(p, 9, seed).spies(), new_room(p, 9, seed).spies());
    EXPECT_EQ(new_room(p, 9, seed).spy_count(), 9);
  }
}

TEST(NewRoom, RejectsTooManySpies) {
  EXPECT_THROW(new_room(GameParams::make(5, 2), 3, 1), ParameterError);
  EXPECT_THROW(new_room(GameParams::make(5, 2), -1, 1), ParameterError);
}

TEST(NewRoom, UniformOverSpySets) {
  const GameParams p = GameParams::make(5, 2);
  std::map<SpySet, int> freq;
  constexpr int kSeeds = 100000;
  for (int seed = 0; seed < kSeeds; ++seed) ++freq[new_room(p, 2, seed).spies()];
  ASSERT_EQ(freq.size(), 10u);
  for (const auto& [set, count] : freq) {
    EXPECT_NEAR(count / static_cast<double>(kSeeds), 0.1, 0.01) << format_set(set);
  }
}

TEST(Record, AppendsWithNextTurn) {
  const QuestionGraph empty(5);
  const QuestionGraph g = record(empty, 1, 2, Answer::kSpy);
  ASSERT_EQ(g.size(), 1u);
  EXPECT_EQ(g.entries()[0], (Entry{1, 1, 2, Answer::kSpy}));
  EXPECT_TRUE(empty.empty());  // pure
}

TEST(Record, RejectsRepeatsAndSelfQuestions) {
  const QuestionGraph g = record(QuestionGraph(5), 1, 2, Answer::kSpy);
  EXPECT_THROW(record(g, 1, 2, Answer::kKnight), InvalidMoveError);
  EXPECT_THROW(record(g, 3, 3, Answer::kKnight), InvalidMoveError);
  EXPECT_THROW(record(g, 0, 3, Answer::kKnight), InvalidMoveError);
  EXPECT_THROW(record(g, 1, 6, Answer::kKnight), InvalidMoveError);
  EXPECT_NO_THROW(record(g, 2, 1, Answer::kKnight));
}

TEST(Record, RandomSequencesKeepGraphInvariants) {
  std::mt19937_64 rng(99);
  for (int round = 0; round < 200; ++round) {
    const int n = 3 + static_cast<int>(rng() % 8);
    QuestionGraph g(n);
    for (int step = 0; step < 3 * n * n; ++step) {
      const int a = 1 + static_cast<int>(rng() % n);
      const int b = 1 + static_cast<int>(rng() % n);
      const Answer ans = rng() & 1 ? Answer::kSpy : Answer::kKnight;
      const bool valid = a != b && !g.contains(a, b);
      if (valid) {
        g.append(a, b, ans);
      } else {
        EXPECT_THROW(g.append(a, b, ans), InvalidMoveError);
      }
    }
    std::set<std::pair<int, int>> pairs;
    int turn = 0;
    for (const Entry& e : g.entries()) {
      EXPECT_NE(e.asker, e.subject);
      EXPECT_TRUE(pairs.emplace(e.asker, e.subject).second);
      EXPECT_EQ(e.turn, ++turn);
      EXPECT_EQ(g.find(e.asker, e.subject), std::optional<Answer>(e.answer));
    }
  }
}

TEST(Targets, MaxQuestions) {
  EXPECT_EQ(max_questions(GameParams::make(21, 10)), 30);
  EXPECT_EQ(max_questions(GameParams::make(12, 5)), 16);
  EXPECT_EQ(max_questions(GameParams::make(5, 2)), 6);
}

TEST(Targets, FTarget) {
  EXPECT_EQ(f_target(5), 6);
  EXPECT_EQ(f_target(100), 148);
  EXPECT_EQ(f_target(3), 3);
  EXPECT_THROW(f_target(2), ParameterError);
}

TEST(Targets, FTargetWithinTwoOfThreeHalvesN) {
  for (int n = 3; n <= 2000; ++n) {
    const double gap = 1.5 * n - f_target(n);
    EXPECT_GE(gap, 0.0) << n;
    EXPECT_LE(gap, 2.0) << n;
    EXPECT_EQ(f_target(n), max_questions(GameParams::make(n, (n - 1) / 2))) << n;
  }
}

TEST(Transcript, JsonlRoundTrip) {
  QuestionGraph g(4);
  g.append(1, 2, Answer::kSpy);
  g.append(2, 3, Answer::kKnight);
  g.append(4, 1, Answer::kSpy);
  const std::string text = to_jsonl(g);
  EXPECT_EQ(text.substr(0, text.find('\n')),
            R"({"answer":"spy","asker":1,"subject":2,"turn":1})");
  const QuestionGraph back = from_jsonl(text, 4);
  EXPECT_EQ(back.entries(), g.entries());
  EXPECT_EQ(transcript_from_json(transcript_json(g), 4).entries(), g.entries());
}

TEST(Transcript, JsonlRejectsBrokenTurnsAndFields) {
  EXPECT_THROW(from_jsonl(R"({"turn":2,"asker":1,"subject":2,"answer":"spy"})", 4),
               InvalidMoveError);
  EXPECT_THROW(from_jsonl(R"({"turn":1,"asker":1,"subject":2,"answer":"maybe"})", 4),
               ParameterError);
  EXPECT_THROW(from_jsonl(R"({"turn":1,"asker":1,"subject":1,"answer":"spy"})", 4),
               InvalidMoveError);
}
