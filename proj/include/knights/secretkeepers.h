#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "knights/core.h"

namespace knights {

// Anything that answers questions for the Interrogator. `answer` is called
// once per question, after the move was validated and before it is
// recorded, so `transcript` holds the earlier questions only.
class AnswerSource {
 public:
  virtual ~AnswerSource() = default;
  virtual Answer answer(const QuestionGraph& transcript, int asker,
                        int subject) = 0;
};

// Policy for identity-committed spies. Knights always tell the truth.
struct SpyBehavior {
  enum class Kind { kTruthful, kKnavish, kSpyish, kRandom };
  Kind kind = Kind::kKnavish;
  std::uint64_t seed = 0;  // kRandom only

  static SpyBehavior truthful() { return {Kind::kTruthful, 0}; }
  static SpyBehavior knavish() { return {Kind::kKnavish, 0}; }
  static SpyBehavior spyish() { return {Kind::kSpyish, 0}; }
  static SpyBehavior random(std::uint64_t seed) { return {Kind::kRandom, seed}; }

  // "truthful", "knavish", "spyish" or "random:<seed>".
  static SpyBehavior parse(std::string_view id);
  std::string id() const;
  bool operator==(const SpyBehavior&) const = default;
};

std::uint64_t splitmix64(std::uint64_t x);

// Random spies flip a coin that is a pure function of (seed, asker,
// subject), so runs do not depend on question order.
Answer behavior_answer(const Room& room, const SpyBehavior& behavior,
                       int asker, int subject);

class RoomSource : public AnswerSource {
 public:
  RoomSource(Room room, SpyBehavior behavior)
      : room_(std::move(room)), behavior_(behavior) {}
  Answer answer(const QuestionGraph&, int asker, int subject) override {
    return behavior_answer(room_, behavior_, asker, subject);
  }
  const Room& room() const { return room_; }

 private:
  Room room_;
  SpyBehavior behavior_;
};

// Knights answer truthfully; spies answer through `spy_answer`.
class ScriptedSource : public AnswerSource {
 public:
  using SpyFn = std::function<Answer(int asker, int subject)>;
  ScriptedSource(Room room, SpyFn spy_answer)
      : room_(std::move(room)), spy_answer_(std::move(spy_answer)) {}
  Answer answer(const QuestionGraph&, int asker, int subject) override;

 private:
  Room room_;
  SpyFn spy_answer_;
};

// The adaptive Mole Hiding Secret-Keeper. It is not committed to any
// identities: for the first l-1 questions it accuses, then it splits the
// people met so far into connected components and keeps exactly one
// member of every component (k_i) hidden as a knight until forced.
class MoleState {
 public:
  enum class Phase { kOne, kTwo };

  explicit MoleState(GameParams params);

  const GameParams& params() const { return params_; }
  Phase phase() const { return phase_; }
  int answered() const { return static_cast<int>(transcript_.size()); }
  const QuestionGraph& transcript() const { return transcript_; }
  // Fixed when Phase 1 ends; empty before that.
  const std::vector<std::vector<int>>& components() const {
    return components_;
  }
  const std::vector<int>& outsiders() const { return outsiders_; }
  // Seats asked about since Phase 1 ended.
  const std::set<int>& asked_in_phase2() const { return asked2_; }
  // The seat k_i fixed for component i, if it is already forced.
  std::optional<int> kept(std::size_t component) const {
    return kept_.at(component);
  }

  // Answers and records the question. Throws InvalidMoveError for
  // self-questions and repeats.
  Answer answer(int asker, int subject);

  // S = G minus one kept member per component, and the second set S* built
  // from the lowest seat x not asked about in Phase 2 (nullopt when every
  // seat has been asked about).
  struct Witnesses {
    SpySet s;
    std::optional<SpySet> s_star;
    std::optional<int> x;
  };
  Witnesses witnesses() const;

  // A consistent set different from `claim`, or nullopt when the claim is
  // the unique consistent set. Uses the witnesses above and falls back on
  // the consistency solver when neither applies.
  std::optional<SpySet> refute(const SpySet& claim) const;

 private:
  void finish_phase_one();
  int component_of(int seat) const;
  SpySet spies_with_kept(const std::vector<int>& kept) const;

  GameParams params_;
  Phase phase_ = Phase::kOne;
  QuestionGraph transcript_;
  std::vector<std::vector<int>> components_;
  std::vector<int> outsiders_;
  std::vector<int> comp_index_;  // seat -> component, -1 for G'
  std::vector<std::optional<int>> kept_;
  std::set<int> asked2_;
};

// Pure form of MoleState::answer.
std::pair<Answer, MoleState> mole_answer(const MoleState& state, int asker,
                                         int subject);
std::optional<SpySet> mole_refute(const MoleState& state, const SpySet& claim);

class MoleSource : public AnswerSource {
 public:
  explicit MoleSource(GameParams params) : state_(params) {}
  Answer answer(const QuestionGraph&, int asker, int subject) override {
    return state_.answer(asker, subject);
  }
  const MoleState& state() const { return state_; }

 private:
  MoleState state_;
};

// "mole" or a fixed behaviour id.
struct KeeperSpec {
  bool mole = false;
  SpyBehavior behavior;

  static KeeperSpec parse(std::string_view id);
  std::string id() const;
};

}  // namespace knights
