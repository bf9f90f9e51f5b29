#pragma once

#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "knights/core.h"
#include "knights/secretkeepers.h"

namespace knights {

// A game in progress as seen by a strategy: it may ask questions and read
// the transcript, never the hidden identities.
class Interrogation {
 public:
  Interrogation(GameParams params, AnswerSource& source);

  Answer ask(int asker, int subject);

  const GameParams& params() const { return params_; }
  int n() const { return params_.n; }
  int ell() const { return params_.ell; }
  const QuestionGraph& transcript() const { return transcript_; }
  int questions() const { return static_cast<int>(transcript_.size()); }

 private:
  GameParams params_;
  AnswerSource* source_;
  QuestionGraph transcript_;
};

struct StrategyResult {
  std::vector<Identity> identities;  // seat i at index i - 1
  // Spider family only.
  int rejected_knights = 0;
  std::vector<int> rejected_candidates;
  int accepted = 0;
  int step1_questions = 0;

  SpySet spies() const;
};

using StrategyFn = std::function<StrategyResult(Interrogation&)>;

// Step 1 hunts for a certified knight: the lowest fresh seat is the
// candidate and the next fresh seats vote on it, until accusers outnumber
// supporters by one (reject, budget -= accusers) or supporters reach the
// budget (accept). Steps 2-4 ask the accepted knight only.
StrategyResult spider(Interrogation& q);

// Builds the chain 1 -> 2 -> ... first; see modified_spider in the .cc.
StrategyResult modified_spider(Interrogation& q);

// Phase A chains, a spider over chain heads, then bisection of chains.
StrategyResult chain_building(Interrogation& q);

// Poll everyone about one person, trust the majority.
StrategyResult majority_baseline(Interrogation& q);

// Binary search for the spy/knight boundary of a chain (listed so that each
// member supported the next one). `knight` is asked about the middle
// member. Returns identities of the chain members in chain order.
struct ChainIdentification {
  std::vector<Identity> identities;
  int questions = 0;
};
ChainIdentification chain_identify(
    const std::vector<int>& chain, int knight,
    const std::function<Answer(int asker, int subject)>& ask);
// Same, asking through `q`; checks that every member supported the next.
ChainIdentification chain_identify(const std::vector<int>& chain, int knight,
                                   Interrogation& q);

// "majority", "spider", "modified-spider", "chain-building".
const std::vector<std::string>& strategy_ids();
StrategyFn strategy_by_id(std::string_view id);

struct RunResult {
  QuestionGraph transcript;
  std::vector<Identity> identities;
  int rejected_knights = 0;
  StrategyResult detail;

  int questions() const { return static_cast<int>(transcript.size()); }
};

// Room runners. They check the recovered identities against the room and
// the hard question bounds, and throw InternalError when a check fails.
RunResult run_strategy(std::string_view id, const Room& room,
                       AnswerSource& source);
RunResult run_strategy(std::string_view id, const Room& room,
                       const SpyBehavior& behavior);

RunResult spider_run(const Room& room, const SpyBehavior& behavior);
RunResult spider_run(const Room& room, AnswerSource& source);
RunResult modified_spider_run(const Room& room, const SpyBehavior& behavior);
RunResult chain_building_run(const Room& room, const SpyBehavior& behavior);
RunResult majority_baseline_run(const Room& room, const SpyBehavior& behavior);

// Online play.
struct InterrogatorView {
  GameParams params;
  QuestionGraph transcript;
};

struct Move {
  enum class Kind { kAsk, kClaim };
  Kind kind = Kind::kAsk;
  int asker = 0;
  int subject = 0;
  SpySet claim;

  static Move ask(int asker, int subject) {
    return Move{Kind::kAsk, asker, subject, {}};
  }
  static Move claim_set(SpySet spies) {
    return Move{Kind::kClaim, 0, 0, std::move(spies)};
  }
};

// Plays a strategy one move at a time. The strategy is deterministic, so
// each call replays it against the transcript so far and stops at the
// first question that has no answer yet. If the transcript diverges from
// the strategy or a claim was refuted, it falls back to claiming the unique
// consistent set when there is one, and otherwise to the first unasked
// pair.
class OnlineInterrogator {
 public:
  explicit OnlineInterrogator(std::string strategy_id);

  Move next_move(const InterrogatorView& view);
  void claim_refuted(const SpySet& claim);
  const std::string& strategy_id() const { return id_; }

 private:
  Move fallback(const InterrogatorView& view) const;

  std::string id_;
  StrategyFn fn_;
  std::vector<SpySet> refuted_;
};

}  // namespace knights
