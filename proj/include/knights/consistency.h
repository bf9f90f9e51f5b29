#pragma once

#include <chrono>
#include <cstdint>
#include <limits>
#include <optional>
#include <string_view>
#include <vector>

#include "knights/core.h"

namespace knights {

// Limits applied to solver calls made on behalf of the game service.
struct SolverBudget {
  int max_n = std::numeric_limits<int>::max();
  std::optional<std::chrono::milliseconds> time_limit;
};

inline constexpr int kServiceMaxN = 64;
SolverBudget service_budget();

// |candidate| <= l and every statement by a non-member is true.
bool is_consistent(const QuestionGraph& graph, const GameParams& params,
                   const SpySet& candidate);

// All consistent spy sets, sorted lexicographically. Stops after `limit`
// sets (the returned prefix is then the first `limit` in search order,
// re-sorted).
std::vector<SpySet> consistent_sets(
    const QuestionGraph& graph, const GameParams& params,
    std::size_t limit = std::numeric_limits<std::size_t>::max(),
    const SolverBudget& budget = {});

// Number of consistent sets, saturating at `limit`.
std::uint64_t count_consistent(
    const QuestionGraph& graph, const GameParams& params,
    std::uint64_t limit = std::numeric_limits<std::uint64_t>::max(),
    const SolverBudget& budget = {});

bool has_consistent_set(const QuestionGraph& graph, const GameParams& params,
                        const SolverBudget& budget = {});

// The `k` lexicographically smallest consistent sets (sorted seat lists
// compared element by element; a prefix sorts first).
std::vector<SpySet> lex_smallest_sets(const QuestionGraph& graph,
                                      const GameParams& params, std::size_t k,
                                      const SolverBudget& budget = {});

// Exhaustive 2^n oracle; refuses n > 20 with ResourceError.
std::vector<SpySet> brute_force_sets(const QuestionGraph& graph,
                                     const GameParams& params);

struct Verdict {
  enum class Kind { kAccepted, kRefuted, kInconsistent };
  Kind kind = Kind::kAccepted;
  // Set for kRefuted (a consistent set other than the claim) and for
  // kInconsistent (some consistent set).
  SpySet witness;

  bool accepted() const { return kind == Kind::kAccepted; }
};

std::string_view to_string(Verdict::Kind kind);

// Accepted iff the claim is the unique consistent set. The witness is the
// lexicographically smallest consistent set different from the claim.
// Throws CorruptedGameError when no consistent set exists.
Verdict adjudicate(const QuestionGraph& graph, const GameParams& params,
                   const SpySet& claim, const SolverBudget& budget = {});

}  // namespace knights
