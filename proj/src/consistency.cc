#include "knights/consistency.h"

#include <algorithm>
#include <bit>
#include <functional>

#include "knights/errors.h"

namespace knights {

namespace {

constexpr std::int8_t kUnknown = -1;
constexpr std::int8_t kKnightVal = 0;
constexpr std::int8_t kSpyVal = 1;

std::uint64_t sat_add(std::uint64_t a, std::uint64_t b) {
  const std::uint64_t s = a + b;
  return s < a ? std::numeric_limits<std::uint64_t>::max() : s;
}

// Saturating binomial coefficients from Pascal's triangle.
std::uint64_t binom_sat(int n, int k) {
  if (k < 0 || k > n) return 0;
  std::vector<std::uint64_t> row(k + 1, 0);
  row[0] = 1;
  for (int i = 1; i <= n; ++i) {
    for (int j = std::min(i, k); j >= 1; --j) row[j] = sat_add(row[j], row[j - 1]);
  }
  return row[k];
}

void check_budget_size(const GameParams& params, const SolverBudget& budget) {
  if (params.n > budget.max_n) {
    throw ResourceError("consistency search is capped at n <= " +
                        std::to_string(budget.max_n));
  }
}

// Backtracking over seat identities with unit propagation:
//  - a committed knight's statements fix their subjects;
//  - supporting a spy or accusing a knight proves the speaker is a spy;
//  - more than l spies fails, exactly l spies makes everyone else a knight.
class Solver {
 public:
  struct Arc {
    int other;
    Answer answer;
  };

  Solver(const QuestionGraph& graph, const GameParams& params,
         const SolverBudget& budget)
      : n_(params.n),
        ell_(params.ell),
        out_(params.n + 1),
        in_(params.n + 1),
        val_(params.n + 1, kUnknown) {
    check_budget_size(params, budget);
    if (graph.n() != params.n) {
      throw ParameterError("transcript seat count does not match n");
    }
    if (budget.time_limit) {
      deadline_ = std::chrono::steady_clock::now() + *budget.time_limit;
    }
    std::vector<int> degree(n_ + 1, 0);
    for (const Entry& e : graph.entries()) {
      out_[e.asker].push_back({e.subject, e.answer});
      in_[e.subject].push_back({e.asker, e.answer});
      ++degree[e.asker];
      ++degree[e.subject];
    }
    for (int i = 1; i <= n_; ++i) order_.push_back(i);
    std::stable_sort(order_.begin(), order_.end(),
                     [&](int a, int b) { return degree[a] > degree[b]; });
  }

  int n() const { return n_; }
  int ell() const { return ell_; }
  int spies() const { return spies_; }
  std::int8_t value(int seat) const { return val_[seat]; }
  std::size_t mark() const { return trail_.size(); }

  // Commits a value and propagates; on false the caller must undo(mark).
  bool assign(int seat, std::int8_t v) {
    queue_.clear();
    if (!set(seat, v)) return false;
    return propagate();
  }

  void undo(std::size_t mark) {
    while (trail_.size() > mark) {
      const int seat = trail_.back();
      trail_.pop_back();
      if (val_[seat] == kSpyVal) --spies_;
      val_[seat] = kUnknown;
    }
  }

  // Depth-first search below the current partial assignment. At each leaf
  // every remaining unknown seat is unconstrained; `leaf(free)` receives
  // them and returns false to stop. Returns false iff stopped. The solver
  // state is restored on return.
  bool search(const std::function<bool(const std::vector<int>&)>& leaf) {
    tick();
    const std::size_t m = mark();
    if (spies_ == ell_) {
      for (int i = 1; i <= n_; ++i) {
        if (val_[i] == kUnknown && !assign(i, kKnightVal)) {
          undo(m);
          return true;
        }
      }
    }
    const int b = pick();
    if (b < 0) {
      std::vector<int> free;
      for (int i = 1; i <= n_; ++i) {
        if (val_[i] == kUnknown) free.push_back(i);
      }
      const bool go_on = leaf(free);
      undo(m);
      return go_on;
    }
    for (std::int8_t v : {kKnightVal, kSpyVal}) {
      const std::size_t m2 = mark();
      if (assign(b, v) && !search(leaf)) {
        undo(m);
        return false;
      }
      undo(m2);
    }
    undo(m);
    return true;
  }

  bool feasible() {
    bool found = false;
    search([&](const std::vector<int>&) {
      found = true;
      return false;
    });
    return found;
  }

 private:
  bool set(int seat, std::int8_t v) {
    if (val_[seat] != kUnknown) return val_[seat] == v;
    if (v == kSpyVal && spies_ + 1 > ell_) return false;
    val_[seat] = v;
    if (v == kSpyVal) ++spies_;
    trail_.push_back(seat);
    queue_.push_back(seat);
    return true;
  }

  bool propagate() {
    for (std::size_t q = 0; q < queue_.size(); ++q) {
      const int x = queue_[q];
      const std::int8_t v = val_[x];
      if (v == kKnightVal) {
        for (const Arc& a : out_[x]) {
          const std::int8_t want =
              a.answer == Answer::kKnight ? kKnightVal : kSpyVal;
          if (!set(a.other, want)) return false;
        }
      }
      const Answer truth = v == kKnightVal ? Answer::kKnight : Answer::kSpy;
      for (const Arc& a : in_[x]) {
        if (a.answer == truth) continue;
        // The speaker lied about x, so the speaker is a spy.
        if (!set(a.other, kSpyVal)) return false;
      }
    }
    queue_.clear();
    return true;
  }

  // First unknown seat in degree order that still shares an edge with
  // another unknown seat; -1 when every unknown seat is unconstrained.
  int pick() const {
    for (int s : order_) {
      if (val_[s] != kUnknown) continue;
      for (const Arc& a : out_[s]) {
        if (val_[a.other] == kUnknown) return s;
      }
      for (const Arc& a : in_[s]) {
        if (val_[a.other] == kUnknown) return s;
      }
    }
    return -1;
  }

  void tick() {
    if (!deadline_ || (++nodes_ & 1023) != 0) return;
    if (std::chrono::steady_clock::now() > *deadline_) {
      throw ResourceError("consistency search exceeded its time budget");
    }
  }

  int n_;
  int ell_;
  std::vector<std::vector<Arc>> out_;
  std::vector<std::vector<Arc>> in_;
  std::vector<std::int8_t> val_;
  int spies_ = 0;
  std::vector<int> trail_;
  std::vector<int> queue_;
  std::vector<int> order_;
  std::optional<std::chrono::steady_clock::time_point> deadline_;
  std::uint64_t nodes_ = 0;
};

SpySet committed_spies(const Solver& s) {
  SpySet out;
  for (int i = 1; i <= s.n(); ++i) {
    if (s.value(i) == kSpyVal) out.push_back(i);
  }
  return out;
}

// Calls emit(set) for every subset of `free` with at most r members added
// to `base`; stops when emit returns false.
bool expand_free(const SpySet& base, const std::vector<int>& free, int r,
                 const std::function<bool(SpySet)>& emit) {
  SpySet chosen;
  std::function<bool(std::size_t)> rec = [&](std::size_t from) -> bool {
    SpySet set = base;
    set.insert(set.end(), chosen.begin(), chosen.end());
    if (!emit(normalize(std::move(set)))) return false;
    if (static_cast<int>(chosen.size()) == r) return true;
    for (std::size_t i = from; i < free.size(); ++i) {
      chosen.push_back(free[i]);
      if (!rec(i + 1)) return false;
      chosen.pop_back();
    }
    return true;
  };
  return rec(0);
}

}  // namespace

SolverBudget service_budget() {
  return SolverBudget{kServiceMaxN, std::chrono::milliseconds(2000)};
}

bool is_consistent(const QuestionGraph& graph, const GameParams& params,
                   const SpySet& candidate) {
  const SpySet set = normalize(candidate);
  if (static_cast<int>(set.size()) > params.ell) return false;
  std::vector<char> spy(params.n + 1, 0);
  for (int s : set) {
    if (s < 1 || s > params.n) return false;
    spy[s] = 1;
  }
  for (const Entry& e : graph.entries()) {
    if (spy[e.asker]) continue;
    if ((e.answer == Answer::kSpy) != static_cast<bool>(spy[e.subject])) {
      return false;
    }
  }
  return true;
}

std::vector<SpySet> consistent_sets(const QuestionGraph& graph,
                                    const GameParams& params,
                                    std::size_t limit,
                                    const SolverBudget& budget) {
  Solver solver(graph, params, budget);
  std::vector<SpySet> out;
  if (limit == 0) return out;
  solver.search([&](const std::vector<int>& free) {
    return expand_free(committed_spies(solver), free,
                       params.ell - solver.spies(), [&](SpySet s) {
                         out.push_back(std::move(s));
                         return out.size() < limit;
                       });
  });
  std::sort(out.begin(), out.end());
  return out;
}

std::uint64_t count_consistent(const QuestionGraph& graph,
                               const GameParams& params, std::uint64_t limit,
                               const SolverBudget& budget) {
  Solver solver(graph, params, budget);
  std::uint64_t total = 0;
  solver.search([&](const std::vector<int>& free) {
    const int f = static_cast<int>(free.size());
    const int r = std::min(f, params.ell - solver.spies());
    for (int j = 0; j <= r && total < limit; ++j) {
      total = sat_add(total, binom_sat(f, j));
    }
    return total < limit;
  });
  return std::min(total, limit);
}

bool has_consistent_set(const QuestionGraph& graph, const GameParams& params,
                        const SolverBudget& budget) {
  Solver solver(graph, params, budget);
  return solver.feasible();
}

std::vector<SpySet> lex_smallest_sets(const QuestionGraph& graph,
                                      const GameParams& params, std::size_t k,
                                      const SolverBudget& budget) {
  Solver solver(graph, params, budget);
  std::vector<SpySet> out;
  SpySet prefix;
  // Sets extending `prefix` whose remaining members are all >= i, with every
  // seat below i outside the prefix already committed as a knight.
  std::function<void(int)> visit = [&](int i) {
    if (out.size() >= k) return;
    if (is_consistent(graph, params, prefix)) out.push_back(prefix);
    if (static_cast<int>(prefix.size()) == params.ell) return;
    const std::size_t base = solver.mark();
    for (int j = i; j <= params.n && out.size() < k; ++j) {
      const std::size_t before_j = solver.mark();
      if (!solver.assign(j, kSpyVal)) {
        solver.undo(before_j);
      } else {
        if (solver.feasible()) {
          prefix.push_back(j);
          visit(j + 1);
          prefix.pop_back();
        }
        solver.undo(before_j);
      }
      // Later branches require j to be a knight.
      if (!solver.assign(j, kKnightVal)) break;
    }
    solver.undo(base);
  };
  if (solver.feasible()) visit(1);
  return out;
}

std::vector<SpySet> brute_force_sets(const QuestionGraph& graph,
                                     const GameParams& params) {
  if (params.n > 20) {
    throw ResourceError("brute force enumeration is limited to n <= 20");
  }
  struct Bits {
    std::uint32_t asker;
    std::uint32_t subject;
    bool accuses;
  };
  std::vector<Bits> edges;
  for (const Entry& e : graph.entries()) {
    edges.push_back({1u << (e.asker - 1), 1u << (e.subject - 1),
                     e.answer == Answer::kSpy});
  }
  std::vector<SpySet> out;
  const std::uint32_t end = 1u << params.n;
  for (std::uint32_t mask = 0; mask < end; ++mask) {
    if (std::popcount(mask) > params.ell) continue;
    bool ok = true;
    for (const Bits& b : edges) {
      if (mask & b.asker) continue;
      if (b.accuses != static_cast<bool>(mask & b.subject)) {
        ok = false;
        break;
      }
    }
    if (!ok) continue;
    SpySet set;
    for (int i = 0; i < params.n; ++i) {
      if (mask & (1u << i)) set.push_back(i + 1);
    }
    out.push_back(std::move(set));
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::string_view to_string(Verdict::Kind kind) {
  switch (kind) {
    case Verdict::Kind::kAccepted:
      return "accepted";
    case Verdict::Kind::kRefuted:
      return "refuted";
    case Verdict::Kind::kInconsistent:
      return "inconsistent";
  }
  return "?";
}

Verdict adjudicate(const QuestionGraph& graph, const GameParams& params,
                   const SpySet& claim, const SolverBudget& budget) {
  const SpySet normalized = normalize(claim);
  for (int s : normalized) {
    if (s < 1 || s > params.n) throw ParameterError("claim seat out of range");
  }
  const std::vector<SpySet> first = lex_smallest_sets(graph, params, 2, budget);
  if (first.empty()) {
    throw CorruptedGameError(
        "no assignment with at most l spies explains the answers");
  }
  Verdict v;
  if (!is_consistent(graph, params, normalized)) {
    v.kind = Verdict::Kind::kInconsistent;
    v.witness = first.front();
    return v;
  }
  for (const SpySet& s : first) {
    if (s != normalized) {
      v.kind = Verdict::Kind::kRefuted;
      v.witness = s;
      return v;
    }
  }
  v.kind = Verdict::Kind::kAccepted;
  return v;
}

}  // namespace knights
