#include "knights/interrogators.h"

#include <algorithm>
#include <bit>
#include <map>
#include <set>

#include "knights/consistency.h"
#include "knights/errors.h"

namespace knights {

namespace {

constexpr std::int8_t kUnknown = -1;
constexpr std::int8_t kK = 0;
constexpr std::int8_t kS = 1;

std::int8_t from_answer(Answer a) { return a == Answer::kKnight ? kK : kS; }

int floor_log2(int k) {
  int r = 0;
  while (k > 1) {
    k >>= 1;
    ++r;
  }
  return r;
}

// Identity table indexed by seat, -1 while unknown.
class Knowledge {
 public:
  explicit Knowledge(int n) : v_(n + 1, kUnknown) {}
  std::int8_t& operator[](int seat) { return v_[seat]; }
  std::int8_t operator[](int seat) const { return v_[seat]; }
  void set_all(const std::vector<int>& seats, std::int8_t value) {
    for (int s : seats) v_[s] = value;
  }
  std::vector<Identity> finish() const {
    std::vector<Identity> out;
    for (std::size_t i = 1; i < v_.size(); ++i) {
      if (v_[i] == kUnknown) {
        throw InternalError("strategy ended with seat " + std::to_string(i) +
                            " unidentified");
      }
      out.push_back(v_[i] == kK ? Identity::kKnight : Identity::kSpy);
    }
    return out;
  }

 private:
  std::vector<std::int8_t> v_;
};

struct SpiderVote {
  int candidate = 0;
  std::vector<int> supporters;
  std::vector<int> accusers;
};

// Spider Step 1 from seat `next`: returns the accepted candidate's vote and
// appends rejected ones. `threshold` is reduced on every rejection.
SpiderVote spider_step1(Interrogation& q, int& next, int& threshold,
                        std::vector<SpiderVote>& rejected) {
  while (true) {
    if (next > q.n()) throw InternalError("spider ran out of candidates");
    SpiderVote v;
    v.candidate = next++;
    while (true) {
      if (static_cast<int>(v.supporters.size()) >= threshold) return v;
      if (next > q.n()) throw InternalError("spider ran out of voters");
      const int voter = next++;
      if (q.ask(voter, v.candidate) == Answer::kKnight) {
        v.supporters.push_back(voter);
      } else {
        v.accusers.push_back(voter);
      }
      if (v.accusers.size() == v.supporters.size() + 1) {
        threshold -= static_cast<int>(v.accusers.size());
        rejected.push_back(std::move(v));
        break;
      }
    }
  }
}

// Step 2: the knight k identifies fresh seats and rejected candidates, in
// ascending seat order.
void spider_step2(Interrogation& q, int k, int next,
                  const std::vector<int>& rejected_seats, Knowledge& id) {
  std::vector<int> targets(rejected_seats);
  for (int s = next; s <= q.n(); ++s) targets.push_back(s);
  std::sort(targets.begin(), targets.end());
  for (int s : targets) id[s] = from_answer(q.ask(k, s));
}

void ask_all(Interrogation& q, int k, const std::vector<int>& seats,
             Knowledge& id) {
  for (int s : seats) id[s] = from_answer(q.ask(k, s));
}

}  // namespace

Interrogation::Interrogation(GameParams params, AnswerSource& source)
    : params_(params), source_(&source), transcript_(params.n) {
  params_.validate();
}

Answer Interrogation::ask(int asker, int subject) {
  transcript_.check_move(asker, subject);
  const Answer a = source_->answer(transcript_, asker, subject);
  transcript_.append(asker, subject, a);
  return a;
}

SpySet StrategyResult::spies() const {
  SpySet out;
  for (std::size_t i = 0; i < identities.size(); ++i) {
    if (identities[i] == Identity::kSpy) out.push_back(static_cast<int>(i) + 1);
  }
  return out;
}

StrategyResult spider(Interrogation& q) {
  Knowledge id(q.n());
  int next = 1;
  int threshold = q.ell();
  std::vector<SpiderVote> rejected;
  const SpiderVote acc = spider_step1(q, next, threshold, rejected);
  const int k = acc.candidate;
  if (static_cast<int>(acc.supporters.size()) != threshold) {
    throw InternalError("accepted candidate without exactly threshold support");
  }
  StrategyResult result;
  result.accepted = k;
  result.step1_questions = q.questions();
  id[k] = kK;

  std::vector<int> rejected_seats;
  for (const SpiderVote& r : rejected) rejected_seats.push_back(r.candidate);
  result.rejected_candidates = rejected_seats;
  spider_step2(q, k, next, rejected_seats, id);

  for (const SpiderVote& r : rejected) {
    if (id[r.candidate] == kK) {
      ++result.rejected_knights;
      id.set_all(r.accusers, kS);
      ask_all(q, k, r.supporters, id);
    } else {
      id.set_all(r.supporters, kS);
      ask_all(q, k, r.accusers, id);
    }
  }
  ask_all(q, k, acc.supporters, id);
  id.set_all(acc.accusers, kS);
  result.identities = id.finish();
  return result;
}

// Asks 1 about 2, 2 about 3, ... If l supports arrive, l+1 is a knight and
// is asked about 1 to close a cycle. An accusation by t > 1 turns t into a
// candidate backed by the whole chain below it: t is accepted once
// (t-1) + x >= l (a spy t would make the whole chain spies) and rejected
// once accusers reach (t-2) + x + 1, certifying a+1 spies among 2(a+1)
// people. The rest is the ordinary spider.
StrategyResult modified_spider(Interrogation& q) {
  const int n = q.n();
  const int ell = q.ell();
  Knowledge id(n);
  StrategyResult result;

  int t = 0;
  for (int i = 1; i <= ell; ++i) {
    if (q.ask(i, i + 1) == Answer::kSpy) {
      t = i;
      break;
    }
  }
  if (t == 0) {
    const int k = ell + 1;
    result.accepted = k;
    result.step1_questions = q.questions();
    id[k] = kK;
    if (q.ask(k, 1) == Answer::kKnight) {
      for (int s = 1; s <= ell; ++s) id[s] = kK;
    } else {
      id[1] = kS;
      for (int s = 2; s <= ell; ++s) id[s] = from_answer(q.ask(k, s));
    }
    for (int s = ell + 2; s <= n; ++s) id[s] = from_answer(q.ask(k, s));
    result.identities = id.finish();
    return result;
  }

  std::vector<int> chain_below;  // 1..t-1
  for (int s = 1; s < t; ++s) chain_below.push_back(s);

  int threshold = ell;
  std::vector<SpiderVote> rejected;
  std::optional<SpiderVote> first;  // the modified spider around t
  bool first_rejected = false;
  int next = t + 2;

  if (t == 1) {
    // 1 accused 2: the ordinary spider with candidate 2 already rejected.
    SpiderVote v;
    v.candidate = 2;
    v.accusers.push_back(1);
    threshold -= 1;
    rejected.push_back(v);
  } else {
    SpiderVote v;
    v.candidate = t;
    while (true) {
      const int x = static_cast<int>(v.supporters.size());
      if ((t - 1) + x >= threshold) break;
      if (next > n) throw InternalError("modified spider ran out of voters");
      const int voter = next++;
      if (q.ask(voter, t) == Answer::kKnight) {
        v.supporters.push_back(voter);
      } else {
        v.accusers.push_back(voter);
      }
      const int a = static_cast<int>(v.accusers.size());
      if (a == (t - 2) + static_cast<int>(v.supporters.size()) + 1) {
        threshold -= a + 1;
        first_rejected = true;
        break;
      }
    }
    first = v;
  }

  SpiderVote acc;
  if (first && !first_rejected) {
    acc = *first;
  } else {
    acc = spider_step1(q, next, threshold, rejected);
  }
  const int k = acc.candidate;
  result.accepted = k;
  result.step1_questions = q.questions();
  id[k] = kK;

  std::vector<int> rejected_seats;
  for (const SpiderVote& r : rejected) rejected_seats.push_back(r.candidate);
  if (first_rejected) rejected_seats.push_back(t);
  result.rejected_candidates = rejected_seats;
  spider_step2(q, k, next, rejected_seats, id);

  auto bisect_below = [&] {
    const ChainIdentification c = chain_identify(chain_below, k, q);
    for (std::size_t i = 0; i < chain_below.size(); ++i) {
      id[chain_below[i]] = c.identities[i] == Identity::kKnight ? kK : kS;
    }
  };
  // A knight t: t+1 and the accusers are spies, the supporters and the
  // chain below remain.
  auto knight_t = [&](const SpiderVote& v) {
    id[t + 1] = kS;
    id.set_all(v.accusers, kS);
    ask_all(q, k, v.supporters, id);
    bisect_below();
  };

  if (first_rejected) {
    if (id[t] == kK) {
      ++result.rejected_knights;
      knight_t(*first);
    } else {
      id.set_all(chain_below, kS);
      id.set_all(first->supporters, kS);
      id[t + 1] = from_answer(q.ask(k, t + 1));
      ask_all(q, k, first->accusers, id);
    }
  }
  for (const SpiderVote& r : rejected) {
    if (id[r.candidate] == kK) {
      ++result.rejected_knights;
      id.set_all(r.accusers, kS);
      ask_all(q, k, r.supporters, id);
    } else {
      id.set_all(r.supporters, kS);
      ask_all(q, k, r.accusers, id);
    }
  }
  if (first && !first_rejected) {
    knight_t(acc);
  } else {
    ask_all(q, k, acc.supporters, id);
    id.set_all(acc.accusers, kS);
  }
  result.identities = id.finish();
  return result;
}

ChainIdentification chain_identify(
    const std::vector<int>& chain, int knight,
    const std::function<Answer(int asker, int subject)>& ask) {
  ChainIdentification out;
  const int k = static_cast<int>(chain.size());
  if (k == 0) return out;
  std::vector<char> asked(k, 0);
  int lo = 0;  // the boundary b (number of spies) lies in [lo, hi]
  int hi = k;
  while (lo < hi) {
    const int mid = (lo + hi) / 2;
    ++out.questions;
    asked[mid] = 1;
    if (ask(knight, chain[mid]) == Answer::kKnight) {
      hi = mid;
    } else {
      lo = mid + 1;
    }
  }
  for (int i = 0; i < k; ++i) {
    out.identities.push_back(i < lo ? Identity::kSpy : Identity::kKnight);
  }
  // Short searches spend the rest of the floor(log2 k) + 1 questions checking
  // the members nearest the boundary; a contradiction means the chain was not
  // a spy prefix followed by a knight suffix.
  const int bound = std::bit_width(static_cast<unsigned>(k));
  for (int d = 0; out.questions < bound && d < k; ++d) {
    for (const int i : {lo - 1 - d, lo + d}) {
      if (out.questions == bound || i < 0 || i >= k || asked[i]) continue;
      ++out.questions;
      asked[i] = 1;
      if (as_identity(ask(knight, chain[i])) != out.identities[i]) {
        throw InternalError("chain_identify: chain is not a spy prefix and knight suffix");
      }
    }
  }
  return out;
}

ChainIdentification chain_identify(const std::vector<int>& chain, int knight,
                                   Interrogation& q) {
  for (std::size_t i = 0; i + 1 < chain.size(); ++i) {
    const auto a = q.transcript().find(chain[i], chain[i + 1]);
    if (!a || *a != Answer::kKnight) {
      throw InternalError("chain_identify: " + std::to_string(chain[i]) +
                          " did not support " + std::to_string(chain[i + 1]));
    }
  }
  return chain_identify(chain, knight,
                        [&](int asker, int subject) { return q.ask(asker, subject); });
}

namespace {

// Chain Building. Chains are stored bottom to top: every member supported
// the next, so the top (the head) is supported transitively by the rest.
class ChainBuilder {
 public:
  explicit ChainBuilder(Interrogation& q)
      : q_(q), n_(q.n()), ell_(q.ell()), id_(q.n()), budget_(q.ell()) {}

  StrategyResult run() {
    phase_a();
    link();
    phase_b();
    StrategyResult r;
    r.accepted = knight_;
    r.identities = id_.finish();
    return r;
  }

 private:
  using Chain = std::vector<int>;
  struct Component {
    Chain head_chain;
    std::vector<Chain> supporters;
    std::vector<Chain> accusers;
  };

  // Each question: the current head asks about the lowest fresh seat.
  // Support extends the chain; an accusation discards {head, accused}
  // (at least one spy) and closes the chain.
  void phase_a() {
    Chain cur;
    while (fresh_ <= n_) {
      if (cur.empty()) {
        cur.push_back(fresh_++);
        if (fresh_ > n_) break;
      }
      if (static_cast<int>(cur.size()) - 1 >= budget_) break;
      const int g = fresh_++;
      const int t = cur.back();
      if (q_.ask(t, g) == Answer::kKnight) {
        cur.push_back(g);
      } else {
        if (cur.size() == 1) starts_.insert(t);
        cur.pop_back();
        pairs_.emplace_back(t, g);
        --budget_;
        if (!cur.empty()) chains_.push_back(std::move(cur));
        cur.clear();
      }
    }
    if (!cur.empty()) chains_.push_back(std::move(cur));
  }

  // A spider over chains. The candidate is the head of the longest chain;
  // heads of the other chains vote, weighted by chain length.
  void link() {
    while (true) {
      if (chains_.empty()) throw InternalError("chain building lost all chains");
      std::stable_sort(chains_.begin(), chains_.end(),
                       [](const Chain& a, const Chain& b) {
                         if (a.size() != b.size()) return a.size() > b.size();
                         return a.back() < b.back();
                       });
      Chain y = chains_.front();
      if (static_cast<int>(y.size()) - 1 >= budget_) {
        knight_ = y.back();
        kinfo_ = Component{y, {}, {}};
        chains_.erase(chains_.begin());
        return;
      }
      const int cand = y.back();
      std::vector<Chain> sup;
      std::vector<Chain> acc;
      int w = static_cast<int>(y.size());
      int a = 0;
      std::vector<Chain> voters(chains_.begin() + 1, chains_.end());
      chains_.clear();
      std::size_t vi = 0;
      bool accepted = false;
      bool rejected = false;
      while (vi < voters.size()) {
        if (w - 1 >= budget_) {
          accepted = true;
          break;
        }
        Chain& x = voters[vi++];
        if (q_.ask(x.back(), cand) == Answer::kKnight) {
          w += static_cast<int>(x.size());
          sup.push_back(x);
        } else {
          a += static_cast<int>(x.size());
          acc.push_back(x);
          if (a >= w) {
            // Trim the last accuser so exactly w + w people are discarded.
            const int extra = a - w;
            if (extra > 0) {
              Chain keep(x.begin(), x.begin() + extra);
              acc.back() = Chain(x.begin() + extra, x.end());
              chains_.push_back(std::move(keep));
            }
            budget_ -= w;
            rejected_.push_back(Component{y, sup, acc});
            rejected = true;
            break;
          }
        }
      }
      if (!rejected && !accepted) {
        if (w - 1 >= budget_) {
          accepted = true;
        } else {
          throw InternalError("chain building ran out of voters");
        }
      }
      for (std::size_t i = vi; i < voters.size(); ++i) {
        chains_.push_back(std::move(voters[i]));
      }
      if (!rejected && accepted) {
        knight_ = cand;
        kinfo_ = Component{y, sup, acc};
        return;
      }
    }
  }

  // Sound local deductions from the transcript.
  void propagate() {
    const auto& entries = q_.transcript().entries();
    bool changed = true;
    while (changed) {
      changed = false;
      for (const Entry& e : entries) {
        const std::int8_t va = id_[e.asker];
        const std::int8_t vb = id_[e.subject];
        if (va == kK && vb == kUnknown) {
          id_[e.subject] = from_answer(e.answer);
          changed = true;
        } else if (vb != kUnknown && va == kUnknown &&
                   from_answer(e.answer) != vb) {
          id_[e.asker] = kS;
          changed = true;
        }
      }
      int spies = 0;
      for (int i = 1; i <= n_; ++i) spies += id_[i] == kS;
      if (spies == ell_) {
        for (int i = 1; i <= n_; ++i) {
          if (id_[i] == kUnknown) {
            id_[i] = kK;
            changed = true;
          }
        }
      }
    }
  }

  void ask(int x) {
    if (id_[x] != kUnknown) return;
    const auto prior = q_.transcript().find(knight_, x);
    id_[x] = from_answer(prior ? *prior : q_.ask(knight_, x));
    propagate();
  }

  bool unresolved(const Chain& c) const {
    return std::any_of(c.begin(), c.end(),
                       [&](int x) { return id_[x] == kUnknown; });
  }

  // Questions still owed after the current chain. Lazily: one per other
  // unresolved chain, two per pair whose accuser began its chain (both
  // still unknown), one per other unresolved pair, one per fresh seat.
  // Pessimistically: a full search per chain and two per open pair.
  int need(const Chain* current, bool pessimistic = false) const {
    int t = 0;
    auto count_chain = [&](const Chain& c) {
      if (&c == current || !unresolved(c)) return;
      if (!pessimistic) {
        ++t;
        return;
      }
      int u = 0;
      for (int x : c) u += id_[x] == kUnknown;
      t += floor_log2(u) + 1;
    };
    for (const Chain& c : chains_) count_chain(c);
    for (const Chain& c : kinfo_.supporters) count_chain(c);
    for (const auto& [acc, g] : pairs_) {
      const bool ka = id_[acc] != kUnknown;
      const bool kg = id_[g] != kUnknown;
      if (ka && kg) continue;
      t += ((pessimistic || starts_.count(acc)) && !ka && !kg) ? 2 : 1;
    }
    for (int x = fresh_; x <= n_; ++x) t += id_[x] == kUnknown;
    return t;
  }

  // Boundary search on a chain with what is already known. Probing the
  // bottom first costs at most one extra question and settles the whole
  // chain when the bottom is a knight. It is used for the knight's own
  // chain when the budget allows the worst case, and as a gamble whenever
  // the plain search could overrun the budget.
  void bisect(const Chain& chain, bool force_bottom) {
    int lo = 0;
    int hi = static_cast<int>(chain.size());
    int unknown = 0;
    for (int x : chain) unknown += id_[x] == kUnknown;
    const int own = unknown ? floor_log2(unknown) + 1 : 0;
    const int limit = n_ + ell_ - 1 - q_.questions();
    // Worst case of probing the bottom first: it only costs more than the
    // plain search when `unknown` is a power of two.
    const int bottom_cost = 1 + (unknown > 1 ? floor_log2(unknown - 1) + 1 : 0);
    const bool bottom_affordable =
        bottom_cost <= own || need(&chain, true) + bottom_cost <= limit;
    if (((force_bottom && bottom_affordable) || need(&chain) + own > limit) &&
        unknown > 0) {
      ask(chain[0]);
      if (id_[chain[0]] == kK) {
        hi = 0;
      } else {
        lo = 1;
      }
    }
    while (lo < hi) {
      const int mid = (lo + hi) / 2;
      const int x = chain[mid];
      ask(x);
      if (id_[x] == kK) {
        hi = mid;
      } else {
        lo = mid + 1;
      }
    }
    for (int i = 0; i < static_cast<int>(chain.size()); ++i) {
      id_[chain[i]] = i < lo ? kS : kK;
    }
    propagate();
  }

  void mark_spies(const std::vector<Chain>& chains) {
    for (const Chain& c : chains) id_.set_all(c, kS);
  }

  void phase_b() {
    id_[knight_] = kK;
    const Chain below(kinfo_.head_chain.begin(), kinfo_.head_chain.end() - 1);
    bisect(below, true);
    for (const Chain& c : kinfo_.supporters) bisect(c, false);
    mark_spies(kinfo_.accusers);
    propagate();
    for (int x = fresh_; x <= n_; ++x) ask(x);
    for (auto it = rejected_.rbegin(); it != rejected_.rend(); ++it) {
      const int c = it->head_chain.back();
      ask(c);
      if (id_[c] == kK) {
        bisect(Chain(it->head_chain.begin(), it->head_chain.end() - 1), false);
        mark_spies(it->accusers);
        for (const Chain& s : it->supporters) bisect(s, false);
      } else {
        id_.set_all(it->head_chain, kS);
        mark_spies(it->supporters);
        for (const Chain& s : it->accusers) bisect(s, false);
      }
      propagate();
    }
    for (const Chain& c : chains_) bisect(c, false);
    for (auto it = pairs_.rbegin(); it != pairs_.rend(); ++it) {
      propagate();
      const auto [t, g] = *it;
      ask(g);
      if (id_[g] == kK) id_[t] = kS;
      ask(t);
    }
    propagate();
  }

  Interrogation& q_;
  int n_;
  int ell_;
  Knowledge id_;
  int budget_;
  int fresh_ = 1;
  std::vector<Chain> chains_;
  std::vector<std::pair<int, int>> pairs_;  // (accuser, accused)
  std::set<int> starts_;
  std::vector<Component> rejected_;
  int knight_ = 0;
  Component kinfo_;
};

}  // namespace

StrategyResult chain_building(Interrogation& q) {
  return ChainBuilder(q).run();
}

// Polls the lowest unidentified seat with every voter not known to be a
// spy. With b = l - (known spies), a knight draws at most b accusations and
// a spy draws more, so the verdict is sound and the minority voters are
// exposed. The first knight found is asked about everyone left.
StrategyResult majority_baseline(Interrogation& q) {
  const int n = q.n();
  Knowledge id(n);
  int known_spies = 0;
  int k = 0;
  while (k == 0) {
    int target = 1;
    while (id[target] != kUnknown) ++target;
    std::vector<int> yes;
    std::vector<int> no;
    for (int v = 1; v <= n; ++v) {
      if (v == target || id[v] == kS) continue;
      (q.ask(v, target) == Answer::kKnight ? yes : no).push_back(v);
    }
    if (static_cast<int>(no.size()) <= q.ell() - known_spies) {
      id[target] = kK;
      k = target;
      id.set_all(no, kS);
      known_spies += static_cast<int>(no.size());
    } else {
      id[target] = kS;
      id.set_all(yes, kS);
      known_spies += 1 + static_cast<int>(yes.size());
    }
  }
  for (int s = 1; s <= n; ++s) {
    if (id[s] == kUnknown) id[s] = from_answer(q.ask(k, s));
  }
  StrategyResult r;
  r.accepted = k;
  r.identities = id.finish();
  return r;
}

const std::vector<std::string>& strategy_ids() {
  static const std::vector<std::string> ids = {"majority", "spider",
                                               "modified-spider",
                                               "chain-building"};
  return ids;
}

StrategyFn strategy_by_id(std::string_view id) {
  if (id == "majority") return majority_baseline;
  if (id == "spider") return spider;
  if (id == "modified-spider") return modified_spider;
  if (id == "chain-building") return chain_building;
  throw ParameterError("unknown strategy \"" + std::string(id) + "\"");
}

RunResult run_strategy(std::string_view id, const Room& room,
                       AnswerSource& source) {
  const StrategyFn fn = strategy_by_id(id);
  Interrogation q(room.params(), source);
  StrategyResult r = fn(q);
  if (r.identities != room.identities()) {
    throw InternalError(std::string(id) + " recovered the wrong identities");
  }
  const int bound = max_questions(room.params());
  if ((id == "spider" || id == "modified-spider") && q.questions() > bound) {
    throw InternalError(std::string(id) + " exceeded n + l - 1 questions");
  }
  if (id == "spider") {
    if (q.questions() != bound - r.rejected_knights) {
      throw InternalError("spider question count differs from n + l - 1 - r");
    }
    std::vector<int> asked(room.n() + 1, 0);
    for (const Entry& e : q.transcript().entries()) {
      if (room.is_spy(e.asker) && ++asked[e.asker] > 1) {
        throw InternalError("spider asked a spy twice");
      }
    }
    if (room.is_spy(r.accepted)) {
      throw InternalError("spider accepted a spy");
    }
  }
  RunResult out;
  out.transcript = q.transcript();
  out.identities = r.identities;
  out.rejected_knights = r.rejected_knights;
  out.detail = std::move(r);
  return out;
}

RunResult run_strategy(std::string_view id, const Room& room,
                       const SpyBehavior& behavior) {
  RoomSource source(room, behavior);
  return run_strategy(id, room, source);
}

RunResult spider_run(const Room& room, const SpyBehavior& behavior) {
  return run_strategy("spider", room, behavior);
}
RunResult spider_run(const Room& room, AnswerSource& source) {
  return run_strategy("spider", room, source);
}
RunResult modified_spider_run(const Room& room, const SpyBehavior& behavior) {
  return run_strategy("modified-spider", room, behavior);
}
RunResult chain_building_run(const Room& room, const SpyBehavior& behavior) {
  return run_strategy("chain-building", room, behavior);
}
RunResult majority_baseline_run(const Room& room, const SpyBehavior& behavior) {
  return run_strategy("majority", room, behavior);
}

namespace {

struct PendingQuestion {
  int asker;
  int subject;
};
struct Diverged {};

// Answers from a recorded transcript, in order.
class ReplaySource : public AnswerSource {
 public:
  explicit ReplaySource(const QuestionGraph& recorded) : recorded_(recorded) {}
  Answer answer(const QuestionGraph& transcript, int asker,
                int subject) override {
    const std::size_t i = transcript.size();
    if (i >= recorded_.size()) throw PendingQuestion{asker, subject};
    const Entry& e = recorded_.entries()[i];
    if (e.asker != asker || e.subject != subject) throw Diverged{};
    return e.answer;
  }

 private:
  const QuestionGraph& recorded_;
};

}  // namespace

OnlineInterrogator::OnlineInterrogator(std::string strategy_id)
    : id_(std::move(strategy_id)), fn_(strategy_by_id(id_)) {}

void OnlineInterrogator::claim_refuted(const SpySet& claim) {
  refuted_.push_back(normalize(claim));
}

Move OnlineInterrogator::next_move(const InterrogatorView& view) {
  ReplaySource source(view.transcript);
  try {
    Interrogation q(view.params, source);
    const StrategyResult r = fn_(q);
    if (q.questions() != static_cast<int>(view.transcript.size())) {
      return fallback(view);
    }
    const SpySet claim = r.spies();
    if (std::find(refuted_.begin(), refuted_.end(), claim) != refuted_.end()) {
      return fallback(view);
    }
    return Move::claim_set(claim);
  } catch (const PendingQuestion& p) {
    return Move::ask(p.asker, p.subject);
  } catch (const Diverged&) {
    return fallback(view);
  } catch (const InternalError&) {
    return fallback(view);
  }
}

Move OnlineInterrogator::fallback(const InterrogatorView& view) const {
  const auto sets = lex_smallest_sets(view.transcript, view.params, 2,
                                      service_budget());
  auto fresh_claim = [&](const SpySet& s) {
    return std::find(refuted_.begin(), refuted_.end(), s) == refuted_.end();
  };
  if (sets.size() == 1 && fresh_claim(sets.front())) {
    return Move::claim_set(sets.front());
  }
  for (int a = 1; a <= view.params.n; ++a) {
    for (int b = 1; b <= view.params.n; ++b) {
      if (a != b && !view.transcript.contains(a, b)) return Move::ask(a, b);
    }
  }
  if (sets.empty()) throw CorruptedGameError("no consistent spy set remains");
  return Move::claim_set(sets.front());
}

}  // namespace knights
