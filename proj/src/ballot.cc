#include "knights/ballot.h"

#include <bit>
#include <cmath>

#include "knights/errors.h"
#include "knights/interrogators.h"

namespace knights {

int Path::ups() const {
  int u = 0;
  for (int s : steps) u += s > 0;
  return u;
}

int Path::downs() const { return static_cast<int>(steps.size()) - ups(); }

std::vector<int> Path::heights() const {
  std::vector<int> h{start_height};
  h.reserve(steps.size() + 1);
  for (int s : steps) h.push_back(h.back() + s);
  return h;
}

Path path_from_string(std::string_view ud) {
  Path p;
  for (char c : ud) {
    if (c == 'U') {
      p.steps.push_back(1);
    } else if (c == 'D') {
      p.steps.push_back(-1);
    } else {
      throw ParameterError("path strings use only U and D");
    }
  }
  return p;
}

std::string to_string(const Path& path) {
  std::string out;
  for (int s : path.steps) out += s > 0 ? 'U' : 'D';
  return out;
}

int visits_from_above(const Path& path, int m) {
  int h = path.start_height;
  int visits = 0;
  for (int s : path.steps) {
    h += s;
    if (s < 0 && h == m) ++visits;
  }
  return visits;
}

void for_each_path(int k, int s, const std::function<void(const Path&)>& fn) {
  if (k < 0 || s < 0 || k + s > 30) {
    throw ParameterError("path enumeration needs 0 <= k, s and k + s <= 30");
  }
  const int len = k + s;
  Path p;
  p.steps.assign(len, 1);
  // Gosper's hack over the positions of the s downsteps.
  if (s == 0) {
    fn(p);
    return;
  }
  const std::uint32_t limit = 1u << len;
  for (std::uint32_t mask = (1u << s) - 1; mask < limit;) {
    for (int i = 0; i < len; ++i) p.steps[i] = (mask >> i) & 1u ? -1 : 1;
    fn(p);
    const std::uint32_t c = mask & (~mask + 1);
    const std::uint32_t r = mask + c;
    mask = (((r ^ mask) >> 2) / c) | r;
  }
}

Step1Trace step1_trace(
    const Room& room,
    const std::function<Answer(int asker, int subject)>& answer) {
  const int n = room.n();
  Step1Trace t;
  auto vote = [&](int voter, int candidate) {
    const Answer a = answer(voter, candidate);
    t.path.steps.push_back(a == truthful_answer(room.identity(candidate)) ? 1
                                                                          : -1);
    return a;
  };
  int next = 1;
  int threshold = room.params().ell;
  while (t.accepted == 0) {
    const int cand = next++;
    t.path.steps.push_back(room.is_spy(cand) ? -1 : 1);
    int sup = 0;
    int acc = 0;
    while (true) {
      if (sup >= threshold) {
        t.accepted = cand;
        t.accepted_step = static_cast<int>(t.path.steps.size());
        break;
      }
      if (next > n) throw InternalError("step 1 ran out of voters");
      if (vote(next++, cand) == Answer::kKnight) {
        ++sup;
      } else {
        ++acc;
      }
      if (acc == sup + 1) {
        threshold -= acc;
        if (!room.is_spy(cand)) ++t.rejected_knights;
        break;
      }
    }
  }
  while (next <= n) vote(next++, t.accepted);
  return t;
}

Path path_from_step1(
    const Room& room,
    const std::function<Answer(int asker, int subject)>& answer) {
  return step1_trace(room, answer).path;
}

Path path_from_step1(const Room& room, const SpyBehavior& behavior) {
  if (behavior.kind != SpyBehavior::Kind::kKnavish) {
    throw UnsupportedModeError(
        "the path encoding of step 1 is defined for knavish spies only");
  }
  return path_from_step1(room, [&](int asker, int subject) {
    return behavior_answer(room, behavior, asker, subject);
  });
}

bool rejected_knights_equals_visits(const Room& room) {
  const RunResult run = spider_run(room, SpyBehavior::knavish());
  return run.rejected_knights ==
         visits_from_above(path_from_step1(room), 0);
}

Path reflect_between_extremes(const Path& path, int m) {
  const std::vector<int> h = path.heights();
  int b = -1;
  int c = -1;
  for (int r = 0; r < static_cast<int>(h.size()); ++r) {
    if (h[r] == m) {
      if (b < 0) b = r;
      c = r;
    }
  }
  if (b < 0) {
    throw ParameterError("path never visits height " + std::to_string(m));
  }
  Path out = path;
  for (int r = b; r < c; ++r) out.steps[r] = -out.steps[r];
  return out;
}

Path reflect_first_visit(const Path& path) {
  const std::vector<int> h = path.heights();
  int d = -1;
  for (int r = 1; r < static_cast<int>(h.size()); ++r) {
    if (h[r] == -1) {
      d = r;
      break;
    }
  }
  if (d < 0) throw ParameterError("path never visits -1");
  Path out = path;
  for (int r = 0; r < d; ++r) out.steps[r] = -out.steps[r];
  out.start_height = -2 - path.start_height;
  return out;
}

BigInt binomial(int n, int k) {
  if (k < 0 || n < 0 || k > n) return 0;
  k = std::min(k, n - k);
  BigInt r = 1;
  for (int i = 1; i <= k; ++i) {
    r *= n - k + i;
    r /= i;
  }
  return r;
}

BigInt c_visits(int k, int s) {
  if (s < 0 || k < s) throw ParameterError("c(k, s) needs k >= s >= 0");
  BigInt total = 0;
  for (int r = 0; r < s; ++r) total += binomial(k + s, r);
  return total;
}

Rational expected_saved(int k, int s) {
  if (s < 0 || k <= s) {
    throw ParameterError("expected_saved needs k > s >= 0");
  }
  return Rational(c_visits(k, s), binomial(k + s, s));
}

SavingsDistribution distribution_saved(int k, int s,
                                       const SpyBehavior& behavior) {
  if (behavior.kind != SpyBehavior::Kind::kKnavish &&
      behavior.kind != SpyBehavior::Kind::kSpyish) {
    throw UnsupportedModeError("distribution_saved covers knavish and spyish");
  }
  if (s < 0 || k <= s) throw ParameterError("distribution_saved needs k > s");
  if (k + s > 22) {
    throw ResourceError("distribution_saved enumerates at most 22 seats");
  }
  SavingsDistribution d;
  if (s == 0 && k < 3) {
    d[0] = 1;
    return d;
  }
  const int n = k + s;
  const GameParams params = GameParams::make(n, std::max(s, 1));
  std::map<int, BigInt> tally;
  BigInt total = 0;
  for_each_path(k, s, [&](const Path& p) {
    SpySet spies;
    for (int i = 0; i < n; ++i) {
      if (p.steps[i] < 0) spies.push_back(i + 1);
    }
    const RunResult run = spider_run(Room::from_spies(params, spies), behavior);
    tally[run.rejected_knights] += 1;
    total += 1;
  });
  for (const auto& [q, count] : tally) d[q] = Rational(count, total);
  return d;
}

Rational mean(const SavingsDistribution& d) {
  Rational m = 0;
  for (const auto& [q, p] : d) m += p * q;
  return m;
}

double g_lower_bound(int ell, int n) {
  if (ell < 2 || n <= 2 * ell) {
    throw ParameterError("g_l(n) needs l >= 2 and n > 2l");
  }
  const long double base =
      1.0L - static_cast<long double>(ell) / static_cast<long double>(n - ell);
  return static_cast<double>(std::pow(base, ell + 1));
}

double h_value(int ell) {
  if (ell < 2) throw ParameterError("h(l) needs l >= 2");
  const long double base = 1.0L - 1.0L / static_cast<long double>(ell - 1);
  return static_cast<double>(std::pow(base, ell + 1));
}

}  // namespace knights
