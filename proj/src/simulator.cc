#include "knights/simulator.h"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <mutex>
#include <set>
#include <sstream>
#include <thread>

#include "knights/errors.h"
#include "knights/interrogators.h"
#include "knights/secretkeepers.h"

namespace knights {

EllRule parse_ell_rule(std::string_view text) {
  if (text == "half") return EllRule::kHalf;
  if (text == "quarter") return EllRule::kQuarter;
  if (text == "explicit") return EllRule::kExplicit;
  throw ParameterError("l rule must be half, quarter or explicit");
}

int ell_for(EllRule rule, int n, int explicit_ell) {
  switch (rule) {
    case EllRule::kHalf:
      return (n - 1) / 2;
    case EllRule::kQuarter:
      return n / 4;
    case EllRule::kExplicit:
      return explicit_ell;
  }
  return explicit_ell;
}

void SimConfig::validate() const {
  strategy_by_id(strategy);
  const KeeperSpec keeper = KeeperSpec::parse(behavior);
  if (keeper.mole) {
    throw UnsupportedModeError(
        "simulations need identity-committed spies, not the mole");
  }
  if (trials < 1) throw ParameterError("trials must be at least 1");
  if (ns.empty()) throw ParameterError("no room sizes given");
  for (int n : ns) {
    const int l = ell_for(ell_rule, n, ell);
    GameParams::make(n, l);
    const int s = spies.value_or(l);
    if (s < 0 || s > l) throw ParameterError("spy count must be in [0, l]");
  }
}

std::uint64_t trial_seed(std::uint64_t master, int n, int trial) {
  std::uint64_t x = splitmix64(master);
  x = splitmix64(x ^ static_cast<std::uint64_t>(n));
  return splitmix64(x ^ (static_cast<std::uint64_t>(trial) << 20));
}

namespace {

SimPoint run_point(const SimConfig& config, int n, int threads) {
  SimPoint p;
  p.n = n;
  p.ell = ell_for(config.ell_rule, n, config.ell);
  p.spies = config.spies.value_or(p.ell);
  p.strategy = config.strategy;
  p.behavior = config.behavior;
  p.trials = config.trials;
  p.seed = config.seed;
  const GameParams params = GameParams::make(n, p.ell);
  const SpyBehavior base = SpyBehavior::parse(config.behavior);

  std::vector<int> counts(config.trials);
  std::atomic<int> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto worker = [&] {
    for (int t = next++; t < config.trials; t = next++) {
      try {
        const std::uint64_t seed = trial_seed(config.seed, n, t);
        SpyBehavior behavior = base;
        if (behavior.kind == SpyBehavior::Kind::kRandom) {
          behavior.seed = splitmix64(base.seed ^ seed);
        }
        const Room room = new_room(params, p.spies, seed);
        counts[t] = run_strategy(config.strategy, room, behavior).questions();
      } catch (...) {
        std::lock_guard<std::mutex> lock(failure_mutex);
        if (!failure) failure = std::current_exception();
        next = config.trials;
      }
    }
  };
  std::vector<std::thread> pool;
  for (int i = 0; i < threads; ++i) pool.emplace_back(worker);
  for (auto& th : pool) th.join();
  if (failure) std::rethrow_exception(failure);

  const int bound = max_questions(params);
  double sum = 0;
  p.min = counts.front();
  p.max = counts.front();
  for (int c : counts) {
    sum += c;
    p.min = std::min(p.min, c);
    p.max = std::max(p.max, c);
    ++p.histogram[c];
    if (c > bound) ++p.violations;
  }
  p.mean = sum / config.trials;
  double ss = 0;
  for (int c : counts) ss += (c - p.mean) * (c - p.mean);
  p.stddev = config.trials > 1 ? std::sqrt(ss / (config.trials - 1)) : 0.0;
  p.std_error = p.stddev / std::sqrt(static_cast<double>(config.trials));
  return p;
}

}  // namespace

SimReport run_batch(const SimConfig& config) {
  config.validate();
  int threads = config.threads > 0
                    ? config.threads
                    : static_cast<int>(std::thread::hardware_concurrency());
  threads = std::clamp(threads, 1, std::max(1, config.trials));
  SimReport report;
  std::vector<std::pair<double, double>> line;
  for (int n : config.ns) {
    report.points.push_back(run_point(config, n, threads));
    line.emplace_back(n, report.points.back().mean);
  }
  std::set<int> distinct(config.ns.begin(), config.ns.end());
  if (distinct.size() >= 2) report.fit = fit_gradient(line);
  return report;
}

LineFit fit_gradient(const std::vector<std::pair<double, double>>& points) {
  std::set<double> xs;
  for (const auto& [x, y] : points) xs.insert(x);
  if (xs.size() < 2) {
    throw ParameterError("a line fit needs at least two distinct x values");
  }
  double mx = 0;
  double my = 0;
  for (const auto& [x, y] : points) {
    mx += x;
    my += y;
  }
  mx /= static_cast<double>(points.size());
  my /= static_cast<double>(points.size());
  double sxy = 0;
  double sxx = 0;
  for (const auto& [x, y] : points) {
    sxy += (x - mx) * (y - my);
    sxx += (x - mx) * (x - mx);
  }
  LineFit f;
  f.slope = sxy / sxx;
  f.intercept = my - f.slope * mx;
  return f;
}

std::string csv_header() {
  return "n,l,s,strategy,behavior,trials,mean,stddev,min,max,violations,seed";
}

std::string to_csv(const SimReport& report) {
  std::ostringstream out;
  out.precision(10);
  out << csv_header() << '\n';
  for (const SimPoint& p : report.points) {
    out << p.n << ',' << p.ell << ',' << p.spies << ',' << p.strategy << ','
        << p.behavior << ',' << p.trials << ',' << p.mean << ',' << p.stddev
        << ',' << p.min << ',' << p.max << ',' << p.violations << ',' << p.seed
        << '\n';
  }
  return out.str();
}

std::string histogram_csv(const SimPoint& point) {
  std::ostringstream out;
  out << "questions,frequency\n";
  for (const auto& [q, f] : point.histogram) out << q << ',' << f << '\n';
  return out.str();
}

}  // namespace knights
