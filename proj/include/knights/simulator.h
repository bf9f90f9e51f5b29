#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace knights {

enum class EllRule { kHalf, kQuarter, kExplicit };  // floor((n-1)/2), floor(n/4)

EllRule parse_ell_rule(std::string_view text);
int ell_for(EllRule rule, int n, int explicit_ell);

struct SimConfig {
  std::string strategy = "spider";
  std::string behavior = "spyish";
  std::vector<int> ns;
  EllRule ell_rule = EllRule::kHalf;
  int ell = 0;               // kExplicit only
  std::optional<int> spies;  // default s = l
  int trials = 1000;
  std::uint64_t seed = 1;
  int threads = 0;  // 0: hardware concurrency

  void validate() const;
};

struct SimPoint {
  int n = 0;
  int ell = 0;
  int spies = 0;
  std::string strategy;
  std::string behavior;
  int trials = 0;
  double mean = 0;
  double stddev = 0;
  double std_error = 0;
  int min = 0;
  int max = 0;
  // Trials that asked more than n + l - 1 questions.
  int violations = 0;
  std::uint64_t seed = 0;
  std::map<int, std::int64_t> histogram;  // questions -> trials

  // Average-case target n + 3l/4 (reported, not enforced).
  bool within_three_quarters() const { return mean <= n + 0.75 * ell; }
};

struct LineFit {
  double slope = 0;
  double intercept = 0;
};

struct SimReport {
  std::vector<SimPoint> points;
  std::optional<LineFit> fit;  // over (n, mean) when >= 2 distinct n
};

// Seed of trial `trial` at size n, derived from the master seed alone.
std::uint64_t trial_seed(std::uint64_t master, int n, int trial);

// Runs every trial on a fresh room; identities are checked on every trial.
// Trials run on a thread pool; the report does not depend on scheduling.
SimReport run_batch(const SimConfig& config);

// Ordinary least squares; ParameterError with fewer than two distinct x.
LineFit fit_gradient(const std::vector<std::pair<double, double>>& points);

std::string csv_header();
std::string to_csv(const SimReport& report);
std::string histogram_csv(const SimPoint& point);

}  // namespace knights
