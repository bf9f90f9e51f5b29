#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

namespace knights {

// Size caps for the verification checks. Defaults are the acceptance sizes.
struct VerifyCaps {
  int spider_rooms_max_n = 10;          // spider count, exhaustive rooms
  int savings_max_sum = 9;      // k + s for exact distributions
  int visits_max_sum = 14;       // k + s for total visits to -1
  int reflection_max_sum = 12;       // k + s for histograms and reflections
  int path_rooms_max_n = 10;         // rooms for rejected knights == visits
  int closed_form_max_s = 20;    // c(s+1, s) identity
  int asymptotic_s = 200;        // expected_saved(s+1, s) vs sqrt law
  int trend_s = 300;             // expected_saved(2s, s) near 1
  int mole_max_n = 12;           // strategies against the mole
  int orders_exhaustive_n = 6;   // every question order, through turn n + l - 1
  int orders_full_game_n = 4;    // every question order, whole games
  int orders_random = 10000;     // random question orders
  int orders_random_max_n = 12;
  int solver_transcripts = 1000;  // per n in {6, 9, 12}
  int spider_sim_trials = 25000;
  int chain_sim_trials = 1000;
  int chain_max_k = 1024;
  std::uint64_t seed = 20240601;
  int threads = 0;  // 0: hardware concurrency
};

struct CheckResult {
  int criterion = 0;
  std::string id;
  bool pass = false;
  std::string detail;
  double seconds = 0;
  nlohmann::json data = nlohmann::json::object();
};

// Individual checks, numbered as in the acceptance list.
CheckResult check_spider_count(const VerifyCaps& caps);          // 1
CheckResult check_behaviour_independence(const VerifyCaps& caps);  // 2
CheckResult check_total_visits(const VerifyCaps& caps);          // 3
CheckResult check_reflections(const VerifyCaps& caps);           // 4
CheckResult check_rejected_visits(const VerifyCaps& caps);       // 5
CheckResult check_closed_forms(const VerifyCaps& caps);          // 6
CheckResult check_mole(const VerifyCaps& caps);                  // 7
CheckResult check_solver(const VerifyCaps& caps);                // 8
CheckResult check_spider_simulation(const VerifyCaps& caps);     // 9
CheckResult check_chain_building_slopes(const VerifyCaps& caps); // 10
CheckResult check_chain_bisection(const VerifyCaps& caps);       // 11

constexpr int kCriterionCount = 11;
CheckResult run_check(int criterion, const VerifyCaps& caps);

// Scopes: lemmas (3, 4, 5), theorem1 (2, 6), theorem2 (7), prop1 (1),
// solver (8), simulation (9, 10), chains (11), all.
std::vector<int> criteria_for_scope(std::string_view scope);
std::vector<CheckResult> verify(std::string_view scope, const VerifyCaps& caps);

nlohmann::json to_json(const CheckResult& r);

}  // namespace knights
