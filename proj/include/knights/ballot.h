#pragma once

#include <functional>
#include <map>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "knights/core.h"
#include "knights/secretkeepers.h"

namespace knights {

using BigInt = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

// A +1/-1 lattice path. Heights are measured from `start_height`.
struct Path {
  std::vector<int> steps;
  int start_height = 0;

  int ups() const;
  int downs() const;
  // heights()[r] is the height after r steps; heights()[0] = start_height.
  std::vector<int> heights() const;
  bool operator==(const Path&) const = default;
};

Path path_from_string(std::string_view ud);  // "UDU" -> +1,-1,+1
std::string to_string(const Path& path);

// Number of r with step r downwards and height after r steps equal to m.
int visits_from_above(const Path& path, int m);

// Calls fn for each of the C(k+s, s) paths with k ups and s downs,
// starting at height 0, in a fixed order.
void for_each_path(int k, int s, const std::function<void(const Path&)>& fn);

// Step 1 of the spider as a path: +1 for a candidate's implicit self-vote
// when he is a knight, +1 for every true statement, -1 otherwise. After
// acceptance the remaining fresh seats are asked about the accepted
// candidate, so the path always has n steps.
struct Step1Trace {
  Path path;
  int accepted = 0;           // accepted candidate
  int accepted_step = 0;      // steps taken when he was accepted
  int rejected_knights = 0;
};
Step1Trace step1_trace(const Room& room,
                       const std::function<Answer(int asker, int subject)>& answer);

// Knavish spies only (UnsupportedModeError otherwise): the path then has an
// upstep for every knight and a downstep for every spy.
Path path_from_step1(const Room& room,
                     const SpyBehavior& behavior = SpyBehavior::knavish());
Path path_from_step1(const Room& room,
                     const std::function<Answer(int asker, int subject)>& answer);

// spider r == visits to 0 from above, under knavish spies.
bool rejected_knights_equals_visits(const Room& room);

// Reflects the steps between the first and last visit to m in y = m.
// Throws ParameterError if the path never visits m.
Path reflect_between_extremes(const Path& path, int m);

// Reflects the prefix up to the first visit to -1 in y = -1; the result
// starts at height -2. Throws ParameterError if -1 is never visited.
Path reflect_first_visit(const Path& path);

BigInt binomial(int n, int k);

// Sum_{r=0}^{s-1} C(k+s, r); requires k >= s >= 0.
BigInt c_visits(int k, int s);

// c_visits(k, s) / C(k+s, s); requires k > s >= 0.
Rational expected_saved(int k, int s);

// Exact distribution of the number of rejected knights (questions saved)
// over all arrangements of k knights and s spies. Behaviour must be
// knavish or spyish; k + s is capped at 22.
using SavingsDistribution = std::map<int, Rational>;
SavingsDistribution distribution_saved(int k, int s,
                                       const SpyBehavior& behavior);
Rational mean(const SavingsDistribution& d);

// (1 - l/(n-l))^(l+1), for l >= 2 and n > 2l.
double g_lower_bound(int ell, int n);
// (1 - 1/(l-1))^(l+1), for l >= 2.
double h_value(int ell);

}  // namespace knights
