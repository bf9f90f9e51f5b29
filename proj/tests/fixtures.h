#pragma once

#include <utility>
#include <vector>

#include "knights/core.h"
#include "knights/secretkeepers.h"

namespace knights::testing {

// A 21-person room with l = 10: 11 knights and 10 spies.
inline Room mixed21_room() {
  return Room::from_spies(GameParams::make(21, 10),
                          {1, 2, 7, 10, 11, 12, 13, 17, 18, 21});
}

// Knavish spies, except that spy 17 tells the truth about knight 15.
inline Answer mixed21_answer(const Room& room, int asker, int subject) {
  if (asker == 17 && subject == 15) return Answer::kKnight;
  return behavior_answer(room, SpyBehavior::knavish(), asker, subject);
}

// An 11-person room with l = 5 and four spies, three of them leading.
inline Room eleven_seat_room() {
  return Room::from_spies(GameParams::make(11, 5), {1, 2, 3, 6});
}

// A 16-question Mole game with n = 12, l = 5.
// Phase 1 forms the components {1, 2, 3} (a cycle) and {4, 5}; Phase 2
// supports a 7-cycle over the outsiders 6..12 and probes both components
// from seat 12, so that {2, 3, 5} is the only consistent spy set.
inline std::vector<std::pair<int, int>> two_component_questions() {
  return {{1, 2},  {2, 3},   {3, 1},   {4, 5},   {6, 7},  {7, 8},
          {8, 9},  {9, 10},  {10, 11}, {11, 12}, {12, 2}, {12, 3},
          {12, 1}, {12, 5},  {12, 4},  {12, 6}};
}

inline GameParams two_component_params() { return GameParams::make(12, 5); }

inline MoleState two_component_mole(int questions = 16) {
  MoleState mole(two_component_params());
  const auto qs = two_component_questions();
  for (int i = 0; i < questions; ++i) mole.answer(qs[i].first, qs[i].second);
  return mole;
}

// All subsets of {1..n} with at most `max_size` members.
inline std::vector<SpySet> subsets_up_to(int n, int max_size) {
  std::vector<SpySet> out;
  for (unsigned mask = 0; mask < (1u << n); ++mask) {
    if (__builtin_popcount(mask) > max_size) continue;
    SpySet s;
    for (int i = 0; i < n; ++i) {
      if (mask >> i & 1u) s.push_back(i + 1);
    }
    out.push_back(std::move(s));
  }
  return out;
}

}  // namespace knights::testing
