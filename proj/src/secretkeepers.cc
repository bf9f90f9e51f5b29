#include "knights/secretkeepers.h"

#include <algorithm>
#include <charconv>

#include "knights/consistency.h"
#include "knights/errors.h"

namespace knights {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

SpyBehavior SpyBehavior::parse(std::string_view id) {
  if (id == "truthful") return truthful();
  if (id == "knavish") return knavish();
  if (id == "spyish") return spyish();
  constexpr std::string_view kRandomPrefix = "random:";
  if (id.substr(0, kRandomPrefix.size()) == kRandomPrefix) {
    const std::string_view digits = id.substr(kRandomPrefix.size());
    std::uint64_t seed = 0;
    const auto [end, ec] =
        std::from_chars(digits.data(), digits.data() + digits.size(), seed);
    if (ec == std::errc() && end == digits.data() + digits.size() &&
        !digits.empty()) {
      return random(seed);
    }
  }
  throw ParameterError("unknown spy behaviour \"" + std::string(id) + "\"");
}

std::string SpyBehavior::id() const {
  switch (kind) {
    case Kind::kTruthful:
      return "truthful";
    case Kind::kKnavish:
      return "knavish";
    case Kind::kSpyish:
      return "spyish";
    case Kind::kRandom:
      return "random:" + std::to_string(seed);
  }
  return "?";
}

Answer behavior_answer(const Room& room, const SpyBehavior& behavior,
                       int asker, int subject) {
  const Answer truth = truthful_answer(room.identity(subject));
  if (!room.is_spy(asker)) return truth;
  switch (behavior.kind) {
    case SpyBehavior::Kind::kTruthful:
      return truth;
    case SpyBehavior::Kind::kKnavish:
      return negate(truth);
    case SpyBehavior::Kind::kSpyish:
      return Answer::kSpy;
    case SpyBehavior::Kind::kRandom: {
      const std::uint64_t h = splitmix64(
          splitmix64(behavior.seed) ^
          (static_cast<std::uint64_t>(asker) << 32 |
           static_cast<std::uint32_t>(subject)));
      return (h >> 63) ? Answer::kSpy : Answer::kKnight;
    }
  }
  return truth;
}

Answer ScriptedSource::answer(const QuestionGraph&, int asker, int subject) {
  if (!room_.is_spy(asker)) return truthful_answer(room_.identity(subject));
  return spy_answer_(asker, subject);
}

MoleState::MoleState(GameParams params)
    : params_(params), transcript_(params.n), comp_index_(params.n + 1, -1) {
  params_.validate();
  if (params_.ell == 1) finish_phase_one();
}

namespace {

// Connected components of the accusation graph, ignoring direction.
struct Partition {
  std::vector<std::vector<int>> components;
  std::vector<int> outsiders;
  std::vector<int> index;  // seat -> component, -1 for outsiders
};

Partition partition(const QuestionGraph& g, int n) {
  Partition out;
  out.index.assign(n + 1, -1);
  std::vector<int> parent(n + 1);
  for (int i = 0; i <= n; ++i) parent[i] = i;
  std::function<int(int)> find = [&](int x) {
    return parent[x] == x ? x : parent[x] = find(parent[x]);
  };
  std::vector<char> involved(n + 1, 0);
  for (const Entry& e : g.entries()) {
    involved[e.asker] = involved[e.subject] = 1;
    parent[find(e.asker)] = find(e.subject);
  }
  std::vector<int> root_to_comp(n + 1, -1);
  for (int i = 1; i <= n; ++i) {
    if (!involved[i]) {
      out.outsiders.push_back(i);
      continue;
    }
    const int r = find(i);
    if (root_to_comp[r] < 0) {
      root_to_comp[r] = static_cast<int>(out.components.size());
      out.components.emplace_back();
    }
    out.index[i] = root_to_comp[r];
    out.components[root_to_comp[r]].push_back(i);
  }
  return out;
}

}  // namespace

void MoleState::finish_phase_one() {
  phase_ = Phase::kTwo;
  Partition p = partition(transcript_, params_.n);
  components_ = std::move(p.components);
  outsiders_ = std::move(p.outsiders);
  comp_index_ = std::move(p.index);
  kept_.assign(components_.size(), std::nullopt);
}

int MoleState::component_of(int seat) const { return comp_index_.at(seat); }

Answer MoleState::answer(int asker, int subject) {
  transcript_.check_move(asker, subject);
  Answer a = Answer::kSpy;
  if (phase_ == Phase::kTwo) {
    const int c = component_of(subject);
    if (c < 0) {
      a = Answer::kKnight;
    } else if (kept_[c]) {
      a = *kept_[c] == subject ? Answer::kKnight : Answer::kSpy;
    } else {
      const auto& members = components_[c];
      const bool others_asked =
          std::all_of(members.begin(), members.end(), [&](int m) {
            return m == subject || asked2_.count(m) > 0;
          });
      if (others_asked) {
        kept_[c] = subject;
        a = Answer::kKnight;
      }
    }
    asked2_.insert(subject);
  }
  transcript_.append(asker, subject, a);
  if (phase_ == Phase::kOne && answered() == params_.ell - 1) {
    finish_phase_one();
  }
  return a;
}

SpySet MoleState::spies_with_kept(const std::vector<int>& kept) const {
  SpySet s;
  for (std::size_t i = 0; i < components_.size(); ++i) {
    for (int m : components_[i]) {
      if (m != kept[i]) s.push_back(m);
    }
  }
  return normalize(std::move(s));
}

MoleState::Witnesses MoleState::witnesses() const {
  Witnesses w;
  if (phase_ == Phase::kOne) {
    // Every answer so far is "spy": keep one knight per current component,
    // preferring seat 1, and let S* toggle seat 1.
    const Partition p = partition(transcript_, params_.n);
    w.x = 1;
    for (std::size_t i = 0; i < p.components.size(); ++i) {
      const int kept = p.index[1] == static_cast<int>(i) ? 1 : p.components[i][0];
      for (int m : p.components[i]) {
        if (m != kept) w.s.push_back(m);
      }
    }
    w.s = normalize(std::move(w.s));
    SpySet star = w.s;
    star.push_back(1);
    w.s_star = normalize(std::move(star));
    return w;
  }
  std::vector<int> kept(components_.size(), 0);
  for (std::size_t i = 0; i < components_.size(); ++i) {
    if (kept_[i]) {
      kept[i] = *kept_[i];
      continue;
    }
    for (int m : components_[i]) {
      if (!asked2_.count(m)) {
        kept[i] = m;
        break;
      }
    }
  }
  for (int seat = 1; seat <= params_.n; ++seat) {
    if (!asked2_.count(seat)) {
      w.x = seat;
      break;
    }
  }
  if (w.x) {
    const int c = component_of(*w.x);
    if (c >= 0) kept[c] = *w.x;
  }
  w.s = spies_with_kept(kept);
  if (w.x) {
    SpySet star = w.s;
    const auto it = std::find(star.begin(), star.end(), *w.x);
    if (it == star.end()) {
      star.push_back(*w.x);
    } else {
      star.erase(it);
    }
    w.s_star = normalize(std::move(star));
  }
  return w;
}

std::optional<SpySet> MoleState::refute(const SpySet& claim) const {
  const SpySet normalized = normalize(claim);
  const Witnesses w = witnesses();
  for (const SpySet* candidate : {&w.s, w.s_star ? &*w.s_star : nullptr}) {
    if (candidate && *candidate != normalized &&
        is_consistent(transcript_, params_, *candidate)) {
      return *candidate;
    }
  }
  const Verdict v = adjudicate(transcript_, params_, normalized);
  if (v.accepted()) return std::nullopt;
  return v.witness;
}

std::pair<Answer, MoleState> mole_answer(const MoleState& state, int asker,
                                         int subject) {
  MoleState next = state;
  const Answer a = next.answer(asker, subject);
  return {a, std::move(next)};
}

std::optional<SpySet> mole_refute(const MoleState& state, const SpySet& claim) {
  return state.refute(claim);
}

KeeperSpec KeeperSpec::parse(std::string_view id) {
  if (id == "mole") return KeeperSpec{true, SpyBehavior{}};
  return KeeperSpec{false, SpyBehavior::parse(id)};
}

std::string KeeperSpec::id() const { return mole ? "mole" : behavior.id(); }

}  // namespace knights
