#include "knights/core.h"

#include <algorithm>
#include <random>
#include <sstream>

#include "knights/errors.h"

namespace knights {

std::string_view to_string(Identity id) {
  return id == Identity::kKnight ? "knight" : "spy";
}

std::string_view to_string(Answer a) {
  return a == Answer::kKnight ? "knight" : "spy";
}

Answer parse_answer(std::string_view text) {
  if (text == "knight") return Answer::kKnight;
  if (text == "spy") return Answer::kSpy;
  throw ParameterError("answer must be \"knight\" or \"spy\", got \"" +
                       std::string(text) + "\"");
}

GameParams GameParams::make(int n, int ell) {
  GameParams p{n, ell};
  p.validate();
  return p;
}

void GameParams::validate() const {
  if (n < 3) {
    throw ParameterError("n must be at least 3 (got " + std::to_string(n) +
                         ")");
  }
  if (ell < 1 || 2 * ell >= n) {
    throw ParameterError("l must satisfy 1 <= l < n/2 (n=" +
                         std::to_string(n) + ", l=" + std::to_string(ell) +
                         ")");
  }
}

SpySet normalize(SpySet set) {
  std::sort(set.begin(), set.end());
  set.erase(std::unique(set.begin(), set.end()), set.end());
  return set;
}

std::string format_set(const SpySet& set) {
  std::ostringstream out;
  out << '{';
  for (std::size_t i = 0; i < set.size(); ++i) {
    if (i) out << ',';
    out << set[i];
  }
  out << '}';
  return out.str();
}

Room::Room(GameParams params, std::vector<Identity> identities,
           std::optional<std::uint64_t> seed)
    : params_(params), identities_(std::move(identities)), seed_(seed) {
  params_.validate();
  if (static_cast<int>(identities_.size()) != params_.n) {
    throw ParameterError("room needs exactly n identities");
  }
  if (spy_count() > params_.ell) {
    throw ParameterError("room has more than l spies");
  }
}

Room Room::from_spies(GameParams params, const SpySet& spies) {
  std::vector<Identity> ids(params.n, Identity::kKnight);
  for (int s : spies) {
    if (s < 1 || s > params.n) throw ParameterError("spy seat out of range");
    ids[s - 1] = Identity::kSpy;
  }
  return Room(params, std::move(ids));
}

int Room::spy_count() const {
  return static_cast<int>(
      std::count(identities_.begin(), identities_.end(), Identity::kSpy));
}

SpySet Room::spies() const {
  SpySet out;
  for (int i = 1; i <= n(); ++i) {
    if (is_spy(i)) out.push_back(i);
  }
  return out;
}

Room new_room(const GameParams& params, int s, std::uint64_t seed) {
  params.validate();
  if (s < 0 || s > params.ell) {
    throw ParameterError("spy count must satisfy 0 <= s <= l");
  }
  std::vector<Identity> ids(params.n, Identity::kKnight);
  std::fill(ids.begin(), ids.begin() + s, Identity::kSpy);
  std::mt19937_64 rng(seed);
  std::shuffle(ids.begin(), ids.end(), rng);
  return Room(params, std::move(ids), seed);
}

QuestionGraph::QuestionGraph(int n) : n_(n) {}

bool QuestionGraph::contains(int asker, int subject) const {
  return asked_.count(key(asker, subject)) > 0;
}

std::optional<Answer> QuestionGraph::find(int asker, int subject) const {
  const auto it = asked_.find(key(asker, subject));
  if (it == asked_.end()) return std::nullopt;
  return it->second;
}

void QuestionGraph::check_move(int asker, int subject) const {
  if (asker < 1 || asker > n_ || subject < 1 || subject > n_) {
    throw InvalidMoveError("seat out of range 1.." + std::to_string(n_));
  }
  if (asker == subject) {
    throw InvalidMoveError("person " + std::to_string(asker) +
                           " cannot be asked about themselves");
  }
  if (contains(asker, subject)) {
    throw InvalidMoveError("person " + std::to_string(asker) +
                           " was already asked about person " +
                           std::to_string(subject));
  }
}

const Entry& QuestionGraph::append(int asker, int subject, Answer answer) {
  check_move(asker, subject);
  asked_.emplace(key(asker, subject), answer);
  entries_.push_back(
      Entry{static_cast<int>(entries_.size()) + 1, asker, subject, answer});
  return entries_.back();
}

QuestionGraph record(const QuestionGraph& graph, int asker, int subject,
                     Answer answer) {
  QuestionGraph next = graph;
  next.append(asker, subject, answer);
  return next;
}

int max_questions(const GameParams& params) {
  params.validate();
  return params.n + params.ell - 1;
}

int f_target(int n) {
  if (n < 3) throw ParameterError("f is defined for n >= 3");
  const int m = (n + 1) / 2;
  return n % 2 == 1 ? 3 * m - 3 : 3 * m - 2;
}

void to_json(nlohmann::json& j, const Entry& e) {
  j = nlohmann::json{{"turn", e.turn},
                     {"asker", e.asker},
                     {"subject", e.subject},
                     {"answer", std::string(to_string(e.answer))}};
}

void from_json(const nlohmann::json& j, Entry& e) {
  e.turn = j.at("turn").get<int>();
  e.asker = j.at("asker").get<int>();
  e.subject = j.at("subject").get<int>();
  e.answer = parse_answer(j.at("answer").get<std::string>());
}

std::string to_jsonl(const QuestionGraph& graph) {
  std::string out;
  for (const Entry& e : graph.entries()) {
    out += nlohmann::json(e).dump();
    out += '\n';
  }
  return out;
}

namespace {

void append_checked(QuestionGraph& graph, const Entry& e) {
  if (e.turn != static_cast<int>(graph.size()) + 1) {
    throw InvalidMoveError("transcript turn " + std::to_string(e.turn) +
                           " out of sequence");
  }
  graph.append(e.asker, e.subject, e.answer);
}

Entry parse_entry(const nlohmann::json& j) {
  try {
    return j.get<Entry>();
  } catch (const nlohmann::json::exception& ex) {
    throw ParameterError(std::string("bad transcript entry: ") + ex.what());
  }
}

}  // namespace

QuestionGraph from_jsonl(std::string_view text, int n) {
  QuestionGraph graph(n);
  std::istringstream in{std::string(text)};
  std::string line;
  while (std::getline(in, line)) {
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    nlohmann::json j;
    try {
      j = nlohmann::json::parse(line);
    } catch (const nlohmann::json::exception& ex) {
      throw ParameterError(std::string("bad transcript line: ") + ex.what());
    }
    append_checked(graph, parse_entry(j));
  }
  return graph;
}

nlohmann::json transcript_json(const QuestionGraph& graph) {
  return nlohmann::json(graph.entries());
}

QuestionGraph transcript_from_json(const nlohmann::json& array, int n) {
  if (!array.is_array()) throw ParameterError("transcript must be an array");
  QuestionGraph graph(n);
  for (const auto& j : array) append_checked(graph, parse_entry(j));
  return graph;
}

}  // namespace knights
