#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include <json.hpp>

namespace knights {

enum class Identity : std::uint8_t { kKnight, kSpy };

// What a person says about another: "knight" supports, "spy" accuses.
enum class Answer : std::uint8_t { kKnight, kSpy };

std::string_view to_string(Identity id);
std::string_view to_string(Answer a);
Answer parse_answer(std::string_view text);

inline Answer truthful_answer(Identity subject) {
  return subject == Identity::kKnight ? Answer::kKnight : Answer::kSpy;
}
inline Answer negate(Answer a) {
  return a == Answer::kKnight ? Answer::kSpy : Answer::kKnight;
}
inline Identity as_identity(Answer a) {
  return a == Answer::kKnight ? Identity::kKnight : Identity::kSpy;
}

// n people, at most l spies, 1 <= l < n/2.
struct GameParams {
  int n = 0;
  int ell = 0;

  // Throws ParameterError unless n >= 3 and 1 <= l < n/2.
  static GameParams make(int n, int ell);
  void validate() const;
  bool operator==(const GameParams&) const = default;
};

// Sorted list of 1-based seats.
using SpySet = std::vector<int>;

SpySet normalize(SpySet set);
std::string format_set(const SpySet& set);

// Hidden identities of seats 1..n.
class Room {
 public:
  Room(GameParams params, std::vector<Identity> identities,
       std::optional<std::uint64_t> seed = std::nullopt);

  static Room from_spies(GameParams params, const SpySet& spies);

  const GameParams& params() const { return params_; }
  int n() const { return params_.n; }
  Identity identity(int seat) const { return identities_.at(seat - 1); }
  bool is_spy(int seat) const { return identity(seat) == Identity::kSpy; }
  int spy_count() const;
  SpySet spies() const;
  const std::vector<Identity>& identities() const { return identities_; }
  std::optional<std::uint64_t> seed() const { return seed_; }

 private:
  GameParams params_;
  std::vector<Identity> identities_;
  std::optional<std::uint64_t> seed_;
};

// Uniform arrangement of s spies among n seats, determined by the seed.
Room new_room(const GameParams& params, int s, std::uint64_t seed);

struct Entry {
  int turn = 0;
  int asker = 0;
  int subject = 0;
  Answer answer = Answer::kKnight;
  bool operator==(const Entry&) const = default;
};

// Ordered transcript of questions and answers: the public game state.
class QuestionGraph {
 public:
  QuestionGraph() = default;
  explicit QuestionGraph(int n);

  int n() const { return n_; }
  const std::vector<Entry>& entries() const { return entries_; }
  std::size_t size() const { return entries_.size(); }
  bool empty() const { return entries_.empty(); }
  bool contains(int asker, int subject) const;
  // The recorded answer to (asker, subject), if that question was asked.
  std::optional<Answer> find(int asker, int subject) const;

  // Throws InvalidMoveError for seats out of range, self-questions and repeats.
  void check_move(int asker, int subject) const;
  // In-place append with the next turn number.
  const Entry& append(int asker, int subject, Answer answer);

 private:
  static std::uint64_t key(int asker, int subject) {
    return (static_cast<std::uint64_t>(asker) << 32) |
           static_cast<std::uint32_t>(subject);
  }

  int n_ = 0;
  std::vector<Entry> entries_;
  std::unordered_map<std::uint64_t, Answer> asked_;
};

// Pure form of QuestionGraph::append.
QuestionGraph record(const QuestionGraph& graph, int asker, int subject,
                     Answer answer);

int max_questions(const GameParams& params);
int f_target(int n);

void to_json(nlohmann::json& j, const Entry& e);
void from_json(const nlohmann::json& j, Entry& e);

// Newline-delimited JSON, one entry per line.
std::string to_jsonl(const QuestionGraph& graph);
// Entries are re-validated through append, so turns must run 1, 2, ...
QuestionGraph from_jsonl(std::string_view text, int n);
nlohmann::json transcript_json(const QuestionGraph& graph);
QuestionGraph transcript_from_json(const nlohmann::json& array, int n);

}  // namespace knights
