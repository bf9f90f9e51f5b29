#pragma once

#include <filesystem>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "knights/consistency.h"
#include "knights/core.h"
#include "knights/interrogators.h"
#include "knights/secretkeepers.h"

namespace knights {

enum class GameStatus { kAwaitingQuestion, kAwaitingAnswer, kFinished };
enum class Outcome { kInterrogatorWin, kDraw, kSecretKeeperWin };

std::string_view to_string(GameStatus s);
std::string_view to_string(Outcome o);

struct ClaimRecord {
  int turn = 0;
  SpySet claim;
  Verdict verdict;
};

struct GameSetup {
  GameParams params;
  std::string interrogator = "human";  // "human" or a strategy id
  std::string secretkeeper = "mole";   // "human", "mole" or a behaviour id
  // Fixed behaviours: an explicit spy set, or s spies placed by `seed`.
  std::optional<SpySet> spies;
  std::optional<int> spy_count;
  std::optional<std::uint64_t> seed;

  static GameSetup from_json(const nlohmann::json& j);
  nlohmann::json to_json() const;
};

// One two-player game. Not thread-safe by itself; the store serializes it.
class GameSession {
 public:
  GameSession(std::string id, GameSetup setup);

  const std::string& id() const { return id_; }
  const GameSetup& setup() const { return setup_; }
  const GameParams& params() const { return setup_.params; }
  const QuestionGraph& transcript() const { return transcript_; }
  int turn() const { return static_cast<int>(transcript_.size()) + 1; }
  GameStatus status() const { return status_; }
  std::optional<Outcome> outcome() const { return outcome_; }
  bool corrupted() const { return corrupted_; }
  const std::vector<ClaimRecord>& claims() const { return claims_; }

  // Human interrogator moves.
  std::optional<Answer> post_question(int asker, int subject);
  ClaimRecord post_claim(const SpySet& claim);
  // Human Secret-Keeper move.
  void post_answer(Answer answer);

  // Public view; hidden identities appear only once the game is over.
  nlohmann::json view() const;
  // Consistent-set count and, while an answer is pending, which answers
  // would leave the game consistent.
  nlohmann::json analysis() const;

  nlohmann::json snapshot() const;
  static std::unique_ptr<GameSession> restore(const nlohmann::json& j);

 private:
  bool engine_interrogator() const { return setup_.interrogator != "human"; }
  bool human_keeper() const { return setup_.secretkeeper == "human"; }

  void record(int asker, int subject, Answer a);
  Answer keeper_answer(int asker, int subject);
  ClaimRecord claim(const SpySet& claim);
  void advance();

  std::string id_;
  GameSetup setup_;
  QuestionGraph transcript_;
  GameStatus status_ = GameStatus::kAwaitingQuestion;
  std::optional<Outcome> outcome_;
  bool corrupted_ = false;
  std::string message_;
  std::optional<std::pair<int, int>> pending_;
  std::vector<ClaimRecord> claims_;
  std::optional<Room> room_;
  std::optional<SpyBehavior> behavior_;
  std::optional<MoleState> mole_;
  std::optional<OnlineInterrogator> engine_;
  std::optional<SpySet> final_spies_;
};

// Thread-safe session store with optional JSON files, one per game.
class GameStore {
 public:
  explicit GameStore(std::optional<std::filesystem::path> dir = std::nullopt);

  std::string create(const GameSetup& setup);

  // Runs `fn` on the session with its lock held, then persists it.
  template <typename Fn>
  auto with_session(const std::string& id, Fn&& fn) {
    std::shared_ptr<Entry> e = find(id);
    std::lock_guard<std::mutex> lock(e->mutex);
    struct Persist {
      GameStore* store;
      Entry* entry;
      ~Persist() { store->persist(*entry->session); }
    } persist{this, e.get()};
    return fn(*e->session);
  }

 private:
  struct Entry {
    std::mutex mutex;
    std::unique_ptr<GameSession> session;
  };
  std::shared_ptr<Entry> find(const std::string& id);
  void persist(const GameSession& s) const;
  std::string fresh_id();

  std::optional<std::filesystem::path> dir_;
  std::mutex mutex_;
  std::map<std::string, std::shared_ptr<Entry>> sessions_;
  std::uint64_t counter_ = 0;
  std::uint64_t salt_;
};

struct ApiResponse {
  int status = 200;
  nlohmann::json body;
};

// The HTTP routes without the transport:
//   POST /games, GET /games/{id}, POST /games/{id}/question,
//   POST /games/{id}/answer, POST /games/{id}/claim, GET /games/{id}/analysis
// Errors come back as {"code", "message"}.
class GameApi {
 public:
  explicit GameApi(GameStore& store) : store_(store) {}
  ApiResponse handle(std::string_view method, std::string_view path,
                     std::string_view body = {});

 private:
  GameStore& store_;
};

// GameApi over HTTP, plus optional static files for the UI bundle.
class HttpServer {
 public:
  explicit HttpServer(GameStore& store,
                      std::optional<std::filesystem::path> static_dir = std::nullopt);
  ~HttpServer();

  // Port 0 picks a free port. Returns the bound port.
  int bind(const std::string& host, int port);
  // Blocks until stop() is called from another thread.
  void listen();
  void stop();

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

// bind + listen; runs until the process is stopped.
void serve(GameStore& store, const std::string& host, int port,
           const std::optional<std::filesystem::path>& static_dir);

}  // namespace knights
