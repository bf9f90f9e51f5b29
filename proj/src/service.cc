#include "knights/service.h"

#include <fstream>
#include <random>
#include <sstream>

#include <httplib.h>

#include "knights/errors.h"

namespace knights {

using nlohmann::json;

std::string_view to_string(GameStatus s) {
  switch (s) {
    case GameStatus::kAwaitingQuestion:
      return "awaiting_question";
    case GameStatus::kAwaitingAnswer:
      return "awaiting_answer";
    case GameStatus::kFinished:
      return "finished";
  }
  return "?";
}

std::string_view to_string(Outcome o) {
  switch (o) {
    case Outcome::kInterrogatorWin:
      return "interrogator_win";
    case Outcome::kDraw:
      return "draw";
    case Outcome::kSecretKeeperWin:
      return "secretkeeper_win";
  }
  return "?";
}

namespace {

template <typename T>
T field(const json& j, const char* key) {
  try {
    return j.at(key).get<T>();
  } catch (const json::exception&) {
    throw ParameterError(std::string("missing or malformed field \"") + key +
                         "\"");
  }
}

template <typename T>
std::optional<T> optional_field(const json& j, const char* key) {
  if (!j.contains(key) || j.at(key).is_null()) return std::nullopt;
  return field<T>(j, key);
}

json verdict_json(const ClaimRecord& c) {
  json j{{"turn", c.turn},
         {"claim", c.claim},
         {"verdict", std::string(to_string(c.verdict.kind))}};
  if (!c.verdict.accepted()) j["witness"] = c.verdict.witness;
  return j;
}

Verdict::Kind parse_verdict(const std::string& s) {
  if (s == "accepted") return Verdict::Kind::kAccepted;
  if (s == "refuted") return Verdict::Kind::kRefuted;
  if (s == "inconsistent") return Verdict::Kind::kInconsistent;
  throw ParameterError("bad verdict in snapshot");
}

}  // namespace

GameSetup GameSetup::from_json(const json& j) {
  if (!j.is_object()) throw ParameterError("game setup must be a JSON object");
  GameSetup s;
  const int n = field<int>(j, "n");
  const int ell = j.contains("l") ? field<int>(j, "l") : field<int>(j, "ell");
  s.params = GameParams::make(n, ell);
  if (auto v = optional_field<std::string>(j, "interrogator")) s.interrogator = *v;
  if (auto v = optional_field<std::string>(j, "secretkeeper")) s.secretkeeper = *v;
  s.spies = optional_field<SpySet>(j, "spies");
  s.spy_count = optional_field<int>(j, "s");
  s.seed = optional_field<std::uint64_t>(j, "seed");
  return s;
}

json GameSetup::to_json() const {
  json j{{"n", params.n},
         {"l", params.ell},
         {"interrogator", interrogator},
         {"secretkeeper", secretkeeper}};
  if (spies) j["spies"] = *spies;
  if (spy_count) j["s"] = *spy_count;
  if (seed) j["seed"] = *seed;
  return j;
}

GameSession::GameSession(std::string id, GameSetup setup)
    : id_(std::move(id)), setup_(std::move(setup)), transcript_(setup_.params.n) {
  setup_.params.validate();
  const bool human_i = setup_.interrogator == "human";
  const bool human_k = setup_.secretkeeper == "human";
  if (human_i && human_k) {
    throw ParameterError("at most one side may be played by a human");
  }
  if (!human_i) engine_.emplace(setup_.interrogator);
  if (!human_k) {
    const KeeperSpec keeper = KeeperSpec::parse(setup_.secretkeeper);
    if (keeper.mole) {
      mole_.emplace(setup_.params);
    } else {
      behavior_ = keeper.behavior;
      if (setup_.spies) {
        room_ = Room::from_spies(setup_.params, normalize(*setup_.spies));
      } else {
        if (!setup_.seed) setup_.seed = std::random_device{}();
        room_ = new_room(setup_.params,
                         setup_.spy_count.value_or(setup_.params.ell),
                         *setup_.seed);
      }
    }
  }
  advance();
}

Answer GameSession::keeper_answer(int asker, int subject) {
  if (mole_) return mole_->answer(asker, subject);
  return behavior_answer(*room_, *behavior_, asker, subject);
}

void GameSession::record(int asker, int subject, Answer a) {
  transcript_.append(asker, subject, a);
}

std::optional<Answer> GameSession::post_question(int asker, int subject) {
  if (status_ == GameStatus::kFinished) throw SequenceError("the game is over");
  if (engine_interrogator()) {
    throw SequenceError("the Interrogator is played by the engine");
  }
  if (status_ != GameStatus::kAwaitingQuestion) {
    throw SequenceError("an answer is pending");
  }
  transcript_.check_move(asker, subject);
  if (human_keeper()) {
    pending_ = {asker, subject};
    status_ = GameStatus::kAwaitingAnswer;
    return std::nullopt;
  }
  const Answer a = keeper_answer(asker, subject);
  record(asker, subject, a);
  return a;
}

void GameSession::post_answer(Answer answer) {
  if (status_ == GameStatus::kFinished) throw SequenceError("the game is over");
  if (status_ != GameStatus::kAwaitingAnswer || !pending_) {
    throw SequenceError("no question is waiting for an answer");
  }
  const auto [asker, subject] = *pending_;
  pending_.reset();
  record(asker, subject, answer);
  if (!has_consistent_set(transcript_, params(), service_budget())) {
    corrupted_ = true;
    outcome_ = Outcome::kInterrogatorWin;
    status_ = GameStatus::kFinished;
    message_ = "answer " + std::to_string(transcript_.size()) +
               " leaves no set of at most " + std::to_string(params().ell) +
               " spies consistent with the transcript; the game is forfeited";
    return;
  }
  status_ = GameStatus::kAwaitingQuestion;
  advance();
}

ClaimRecord GameSession::post_claim(const SpySet& spies) {
  if (engine_interrogator()) {
    throw SequenceError("the Interrogator is played by the engine");
  }
  return claim(spies);
}

ClaimRecord GameSession::claim(const SpySet& spies) {
  if (status_ == GameStatus::kFinished) throw SequenceError("the game is over");
  if (status_ != GameStatus::kAwaitingQuestion) {
    throw SequenceError("claims open a turn; an answer is pending");
  }
  if (!claims_.empty() && claims_.back().turn == turn()) {
    throw SequenceError("only one claim is allowed per turn");
  }
  const SpySet set = normalize(spies);
  for (int s : set) {
    if (s < 1 || s > params().n) throw ParameterError("claim seat out of range");
  }
  ClaimRecord rec;
  rec.turn = turn();
  rec.claim = set;
  rec.verdict = adjudicate(transcript_, params(), set, service_budget());
  if (mole_) {
    const std::optional<SpySet> refutation = mole_->refute(set);
    if (refutation.has_value() == rec.verdict.accepted()) {
      throw InternalError("Mole Hiding and the consistency checker disagree");
    }
  }
  claims_.push_back(rec);
  if (rec.verdict.accepted()) {
    const int draw_turn = params().n + params().ell;
    outcome_ = rec.turn < draw_turn    ? Outcome::kInterrogatorWin
               : rec.turn == draw_turn ? Outcome::kDraw
                                       : Outcome::kSecretKeeperWin;
    status_ = GameStatus::kFinished;
    final_spies_ = set;
  }
  return rec;
}

void GameSession::advance() {
  const int cap = params().n * (params().n - 1) + params().n + 2;
  for (int step = 0; status_ == GameStatus::kAwaitingQuestion &&
                     engine_interrogator();
       ++step) {
    if (step > 2 * cap) throw InternalError("engine interrogator did not finish");
    const Move m = engine_->next_move(InterrogatorView{params(), transcript_});
    if (m.kind == Move::Kind::kAsk) {
      transcript_.check_move(m.asker, m.subject);
      if (human_keeper()) {
        pending_ = {m.asker, m.subject};
        status_ = GameStatus::kAwaitingAnswer;
        return;
      }
      record(m.asker, m.subject, keeper_answer(m.asker, m.subject));
    } else {
      const ClaimRecord rec = claim(m.claim);
      if (!rec.verdict.accepted()) engine_->claim_refuted(m.claim);
    }
  }
}

json GameSession::view() const {
  const int n = params().n;
  const int ell = params().ell;
  json claims = json::array();
  for (const ClaimRecord& c : claims_) claims.push_back(verdict_json(c));
  json j{{"id", id_},
         {"n", n},
         {"l", ell},
         {"interrogator", setup_.interrogator},
         {"secretkeeper", setup_.secretkeeper},
         {"turn", turn()},
         {"status", std::string(to_string(status_))},
         {"transcript", transcript_json(transcript_)},
         {"targets", {{"max_questions", n + ell - 1}, {"draw_turn", n + ell}}},
         {"claims", claims},
         {"corrupted", corrupted_},
         {"outcome", outcome_ ? json(std::string(to_string(*outcome_))) : json()}};
  if (!message_.empty()) j["message"] = message_;
  if (pending_) {
    j["pending_question"] = {{"asker", pending_->first},
                             {"subject", pending_->second}};
  }
  if (status_ == GameStatus::kFinished) {
    if (final_spies_) j["spies"] = *final_spies_;
    if (room_) j["room_spies"] = room_->spies();
  }
  return j;
}

json GameSession::analysis() const {
  constexpr std::uint64_t kCap = 1'000'000;
  const SolverBudget budget = service_budget();
  const std::uint64_t count =
      count_consistent(transcript_, params(), kCap, budget);
  json j{{"turn", turn()},
         {"consistent_sets", count},
         {"saturated", count >= kCap},
         {"unique", count == 1}};
  if (pending_) {
    json safe;
    for (Answer a : {Answer::kKnight, Answer::kSpy}) {
      const QuestionGraph next =
          knights::record(transcript_, pending_->first, pending_->second, a);
      safe[std::string(to_string(a))] = has_consistent_set(next, params(), budget);
    }
    j["safe_answers"] = safe;
  }
  return j;
}

json GameSession::snapshot() const {
  json claims = json::array();
  for (const ClaimRecord& c : claims_) claims.push_back(verdict_json(c));
  json j{{"id", id_},
         {"setup", setup_.to_json()},
         {"transcript", transcript_json(transcript_)},
         {"claims", claims},
         {"status", std::string(to_string(status_))},
         {"corrupted", corrupted_},
         {"message", message_}};
  if (pending_) {
    j["pending_question"] = {{"asker", pending_->first},
                             {"subject", pending_->second}};
  }
  return j;
}

std::unique_ptr<GameSession> GameSession::restore(const json& j) {
  GameSetup setup = GameSetup::from_json(field<json>(j, "setup"));
  // Rebuild without autoplay, then replay the recorded moves.
  const std::string interrogator = setup.interrogator;
  setup.interrogator = "human";
  const bool human_keeper = setup.secretkeeper == "human";
  if (human_keeper) setup.secretkeeper = "knavish";
  if (human_keeper && !setup.spies) setup.spies = SpySet{};
  auto s = std::make_unique<GameSession>(field<std::string>(j, "id"), setup);
  s->setup_.interrogator = interrogator;
  if (interrogator != "human") s->engine_.emplace(interrogator);
  if (human_keeper) {
    s->setup_.secretkeeper = "human";
    s->setup_.spies.reset();
    s->room_.reset();
    s->behavior_.reset();
  }
  const QuestionGraph recorded =
      transcript_from_json(field<json>(j, "transcript"), setup.params.n);
  std::size_t next_claim = 0;
  const json claims = field<json>(j, "claims");
  for (const Entry& e : recorded.entries()) {
    if (s->mole_) {
      if (s->mole_->answer(e.asker, e.subject) != e.answer) {
        throw ParameterError("snapshot does not match the Mole's answers");
      }
    }
    s->record(e.asker, e.subject, e.answer);
  }
  for (; next_claim < claims.size(); ++next_claim) {
    const json& c = claims[next_claim];
    ClaimRecord rec;
    rec.turn = field<int>(c, "turn");
    rec.claim = field<SpySet>(c, "claim");
    rec.verdict.kind = parse_verdict(field<std::string>(c, "verdict"));
    if (c.contains("witness")) rec.verdict.witness = field<SpySet>(c, "witness");
    s->claims_.push_back(rec);
    if (rec.verdict.accepted()) {
      const int draw_turn = setup.params.n + setup.params.ell;
      s->outcome_ = rec.turn < draw_turn    ? Outcome::kInterrogatorWin
                    : rec.turn == draw_turn ? Outcome::kDraw
                                            : Outcome::kSecretKeeperWin;
      s->final_spies_ = rec.claim;
    } else if (s->engine_) {
      s->engine_->claim_refuted(rec.claim);
    }
  }
  s->corrupted_ = j.value("corrupted", false);
  s->message_ = j.value("message", std::string());
  if (s->corrupted_) s->outcome_ = Outcome::kInterrogatorWin;
  if (j.contains("pending_question")) {
    const json& p = j.at("pending_question");
    s->pending_ = {field<int>(p, "asker"), field<int>(p, "subject")};
  }
  const std::string status = field<std::string>(j, "status");
  s->status_ = status == "finished"          ? GameStatus::kFinished
               : status == "awaiting_answer" ? GameStatus::kAwaitingAnswer
                                             : GameStatus::kAwaitingQuestion;
  return s;
}

GameStore::GameStore(std::optional<std::filesystem::path> dir)
    : dir_(std::move(dir)), salt_(std::random_device{}()) {
  if (dir_) std::filesystem::create_directories(*dir_);
}

std::string GameStore::fresh_id() {
  std::ostringstream out;
  out << std::hex << splitmix64(salt_ ^ ++counter_);
  return out.str();
}

std::string GameStore::create(const GameSetup& setup) {
  auto entry = std::make_shared<Entry>();
  std::string id;
  {
    std::lock_guard<std::mutex> lock(mutex_);
    id = fresh_id();
    sessions_[id] = entry;
  }
  std::lock_guard<std::mutex> lock(entry->mutex);
  try {
    entry->session = std::make_unique<GameSession>(id, setup);
  } catch (...) {
    std::lock_guard<std::mutex> store_lock(mutex_);
    sessions_.erase(id);
    throw;
  }
  persist(*entry->session);
  return id;
}

std::shared_ptr<GameStore::Entry> GameStore::find(const std::string& id) {
  std::lock_guard<std::mutex> lock(mutex_);
  const auto it = sessions_.find(id);
  if (it != sessions_.end() && it->second->session) return it->second;
  if (dir_ && id.find_first_of("/\\.") == std::string::npos) {
    std::ifstream in(*dir_ / (id + ".json"));
    if (in) {
      auto entry = std::make_shared<Entry>();
      entry->session = GameSession::restore(json::parse(in));
      sessions_[id] = entry;
      return entry;
    }
  }
  throw NotFoundError("no game with id \"" + id + "\"");
}

void GameStore::persist(const GameSession& s) const {
  if (!dir_) return;
  try {
    const std::filesystem::path tmp = *dir_ / (s.id() + ".json.tmp");
    {
      std::ofstream out(tmp);
      out << s.snapshot().dump();
    }
    std::filesystem::rename(tmp, *dir_ / (s.id() + ".json"));
  } catch (const std::exception&) {
    // Persistence is best effort; the in-memory session stays authoritative.
  }
}

namespace {

std::vector<std::string> split_path(std::string_view path) {
  std::vector<std::string> parts;
  std::string cur;
  for (char c : path) {
    if (c == '?') break;
    if (c == '/') {
      if (!cur.empty()) parts.push_back(cur);
      cur.clear();
    } else {
      cur += c;
    }
  }
  if (!cur.empty()) parts.push_back(cur);
  return parts;
}

ApiResponse error(int status, std::string code, std::string message) {
  return ApiResponse{status, json{{"code", code}, {"message", message}}};
}

json parse_body(std::string_view body) {
  if (body.empty()) return json::object();
  return json::parse(body);
}

}  // namespace

ApiResponse GameApi::handle(std::string_view method, std::string_view path,
                            std::string_view body) {
  const std::vector<std::string> parts = split_path(path);
  try {
    if (parts.empty() || parts[0] != "games" || parts.size() > 3) {
      return error(404, "no_route", "unknown route");
    }
    if (parts.size() == 1) {
      if (method != "POST") return error(405, "method_not_allowed", "use POST");
      const std::string id = store_.create(GameSetup::from_json(parse_body(body)));
      return {201, store_.with_session(id, [](GameSession& s) { return s.view(); })};
    }
    const std::string& id = parts[1];
    if (parts.size() == 2) {
      if (method != "GET") return error(405, "method_not_allowed", "use GET");
      return {200, store_.with_session(id, [](GameSession& s) { return s.view(); })};
    }
    const std::string& action = parts[2];
    if (action != "analysis" && action != "question" && action != "answer" &&
        action != "claim") {
      return error(404, "no_route", "unknown action \"" + action + "\"");
    }
    if (action == "analysis") {
      if (method != "GET") return error(405, "method_not_allowed", "use GET");
      return {200,
              store_.with_session(id, [](GameSession& s) { return s.analysis(); })};
    }
    if (method != "POST") return error(405, "method_not_allowed", "use POST");
    const json req = parse_body(body);
    if (action == "question") {
      const int asker = field<int>(req, "asker");
      const int subject = field<int>(req, "subject");
      return {200, store_.with_session(id, [&](GameSession& s) {
                const std::optional<Answer> a = s.post_question(asker, subject);
                return json{{"answer", a ? json(std::string(to_string(*a))) : json()},
                            {"game", s.view()}};
              })};
    }
    if (action == "answer") {
      const Answer a = parse_answer(field<std::string>(req, "answer"));
      return {200, store_.with_session(id, [&](GameSession& s) {
                s.post_answer(a);
                return json{{"game", s.view()}};
              })};
    }
    if (action == "claim") {
      const SpySet claim = req.contains("spies") ? field<SpySet>(req, "spies")
                                                 : field<SpySet>(req, "claim");
      return {200, store_.with_session(id, [&](GameSession& s) {
                const ClaimRecord rec = s.post_claim(claim);
                json out = verdict_json(rec);
                out["game"] = s.view();
                return out;
              })};
    }
    throw InternalError("unrouted action");
  } catch (const json::exception& e) {
    return error(400, "bad_json", e.what());
  } catch (const ParameterError& e) {
    return error(422, "invalid_parameters", e.what());
  } catch (const UnsupportedModeError& e) {
    return error(422, "unsupported", e.what());
  } catch (const InvalidMoveError& e) {
    return error(400, "invalid_move", e.what());
  } catch (const SequenceError& e) {
    return error(409, "out_of_turn", e.what());
  } catch (const NotFoundError& e) {
    return error(404, "not_found", e.what());
  } catch (const ResourceError& e) {
    return error(413, "resource_limit", e.what());
  } catch (const CorruptedGameError& e) {
    return error(409, "corrupted_game", e.what());
  } catch (const std::exception& e) {
    return error(500, "internal", e.what());
  }
}

struct HttpServer::Impl {
  explicit Impl(GameStore& store) : api(store) {}
  GameApi api;
  httplib::Server server;
};

HttpServer::HttpServer(GameStore& store,
                       std::optional<std::filesystem::path> static_dir)
    : impl_(std::make_unique<Impl>(store)) {
  if (static_dir && !impl_->server.set_mount_point("/", static_dir->string())) {
    throw ParameterError("static directory does not exist: " +
                         static_dir->string());
  }
  auto dispatch = [this](const httplib::Request& req, httplib::Response& res) {
    const ApiResponse r = impl_->api.handle(req.method, req.path, req.body);
    res.status = r.status;
    res.set_content(r.body.dump(), "application/json");
  };
  impl_->server.Get(R"(/games/.*)", dispatch);
  impl_->server.Post(R"(/games(/.*)?)", dispatch);
}

HttpServer::~HttpServer() { stop(); }

int HttpServer::bind(const std::string& host, int port) {
  const int bound = port == 0 ? impl_->server.bind_to_any_port(host)
                              : (impl_->server.bind_to_port(host, port) ? port : -1);
  if (bound < 0) {
    throw ResourceError("could not bind " + host + ":" + std::to_string(port));
  }
  return bound;
}

void HttpServer::listen() { impl_->server.listen_after_bind(); }

void HttpServer::stop() { impl_->server.stop(); }

void serve(GameStore& store, const std::string& host, int port,
           const std::optional<std::filesystem::path>& static_dir) {
  HttpServer server(store, static_dir);
  server.bind(host, port);
  server.listen();
}

}  // namespace knights
