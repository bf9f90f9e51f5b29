// knights: simulate, verify, analyze, autoplay and serve.
//
// Exit codes: 0 success, 1 usage or bad input, 2 verification failure,
// 3 resource cap.

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <optional>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "knights/consistency.h"
#include "knights/core.h"
#include "knights/errors.h"
#include "knights/service.h"
#include "knights/simulator.h"
#include "knights/verify.h"

namespace {

using nlohmann::json;
using namespace knights;

constexpr int kUsage = 1;
constexpr int kVerifyFailed = 2;
constexpr int kResource = 3;

void print_json(const json& j, bool pretty) {
  std::cout << (pretty ? j.dump(2) : j.dump()) << '\n';
}

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParameterError("cannot read " + path);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

int default_port() {
  if (const char* env = std::getenv("KNIGHTS_PORT")) {
    int port = -1;
    try {
      port = std::stoi(env);
    } catch (const std::exception&) {
    }
    if (port < 0 || port > 65535) {
      throw ParameterError("KNIGHTS_PORT is not a port number");
    }
    return port;
  }
  return 8080;
}

struct SimulateArgs {
  SimConfig config;
  std::string ell_rule = "half";
  int spies = -1;
  std::string n_range;
  std::string out;
  std::string histogram;
  bool pretty = false;
};

int run_simulate(SimulateArgs& a) {
  a.config.ell_rule = parse_ell_rule(a.ell_rule);
  if (a.spies >= 0) a.config.spies = a.spies;
  if (!a.n_range.empty()) {
    int lo = 0, hi = 0, step = 1;
    const int got = std::sscanf(a.n_range.c_str(), "%d:%d:%d", &lo, &hi, &step);
    if (got < 2 || step < 1 || hi < lo) {
      throw ParameterError("--n-range must look like 40:100:10");
    }
    for (int n = lo; n <= hi; n += step) a.config.ns.push_back(n);
  }
  const SimReport report = run_batch(a.config);
  const std::string csv = to_csv(report);
  if (!a.out.empty()) {
    std::ofstream(a.out) << csv;
  } else if (!a.pretty) {
    std::cout << csv;
  }
  if (!a.histogram.empty()) {
    std::ofstream out(a.histogram);
    for (const SimPoint& p : report.points) {
      out << "# n=" << p.n << " l=" << p.ell << '\n' << histogram_csv(p);
    }
  }
  if (a.pretty) {
    std::cout << std::left << std::setw(6) << "n" << std::setw(5) << "l"
              << std::setw(12) << "mean" << std::setw(10) << "stderr"
              << std::setw(6) << "min" << std::setw(6) << "max"
              << "violations\n";
    for (const SimPoint& p : report.points) {
      std::cout << std::setw(6) << p.n << std::setw(5) << p.ell << std::setw(12)
                << p.mean << std::setw(10) << std::setprecision(4)
                << p.std_error << std::setprecision(6) << std::setw(6) << p.min
                << std::setw(6) << p.max << p.violations << '\n';
    }
    if (report.fit) {
      std::cout << "slope " << report.fit->slope << ", intercept "
                << report.fit->intercept << '\n';
    }
  }
  return 0;
}

int run_verify(const std::string& scope, const VerifyCaps& caps, bool pretty) {
  const std::vector<CheckResult> results = verify(scope, caps);
  bool all = true;
  json checks = json::array();
  for (const CheckResult& r : results) {
    all = all && r.pass;
    checks.push_back(to_json(r));
  }
  if (pretty) {
    for (const CheckResult& r : results) {
      std::cout << "criterion " << r.criterion << " " << (r.pass ? "PASS" : "FAIL")
                << " [" << r.id << ", " << std::fixed << std::setprecision(1)
                << r.seconds << "s] " << r.detail << '\n';
    }
  } else {
    print_json(json{{"scope", scope}, {"pass", all}, {"checks", checks}}, false);
  }
  return all ? 0 : kVerifyFailed;
}

int run_analyze(const std::string& path, int n, int ell, std::size_t limit,
                bool pretty) {
  const GameParams params = GameParams::make(n, ell);
  const QuestionGraph g = from_jsonl(read_file(path), n);
  const std::uint64_t count = count_consistent(g, params);
  const std::vector<SpySet> sets = consistent_sets(g, params, limit);
  std::optional<SpySet> unique;
  if (count == 1) unique = consistent_sets(g, params, 1).front();
  json out{{"n", n},
           {"l", ell},
           {"questions", g.size()},
           {"consistent_count", count},
           {"consistent_sets", sets},
           {"unique", count == 1}};
  if (unique) out["spies"] = *unique;
  if (pretty) {
    std::cout << g.size() << " questions, " << count << " consistent spy set"
              << (count == 1 ? "" : "s") << '\n';
    for (const SpySet& s : sets) std::cout << "  " << format_set(s) << '\n';
    if (unique) std::cout << "unique: " << format_set(*unique) << '\n';
  } else {
    print_json(out, false);
  }
  return 0;
}

int run_autoplay(GameSetup setup, bool pretty) {
  if (setup.interrogator == "human" || setup.secretkeeper == "human") {
    throw ParameterError("autoplay needs engine players on both sides");
  }
  GameSession game("autoplay", setup);
  const json view = game.view();
  json log = json::array();
  std::size_t next_claim = 0;
  const auto& claims = game.claims();
  auto emit_claims = [&](int turn) {
    for (; next_claim < claims.size() && claims[next_claim].turn == turn; ++next_claim) {
      const ClaimRecord& c = claims[next_claim];
      json j{{"turn", c.turn},
             {"claim", c.claim},
             {"verdict", std::string(to_string(c.verdict.kind))}};
      if (!c.verdict.accepted()) j["witness"] = c.verdict.witness;
      log.push_back(j);
    }
  };
  for (const Entry& e : game.transcript().entries()) {
    emit_claims(e.turn);
    log.push_back(json(e));
  }
  emit_claims(game.turn());
  json out{{"n", setup.params.n},
           {"l", setup.params.ell},
           {"interrogator", setup.interrogator},
           {"secretkeeper", setup.secretkeeper},
           {"questions", game.transcript().size()},
           {"max_questions", max_questions(setup.params)},
           {"outcome", view["outcome"]},
           {"log", log}};
  if (view.contains("spies")) out["spies"] = view["spies"];
  if (view.contains("room_spies")) out["room_spies"] = view["room_spies"];
  if (pretty) {
    for (const json& j : log) {
      if (j.contains("claim")) {
        std::cout << "turn " << j["turn"] << ": claim "
                  << format_set(j["claim"].get<SpySet>()) << " "
                  << j["verdict"].get<std::string>();
        if (j.contains("witness")) {
          std::cout << " (witness " << format_set(j["witness"].get<SpySet>()) << ")";
        }
        std::cout << '\n';
      } else {
        std::cout << "turn " << j["turn"] << ": " << j["asker"] << " asked about "
                  << j["subject"] << ": " << j["answer"].get<std::string>() << '\n';
      }
    }
    std::cout << game.transcript().size() << " questions (n + l - 1 = "
              << max_questions(setup.params) << "), outcome "
              << (view["outcome"].is_null() ? "none" : view["outcome"].get<std::string>())
              << '\n';
  } else {
    print_json(out, false);
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Knights and Spies: strategies, verification and game server"};
  app.require_subcommand(1);
  bool pretty = false;
  app.add_flag("--pretty", pretty, "Human-readable output");
  app.fallthrough();

  SimulateArgs sim;
  auto* simulate = app.add_subcommand("simulate", "Batch simulation, CSV output");
  simulate->add_option("--strategy", sim.config.strategy,
                       "spider, modified-spider, chain-building or majority")
      ->capture_default_str();
  simulate->add_option("--behavior", sim.config.behavior,
                       "truthful, knavish, spyish or random:<seed>")
      ->capture_default_str();
  simulate->add_option("--n", sim.config.ns, "Room sizes");
  simulate->add_option("--n-range", sim.n_range, "Room sizes as lo:hi:step");
  simulate->add_option("--l-rule", sim.ell_rule, "half, quarter or explicit")
      ->capture_default_str();
  simulate->add_option("--l", sim.config.ell, "l for --l-rule explicit");
  simulate->add_option("--spies", sim.spies, "Spies per room (default l)");
  simulate->add_option("--trials", sim.config.trials)->capture_default_str();
  simulate->add_option("--seed", sim.config.seed)->capture_default_str();
  simulate->add_option("--threads", sim.config.threads, "0: all cores");
  simulate->add_option("--out", sim.out, "CSV file (default stdout)");
  simulate->add_option("--histogram", sim.histogram, "Histogram CSV file");

  std::string scope = "all";
  VerifyCaps caps;
  int max_steps = 0;
  auto* ver = app.add_subcommand("verify", "Exhaustive and statistical checks");
  ver->add_option("--scope", scope,
                  "lemmas, theorem1, theorem2, prop1, solver, simulation, "
                  "chains or all")
      ->capture_default_str();
  ver->add_option("--max-steps", max_steps, "Path length cap for the lattice path checks");
  ver->add_option("--max-n", caps.spider_rooms_max_n, "Room size cap for exhaustive room checks")
      ->capture_default_str();
  ver->add_option("--savings-max", caps.savings_max_sum, "k + s cap for exact distributions")
      ->capture_default_str();
  ver->add_option("--mole-max-n", caps.mole_max_n)->capture_default_str();
  ver->add_option("--orders-n", caps.orders_exhaustive_n,
                  "Room size cap for exhaustive question orders")
      ->capture_default_str();
  ver->add_option("--orders-random", caps.orders_random)->capture_default_str();
  ver->add_option("--transcripts", caps.solver_transcripts)->capture_default_str();
  ver->add_option("--spider-trials", caps.spider_sim_trials)->capture_default_str();
  ver->add_option("--chain-trials", caps.chain_sim_trials)->capture_default_str();
  ver->add_option("--chain-max-k", caps.chain_max_k)->capture_default_str();
  ver->add_option("--seed", caps.seed)->capture_default_str();
  ver->add_option("--threads", caps.threads, "0: all cores");

  std::string transcript_path;
  int an_n = 0, an_l = 0;
  std::size_t an_limit = 100;
  auto* analyze = app.add_subcommand("analyze", "Consistent spy sets of a JSONL transcript");
  analyze->add_option("transcript", transcript_path)->required();
  analyze->add_option("--n", an_n)->required();
  analyze->add_option("--l", an_l)->required();
  analyze->add_option("--limit", an_limit, "Sets to list")->capture_default_str();

  GameSetup setup;
  int ap_n = 0, ap_l = 0;
  std::vector<int> ap_spies;
  int ap_s = -1;
  std::uint64_t ap_seed = 1;
  auto* autoplay = app.add_subcommand("autoplay", "Engine against engine");
  autoplay->add_option("--interrogator", setup.interrogator)->required();
  autoplay->add_option("--keeper", setup.secretkeeper)->capture_default_str();
  autoplay->add_option("--n", ap_n)->required();
  autoplay->add_option("--l", ap_l)->required();
  autoplay->add_option("--spies", ap_spies, "Spy seats for fixed behaviours");
  autoplay->add_option("--s", ap_s, "Random spy count for fixed behaviours");
  autoplay->add_option("--seed", ap_seed)->capture_default_str();

  std::string host = "127.0.0.1";
  int port = 0;
  std::string static_dir, data_dir;
  auto* srv = app.add_subcommand("serve", "HTTP/JSON game API");
  srv->add_option("--host", host)->capture_default_str();
  srv->add_option("--port", port, "Default: $KNIGHTS_PORT or 8080")
      ->check(CLI::Range(0, 65535));
  srv->add_option("--static", static_dir, "UI bundle directory");
  srv->add_option("--data-dir", data_dir, "Persist sessions as JSON files here");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kUsage;
  }

  try {
    if (*simulate) {
      sim.pretty = pretty;
      return run_simulate(sim);
    }
    if (*ver) {
      if (max_steps > 0) {
        caps.reflection_max_sum = max_steps;
        caps.visits_max_sum = max_steps;
      }
      caps.path_rooms_max_n = caps.spider_rooms_max_n;
      return run_verify(scope, caps, pretty);
    }
    if (*analyze) return run_analyze(transcript_path, an_n, an_l, an_limit, pretty);
    if (*autoplay) {
      setup.params = GameParams::make(ap_n, ap_l);
      if (!ap_spies.empty()) setup.spies = ap_spies;
      if (ap_s >= 0) setup.spy_count = ap_s;
      setup.seed = ap_seed;
      return run_autoplay(setup, pretty);
    }
    if (*srv) {
      GameStore store(data_dir.empty() ? std::nullopt
                                       : std::optional<std::filesystem::path>(data_dir));
      const int p = port > 0 ? port : default_port();
      std::cerr << "listening on http://" << host << ":" << p << '\n';
      serve(store, host, p,
            static_dir.empty() ? std::nullopt
                               : std::optional<std::filesystem::path>(static_dir));
      return 0;
    }
  } catch (const ResourceError& e) {
    std::cerr << "resource limit: " << e.what() << '\n';
    return kResource;
  } catch (const InternalError& e) {
    std::cerr << "internal check failed: " << e.what() << '\n';
    return kVerifyFailed;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kUsage;
  }
  return kUsage;
}
