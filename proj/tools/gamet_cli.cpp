// Command-line front end: validate | eval | metric | kernel | transship | suite.
// Exit codes: 0 success, 1 domain violation or suite failure, 2 usage or
// parse errors.

#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "gamet/corpus.hpp"
#include "gamet/game_io.hpp"
#include "gamet/kernel.hpp"
#include "gamet/metric.hpp"
#include "gamet/numeric.hpp"
#include "gamet/qmu.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitViolation = 1;
constexpr int kExitUsage = 2;

struct GameInput {
  std::string path;
  std::string corpus;
};

void add_game_flags(CLI::App* cmd, GameInput& input) {
  auto* game = cmd->add_option("--game", input.path, "game file (JSON)");
  auto* corpus = cmd->add_option("--corpus", input.corpus, "built-in game name");
  game->excludes(corpus);
}

gamet::LoadedGame load_input(const GameInput& input) {
  if (!input.corpus.empty()) {
    if (!gamet::is_corpus_name(input.corpus))
      throw gamet::GameParseError("unknown corpus game: " + input.corpus);
    return gamet::parse_game_text(gamet::builtin_game_text(input.corpus));
  }
  if (input.path.empty()) throw gamet::GameParseError("need --game PATH or --corpus NAME");
  return gamet::load_game_file(input.path);
}

gamet::GameStructure load_valid_game(const GameInput& input, int& exit_code) {
  gamet::LoadedGame loaded = load_input(input);
  auto violations = gamet::validate_structure(loaded.game);
  for (const auto& v : loaded.violations)
    std::cerr << "violation: " << v.where << ": " << v.message << "\n";
  for (const auto& v : violations) std::cerr << "violation: " << v.where << ": " << v.message << "\n";
  if (!loaded.violations.empty() || !violations.empty()) {
    exit_code = kExitViolation;
  }
  return loaded.game;
}

std::string classify_line(const gamet::GameStructure& g) {
  gamet::StructureClass c = gamet::classify_structure(g);
  std::string line = c.turn_based ? "turn-based" : "concurrent";
  line += c.deterministic ? "; deterministic" : "; probabilistic";
  if (c.mdp_for_1) line += "; 1-MDP";
  if (c.mdp_for_2) line += "; 2-MDP";
  return line;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"game refinement metrics and relations"};
  app.require_subcommand(1);

  // validate ----------------------------------------------------------
  GameInput validate_input;
  auto* cmd_validate = app.add_subcommand("validate", "check a game file and classify it");
  add_game_flags(cmd_validate, validate_input);

  // eval --------------------------------------------------------------
  GameInput eval_input;
  std::string eval_formula;
  std::string eval_semantics = "mixed";
  double eval_tol = 1e-6;
  int eval_iters = 10000;
  std::string eval_out = "table";
  auto* cmd_eval = app.add_subcommand("eval", "evaluate a formula over a game");
  add_game_flags(cmd_eval, eval_input);
  cmd_eval->add_option("--formula", eval_formula, "formula text")->required();
  cmd_eval->add_option("--semantics", eval_semantics, "mixed|pure")
      ->check(CLI::IsMember({"mixed", "pure"}));
  cmd_eval->add_option("--tol", eval_tol, "fixpoint stopping tolerance");
  cmd_eval->add_option("--iters", eval_iters, "fixpoint iteration budget");
  cmd_eval->add_option("--out", eval_out, "json|table")->check(CLI::IsMember({"json", "table"}));

  // metric -------------------------------------------------------------
  GameInput metric_input;
  std::string metric_kind = "apriori-bisim";
  int metric_player = 1;
  double metric_mesh = 0.05, metric_tol = 1e-6;
  int metric_iters = 50;
  std::string metric_out = "table";
  auto* cmd_metric = app.add_subcommand("metric", "iterate a metric to its fixpoint");
  add_game_flags(cmd_metric, metric_input);
  cmd_metric->add_option("--kind", metric_kind, "metric kind")
      ->check(CLI::IsMember({"apriori-sim", "apriori-bisim", "aposteriori-sim",
                             "aposteriori-bisim", "coop-sim", "coop-bisim"}));
  cmd_metric->add_option("--player", metric_player, "1|2")->check(CLI::IsMember({1, 2}));
  cmd_metric->add_option("--mesh", metric_mesh, "grid mesh for sup over C(d)");
  cmd_metric->add_option("--tol", metric_tol, "iteration stopping tolerance");
  cmd_metric->add_option("--iters", metric_iters, "iteration budget");
  cmd_metric->add_option("--out", metric_out, "json|tsv|table")
      ->check(CLI::IsMember({"json", "tsv", "table"}));

  // kernel --------------------------------------------------------------
  GameInput kernel_input;
  std::string kernel_relation = "game-bisim";
  int kernel_player = 1;
  double kernel_mesh = 0.05;
  std::string kernel_out = "table";
  auto* cmd_kernel = app.add_subcommand("kernel", "compute a relation or partition");
  add_game_flags(cmd_kernel, kernel_input);
  cmd_kernel->add_option("--relation", kernel_relation, "relation kind")
      ->check(CLI::IsMember({"game-sim", "game-bisim", "classical-bisim", "alt-sim-pure",
                             "compare"}));
  cmd_kernel->add_option("--player", kernel_player, "1|2")->check(CLI::IsMember({1, 2}));
  cmd_kernel->add_option("--mesh", kernel_mesh, "grid mesh for the concurrent route");
  cmd_kernel->add_option("--out", kernel_out, "json|table")
      ->check(CLI::IsMember({"json", "table"}));

  // transship ------------------------------------------------------------
  std::string transship_input;
  std::string transship_out = "table";
  auto* cmd_transship =
      app.add_subcommand("transship", "minimum-cost shipping between two distributions");
  cmd_transship->add_option("--input", transship_input, "instance file (states, p, q, d)")
      ->required();
  cmd_transship->add_option("--out", transship_out, "json|table")
      ->check(CLI::IsMember({"json", "table"}));

  // suite ------------------------------------------------------------------
  double suite_mesh = 0.05, suite_tol = 1e-6;
  std::string suite_only;
  std::string suite_out = "table";
  auto* cmd_suite = app.add_subcommand("suite", "run the built-in verification suite");
  cmd_suite->add_option("--mesh", suite_mesh, "grid mesh");
  cmd_suite->add_option("--tol", suite_tol, "iteration tolerance");
  cmd_suite->add_option("--only", suite_only, "run a single corpus entry");
  cmd_suite->add_option("--out", suite_out, "json|table")
      ->check(CLI::IsMember({"json", "table"}));

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);  // --help
    app.exit(e);
    return kExitUsage;
  }

  try {
    if (cmd_validate->parsed()) {
      int exit_code = kExitOk;
      gamet::GameStructure g = load_valid_game(validate_input, exit_code);
      if (exit_code == kExitOk) std::cout << "valid; " << classify_line(g) << "\n";
      return exit_code;
    }

    if (cmd_eval->parsed()) {
      int exit_code = kExitOk;
      gamet::GameStructure g = load_valid_game(eval_input, exit_code);
      if (exit_code != kExitOk) return exit_code;
      gamet::Formula f;
      try {
        f = gamet::parse_formula(eval_formula);
      } catch (const gamet::FormulaParseError& e) {
        std::cerr << "formula error: " << e.what() << "\n";
        return kExitUsage;
      }
      gamet::EvalOptions opts;
      opts.semantics =
          eval_semantics == "pure" ? gamet::Semantics::Pure : gamet::Semantics::Mixed;
      opts.tol = eval_tol;
      opts.max_iters = eval_iters;
      gamet::WellformednessReport wf = gamet::check_wellformed(f);
      if (!wf.is_closed) {
        std::cerr << "formula error: formula is not closed\n";
        return kExitUsage;
      }
      gamet::EvalResult res = gamet::evaluate(g, f, opts);
      if (eval_out == "json") {
        std::cout << gamet::eval_result_to_json(res, g) << "\n";
      } else {
        std::cout << "formula: closed"
                  << (wf.is_positive ? "; positive" : "; not positive")
                  << (wf.player_restriction == gamet::PlayerRestriction::Player1   ? "; player 1"
                      : wf.player_restriction == gamet::PlayerRestriction::Player2 ? "; player 2"
                      : wf.player_restriction == gamet::PlayerRestriction::Both    ? "; both players"
                                                                                   : "; mixed players")
                  << "\n";
        for (int s = 0; s < g.state_count(); ++s)
          std::cout << g.states[s] << ": " << gamet::format_number(res.value[s]) << "\n";
        for (const auto& fp : res.fixpoints)
          std::cout << "fixpoint " << fp.binder << ": " << fp.iterations
                    << " iterations, last delta " << gamet::format_number(fp.last_delta)
                    << (fp.converged ? "" : " (budget exhausted)") << "\n";
      }
      return kExitOk;  // non-convergence is reported, the partial result stands
    }

    if (cmd_metric->parsed()) {
      int exit_code = kExitOk;
      gamet::GameStructure g = load_valid_game(metric_input, exit_code);
      if (exit_code != kExitOk) return exit_code;
      gamet::MetricReport report = gamet::iterate_metric(
          g, gamet::metric_kind_from_name(metric_kind), metric_player, metric_iters, metric_tol,
          metric_mesh);
      if (metric_out == "json")
        std::cout << gamet::metric_report_to_json(report, g) << "\n";
      else if (metric_out == "tsv")
        std::cout << gamet::metric_report_to_tsv(report, g);
      else
        std::cout << gamet::metric_report_to_table(report, g);
      return kExitOk;
    }

    if (cmd_kernel->parsed()) {
      int exit_code = kExitOk;
      gamet::GameStructure g = load_valid_game(kernel_input, exit_code);
      if (exit_code != kExitOk) return exit_code;
      if (kernel_relation == "game-bisim") {
        auto res = gamet::game_bisim_kernel(g, kernel_mesh);
        if (kernel_out == "json")
          std::cout << gamet::partition_to_json(res.partition, g) << "\n";
        else {
          for (const auto& block : res.partition.blocks()) {
            std::cout << "{";
            for (size_t i = 0; i < block.size(); ++i)
              std::cout << (i ? ", " : "") << g.states[block[i]];
            std::cout << "}\n";
          }
          for (auto [s, t] : res.within_margin)
            std::cout << "within-margin: (" << g.states[s] << ", " << g.states[t] << ")\n";
        }
      } else if (kernel_relation == "classical-bisim") {
        auto p = gamet::classical_bisim_kernel(g);
        if (kernel_out == "json")
          std::cout << gamet::partition_to_json(p, g) << "\n";
        else
          for (const auto& block : p.blocks()) {
            std::cout << "{";
            for (size_t i = 0; i < block.size(); ++i)
              std::cout << (i ? ", " : "") << g.states[block[i]];
            std::cout << "}\n";
          }
      } else if (kernel_relation == "game-sim") {
        auto res = gamet::game_sim_kernel(g, kernel_player, kernel_mesh);
        if (kernel_out == "json")
          std::cout << gamet::relation_to_json(res.relation, g, res.within_margin) << "\n";
        else {
          for (auto [s, t] : res.relation.pairs())
            std::cout << "(" << g.states[s] << ", " << g.states[t] << ")\n";
          for (auto [s, t] : res.within_margin)
            std::cout << "within-margin: (" << g.states[s] << ", " << g.states[t] << ")\n";
        }
      } else if (kernel_relation == "alt-sim-pure") {
        auto r = gamet::alt_sim_pure(g, kernel_player);
        if (kernel_out == "json")
          std::cout << gamet::relation_to_json(r, g) << "\n";
        else
          for (auto [s, t] : r.pairs())
            std::cout << "(" << g.states[s] << ", " << g.states[t] << ")\n";
      } else {  // compare
        auto cmp = gamet::compare_relations(g, kernel_mesh);
        if (kernel_out == "json")
          std::cout << gamet::comparison_to_json(cmp, g) << "\n";
        else {
          for (const auto& nr : cmp.relations)
            std::cout << nr.name << ": " << nr.relation.pair_count() << " pairs\n";
          for (const auto& sep : cmp.separations)
            std::cout << sep.relation_a << " not within " << sep.relation_b << ": witness ("
                      << g.states[sep.witness_pair.first] << ", "
                      << g.states[sep.witness_pair.second] << ")\n";
        }
      }
      return kExitOk;
    }

    if (cmd_transship->parsed()) {
      std::ifstream in(transship_input, std::ios::binary);
      if (!in) throw gamet::GameParseError("cannot read " + transship_input);
      std::ostringstream buf;
      buf << in.rdbuf();
      gamet::TransshipInstance inst = gamet::parse_transship_text(buf.str());
      auto res = gamet::transship_distance(inst.p, inst.q, gamet::tighten(inst.d));
      if (transship_out == "json")
        std::cout << gamet::transship_result_to_json(inst, res.value, res.plan) << "\n";
      else
        std::cout << "value " << gamet::format_number(res.value) << "\n";
      return kExitOk;
    }

    if (cmd_suite->parsed()) {
      if (!suite_only.empty() && !gamet::is_corpus_name(suite_only) && suite_only != "property") {
        std::cerr << "unknown corpus entry: " << suite_only << "\n";
        return kExitUsage;
      }
      gamet::SuiteReport report = gamet::run_suite(suite_mesh, suite_tol, suite_only);
      if (suite_out == "json")
        std::cout << gamet::suite_report_to_json(report) << "\n";
      else
        std::cout << gamet::suite_report_to_table(report);
      return report.all_pass() ? kExitOk : kExitViolation;
    }
  } catch (const gamet::GameParseError& e) {
    std::cerr << "parse error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const gamet::FormulaParseError& e) {
    std::cerr << "formula error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::invalid_argument& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitViolation;
  }
  return kExitUsage;
}
