// End-to-end checks of the command-line surface: exit codes, output
// shapes, and the byte-identical-JSON determinism contract.

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>

#include "doctest.h"

#ifndef GAMET_CLI_PATH
#error "GAMET_CLI_PATH must point at the built binary"
#endif

namespace {

struct RunResult {
  int exit_code;
  std::string output;  // stdout + stderr
};

RunResult run_cli(const std::string& args) {
  std::string out_path = "cli_test_output.tmp";
  std::string command = std::string(GAMET_CLI_PATH) + " " + args + " > " + out_path + " 2>&1";
  int status = std::system(command.c_str());
  std::ifstream in(out_path, std::ios::binary);
  std::ostringstream buf;
  buf << in.rdbuf();
  std::remove(out_path.c_str());
  int code = -1;
  if (WIFEXITED(status)) code = WEXITSTATUS(status);
  return {code, buf.str()};
}

void write_file(const std::string& path, const std::string& body) {
  std::ofstream out(path, std::ios::binary);
  out << body;
}

}  // namespace

TEST_CASE("validate: corpus game is valid, classified, exit 0") {
  RunResult r = run_cli("validate --corpus fig1");
  CHECK(r.exit_code == 0);
  CHECK(r.output.find("valid; concurrent; probabilistic") != std::string::npos);

  RunResult mdp = run_cli("validate --corpus fig4");
  CHECK(mdp.output.find("2-MDP") != std::string::npos);
  RunResult tb = run_cli("validate --corpus fig6");
  CHECK(tb.output.find("turn-based") != std::string::npos);
}

TEST_CASE("validate: truncated file exits 2, mass-deficient file exits 1") {
  write_file("cli_truncated.json", "{\"states\": [\"a\",");
  RunResult truncated = run_cli("validate --game cli_truncated.json");
  CHECK(truncated.exit_code == 2);
  CHECK(truncated.output.find("parse error") != std::string::npos);
  std::remove("cli_truncated.json");

  write_file("cli_deficient.json", R"({
    "states": ["a", "b"],
    "moves1": { "a": ["m"], "b": ["m"] },
    "moves2": { "a": ["m"], "b": ["m"] },
    "delta": {
      "a": { "m": { "m": { "a": 0.4, "b": 0.5 } } },
      "b": { "m": { "m": { "b": 1 } } }
    }
  })");
  RunResult deficient = run_cli("validate --game cli_deficient.json");
  CHECK(deficient.exit_code == 1);
  CHECK(deficient.output.find("mass") != std::string::npos);
  std::remove("cli_deficient.json");
}

TEST_CASE("eval: fig5 reachability in both semantics; constants everywhere") {
  RunResult mixed =
      run_cli("eval --corpus fig5 --formula \"mu X. (u_flag | pre1(X))\" --semantics mixed");
  CHECK(mixed.exit_code == 0);
  CHECK(mixed.output.find("s: 0.5") != std::string::npos);
  CHECK(mixed.output.find("t: 0.333333") != std::string::npos);

  RunResult pure =
      run_cli("eval --corpus fig5 --formula \"mu X. (u_flag | pre1(X))\" --semantics pure");
  CHECK(pure.output.find("s: 0\n") != std::string::npos);
  CHECK(pure.output.find("t: 0\n") != std::string::npos);

  RunResult constant = run_cli("eval --corpus fig1 --formula 0.25");
  CHECK(constant.exit_code == 0);
  CHECK(constant.output.find("s: 0.25") != std::string::npos);
  CHECK(constant.output.find("w: 0.25") != std::string::npos);

  RunResult bad = run_cli("eval --corpus fig1 --formula \"mu X. ~X\"");
  CHECK(bad.exit_code == 2);
  CHECK(bad.output.find("position") != std::string::npos);
}

TEST_CASE("metric: stated values and byte-identical JSON reruns") {
  RunResult human = run_cli("metric --corpus fig2 --kind apriori-bisim");
  CHECK(human.exit_code == 0);
  CHECK(human.output.find("0.5") != std::string::npos);

  RunResult a = run_cli("metric --corpus fig2 --kind apriori-bisim --out json");
  RunResult b = run_cli("metric --corpus fig2 --kind apriori-bisim --out json");
  CHECK(a.exit_code == 0);
  CHECK(a.output == b.output);
  CHECK(a.output.find("\"certified_error\"") != std::string::npos);

  RunResult coop = run_cli("metric --corpus fig3 --kind coop-bisim --out tsv");
  CHECK(coop.exit_code == 0);
  CHECK(coop.output.find("coop-bisim") != std::string::npos);

  RunResult unknown = run_cli("metric --corpus fig1 --kind bogus");
  CHECK(unknown.exit_code == 2);

  RunResult base = run_cli("metric --corpus fig2 --kind apriori-sim --iters 0");
  CHECK(base.exit_code == 0);
  CHECK(base.output.find("iterations 0") != std::string::npos);
}

TEST_CASE("kernel: blocks, pair lists, and the separations on fig5/fig6") {
  RunResult bisim = run_cli("kernel --corpus fig6 --relation game-bisim");
  CHECK(bisim.exit_code == 0);
  CHECK(bisim.output.find("{s, t}") != std::string::npos);

  RunResult alt = run_cli("kernel --corpus fig5 --relation alt-sim-pure --player 1");
  CHECK(alt.output.find("(s, t)") != std::string::npos);

  RunResult sim = run_cli("kernel --corpus fig5 --relation game-sim --player 1");
  CHECK(sim.output.find("(s, t)") == std::string::npos);

  RunResult cmp = run_cli("kernel --corpus fig6 --relation compare --out json");
  CHECK(cmp.exit_code == 0);
  CHECK(cmp.output.find("separations") != std::string::npos);
}

TEST_CASE("transship: standalone instances") {
  write_file("cli_transship.json", R"({
    "states": ["u", "v"],
    "p": { "u": "1/2", "v": "1/2" },
    "q": { "u": 1 },
    "d": [[0, 1], [1, 0]]
  })");
  RunResult r = run_cli("transship --input cli_transship.json");
  CHECK(r.exit_code == 0);
  CHECK(r.output.find("value 0.5") != std::string::npos);
  RunResult js = run_cli("transship --input cli_transship.json --out json");
  CHECK(js.output.find("\"value\": 0.5") != std::string::npos);
  std::remove("cli_transship.json");
}

TEST_CASE("suite: JSON output is byte-identical across runs") {
  RunResult a = run_cli("suite --only fig2 --out json");
  RunResult b = run_cli("suite --only fig2 --out json");
  CHECK(a.exit_code == 0);
  CHECK(a.output == b.output);
}

TEST_CASE("suite: exit status tracks failures; filters work") {
  RunResult only = run_cli("suite --only fig1");
  CHECK(only.exit_code == 0);
  CHECK(only.output.find("fig1/") != std::string::npos);
  CHECK(only.output.find("fig2/") == std::string::npos);

  RunResult unknown = run_cli("suite --only fig9");
  CHECK(unknown.exit_code == 2);

  RunResult coarse = run_cli("suite --mesh 0.5");
  CHECK(coarse.exit_code == 1);  // approx failures still fail the run
  CHECK(coarse.output.find("APPROX-FAIL") != std::string::npos);
}

TEST_CASE("usage errors exit 2") {
  CHECK(run_cli("metric --corpus fig1 --player 3").exit_code == 2);
  CHECK(run_cli("nonsense").exit_code == 2);
  CHECK(run_cli("eval --corpus fig1").exit_code == 2);  // missing --formula
}
