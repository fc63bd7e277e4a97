#pragma once

#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "gamet/game.hpp"

namespace gamet {

enum class CheckKind { Equals, AtLeast, AtMost, IsTrue, IsFalse };

/// One expected quantity of a corpus game, with provenance.
struct ExpectedResult {
  std::string id;        // stable row id, e.g. "fig2/metric/apriori-bisim/t,s"
  std::string quantity;  // dispatcher key, see corpus.cpp
  std::map<std::string, std::string> args;
  CheckKind check = CheckKind::Equals;
  double expected = 0.0;
  /// For Equals rows; grid-approximated quantities carry the default-mesh
  /// certified error + 1e-3, exact ones a small slack.
  double tolerance = 1e-6;
  std::string provenance;  // stated / derived / direct
  std::string anchor;      // where the value comes from
};

struct CorpusEntry {
  std::string name;
  GameStructure game;
  std::string notes;  // reconstruction note when the game is inferred
  std::vector<ExpectedResult> expectations;
};

const std::vector<std::string>& corpus_names();
bool is_corpus_name(std::string_view name);
/// Throws std::invalid_argument for unknown names.
CorpusEntry builtin_game(std::string_view name);
/// Raw JSON document of a built-in game (the committed data file).
std::string builtin_game_text(std::string_view name);

enum class RowOutcome { Pass, ApproxFail, Fail };

struct SuiteRow {
  std::string id;
  std::string provenance;
  double expected = 0.0;
  double measured = 0.0;
  double tolerance = 0.0;
  CheckKind check = CheckKind::Equals;
  RowOutcome outcome = RowOutcome::Pass;
  std::string detail;
};

struct SuiteReport {
  double mesh = 0.0;
  double tol = 0.0;
  std::vector<SuiteRow> rows;
  int passed = 0;
  int failed = 0;
  int approx_failed = 0;
  bool all_pass() const { return failed == 0 && approx_failed == 0; }
};

/// Evaluates every expectation of every corpus entry plus a small
/// random-game property pass. Rows that miss their tolerance but whose
/// miss is explained by the run's certified approximation error are
/// flagged ApproxFail rather than Fail.
SuiteReport run_suite(double mesh, double tol, std::string_view only = {});

}  // namespace gamet
