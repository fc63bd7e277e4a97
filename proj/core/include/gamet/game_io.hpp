#pragma once

#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "gamet/corpus.hpp"
#include "gamet/game.hpp"
#include "gamet/kernel.hpp"
#include "gamet/metric.hpp"
#include "gamet/qmu.hpp"

namespace gamet {

struct GameParseError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct LoadedGame {
  GameStructure game;
  /// Parse-level violations (exact rational mass mismatches, moves used
  /// in delta but not declared, ...). The structural invariants are
  /// checked separately by validate_structure.
  std::vector<Violation> violations;
};

/// Parses the game file format: a JSON document with keys `states`,
/// `variables`, `moves1`, `moves2`, `delta`; probabilities are numbers or
/// exact "p/q" strings; absent targets mean probability 0. Comments
/// (// and /* */) are allowed and ignored. Throws GameParseError on
/// malformed documents.
LoadedGame parse_game_text(std::string_view text);
LoadedGame load_game_file(const std::string& path);

std::string game_to_json(const GameStructure& g);

// Serialization of results. JSON output is deterministic: fixed key
// order, full round-trip doubles.
std::string eval_result_to_json(const EvalResult& result, const GameStructure& g);
std::string metric_report_to_json(const MetricReport& report, const GameStructure& g);
std::string metric_report_to_tsv(const MetricReport& report, const GameStructure& g);
std::string metric_report_to_table(const MetricReport& report, const GameStructure& g);

std::string partition_to_json(const Partition& p, const GameStructure& g);
std::string relation_to_json(const RelationSet& r, const GameStructure& g,
                             const std::vector<std::pair<State, State>>& within_margin = {});
std::string comparison_to_json(const RelationComparison& c, const GameStructure& g);

std::string suite_report_to_json(const SuiteReport& report);
std::string suite_report_to_table(const SuiteReport& report);

struct TransshipInstance {
  std::vector<std::string> states;
  Distribution p;
  Distribution q;
  DirectedMetric d;
};

/// Standalone trans-shipping instance: JSON with `states`, `p`, `q`
/// (maps state -> probability) and `d` (row-major cost matrix).
TransshipInstance parse_transship_text(std::string_view text);
std::string transship_result_to_json(const TransshipInstance& inst, double value,
                                     const TransshipPlan& plan);

}  // namespace gamet
