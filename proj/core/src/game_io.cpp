#include "gamet/game_io.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include "gamet/numeric.hpp"
#include "json.hpp"

namespace gamet {

using ordered_json = nlohmann::ordered_json;

namespace {

struct ParsedNumber {
  double value = 0.0;
  bool exact = false;
  Rational rational;
};

ParsedNumber parse_probability(const ordered_json& j, const std::string& where) {
  ParsedNumber out;
  if (j.is_number()) {
    out.value = j.get<double>();
    // integral JSON numbers are exact by construction
    double rounded = std::round(out.value);
    if (rounded == out.value && std::fabs(out.value) < 1e15) {
      out.exact = true;
      out.rational = Rational::of(static_cast<std::int64_t>(rounded), 1);
    }
    return out;
  }
  if (j.is_string()) {
    auto r = parse_rational(j.get<std::string>());
    if (!r) throw GameParseError(where + ": malformed probability '" + j.get<std::string>() + "'");
    out.exact = true;
    out.rational = *r;
    out.value = r->to_double();
    return out;
  }
  throw GameParseError(where + ": probability must be a number or a \"p/q\" string");
}

ordered_json parse_document(std::string_view text) {
  try {
    return ordered_json::parse(text, nullptr, true, /*ignore_comments=*/true);
  } catch (const nlohmann::json::parse_error& e) {
    throw GameParseError(std::string("malformed game document: ") + e.what());
  }
}

}  // namespace

LoadedGame parse_game_text(std::string_view text) {
  ordered_json doc = parse_document(text);
  if (!doc.is_object()) throw GameParseError("game document must be a JSON object");
  for (const char* key : {"states", "moves1", "moves2", "delta"})
    if (!doc.contains(key)) throw GameParseError(std::string("missing key '") + key + "'");

  LoadedGame out;
  GameStructure& g = out.game;
  auto bad = [&](std::string where, std::string message) {
    out.violations.push_back(Violation{std::move(where), std::move(message)});
  };

  if (!doc["states"].is_array()) throw GameParseError("'states' must be an array");
  for (const auto& s : doc["states"]) {
    if (!s.is_string()) throw GameParseError("'states' entries must be strings");
    if (g.state_index(s.get<std::string>()) >= 0)
      throw GameParseError("duplicate state " + s.get<std::string>());
    g.states.push_back(s.get<std::string>());
  }
  const int n = g.state_count();
  if (n == 0) throw GameParseError("empty state list");

  if (doc.contains("variables")) {
    if (!doc["variables"].is_object()) throw GameParseError("'variables' must be an object");
    for (const auto& [var, row] : doc["variables"].items()) {
      g.variables.push_back(var);
      std::vector<double> values(static_cast<size_t>(n), 0.0);
      if (!row.is_object()) throw GameParseError("variable " + var + " must map states to values");
      for (const auto& [state, value] : row.items()) {
        int idx = g.state_index(state);
        if (idx < 0) {
          bad("variables/" + var, "unknown state " + state);
          continue;
        }
        values[idx] = parse_probability(value, "variables/" + var + "/" + state).value;
      }
      g.var_values.push_back(std::move(values));
    }
  }

  auto read_moves = [&](const char* key, std::vector<std::vector<int>>& into) {
    const auto& section = doc[key];
    if (!section.is_object()) throw GameParseError(std::string("'") + key + "' must be an object");
    into.assign(static_cast<size_t>(n), {});
    std::vector<char> seen(static_cast<size_t>(n), 0);
    for (const auto& [state, list] : section.items()) {
      int idx = g.state_index(state);
      if (idx < 0) {
        bad(std::string(key) + "/" + state, "unknown state");
        continue;
      }
      seen[idx] = 1;
      if (!list.is_array()) throw GameParseError(std::string(key) + "/" + state + " must be an array");
      for (const auto& mv : list) {
        if (!mv.is_string()) throw GameParseError(std::string(key) + "/" + state + ": moves must be strings");
        std::string name = mv.get<std::string>();
        int mi = g.move_index(name);
        if (mi < 0) {
          mi = static_cast<int>(g.moves.size());
          g.moves.push_back(name);
        }
        if (std::find(into[idx].begin(), into[idx].end(), mi) != into[idx].end())
          bad(std::string(key) + "/" + state, "duplicate move " + name);
        else
          into[idx].push_back(mi);
      }
    }
    for (int s = 0; s < n; ++s)
      if (!seen[s]) bad(std::string(key) + "/" + g.states[s], "empty move set");
  };
  read_moves("moves1", g.moves1);
  read_moves("moves2", g.moves2);

  g.delta.assign(static_cast<size_t>(n), {});
  for (int s = 0; s < n; ++s)
    g.delta[s].assign(g.moves1[s].size() * g.moves2[s].size(),
                      Distribution(std::vector<double>(static_cast<size_t>(n), 0.0)));

  const auto& delta = doc["delta"];
  if (!delta.is_object()) throw GameParseError("'delta' must be an object");
  std::vector<std::vector<char>> cell_seen(static_cast<size_t>(n));
  for (int s = 0; s < n; ++s) cell_seen[s].assign(g.delta[s].size(), 0);

  for (const auto& [state, by_m1] : delta.items()) {
    int s = g.state_index(state);
    if (s < 0) {
      bad("delta/" + state, "unknown state");
      continue;
    }
    if (!by_m1.is_object()) throw GameParseError("delta/" + state + " must be an object");
    for (const auto& [m1name, by_m2] : by_m1.items()) {
      int m1 = g.move_index(m1name);
      auto pos1 = m1 < 0 ? g.moves1[s].end()
                         : std::find(g.moves1[s].begin(), g.moves1[s].end(), m1);
      if (pos1 == g.moves1[s].end()) {
        bad("delta/" + state, "transition for unavailable player-1 move " + m1name);
        continue;
      }
      size_t i1 = static_cast<size_t>(pos1 - g.moves1[s].begin());
      if (!by_m2.is_object())
        throw GameParseError("delta/" + state + "/" + m1name + " must be an object");
      for (const auto& [m2name, targets] : by_m2.items()) {
        int m2 = g.move_index(m2name);
        auto pos2 = m2 < 0 ? g.moves2[s].end()
                           : std::find(g.moves2[s].begin(), g.moves2[s].end(), m2);
        if (pos2 == g.moves2[s].end()) {
          bad("delta/" + state, "transition for unavailable player-2 move " + m2name);
          continue;
        }
        size_t i2 = static_cast<size_t>(pos2 - g.moves2[s].begin());
        std::string where = "delta/" + state + "/" + m1name + "/" + m2name;
        if (!targets.is_object()) throw GameParseError(where + " must map states to probabilities");
        std::vector<double> probs(static_cast<size_t>(n), 0.0);
        bool all_exact = true;
        Rational total = Rational::of(0, 1);
        for (const auto& [target, value] : targets.items()) {
          int t = g.state_index(target);
          if (t < 0) {
            bad(where, "unknown target state " + target);
            continue;
          }
          ParsedNumber pn = parse_probability(value, where + "/" + target);
          probs[t] = pn.value;
          if (pn.exact && all_exact)
            total = total.plus(pn.rational);
          else
            all_exact = false;
        }
        if (all_exact && !total.is_one())
          bad(where, "exact mass " + std::to_string(total.num) + "/" + std::to_string(total.den) +
                         " != 1");
        cell_seen[s][i1 * g.moves2[s].size() + i2] = 1;
        g.delta[s][i1 * g.moves2[s].size() + i2] = Distribution(std::move(probs));
      }
    }
  }
  for (int s = 0; s < n; ++s)
    for (size_t i1 = 0; i1 < g.moves1[s].size(); ++i1)
      for (size_t i2 = 0; i2 < g.moves2[s].size(); ++i2)
        if (!cell_seen[s][i1 * g.moves2[s].size() + i2])
          bad("delta/" + g.states[s],
              "missing transition for (" + g.moves[g.moves1[s][i1]] + ", " +
                  g.moves[g.moves2[s][i2]] + ")");
  return out;
}

LoadedGame load_game_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw GameParseError("cannot read " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_game_text(buf.str());
}

std::string game_to_json(const GameStructure& g) {
  ordered_json doc;
  doc["states"] = g.states;
  ordered_json vars = ordered_json::object();
  for (size_t v = 0; v < g.variables.size(); ++v) {
    ordered_json row = ordered_json::object();
    for (int s = 0; s < g.state_count(); ++s)
      if (g.var_values[v][s] != 0.0) row[g.states[s]] = g.var_values[v][s];
    vars[g.variables[v]] = std::move(row);
  }
  doc["variables"] = std::move(vars);
  auto moves_out = [&](const std::vector<std::vector<int>>& source) {
    ordered_json section = ordered_json::object();
    for (int s = 0; s < g.state_count(); ++s) {
      ordered_json list = ordered_json::array();
      for (int mv : source[s]) list.push_back(g.moves[mv]);
      section[g.states[s]] = std::move(list);
    }
    return section;
  };
  doc["moves1"] = moves_out(g.moves1);
  doc["moves2"] = moves_out(g.moves2);
  ordered_json delta = ordered_json::object();
  for (int s = 0; s < g.state_count(); ++s) {
    ordered_json by_m1 = ordered_json::object();
    for (size_t i1 = 0; i1 < g.moves1[s].size(); ++i1) {
      ordered_json by_m2 = ordered_json::object();
      for (size_t i2 = 0; i2 < g.moves2[s].size(); ++i2) {
        const Distribution& d = g.transition(s, static_cast<int>(i1), static_cast<int>(i2));
        ordered_json targets = ordered_json::object();
        for (int t = 0; t < g.state_count(); ++t)
          if (d[t] != 0.0) targets[g.states[t]] = d[t];
        by_m2[g.moves[g.moves2[s][i2]]] = std::move(targets);
      }
      by_m1[g.moves[g.moves1[s][i1]]] = std::move(by_m2);
    }
    delta[g.states[s]] = std::move(by_m1);
  }
  doc["delta"] = std::move(delta);
  return doc.dump(2);
}

namespace {

ordered_json metric_report_core(const MetricReport& report, const GameStructure& g) {
  ordered_json doc;
  doc["kind"] = metric_kind_name(report.kind);
  doc["player"] = report.player;
  doc["states"] = g.states;
  ordered_json matrix = ordered_json::array();
  for (int s = 0; s < report.metric.size(); ++s) {
    ordered_json row = ordered_json::array();
    for (int t = 0; t < report.metric.size(); ++t) row.push_back(report.metric(s, t));
    matrix.push_back(std::move(row));
  }
  doc["matrix"] = std::move(matrix);
  doc["iterations"] = report.iterations;
  doc["last_delta"] = report.last_delta;
  doc["converged"] = report.converged;
  doc["mesh"] = report.mesh;
  doc["certified_error"] = report.certified_error;
  doc["step_deltas"] = report.step_deltas;
  ordered_json history = ordered_json::array();
  for (const DirectedMetric& it : report.iterate_history) {
    ordered_json m = ordered_json::array();
    for (int s = 0; s < it.size(); ++s) {
      ordered_json row = ordered_json::array();
      for (int t = 0; t < it.size(); ++t) row.push_back(it(s, t));
      m.push_back(std::move(row));
    }
    history.push_back(std::move(m));
  }
  doc["iterate_history"] = std::move(history);
  return doc;
}

}  // namespace

std::string eval_result_to_json(const EvalResult& result, const GameStructure& g) {
  ordered_json doc;
  ordered_json values = ordered_json::object();
  for (int s = 0; s < g.state_count(); ++s) values[g.states[s]] = result.value[s];
  doc["values"] = std::move(values);
  doc["converged"] = result.converged;
  ordered_json fixpoints = ordered_json::array();
  for (const auto& fp : result.fixpoints) {
    ordered_json entry;
    entry["binder"] = fp.binder;
    entry["iterations"] = fp.iterations;
    entry["last_delta"] = fp.last_delta;
    entry["converged"] = fp.converged;
    fixpoints.push_back(std::move(entry));
  }
  doc["fixpoints"] = std::move(fixpoints);
  return doc.dump(2);
}

std::string metric_report_to_json(const MetricReport& report, const GameStructure& g) {
  return metric_report_core(report, g).dump(2);
}

std::string metric_report_to_tsv(const MetricReport& report, const GameStructure& g) {
  std::ostringstream os;
  os << "# kind=" << metric_kind_name(report.kind) << "\tplayer=" << report.player
     << "\titerations=" << report.iterations << "\tlast_delta=" << report.last_delta
     << "\tconverged=" << (report.converged ? "true" : "false") << "\tmesh=" << report.mesh
     << "\tcertified_error=" << report.certified_error << "\tstep_deltas=";
  for (size_t i = 0; i < report.step_deltas.size(); ++i)
    os << (i ? "," : "") << report.step_deltas[i];
  os << "\n";
  os << "state";
  for (const auto& s : g.states) os << "\t" << s;
  os << "\n";
  os.precision(17);
  for (int s = 0; s < report.metric.size(); ++s) {
    os << g.states[s];
    for (int t = 0; t < report.metric.size(); ++t) os << "\t" << report.metric(s, t);
    os << "\n";
  }
  return os.str();
}

std::string metric_report_to_table(const MetricReport& report, const GameStructure& g) {
  std::ostringstream os;
  os << metric_kind_name(report.kind) << " metric, player " << report.player << "\n";
  os << "iterations " << report.iterations << ", last delta " << format_number(report.last_delta)
     << (report.converged ? " (converged)" : " (not converged)") << ", mesh "
     << format_number(report.mesh) << ", certified error "
     << format_number(report.certified_error) << "\n";
  size_t width = 6;
  for (const auto& s : g.states) width = std::max(width, s.size() + 2);
  os << std::string(width, ' ');
  for (const auto& s : g.states) {
    os << s;
    os << std::string(width > s.size() ? width - s.size() : 1, ' ');
  }
  os << "\n";
  for (int s = 0; s < report.metric.size(); ++s) {
    os << g.states[s]
       << std::string(width > g.states[s].size() ? width - g.states[s].size() : 1, ' ');
    for (int t = 0; t < report.metric.size(); ++t) {
      std::string v = format_number(report.metric(s, t));
      os << v << std::string(width > v.size() ? width - v.size() : 1, ' ');
    }
    os << "\n";
  }
  return os.str();
}

std::string partition_to_json(const Partition& p, const GameStructure& g) {
  ordered_json doc;
  ordered_json blocks = ordered_json::array();
  for (const auto& block : p.blocks()) {
    ordered_json names = ordered_json::array();
    for (State s : block) names.push_back(g.states[s]);
    blocks.push_back(std::move(names));
  }
  doc["blocks"] = std::move(blocks);
  return doc.dump(2);
}

std::string relation_to_json(const RelationSet& r, const GameStructure& g,
                             const std::vector<std::pair<State, State>>& within_margin) {
  ordered_json doc;
  ordered_json pairs = ordered_json::array();
  for (auto [s, t] : r.pairs()) pairs.push_back(ordered_json::array({g.states[s], g.states[t]}));
  doc["pairs"] = std::move(pairs);
  ordered_json margin = ordered_json::array();
  for (auto [s, t] : within_margin)
    margin.push_back(ordered_json::array({g.states[s], g.states[t]}));
  doc["within_margin"] = std::move(margin);
  return doc.dump(2);
}

std::string comparison_to_json(const RelationComparison& c, const GameStructure& g) {
  ordered_json doc;
  doc["mesh"] = c.mesh;
  doc["zero_set_threshold"] = c.zero_set_threshold;
  ordered_json rels = ordered_json::array();
  for (const auto& nr : c.relations) {
    ordered_json entry;
    entry["name"] = nr.name;
    ordered_json pairs = ordered_json::array();
    for (auto [s, t] : nr.relation.pairs())
      pairs.push_back(ordered_json::array({g.states[s], g.states[t]}));
    entry["pairs"] = std::move(pairs);
    rels.push_back(std::move(entry));
  }
  doc["relations"] = std::move(rels);
  ordered_json seps = ordered_json::array();
  for (const auto& sep : c.separations) {
    ordered_json entry;
    entry["relation_a"] = sep.relation_a;
    entry["relation_b"] = sep.relation_b;
    entry["witness_pair"] = ordered_json::array(
        {g.states[sep.witness_pair.first], g.states[sep.witness_pair.second]});
    entry["direction"] = sep.direction;
    seps.push_back(std::move(entry));
  }
  doc["separations"] = std::move(seps);
  return doc.dump(2);
}

namespace {

const char* outcome_name(RowOutcome o) {
  switch (o) {
    case RowOutcome::Pass: return "PASS";
    case RowOutcome::ApproxFail: return "APPROX-FAIL";
    case RowOutcome::Fail: return "FAIL";
  }
  return "?";
}

const char* check_name(CheckKind c) {
  switch (c) {
    case CheckKind::Equals: return "equals";
    case CheckKind::AtLeast: return "at_least";
    case CheckKind::AtMost: return "at_most";
    case CheckKind::IsTrue: return "is_true";
    case CheckKind::IsFalse: return "is_false";
  }
  return "?";
}

}  // namespace

std::string suite_report_to_json(const SuiteReport& report) {
  ordered_json doc;
  doc["mesh"] = report.mesh;
  doc["tol"] = report.tol;
  doc["passed"] = report.passed;
  doc["failed"] = report.failed;
  doc["approx_failed"] = report.approx_failed;
  ordered_json rows = ordered_json::array();
  for (const auto& row : report.rows) {
    ordered_json r;
    r["id"] = row.id;
    r["provenance"] = row.provenance;
    r["check"] = check_name(row.check);
    r["expected"] = row.expected;
    r["measured"] = row.measured;
    r["tolerance"] = row.tolerance;
    r["outcome"] = outcome_name(row.outcome);
    r["detail"] = row.detail;
    rows.push_back(std::move(r));
  }
  doc["rows"] = std::move(rows);
  return doc.dump(2);
}

std::string suite_report_to_table(const SuiteReport& report) {
  std::ostringstream os;
  size_t width = 10;
  for (const auto& row : report.rows) width = std::max(width, row.id.size() + 2);
  for (const auto& row : report.rows) {
    os << outcome_name(row.outcome);
    os << std::string(row.outcome == RowOutcome::Pass ? 9 : (row.outcome == RowOutcome::Fail ? 9 : 2), ' ');
    os << row.id << std::string(width - row.id.size(), ' ');
    os << check_name(row.check) << " ";
    os << "expected " << format_number(row.expected) << " measured "
       << format_number(row.measured) << " tol " << format_number(row.tolerance);
    if (!row.detail.empty()) os << "  [" << row.detail << "]";
    os << "\n";
  }
  os << report.passed << " passed, " << report.failed << " failed, " << report.approx_failed
     << " approx-failed (mesh " << format_number(report.mesh) << ", tol "
     << format_number(report.tol) << ")\n";
  return os.str();
}

TransshipInstance parse_transship_text(std::string_view text) {
  ordered_json doc = parse_document(text);
  if (!doc.is_object() || !doc.contains("states") || !doc.contains("p") || !doc.contains("q") ||
      !doc.contains("d"))
    throw GameParseError("transship document needs keys states, p, q, d");
  TransshipInstance inst;
  for (const auto& s : doc["states"]) inst.states.push_back(s.get<std::string>());
  const int n = static_cast<int>(inst.states.size());
  auto index = [&](const std::string& name) {
    for (int i = 0; i < n; ++i)
      if (inst.states[i] == name) return i;
    throw GameParseError("unknown state " + name);
  };
  auto dist = [&](const ordered_json& row, const char* what) {
    std::vector<double> p(static_cast<size_t>(n), 0.0);
    for (const auto& [state, value] : row.items())
      p[index(state)] = parse_probability(value, what).value;
    return Distribution(std::move(p));
  };
  inst.p = dist(doc["p"], "p");
  inst.q = dist(doc["q"], "q");
  if (!doc["d"].is_array() || static_cast<int>(doc["d"].size()) != n)
    throw GameParseError("d must be an n x n matrix");
  DirectedMetric d(n);
  for (int s = 0; s < n; ++s) {
    if (static_cast<int>(doc["d"][s].size()) != n) throw GameParseError("d must be an n x n matrix");
    for (int t = 0; t < n; ++t)
      d.at(s, t) = parse_probability(doc["d"][s][t], "d").value;
  }
  inst.d = std::move(d);
  return inst;
}

std::string transship_result_to_json(const TransshipInstance& inst, double value,
                                     const TransshipPlan& plan) {
  ordered_json doc;
  doc["states"] = inst.states;
  doc["value"] = value;
  ordered_json flow = ordered_json::array();
  for (int s = 0; s < plan.n; ++s) {
    ordered_json row = ordered_json::array();
    for (int t = 0; t < plan.n; ++t) row.push_back(plan.at(s, t));
    flow.push_back(std::move(row));
  }
  doc["plan"] = std::move(flow);
  return doc.dump(2);
}

}  // namespace gamet
