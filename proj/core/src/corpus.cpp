#include "gamet/corpus.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <map>
#include <random>
#include <stdexcept>

#include "gamet/game_io.hpp"
#include "gamet/kernel.hpp"
#include "gamet/metric.hpp"
#include "gamet/numeric.hpp"
#include "gamet/qmu.hpp"
#include "gamet/random_game.hpp"

namespace gamet {

namespace {

struct RawEntry {
  const char* name;
  const char* text;
};

const RawEntry kCorpusData[] = {
#include "corpus_data.inc"
};

constexpr double kDefaultMesh = 0.05;
// stated-value tolerance = default-mesh certified error + 1e-3
constexpr double kGridTol = kDefaultMesh + 1e-3;
constexpr double kExactTol = 1e-3;

using Args = std::map<std::string, std::string>;

ExpectedResult row(std::string id, std::string quantity, Args args, CheckKind check,
                   double expected, double tolerance, std::string provenance,
                   std::string anchor) {
  ExpectedResult r;
  r.id = std::move(id);
  r.quantity = std::move(quantity);
  r.args = std::move(args);
  r.check = check;
  r.expected = expected;
  r.tolerance = tolerance;
  r.provenance = std::move(provenance);
  r.anchor = std::move(anchor);
  return r;
}

std::vector<ExpectedResult> expectations_for(const std::string& name) {
  std::vector<ExpectedResult> rows;
  auto add = [&](std::string id_suffix, std::string quantity, Args args, CheckKind check,
                 double expected, double tolerance, std::string provenance, std::string anchor) {
    rows.push_back(row(name + "/" + id_suffix, std::move(quantity), std::move(args), check,
                       expected, tolerance, std::move(provenance), std::move(anchor)));
  };

  // every corpus game must parse and validate cleanly
  add("valid", "valid", {}, CheckKind::Equals, 0.0, 0.0, "stated",
      "figure transition tables sum to one");

  if (name == "fig1") {
    add("obs/u,w", "obs_distance", {{"s", "u"}, {"t", "w"}}, CheckKind::Equals, 1.0, 1e-9,
        "stated", "u and w are observably distinct sinks");
    add("obs/s,t", "obs_distance", {{"s", "s"}, {"t", "t"}}, CheckKind::Equals, 0.0, 1e-9,
        "stated", "s and t observe alike");
    add("classify/nothing-special", "flag_none", {}, CheckKind::IsTrue, 1.0, 0.0, "derived",
        "both players have two moves at t; rows are ninths");
    add("pre/1/t/w", "pre", {{"player", "1"}, {"state", "t"}, {"k", "state:w"}},
        CheckKind::Equals, 4.0 / 9.0, 1e-7, "derived",
        "row c dominates row b in the w-mass table, column f minimizes");
    add("pre/1/s/w", "pre", {{"player", "1"}, {"state", "s"}, {"k", "state:w"}},
        CheckKind::Equals, 1.0 / 3.0, 1e-7, "derived", "single row, column f minimizes");
    add("metric/apriori-sim-1/s,t", "metric",
        {{"kind", "apriori-sim"}, {"player", "1"}, {"s", "s"}, {"t", "t"}}, CheckKind::Equals,
        0.0, kGridTol, "stated", "a priori distance from s to t vanishes");
    add("metric/aposteriori-sim-1/s,t", "metric",
        {{"kind", "aposteriori-sim"}, {"player", "1"}, {"s", "s"}, {"t", "t"}},
        CheckKind::AtLeast, 0.02, 0.0, "stated", "a posteriori distance from s to t is positive");
    add("metric/aposteriori-sim-2/t,s", "metric",
        {{"kind", "aposteriori-sim"}, {"player", "2"}, {"s", "t"}, {"t", "s"}},
        CheckKind::Equals, 0.0, kGridTol, "stated",
        "player-2 witness mixes transition masses to w equal");
    add("reciprocity/apriori", "prio_reciprocity", {{"s", "s"}, {"t", "t"}}, CheckKind::AtMost,
        0.02, 0.0, "stated", "a priori metrics are reciprocal");
    add("kernel/game-sim-1/s,t", "kernel_sim", {{"player", "1"}, {"s", "s"}, {"t", "t"}},
        CheckKind::IsTrue, 1.0, 0.0, "stated", "s below t in the player-1 game simulation");
    add("metric/apriori-sim-1/t,s", "metric",
        {{"kind", "apriori-sim"}, {"player", "1"}, {"s", "t"}, {"t", "s"}}, CheckKind::Equals,
        1.0 / 9.0, kGridTol, "derived",
        "with the sink indicator of w: 4/9 at t (row c dominates) against 1/3 at s");
    add("kernel/game-bisim/s,t", "kernel_bisim", {{"s", "s"}, {"t", "t"}}, CheckKind::IsFalse,
        0.0, 0.0, "derived",
        "the reverse direction separates: player 1 extracts 1/9 more w-mass at t");
    add("witness/cap/s,t", "witness_gap",
        {{"s", "s"}, {"t", "t"}, {"depth", "2"}, {"eps", "0.01"}}, CheckKind::AtMost, 0.01,
        1e-6, "stated", "the bound direction caps every formula gap at the distance 0");
  } else if (name == "fig2") {
    add("metric/apriori-bisim/s,t", "metric",
        {{"kind", "apriori-bisim"}, {"player", "1"}, {"s", "s"}, {"t", "t"}}, CheckKind::Equals,
        0.5, kGridTol, "stated", "stated value: game bisimulation distance one half");
    add("metric/coop-bisim/s,t", "metric",
        {{"kind", "coop-bisim"}, {"player", "1"}, {"s", "s"}, {"t", "t"}}, CheckKind::Equals,
        0.0, 0.01, "stated", "stated value: cooperative distance zero");
    add("kernel/game-bisim/s,t", "kernel_bisim", {{"s", "s"}, {"t", "t"}}, CheckKind::IsFalse,
        0.0, 0.0, "stated", "positive distance separates the pair");
    add("kernel/classical/s,t", "classical", {{"s", "s"}, {"t", "t"}}, CheckKind::IsTrue, 1.0,
        0.0, "stated", "cooperative distance zero keeps the pair together");
    add("witness/t,s", "witness_gap", {{"s", "t"}, {"t", "s"}, {"depth", "1"}, {"eps", "0.05"}},
        CheckKind::AtLeast, 0.4, 0.0, "stated", "witness gap approaches one half");
  } else if (name == "fig3") {
    add("metric/apriori-bisim/s,t", "metric",
        {{"kind", "apriori-bisim"}, {"player", "1"}, {"s", "s"}, {"t", "t"}}, CheckKind::Equals,
        0.0, kGridTol, "stated", "stated value: game bisimulation distance zero");
    add("metric/coop-bisim/s,t", "metric",
        {{"kind", "coop-bisim"}, {"player", "1"}, {"s", "s"}, {"t", "t"}}, CheckKind::Equals,
        1.0, 0.01, "stated", "stated value: cooperative distance one");
    add("kernel/game-bisim/s,t", "kernel_bisim", {{"s", "s"}, {"t", "t"}}, CheckKind::IsTrue,
        1.0, 0.0, "stated", "zero distance keeps the pair together");
    add("kernel/classical/s,t", "classical", {{"s", "s"}, {"t", "t"}}, CheckKind::IsFalse, 0.0,
        0.0, "stated", "no joint moves reach v from t");
  } else if (name == "fig4") {
    add("classify/2-mdp", "flag", {{"flag", "mdp_for_2"}}, CheckKind::IsTrue, 1.0, 0.0, "stated",
        "deterministic 2-MDP");
    add("metric/apriori-sim-1/s,t", "metric",
        {{"kind", "apriori-sim"}, {"player", "1"}, {"s", "s"}, {"t", "t"}}, CheckKind::Equals,
        0.0, kGridTol, "stated", "stated value: player-1 distance from s to t is zero");
    add("metric/apriori-sim-1/t,s", "metric",
        {{"kind", "apriori-sim"}, {"player", "1"}, {"s", "t"}, {"t", "s"}}, CheckKind::Equals,
        1.0, kGridTol, "stated", "stated value: player-1 distance from t to s is one");
    add("metric/coop-sim/s,t", "metric",
        {{"kind", "coop-sim"}, {"player", "1"}, {"s", "s"}, {"t", "t"}}, CheckKind::Equals, 1.0,
        0.01, "stated", "stated value: cooperative distance from s to t is one");
    add("metric/coop-sim/t,s", "metric",
        {{"kind", "coop-sim"}, {"player", "1"}, {"s", "t"}, {"t", "s"}}, CheckKind::Equals, 0.0,
        0.01, "stated", "stated value: cooperative distance from t to s is zero");
    add("kernel/game-sim-1/s,t", "kernel_sim", {{"player", "1"}, {"s", "s"}, {"t", "t"}},
        CheckKind::IsTrue, 1.0, 0.0, "stated", "zero distance: pair in the kernel");
    add("kernel/game-sim-1/t,s", "kernel_sim", {{"player", "1"}, {"s", "t"}, {"t", "s"}},
        CheckKind::IsFalse, 0.0, 0.0, "stated", "distance one: pair outside the kernel");
    add("witness/t,s", "witness_gap", {{"s", "t"}, {"t", "s"}, {"depth", "1"}, {"eps", "0.05"}},
        CheckKind::AtLeast, 0.9, 0.0, "stated", "witness gap approaches one");
  } else if (name == "fig5") {
    add("pre/1/s/u", "pre", {{"player", "1"}, {"state", "s"}, {"k", "state:u"}},
        CheckKind::Equals, 0.5, 1e-7, "stated", "two-sided penny matching has value one half");
    add("pre/1/t/u", "pre", {{"player", "1"}, {"state", "t"}, {"k", "state:u"}},
        CheckKind::Equals, 1.0 / 3.0, 1e-7, "stated",
        "three-sided penny matching has value one third");
    add("dpre/1/s/u", "dpre", {{"player", "1"}, {"state", "s"}, {"k", "state:u"}},
        CheckKind::Equals, 0.0, 1e-9, "derived", "every pure choice is mismatched");
    add("eval/reach-u/mixed/s", "eval",
        {{"formula", "mu X. (u_flag | pre1(X))"}, {"semantics", "mixed"}, {"state", "s"}},
        CheckKind::Equals, 0.5, 1e-5, "derived", "two-step value iteration by hand");
    add("eval/reach-u/mixed/t", "eval",
        {{"formula", "mu X. (u_flag | pre1(X))"}, {"semantics", "mixed"}, {"state", "t"}},
        CheckKind::Equals, 1.0 / 3.0, 1e-5, "derived", "two-step value iteration by hand");
    add("eval/reach-u/pure/s", "eval",
        {{"formula", "mu X. (u_flag | pre1(X))"}, {"semantics", "pure"}, {"state", "s"}},
        CheckKind::Equals, 0.0, 1e-9, "derived", "pure minimax enumeration");
    add("alt-sim-1/s,t", "alt_sim", {{"player", "1"}, {"s", "s"}, {"t", "t"}}, CheckKind::IsTrue,
        1.0, 0.0, "stated", "pure alternating simulation holds");
    add("kernel/game-sim-1/s,t", "kernel_sim", {{"player", "1"}, {"s", "s"}, {"t", "t"}},
        CheckKind::IsFalse, 0.0, 0.0, "stated",
        "reaching u is worth one half at s but one third at t");
  } else if (name == "fig6") {
    add("classify/turn-based", "flag", {{"flag", "turn_based"}}, CheckKind::IsTrue, 1.0, 0.0,
        "stated", "turn-based game structure");
    add("kernel/game-bisim/s,t", "kernel_bisim", {{"s", "s"}, {"t", "t"}}, CheckKind::IsTrue,
        1.0, 0.0, "stated", "stated value: s and t are game bisimilar");
    add("alt-sim-1/s,t", "alt_sim", {{"player", "1"}, {"s", "s"}, {"t", "t"}},
        CheckKind::IsFalse, 0.0, 0.0, "stated", "the pure move c cannot be mimicked at t");
    add("kernel/classical/s,t", "classical", {{"s", "s"}, {"t", "t"}}, CheckKind::IsTrue, 1.0,
        0.0, "derived", "turn-based: game and classical bisimulation coincide");
    add("metric/apriori-bisim/s,t", "metric",
        {{"kind", "apriori-bisim"}, {"player", "1"}, {"s", "s"}, {"t", "t"}}, CheckKind::Equals,
        0.0, kGridTol, "stated", "the mixed move over a and b imitates c");
    add("metric/coop-bisim/s,t", "metric",
        {{"kind", "coop-bisim"}, {"player", "1"}, {"s", "s"}, {"t", "t"}}, CheckKind::Equals,
        0.0, 0.01, "stated", "turn-based: cooperative metric agrees with the game metric");
  }
  return rows;
}

std::string reconstruction_note(const std::string& name) {
  if (name == "fig1") return "transition tables of the source example, used verbatim";
  if (name == "fig5") return "penny matching, following the source description exactly";
  return "reconstruction inferred from the source description; its stated values are reproduced by the suite";
}

}  // namespace

const std::vector<std::string>& corpus_names() {
  static const std::vector<std::string> names = [] {
    std::vector<std::string> out;
    for (const RawEntry& e : kCorpusData) out.push_back(e.name);
    return out;
  }();
  return names;
}

bool is_corpus_name(std::string_view name) {
  for (const RawEntry& e : kCorpusData)
    if (name == e.name) return true;
  return false;
}

std::string builtin_game_text(std::string_view name) {
  for (const RawEntry& e : kCorpusData)
    if (name == e.name) return e.text;
  throw std::invalid_argument("unknown corpus game: " + std::string(name));
}

CorpusEntry builtin_game(std::string_view name) {
  CorpusEntry entry;
  entry.name = std::string(name);
  LoadedGame loaded = parse_game_text(builtin_game_text(name));
  if (!loaded.violations.empty())
    throw std::logic_error("corpus game " + entry.name + " has parse violations");
  entry.game = std::move(loaded.game);
  entry.notes = reconstruction_note(entry.name);
  entry.expectations = expectations_for(entry.name);
  return entry;
}

// --- suite -----------------------------------------------------------------

namespace {

struct SuiteContext {
  double mesh;
  double tol;
  std::map<std::string, CorpusEntry> entries;
  std::map<std::string, MetricReport> metric_cache;
  std::map<std::string, SimKernelResult> sim_cache;
  std::map<std::string, BisimKernelResult> bisim_cache;
  std::map<std::string, Partition> classical_cache;
  std::map<std::string, RelationSet> alt_cache;

  const CorpusEntry& entry(const std::string& name) {
    auto it = entries.find(name);
    if (it == entries.end()) it = entries.emplace(name, builtin_game(name)).first;
    return it->second;
  }

  const MetricReport& metric(const std::string& game, const std::string& kind, int player) {
    std::string key = game + "/" + kind + "/" + std::to_string(player);
    auto it = metric_cache.find(key);
    if (it == metric_cache.end()) {
      MetricReport rep = iterate_metric(entry(game).game, metric_kind_from_name(kind), player,
                                        50, tol, mesh);
      it = metric_cache.emplace(key, std::move(rep)).first;
    }
    return it->second;
  }
};

struct Measured {
  double value = 0.0;
  double extra_slack = 0.0;  // run-mesh approximation allowance beyond the stored tolerance
  std::string detail;
};

Measured measure_row(SuiteContext& ctx, const std::string& game, const ExpectedResult& r) {
  const GameStructure& g = ctx.entry(game).game;
  auto arg = [&](const char* key) -> const std::string& {
    auto it = r.args.find(key);
    if (it == r.args.end()) throw std::logic_error("row " + r.id + " missing arg " + key);
    return it->second;
  };
  auto state_arg = [&](const char* key) {
    int idx = g.state_index(arg(key));
    if (idx < 0) throw std::logic_error("row " + r.id + " names unknown state " + arg(key));
    return idx;
  };
  auto grid_slack = [&](double scale) {
    return scale * std::max(0.0, ctx.mesh - kDefaultMesh);
  };

  Measured m;
  if (r.quantity == "valid") {
    m.value = static_cast<double>(validate_structure(g).size());
  } else if (r.quantity == "obs_distance") {
    m.value = observation_distance(g, state_arg("s"), state_arg("t"));
  } else if (r.quantity == "flag") {
    StructureClass c = classify_structure(g);
    const std::string& flag = arg("flag");
    bool v = flag == "turn_based"     ? c.turn_based
             : flag == "mdp_for_1"    ? c.mdp_for_1
             : flag == "mdp_for_2"    ? c.mdp_for_2
             : flag == "deterministic" ? c.deterministic
                                        : throw std::logic_error("unknown flag " + flag);
    m.value = v ? 1.0 : 0.0;
  } else if (r.quantity == "flag_none") {
    StructureClass c = classify_structure(g);
    m.value = (!c.turn_based && !c.mdp_for_1 && !c.mdp_for_2 && !c.deterministic) ? 1.0 : 0.0;
  } else if (r.quantity == "pre" || r.quantity == "dpre") {
    const std::string& kref = arg("k");
    if (kref.rfind("state:", 0) != 0) throw std::logic_error("bad k reference " + kref);
    int target = g.state_index(kref.substr(6));
    Valuation k = Valuation::indicator(g.state_count(), target);
    int player = std::stoi(arg("player"));
    int s = state_arg("state");
    m.value = r.quantity == "pre" ? pre_at(g, player, s, k) : dpre_at(g, player, s, k);
  } else if (r.quantity == "eval") {
    EvalOptions opts;
    opts.semantics = arg("semantics") == "pure" ? Semantics::Pure : Semantics::Mixed;
    EvalResult res = evaluate(g, parse_formula(arg("formula")), opts);
    m.value = res.value[state_arg("state")];
    if (!res.converged) m.detail = "fixpoint not converged";
  } else if (r.quantity == "metric") {
    const MetricReport& rep = ctx.metric(game, arg("kind"), std::stoi(arg("player")));
    m.value = rep.metric(state_arg("s"), state_arg("t"));
    m.extra_slack = std::max(0.0, rep.certified_error - kDefaultMesh);
  } else if (r.quantity == "prio_reciprocity") {
    const MetricReport& one = ctx.metric(game, "apriori-sim", 1);
    const MetricReport& two = ctx.metric(game, "apriori-sim", 2);
    int s = state_arg("s"), t = state_arg("t");
    m.value = std::fabs(one.metric(s, t) - two.metric(t, s));
    m.extra_slack = grid_slack(2.0);
  } else if (r.quantity == "kernel_sim") {
    int player = std::stoi(arg("player"));
    std::string key = game + "/" + std::to_string(player);
    auto it = ctx.sim_cache.find(key);
    if (it == ctx.sim_cache.end())
      it = ctx.sim_cache.emplace(key, game_sim_kernel(g, player, ctx.mesh)).first;
    m.value = it->second.relation.contains(state_arg("s"), state_arg("t")) ? 1.0 : 0.0;
    m.extra_slack = grid_slack(1.0);
  } else if (r.quantity == "kernel_bisim") {
    auto it = ctx.bisim_cache.find(game);
    if (it == ctx.bisim_cache.end())
      it = ctx.bisim_cache.emplace(game, game_bisim_kernel(g, ctx.mesh)).first;
    m.value = it->second.partition.same_block(state_arg("s"), state_arg("t")) ? 1.0 : 0.0;
    m.extra_slack = grid_slack(1.0);
  } else if (r.quantity == "classical") {
    auto it = ctx.classical_cache.find(game);
    if (it == ctx.classical_cache.end())
      it = ctx.classical_cache.emplace(game, classical_bisim_kernel(g)).first;
    m.value = it->second.same_block(state_arg("s"), state_arg("t")) ? 1.0 : 0.0;
  } else if (r.quantity == "alt_sim") {
    int player = std::stoi(arg("player"));
    std::string key = game + "/" + std::to_string(player);
    auto it = ctx.alt_cache.find(key);
    if (it == ctx.alt_cache.end())
      it = ctx.alt_cache.emplace(key, alt_sim_pure(g, player)).first;
    m.value = it->second.contains(state_arg("s"), state_arg("t")) ? 1.0 : 0.0;
  } else if (r.quantity == "witness_gap") {
    WitnessReport w = synthesize_witness(g, state_arg("s"), state_arg("t"),
                                         std::stoi(arg("depth")), std::stod(arg("eps")));
    m.value = w.gap;
    m.detail = "target " + format_number(w.target_distance) + ", dag " +
               std::to_string(w.dag_nodes) + " nodes";
  } else {
    throw std::logic_error("unknown quantity " + r.quantity);
  }
  return m;
}

RowOutcome classify(const ExpectedResult& r, const Measured& m) {
  auto within = [&](double slack) {
    switch (r.check) {
      case CheckKind::Equals:
        return std::fabs(m.value - r.expected) <= r.tolerance + slack;
      case CheckKind::AtLeast:
        return m.value >= r.expected - r.tolerance - slack;
      case CheckKind::AtMost:
        return m.value <= r.expected + r.tolerance + slack;
      case CheckKind::IsTrue:
        return m.value != 0.0;
      case CheckKind::IsFalse:
        return m.value == 0.0;
    }
    return false;
  };
  if (within(0.0)) return RowOutcome::Pass;
  if (m.extra_slack > 0.0) {
    // boolean rows flip only through margin-kept pairs, which the coarse
    // grid explains as such; numeric rows get the widened band
    if (r.check == CheckKind::IsTrue || r.check == CheckKind::IsFalse)
      return RowOutcome::ApproxFail;
    if (within(m.extra_slack)) return RowOutcome::ApproxFail;
  }
  return RowOutcome::Fail;
}

// Small random-game property pass; each check reports its worst violation.
void property_rows(SuiteContext& ctx, std::vector<SuiteRow>& out) {
  std::mt19937_64 rng(20240001);
  auto push = [&](const std::string& id, double measured, double allowed, std::string detail) {
    SuiteRow row;
    row.id = "property/" + id;
    row.provenance = "derived";
    row.check = CheckKind::AtMost;
    row.expected = 0.0;
    row.measured = measured;
    row.tolerance = allowed;
    row.outcome = measured <= allowed ? RowOutcome::Pass : RowOutcome::Fail;
    row.detail = std::move(detail);
    out.push_back(row);
  };

  // bilinearity of the mixed extension and pre sandwich properties
  double worst_bilinear = 0.0, worst_monotone = 0.0, worst_nonexp = 0.0, worst_compl = 0.0,
         worst_dpre = 0.0;
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (int trial = 0; trial < 10; ++trial) {
    GameStructure g = random_game(rng);
    const int n = g.state_count();
    State s = 0;
    auto mix = [&](int count) {
      MixedMove x(static_cast<size_t>(count), 0.0);
      double total = 0.0;
      for (double& v : x) total += (v = unit(rng) + 1e-3);
      for (double& v : x) v /= total;
      return x;
    };
    MixedMove x1a = mix(static_cast<int>(g.moves1[s].size()));
    MixedMove x1b = mix(static_cast<int>(g.moves1[s].size()));
    MixedMove x2 = mix(static_cast<int>(g.moves2[s].size()));
    double lambda = unit(rng);
    MixedMove blend(x1a.size());
    for (size_t i = 0; i < blend.size(); ++i)
      blend[i] = lambda * x1a[i] + (1 - lambda) * x1b[i];
    Distribution left = successor_distribution(g, s, blend, x2);
    Distribution da = successor_distribution(g, s, x1a, x2);
    Distribution db = successor_distribution(g, s, x1b, x2);
    for (int t = 0; t < n; ++t)
      worst_bilinear = std::max(
          worst_bilinear, std::fabs(left[t] - (lambda * da[t] + (1 - lambda) * db[t])));

    Valuation k1(std::vector<double>(static_cast<size_t>(n)));
    Valuation k2 = k1;
    for (int t = 0; t < n; ++t) {
      k1[t] = unit(rng);
      k2[t] = std::min(1.0, k1[t] + unit(rng) * 0.3);
    }
    Valuation p1 = pre(g, 1, k1), p2 = pre(g, 1, k2);
    for (int t = 0; t < n; ++t) {
      worst_monotone = std::max(worst_monotone, p1[t] - p2[t]);  // k1 <= k2
      worst_nonexp = std::max(worst_nonexp, std::fabs(p1[t] - p2[t]) - k1.sup_delta(k2));
      Valuation flip = k1;
      for (double& v : flip.v) v = 1.0 - v;
      worst_compl = std::max(worst_compl, std::fabs(p1[t] - (1.0 - pre_at(g, 2, t, flip))));
      worst_dpre = std::max(worst_dpre, dpre_at(g, 1, t, k1) - p1[t]);
    }
  }
  push("bilinearity", worst_bilinear, 1e-9, "10 random games");
  push("pre-monotone", worst_monotone, 1e-7, "pointwise, 10 random games");
  push("pre-nonexpansive", worst_nonexp, 1e-7, "sup-norm, 10 random games");
  push("pre-complement", worst_compl, 1e-6, "pre1(k) = 1 - pre2(1-k)");
  push("dpre-le-pre", worst_dpre, 1e-7, "pure values never beat mixed");

  // one-step metric properties at the run mesh
  double run_mesh = ctx.mesh;
  double worst_order = 0.0, worst_mdp = 0.0, worst_recip = 0.0, worst_triangle = 0.0;
  double order_allow = 0.0, mdp_allow = 0.0;
  for (int trial = 0; trial < 6; ++trial) {
    RandomGameOptions small;
    small.max_states = 3;
    small.max_moves = 2;
    GameStructure g = random_game(rng, small);
    DirectedMetric d = observation_metric(g);
    StepResult prio = apriori_step(g, d, 1, run_mesh);
    StepResult post = aposteriori_step(g, d, 1, run_mesh);
    StepResult prio2 = apriori_step(g, d.opposite(), 2, run_mesh);
    for (int s = 0; s < g.state_count(); ++s)
      for (int t = 0; t < g.state_count(); ++t) {
        worst_order = std::max(worst_order, prio.metric(s, t) - post.metric(s, t));
        worst_recip = std::max(worst_recip,
                               std::fabs(prio.metric(s, t) - prio2.metric(t, s)));
      }
    order_allow = std::max(order_allow, prio.certified_error + post.certified_error + 1e-6);

    RandomGameOptions mdp1 = small;
    mdp1.mdp_for = 1;
    GameStructure m = random_game(rng, mdp1);
    DirectedMetric dm = observation_metric(m);
    StepResult mp = apriori_step(m, dm, 1, run_mesh);
    StepResult mq = aposteriori_step(m, dm, 1, run_mesh);
    for (int s = 0; s < m.state_count(); ++s)
      for (int t = 0; t < m.state_count(); ++t)
        worst_mdp = std::max(worst_mdp, std::fabs(mp.metric(s, t) - mq.metric(s, t)));
    mdp_allow = std::max(mdp_allow, mp.certified_error + mq.certified_error + 1e-6);

    MetricReport fix = iterate_metric(g, MetricKind::AprioriBisim, 1, 30, ctx.tol, run_mesh);
    for (int a = 0; a < g.state_count(); ++a)
      for (int b = 0; b < g.state_count(); ++b)
        for (int c = 0; c < g.state_count(); ++c)
          worst_triangle = std::max(worst_triangle, fix.metric(a, b) - fix.metric(a, c) -
                                                        fix.metric(c, b));
  }
  push("apriori-le-aposteriori", worst_order, order_allow, "one step, random games");
  push("mdp-collapse", worst_mdp, mdp_allow, "one step on random 1-MDPs");
  push("reciprocity-step", worst_recip, 2 * run_mesh + 1e-6, "players swapped, metric opposed");
  push("triangle", worst_triangle, 1e-6, "a priori bisim fixpoints, random games");
}

}  // namespace

SuiteReport run_suite(double mesh, double tol, std::string_view only) {
  SuiteReport report;
  report.mesh = mesh;
  report.tol = tol;
  SuiteContext ctx{mesh, tol, {}, {}, {}, {}, {}, {}};

  for (const std::string& name : corpus_names()) {
    if (!only.empty() && only != name) continue;
    const CorpusEntry& entry = ctx.entry(name);
    for (const ExpectedResult& r : entry.expectations) {
      SuiteRow rowr;
      rowr.id = r.id;
      rowr.provenance = r.provenance;
      rowr.expected = r.expected;
      rowr.tolerance = r.tolerance;
      rowr.check = r.check;
      try {
        Measured m = measure_row(ctx, name, r);
        rowr.measured = m.value;
        rowr.outcome = classify(r, m);
        rowr.detail = m.detail;
        if (rowr.outcome == RowOutcome::ApproxFail)
          rowr.detail += (rowr.detail.empty() ? "" : "; ") +
                         std::string("within the run's certified error at mesh ") +
                         format_number(mesh);
      } catch (const std::exception& e) {
        rowr.outcome = RowOutcome::Fail;
        rowr.detail = e.what();
      }
      report.rows.push_back(std::move(rowr));
    }
  }

  if (only.empty() || only == "property") property_rows(ctx, report.rows);

  for (const SuiteRow& r : report.rows) {
    if (r.outcome == RowOutcome::Pass) ++report.passed;
    if (r.outcome == RowOutcome::Fail) ++report.failed;
    if (r.outcome == RowOutcome::ApproxFail) ++report.approx_failed;
  }
  return report;
}

}  // namespace gamet
