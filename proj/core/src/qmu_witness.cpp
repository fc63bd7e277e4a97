#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "gamet/metric.hpp"
#include "gamet/qmu.hpp"
#include "metric_detail.hpp"

namespace gamet {

namespace {

struct PairWitness {
  Formula formula;
  Valuation values;  // formula value at every state
};

// Depth-0 witnesses: the observation variable (or its complement) whose
// interpretation difference attains the observation distance.
PairWitness base_witness(const GameStructure& g, State s, State t) {
  Formula best = FormulaNode::constant(0.0);
  double best_gap = 0.0;
  bool negate = false;
  int best_var = -1;
  for (size_t v = 0; v < g.variables.size(); ++v) {
    double diff = g.var_values[v][s] - g.var_values[v][t];
    if (diff > best_gap) {
      best_gap = diff;
      best_var = static_cast<int>(v);
      negate = false;
    }
    if (-diff > best_gap) {
      best_gap = -diff;
      best_var = static_cast<int>(v);
      negate = true;
    }
  }
  PairWitness w;
  if (best_var < 0) {
    w.formula = best;
    w.values = Valuation::constant(g.state_count(), 0.0);
    return w;
  }
  Formula var = FormulaNode::obs(g.variables[best_var]);
  w.formula = negate ? FormulaNode::neg(var) : var;
  w.values = Valuation(g.var_values[best_var]);
  if (negate)
    for (double& x : w.values.v) x = 1.0 - x;
  return w;
}

}  // namespace

WitnessReport synthesize_witness(const GameStructure& g, State s, State t, int depth,
                                 double epsilon) {
  const int n = g.state_count();
  if (s < 0 || s >= n || t < 0 || t >= n) throw std::domain_error("witness: state out of range");
  if (s == t) throw std::domain_error("witness: states must differ");
  if (depth < 0) throw std::domain_error("witness: depth must be nonnegative");
  if (!(epsilon > 0.0)) throw std::domain_error("witness: epsilon must be positive");

  // Per-level epsilon budget: the construction spends a quarter of the
  // budget on the near-optimal valuation and a quarter on each recursive
  // ingredient, so deeper levels run on finer grids (capped).
  std::vector<double> level_eps(static_cast<size_t>(depth) + 1, epsilon);
  for (int l = depth - 1; l >= 0; --l) level_eps[l] = level_eps[l + 1] / 4.0;

  // iterates of the a priori transformer, starting from the tightened
  // observation distances (the depth-0 target)
  DirectedMetric d = observation_metric(g);

  // all-pairs witnesses per level, memoized
  std::vector<std::vector<PairWitness>> level(static_cast<size_t>(n) * n);
  for (State a = 0; a < n; ++a)
    for (State b = 0; b < n; ++b) level[static_cast<size_t>(a) * n + b].push_back(
        base_witness(g, a, b));

  double used_mesh = 0.0;
  for (int l = 1; l <= depth; ++l) {
    double eps_l = level_eps[l];
    int resolution = std::min(400, std::max(4, static_cast<int>(std::ceil(4.0 / eps_l))));
    used_mesh = std::max(used_mesh, 1.0 / resolution);

    std::vector<PairWitness> next(static_cast<size_t>(n) * n);
    for (State a = 0; a < n; ++a) {
      for (State b = 0; b < n; ++b) {
        if (a == b) {
          next[static_cast<size_t>(a) * n + b].formula = FormulaNode::constant(0.0);
          next[static_cast<size_t>(a) * n + b].values = Valuation::constant(n, 0.0);
          continue;
        }
        detail::SupArgmax sup = detail::apriori_sup_argmax(g, d, a, b, 1, resolution);
        const Valuation& kstar = sup.argmax;
        // phi = disjunction over s' of conjunction over t' of the shifted
        // level-(l-1) witnesses; its value tracks kstar within eps/4
        Formula phi;
        for (State sp = 0; sp < n; ++sp) {
          Formula conj;
          for (State tp = 0; tp < n; ++tp) {
            if (tp == sp) continue;
            const PairWitness& base = level[static_cast<size_t>(sp) * n + tp].back();
            Formula shifted =
                FormulaNode::shift(base.formula, kstar[sp] - base.values[sp]);
            conj = conj ? FormulaNode::conj(conj, shifted) : shifted;
          }
          if (!conj) conj = FormulaNode::constant(std::min(1.0, std::max(0.0, kstar[sp])));
          phi = phi ? FormulaNode::disj(phi, conj) : conj;
        }
        PairWitness w;
        w.formula = FormulaNode::pre_op(1, phi);
        w.values = evaluate(g, w.formula).value;
        // The iterate is the join of the observation distance with the
        // sup over C(d); when the observation part dominates, an earlier
        // witness (ultimately the shifted observation variable) attains
        // more than the pre-wrapped construction. Keep the better gap;
        // the iterates are monotone, so this also keeps every pair's
        // witness usable as an ingredient one level up.
        const PairWitness& prev = level[static_cast<size_t>(a) * n + b].back();
        if (prev.values[a] - prev.values[b] > w.values[a] - w.values[b]) w = prev;
        next[static_cast<size_t>(a) * n + b] = std::move(w);
      }
    }
    for (size_t i = 0; i < next.size(); ++i) level[i].push_back(std::move(next[i]));
    d = tighten(apriori_step(g, d, 1, 1.0 / resolution).metric);
  }

  const PairWitness& w = level[static_cast<size_t>(s) * n + t].back();
  WitnessReport report;
  report.formula = w.formula;
  report.depth = depth;
  report.epsilon = epsilon;
  report.mesh = used_mesh;
  report.value_at_s = w.values[s];
  report.value_at_t = w.values[t];
  report.gap = w.values[s] - w.values[t];
  report.target_distance = d(s, t);
  report.dag_nodes = formula_dag_size(w.formula);
  return report;
}

}  // namespace gamet
