#pragma once

// Shared test helpers: the independent oracles (vertex-enumerated
// trans-shipping dual, mixture-route cooperative step, pure-successor
// alternating simulation) and random input generators. These stay
// deliberately separate from the library's own code paths.

#include <algorithm>
#include <cmath>
#include <random>
#include <string>
#include <vector>

#include "gamet/corpus.hpp"
#include "gamet/game.hpp"
#include "gamet/kernel.hpp"
#include "gamet/linopt.hpp"
#include "gamet/metric.hpp"
#include "gamet/qmu.hpp"

namespace testsupport {

inline gamet::GameStructure corpus(const std::string& name) {
  return gamet::builtin_game(name).game;
}

inline int state_of(const gamet::GameStructure& g, const std::string& name) {
  int idx = g.state_index(name);
  if (idx < 0) throw std::logic_error("unknown state " + name);
  return idx;
}

inline gamet::Valuation indicator(const gamet::GameStructure& g, const std::string& state) {
  return gamet::Valuation::indicator(g.state_count(), state_of(g, state));
}

// --- vertex-enumerated dual of the trans-shipping LP -----------------------
//
// max over k in C(d) /\ [0,1]^n of sum_s (p(s) - q(s)) k(s), computed by
// enumerating candidate vertices: solutions of n active constraints drawn
// from { k_u - k_v = d(u,v), k_u = 0, k_u = 1 } that satisfy all
// constraints. Exact for n <= 4 up to solve tolerance.
inline double transship_dual_by_vertices(const gamet::Distribution& p,
                                         const gamet::Distribution& q,
                                         const gamet::DirectedMetric& d) {
  const int n = d.size();
  struct Row {
    std::vector<double> a;
    double b;
  };
  std::vector<Row> rows;  // a . k <= b
  for (int u = 0; u < n; ++u)
    for (int v = 0; v < n; ++v) {
      if (u == v) continue;
      Row r{std::vector<double>(static_cast<size_t>(n), 0.0), d(u, v)};
      r.a[u] = 1.0;
      r.a[v] = -1.0;
      rows.push_back(std::move(r));
    }
  for (int u = 0; u < n; ++u) {
    Row hi{std::vector<double>(static_cast<size_t>(n), 0.0), 1.0};
    hi.a[u] = 1.0;
    rows.push_back(std::move(hi));
    Row lo{std::vector<double>(static_cast<size_t>(n), 0.0), 0.0};
    lo.a[u] = -1.0;
    rows.push_back(std::move(lo));
  }

  const int m = static_cast<int>(rows.size());
  std::vector<int> pick(static_cast<size_t>(n), 0);
  double best = 0.0;  // k = 0 is always feasible
  // enumerate all n-subsets of constraints
  std::vector<int> comb(static_cast<size_t>(n));
  for (int i = 0; i < n; ++i) comb[i] = i;
  auto advance = [&]() {
    int i = n - 1;
    while (i >= 0 && comb[i] == m - n + i) --i;
    if (i < 0) return false;
    ++comb[i];
    for (int j = i + 1; j < n; ++j) comb[j] = comb[j - 1] + 1;
    return true;
  };
  do {
    // solve the n x n system a_i . k = b_i by Gaussian elimination
    std::vector<std::vector<double>> a(static_cast<size_t>(n),
                                       std::vector<double>(static_cast<size_t>(n + 1), 0.0));
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) a[i][j] = rows[comb[i]].a[j];
      a[i][n] = rows[comb[i]].b;
    }
    bool singular = false;
    for (int col = 0; col < n && !singular; ++col) {
      int piv = -1;
      double mag = 1e-9;
      for (int r = col; r < n; ++r)
        if (std::fabs(a[r][col]) > mag) {
          mag = std::fabs(a[r][col]);
          piv = r;
        }
      if (piv < 0) {
        singular = true;
        break;
      }
      std::swap(a[col], a[piv]);
      for (int r = 0; r < n; ++r) {
        if (r == col) continue;
        double f = a[r][col] / a[col][col];
        for (int c = col; c <= n; ++c) a[r][c] -= f * a[col][c];
      }
    }
    if (singular) continue;
    std::vector<double> k(static_cast<size_t>(n));
    for (int i = 0; i < n; ++i) k[i] = a[i][n] / a[i][i];
    bool feasible = true;
    for (const Row& r : rows) {
      double lhs = 0.0;
      for (int j = 0; j < n; ++j) lhs += r.a[j] * k[j];
      if (lhs > r.b + 1e-7) {
        feasible = false;
        break;
      }
    }
    if (!feasible) continue;
    double obj = 0.0;
    for (int j = 0; j < n; ++j) obj += (p[j] - q[j]) * k[j];
    best = std::max(best, obj);
  } while (advance());
  return best;
}

// --- mixture-route cooperative one-step value -------------------------------
//
// max over pure joint moves at s of the trans-shipping distance from the
// chosen successor distribution to the best mixture of the matcher's pure
// joint successor distributions (lambda and the mixture weights in one LP).
// Independent of coop_step's sup-over-C(d) LP.
inline double coop_pair_by_mixture(const gamet::GameStructure& g, const gamet::DirectedMetric& d,
                                   int s, int t) {
  const int n = g.state_count();
  double base = gamet::observation_distance(g, s, t);
  if (base >= 1.0 - 1e-12) return 1.0;
  std::vector<const gamet::Distribution*> targets;
  for (const gamet::Distribution& q : g.delta[t]) targets.push_back(&q);
  double best = base;
  for (const gamet::Distribution& p : g.delta[s]) {
    const int nt = static_cast<int>(targets.size());
    gamet::LpProblem lp;
    lp.objective.assign(static_cast<size_t>(n * n + nt), 0.0);
    for (int u = 0; u < n; ++u)
      for (int v = 0; v < n; ++v) lp.objective[static_cast<size_t>(u) * n + v] = d(u, v);
    for (int u = 0; u < n; ++u) {
      std::vector<double> row(static_cast<size_t>(n * n + nt), 0.0);
      for (int v = 0; v < n; ++v) row[static_cast<size_t>(u) * n + v] = 1.0;
      lp.add_row(std::move(row), gamet::RowSense::Equal, p[u]);
    }
    for (int v = 0; v < n; ++v) {
      std::vector<double> row(static_cast<size_t>(n * n + nt), 0.0);
      for (int u = 0; u < n; ++u) row[static_cast<size_t>(u) * n + v] = 1.0;
      for (int j = 0; j < nt; ++j) row[static_cast<size_t>(n * n + j)] = -(*targets[j])[v];
      lp.add_row(std::move(row), gamet::RowSense::Equal, 0.0);
    }
    std::vector<double> simplex_row(static_cast<size_t>(n * n + nt), 0.0);
    for (int j = 0; j < nt; ++j) simplex_row[static_cast<size_t>(n * n + j)] = 1.0;
    lp.add_row(std::move(simplex_row), gamet::RowSense::Equal, 1.0);
    gamet::LpResult res = gamet::solve_lp(lp);
    if (res.status != gamet::LpStatus::Optimal)
      throw std::runtime_error("coop mixture oracle LP failed");
    best = std::max(best, res.value);
  }
  return std::min(1.0, best);
}

// --- direct pure-successor alternating simulation (deterministic games) -----
inline gamet::RelationSet alt_sim_pure_deterministic_oracle(const gamet::GameStructure& g,
                                                            int player) {
  const int n = g.state_count();
  auto dest = [&](int state, int prot, int opp) {
    const gamet::Distribution& d = player == 1 ? g.transition(state, prot, opp)
                                               : g.transition(state, opp, prot);
    for (int x = 0; x < n; ++x)
      if (d[x] > 0.5) return x;
    throw std::logic_error("oracle needs a deterministic game");
  };
  auto prot_count = [&](int s) {
    return static_cast<int>((player == 1 ? g.moves1[s] : g.moves2[s]).size());
  };
  auto opp_count = [&](int s) {
    return static_cast<int>((player == 1 ? g.moves2[s] : g.moves1[s]).size());
  };
  gamet::RelationSet r(n);
  for (int s = 0; s < n; ++s)
    for (int t = 0; t < n; ++t)
      if (s == t || gamet::observation_distance(g, s, t) <= 1e-9) r.insert(s, t);
  bool changed = true;
  while (changed) {
    changed = false;
    for (int s = 0; s < n; ++s)
      for (int t = 0; t < n; ++t) {
        if (s == t || !r.contains(s, t)) continue;
        bool ok = true;
        for (int a = 0; a < prot_count(s) && ok; ++a) {
          bool matched = false;
          for (int b = 0; b < prot_count(t) && !matched; ++b) {
            bool all = true;
            for (int c = 0; c < opp_count(t) && all; ++c) {
              bool answered = false;
              for (int e = 0; e < opp_count(s) && !answered; ++e)
                answered = r.contains(dest(s, a, e), dest(t, b, c));
              all = answered;
            }
            matched = all;
          }
          ok = matched;
        }
        if (!ok) {
          r.erase(s, t);
          changed = true;
        }
      }
  }
  return r;
}


// Clone one state under a fresh name; outgoing rows are copied and
// nothing ever moves into the clone.
inline gamet::GameStructure with_duplicate(const gamet::GameStructure& base,
                                           const std::string& orig) {
  gamet::GameStructure g = base;
  int src = g.state_index(orig);
  if (src < 0) throw std::logic_error("unknown state " + orig);
  g.states.push_back(orig + "_copy");
  for (auto& row : g.var_values) row.push_back(row[src]);
  g.moves1.push_back(g.moves1[src]);
  g.moves2.push_back(g.moves2[src]);
  std::vector<gamet::Distribution> rows;
  for (const gamet::Distribution& d : g.delta[src]) {
    std::vector<double> p = d.values();
    p.push_back(0.0);
    rows.push_back(gamet::Distribution(std::move(p)));
  }
  g.delta.push_back(std::move(rows));
  for (int s = 0; s + 1 < g.state_count(); ++s)
    for (gamet::Distribution& d : g.delta[s]) {
      std::vector<double> p = d.values();
      p.push_back(0.0);
      d = gamet::Distribution(std::move(p));
    }
  return g;
}

/// Simplex grid over m move positions at the given resolution.
inline std::vector<gamet::MixedMove> all_mixes(int m, int resolution) {
  std::vector<gamet::MixedMove> out;
  std::vector<int> parts(static_cast<size_t>(m), 0);
  // odometer over the first m-1 parts; the last absorbs the remainder
  for (;;) {
    int sum = 0;
    for (int i = 0; i + 1 < m; ++i) sum += parts[i];
    if (sum <= resolution) {
      gamet::MixedMove x(static_cast<size_t>(m), 0.0);
      for (int i = 0; i + 1 < m; ++i) x[i] = static_cast<double>(parts[i]) / resolution;
      x[m - 1] = static_cast<double>(resolution - sum) / resolution;
      out.push_back(std::move(x));
    }
    if (m == 1) break;
    int at = 0;
    while (at + 1 < m && ++parts[at] > resolution) parts[at++] = 0;
    if (at + 1 == m) break;
  }
  return out;
}

// --- random inputs -----------------------------------------------------------

inline gamet::Distribution random_distribution(std::mt19937_64& rng, int n) {
  std::uniform_int_distribution<int> w(0, 8);
  std::vector<double> p(static_cast<size_t>(n), 0.0);
  int total = 0;
  std::vector<int> parts(static_cast<size_t>(n), 0);
  for (int i = 0; i < n; ++i) total += (parts[i] = w(rng));
  if (total == 0) {
    parts[0] = 1;
    total = 1;
  }
  for (int i = 0; i < n; ++i) p[i] = static_cast<double>(parts[i]) / total;
  return gamet::Distribution(std::move(p));
}

inline gamet::DirectedMetric random_metric(std::mt19937_64& rng, int n) {
  std::uniform_int_distribution<int> w(0, 10);
  gamet::DirectedMetric d(n);
  for (int s = 0; s < n; ++s)
    for (int t = 0; t < n; ++t)
      if (s != t) d.at(s, t) = w(rng) / 10.0;
  return gamet::tighten(d);
}

// Random closed formula of bounded depth. positive_player1 restricts to
// the player-1 positive fragment (negation only on observation variables,
// no pre2); otherwise the full closed calculus is sampled, with fixpoints
// entering through reachability/safety shapes to keep polarity legal.
inline gamet::Formula random_formula(std::mt19937_64& rng,
                                     const std::vector<std::string>& obs_vars, int depth,
                                     bool positive_player1) {
  using gamet::FormulaNode;
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::uniform_int_distribution<int> pick_kind(0, 6);
  auto constant = [&]() { return FormulaNode::constant(std::round(unit(rng) * 20) / 20.0); };
  auto atom = [&]() -> gamet::Formula {
    if (obs_vars.empty() || unit(rng) < 0.3) return constant();
    gamet::Formula v = FormulaNode::obs(obs_vars[static_cast<size_t>(
        std::uniform_int_distribution<int>(0, static_cast<int>(obs_vars.size()) - 1)(rng))]);
    if (unit(rng) < 0.3) return FormulaNode::neg(v);  // allowed even in positive form
    return v;
  };
  if (depth <= 0) return atom();
  auto sub = [&]() { return random_formula(rng, obs_vars, depth - 1, positive_player1); };
  switch (pick_kind(rng)) {
    case 0:
      return FormulaNode::disj(sub(), sub());
    case 1:
      return FormulaNode::conj(sub(), sub());
    case 2:
      return FormulaNode::shift_up(sub(), std::round(unit(rng) * 20) / 20.0);
    case 3:
      return FormulaNode::shift_down(sub(), std::round(unit(rng) * 20) / 20.0);
    case 4:
      return FormulaNode::pre_op(1, sub());
    case 5: {
      if (positive_player1) return FormulaNode::pre_op(1, sub());
      return FormulaNode::pre_op(2, sub());
    }
    default: {
      if (positive_player1 && unit(rng) < 0.5) return FormulaNode::pre_op(1, sub());
      // reachability / safety shaped fixpoint over a random base
      gamet::Formula base = atom();
      int player = positive_player1 ? 1 : (unit(rng) < 0.5 ? 1 : 2);
      gamet::Formula var = FormulaNode::var("Z");
      if (unit(rng) < 0.5)
        return FormulaNode::mu("Z", FormulaNode::disj(base, FormulaNode::pre_op(player, var)));
      return FormulaNode::nu("Z", FormulaNode::conj(base, FormulaNode::pre_op(player, var)));
    }
  }
}

// Fully random formula trees for parser round-trips (may be open; includes
// deep negations and both binders).
inline gamet::Formula random_tree(std::mt19937_64& rng, int depth) {
  using gamet::FormulaNode;
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::uniform_int_distribution<int> pick(0, 8);
  if (depth <= 0) {
    double r = unit(rng);
    if (r < 0.4) return FormulaNode::constant(std::round(unit(rng) * 100) / 100.0);
    if (r < 0.8) return FormulaNode::obs(unit(rng) < 0.5 ? "p" : "q");
    return FormulaNode::var(unit(rng) < 0.5 ? "X" : "Y");
  }
  auto sub = [&]() { return random_tree(rng, depth - 1); };
  switch (pick(rng)) {
    case 0: return FormulaNode::disj(sub(), sub());
    case 1: return FormulaNode::conj(sub(), sub());
    case 2: {
      gamet::Formula inner = sub();
      // keep binder polarity legal: negate only subtrees without calc vars
      if (inner->has_calc_var) return FormulaNode::disj(inner, sub());
      return FormulaNode::neg(inner);
    }
    case 3: return FormulaNode::shift_up(sub(), std::round(unit(rng) * 100) / 100.0);
    case 4: return FormulaNode::shift_down(sub(), std::round(unit(rng) * 100) / 100.0);
    case 5: return FormulaNode::pre_op(1, sub());
    case 6: return FormulaNode::pre_op(2, sub());
    case 7: return FormulaNode::mu("X", sub());
    default: return FormulaNode::nu("Y", sub());
  }
}

}  // namespace testsupport
