#include <algorithm>
#include <cmath>
#include <map>
#include <optional>
#include <stdexcept>

#include "gamet/linopt.hpp"
#include "gamet/qmu.hpp"

namespace gamet {

namespace {

// Payoff matrix at s for the given protagonist: rows are the
// protagonist's pure moves, columns the opponent's.
MatrixGame stage_game(const GameStructure& g, int player, State s, const Valuation& k) {
  const auto& m1 = g.moves1[s];
  const auto& m2 = g.moves2[s];
  const int n = g.state_count();
  auto expect = [&](size_t i1, size_t i2) {
    const Distribution& d = g.delta[s][i1 * m2.size() + i2];
    double e = 0.0;
    for (int t = 0; t < n; ++t) e += d[t] * k[t];
    return e;
  };
  if (player == 1) {
    MatrixGame m = MatrixGame::of(static_cast<int>(m1.size()), static_cast<int>(m2.size()));
    for (size_t i1 = 0; i1 < m1.size(); ++i1)
      for (size_t i2 = 0; i2 < m2.size(); ++i2) m.at(static_cast<int>(i1), static_cast<int>(i2)) = expect(i1, i2);
    return m;
  }
  MatrixGame m = MatrixGame::of(static_cast<int>(m2.size()), static_cast<int>(m1.size()));
  for (size_t i2 = 0; i2 < m2.size(); ++i2)
    for (size_t i1 = 0; i1 < m1.size(); ++i1) m.at(static_cast<int>(i2), static_cast<int>(i1)) = expect(i1, i2);
  return m;
}

}  // namespace

double pre_at(const GameStructure& g, int player, State s, const Valuation& k) {
  if (player != 1 && player != 2) throw std::domain_error("player must be 1 or 2");
  return matrix_game_value(stage_game(g, player, s, k));
}

Valuation pre(const GameStructure& g, int player, const Valuation& k) {
  Valuation out = Valuation::constant(g.state_count(), 0.0);
  for (State s = 0; s < g.state_count(); ++s) out[s] = pre_at(g, player, s, k);
  return out;
}

double dpre_at(const GameStructure& g, int player, State s, const Valuation& k) {
  if (player != 1 && player != 2) throw std::domain_error("player must be 1 or 2");
  MatrixGame m = stage_game(g, player, s, k);
  double best = -kInf;
  for (int r = 0; r < m.rows; ++r) {
    double worst = kInf;
    for (int c = 0; c < m.cols; ++c) worst = std::min(worst, m.at(r, c));
    best = std::max(best, worst);
  }
  return best;
}

Valuation dpre(const GameStructure& g, int player, const Valuation& k) {
  Valuation out = Valuation::constant(g.state_count(), 0.0);
  for (State s = 0; s < g.state_count(); ++s) out[s] = dpre_at(g, player, s, k);
  return out;
}

namespace {

double clamp01(double v) { return std::min(1.0, std::max(0.0, v)); }

struct EvalContext {
  const GameStructure& g;
  EvalOptions opts;
  std::vector<FixpointInfo> fixpoints;
  bool converged = true;
  // Safe cache: nodes without calculus variables evaluate independently
  // of the environment. Witness formulas are DAGs, so this matters.
  std::map<const FormulaNode*, Valuation> memo;

  Valuation eval(const Formula& f, std::map<std::string, Valuation>& env) {
    if (!f->has_calc_var) {
      auto it = memo.find(f.get());
      if (it != memo.end()) return it->second;
    }
    Valuation result = eval_raw(f, env);
    if (!f->has_calc_var) memo.emplace(f.get(), result);
    return result;
  }

  Valuation eval_raw(const Formula& f, std::map<std::string, Valuation>& env) {
    const int n = g.state_count();
    switch (f->kind) {
      case FormulaKind::Constant:
        return Valuation::constant(n, f->value);
      case FormulaKind::ObsVar: {
        int v = g.variable_index(f->name);
        if (v < 0) throw std::domain_error("unknown observation variable " + f->name);
        return Valuation(g.var_values[v]);
      }
      case FormulaKind::CalcVar: {
        auto it = env.find(f->name);
        if (it == env.end()) throw std::domain_error("unbound calculus variable " + f->name);
        return it->second;
      }
      case FormulaKind::Neg: {
        Valuation a = eval(f->left, env);
        for (double& x : a.v) x = 1.0 - x;
        return a;
      }
      case FormulaKind::Or: {
        Valuation a = eval(f->left, env);
        Valuation b = eval(f->right, env);
        for (int s = 0; s < n; ++s) a[s] = std::max(a[s], b[s]);
        return a;
      }
      case FormulaKind::And: {
        Valuation a = eval(f->left, env);
        Valuation b = eval(f->right, env);
        for (int s = 0; s < n; ++s) a[s] = std::min(a[s], b[s]);
        return a;
      }
      case FormulaKind::ShiftUp: {
        Valuation a = eval(f->left, env);
        for (double& x : a.v) x = clamp01(x + f->value);
        return a;
      }
      case FormulaKind::ShiftDown: {
        Valuation a = eval(f->left, env);
        for (double& x : a.v) x = clamp01(x - f->value);
        return a;
      }
      case FormulaKind::Pre: {
        Valuation a = eval(f->left, env);
        return opts.semantics == Semantics::Mixed ? pre(g, f->player, a)
                                                  : dpre(g, f->player, a);
      }
      case FormulaKind::Mu:
      case FormulaKind::Nu: {
        Valuation current =
            Valuation::constant(n, f->kind == FormulaKind::Mu ? 0.0 : 1.0);
        FixpointInfo info;
        info.binder = f->name;
        info.converged = false;
        auto saved = env.find(f->name) != env.end()
                         ? std::optional<Valuation>(env[f->name])
                         : std::nullopt;
        for (int it = 0; it < opts.max_iters; ++it) {
          env[f->name] = current;
          Valuation next = eval(f->left, env);
          info.iterations = it + 1;
          info.last_delta = next.sup_delta(current);
          current = std::move(next);
          if (info.last_delta < opts.tol) {
            info.converged = true;
            break;
          }
        }
        if (saved)
          env[f->name] = *saved;
        else
          env.erase(f->name);
        if (!info.converged) converged = false;
        fixpoints.push_back(info);
        return current;
      }
    }
    throw std::logic_error("unreachable formula kind");
  }
};

}  // namespace

EvalResult evaluate(const GameStructure& g, const Formula& f, const VariableEnvironment& env,
                    const EvalOptions& opts) {
  if (opts.tol <= 0.0) throw std::domain_error("tol must be positive");
  if (opts.max_iters <= 0) throw std::domain_error("max_iters must be positive");
  EvalContext ctx{g, opts, {}, true, {}};
  std::map<std::string, Valuation> bindings = env.bindings;
  EvalResult result;
  result.value = ctx.eval(f, bindings);
  result.converged = ctx.converged;
  result.fixpoints = std::move(ctx.fixpoints);
  return result;
}

EvalResult evaluate(const GameStructure& g, const Formula& f, const EvalOptions& opts) {
  return evaluate(g, f, VariableEnvironment{}, opts);
}

}  // namespace gamet
