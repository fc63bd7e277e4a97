#include "gamet/linopt.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "gamet/numeric.hpp"

namespace gamet {

void LpProblem::add_row(std::vector<double> coeffs, RowSense sense, double rhs) {
  rows.push_back(LpRow{std::move(coeffs), sense, rhs});
}

MatrixGame MatrixGame::of(int rows, int cols) {
  MatrixGame m;
  m.rows = rows;
  m.cols = cols;
  m.payoff.assign(static_cast<size_t>(rows) * cols, 0.0);
  return m;
}

namespace {

// Equality-form tableau: minimize c.x s.t. A x = b, x >= 0, with the
// reduced-cost row stored as row m. Bland's rule throughout.
struct Tableau {
  int m = 0;  // constraint rows
  int n = 0;  // columns (without rhs)
  std::vector<double> a;  // (m+1) x (n+1), row-major; last column is rhs
  std::vector<int> basis;
  std::vector<char> allowed;  // columns eligible to enter

  double& at(int r, int c) { return a[static_cast<size_t>(r) * (n + 1) + c]; }
  double get(int r, int c) const { return a[static_cast<size_t>(r) * (n + 1) + c]; }

  void pivot(int r, int c) {
    double inv = 1.0 / at(r, c);
    for (int j = 0; j <= n; ++j) at(r, j) *= inv;
    at(r, c) = 1.0;
    for (int i = 0; i <= m; ++i) {
      if (i == r) continue;
      double f = at(i, c);
      if (std::fabs(f) <= 0.0) continue;
      for (int j = 0; j <= n; ++j) at(i, j) -= f * at(r, j);
      at(i, c) = 0.0;
    }
    basis[r] = c;
  }

  // Returns true when optimal, false when unbounded.
  bool run() {
    for (long pivots = 0;; ++pivots) {
      if (pivots > 200000) throw std::runtime_error("simplex stalled");
      int enter = -1;
      for (int j = 0; j < n; ++j) {
        if (allowed[j] && get(m, j) < -kPivotTol) {
          enter = j;
          break;  // Bland: smallest improving index
        }
      }
      if (enter < 0) return true;
      int leave = -1;
      double best = 0.0;
      for (int i = 0; i < m; ++i) {
        double coef = get(i, enter);
        if (coef > kPivotTol) {
          double ratio = get(i, n) / coef;
          if (leave < 0 || ratio < best - kPivotTol ||
              (ratio < best + kPivotTol && basis[i] < basis[leave])) {
            best = ratio;
            leave = i;
          }
        }
      }
      if (leave < 0) return false;
      pivot(leave, enter);
    }
  }
};

struct Standardized {
  // mapping back: x_orig[j] = shift[j] + x[pos[j]] - (split[j] ? x[neg[j]] : 0)
  std::vector<double> shift;
  std::vector<int> pos, neg;
  std::vector<char> split;
  int num_std_vars = 0;
  std::vector<std::vector<double>> rows;  // coefficients, equality form
  std::vector<double> rhs;
};

Standardized standardize(const LpProblem& p) {
  const int n = p.num_vars();
  if (!p.lower.empty() && static_cast<int>(p.lower.size()) != n)
    throw std::invalid_argument("lp: lower bound dimension mismatch");
  if (!p.upper.empty() && static_cast<int>(p.upper.size()) != n)
    throw std::invalid_argument("lp: upper bound dimension mismatch");
  for (const auto& row : p.rows)
    if (static_cast<int>(row.coeffs.size()) != n)
      throw std::invalid_argument("lp: row dimension mismatch");

  Standardized s;
  s.shift.assign(n, 0.0);
  s.pos.assign(n, -1);
  s.neg.assign(n, -1);
  s.split.assign(n, 0);
  int next = 0;
  for (int j = 0; j < n; ++j) {
    double lo = p.lower.empty() ? 0.0 : p.lower[j];
    if (std::isfinite(lo)) {
      s.shift[j] = lo;
      s.pos[j] = next++;
    } else {
      s.split[j] = 1;
      s.pos[j] = next++;
      s.neg[j] = next++;
    }
  }
  s.num_std_vars = next;

  auto emit = [&](const std::vector<double>& coeffs, RowSense sense, double rhs) {
    std::vector<double> row(static_cast<size_t>(s.num_std_vars), 0.0);
    double b = rhs;
    for (int j = 0; j < n; ++j) {
      double c = coeffs[j];
      if (c == 0.0) continue;
      row[s.pos[j]] += c;
      if (s.split[j]) row[s.neg[j]] -= c;
      b -= c * s.shift[j];
    }
    if (sense == RowSense::GreaterEq) {
      for (auto& v : row) v = -v;
      b = -b;
      sense = RowSense::LessEq;
    }
    s.rows.push_back(std::move(row));
    s.rhs.push_back(b);
    // LessEq rows get slacks later; Equal rows are marked by a sentinel.
    s.rows.back().push_back(sense == RowSense::Equal ? 0.0 : 1.0);
  };

  for (const auto& row : p.rows) emit(row.coeffs, row.sense, row.rhs);
  // finite upper bounds as extra rows
  if (!p.upper.empty()) {
    for (int j = 0; j < n; ++j) {
      double hi = p.upper[j];
      if (!std::isfinite(hi)) continue;
      std::vector<double> coeffs(static_cast<size_t>(n), 0.0);
      coeffs[j] = 1.0;
      emit(coeffs, RowSense::LessEq, hi);
    }
  }
  return s;
}

struct SolveInternal {
  LpStatus status = LpStatus::Infeasible;
  std::vector<double> std_point;
};

SolveInternal solve_standard(const Standardized& s, const std::vector<double>& std_cost) {
  const int m = static_cast<int>(s.rows.size());
  const int nv = s.num_std_vars;
  // column layout: [structural | slacks | artificials]
  int num_slacks = 0;
  for (const auto& r : s.rows) num_slacks += r.back() != 0.0 ? 1 : 0;

  // Slack-basis shortcut: every row a slack row with nonnegative rhs.
  bool slack_feasible = num_slacks == m;
  if (slack_feasible)
    for (double b : s.rhs)
      if (b < 0.0) slack_feasible = false;

  int num_artificial = slack_feasible ? 0 : m;
  Tableau t;
  t.m = m;
  t.n = nv + num_slacks + num_artificial;
  t.a.assign(static_cast<size_t>(m + 1) * (t.n + 1), 0.0);
  t.basis.assign(m, -1);
  t.allowed.assign(t.n, 1);

  int slack_at = nv;
  std::vector<int> slack_col(m, -1);
  for (int i = 0; i < m; ++i) {
    bool flip = !slack_feasible && s.rhs[i] < 0.0;
    double sign = flip ? -1.0 : 1.0;
    for (int j = 0; j < nv; ++j) t.at(i, j) = sign * s.rows[i][j];
    t.at(i, t.n) = sign * s.rhs[i];
    if (s.rows[i].back() != 0.0) {
      slack_col[i] = slack_at;
      t.at(i, slack_at) = sign * 1.0;
      ++slack_at;
    }
  }

  if (slack_feasible) {
    for (int i = 0; i < m; ++i) t.basis[i] = slack_col[i];
  } else {
    // phase 1: artificial basis, minimize their sum
    for (int i = 0; i < m; ++i) {
      int art = nv + num_slacks + i;
      t.at(i, art) = 1.0;
      t.basis[i] = art;
    }
    for (int j = 0; j < t.n; ++j) {
      if (j >= nv + num_slacks) continue;  // artificials cost 1, reduced cost 0 at start
      double sum = 0.0;
      for (int i = 0; i < m; ++i) sum += t.get(i, j);
      t.at(m, j) = -sum;
    }
    double rhs_sum = 0.0;
    for (int i = 0; i < m; ++i) rhs_sum += t.get(i, t.n);
    t.at(m, t.n) = -rhs_sum;
    t.run();  // phase-1 objective is bounded below by 0
    double infeas = -t.get(m, t.n);
    if (infeas > kFeasTol) return {LpStatus::Infeasible, {}};
    // Drive leftover artificials out of the basis where possible.
    for (int i = 0; i < m; ++i) {
      if (t.basis[i] < nv + num_slacks) continue;
      int col = -1;
      for (int j = 0; j < nv + num_slacks; ++j) {
        if (std::fabs(t.get(i, j)) > kPivotTol) {
          col = j;
          break;
        }
      }
      if (col >= 0) t.pivot(i, col);
      // else: redundant row, artificial stays basic at zero
    }
    for (int j = nv + num_slacks; j < t.n; ++j) t.allowed[j] = 0;
  }

  // phase 2 cost row
  for (int j = 0; j <= t.n; ++j) t.at(m, j) = 0.0;
  for (int j = 0; j < nv; ++j) t.at(m, j) = std_cost[j];
  for (int i = 0; i < m; ++i) {
    int b = t.basis[i];
    if (b < nv && std_cost[b] != 0.0) {
      double f = std_cost[b];
      for (int j = 0; j <= t.n; ++j) t.at(m, j) -= f * t.get(i, j);
    }
  }
  if (!t.run()) return {LpStatus::Unbounded, {}};

  std::vector<double> x(static_cast<size_t>(nv), 0.0);
  for (int i = 0; i < m; ++i)
    if (t.basis[i] < nv) x[t.basis[i]] = t.get(i, t.n);
  return {LpStatus::Optimal, std::move(x)};
}

std::vector<double> unmap(const Standardized& s, const std::vector<double>& std_point, int n) {
  std::vector<double> x(static_cast<size_t>(n), 0.0);
  for (int j = 0; j < n; ++j) {
    double v = s.shift[j] + std_point[s.pos[j]];
    if (s.split[j]) v -= std_point[s.neg[j]];
    x[j] = v;
  }
  return x;
}

}  // namespace

LpResult solve_lp(const LpProblem& p) {
  Standardized s = standardize(p);
  std::vector<double> cost(static_cast<size_t>(s.num_std_vars), 0.0);
  const int n = p.num_vars();
  double fixed = 0.0;
  for (int j = 0; j < n; ++j) {
    double c = p.maximize ? -p.objective[j] : p.objective[j];
    cost[s.pos[j]] += c;
    if (s.split[j]) cost[s.neg[j]] -= c;
    fixed += c * s.shift[j];
  }
  SolveInternal internal = solve_standard(s, cost);
  LpResult result;
  result.status = internal.status;
  if (internal.status != LpStatus::Optimal) return result;
  result.point = unmap(s, internal.std_point, n);
  double value = 0.0;
  for (int j = 0; j < n; ++j) value += p.objective[j] * result.point[j];
  result.value = value;
  (void)fixed;
  return result;
}

FeasibilityResult check_feasibility(const LpProblem& p) {
  Standardized s = standardize(p);
  std::vector<double> zero(static_cast<size_t>(s.num_std_vars), 0.0);
  SolveInternal internal = solve_standard(s, zero);
  FeasibilityResult r;
  r.feasible = internal.status == LpStatus::Optimal;
  if (r.feasible) r.point = unmap(s, internal.std_point, p.num_vars());
  return r;
}

namespace {

double two_row_value(const MatrixGame& m) {
  // max over p in [0,1] of min_j (p a0j + (1-p) a1j): concave piecewise
  // linear, optimum at an endpoint or a pairwise intersection.
  const int n = m.cols;
  auto eval = [&](double p) {
    double best = kInf;
    for (int j = 0; j < n; ++j) best = std::min(best, p * m.at(0, j) + (1 - p) * m.at(1, j));
    return best;
  };
  double best = std::max(eval(0.0), eval(1.0));
  for (int j = 0; j < n; ++j) {
    for (int k = j + 1; k < n; ++k) {
      double dj = m.at(0, j) - m.at(1, j);
      double dk = m.at(0, k) - m.at(1, k);
      double den = dj - dk;
      if (std::fabs(den) < 1e-14) continue;
      double p = (m.at(1, k) - m.at(1, j)) / den;
      if (p > 0.0 && p < 1.0) best = std::max(best, eval(p));
    }
  }
  return best;
}

MatrixGame negated_transpose(const MatrixGame& m) {
  MatrixGame t = MatrixGame::of(m.cols, m.rows);
  for (int r = 0; r < m.rows; ++r)
    for (int c = 0; c < m.cols; ++c) t.at(c, r) = -m.at(r, c);
  return t;
}

// LP route, column program: max sum(w) s.t. (M + shift) w <= 1, w >= 0.
// Slack-basis feasible, so no phase 1 is needed.
double lp_game_value(const MatrixGame& m) {
  double lo = m.payoff[0];
  for (double v : m.payoff) lo = std::min(lo, v);
  double shift = 1.0 - lo;
  LpProblem p;
  p.maximize = true;
  p.objective.assign(static_cast<size_t>(m.cols), 1.0);
  for (int r = 0; r < m.rows; ++r) {
    std::vector<double> row(static_cast<size_t>(m.cols));
    for (int c = 0; c < m.cols; ++c) row[c] = m.at(r, c) + shift;
    p.add_row(std::move(row), RowSense::LessEq, 1.0);
  }
  LpResult res = solve_lp(p);
  if (res.status != LpStatus::Optimal || res.value <= 0.0)
    throw std::runtime_error("matrix game LP did not solve");
  return 1.0 / res.value - shift;
}

}  // namespace

double matrix_game_value(const MatrixGame& m) {
  if (m.rows <= 0 || m.cols <= 0 ||
      static_cast<int>(m.payoff.size()) != m.rows * m.cols)
    throw std::invalid_argument("matrix game: empty or inconsistent payoff");
  if (m.rows == 1) {
    double best = kInf;
    for (int j = 0; j < m.cols; ++j) best = std::min(best, m.at(0, j));
    return best;
  }
  if (m.cols == 1) {
    double best = -kInf;
    for (int i = 0; i < m.rows; ++i) best = std::max(best, m.at(i, 0));
    return best;
  }
  if (m.rows == 2) return two_row_value(m);
  if (m.cols == 2) return -two_row_value(negated_transpose(m));
  return lp_game_value(m);
}

MatrixGameSolution solve_matrix_game(const MatrixGame& m) {
  if (m.rows <= 0 || m.cols <= 0 ||
      static_cast<int>(m.payoff.size()) != m.rows * m.cols)
    throw std::invalid_argument("matrix game: empty or inconsistent payoff");
  double lo = m.payoff[0];
  for (double v : m.payoff) lo = std::min(lo, v);
  double shift = 1.0 - lo;

  // Row program: min sum(z), (M+shift)^T z >= 1, z >= 0; x = z * value.
  LpProblem rowp;
  rowp.objective.assign(static_cast<size_t>(m.rows), 1.0);
  for (int c = 0; c < m.cols; ++c) {
    std::vector<double> row(static_cast<size_t>(m.rows));
    for (int r = 0; r < m.rows; ++r) row[r] = m.at(r, c) + shift;
    rowp.add_row(std::move(row), RowSense::GreaterEq, 1.0);
  }
  LpResult rowres = solve_lp(rowp);

  // Column program: max sum(w), (M+shift) w <= 1, w >= 0; y = w * value.
  LpProblem colp;
  colp.maximize = true;
  colp.objective.assign(static_cast<size_t>(m.cols), 1.0);
  for (int r = 0; r < m.rows; ++r) {
    std::vector<double> row(static_cast<size_t>(m.cols));
    for (int c = 0; c < m.cols; ++c) row[c] = m.at(r, c) + shift;
    colp.add_row(std::move(row), RowSense::LessEq, 1.0);
  }
  LpResult colres = solve_lp(colp);

  if (rowres.status != LpStatus::Optimal || colres.status != LpStatus::Optimal ||
      rowres.value <= 0.0 || colres.value <= 0.0)
    throw std::runtime_error("matrix game LP did not solve");

  double row_value = 1.0 / rowres.value - shift;
  double col_value = 1.0 / colres.value - shift;
  if (std::fabs(row_value - col_value) > kFeasTol)
    throw std::runtime_error("matrix game primal/dual value mismatch");

  MatrixGameSolution sol;
  sol.value = row_value;
  sol.row_strategy.resize(static_cast<size_t>(m.rows));
  for (int r = 0; r < m.rows; ++r) sol.row_strategy[r] = rowres.point[r] / rowres.value;
  sol.col_strategy.resize(static_cast<size_t>(m.cols));
  for (int c = 0; c < m.cols; ++c) sol.col_strategy[c] = colres.point[c] / colres.value;
  return sol;
}

}  // namespace gamet
