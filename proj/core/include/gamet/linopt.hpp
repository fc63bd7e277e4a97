#pragma once

#include <limits>
#include <string>
#include <vector>

namespace gamet {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

enum class RowSense { LessEq, Equal, GreaterEq };

struct LpRow {
  std::vector<double> coeffs;
  RowSense sense = RowSense::LessEq;
  double rhs = 0.0;
};

/// Dense LP in the usual row form. Variable bounds default to [0, +inf);
/// -inf lower bounds are allowed (the solver splits such variables).
struct LpProblem {
  bool maximize = false;
  std::vector<double> objective;
  std::vector<LpRow> rows;
  std::vector<double> lower;  // empty means all 0
  std::vector<double> upper;  // empty means all +inf

  int num_vars() const { return static_cast<int>(objective.size()); }
  void add_row(std::vector<double> coeffs, RowSense sense, double rhs);
};

enum class LpStatus { Optimal, Infeasible, Unbounded };

struct LpResult {
  LpStatus status = LpStatus::Infeasible;
  double value = 0.0;
  std::vector<double> point;
};

/// Two-phase dense simplex with Bland's anti-cycling rule. Deterministic:
/// identical problems produce identical pivot sequences and results.
/// Throws std::invalid_argument on dimension mismatches.
LpResult solve_lp(const LpProblem& p);

struct FeasibilityResult {
  bool feasible = false;
  std::vector<double> point;
};

/// Phase-1 only solve: is the constraint set nonempty? Returns a witness
/// point when it is.
FeasibilityResult check_feasibility(const LpProblem& p);

/// Zero-sum matrix game; rows belong to the maximizer, columns to the
/// minimizer. Entries are payoffs to the row player.
struct MatrixGame {
  int rows = 0;
  int cols = 0;
  std::vector<double> payoff;  // row-major

  static MatrixGame of(int rows, int cols);
  double at(int r, int c) const { return payoff[static_cast<size_t>(r) * cols + c]; }
  double& at(int r, int c) { return payoff[static_cast<size_t>(r) * cols + c]; }
};

struct MatrixGameSolution {
  double value = 0.0;
  std::vector<double> row_strategy;
  std::vector<double> col_strategy;
};

/// Minmax value plus optimal mixed strategies for both players, via the
/// standard LP encoding (solved once per side; the two values are checked
/// against each other at kFeasTol).
MatrixGameSolution solve_matrix_game(const MatrixGame& m);

/// Value-only fast path used inside grid loops: closed forms for games
/// with a trivial side or at most two rows/columns, LP fallback otherwise.
double matrix_game_value(const MatrixGame& m);

}  // namespace gamet
