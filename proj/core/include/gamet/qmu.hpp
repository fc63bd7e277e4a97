#pragma once

#include <map>
#include <memory>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "gamet/game.hpp"

namespace gamet {

enum class FormulaKind {
  Constant,
  ObsVar,
  CalcVar,
  Neg,
  Or,
  And,
  ShiftUp,    // phi (+) c
  ShiftDown,  // phi (-) c
  Pre,        // pre1 / pre2
  Mu,
  Nu,
};

class FormulaNode;
using Formula = std::shared_ptr<const FormulaNode>;

/// Immutable AST node. Nodes are shared; witness synthesis builds DAGs
/// where the printed tree would be exponentially larger.
class FormulaNode {
 public:
  FormulaKind kind;
  double value = 0.0;  // Constant payload or shift amount
  std::string name;    // variable or binder name
  int player = 0;      // Pre payload
  Formula left, right;

  bool has_calc_var = false;  // any calculus variable below (bound or free)

  static Formula constant(double c);
  static Formula obs(std::string name);
  static Formula var(std::string name);
  static Formula neg(Formula f);
  static Formula disj(Formula a, Formula b);
  static Formula conj(Formula a, Formula b);
  static Formula shift_up(Formula f, double c);
  static Formula shift_down(Formula f, double c);
  /// Shift by a signed amount: nonnegative becomes (+), negative (-).
  static Formula shift(Formula f, double c);
  static Formula pre_op(int player, Formula f);
  // Binder factories enforce the even-negation polarity rule and throw
  // std::invalid_argument when it is violated.
  static Formula mu(std::string var, Formula body);
  static Formula nu(std::string var, Formula body);
};

struct FormulaParseError : std::runtime_error {
  size_t position;
  FormulaParseError(const std::string& message, size_t pos)
      : std::runtime_error(message), position(pos) {}
};

/// Parses the ASCII grammar
///   phi ::= NUM | ident | IDENT | "~" phi | phi "|" phi | phi "&" phi
///         | phi "(+)" NUM | phi "(-)" NUM | "pre1" "(" phi ")"
///         | "pre2" "(" phi ")" | "mu" IDENT "." phi | "nu" IDENT "." phi
///         | "(" phi ")"
/// with precedence ~ > (+)/(-) > & > | and binders extending maximally to
/// the right. Lowercase identifiers are observation variables, uppercase
/// are calculus variables.
Formula parse_formula(std::string_view text);

std::string print_formula(const Formula& f);

/// Structural equality.
bool formula_equal(const Formula& a, const Formula& b);

size_t formula_dag_size(const Formula& f);

enum class PlayerRestriction { Player1, Player2, Both, None };

struct WellformednessReport {
  bool is_closed = false;
  bool is_positive = false;
  PlayerRestriction player_restriction = PlayerRestriction::Both;
};

WellformednessReport check_wellformed(const Formula& f);

/// One-step value operator: per state, the matrix-game value of the
/// expectation of k with the given player as maximizer.
Valuation pre(const GameStructure& g, int player, const Valuation& k);
double pre_at(const GameStructure& g, int player, State s, const Valuation& k);

/// Pure-move variant: max over own pure moves of min over opponent pure
/// moves of the expectation.
Valuation dpre(const GameStructure& g, int player, const Valuation& k);
double dpre_at(const GameStructure& g, int player, State s, const Valuation& k);

enum class Semantics { Mixed, Pure };

struct VariableEnvironment {
  std::map<std::string, Valuation> bindings;
};

struct FixpointInfo {
  std::string binder;
  int iterations = 0;
  double last_delta = 0.0;
  bool converged = true;
};

struct EvalOptions {
  Semantics semantics = Semantics::Mixed;
  double tol = 1e-6;
  int max_iters = 10000;
};

struct EvalResult {
  Valuation value;
  bool converged = true;
  std::vector<FixpointInfo> fixpoints;
};

/// Structural-recursion evaluator; mu iterates from the all-0 valuation,
/// nu from all-1, stopping at sup-norm change < tol or max_iters
/// (non-convergence is flagged, the partial result still returned).
/// Throws std::domain_error on unbound variables.
EvalResult evaluate(const GameStructure& g, const Formula& f, const VariableEnvironment& env,
                    const EvalOptions& opts = {});
EvalResult evaluate(const GameStructure& g, const Formula& f, const EvalOptions& opts = {});

struct WitnessReport {
  Formula formula;
  int depth = 0;
  double epsilon = 0.0;
  double mesh = 0.0;
  double value_at_s = 0.0;
  double value_at_t = 0.0;
  double gap = 0.0;              // value_at_s - value_at_t
  double target_distance = 0.0;  // d_n(s,t) for the iterate the witness chases
  size_t dag_nodes = 0;
};

/// Builds a closed positive player-1 formula of pre-nesting depth n whose
/// value gap at (s,t) reaches the n-th a-priori iterate within epsilon
/// (grid-limited; the achieved gap and target are reported).
WitnessReport synthesize_witness(const GameStructure& g, State s, State t, int depth,
                                 double epsilon);

}  // namespace gamet
