#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace gamet {

using State = int;

/// Probability distribution over the states of a fixed game, dense.
class Distribution {
 public:
  Distribution() = default;
  explicit Distribution(std::vector<double> p) : p_(std::move(p)) {}
  static Distribution point(int n, State s);

  int size() const { return static_cast<int>(p_.size()); }
  double operator[](State s) const { return p_[s]; }
  double& operator[](State s) { return p_[s]; }
  const std::vector<double>& values() const { return p_; }

  double mass() const;
  /// Nonnegative entries and total mass 1, both within tol.
  bool is_valid(double tol) const;

 private:
  std::vector<double> p_;
};

/// Map from states to [0,1].
struct Valuation {
  std::vector<double> v;

  Valuation() = default;
  explicit Valuation(std::vector<double> values) : v(std::move(values)) {}
  static Valuation constant(int n, double c) { return Valuation(std::vector<double>(n, c)); }
  static Valuation indicator(int n, State s);

  int size() const { return static_cast<int>(v.size()); }
  double operator[](State s) const { return v[s]; }
  double& operator[](State s) { return v[s]; }
  bool within_unit(double tol) const;
  double sup_delta(const Valuation& o) const;
};

/// Mixed move: distribution over the positions of a player's available
/// move list at one state.
using MixedMove = std::vector<double>;

/// Two-player concurrent game structure. States, moves and variables are
/// identified by their input order; that order fixes every matrix layout
/// downstream. Instances are treated as immutable once built.
struct GameStructure {
  std::vector<std::string> states;
  std::vector<std::string> variables;
  std::vector<std::vector<double>> var_values;  // [variable][state]
  std::vector<std::string> moves;               // move alphabet
  std::vector<std::vector<int>> moves1;         // [state] -> indices into moves
  std::vector<std::vector<int>> moves2;
  // delta[s] has |moves1[s]| * |moves2[s]| entries, row-major over
  // (own-move position, opponent-move position).
  std::vector<std::vector<Distribution>> delta;

  int state_count() const { return static_cast<int>(states.size()); }
  int state_index(std::string_view name) const;  // -1 when absent
  int move_index(std::string_view name) const;
  int variable_index(std::string_view name) const;

  const std::vector<int>& moves_of(int player, State s) const;
  /// Transition by move positions within moves1[s] / moves2[s].
  const Distribution& transition(State s, int i1, int i2) const;
  double var_value(int variable, State s) const { return var_values[variable][s]; }
};

struct Violation {
  std::string where;
  std::string message;
};

/// Checks every structural invariant; returns the full violation list
/// (empty means valid). Violations are data, not errors.
std::vector<Violation> validate_structure(const GameStructure& g);

struct StructureClass {
  bool turn_based = false;
  bool mdp_for_1 = false;
  bool mdp_for_2 = false;
  bool deterministic = false;

  bool is_mdp_for(int player) const { return player == 1 ? mdp_for_1 : mdp_for_2; }
};

/// Computes class flags from the structure; never user-asserted.
/// Requires a valid structure.
StructureClass classify_structure(const GameStructure& g);

/// delta(s, x1, x2): next-state distribution under mixed moves.
/// Throws std::domain_error when a mix is not supported on the
/// available moves.
Distribution successor_distribution(const GameStructure& g, State s, const MixedMove& x1,
                                    const MixedMove& x2);

/// Expected value of k after one step from s under (x1, x2).
double expectation(const GameStructure& g, State s, const MixedMove& x1, const MixedMove& x2,
                   const Valuation& k);

/// Metric lift of the observation equivalence: max over variables of the
/// absolute interpretation difference.
double observation_distance(const GameStructure& g, State s, State t);

/// All-pairs observation distances, row-major.
std::vector<double> observation_distance_matrix(const GameStructure& g);

}  // namespace gamet
