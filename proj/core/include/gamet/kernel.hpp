#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "gamet/game.hpp"
#include "gamet/metric.hpp"

namespace gamet {

/// Set of ordered state pairs over a fixed state count.
class RelationSet {
 public:
  RelationSet() = default;
  explicit RelationSet(int n) : n_(n), rel_(static_cast<size_t>(n) * n, 0) {}
  static RelationSet identity(int n);
  static RelationSet full(int n);

  int size() const { return n_; }
  bool contains(State s, State t) const { return rel_[static_cast<size_t>(s) * n_ + t] != 0; }
  void insert(State s, State t) { rel_[static_cast<size_t>(s) * n_ + t] = 1; }
  void erase(State s, State t) { rel_[static_cast<size_t>(s) * n_ + t] = 0; }
  int pair_count() const;
  std::vector<std::pair<State, State>> pairs() const;

  bool is_reflexive() const;
  bool is_symmetric() const;
  bool is_transitive() const;
  RelationSet transitive_closure() const;
  /// Pairs of this relation missing from the other (ordered scan).
  std::vector<std::pair<State, State>> difference(const RelationSet& o) const;
  bool operator==(const RelationSet& o) const { return n_ == o.n_ && rel_ == o.rel_; }

 private:
  int n_ = 0;
  std::vector<char> rel_;
};

/// Ordered disjoint blocks covering all states.
class Partition {
 public:
  Partition() = default;
  explicit Partition(std::vector<std::vector<State>> blocks, int n);
  static Partition discrete(int n);

  int state_count() const { return n_; }
  int block_count() const { return static_cast<int>(blocks_.size()); }
  const std::vector<std::vector<State>>& blocks() const { return blocks_; }
  int block_of(State s) const { return block_of_[s]; }
  bool same_block(State s, State t) const { return block_of_[s] == block_of_[t]; }
  RelationSet as_relation() const;
  bool operator==(const Partition& o) const { return block_of_ == o.block_of_; }

 private:
  int n_ = 0;
  std::vector<std::vector<State>> blocks_;
  std::vector<int> block_of_;
};

struct LiftResult {
  bool holds = false;
  /// Weight function over state pairs when holds (row marginals p,
  /// column marginals q, support inside the relation).
  std::vector<double> weight;
};

/// Lifting of a relation to distributions: p can be split along related
/// pairs into q. One feasibility LP.
LiftResult lift_compare(const Distribution& p, const Distribution& q, const RelationSet& r);

struct SimKernelResult {
  RelationSet relation;
  /// Pairs kept related although a grid violation below the decision
  /// margin was observed (concurrent approximate route only).
  std::vector<std::pair<State, State>> within_margin;
  bool exact = true;
  int rounds = 0;
};

/// Game simulation preorder (kernel of the a priori simulation metric):
/// iterated refinement of the one-step condition over B(R). Exact LP
/// route for pairs where one side's move choice is trivial, projected
/// grid search with margin mesh elsewhere.
SimKernelResult game_sim_kernel(const GameStructure& g, int player, double mesh);

struct BisimKernelResult {
  Partition partition;
  std::vector<std::pair<State, State>> within_margin;
  bool exact = true;
  int rounds = 0;
};

/// Game bisimulation partition (kernel of the a priori bisimulation
/// metric) by partition refinement; B(R) for an equivalence is the set
/// of block-constant valuations.
BisimKernelResult game_bisim_kernel(const GameStructure& g, double mesh);

/// Classical probabilistic bisimulation where both players jointly
/// control: blocks split by existence of joint mixed responses matching
/// block masses (exact, LP feasibility only).
Partition classical_bisim_kernel(const GameStructure& g);

/// Pure alternating simulation: greatest fixpoint of the forall-exists-
/// forall-exists condition over pure moves with the lifting as successor
/// test (exact).
RelationSet alt_sim_pure(const GameStructure& g, int player);

struct SeparationRecord {
  std::string relation_a;
  std::string relation_b;
  std::pair<State, State> witness_pair;
  std::string direction;  // "a_minus_b" or "b_minus_a"
};

struct NamedRelation {
  std::string name;
  RelationSet relation;
};

struct RelationComparison {
  std::vector<NamedRelation> relations;
  std::vector<SeparationRecord> separations;
  double mesh = 0.0;
  double zero_set_threshold = 0.0;
};

/// Computes the game kernels, the classical kernel, the pure alternating
/// relations and the zero-sets of all metric fixpoints, then reports
/// every strict separation with a witness pair.
RelationComparison compare_relations(const GameStructure& g, double mesh);

}  // namespace gamet
