#pragma once

#include <string>
#include <utility>
#include <vector>

#include "gamet/game.hpp"

namespace gamet {

/// Square nonnegative matrix with zero diagonal; entries in [0,1].
/// Houses directed metrics d and their iterates. The triangle inequality
/// is established by tighten() and preserved by every step.
class DirectedMetric {
 public:
  DirectedMetric() = default;
  explicit DirectedMetric(int n) : n_(n), d_(static_cast<size_t>(n) * n, 0.0) {}
  DirectedMetric(int n, std::vector<double> entries);

  int size() const { return n_; }
  double operator()(State s, State t) const { return d_[static_cast<size_t>(s) * n_ + t]; }
  double& at(State s, State t) { return d_[static_cast<size_t>(s) * n_ + t]; }
  const std::vector<double>& entries() const { return d_; }

  DirectedMetric opposite() const;
  static DirectedMetric join(const DirectedMetric& a, const DirectedMetric& b);  // pointwise max
  double sup_delta(const DirectedMetric& o) const;
  double max_entry() const;
  bool satisfies_triangle(double tol) const;
  /// Entries all 1 off the diagonal: the weakest constraint set.
  static DirectedMetric ones_off_diagonal(int n);

 private:
  int n_ = 0;
  std::vector<double> d_;
};

/// Largest directed metric <= d with the same constraint set C(d):
/// min-plus shortest-path closure. Idempotent. Throws std::domain_error
/// on negative entries or a nonzero diagonal.
DirectedMetric tighten(const DirectedMetric& d);

// The constraint set C(d): valuations k with k(s) - k(t) <= d(s,t) for
// all pairs, intersected with the unit box. Nonempty (all constants) and
// closed convex; it is what the metric transformers take suprema over.
bool in_constraint_set(const Valuation& k, const DirectedMetric& d, double tol = 0.0);
/// Nonexpansive map into C(d) (the d-lower regularization); members map
/// to themselves. Requires a tightened d.
Valuation project_into_constraint_set(const Valuation& k, const DirectedMetric& d);

/// Tightened observation-distance matrix (the metric lift of the
/// observation equivalence is already a metric; tightening is a no-op
/// kept for uniformity).
DirectedMetric observation_metric(const GameStructure& g);

struct TransshipPlan {
  int n = 0;
  std::vector<double> flow;  // row-major lambda(s,t)
  double cost = 0.0;

  double at(State s, State t) const { return flow[static_cast<size_t>(s) * n + t]; }
};

struct TransshipResult {
  double value = 0.0;
  TransshipPlan plan;
};

/// Minimum cost of shipping p into q with edge costs d (one LP).
TransshipResult transship_distance(const Distribution& p, const Distribution& q,
                                   const DirectedMetric& d);

struct StepResult {
  DirectedMetric metric;
  /// Upper bound on the per-entry approximation error introduced by this
  /// step; 0 when every sub-solve was LP-exact.
  double certified_error = 0.0;
};

/// A priori transformer: per pair, obs-distance joined with the sup over
/// C(d) of the pre-value difference, the sup approximated by projected
/// grid search (certified to one mesh width).
StepResult apriori_step(const GameStructure& g, const DirectedMetric& d, int player, double mesh);

/// A posteriori transformer: outer challenger/matcher mixes on simplex
/// grids, pure opponent challenges, and one combined LP over the matcher
/// response and the trans-shipping plan. Pairs where the protagonist or
/// the opponent is trivial on both sides are solved exactly.
StepResult aposteriori_step(const GameStructure& g, const DirectedMetric& d, int player,
                            double mesh);

/// Cooperative transformer: exact. Outer max over pure joint moves at s;
/// the optimal adversary mixture and valuation collapse into one LP.
StepResult coop_step(const GameStructure& g, const DirectedMetric& d);

enum class MetricKind {
  AprioriSim,
  AprioriBisim,
  AposterioriSim,
  AposterioriBisim,
  CoopSim,
  CoopBisim,
};

std::string metric_kind_name(MetricKind kind);
MetricKind metric_kind_from_name(std::string_view name);  // throws on unknown
bool metric_kind_is_bisim(MetricKind kind);

struct MetricReport {
  MetricKind kind = MetricKind::AprioriSim;
  int player = 1;
  DirectedMetric metric;
  int iterations = 0;
  double last_delta = 0.0;
  bool converged = false;
  double mesh = 0.0;
  double certified_error = 0.0;
  std::vector<double> step_deltas;
  /// Tightened iterate after every step; nondecreasing pointwise up to
  /// the certified error (least-fixpoint iteration from the zero metric).
  std::vector<DirectedMetric> iterate_history;
};

/// Picard iteration from the all-zero metric; bisim kinds symmetrize each
/// step with the opposite metric; every iterate is tightened.
MetricReport iterate_metric(const GameStructure& g, MetricKind kind, int player, int iters,
                            double tol, double mesh);

/// Independent oracle for the a priori sup: plain grid enumeration over
/// [0,1]^m (restricted to coordinates feeding the objective), each point
/// projected into C(d). Returns (grid lower bound, certified upper
/// bound = lower + mesh). Guarded at 1e7 evaluations.
std::pair<double, double> brute_force_sup_over_c(const GameStructure& g, const DirectedMetric& d,
                                                 State s, State t, int player, double mesh);

}  // namespace gamet
