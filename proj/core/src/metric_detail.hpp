#pragma once

// Internal grid machinery shared by the metric steps, the kernel
// refinement and witness synthesis. Not installed.

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "gamet/game.hpp"
#include "gamet/metric.hpp"
#include "gamet/qmu.hpp"

namespace gamet::detail {

/// States reachable in one step from s (union over all move pairs of the
/// transition supports), sorted.
std::vector<int> destinations(const GameStructure& g, State s);

std::vector<int> sorted_union(const std::vector<int>& a, const std::vector<int>& b);

/// All distributions over m points with weights that are multiples of
/// 1/resolution (simplex grid; resolution >= 1).
std::vector<MixedMove> simplex_grid(int m, int resolution);

/// Total-variation distance within which any mixed move over m moves has
/// a simplex-grid neighbour at the given resolution.
double tv_rounding_bound(int m, int resolution);

/// Transition by protagonist/opponent positions for either player.
const Distribution& transition_for(const GameStructure& g, int player, State s, int prot_pos,
                                   int opp_pos);

/// Grid over the valuations in C(d), restricted to the coordinates in
/// `used` (the remaining coordinates never feed the objectives and always
/// admit a completion because d satisfies the triangle inequality).
/// Coordinates forced equal by d (zero distance both ways) share one grid
/// dimension; every raw grid point is projected into C(d) by the d-lower
/// regularization, so the visited set is within mesh/2 (sup-norm) of any
/// point of C(d).
class CGrid {
 public:
  CGrid(const DirectedMetric& d, std::vector<int> used, int resolution);

  long long point_count() const;

  /// Calls f(k) for every projected grid point; k is a scratch valuation
  /// of full state size, meaningful on the used coordinates only.
  template <class F>
  void for_each(F&& f) const {
    const int groups = static_cast<int>(group_rep_.size());
    std::vector<int> idx(static_cast<size_t>(groups), 0);
    Valuation k = Valuation::constant(n_, 0.0);
    std::vector<double> raw(used_.size(), 0.0);
    for (;;) {
      for (size_t u = 0; u < used_.size(); ++u)
        raw[u] = static_cast<double>(idx[group_of_used_[u]]) / resolution_;
      // project into C(d): k(x) = min over used y of raw(y) + d(x,y)
      for (size_t ux = 0; ux < used_.size(); ++ux) {
        double best = raw[ux];
        for (size_t uy = 0; uy < used_.size(); ++uy)
          best = std::min(best, raw[uy] + dist_[ux * used_.size() + uy]);
        k[used_[ux]] = best;
      }
      f(static_cast<const Valuation&>(k));
      int at = 0;
      while (at < groups && ++idx[at] > resolution_) idx[at++] = 0;
      if (at == groups) break;
    }
  }

  const std::vector<int>& used() const { return used_; }

 private:
  int n_ = 0;
  int resolution_ = 1;
  std::vector<int> used_;
  std::vector<int> group_of_used_;  // parallel to used_
  std::vector<int> group_rep_;
  std::vector<double> dist_;  // d restricted to used, row-major
};

/// Grid over the valuations in B(R) (monotone along R), restricted to
/// `used`. Uses the reflexive-transitive closure of R restricted to the
/// used coordinates for the monotone projection.
class BGrid {
 public:
  // up[u] lists the used-coordinate positions that position u must not
  // exceed (its R-successors within `used`, including itself).
  BGrid(int n, std::vector<int> used, std::vector<std::vector<int>> up, int resolution,
        std::vector<int> group_of_used);

  long long point_count() const;

  template <class F>
  void for_each(F&& f) const {
    const int groups = group_count_;
    std::vector<int> idx(static_cast<size_t>(groups), 0);
    Valuation k = Valuation::constant(n_, 0.0);
    std::vector<double> raw(used_.size(), 0.0);
    for (;;) {
      for (size_t u = 0; u < used_.size(); ++u)
        raw[u] = static_cast<double>(idx[group_of_used_[u]]) / resolution_;
      for (size_t u = 0; u < used_.size(); ++u) {
        double best = raw[u];
        for (int v : up_[u]) best = std::min(best, raw[v]);
        k[used_[u]] = best;
      }
      f(static_cast<const Valuation&>(k));
      int at = 0;
      while (at < groups && ++idx[at] > resolution_) idx[at++] = 0;
      if (at == groups) break;
    }
  }

 private:
  int n_ = 0;
  int resolution_ = 1;
  int group_count_ = 0;
  std::vector<int> used_;
  std::vector<int> group_of_used_;
  std::vector<std::vector<int>> up_;
};

struct SupArgmax {
  double value = 0.0;
  Valuation argmax;
};

/// sup over C(d) of pre_player(k)(s) - pre_player(k)(t) by projected grid
/// search; exact evaluation at every visited point, so the value is a
/// lower bound within one mesh width of the true sup.
SupArgmax apriori_sup_argmax(const GameStructure& g, const DirectedMetric& d, State s, State t,
                             int player, int resolution);

inline int resolution_for_mesh(double mesh) {
  if (!(mesh > 0.0) || mesh > 1.0) throw std::domain_error("mesh must be in (0,1]");
  return std::max(1, static_cast<int>(std::lround(1.0 / mesh)));
}

}  // namespace gamet::detail
