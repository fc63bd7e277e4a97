#include "gamet/kernel.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "gamet/linopt.hpp"
#include "gamet/numeric.hpp"
#include "gamet/qmu.hpp"
#include "metric_detail.hpp"

namespace gamet {

// --- RelationSet / Partition ---------------------------------------------

RelationSet RelationSet::identity(int n) {
  RelationSet r(n);
  for (int s = 0; s < n; ++s) r.insert(s, s);
  return r;
}

RelationSet RelationSet::full(int n) {
  RelationSet r(n);
  for (int s = 0; s < n; ++s)
    for (int t = 0; t < n; ++t) r.insert(s, t);
  return r;
}

int RelationSet::pair_count() const {
  int c = 0;
  for (char b : rel_) c += b != 0;
  return c;
}

std::vector<std::pair<State, State>> RelationSet::pairs() const {
  std::vector<std::pair<State, State>> out;
  for (int s = 0; s < n_; ++s)
    for (int t = 0; t < n_; ++t)
      if (contains(s, t)) out.push_back({s, t});
  return out;
}

bool RelationSet::is_reflexive() const {
  for (int s = 0; s < n_; ++s)
    if (!contains(s, s)) return false;
  return true;
}

bool RelationSet::is_symmetric() const {
  for (int s = 0; s < n_; ++s)
    for (int t = 0; t < n_; ++t)
      if (contains(s, t) != contains(t, s)) return false;
  return true;
}

bool RelationSet::is_transitive() const {
  for (int s = 0; s < n_; ++s)
    for (int t = 0; t < n_; ++t)
      if (contains(s, t))
        for (int u = 0; u < n_; ++u)
          if (contains(t, u) && !contains(s, u)) return false;
  return true;
}

RelationSet RelationSet::transitive_closure() const {
  RelationSet r = *this;
  for (int via = 0; via < n_; ++via)
    for (int s = 0; s < n_; ++s)
      if (r.contains(s, via))
        for (int t = 0; t < n_; ++t)
          if (r.contains(via, t)) r.insert(s, t);
  return r;
}

std::vector<std::pair<State, State>> RelationSet::difference(const RelationSet& o) const {
  std::vector<std::pair<State, State>> out;
  for (int s = 0; s < n_; ++s)
    for (int t = 0; t < n_; ++t)
      if (contains(s, t) && !o.contains(s, t)) out.push_back({s, t});
  return out;
}

Partition::Partition(std::vector<std::vector<State>> blocks, int n)
    : n_(n), blocks_(std::move(blocks)), block_of_(static_cast<size_t>(n), -1) {
  for (size_t b = 0; b < blocks_.size(); ++b) {
    if (blocks_[b].empty()) throw std::invalid_argument("partition: empty block");
    for (State s : blocks_[b]) {
      if (s < 0 || s >= n_ || block_of_[s] != -1)
        throw std::invalid_argument("partition: blocks must be disjoint and in range");
      block_of_[s] = static_cast<int>(b);
    }
  }
  for (int s = 0; s < n_; ++s)
    if (block_of_[s] < 0) throw std::invalid_argument("partition: blocks must cover all states");
}

Partition Partition::discrete(int n) {
  std::vector<std::vector<State>> blocks;
  for (int s = 0; s < n; ++s) blocks.push_back({s});
  return Partition(std::move(blocks), n);
}

RelationSet Partition::as_relation() const {
  RelationSet r(n_);
  for (int s = 0; s < n_; ++s)
    for (int t = 0; t < n_; ++t)
      if (same_block(s, t)) r.insert(s, t);
  return r;
}

// --- lifting --------------------------------------------------------------

namespace {

// Feasibility of: exists alpha in simplex(ps), beta in simplex(qs) and a
// nonnegative weight function on related pairs whose row marginals equal
// sum_i alpha_i ps[i] and column marginals sum_j beta_j qs[j].
struct MixedLift {
  bool feasible = false;
  std::vector<double> weight;  // dense n*n, only when feasible
};

MixedLift mixed_lift_feasible(int n, const std::vector<const Distribution*>& ps,
                              const std::vector<const Distribution*>& qs, const RelationSet& r) {
  std::vector<std::pair<int, int>> support;
  for (int u = 0; u < n; ++u)
    for (int v = 0; v < n; ++v)
      if (r.contains(u, v)) support.push_back({u, v});
  const int nd = static_cast<int>(support.size());
  const int na = static_cast<int>(ps.size());
  const int nb = static_cast<int>(qs.size());
  LpProblem lp;
  lp.objective.assign(static_cast<size_t>(nd + na + nb), 0.0);
  for (int u = 0; u < n; ++u) {
    std::vector<double> row(static_cast<size_t>(nd + na + nb), 0.0);
    for (int i = 0; i < nd; ++i)
      if (support[i].first == u) row[i] = 1.0;
    for (int a = 0; a < na; ++a) row[static_cast<size_t>(nd + a)] = -(*ps[a])[u];
    lp.add_row(std::move(row), RowSense::Equal, 0.0);
  }
  for (int v = 0; v < n; ++v) {
    std::vector<double> row(static_cast<size_t>(nd + na + nb), 0.0);
    for (int i = 0; i < nd; ++i)
      if (support[i].second == v) row[i] = 1.0;
    for (int b = 0; b < nb; ++b) row[static_cast<size_t>(nd + na + b)] = -(*qs[b])[v];
    lp.add_row(std::move(row), RowSense::Equal, 0.0);
  }
  {
    std::vector<double> row(static_cast<size_t>(nd + na + nb), 0.0);
    for (int a = 0; a < na; ++a) row[static_cast<size_t>(nd + a)] = 1.0;
    lp.add_row(std::move(row), RowSense::Equal, 1.0);
  }
  {
    std::vector<double> row(static_cast<size_t>(nd + na + nb), 0.0);
    for (int b = 0; b < nb; ++b) row[static_cast<size_t>(nd + na + b)] = 1.0;
    lp.add_row(std::move(row), RowSense::Equal, 1.0);
  }
  FeasibilityResult fr = check_feasibility(lp);
  MixedLift out;
  out.feasible = fr.feasible;
  if (fr.feasible) {
    out.weight.assign(static_cast<size_t>(n) * n, 0.0);
    for (int i = 0; i < nd; ++i)
      out.weight[static_cast<size_t>(support[i].first) * n + support[i].second] = fr.point[i];
  }
  return out;
}

}  // namespace

LiftResult lift_compare(const Distribution& p, const Distribution& q, const RelationSet& r) {
  if (p.size() != r.size() || q.size() != r.size())
    throw std::invalid_argument("lift_compare: dimension mismatch");
  MixedLift ml = mixed_lift_feasible(r.size(), {&p}, {&q}, r);
  LiftResult out;
  out.holds = ml.feasible;
  out.weight = std::move(ml.weight);
  return out;
}

// --- one-step simulation checks -------------------------------------------

namespace {

struct StepCheck {
  bool holds = true;
  bool used_grid = false;
  double violation = 0.0;  // best observed grid violation (grid route only)
};

// Does t one-step-simulate s for the protagonist `player`, given that the
// current relation is R (valuations range over B(R))?
StepCheck one_step_sim(const GameStructure& g, int player, State s, State t,
                       const RelationSet& r, int resolution) {
  const int n = g.state_count();
  const auto& prot_s = player == 1 ? g.moves1[s] : g.moves2[s];
  const auto& prot_t = player == 1 ? g.moves1[t] : g.moves2[t];
  const auto& opp_s = player == 1 ? g.moves2[s] : g.moves1[s];
  const auto& opp_t = player == 1 ? g.moves2[t] : g.moves1[t];
  StepCheck out;

  if (opp_s.size() == 1 && opp_t.size() == 1) {
    // exact route: every pure protagonist challenge at s must be matched
    // by a mixed protagonist response at t whose successor distribution
    // dominates along R
    std::vector<const Distribution*> qs;
    for (size_t b = 0; b < prot_t.size(); ++b)
      qs.push_back(&detail::transition_for(g, player, t, static_cast<int>(b), 0));
    for (size_t a = 0; a < prot_s.size(); ++a) {
      const Distribution& p = detail::transition_for(g, player, s, static_cast<int>(a), 0);
      if (!mixed_lift_feasible(n, {&p}, qs, r).feasible) {
        out.holds = false;
        return out;
      }
    }
    return out;
  }
  if (prot_s.size() == 1 && prot_t.size() == 1) {
    // exact route, flipped: every pure opponent challenge at t must be
    // matched by a mixed opponent response at s
    std::vector<const Distribution*> ps;
    for (size_t a = 0; a < opp_s.size(); ++a)
      ps.push_back(&detail::transition_for(g, player, s, 0, static_cast<int>(a)));
    for (size_t b = 0; b < opp_t.size(); ++b) {
      const Distribution& q = detail::transition_for(g, player, t, 0, static_cast<int>(b));
      if (!mixed_lift_feasible(n, ps, {&q}, r).feasible) {
        out.holds = false;
        return out;
      }
    }
    return out;
  }

  // grid route over B(R): remove only when the best observed violation
  // exceeds the margin of one mesh width
  out.used_grid = true;
  RelationSet closure = r.transitive_closure();
  for (int u = 0; u < n; ++u) closure.insert(u, u);
  std::vector<int> used =
      detail::sorted_union(detail::destinations(g, s), detail::destinations(g, t));
  const size_t m = used.size();
  std::vector<std::vector<int>> up(m);
  for (size_t i = 0; i < m; ++i)
    for (size_t j = 0; j < m; ++j)
      if (closure.contains(used[i], used[j])) up[i].push_back(static_cast<int>(j));
  // mutually related coordinates carry equal values in B(R)
  std::vector<int> group(m, -1);
  int groups = 0;
  for (size_t i = 0; i < m; ++i) {
    if (group[i] >= 0) continue;
    group[i] = groups++;
    for (size_t j = i + 1; j < m; ++j)
      if (group[j] < 0 && closure.contains(used[i], used[j]) &&
          closure.contains(used[j], used[i]))
        group[j] = group[i];
  }
  detail::BGrid grid(n, used, std::move(up), resolution, std::move(group));
  if (grid.point_count() > 50'000'000)
    throw std::length_error("kernel grid too large; coarsen the mesh");
  double best = -kInf;
  grid.for_each([&](const Valuation& k) {
    double v = pre_at(g, player, s, k) - pre_at(g, player, t, k);
    if (v > best) best = v;
  });
  out.violation = best;
  out.holds = best <= 1.0 / resolution;
  return out;
}

}  // namespace

// --- game simulation kernel -------------------------------------------------

SimKernelResult game_sim_kernel(const GameStructure& g, int player, double mesh) {
  if (player != 1 && player != 2) throw std::domain_error("player must be 1 or 2");
  const int n = g.state_count();
  const int resolution = detail::resolution_for_mesh(mesh);

  RelationSet r(n);
  for (int s = 0; s < n; ++s)
    for (int t = 0; t < n; ++t)
      if (s == t || observation_distance(g, s, t) <= kMassTol) r.insert(s, t);

  SimKernelResult result;
  result.relation = r;
  for (;;) {
    // refine to a fixpoint (sequential removal is sound for the greatest
    // fixpoint: a violation against a larger relation persists below)
    int rounds = 0;
    bool changed = true;
    while (changed) {
      changed = false;
      ++rounds;
      for (int s = 0; s < n; ++s) {
        for (int t = 0; t < n; ++t) {
          if (s == t || !result.relation.contains(s, t)) continue;
          StepCheck c = one_step_sim(g, player, s, t, result.relation, resolution);
          if (!c.holds) {
            result.relation.erase(s, t);
            changed = true;
          }
          if (c.used_grid) result.exact = false;
        }
      }
      if (rounds > n * n + 2) throw std::logic_error("simulation refinement did not stabilize");
    }
    result.rounds += rounds;

    // flag kept pairs decided inside the margin
    result.within_margin.clear();
    for (int s = 0; s < n; ++s)
      for (int t = 0; t < n; ++t) {
        if (s == t || !result.relation.contains(s, t)) continue;
        StepCheck c = one_step_sim(g, player, s, t, result.relation, resolution);
        if (c.used_grid && c.violation > kFeasTol)
          result.within_margin.push_back({s, t});
      }

    if (result.relation.is_transitive()) break;
    // margin-kept pairs can break transitivity; drop them and re-refine
    if (result.within_margin.empty())
      throw std::logic_error("intransitive simulation kernel without margin pairs");
    for (auto [s, t] : result.within_margin) result.relation.erase(s, t);
    result.within_margin.clear();
  }
  return result;
}

// --- game bisimulation kernel ------------------------------------------------

namespace {

Partition initial_observation_partition(const GameStructure& g) {
  const int n = g.state_count();
  std::vector<std::vector<State>> blocks;
  for (int s = 0; s < n; ++s) {
    bool placed = false;
    for (auto& block : blocks) {
      if (observation_distance(g, s, block.front()) <= kMassTol) {
        block.push_back(s);
        placed = true;
        break;
      }
    }
    if (!placed) blocks.push_back({s});
  }
  return Partition(std::move(blocks), n);
}

// Greedy split of one block by a symmetric pass predicate.
std::vector<std::vector<State>> split_block(const std::vector<State>& block,
                                            const std::vector<std::vector<char>>& pass) {
  std::vector<std::vector<State>> out;
  for (State s : block) {
    bool placed = false;
    for (auto& sub : out) {
      bool ok = true;
      for (State t : sub)
        if (!pass[s][t] || !pass[t][s]) {
          ok = false;
          break;
        }
      if (ok) {
        sub.push_back(s);
        placed = true;
        break;
      }
    }
    if (!placed) out.push_back({s});
  }
  return out;
}

}  // namespace

BisimKernelResult game_bisim_kernel(const GameStructure& g, double mesh) {
  const int n = g.state_count();
  const int resolution = detail::resolution_for_mesh(mesh);
  BisimKernelResult result;
  Partition p = initial_observation_partition(g);

  for (int round = 0; round <= n * n + 2; ++round) {
    result.rounds = round;
    RelationSet r = p.as_relation();
    std::vector<std::vector<char>> pass(static_cast<size_t>(n),
                                        std::vector<char>(static_cast<size_t>(n), 1));
    result.within_margin.clear();
    for (const auto& block : p.blocks()) {
      for (State s : block) {
        for (State t : block) {
          if (s == t) continue;
          StepCheck c = one_step_sim(g, 1, s, t, r, resolution);
          pass[s][t] = c.holds;
          if (c.used_grid) {
            result.exact = false;
            if (c.holds && c.violation > kFeasTol) result.within_margin.push_back({s, t});
          }
        }
      }
    }
    std::vector<std::vector<State>> next_blocks;
    bool changed = false;
    for (const auto& block : p.blocks()) {
      auto subs = split_block(block, pass);
      if (subs.size() > 1) changed = true;
      for (auto& sub : subs) next_blocks.push_back(std::move(sub));
    }
    p = Partition(std::move(next_blocks), n);
    if (!changed) break;
  }
  result.partition = std::move(p);
  return result;
}

Partition classical_bisim_kernel(const GameStructure& g) {
  const int n = g.state_count();
  Partition p = initial_observation_partition(g);

  auto coop_pass = [&](State s, State t, const RelationSet& r) {
    std::vector<const Distribution*> qs;
    for (const Distribution& q : g.delta[t]) qs.push_back(&q);
    for (const Distribution& ps : g.delta[s])
      if (!mixed_lift_feasible(n, {&ps}, qs, r).feasible) return false;
    return true;
  };

  for (int round = 0; round <= n * n + 2; ++round) {
    RelationSet r = p.as_relation();
    std::vector<std::vector<char>> pass(static_cast<size_t>(n),
                                        std::vector<char>(static_cast<size_t>(n), 1));
    for (const auto& block : p.blocks())
      for (State s : block)
        for (State t : block)
          if (s != t) pass[s][t] = coop_pass(s, t, r);
    std::vector<std::vector<State>> next_blocks;
    bool changed = false;
    for (const auto& block : p.blocks()) {
      auto subs = split_block(block, pass);
      if (subs.size() > 1) changed = true;
      for (auto& sub : subs) next_blocks.push_back(std::move(sub));
    }
    p = Partition(std::move(next_blocks), n);
    if (!changed) break;
  }
  return p;
}

RelationSet alt_sim_pure(const GameStructure& g, int player) {
  if (player != 1 && player != 2) throw std::domain_error("player must be 1 or 2");
  const int n = g.state_count();
  RelationSet r(n);
  for (int s = 0; s < n; ++s)
    for (int t = 0; t < n; ++t)
      if (s == t || observation_distance(g, s, t) <= kMassTol) r.insert(s, t);

  auto prot_count = [&](State s) {
    return static_cast<int>((player == 1 ? g.moves1[s] : g.moves2[s]).size());
  };
  auto opp_count = [&](State s) {
    return static_cast<int>((player == 1 ? g.moves2[s] : g.moves1[s]).size());
  };

  bool changed = true;
  while (changed) {
    changed = false;
    for (int s = 0; s < n; ++s) {
      for (int t = 0; t < n; ++t) {
        if (s == t || !r.contains(s, t)) continue;
        bool ok = true;
        for (int a = 0; a < prot_count(s) && ok; ++a) {
          bool matched = false;
          for (int b = 0; b < prot_count(t) && !matched; ++b) {
            bool all_answered = true;
            for (int c = 0; c < opp_count(t) && all_answered; ++c) {
              bool answered = false;
              for (int e = 0; e < opp_count(s) && !answered; ++e) {
                const Distribution& ps = detail::transition_for(g, player, s, a, e);
                const Distribution& qt = detail::transition_for(g, player, t, b, c);
                answered = lift_compare(ps, qt, r).holds;
              }
              all_answered = answered;
            }
            matched = all_answered;
          }
          ok = matched;
        }
        if (!ok) {
          r.erase(s, t);
          changed = true;
        }
      }
    }
  }
  return r;
}

RelationComparison compare_relations(const GameStructure& g, double mesh) {
  const int n = g.state_count();
  RelationComparison out;
  out.mesh = mesh;

  out.relations.push_back({"game-sim-1", game_sim_kernel(g, 1, mesh).relation});
  out.relations.push_back({"game-sim-2", game_sim_kernel(g, 2, mesh).relation});
  out.relations.push_back({"game-bisim", game_bisim_kernel(g, mesh).partition.as_relation()});
  out.relations.push_back({"classical-bisim", classical_bisim_kernel(g).as_relation()});
  out.relations.push_back({"alt-sim-pure-1", alt_sim_pure(g, 1)});
  out.relations.push_back({"alt-sim-pure-2", alt_sim_pure(g, 2)});

  auto zero_set = [&](MetricKind kind, int player) {
    MetricReport rep = iterate_metric(g, kind, player, 50, 1e-6, mesh);
    double threshold = rep.certified_error + 1e-6;
    RelationSet r(n);
    for (int s = 0; s < n; ++s)
      for (int t = 0; t < n; ++t)
        if (rep.metric(s, t) <= threshold) r.insert(s, t);
    out.zero_set_threshold = std::max(out.zero_set_threshold, threshold);
    return r;
  };
  out.relations.push_back({"zero-apriori-sim-1", zero_set(MetricKind::AprioriSim, 1)});
  out.relations.push_back({"zero-apriori-bisim", zero_set(MetricKind::AprioriBisim, 1)});
  out.relations.push_back({"zero-aposteriori-sim-1", zero_set(MetricKind::AposterioriSim, 1)});
  out.relations.push_back({"zero-aposteriori-bisim", zero_set(MetricKind::AposterioriBisim, 1)});
  out.relations.push_back({"zero-coop-sim", zero_set(MetricKind::CoopSim, 1)});
  out.relations.push_back({"zero-coop-bisim", zero_set(MetricKind::CoopBisim, 1)});

  for (const auto& a : out.relations) {
    for (const auto& b : out.relations) {
      if (&a == &b) continue;
      auto diff = a.relation.difference(b.relation);
      if (!diff.empty())
        out.separations.push_back({a.name, b.name, diff.front(), "in_a_not_b"});
    }
  }
  return out;
}

}  // namespace gamet
