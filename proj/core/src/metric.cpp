#include "gamet/metric.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <stdexcept>

#include "gamet/linopt.hpp"
#include "gamet/numeric.hpp"
#include "gamet/qmu.hpp"
#include "metric_detail.hpp"

namespace gamet {

DirectedMetric::DirectedMetric(int n, std::vector<double> entries) : n_(n), d_(std::move(entries)) {
  if (static_cast<int>(d_.size()) != n * n)
    throw std::invalid_argument("directed metric: entry count mismatch");
}

DirectedMetric DirectedMetric::opposite() const {
  DirectedMetric o(n_);
  for (int s = 0; s < n_; ++s)
    for (int t = 0; t < n_; ++t) o.at(t, s) = (*this)(s, t);
  return o;
}

DirectedMetric DirectedMetric::join(const DirectedMetric& a, const DirectedMetric& b) {
  if (a.size() != b.size()) throw std::invalid_argument("metric join: size mismatch");
  DirectedMetric out(a.size());
  for (size_t i = 0; i < a.d_.size(); ++i) out.d_[i] = std::max(a.d_[i], b.d_[i]);
  return out;
}

double DirectedMetric::sup_delta(const DirectedMetric& o) const {
  double best = 0.0;
  for (size_t i = 0; i < d_.size(); ++i) best = std::max(best, std::fabs(d_[i] - o.d_[i]));
  return best;
}

double DirectedMetric::max_entry() const {
  double best = 0.0;
  for (double v : d_) best = std::max(best, v);
  return best;
}

bool DirectedMetric::satisfies_triangle(double tol) const {
  for (int s = 0; s < n_; ++s)
    for (int t = 0; t < n_; ++t)
      for (int u = 0; u < n_; ++u)
        if ((*this)(s, t) > (*this)(s, u) + (*this)(u, t) + tol) return false;
  return true;
}

DirectedMetric DirectedMetric::ones_off_diagonal(int n) {
  DirectedMetric d(n);
  for (int s = 0; s < n; ++s)
    for (int t = 0; t < n; ++t)
      if (s != t) d.at(s, t) = 1.0;
  return d;
}

DirectedMetric tighten(const DirectedMetric& d) {
  const int n = d.size();
  for (int s = 0; s < n; ++s) {
    if (d(s, s) != 0.0) throw std::domain_error("tighten: nonzero diagonal");
    for (int t = 0; t < n; ++t)
      if (d(s, t) < 0.0) throw std::domain_error("tighten: negative entry");
  }
  DirectedMetric out = d;
  for (int via = 0; via < n; ++via)
    for (int s = 0; s < n; ++s)
      for (int t = 0; t < n; ++t) {
        double relaxed = out(s, via) + out(via, t);
        if (relaxed < out(s, t)) out.at(s, t) = relaxed;
      }
  return out;
}

DirectedMetric observation_metric(const GameStructure& g) {
  DirectedMetric d(g.state_count(), observation_distance_matrix(g));
  return tighten(d);
}

bool in_constraint_set(const Valuation& k, const DirectedMetric& d, double tol) {
  const int n = d.size();
  if (k.size() != n) throw std::invalid_argument("constraint set: dimension mismatch");
  for (int s = 0; s < n; ++s) {
    if (k[s] < -tol || k[s] > 1.0 + tol) return false;
    for (int t = 0; t < n; ++t)
      if (k[s] - k[t] > d(s, t) + tol) return false;
  }
  return true;
}

Valuation project_into_constraint_set(const Valuation& k, const DirectedMetric& d) {
  const int n = d.size();
  if (k.size() != n) throw std::invalid_argument("constraint set: dimension mismatch");
  Valuation out = Valuation::constant(n, 0.0);
  for (int s = 0; s < n; ++s) {
    double best = std::min(1.0, std::max(0.0, k[s]));
    for (int t = 0; t < n; ++t)
      best = std::min(best, std::min(1.0, std::max(0.0, k[t])) + d(s, t));
    out[s] = best;
  }
  return out;
}

// --- trans-shipping ----------------------------------------------------

TransshipResult transship_distance(const Distribution& p, const Distribution& q,
                                   const DirectedMetric& d) {
  const int n = d.size();
  if (p.size() != n || q.size() != n)
    throw std::invalid_argument("transship: dimension mismatch");
  LpProblem lp;
  lp.objective.assign(static_cast<size_t>(n) * n, 0.0);
  for (int s = 0; s < n; ++s)
    for (int t = 0; t < n; ++t) lp.objective[static_cast<size_t>(s) * n + t] = d(s, t);
  for (int s = 0; s < n; ++s) {
    std::vector<double> row(static_cast<size_t>(n) * n, 0.0);
    for (int t = 0; t < n; ++t) row[static_cast<size_t>(s) * n + t] = 1.0;
    lp.add_row(std::move(row), RowSense::Equal, p[s]);
  }
  for (int t = 0; t < n; ++t) {
    std::vector<double> row(static_cast<size_t>(n) * n, 0.0);
    for (int s = 0; s < n; ++s) row[static_cast<size_t>(s) * n + t] = 1.0;
    lp.add_row(std::move(row), RowSense::Equal, q[t]);
  }
  LpResult res = solve_lp(lp);
  if (res.status != LpStatus::Optimal)
    throw std::runtime_error("transship LP infeasible (inputs are not distributions?)");
  TransshipResult out;
  out.value = res.value;
  out.plan.n = n;
  out.plan.flow = res.point;
  out.plan.cost = res.value;
  return out;
}

// --- detail: grids ------------------------------------------------------

namespace detail {

std::vector<int> destinations(const GameStructure& g, State s) {
  std::vector<char> seen(static_cast<size_t>(g.state_count()), 0);
  for (const Distribution& d : g.delta[s])
    for (int t = 0; t < g.state_count(); ++t)
      if (d[t] > 0.0) seen[t] = 1;
  std::vector<int> out;
  for (int t = 0; t < g.state_count(); ++t)
    if (seen[t]) out.push_back(t);
  return out;
}

std::vector<int> sorted_union(const std::vector<int>& a, const std::vector<int>& b) {
  std::vector<int> out;
  std::set_union(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  return out;
}

std::vector<MixedMove> simplex_grid(int m, int resolution) {
  std::vector<MixedMove> out;
  MixedMove current(static_cast<size_t>(m), 0.0);
  // enumerate integer compositions of `resolution` into m parts
  std::vector<int> parts(static_cast<size_t>(m), 0);
  auto emit = [&]() {
    for (int i = 0; i < m; ++i) current[i] = static_cast<double>(parts[i]) / resolution;
    out.push_back(current);
  };
  if (m == 1) {
    parts[0] = resolution;
    emit();
    return out;
  }
  // odometer over the first m-1 parts, last absorbs the remainder
  int head = m - 1;
  std::vector<int> idx(static_cast<size_t>(head), 0);
  for (;;) {
    int sum = std::accumulate(idx.begin(), idx.end(), 0);
    if (sum <= resolution) {
      for (int i = 0; i < head; ++i) parts[i] = idx[i];
      parts[head] = resolution - sum;
      emit();
    }
    int at = 0;
    while (at < head && ++idx[at] > resolution) idx[at++] = 0;
    if (at == head) break;
  }
  return out;
}

double tv_rounding_bound(int m, int resolution) {
  if (m <= 1) return 0.0;
  return static_cast<double>(m - 1) / resolution;
}

const Distribution& transition_for(const GameStructure& g, int player, State s, int prot_pos,
                                   int opp_pos) {
  if (player == 1) return g.transition(s, prot_pos, opp_pos);
  return g.transition(s, opp_pos, prot_pos);
}

CGrid::CGrid(const DirectedMetric& d, std::vector<int> used, int resolution)
    : n_(d.size()), resolution_(resolution), used_(std::move(used)) {
  const size_t m = used_.size();
  dist_.assign(m * m, 0.0);
  for (size_t i = 0; i < m; ++i)
    for (size_t j = 0; j < m; ++j) dist_[i * m + j] = d(used_[i], used_[j]);
  // coordinates at zero mutual distance carry equal values in every
  // k in C(d); they share one grid dimension
  group_of_used_.assign(m, -1);
  for (size_t i = 0; i < m; ++i) {
    if (group_of_used_[i] >= 0) continue;
    int group = static_cast<int>(group_rep_.size());
    group_of_used_[i] = group;
    group_rep_.push_back(used_[i]);
    for (size_t j = i + 1; j < m; ++j) {
      if (group_of_used_[j] >= 0) continue;
      if (dist_[i * m + j] <= 1e-12 && dist_[j * m + i] <= 1e-12) group_of_used_[j] = group;
    }
  }
}

long long CGrid::point_count() const {
  long long total = 1;
  for (size_t i = 0; i < group_rep_.size(); ++i) {
    total *= resolution_ + 1;
    if (total > (1LL << 62) / (resolution_ + 1)) return total;  // saturate
  }
  return total;
}

BGrid::BGrid(int n, std::vector<int> used, std::vector<std::vector<int>> up, int resolution,
             std::vector<int> group_of_used)
    : n_(n), resolution_(resolution), used_(std::move(used)), group_of_used_(std::move(group_of_used)),
      up_(std::move(up)) {
  group_count_ = 0;
  for (int gi : group_of_used_) group_count_ = std::max(group_count_, gi + 1);
}

long long BGrid::point_count() const {
  long long total = 1;
  for (int i = 0; i < group_count_; ++i) {
    total *= resolution_ + 1;
    if (total > (1LL << 62) / (resolution_ + 1)) return total;
  }
  return total;
}

SupArgmax apriori_sup_argmax(const GameStructure& g, const DirectedMetric& d, State s, State t,
                             int player, int resolution) {
  std::vector<int> used = sorted_union(destinations(g, s), destinations(g, t));
  CGrid grid(tighten(d), used, resolution);
  SupArgmax best;
  best.value = -kInf;
  grid.for_each([&](const Valuation& k) {
    double v = pre_at(g, player, s, k) - pre_at(g, player, t, k);
    if (v > best.value) {
      best.value = v;
      best.argmax = k;
    }
  });
  return best;
}

}  // namespace detail

// --- a priori step ------------------------------------------------------

StepResult apriori_step(const GameStructure& g, const DirectedMetric& d, int player, double mesh) {
  if (player != 1 && player != 2) throw std::domain_error("player must be 1 or 2");
  const int n = g.state_count();
  const int resolution = detail::resolution_for_mesh(mesh);
  DirectedMetric dm = tighten(d);
  DirectedMetric out(n);

  std::vector<double> obs = observation_distance_matrix(g);
  std::vector<std::vector<int>> dest(static_cast<size_t>(n));
  for (int s = 0; s < n; ++s) dest[s] = detail::destinations(g, s);

  // group pairs by the coordinate set feeding their objective
  std::map<std::vector<int>, std::vector<std::pair<int, int>>> groups;
  bool grid_used = false;
  for (int s = 0; s < n; ++s) {
    for (int t = 0; t < n; ++t) {
      if (s == t) continue;
      double base = obs[static_cast<size_t>(s) * n + t];
      out.at(s, t) = base;
      if (base >= 1.0 - 1e-12) continue;  // saturated, sup cannot exceed 1
      groups[detail::sorted_union(dest[s], dest[t])].push_back({s, t});
      grid_used = true;
    }
  }

  for (const auto& [used, group_pairs] : groups) {
    detail::CGrid grid(dm, used, resolution);
    if (grid.point_count() > 50'000'000)
      throw std::length_error("a priori grid too large; coarsen the mesh");
    const auto& pairs = group_pairs;  // lambdas below may not capture a binding
    std::vector<int> needed;
    for (auto [s, t] : pairs) {
      needed.push_back(s);
      needed.push_back(t);
    }
    std::sort(needed.begin(), needed.end());
    needed.erase(std::unique(needed.begin(), needed.end()), needed.end());
    std::vector<double> pre_vals(needed.size(), 0.0);
    grid.for_each([&](const Valuation& k) {
      for (size_t i = 0; i < needed.size(); ++i) pre_vals[i] = pre_at(g, player, needed[i], k);
      for (auto [s, t] : pairs) {
        size_t is = std::lower_bound(needed.begin(), needed.end(), s) - needed.begin();
        size_t it = std::lower_bound(needed.begin(), needed.end(), t) - needed.begin();
        double v = pre_vals[is] - pre_vals[it];
        if (v > out(s, t)) out.at(s, t) = v;
      }
    });
  }

  for (int s = 0; s < n; ++s)
    for (int t = 0; t < n; ++t) out.at(s, t) = std::min(1.0, std::max(0.0, out(s, t)));

  StepResult result;
  result.metric = std::move(out);
  result.certified_error = grid_used ? 1.0 / resolution : 0.0;
  return result;
}

// --- a posteriori step --------------------------------------------------

namespace {

// min over (matcher opponent mix x at `first`, trans-shipping plan) of the
// plan cost, where the plan ships delta(first, challenger-mix, x) into the
// fixed target distribution q. One LP.
double inner_match_lp(const GameStructure& g, int player, State first,
                      const std::vector<double>& challenger_mix, const Distribution& q,
                      const DirectedMetric& d) {
  const int n = g.state_count();
  const auto& opp_moves = player == 1 ? g.moves2[first] : g.moves1[first];
  const int m = static_cast<int>(opp_moves.size());
  // per pure opponent move a: p_a = delta(first, mix, a)
  std::vector<std::vector<double>> p_a(static_cast<size_t>(m),
                                       std::vector<double>(static_cast<size_t>(n), 0.0));
  for (int a = 0; a < m; ++a) {
    for (size_t i = 0; i < challenger_mix.size(); ++i) {
      if (challenger_mix[i] == 0.0) continue;
      const Distribution& row = detail::transition_for(g, player, first, static_cast<int>(i), a);
      for (int u = 0; u < n; ++u) p_a[a][u] += challenger_mix[i] * row[u];
    }
  }
  const int lambda_vars = n * n;
  LpProblem lp;
  lp.objective.assign(static_cast<size_t>(lambda_vars + m), 0.0);
  for (int u = 0; u < n; ++u)
    for (int v = 0; v < n; ++v) lp.objective[static_cast<size_t>(u) * n + v] = d(u, v);
  // row marginals: sum_v lambda(u,v) - sum_a x(a) p_a(u) = 0
  for (int u = 0; u < n; ++u) {
    std::vector<double> row(static_cast<size_t>(lambda_vars + m), 0.0);
    for (int v = 0; v < n; ++v) row[static_cast<size_t>(u) * n + v] = 1.0;
    for (int a = 0; a < m; ++a) row[static_cast<size_t>(lambda_vars + a)] = -p_a[a][u];
    lp.add_row(std::move(row), RowSense::Equal, 0.0);
  }
  // column marginals: sum_u lambda(u,v) = q(v)
  for (int v = 0; v < n; ++v) {
    std::vector<double> row(static_cast<size_t>(lambda_vars + m), 0.0);
    for (int u = 0; u < n; ++u) row[static_cast<size_t>(u) * n + v] = 1.0;
    lp.add_row(std::move(row), RowSense::Equal, q[v]);
  }
  {
    std::vector<double> row(static_cast<size_t>(lambda_vars + m), 0.0);
    for (int a = 0; a < m; ++a) row[static_cast<size_t>(lambda_vars + a)] = 1.0;
    lp.add_row(std::move(row), RowSense::Equal, 1.0);
  }
  LpResult res = solve_lp(lp);
  if (res.status != LpStatus::Optimal) throw std::runtime_error("a posteriori inner LP failed");
  return res.value;
}

// min over (matcher protagonist mix y at `second`, plan) shipping the fixed
// p into delta(second, y, opponent-single). Exact MDP-pair route.
double inner_match_lp_protagonist(const GameStructure& g, int player, State second,
                                  const Distribution& p, const DirectedMetric& d) {
  const int n = g.state_count();
  const auto& prot_moves = player == 1 ? g.moves1[second] : g.moves2[second];
  const int m = static_cast<int>(prot_moves.size());
  std::vector<std::vector<double>> q_b(static_cast<size_t>(m),
                                       std::vector<double>(static_cast<size_t>(n), 0.0));
  for (int b = 0; b < m; ++b) {
    const Distribution& row = detail::transition_for(g, player, second, b, 0);
    for (int v = 0; v < n; ++v) q_b[b][v] = row[v];
  }
  const int lambda_vars = n * n;
  LpProblem lp;
  lp.objective.assign(static_cast<size_t>(lambda_vars + m), 0.0);
  for (int u = 0; u < n; ++u)
    for (int v = 0; v < n; ++v) lp.objective[static_cast<size_t>(u) * n + v] = d(u, v);
  for (int u = 0; u < n; ++u) {
    std::vector<double> row(static_cast<size_t>(lambda_vars + m), 0.0);
    for (int v = 0; v < n; ++v) row[static_cast<size_t>(u) * n + v] = 1.0;
    lp.add_row(std::move(row), RowSense::Equal, p[u]);
  }
  for (int v = 0; v < n; ++v) {
    std::vector<double> row(static_cast<size_t>(lambda_vars + m), 0.0);
    for (int u = 0; u < n; ++u) row[static_cast<size_t>(u) * n + v] = 1.0;
    for (int b = 0; b < m; ++b) row[static_cast<size_t>(lambda_vars + b)] = -q_b[b][v];
    lp.add_row(std::move(row), RowSense::Equal, 0.0);
  }
  {
    std::vector<double> row(static_cast<size_t>(lambda_vars + m), 0.0);
    for (int b = 0; b < m; ++b) row[static_cast<size_t>(lambda_vars + b)] = 1.0;
    lp.add_row(std::move(row), RowSense::Equal, 1.0);
  }
  LpResult res = solve_lp(lp);
  if (res.status != LpStatus::Optimal) throw std::runtime_error("a posteriori inner LP failed");
  return res.value;
}

}  // namespace

StepResult aposteriori_step(const GameStructure& g, const DirectedMetric& d, int player,
                            double mesh) {
  if (player != 1 && player != 2) throw std::domain_error("player must be 1 or 2");
  const int n = g.state_count();
  const int resolution = detail::resolution_for_mesh(mesh);
  DirectedMetric dm = tighten(d);
  DirectedMetric out(n);
  std::vector<double> obs = observation_distance_matrix(g);
  double cert = 0.0;

  auto prot_moves = [&](State s) -> const std::vector<int>& {
    return player == 1 ? g.moves1[s] : g.moves2[s];
  };
  auto opp_moves = [&](State s) -> const std::vector<int>& {
    return player == 1 ? g.moves2[s] : g.moves1[s];
  };

  for (int s = 0; s < n; ++s) {
    for (int t = 0; t < n; ++t) {
      if (s == t) continue;
      double base = obs[static_cast<size_t>(s) * n + t];
      if (base >= 1.0 - 1e-12) {
        out.at(s, t) = 1.0;
        continue;
      }
      double best = base;
      const int ps = static_cast<int>(prot_moves(s).size());
      const int pt = static_cast<int>(prot_moves(t).size());
      const int os = static_cast<int>(opp_moves(s).size());
      const int ot = static_cast<int>(opp_moves(t).size());

      if (ps == 1 && pt == 1) {
        // protagonist trivial on both sides: challenger is the opponent
        // at t (pure suffices by convexity), matcher folds into the LP
        std::vector<double> single{1.0};
        for (int b2 = 0; b2 < ot; ++b2) {
          const Distribution& q = detail::transition_for(g, player, t, 0, b2);
          best = std::max(best, inner_match_lp(g, player, s, single, q, dm));
        }
      } else if (os == 1 && ot == 1) {
        // opponent trivial on both sides: pure challenger at s, matcher
        // protagonist mix at t folds into the LP
        for (int a1 = 0; a1 < ps; ++a1) {
          const Distribution& p = detail::transition_for(g, player, s, a1, 0);
          best = std::max(best, inner_match_lp_protagonist(g, player, t, p, dm));
        }
      } else {
        auto challenger_grid = detail::simplex_grid(ps, resolution);
        auto matcher_grid = detail::simplex_grid(pt, resolution);
        for (const MixedMove& x1 : challenger_grid) {
          double matched = kInf;
          for (const MixedMove& y1 : matcher_grid) {
            double worst = -kInf;
            for (int b2 = 0; b2 < ot; ++b2) {
              // q = delta(t, y1, pure b2)
              std::vector<double> q(static_cast<size_t>(n), 0.0);
              for (size_t i = 0; i < y1.size(); ++i) {
                if (y1[i] == 0.0) continue;
                const Distribution& row =
                    detail::transition_for(g, player, t, static_cast<int>(i), b2);
                for (int v = 0; v < n; ++v) q[v] += y1[i] * row[v];
              }
              worst = std::max(worst,
                               inner_match_lp(g, player, s, x1, Distribution(q), dm));
              if (worst >= matched) break;  // cannot improve the inner min
            }
            matched = std::min(matched, worst);
          }
          best = std::max(best, matched);
        }
        cert = std::max(cert, detail::tv_rounding_bound(ps, resolution) +
                                  detail::tv_rounding_bound(pt, resolution));
      }
      out.at(s, t) = std::min(1.0, std::max(0.0, best));
    }
  }

  StepResult result;
  result.metric = std::move(out);
  result.certified_error = cert;
  return result;
}

// --- cooperative step ----------------------------------------------------

StepResult coop_step(const GameStructure& g, const DirectedMetric& d) {
  const int n = g.state_count();
  DirectedMetric dm = tighten(d);
  DirectedMetric out(n);
  std::vector<double> obs = observation_distance_matrix(g);

  for (int s = 0; s < n; ++s) {
    for (int t = 0; t < n; ++t) {
      if (s == t) continue;
      double base = obs[static_cast<size_t>(s) * n + t];
      if (base >= 1.0 - 1e-12) {
        out.at(s, t) = 1.0;
        continue;
      }
      // pure joint successor distributions at t
      std::vector<const Distribution*> targets;
      for (const Distribution& q : g.delta[t]) targets.push_back(&q);
      double best = base;
      for (const Distribution& p : g.delta[s]) {
        // sup over k in C(d) of min_j (E_p(k) - E_{q_j}(k)): LP in (k, m)
        LpProblem lp;
        lp.maximize = true;
        lp.objective.assign(static_cast<size_t>(n + 1), 0.0);
        lp.objective[n] = 1.0;
        lp.lower.assign(static_cast<size_t>(n + 1), 0.0);
        lp.upper.assign(static_cast<size_t>(n + 1), 1.0);
        lp.lower[n] = -2.0;
        lp.upper[n] = 2.0;
        for (const Distribution* q : targets) {
          std::vector<double> row(static_cast<size_t>(n + 1), 0.0);
          for (int u = 0; u < n; ++u) row[u] = (*q)[u] - p[u];
          row[n] = 1.0;
          lp.add_row(std::move(row), RowSense::LessEq, 0.0);
        }
        for (int u = 0; u < n; ++u)
          for (int v = 0; v < n; ++v) {
            if (u == v) continue;
            std::vector<double> row(static_cast<size_t>(n + 1), 0.0);
            row[u] = 1.0;
            row[v] = -1.0;
            lp.add_row(std::move(row), RowSense::LessEq, dm(u, v));
          }
        LpResult res = solve_lp(lp);
        if (res.status != LpStatus::Optimal) throw std::runtime_error("coop step LP failed");
        best = std::max(best, res.value);
      }
      out.at(s, t) = std::min(1.0, std::max(0.0, best));
    }
  }

  StepResult result;
  result.metric = std::move(out);
  result.certified_error = 0.0;
  return result;
}

// --- iteration -----------------------------------------------------------

std::string metric_kind_name(MetricKind kind) {
  switch (kind) {
    case MetricKind::AprioriSim: return "apriori-sim";
    case MetricKind::AprioriBisim: return "apriori-bisim";
    case MetricKind::AposterioriSim: return "aposteriori-sim";
    case MetricKind::AposterioriBisim: return "aposteriori-bisim";
    case MetricKind::CoopSim: return "coop-sim";
    case MetricKind::CoopBisim: return "coop-bisim";
  }
  return "?";
}

MetricKind metric_kind_from_name(std::string_view name) {
  if (name == "apriori-sim") return MetricKind::AprioriSim;
  if (name == "apriori-bisim") return MetricKind::AprioriBisim;
  if (name == "aposteriori-sim") return MetricKind::AposterioriSim;
  if (name == "aposteriori-bisim") return MetricKind::AposterioriBisim;
  if (name == "coop-sim") return MetricKind::CoopSim;
  if (name == "coop-bisim") return MetricKind::CoopBisim;
  throw std::invalid_argument("unknown metric kind: " + std::string(name));
}

bool metric_kind_is_bisim(MetricKind kind) {
  return kind == MetricKind::AprioriBisim || kind == MetricKind::AposterioriBisim ||
         kind == MetricKind::CoopBisim;
}

MetricReport iterate_metric(const GameStructure& g, MetricKind kind, int player, int iters,
                            double tol, double mesh) {
  if (tol <= 0.0) throw std::domain_error("tol must be positive");
  if (iters < 0) throw std::domain_error("iters must be nonnegative");
  MetricReport report;
  report.kind = kind;
  report.player = player;
  report.mesh = mesh;

  if (iters == 0) {
    // the tightened base: exactly what one step from the all-zero metric
    // yields, reported without touching the step machinery
    report.metric = observation_metric(g);
    report.converged = false;
    return report;
  }

  auto step = [&](const DirectedMetric& d) -> StepResult {
    switch (kind) {
      case MetricKind::AprioriSim:
      case MetricKind::AprioriBisim:
        return apriori_step(g, d, player, mesh);
      case MetricKind::AposterioriSim:
      case MetricKind::AposterioriBisim:
        return aposteriori_step(g, d, player, mesh);
      case MetricKind::CoopSim:
      case MetricKind::CoopBisim:
        return coop_step(g, d);
    }
    throw std::logic_error("unreachable metric kind");
  };

  DirectedMetric current(g.state_count());
  for (int it = 0; it < iters; ++it) {
    StepResult s = step(current);
    report.certified_error = std::max(report.certified_error, s.certified_error);
    DirectedMetric next = metric_kind_is_bisim(kind)
                              ? DirectedMetric::join(s.metric, s.metric.opposite())
                              : std::move(s.metric);
    next = tighten(next);
    double delta = next.sup_delta(current);
    report.step_deltas.push_back(delta);
    report.iterations = it + 1;
    report.last_delta = delta;
    current = std::move(next);
    report.iterate_history.push_back(current);
    if (delta < tol) {
      report.converged = true;
      break;
    }
  }
  report.metric = std::move(current);
  return report;
}

std::pair<double, double> brute_force_sup_over_c(const GameStructure& g, const DirectedMetric& d,
                                                 State s, State t, int player, double mesh) {
  const int n = g.state_count();
  const int resolution = detail::resolution_for_mesh(mesh);
  double points = std::pow(static_cast<double>(resolution + 1), n);
  if (points > 1e7) throw std::length_error("brute force grid exceeds the 1e7 evaluation guard");
  DirectedMetric dm = tighten(d);

  // plain full-dimensional grid, every raw point projected into C(d);
  // no dimension reduction so this stays an independent check
  std::vector<int> idx(static_cast<size_t>(n), 0);
  Valuation k = Valuation::constant(n, 0.0);
  double lower = 0.0;
  for (;;) {
    for (int x = 0; x < n; ++x) {
      double best = static_cast<double>(idx[x]) / resolution;
      for (int y = 0; y < n; ++y)
        best = std::min(best, static_cast<double>(idx[y]) / resolution + dm(x, y));
      k[x] = best;
    }
    lower = std::max(lower, pre_at(g, player, s, k) - pre_at(g, player, t, k));
    int at = 0;
    while (at < n && ++idx[at] > resolution) idx[at++] = 0;
    if (at == n) break;
  }
  return {lower, lower + 1.0 / resolution};
}

}  // namespace gamet
