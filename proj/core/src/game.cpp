#include "gamet/game.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "gamet/numeric.hpp"

namespace gamet {

Distribution Distribution::point(int n, State s) {
  std::vector<double> p(static_cast<size_t>(n), 0.0);
  p[s] = 1.0;
  return Distribution(std::move(p));
}

double Distribution::mass() const {
  double total = 0.0;
  for (double v : p_) total += v;
  return total;
}

bool Distribution::is_valid(double tol) const {
  for (double v : p_)
    if (v < -tol || !std::isfinite(v)) return false;
  return std::fabs(mass() - 1.0) <= tol;
}

Valuation Valuation::indicator(int n, State s) {
  Valuation k = constant(n, 0.0);
  k.v[s] = 1.0;
  return k;
}

bool Valuation::within_unit(double tol) const {
  for (double x : v)
    if (x < -tol || x > 1.0 + tol || !std::isfinite(x)) return false;
  return true;
}

double Valuation::sup_delta(const Valuation& o) const {
  double best = 0.0;
  for (size_t i = 0; i < v.size(); ++i) best = std::max(best, std::fabs(v[i] - o.v[i]));
  return best;
}

int GameStructure::state_index(std::string_view name) const {
  for (int i = 0; i < static_cast<int>(states.size()); ++i)
    if (states[i] == name) return i;
  return -1;
}

int GameStructure::move_index(std::string_view name) const {
  for (int i = 0; i < static_cast<int>(moves.size()); ++i)
    if (moves[i] == name) return i;
  return -1;
}

int GameStructure::variable_index(std::string_view name) const {
  for (int i = 0; i < static_cast<int>(variables.size()); ++i)
    if (variables[i] == name) return i;
  return -1;
}

const std::vector<int>& GameStructure::moves_of(int player, State s) const {
  if (player != 1 && player != 2) throw std::domain_error("player must be 1 or 2");
  return player == 1 ? moves1[s] : moves2[s];
}

const Distribution& GameStructure::transition(State s, int i1, int i2) const {
  return delta[s][static_cast<size_t>(i1) * moves2[s].size() + i2];
}

std::vector<Violation> validate_structure(const GameStructure& g) {
  std::vector<Violation> out;
  const int n = g.state_count();
  auto bad = [&](std::string where, std::string message) {
    out.push_back(Violation{std::move(where), std::move(message)});
  };

  if (static_cast<int>(g.moves1.size()) != n || static_cast<int>(g.moves2.size()) != n ||
      static_cast<int>(g.delta.size()) != n) {
    bad("structure", "moves1/moves2/delta must have one entry per state");
    return out;
  }
  if (g.var_values.size() != g.variables.size()) {
    bad("variables", "variable list and interpretation size mismatch");
    return out;
  }
  for (size_t v = 0; v < g.variables.size(); ++v) {
    if (static_cast<int>(g.var_values[v].size()) != n) {
      bad("variables/" + g.variables[v], "interpretation must cover every state");
      continue;
    }
    for (int s = 0; s < n; ++s) {
      double x = g.var_values[v][s];
      if (!(x >= 0.0 && x <= 1.0))
        bad("variables/" + g.variables[v] + "/" + g.states[s],
            "interpretation outside [0,1]");
    }
  }
  for (int s = 0; s < n; ++s) {
    const auto& m1 = g.moves1[s];
    const auto& m2 = g.moves2[s];
    if (m1.empty()) bad("moves1/" + g.states[s], "empty move set");
    if (m2.empty()) bad("moves2/" + g.states[s], "empty move set");
    for (int mv : m1)
      if (mv < 0 || mv >= static_cast<int>(g.moves.size()))
        bad("moves1/" + g.states[s], "move outside the alphabet");
    for (int mv : m2)
      if (mv < 0 || mv >= static_cast<int>(g.moves.size()))
        bad("moves2/" + g.states[s], "move outside the alphabet");
    if (g.delta[s].size() != m1.size() * m2.size()) {
      bad("delta/" + g.states[s], "transition grid does not match the available move pairs");
      continue;
    }
    for (size_t i1 = 0; i1 < m1.size(); ++i1) {
      for (size_t i2 = 0; i2 < m2.size(); ++i2) {
        const Distribution& d = g.delta[s][i1 * m2.size() + i2];
        std::string where = "delta/" + g.states[s] + "/" +
                            (m1[i1] >= 0 && m1[i1] < static_cast<int>(g.moves.size())
                                 ? g.moves[m1[i1]]
                                 : "?") +
                            "/" +
                            (m2[i2] >= 0 && m2[i2] < static_cast<int>(g.moves.size())
                                 ? g.moves[m2[i2]]
                                 : "?");
        if (d.size() != n) {
          bad(where, "distribution dimension mismatch");
          continue;
        }
        bool negative = false;
        for (int t = 0; t < n; ++t)
          if (d[t] < -kMassTol) negative = true;
        if (negative) bad(where, "negative probability");
        double mass = d.mass();
        if (std::fabs(mass - 1.0) > kMassTol)
          bad(where, "mass " + format_number(mass) + " != 1");
      }
    }
  }
  return out;
}

StructureClass classify_structure(const GameStructure& g) {
  StructureClass c;
  const int n = g.state_count();

  c.mdp_for_1 = true;
  c.mdp_for_2 = true;
  for (int s = 0; s < n; ++s) {
    if (g.moves2[s].size() != 1) c.mdp_for_1 = false;
    if (g.moves1[s].size() != 1) c.mdp_for_2 = false;
  }

  c.deterministic = true;
  for (int s = 0; s < n && c.deterministic; ++s) {
    for (const Distribution& d : g.delta[s]) {
      bool point = false;
      for (int t = 0; t < n; ++t)
        if (std::fabs(d[t] - 1.0) <= kMassTol) point = true;
      if (!point) {
        c.deterministic = false;
        break;
      }
    }
  }

  // Turn-based: states split into S1/S2 with a singleton opponent move
  // set, and the designated `turn` variable is 1 on S1 and 0 on S2.
  int turn = g.variable_index("turn");
  if (turn >= 0) {
    bool ok = true;
    for (int s = 0; s < n; ++s) {
      double tv = g.var_values[turn][s];
      if (std::fabs(tv - 1.0) <= kMassTol)
        ok = ok && g.moves2[s].size() == 1;
      else if (std::fabs(tv) <= kMassTol)
        ok = ok && g.moves1[s].size() == 1;
      else
        ok = false;
    }
    c.turn_based = ok;
  }
  return c;
}

namespace {

void check_mix(const GameStructure& g, int player, State s, const MixedMove& x) {
  const auto& avail = player == 1 ? g.moves1[s] : g.moves2[s];
  if (x.size() != avail.size())
    throw std::domain_error("mixed move not supported on the moves available at " + g.states[s]);
  double mass = 0.0;
  for (double v : x) {
    if (v < -kMassTol) throw std::domain_error("mixed move with negative weight");
    mass += v;
  }
  if (std::fabs(mass - 1.0) > 1e-6)
    throw std::domain_error("mixed move mass != 1 at " + g.states[s]);
}

}  // namespace

Distribution successor_distribution(const GameStructure& g, State s, const MixedMove& x1,
                                    const MixedMove& x2) {
  check_mix(g, 1, s, x1);
  check_mix(g, 2, s, x2);
  const int n = g.state_count();
  std::vector<double> acc(static_cast<size_t>(n), 0.0);
  const size_t m2 = g.moves2[s].size();
  for (size_t i1 = 0; i1 < x1.size(); ++i1) {
    if (x1[i1] == 0.0) continue;
    for (size_t i2 = 0; i2 < x2.size(); ++i2) {
      double w = x1[i1] * x2[i2];
      if (w == 0.0) continue;
      const Distribution& d = g.delta[s][i1 * m2 + i2];
      for (int t = 0; t < n; ++t) acc[t] += w * d[t];
    }
  }
  return Distribution(std::move(acc));
}

double expectation(const GameStructure& g, State s, const MixedMove& x1, const MixedMove& x2,
                   const Valuation& k) {
  Distribution d = successor_distribution(g, s, x1, x2);
  double total = 0.0;
  for (int t = 0; t < g.state_count(); ++t) total += d[t] * k[t];
  return total;
}

double observation_distance(const GameStructure& g, State s, State t) {
  double best = 0.0;
  for (size_t v = 0; v < g.variables.size(); ++v)
    best = std::max(best, std::fabs(g.var_values[v][s] - g.var_values[v][t]));
  return best;
}

std::vector<double> observation_distance_matrix(const GameStructure& g) {
  const int n = g.state_count();
  std::vector<double> d(static_cast<size_t>(n) * n, 0.0);
  for (int s = 0; s < n; ++s)
    for (int t = s + 1; t < n; ++t) {
      double v = observation_distance(g, s, t);
      d[static_cast<size_t>(s) * n + t] = v;
      d[static_cast<size_t>(t) * n + s] = v;
    }
  return d;
}

}  // namespace gamet
