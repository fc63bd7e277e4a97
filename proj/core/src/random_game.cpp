#include "gamet/random_game.hpp"

#include <string>

namespace gamet {

GameStructure random_game(std::mt19937_64& rng, const RandomGameOptions& opts) {
  GameStructure g;
  std::uniform_int_distribution<int> state_count(opts.min_states, opts.max_states);
  const int n = state_count(rng);
  for (int s = 0; s < n; ++s) g.states.push_back("s" + std::to_string(s));

  std::uniform_int_distribution<int> value_pick(0, 4);
  for (int v = 0; v < opts.variables; ++v) {
    g.variables.push_back("p" + std::to_string(v));
    std::vector<double> row(static_cast<size_t>(n), 0.0);
    for (int s = 0; s < n; ++s) row[s] = value_pick(rng) / 4.0;
    g.var_values.push_back(std::move(row));
  }

  const int alphabet = opts.max_moves;
  for (int m = 0; m < alphabet; ++m) g.moves.push_back("m" + std::to_string(m));
  std::uniform_int_distribution<int> move_count(1, opts.max_moves);
  g.moves1.resize(static_cast<size_t>(n));
  g.moves2.resize(static_cast<size_t>(n));
  for (int s = 0; s < n; ++s) {
    int c1 = opts.mdp_for == 2 ? 1 : move_count(rng);
    int c2 = opts.mdp_for == 1 ? 1 : move_count(rng);
    for (int m = 0; m < c1; ++m) g.moves1[s].push_back(m);
    for (int m = 0; m < c2; ++m) g.moves2[s].push_back(m);
  }

  std::uniform_int_distribution<int> target(0, n - 1);
  std::uniform_int_distribution<int> weight(0, 8);
  g.delta.resize(static_cast<size_t>(n));
  for (int s = 0; s < n; ++s) {
    size_t cells = g.moves1[s].size() * g.moves2[s].size();
    g.delta[s].reserve(cells);
    for (size_t cell = 0; cell < cells; ++cell) {
      std::vector<double> p(static_cast<size_t>(n), 0.0);
      if (opts.deterministic) {
        p[target(rng)] = 1.0;
      } else {
        // 8ths on a random support of two states; exact masses
        int a = target(rng), b = target(rng);
        int w = weight(rng);
        p[a] += w / 8.0;
        p[b] += (8 - w) / 8.0;
      }
      g.delta[s].push_back(Distribution(std::move(p)));
    }
  }
  return g;
}

}  // namespace gamet
