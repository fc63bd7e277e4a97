#pragma once

#include <random>

#include "gamet/game.hpp"

namespace gamet {

struct RandomGameOptions {
  int min_states = 2;
  int max_states = 4;
  int max_moves = 3;
  /// Force singleton move sets for the given player's opponent (1 or 2
  /// makes an i-MDP; 0 leaves both players free).
  int mdp_for = 0;
  bool deterministic = false;
  int variables = 1;
};

/// Valid-by-construction random game structure. Probabilities are drawn
/// on a coarse rational grid so mass checks hold exactly.
GameStructure random_game(std::mt19937_64& rng, const RandomGameOptions& opts = {});

}  // namespace gamet
