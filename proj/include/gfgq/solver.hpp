#pragma once

#include "gfgq/game.hpp"

namespace gfgq {

// Winner partition and positional strategies for a max-even parity game.
struct Solution {
  std::vector<bool> eloise_wins;  // per position
  // chosen successor at positions owned by the winning player; -1 elsewhere
  std::vector<int> strategy;
};

// Zielonka's recursive algorithm; deterministic (stable position order).
Solution solve(const ParityGame& g);

// Positional-strategy enumeration oracle; guarded to tiny games.
Solution brute_solve(const ParityGame& g, size_t max_strategies = 1u << 22);

std::string dump(const Solution& s);

}  // namespace gfgq
