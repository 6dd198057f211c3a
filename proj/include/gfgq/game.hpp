#pragma once

#include "gfgq/models.hpp"
#include "gfgq/prefix_canon.hpp"

namespace gfgq {

// Two-player turn-based arena; sinkless by construction.
struct Arena {
  int num_positions = 0;
  int initial = 0;
  std::vector<bool> eloise;             // owner per position
  std::vector<std::vector<int>> moves;
  std::vector<std::string> names;
};

// Max-even parity game over an arena; every infinite play hits the
// observable positions infinitely often.
struct ParityGame {
  Arena arena;
  std::vector<int> priority;
  std::vector<bool> observable;
};

// Quantification arena: positions are the partial valuations whose domain is
// a prefix of the quantifier list; a round extends the empty valuation one
// proposition at a time and resets from total valuations back to empty.
struct QuantArena {
  Arena arena;
  Prefix prefix;
  Alphabet ab;  // Val(ap(prefix))
  // position ids: depth d in [0,n], bits b in [0,2^d) with bit i = value of
  // quantifier i's proposition; id = (2^d - 1) + b
  int position_id(int depth, uint32_t bits) const {
    return int((uint32_t(1) << depth) - 1 + bits);
  }
  int full_depth() const { return int(prefix.size()); }
  Letter letter_of(uint32_t bits) const;  // total valuation -> alphabet letter
};

// Requires a behavioral prefix whose order already respects its
// strict-dependence constraints (see schedule_prefix in the decision layer).
QuantArena build_arena(const Prefix& p);

// Product with a deterministic parity automaton over Val(ap(p)): the
// automaton steps only on the reset edges, consuming the total valuation just
// fixed; positions (q, empty) are observable with priority(q)+2, every other
// position is a transient with priority 0.
ParityGame build_sat_game(const QuantArena& qa, const ParityAutomaton& D);

// Model-checking game for the universal interpretation of prefix.psi over K:
// Abelard additionally picks one proposition of K per round (prefix
// forall ap(K) up front) and Eloise wins if the picked trace deviates from K
// or the matrix holds.
ParityGame build_mc_game(const KripkeStructure& K, const Prefix& p,
                         const LtlPtr& psi, size_t budget = kDefaultStateBudget);

std::string export_dot(const ParityGame& g);

}  // namespace gfgq
