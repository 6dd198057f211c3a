#pragma once

#include "gfgq/formula.hpp"

namespace gfgq {

// One run of same-kind quantifiers.
struct Block {
  QuantKind kind;
  std::vector<Quantifier> quants;
};

// Maximal same-kind runs, in order; concatenation reproduces the prefix.
std::vector<Block> block_decomposition(const Prefix& p);

enum class CanonTarget { EA, AE };

// C_∃∀ / C_∀∃ on behavioral prefixes: single alternation, swapped blocks
// compensated by strong-behavioral dependencies on the crossed quantifiers.
Prefix canonize(const Prefix& p, CanonTarget target);

// Flip every quantifier kind, specs unchanged.
Prefix dual_prefix(const Prefix& p);

}  // namespace gfgq
