#include "gfgq/prefix_canon.hpp"

namespace gfgq {

std::vector<Block> block_decomposition(const Prefix& p) {
  std::vector<Block> blocks;
  for (auto& q : p.quantifiers) {
    if (blocks.empty() || blocks.back().kind != q.kind)
      blocks.push_back(Block{q.kind, {}});
    blocks.back().quants.push_back(q);
  }
  return blocks;
}

Prefix canonize(const Prefix& p, CanonTarget target) {
  for (auto& q : p.quantifiers)
    if (!q.spec.is_B())
      throw std::invalid_argument("canonize: prefix is not behavioral");

  // `front` is the kind that moves to the front of the canonical prefix
  QuantKind front = target == CanonTarget::EA ? QuantKind::Exists : QuantKind::Forall;
  auto blocks = block_decomposition(p);

  Prefix out;
  for (auto& b : blocks)
    if (b.kind == front)
      for (auto& q : b.quants) out.quantifiers.push_back(q);

  // Every moved-back quantifier becomes strongly behavioral with respect to
  // all front-kind quantifiers it originally preceded.
  for (size_t i = 0; i < blocks.size(); i++) {
    if (blocks[i].kind == front) continue;
    PropSet crossed;
    for (size_t j = i + 1; j < blocks.size(); j++)
      if (blocks[j].kind == front)
        for (auto& q : blocks[j].quants) crossed.props.insert(q.prop);
    QuantSpec spec = spec_union(QuantSpec::B(), QuantSpec{PropSet::none(), crossed});
    for (auto q : blocks[i].quants) {
      q.spec = spec;
      out.quantifiers.push_back(q);
    }
  }
  return out;
}

Prefix dual_prefix(const Prefix& p) {
  Prefix out = p;
  for (auto& q : out.quantifiers) q.kind = flip(q.kind);
  return out;
}

}  // namespace gfgq
