#pragma once

#include <cstdint>
#include <vector>

#include "gfgq/formula.hpp"

namespace gfgq {

// Alphabet Val(P): letters are bitmasks over a fixed, sorted proposition order.
struct Alphabet {
  std::vector<Proposition> props;  // sorted, unique

  static Alphabet over(const std::set<Proposition>& ps) {
    return Alphabet{{ps.begin(), ps.end()}};
  }
  size_t size() const { return size_t{1} << props.size(); }
  int index_of(const Proposition& p) const;
  bool operator==(const Alphabet&) const = default;
};

using Letter = uint32_t;

inline bool letter_bit(Letter v, int i) { return (v >> i) & 1; }

// stem . loop^omega
struct LassoWord {
  std::vector<Letter> stem;
  std::vector<Letter> loop;  // non-empty

  size_t total() const { return stem.size() + loop.size(); }
  Letter at(size_t t) const {
    if (t < stem.size()) return stem[t];
    return loop[(t - stem.size()) % loop.size()];
  }
  // canonical position index in [0, total)
  size_t pos(size_t t) const {
    if (t < stem.size()) return t;
    return stem.size() + (t - stem.size()) % loop.size();
  }
};

// Direct LTL evaluation on an ultimately periodic word (fixpoint for U/R).
// Returns satisfaction at time 0.
bool eval_ltl_lasso(const LtlPtr& f, const Alphabet& ab, const LassoWord& w);

// Satisfaction at every canonical position (size = w.total()).
std::vector<bool> eval_ltl_lasso_all(const LtlPtr& f, const Alphabet& ab,
                                     const LassoWord& w);

}  // namespace gfgq
