#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "gfgq/formula.hpp"
#include "gfgq/lasso.hpp"

namespace gfgq {

// Tripped enumeration/resource guard; the CLI maps this to exit code 3.
struct GuardError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// h explicit time steps; the induced infinite word repeats the last bit.
struct TemporalVal {
  uint8_t bits = 0;
  uint8_t h = 1;

  bool at(int t) const { return (bits >> (t < h ? t : h - 1)) & 1; }
  void set(int t, bool b) {
    if (b) bits |= uint8_t(1u << t); else bits &= uint8_t(~(1u << t));
  }
  auto operator<=>(const TemporalVal&) const = default;
};

struct Assignment {
  std::map<Proposition, TemporalVal> val;

  std::set<Proposition> domain() const;
  bool has(const Proposition& p) const { return val.count(p) > 0; }
  auto operator<=>(const Assignment&) const = default;
};

using AsgSet = std::set<Assignment>;

struct Hyperassignment {
  int h = 1;
  std::vector<AsgSet> sets;  // canonical: sorted, deduplicated, no empty set

  static Hyperassignment trivial(int h) {
    return Hyperassignment{h, {AsgSet{Assignment{}}}};
  }
  std::set<Proposition> domain() const;
  void canonicalize();
  bool operator==(const Hyperassignment&) const = default;
};

struct Functor {
  std::vector<Proposition> domain;  // sorted
  int h = 1;
  std::vector<TemporalVal> table;  // indexed by assignment index over domain

  size_t space_size() const { return size_t{1} << (domain.size() * h); }
  size_t index_of(const Assignment& chi) const;
  Assignment assignment_at(size_t idx) const;
  TemporalVal apply(const Assignment& chi) const { return table[index_of(chi)]; }
};

enum class Alt { EA, AE };  // existential-universal / universal-existential
inline Alt flip(Alt a) { return a == Alt::EA ? Alt::AE : Alt::EA; }

enum class EvolveMode { EV, NEV };

// ---------------------------------------------------------------------------

std::vector<Letter> wrd(const Assignment& chi, const Alphabet& ab, int h);
Assignment wrd_inv(const std::vector<Letter>& word, const Alphabet& ab);

// chi1 ~=_sigma^k chi2 per the three distinguishability conditions
// (same values off P_B∪P_S; agreement up to k on P_B\P_S; strictly below k on P_S).
bool spec_equiv(const Assignment& chi1, const Assignment& chi2,
                const QuantSpec& sigma, int k);

std::vector<Functor> enumerate_functors(const std::set<Proposition>& P,
                                        const QuantSpec& sigma, int h);
// definition-based filter used to validate the enumeration
bool is_sigma_functor(const Functor& F, const QuantSpec& sigma);

Hyperassignment dualize(const Hyperassignment& A);
std::vector<std::pair<Hyperassignment, Hyperassignment>> partitions(
    const Hyperassignment& A);
Hyperassignment extend(const Hyperassignment& A, const Proposition& ap,
                       const QuantSpec& sigma);
Hyperassignment evolve(const Hyperassignment& A, const Prefix& prefix, Alt alpha,
                       EvolveMode mode);

bool eval_tarski(const Assignment& chi, const FormulaPtr& f, int h);
bool eval_alternating(const Hyperassignment& A, const FormulaPtr& f, Alt alpha);

bool refines(const Hyperassignment& A1, const Hyperassignment& A2);  // A1 ⊑ A2
inline bool equivalent(const Hyperassignment& A1, const Hyperassignment& A2) {
  return refines(A1, A2) && refines(A2, A1);
}

// debug dump: one set per line, assignments as `p=01,q=11`
std::string dump(const Hyperassignment& A);

}  // namespace gfgq
