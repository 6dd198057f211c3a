#pragma once

#include <string>
#include <vector>

#include "gfgq/formula.hpp"
#include "gfgq/hyper.hpp"
#include "gfgq/lasso.hpp"

namespace gfgq {

// Nondeterministic Büchi automaton over Val(P) letters.
struct BuchiAutomaton {
  Alphabet ab;
  int num_states = 0;
  std::vector<int> initial;
  // delta[state][letter] -> successor list
  std::vector<std::vector<std::vector<int>>> delta;
  std::vector<bool> accepting;
};

// Deterministic complete parity automaton, max-even acceptance: a run is
// accepting iff the maximum priority seen infinitely often is even.
struct ParityAutomaton {
  Alphabet ab;
  int num_states = 0;
  int initial = 0;
  std::vector<std::vector<int>> delta;  // delta[state][letter] -> state
  std::vector<int> priority;
};

constexpr size_t kDefaultStateBudget = 1'000'000;

// Closure-tableau translation; exact for quantifier-free matrices.
// P must contain every free proposition of psi.
BuchiAutomaton ltl_to_nba(const LtlPtr& psi, const std::set<Proposition>& P);

// Safra-tree determinization to a parity automaton of the same language.
ParityAutomaton determinize(const BuchiAutomaton& A,
                            size_t budget = kDefaultStateBudget);

// Shift every priority by one; recognizes the complement.
ParityAutomaton complement_dpa(const ParityAutomaton& D);

// Priority-guessing translation back to Büchi (language preserved).
BuchiAutomaton dpa_to_nba(const ParityAutomaton& D);

// Project/coproject one proposition out of the recognized language.
BuchiAutomaton eliminate_quantifier(const ParityAutomaton& D,
                                    const Proposition& ap, QuantKind kind,
                                    size_t budget = kDefaultStateBudget);

// Innermost-out elimination for a prenex formula with vanilla specs only;
// the result is over Val(free(f)) and empty iff f is unsatisfiable.
BuchiAutomaton vanilla_to_nba(const FormulaPtr& f,
                              size_t budget = kDefaultStateBudget);

bool nba_nonempty(const BuchiAutomaton& A);
bool nba_accepts(const BuchiAutomaton& A, const LassoWord& w);
bool dpa_accepts(const ParityAutomaton& D, const LassoWord& w);

// HOA-compatible text round trip and DOT rendering.
std::string export_hoa(const BuchiAutomaton& A);
std::string export_hoa(const ParityAutomaton& D);
BuchiAutomaton import_hoa_nba(const std::string& text);
ParityAutomaton import_hoa_dpa(const std::string& text);
std::string export_dot(const BuchiAutomaton& A);
std::string export_dot(const ParityAutomaton& D);

}  // namespace gfgq
