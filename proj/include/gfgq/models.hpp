#pragma once

#include <string>
#include <vector>

#include "gfgq/automata.hpp"

namespace gfgq {

// Finite sinkless Kripke structure; traces are label sequences from the
// initial state (time 0 reads the initial state's label).
struct KripkeStructure {
  Alphabet ab;                          // over ap(K)
  std::vector<std::string> state_names;
  std::vector<Letter> label;            // per state
  int init = 0;
  std::vector<std::vector<int>> succ;   // non-empty per state

  int num_states() const { return int(state_names.size()); }
};

struct KripkeParseError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Text format:
//   kripke
//   aps: p q
//   init: s0
//   state s0 {p}
//   state s1 {p q}
//   edge s0 s1
//   edge s1 s1
KripkeStructure parse_kripke(const std::string& text);

// Deterministic subset-construction trackers over Val(ap(K)): first component
// recognizes L(K) (failure state odd), second its complement (failure state
// carries the dominant even priority).
std::pair<ParityAutomaton, ParityAutomaton> trace_automata(
    const KripkeStructure& K, size_t subset_budget = size_t{1} << 16);

// does the lasso denote a trace of K? (explicit path search; test oracle
// and witness-simulation helper)
bool is_trace(const KripkeStructure& K, const LassoWord& w);

}  // namespace gfgq
