#pragma once

#include <map>
#include <optional>

#include "gfgq/solver.hpp"

namespace gfgq {

// Round-based Mealy machine witnessing a satisfiable behavioral sentence:
// each round reads a valuation of the universal propositions and emits one
// of the existential propositions.
struct Transducer {
  Alphabet in_ab;   // Val(universal props)
  Alphabet out_ab;  // Val(existential props)
  int num_states = 0;
  int initial = 0;
  std::vector<std::vector<int>> delta;     // state x input -> state
  std::vector<std::vector<Letter>> out;    // state x input -> output letter
};

enum class DecisionMode { SatBehavioral, SatVanilla, McUniversal, McExistential };

struct Verdict {
  bool yes = false;
  DecisionMode mode = DecisionMode::SatBehavioral;
  std::optional<Transducer> witness;
  std::map<std::string, long long> stats;

  std::string report() const;  // key=value lines
};

// Reorders a prefix so that every quantifier precedes the propositions it is
// strictly behavioral on (stable w.r.t. the given order); the result drives
// the round structure of the quantification game. Rejects vanilla
// dependencies and cyclic strict dependencies.
Prefix schedule_prefix(const Prefix& p);

Verdict sat_behavioral(const FormulaPtr& f, bool want_witness = false,
                       size_t budget = kDefaultStateBudget);
Verdict sat_vanilla(const FormulaPtr& f, size_t budget = kDefaultStateBudget);

enum class McMode { Universal, Existential };
Verdict model_check(const KripkeStructure& K, const FormulaPtr& f, McMode mode,
                    size_t budget = kDefaultStateBudget);

// Witness extraction from Eloise's positional strategy in the quantification
// game; throws std::logic_error if the sentence is unsatisfiable.
Transducer extract_witness(const FormulaPtr& f,
                           size_t budget = kDefaultStateBudget);

// Runs the transducer against an adversary lasso over Val(universal props)
// and checks the induced word against f's matrix.
bool simulate_witness(const Transducer& t, const FormulaPtr& f,
                      const LassoWord& adversary);

std::string dump(const Transducer& t);  // Mealy table, stable order

}  // namespace gfgq
