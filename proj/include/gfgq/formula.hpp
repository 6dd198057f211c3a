#pragma once

#include <compare>
#include <memory>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

namespace gfgq {

struct Proposition {
  std::string name;
  Proposition() = default;
  Proposition(std::string n) : name(std::move(n)) {}
  auto operator<=>(const Proposition&) const = default;
};

// A set of propositions or the sentinel "everything".
struct PropSet {
  bool all = false;
  std::set<Proposition> props;  // ignored when all

  static PropSet everything() { return PropSet{true, {}}; }
  static PropSet none() { return PropSet{false, {}}; }
  static PropSet of(std::initializer_list<std::string> names);

  bool contains(const Proposition& p) const { return all || props.count(p) > 0; }
  bool empty() const { return !all && props.empty(); }
  PropSet unite(const PropSet& o) const;
  auto operator<=>(const PropSet&) const = default;
};

// sigma = <P_B><P_S>
struct QuantSpec {
  PropSet behavioral;
  PropSet strongly_behavioral;

  static QuantSpec B() { return {PropSet::everything(), PropSet::none()}; }
  static QuantSpec S() { return {PropSet::none(), PropSet::everything()}; }
  static QuantSpec vanilla() { return {PropSet::none(), PropSet::none()}; }

  bool is_B() const { return behavioral.all && strongly_behavioral.empty(); }
  bool is_S() const { return behavioral.empty() && strongly_behavioral.all; }
  bool is_vanilla() const { return behavioral.empty() && strongly_behavioral.empty(); }
  auto operator<=>(const QuantSpec&) const = default;
};

QuantSpec spec_union(const QuantSpec& a, const QuantSpec& b);

enum class QuantKind { Exists, Forall };
inline QuantKind flip(QuantKind k) {
  return k == QuantKind::Exists ? QuantKind::Forall : QuantKind::Exists;
}

struct Quantifier {
  QuantKind kind;
  Proposition prop;
  QuantSpec spec;
  auto operator<=>(const Quantifier&) const = default;
};

struct Prefix {
  std::vector<Quantifier> quantifiers;
  bool empty() const { return quantifiers.empty(); }
  size_t size() const { return quantifiers.size(); }
  std::set<Proposition> props() const;
  auto operator<=>(const Prefix&) const = default;
};

// ---------------------------------------------------------------------------
// LTL matrix

enum class LtlOp {
  True, False, Atom, Not, And, Or, Implies, Iff,
  Next, Future, Globally, Until, Release
};

struct Ltl;
using LtlPtr = std::shared_ptr<const Ltl>;

struct Ltl {
  LtlOp op;
  Proposition atom;  // Atom only
  LtlPtr lhs, rhs;   // rhs only for binary ops
};

LtlPtr ltl_true();
LtlPtr ltl_false();
LtlPtr ltl_atom(const std::string& name);
LtlPtr ltl_not(LtlPtr a);
LtlPtr ltl_and(LtlPtr a, LtlPtr b);
LtlPtr ltl_or(LtlPtr a, LtlPtr b);
LtlPtr ltl_implies(LtlPtr a, LtlPtr b);
LtlPtr ltl_iff(LtlPtr a, LtlPtr b);
LtlPtr ltl_next(LtlPtr a);
LtlPtr ltl_future(LtlPtr a);
LtlPtr ltl_globally(LtlPtr a);
LtlPtr ltl_until(LtlPtr a, LtlPtr b);
LtlPtr ltl_release(LtlPtr a, LtlPtr b);

bool ltl_eq(const LtlPtr& a, const LtlPtr& b);
std::set<Proposition> ltl_props(const LtlPtr& f);

// Expand F,G,R,->,<-> into the {true,false,atom,!,&,|,X,U} core
// (with double negations collapsed).
LtlPtr expand_core(const LtlPtr& f);
// Negation normal form over the full operator set (keeps F,G,U,R).
LtlPtr nnf(const LtlPtr& f);
LtlPtr nnf_not(const LtlPtr& f);

int x_depth(const LtlPtr& f);
bool has_temporal_ops(const LtlPtr& f);  // any of F,G,U,R
// "X-bounded": no U/F/G/R and X-depth < h (the oracle is exact on these).
bool is_x_bounded(const LtlPtr& f, int h);

// ---------------------------------------------------------------------------
// Formula: general AST admitting !,&,| above quantifiers (oracle only);
// parsed input is always prenex.

enum class FormulaOp { Leaf, Not, And, Or, Quant };

struct Formula;
using FormulaPtr = std::shared_ptr<const Formula>;

struct Formula {
  FormulaOp op;
  LtlPtr leaf;        // Leaf
  FormulaPtr lhs, rhs;
  Quantifier quant;   // Quant
};

FormulaPtr f_leaf(LtlPtr m);
FormulaPtr f_not(FormulaPtr a);
FormulaPtr f_and(FormulaPtr a, FormulaPtr b);
FormulaPtr f_or(FormulaPtr a, FormulaPtr b);
FormulaPtr f_quant(Quantifier q, FormulaPtr body);
FormulaPtr from_prenex(const Prefix& p, LtlPtr matrix);

bool formula_eq(const FormulaPtr& a, const FormulaPtr& b);

struct PrenexView {
  Prefix prefix;
  LtlPtr matrix;
};
std::optional<PrenexView> to_prenex(const FormulaPtr& f);

struct Classification {
  bool is_prenex;
  bool is_behavioral;
  bool is_strongly_behavioral;
  std::set<Proposition> free_props;
  std::set<Proposition> quantified_props;
};
Classification classify(const FormulaPtr& f);
std::set<Proposition> free_props(const FormulaPtr& f);

// Flip every quantifier, keep specs, negate the matrix (NNF). Prenex only.
FormulaPtr negate_prenex(const FormulaPtr& f);

// ---------------------------------------------------------------------------
// Concrete syntax

struct ParseError : std::runtime_error {
  int line, col;
  ParseError(const std::string& msg, int l, int c)
      : std::runtime_error(msg + " at " + std::to_string(l) + ":" + std::to_string(c)),
        line(l), col(c) {}
};

FormulaPtr parse(const std::string& text);

std::string render(const LtlPtr& f);
std::string render(const QuantSpec& s);   // ":B", ":S", "", or ":<..; ..>"
std::string render(const Quantifier& q);  // "E q:B."
std::string render(const Prefix& p);      // space-joined quantifiers
std::string render(const FormulaPtr& f);

}  // namespace gfgq
