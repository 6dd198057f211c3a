#include "gfgq/hyper.hpp"

#include <algorithm>
#include <boost/dynamic_bitset.hpp>
#include <cmath>
#include <set>
#include <sstream>

namespace gfgq {

std::set<Proposition> Assignment::domain() const {
  std::set<Proposition> r;
  for (auto& [p, _] : val) r.insert(p);
  return r;
}

std::set<Proposition> Hyperassignment::domain() const {
  if (sets.empty() || sets.front().empty()) return {};
  return sets.front().begin()->domain();
}

void Hyperassignment::canonicalize() {
  std::sort(sets.begin(), sets.end());
  sets.erase(std::unique(sets.begin(), sets.end()), sets.end());
}

size_t Functor::index_of(const Assignment& chi) const {
  size_t idx = 0;
  for (size_t i = 0; i < domain.size(); i++) {
    auto it = chi.val.find(domain[i]);
    if (it == chi.val.end())
      throw std::invalid_argument("functor applied outside its domain");
    idx |= size_t(it->second.bits & ((1u << h) - 1)) << (i * h);
  }
  return idx;
}

Assignment Functor::assignment_at(size_t idx) const {
  Assignment chi;
  for (size_t i = 0; i < domain.size(); i++) {
    TemporalVal tv;
    tv.h = uint8_t(h);
    tv.bits = uint8_t((idx >> (i * h)) & ((1u << h) - 1));
    chi.val[domain[i]] = tv;
  }
  return chi;
}

// ---------------------------------------------------------------------------
// internal dense core: assignments of a space indexed by packed bits,
// sets of assignments as bitsets over the space

namespace {

using Mask = boost::dynamic_bitset<>;

constexpr size_t kMaxSpaceBits = 16;           // assignment space ≤ 2^16
constexpr size_t kMaxExtChoices = 1u << 16;    // functor restrictions per set
constexpr size_t kMaxGeneratedSets = 100'000;
constexpr size_t kMaxDualFrontier = 20'000;
constexpr double kMaxDualWork = 4e6;  // |sets| x frontier ops per DP stage
constexpr double kPublicDualProduct = 1e6;
constexpr size_t kMaxPartitionSets = 16;
constexpr size_t kMaxFunctorCount = 4096;      // full-table enumeration (NEV)
constexpr double kMaxSelectionMaps = 2e6;

struct AsgSpace {
  std::vector<Proposition> props;  // sorted
  int h = 1;

  size_t bits() const { return props.size() * size_t(h); }
  size_t size() const { return size_t{1} << bits(); }

  Assignment assignment(size_t idx) const {
    Assignment chi;
    for (size_t i = 0; i < props.size(); i++) {
      TemporalVal tv;
      tv.h = uint8_t(h);
      tv.bits = uint8_t((idx >> (i * h)) & ((1u << h) - 1));
      chi.val[props[i]] = tv;
    }
    return chi;
  }

  size_t index(const Assignment& chi) const {
    size_t idx = 0;
    for (size_t i = 0; i < props.size(); i++) {
      auto it = chi.val.find(props[i]);
      if (it == chi.val.end()) throw std::invalid_argument("assignment outside space");
      idx |= size_t(it->second.bits & ((1u << h) - 1)) << (i * h);
    }
    return idx;
  }
};

struct HyperCore {
  AsgSpace sp;
  std::vector<Mask> sets;

  void canonicalize() {
    std::sort(sets.begin(), sets.end());
    sets.erase(std::unique(sets.begin(), sets.end()), sets.end());
  }
};

HyperCore to_core(const Hyperassignment& A) {
  HyperCore c;
  auto dom = A.domain();
  c.sp.props.assign(dom.begin(), dom.end());
  c.sp.h = A.h;
  if (c.sp.bits() > kMaxSpaceBits)
    throw GuardError("assignment space too large: " +
                     std::to_string(c.sp.props.size()) + " props at horizon " +
                     std::to_string(A.h));
  for (auto& X : A.sets) {
    Mask m(c.sp.size());
    for (auto& chi : X) m.set(c.sp.index(chi));
    c.sets.push_back(std::move(m));
  }
  c.canonicalize();
  return c;
}

Hyperassignment from_core(const HyperCore& c) {
  Hyperassignment A;
  A.h = c.sp.h;
  for (auto& m : c.sets) {
    AsgSet X;
    for (size_t i = m.find_first(); i != Mask::npos; i = m.find_next(i))
      X.insert(c.sp.assignment(i));
    A.sets.push_back(std::move(X));
  }
  A.canonicalize();
  return A;
}

// Signature mask over packed index bits: two indices are ≈_sigma^k equivalent
// iff they agree on the masked bits (off-spec props entirely, behavioral
// props up to k, strongly-behavioral props strictly below k).
size_t sig_mask(const AsgSpace& sp, const QuantSpec& sigma, int k) {
  size_t m = 0;
  for (size_t i = 0; i < sp.props.size(); i++) {
    const auto& p = sp.props[i];
    size_t bits;
    if (sigma.strongly_behavioral.contains(p)) {
      bits = (size_t{1} << k) - 1;  // t < k
    } else if (sigma.behavioral.contains(p)) {
      bits = (size_t{1} << (k + 1)) - 1;  // t ≤ k
    } else {
      bits = (size_t{1} << sp.h) - 1;  // full equality
    }
    m |= bits << (i * sp.h);
  }
  return m;
}

// class structure of a member list under ≈_sigma^k for each k < h
struct ClassTable {
  // per k: member position -> class id, and class count
  std::vector<std::vector<int>> cls;
  std::vector<int> counts;
  size_t slots = 0;          // Σ counts
  std::vector<size_t> base;  // slot offset per k
};

ClassTable classify_members(const AsgSpace& sp, const std::vector<size_t>& members,
                            const QuantSpec& sigma) {
  ClassTable t;
  t.cls.resize(sp.h);
  t.counts.resize(sp.h);
  t.base.resize(sp.h);
  for (int k = 0; k < sp.h; k++) {
    size_t sm = sig_mask(sp, sigma, k);
    std::map<size_t, int> ids;
    t.cls[k].resize(members.size());
    for (size_t j = 0; j < members.size(); j++) {
      auto [it, fresh] = ids.emplace(members[j] & sm, int(ids.size()));
      t.cls[k][j] = it->second;
    }
    t.counts[k] = int(ids.size());
    t.base[k] = t.slots;
    t.slots += ids.size();
  }
  return t;
}

std::vector<size_t> mask_members(const Mask& m) {
  std::vector<size_t> r;
  for (size_t i = m.find_first(); i != Mask::npos; i = m.find_next(i)) r.push_back(i);
  return r;
}

// extended space obtained by inserting ap; returns (space, embed position)
std::pair<AsgSpace, size_t> extend_space(const AsgSpace& sp, const Proposition& ap) {
  AsgSpace ns = sp;
  auto it = std::lower_bound(ns.props.begin(), ns.props.end(), ap);
  size_t j = size_t(it - ns.props.begin());
  ns.props.insert(it, ap);
  if (ns.bits() > kMaxSpaceBits)
    throw GuardError("extension exceeds assignment-space guard");
  return {ns, j};
}

size_t embed_index(size_t idx, size_t apbits, size_t j, int h) {
  size_t lowmask = (size_t{1} << (j * h)) - 1;
  size_t low = idx & lowmask;
  size_t high = idx >> (j * h);
  return low | (apbits << (j * h)) | (high << ((j + 1) * h));
}

// ext_sigma(A, ap): enumerate the functor *restrictions* to each set
// (class-uniform value choices), which generate exactly the same sets as
// enumerating all sigma-functors.
HyperCore ext_core(const HyperCore& c, const Proposition& ap, const QuantSpec& sigma) {
  auto [ns, j] = extend_space(c.sp, ap);
  HyperCore out;
  out.sp = ns;
  size_t produced = 0;
  for (auto& X : c.sets) {
    auto members = mask_members(X);
    auto ct = classify_members(c.sp, members, sigma);
    double total = 1;
    for (int k = 0; k < c.sp.h; k++) total *= double(size_t{1} << ct.counts[k]);
    if (total > double(kMaxExtChoices))
      throw GuardError("extension choice space exceeds guard");
    size_t ntotal = size_t(total);
    produced += ntotal;
    if (produced > kMaxGeneratedSets)
      throw GuardError("extension output exceeds guard");
    for (size_t choice = 0; choice < ntotal; choice++) {
      Mask nm(ns.size());
      for (size_t mj = 0; mj < members.size(); mj++) {
        size_t apbits = 0;
        for (int k = 0; k < c.sp.h; k++) {
          size_t slot = ct.base[k] + size_t(ct.cls[k][mj]);
          if ((choice >> slot) & 1) apbits |= size_t{1} << k;
        }
        nm.set(embed_index(members[mj], apbits, j, c.sp.h));
      }
      out.sets.push_back(std::move(nm));
    }
  }
  out.canonicalize();
  return out;
}

double choice_product(const HyperCore& c) {
  double prod = 1;
  for (auto& X : c.sets) {
    prod *= double(X.count());
    if (prod > 1e18) return prod;
  }
  return prod;
}

// dual(A) = images of all choice functions; dynamic programming with
// per-stage deduplication instead of literal choice enumeration
HyperCore dual_core(const HyperCore& c) {
  std::set<Mask> partial;
  partial.insert(Mask(c.sp.size()));
  for (auto& X : c.sets) {
    if (double(c.sets.size()) * double(partial.size()) > kMaxDualWork)
      throw GuardError("dualization work exceeds guard");
    auto members = mask_members(X);
    std::set<Mask> next;
    for (auto& pm : partial) {
      for (size_t i : members) {
        Mask nm = pm;
        nm.set(i);
        next.insert(std::move(nm));
      }
      if (next.size() > kMaxDualFrontier)
        throw GuardError("dualization frontier exceeds guard");
    }
    partial = std::move(next);
  }
  HyperCore out;
  out.sp = c.sp;
  out.sets.assign(partial.begin(), partial.end());
  return out;
}

// full sigma-functor tables over the core's space (NEV needs them verbatim)
std::vector<std::vector<uint8_t>> functor_tables(const AsgSpace& sp,
                                                 const QuantSpec& sigma) {
  std::vector<size_t> members(sp.size());
  for (size_t i = 0; i < sp.size(); i++) members[i] = i;
  auto ct = classify_members(sp, members, sigma);
  double total = 1;
  for (int k = 0; k < sp.h; k++) total *= double(size_t{1} << ct.counts[k]);
  if (total > double(kMaxFunctorCount))
    throw GuardError("functor space exceeds enumeration guard");
  size_t n = size_t(total);
  std::vector<std::vector<uint8_t>> tabs;
  tabs.reserve(n);
  for (size_t choice = 0; choice < n; choice++) {
    std::vector<uint8_t> tab(sp.size(), 0);
    for (size_t idx = 0; idx < sp.size(); idx++) {
      uint8_t bits = 0;
      for (int k = 0; k < sp.h; k++) {
        size_t slot = ct.base[k] + size_t(ct.cls[k][idx]);
        if ((choice >> slot) & 1) bits |= uint8_t(1u << k);
      }
      tab[idx] = bits;
    }
    tabs.push_back(std::move(tab));
  }
  return tabs;
}

// normal-evolution step for an incoherent quantifier:
// { ⋃_F ext(ð(F), F, ap) | ð : Fnc_sigma -> A }
HyperCore nev_incoherent(const HyperCore& c, const Proposition& ap,
                         const QuantSpec& sigma) {
  auto tabs = functor_tables(c.sp, sigma);
  double maps = std::pow(double(c.sets.size()), double(tabs.size()));
  if (maps > kMaxSelectionMaps)
    throw GuardError("selection-map space exceeds guard");
  auto [ns, j] = extend_space(c.sp, ap);
  HyperCore out;
  out.sp = ns;
  std::vector<size_t> digit(tabs.size(), 0);
  while (true) {
    Mask u(ns.size());
    for (size_t fi = 0; fi < tabs.size(); fi++) {
      const Mask& X = c.sets[digit[fi]];
      for (size_t i = X.find_first(); i != Mask::npos; i = X.find_next(i))
        u.set(embed_index(i, tabs[fi][i], j, c.sp.h));
    }
    out.sets.push_back(std::move(u));
    size_t pos = 0;
    while (pos < digit.size() && ++digit[pos] == c.sets.size()) digit[pos++] = 0;
    if (pos == digit.size()) break;
  }
  out.canonicalize();
  return out;
}

bool is_coherent(Alt alpha, QuantKind kind) {
  return (alpha == Alt::EA && kind == QuantKind::Exists) ||
         (alpha == Alt::AE && kind == QuantKind::Forall);
}

HyperCore evolve_core(HyperCore c, const Prefix& prefix, Alt alpha, EvolveMode mode) {
  for (auto& q : prefix.quantifiers) {
    if (is_coherent(alpha, q.kind)) {
      c = ext_core(c, q.prop, q.spec);
    } else if (mode == EvolveMode::EV) {
      c = dual_core(ext_core(dual_core(c), q.prop, q.spec));
    } else {
      c = nev_incoherent(c, q.prop, q.spec);
    }
  }
  return c;
}

}  // namespace

// ---------------------------------------------------------------------------
// public operations

std::vector<Letter> wrd(const Assignment& chi, const Alphabet& ab, int h) {
  std::vector<Letter> w(size_t(h), 0);
  for (int t = 0; t < h; t++) {
    for (size_t i = 0; i < ab.props.size(); i++) {
      auto it = chi.val.find(ab.props[i]);
      if (it == chi.val.end())
        throw std::invalid_argument("wrd: assignment missing proposition");
      if (it->second.at(t)) w[t] |= Letter(1) << i;
    }
  }
  return w;
}

Assignment wrd_inv(const std::vector<Letter>& word, const Alphabet& ab) {
  Assignment chi;
  for (size_t i = 0; i < ab.props.size(); i++) {
    TemporalVal tv;
    tv.h = uint8_t(word.size());
    for (size_t t = 0; t < word.size(); t++) tv.set(int(t), letter_bit(word[t], int(i)));
    chi.val[ab.props[i]] = tv;
  }
  return chi;
}

bool spec_equiv(const Assignment& chi1, const Assignment& chi2,
                const QuantSpec& sigma, int k) {
  if (chi1.domain() != chi2.domain())
    throw std::invalid_argument("spec_equiv: domain mismatch");
  for (auto& [p, v1] : chi1.val) {
    const auto& v2 = chi2.val.at(p);
    int h = v1.h;
    int upto;  // compare bits strictly below `upto`
    if (sigma.strongly_behavioral.contains(p)) upto = std::min(k, h);
    else if (sigma.behavioral.contains(p)) upto = std::min(k + 1, h);
    else upto = h;
    uint8_t m = uint8_t((1u << upto) - 1);
    if ((v1.bits & m) != (v2.bits & m)) return false;
  }
  return true;
}

std::vector<Functor> enumerate_functors(const std::set<Proposition>& P,
                                        const QuantSpec& sigma, int h) {
  AsgSpace sp;
  sp.props.assign(P.begin(), P.end());
  sp.h = h;
  if (sp.size() > 256) throw GuardError("enumerate_functors: space guard exceeded");
  auto tabs = functor_tables(sp, sigma);
  std::vector<Functor> out;
  out.reserve(tabs.size());
  for (auto& tab : tabs) {
    Functor F;
    F.domain = sp.props;
    F.h = h;
    F.table.resize(tab.size());
    for (size_t i = 0; i < tab.size(); i++) F.table[i] = TemporalVal{tab[i], uint8_t(h)};
    out.push_back(std::move(F));
  }
  return out;
}

bool is_sigma_functor(const Functor& F, const QuantSpec& sigma) {
  size_t n = F.space_size();
  for (size_t i = 0; i < n; i++) {
    Assignment a = F.assignment_at(i);
    for (size_t j = i + 1; j < n; j++) {
      Assignment b = F.assignment_at(j);
      for (int k = 0; k < F.h; k++) {
        if (spec_equiv(a, b, sigma, k) && F.table[i].at(k) != F.table[j].at(k))
          return false;
      }
    }
  }
  return true;
}

Hyperassignment dualize(const Hyperassignment& A) {
  auto c = to_core(A);
  if (choice_product(c) > kPublicDualProduct)
    throw GuardError("dualize: choice-function space exceeds guard");
  return from_core(dual_core(c));
}

std::vector<std::pair<Hyperassignment, Hyperassignment>> partitions(
    const Hyperassignment& A) {
  if (A.sets.size() > kMaxPartitionSets)
    throw GuardError("partitions: hyperassignment too large");
  std::vector<std::pair<Hyperassignment, Hyperassignment>> out;
  size_t n = A.sets.size();
  for (size_t m = 0; m < (size_t{1} << n); m++) {
    Hyperassignment a1, a2;
    a1.h = a2.h = A.h;
    for (size_t i = 0; i < n; i++)
      ((m >> i) & 1 ? a1 : a2).sets.push_back(A.sets[i]);
    out.emplace_back(std::move(a1), std::move(a2));
  }
  return out;
}

Hyperassignment extend(const Hyperassignment& A, const Proposition& ap,
                       const QuantSpec& sigma) {
  if (A.domain().count(ap))
    throw std::invalid_argument("extend: proposition already in domain");
  return from_core(ext_core(to_core(A), ap, sigma));
}

Hyperassignment evolve(const Hyperassignment& A, const Prefix& prefix, Alt alpha,
                       EvolveMode mode) {
  auto dom = A.domain();
  for (auto& q : prefix.quantifiers)
    if (dom.count(q.prop))
      throw std::invalid_argument("evolve: prefix clashes with domain");
  return from_core(evolve_core(to_core(A), prefix, alpha, mode));
}

bool eval_tarski(const Assignment& chi, const FormulaPtr& f, int h) {
  switch (f->op) {
    case FormulaOp::Leaf: {
      auto dom = chi.domain();
      for (auto& p : ltl_props(f->leaf))
        if (!dom.count(p))
          throw std::invalid_argument("eval_tarski: unbound proposition " + p.name);
      Alphabet ab = Alphabet::over(dom);
      auto letters = wrd(chi, ab, h);
      LassoWord w;
      w.stem.assign(letters.begin(), letters.end() - 1);
      w.loop = {letters.back()};
      return eval_ltl_lasso(f->leaf, ab, w);
    }
    case FormulaOp::Not: return !eval_tarski(chi, f->lhs, h);
    case FormulaOp::And: return eval_tarski(chi, f->lhs, h) && eval_tarski(chi, f->rhs, h);
    case FormulaOp::Or: return eval_tarski(chi, f->lhs, h) || eval_tarski(chi, f->rhs, h);
    case FormulaOp::Quant: {
      bool exists = f->quant.kind == QuantKind::Exists;
      for (uint32_t bits = 0; bits < (1u << h); bits++) {
        Assignment ext = chi;
        ext.val[f->quant.prop] = TemporalVal{uint8_t(bits), uint8_t(h)};
        bool v = eval_tarski(ext, f->lhs, h);
        if (exists && v) return true;
        if (!exists && !v) return false;
      }
      return !exists;
    }
  }
  throw std::logic_error("eval_tarski: bad op");
}

namespace {

bool is_ltl_leaf(const FormulaPtr& f) { return f->op == FormulaOp::Leaf; }

Mask sat_mask(const AsgSpace& sp, const LtlPtr& psi, int h) {
  Mask m(sp.size());
  Alphabet ab{sp.props};
  for (size_t i = 0; i < sp.size(); i++) {
    auto chi = sp.assignment(i);
    auto letters = wrd(chi, ab, h);
    LassoWord w;
    w.stem.assign(letters.begin(), letters.end() - 1);
    w.loop = {letters.back()};
    if (eval_ltl_lasso(psi, ab, w)) m.set(i);
  }
  return m;
}

bool evalc(const HyperCore& c, const FormulaPtr& f, Alt alpha);

bool eval_partition_and(const HyperCore& c, const FormulaPtr& f) {
  // rule (3a): EA-conjunction via all partitions
  if (c.sets.size() > kMaxPartitionSets)
    throw GuardError("eval_alternating: partition guard exceeded");
  size_t n = c.sets.size();
  for (size_t m = 0; m < (size_t{1} << n); m++) {
    HyperCore a1{c.sp, {}}, a2{c.sp, {}};
    for (size_t i = 0; i < n; i++)
      ((m >> i) & 1 ? a1 : a2).sets.push_back(c.sets[i]);
    bool ok = (!a1.sets.empty() && evalc(a1, f->lhs, Alt::EA)) ||
              (!a2.sets.empty() && evalc(a2, f->rhs, Alt::EA));
    if (!ok) return false;
  }
  return true;
}

bool eval_partition_or(const HyperCore& c, const FormulaPtr& f) {
  // rule (4a): AE-disjunction via some partition
  if (c.sets.size() > kMaxPartitionSets)
    throw GuardError("eval_alternating: partition guard exceeded");
  size_t n = c.sets.size();
  for (size_t m = 0; m < (size_t{1} << n); m++) {
    HyperCore a1{c.sp, {}}, a2{c.sp, {}};
    for (size_t i = 0; i < n; i++)
      ((m >> i) & 1 ? a1 : a2).sets.push_back(c.sets[i]);
    bool ok = (a1.sets.empty() || evalc(a1, f->lhs, Alt::AE)) &&
              (a2.sets.empty() || evalc(a2, f->rhs, Alt::AE));
    if (ok) return true;
  }
  return false;
}

bool evalc(const HyperCore& c, const FormulaPtr& f, Alt alpha) {
  switch (f->op) {
    case FormulaOp::Leaf: {
      Mask sat = sat_mask(c.sp, f->leaf, c.sp.h);
      if (alpha == Alt::EA) {
        for (auto& X : c.sets)
          if (X.is_subset_of(sat)) return true;  // ∃X ∀χ
        return false;
      }
      for (auto& X : c.sets)
        if (!X.intersects(sat)) return false;  // ∀X ∃χ
      return true;
    }
    case FormulaOp::Not:
      return !evalc(c, f->lhs, flip(alpha));  // rule (2)
    case FormulaOp::And:
      if (alpha == Alt::EA) return eval_partition_and(c, f);
      return evalc(dual_core(c), f, Alt::EA);  // rule (3b)
    case FormulaOp::Or:
      if (alpha == Alt::AE) return eval_partition_or(c, f);
      return evalc(dual_core(c), f, Alt::AE);  // rule (4b)
    case FormulaOp::Quant: {
      if (is_coherent(alpha, f->quant.kind))  // rules (5a') / (6b')
        return evalc(ext_core(c, f->quant.prop, f->quant.spec), f->lhs, alpha);
      return evalc(dual_core(c), f, flip(alpha));  // rules (5b) / (6a)
    }
  }
  throw std::logic_error("eval_alternating: bad op");
}

}  // namespace

bool eval_alternating(const Hyperassignment& A, const FormulaPtr& f, Alt alpha) {
  auto dom = A.domain();
  for (auto& p : free_props(f))
    if (!dom.count(p))
      throw std::invalid_argument("eval_alternating: free proposition " + p.name +
                                  " outside hyperassignment domain");
  return evalc(to_core(A), f, alpha);
}

bool refines(const Hyperassignment& A1, const Hyperassignment& A2) {
  if (!A1.sets.empty() && !A2.sets.empty() && A1.domain() != A2.domain())
    throw std::invalid_argument("refines: domain mismatch");
  for (auto& X1 : A1.sets) {
    bool found = false;
    for (auto& X2 : A2.sets) {
      if (std::includes(X1.begin(), X1.end(), X2.begin(), X2.end())) {
        found = true;
        break;
      }
    }
    if (!found) return false;
  }
  return true;
}

std::string dump(const Hyperassignment& A) {
  std::ostringstream o;
  for (auto& X : A.sets) {
    o << "{";
    bool firstA = true;
    for (auto& chi : X) {
      o << (firstA ? " " : " ; ");
      firstA = false;
      bool firstP = true;
      for (auto& [p, tv] : chi.val) {
        if (!firstP) o << ",";
        firstP = false;
        o << p.name << "=";
        for (int t = 0; t < tv.h; t++) o << (tv.at(t) ? '1' : '0');
      }
      if (chi.val.empty()) o << "()";
    }
    o << " }\n";
  }
  return o.str();
}

}  // namespace gfgq
