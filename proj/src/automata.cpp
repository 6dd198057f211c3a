#include "gfgq/automata.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <queue>
#include <sstream>

namespace gfgq {

namespace {

// --------------------------------------------------------------------------
// LTL tableau

struct SubTable {
  std::vector<LtlPtr> subs;  // children precede parents
  std::vector<int> lhs, rhs; // child indices (-1 when absent)
  int root = -1;
  std::vector<int> indep;    // atoms, X- and U-nodes: the free state bits
  std::vector<int> bit_of;   // sub index -> indep position (-1 if derived)
};

int collect(const LtlPtr& f, SubTable& t) {
  for (size_t i = 0; i < t.subs.size(); i++)
    if (ltl_eq(t.subs[i], f)) return int(i);
  int l = -1, r = -1;
  if (f->lhs) l = collect(f->lhs, t);
  if (f->rhs) r = collect(f->rhs, t);
  t.subs.push_back(f);
  t.lhs.push_back(l);
  t.rhs.push_back(r);
  int idx = int(t.subs.size()) - 1;
  if (f->op == LtlOp::Atom || f->op == LtlOp::Next || f->op == LtlOp::Until) {
    t.bit_of.push_back(int(t.indep.size()));
    t.indep.push_back(idx);
  } else {
    t.bit_of.push_back(-1);
  }
  return idx;
}

// truth values of all subformulas from the independent bits
std::vector<bool> derive(const SubTable& t, uint32_t bits) {
  std::vector<bool> v(t.subs.size());
  for (size_t i = 0; i < t.subs.size(); i++) {
    switch (t.subs[i]->op) {
      case LtlOp::True: v[i] = true; break;
      case LtlOp::False: v[i] = false; break;
      case LtlOp::Atom:
      case LtlOp::Next:
      case LtlOp::Until: v[i] = (bits >> t.bit_of[i]) & 1; break;
      case LtlOp::Not: v[i] = !v[size_t(t.lhs[i])]; break;
      case LtlOp::And: v[i] = v[size_t(t.lhs[i])] && v[size_t(t.rhs[i])]; break;
      case LtlOp::Or: v[i] = v[size_t(t.lhs[i])] || v[size_t(t.rhs[i])]; break;
      default: throw std::logic_error("non-core operator in tableau");
    }
  }
  return v;
}

// reachable-state restriction, preserving order
BuchiAutomaton prune_unreachable(const BuchiAutomaton& A) {
  std::vector<int> map(size_t(A.num_states), -1);
  std::vector<int> order;
  std::queue<int> bfs;
  for (int q : A.initial)
    if (map[size_t(q)] < 0) {
      map[size_t(q)] = int(order.size());
      order.push_back(q);
      bfs.push(q);
    }
  while (!bfs.empty()) {
    int q = bfs.front();
    bfs.pop();
    for (auto& succs : A.delta[size_t(q)])
      for (int s : succs)
        if (map[size_t(s)] < 0) {
          map[size_t(s)] = int(order.size());
          order.push_back(s);
          bfs.push(s);
        }
  }
  BuchiAutomaton R;
  R.ab = A.ab;
  R.num_states = int(order.size());
  for (int q : A.initial) R.initial.push_back(map[size_t(q)]);
  std::sort(R.initial.begin(), R.initial.end());
  R.delta.resize(order.size());
  R.accepting.resize(order.size());
  for (size_t i = 0; i < order.size(); i++) {
    int q = order[i];
    R.accepting[i] = A.accepting[size_t(q)];
    R.delta[i].resize(A.ab.size());
    for (size_t v = 0; v < A.ab.size(); v++) {
      for (int s : A.delta[size_t(q)][v]) R.delta[i][v].push_back(map[size_t(s)]);
      std::sort(R.delta[i][v].begin(), R.delta[i][v].end());
    }
  }
  return R;
}

}  // namespace

BuchiAutomaton ltl_to_nba(const LtlPtr& psi, const std::set<Proposition>& P) {
  for (auto& p : ltl_props(psi))
    if (!P.count(p))
      throw std::invalid_argument("alphabet misses proposition " + p.name);

  Alphabet ab = Alphabet::over(P);
  auto core = expand_core(psi);
  SubTable t;
  t.root = collect(core, t);
  if (t.indep.size() > 18) throw GuardError("tableau closure exceeds guard");

  // independent bits, partitioned by role
  std::vector<int> atom_bit_of_prop(ab.props.size(), -1);
  std::vector<std::pair<int, int>> xs;      // (bit, sub index of operand)
  std::vector<std::tuple<int, int, int>> us;  // (bit, a index, b index)
  for (size_t b = 0; b < t.indep.size(); b++) {
    int i = t.indep[b];
    switch (t.subs[size_t(i)]->op) {
      case LtlOp::Atom: {
        int ai = ab.index_of(t.subs[size_t(i)]->atom);
        atom_bit_of_prop[size_t(ai)] = int(b);
        break;
      }
      case LtlOp::Next: xs.push_back({int(b), t.lhs[size_t(i)]}); break;
      default: us.push_back({int(b), t.lhs[size_t(i)], t.rhs[size_t(i)]}); break;
    }
  }

  size_t nstates = size_t{1} << t.indep.size();
  std::vector<std::vector<bool>> truth(nstates);
  std::vector<bool> alive(nstates, true);
  for (size_t s = 0; s < nstates; s++) {
    truth[s] = derive(t, uint32_t(s));
    // locally inconsistent untils can never be discharged
    for (auto& [b, ai, bi] : us)
      if (truth[s][size_t(t.indep[size_t(b)])] && !truth[s][size_t(ai)] &&
          !truth[s][size_t(bi)])
        alive[s] = false;
  }

  size_t m = us.size();  // generalized acceptance: one set per until
  size_t copies = std::max<size_t>(m, 1);

  BuchiAutomaton A;
  A.ab = ab;
  A.num_states = int(nstates * copies);
  A.delta.assign(size_t(A.num_states), {});
  A.accepting.assign(size_t(A.num_states), false);
  for (auto& d : A.delta) d.resize(ab.size());

  auto in_f = [&](size_t s, size_t i) {
    auto& [b, ai, bi] = us[i];
    return !truth[s][size_t(t.indep[size_t(b)])] || truth[s][size_t(bi)];
  };

  for (size_t s = 0; s < nstates; s++) {
    if (!alive[s]) continue;
    if (truth[s][size_t(t.root)])
      A.initial.push_back(int(s * copies));  // counter starts at 0
    for (size_t c = 0; c < copies; c++)
      A.accepting[s * copies + c] = (m == 0) ? true : (c == 0 && in_f(s, 0));
  }
  if (A.initial.empty()) {
    // no satisfying atom: empty-language automaton with a rejecting sink
    BuchiAutomaton E;
    E.ab = ab;
    E.num_states = 1;
    E.initial = {0};
    E.delta.assign(1, std::vector<std::vector<int>>(ab.size(), {0}));
    E.accepting = {false};
    return E;
  }

  for (size_t s = 0; s < nstates; s++) {
    if (!alive[s]) continue;
    // the letters compatible with this atom's proposition bits
    std::vector<Letter> letters;
    for (Letter v = 0; v < Letter(ab.size()); v++) {
      bool ok = true;
      for (size_t ai = 0; ai < ab.props.size(); ai++)
        if (atom_bit_of_prop[ai] >= 0 &&
            letter_bit(v, int(ai)) != (((s >> atom_bit_of_prop[ai]) & 1) != 0))
          ok = false;
      if (ok) letters.push_back(v);
    }
    for (size_t s2 = 0; s2 < nstates; s2++) {
      if (!alive[s2]) continue;
      bool ok = true;
      for (auto& [b, oi] : xs)
        if ((((s >> b) & 1) != 0) != truth[s2][size_t(oi)]) ok = false;
      for (auto& [b, ai, bi] : us) {
        bool cur = ((s >> b) & 1) != 0;
        bool expand = truth[s][size_t(bi)] ||
                      (truth[s][size_t(ai)] && (((s2 >> b) & 1) != 0));
        if (cur != expand) ok = false;
      }
      if (!ok) continue;
      for (size_t c = 0; c < copies; c++) {
        size_t c2 = (m == 0) ? 0 : (in_f(s, c) ? (c + 1) % m : c);
        for (Letter v : letters)
          A.delta[s * copies + c][v].push_back(int(s2 * copies + c2));
      }
    }
  }
  return prune_unreachable(A);
}

// --------------------------------------------------------------------------
// Safra-tree determinization

namespace {

struct SafraNode {
  int name = 0;
  std::vector<int> states;  // sorted
  std::vector<SafraNode> children;  // elder first
};

struct SafraTree {
  bool empty = true;
  SafraNode root;
};

void encode_node(const SafraNode& n, std::vector<int>& out) {
  out.push_back(n.name);
  out.push_back(int(n.states.size()));
  out.insert(out.end(), n.states.begin(), n.states.end());
  out.push_back(int(n.children.size()));
  for (auto& c : n.children) encode_node(c, out);
}

std::vector<int> encode(const SafraTree& t) {
  std::vector<int> out;
  out.push_back(t.empty ? 0 : 1);
  if (!t.empty) encode_node(t.root, out);
  return out;
}

void for_each_node(SafraNode& n, const std::function<void(SafraNode&)>& fn) {
  fn(n);
  for (auto& c : n.children) for_each_node(c, fn);
}

std::vector<int> set_union(const std::vector<int>& a, const std::vector<int>& b) {
  std::vector<int> r;
  std::set_union(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(r));
  return r;
}

std::vector<int> set_minus(const std::vector<int>& a, const std::vector<int>& b) {
  std::vector<int> r;
  std::set_difference(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(r));
  return r;
}

struct SafraStep {
  SafraTree tree;
  int priority;  // min-even convention
};

// one determinization step; priorities: 2f for the smallest vertically merged
// name, 2e-1 for the smallest killed name, neutral when neither happened
SafraStep safra_step(const BuchiAutomaton& A, const SafraTree& t, Letter v,
                     int neutral) {
  if (t.empty) return {t, 1};

  SafraTree nt = t;
  int fresh = 0;
  for_each_node(nt.root, [&](SafraNode& n) { fresh = std::max(fresh, n.name); });
  fresh++;

  // spawn: new youngest child holding the accepting part of the label
  // (recurse over the pre-existing children only; fresh nodes do not spawn)
  std::function<void(SafraNode&)> spawn = [&](SafraNode& n) {
    size_t k = n.children.size();
    for (size_t i = 0; i < k; i++) spawn(n.children[i]);
    std::vector<int> acc;
    for (int q : n.states)
      if (A.accepting[size_t(q)]) acc.push_back(q);
    if (!acc.empty()) n.children.push_back(SafraNode{fresh++, acc, {}});
  };
  spawn(nt.root);

  // powerset update of every label
  for_each_node(nt.root, [&](SafraNode& n) {
    std::vector<int> next;
    for (int q : n.states)
      next = set_union(next, A.delta[size_t(q)][v]);
    n.states = std::move(next);
  });

  // horizontal merge: elder siblings keep shared states
  std::function<void(SafraNode&, std::vector<int>&)> hmerge =
      [&](SafraNode& n, std::vector<int>& forbidden) {
        n.states = set_minus(n.states, forbidden);
        std::vector<int> local;  // forbidden set for younger siblings below n
        for (auto& c : n.children) {
          std::vector<int> f2 = set_union(forbidden, local);
          hmerge(c, f2);
          local = set_union(local, c.states);
        }
      };
  std::vector<int> none;
  hmerge(nt.root, none);

  // kill empty nodes
  int e = -1;
  std::function<void(SafraNode&)> kill = [&](SafraNode& n) {
    std::vector<SafraNode> keep;
    for (auto& c : n.children) {
      if (c.states.empty()) {
        // the whole subtree is empty after horizontal merge
        for_each_node(c, [&](SafraNode& d) {
          if (e < 0 || d.name < e) e = d.name;
        });
      } else {
        kill(c);
        keep.push_back(std::move(c));
      }
    }
    n.children = std::move(keep);
  };
  if (nt.root.states.empty()) {
    for_each_node(nt.root, [&](SafraNode& d) {
      if (e < 0 || d.name < e) e = d.name;
    });
    return {SafraTree{true, {}}, e >= 0 ? 2 * e - 1 : 1};
  }
  kill(nt.root);

  // vertical merge: a node covered by its children absorbs the subtree
  int f = -1;
  std::function<void(SafraNode&)> vmerge = [&](SafraNode& n) {
    std::vector<int> cu;
    for (auto& c : n.children) cu = set_union(cu, c.states);
    if (!n.children.empty() && cu == n.states) {
      n.children.clear();
      if (f < 0 || n.name < f) f = n.name;
      return;
    }
    for (auto& c : n.children) vmerge(c);
  };
  vmerge(nt.root);

  // compact names preserving relative order
  std::vector<int> names;
  for_each_node(nt.root, [&](SafraNode& n) { names.push_back(n.name); });
  std::sort(names.begin(), names.end());
  for_each_node(nt.root, [&](SafraNode& n) {
    n.name = int(std::lower_bound(names.begin(), names.end(), n.name) -
                 names.begin()) + 1;
  });

  int pri = neutral;
  if (f >= 0 && (e < 0 || f < e)) pri = 2 * f;
  else if (e >= 0) pri = 2 * e - 1;
  if (pri > neutral) pri = neutral;
  return {std::move(nt), pri};
}

}  // namespace

ParityAutomaton determinize(const BuchiAutomaton& A, size_t budget) {
  int neutral = 2 * (A.num_states + 1) + 1;

  SafraTree t0;
  if (!A.initial.empty()) {
    t0.empty = false;
    t0.root.name = 1;
    t0.root.states.assign(A.initial.begin(), A.initial.end());
    std::sort(t0.root.states.begin(), t0.root.states.end());
  }

  // state = (tree, priority of the incoming transition)
  std::map<std::pair<std::vector<int>, int>, int> ids;
  std::vector<SafraTree> trees;
  std::vector<int> pris;
  auto intern = [&](const SafraTree& t, int pri) {
    auto key = std::make_pair(encode(t), pri);
    auto [it, fresh] = ids.emplace(key, int(trees.size()));
    if (fresh) {
      trees.push_back(t);
      pris.push_back(pri);
      if (trees.size() > budget) throw GuardError("determinization exceeds state budget");
    }
    return it->second;
  };

  ParityAutomaton D;
  D.ab = A.ab;
  D.initial = intern(t0, neutral);
  for (size_t q = 0; q < trees.size(); q++) {
    D.delta.push_back(std::vector<int>(A.ab.size()));
    for (Letter v = 0; v < Letter(A.ab.size()); v++) {
      auto step = safra_step(A, trees[q], v, neutral);
      D.delta[q][v] = intern(step.tree, step.priority);
    }
  }
  D.num_states = int(trees.size());

  // internal min-even priorities -> public max-even
  int maxp = neutral;
  for (int p : pris) maxp = std::max(maxp, p);
  int top = maxp + (maxp % 2);
  D.priority.resize(pris.size());
  for (size_t i = 0; i < pris.size(); i++) D.priority[i] = top - pris[i];
  return D;
}

ParityAutomaton complement_dpa(const ParityAutomaton& D) {
  ParityAutomaton C = D;
  for (auto& p : C.priority) p += 1;
  return C;
}

BuchiAutomaton dpa_to_nba(const ParityAutomaton& D) {
  std::vector<int> evens;
  for (int p : D.priority)
    if (p % 2 == 0 &&
        std::find(evens.begin(), evens.end(), p) == evens.end())
      evens.push_back(p);
  std::sort(evens.begin(), evens.end());

  // base copy q, plus one copy (q, d) per guessed dominant even priority
  size_t n = size_t(D.num_states);
  auto guess_id = [&](size_t q, size_t di) { return n + di * n + q; };

  BuchiAutomaton A;
  A.ab = D.ab;
  A.num_states = int(n + evens.size() * n);
  A.initial = {D.initial};
  A.delta.assign(size_t(A.num_states), std::vector<std::vector<int>>(D.ab.size()));
  A.accepting.assign(size_t(A.num_states), false);

  for (size_t q = 0; q < n; q++) {
    for (Letter v = 0; v < Letter(D.ab.size()); v++) {
      size_t q2 = size_t(D.delta[q][v]);
      A.delta[q][v].push_back(int(q2));
      for (size_t di = 0; di < evens.size(); di++)
        if (D.priority[q2] <= evens[di])
          A.delta[q][v].push_back(int(guess_id(q2, di)));
    }
    for (size_t di = 0; di < evens.size(); di++) {
      size_t g = guess_id(q, di);
      A.accepting[g] = (D.priority[q] == evens[di]);
      for (Letter v = 0; v < Letter(D.ab.size()); v++) {
        size_t q2 = size_t(D.delta[q][v]);
        if (D.priority[q2] <= evens[di])
          A.delta[g][v].push_back(int(guess_id(q2, di)));
      }
    }
  }
  return prune_unreachable(A);
}

namespace {

// rewrite an automaton over Val(P) to Val(P \ {ap}) by merging the two
// letters that differ only on ap
BuchiAutomaton project_letter(const BuchiAutomaton& A, const Proposition& ap) {
  int bit = A.ab.index_of(ap);
  Alphabet nab;
  for (auto& p : A.ab.props)
    if (!(p == ap)) nab.props.push_back(p);

  auto embed = [&](Letter v, bool b) {
    Letter low = v & ((Letter(1) << bit) - 1);
    Letter high = v >> bit;
    return low | (Letter(b) << bit) | (high << (bit + 1));
  };

  BuchiAutomaton R;
  R.ab = nab;
  R.num_states = A.num_states;
  R.initial = A.initial;
  R.accepting = A.accepting;
  R.delta.assign(size_t(A.num_states), std::vector<std::vector<int>>(nab.size()));
  for (size_t q = 0; q < size_t(A.num_states); q++)
    for (Letter v = 0; v < Letter(nab.size()); v++) {
      auto merged = A.delta[q][embed(v, false)];
      for (int s : A.delta[q][embed(v, true)]) merged.push_back(s);
      std::sort(merged.begin(), merged.end());
      merged.erase(std::unique(merged.begin(), merged.end()), merged.end());
      R.delta[q][v] = std::move(merged);
    }
  return R;
}

// drop states that cannot contribute to an accepted run: keep only states on
// a path from an initial state to a reachable accepting cycle (language is
// preserved; shrinks the input of the determinization step)
BuchiAutomaton trim_nba(const BuchiAutomaton& A) {
  int n = A.num_states;
  auto succ = std::vector<std::vector<int>>(size_t(n));
  auto pred = std::vector<std::vector<int>>(size_t(n));
  for (int q = 0; q < n; q++) {
    std::vector<int> out;
    for (auto& ss : A.delta[size_t(q)]) out.insert(out.end(), ss.begin(), ss.end());
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    for (int s : out) pred[size_t(s)].push_back(q);
    succ[size_t(q)] = std::move(out);
  }
  auto closure = [&](std::vector<int> seed, const std::vector<std::vector<int>>& e) {
    std::vector<bool> seen(size_t(n), false);
    for (int q : seed) seen[size_t(q)] = true;
    while (!seed.empty()) {
      int q = seed.back();
      seed.pop_back();
      for (int s : e[size_t(q)])
        if (!seen[size_t(s)]) {
          seen[size_t(s)] = true;
          seed.push_back(s);
        }
    }
    return seen;
  };
  auto fwd = closure(A.initial, succ);
  // accepting states on a reachable cycle
  std::vector<int> anchors;
  for (int q = 0; q < n; q++) {
    if (!A.accepting[size_t(q)] || !fwd[size_t(q)]) continue;
    // q lies on a cycle iff some predecessor of q is reachable from q
    auto from_q = closure({q}, succ);
    bool on_cycle = false;
    for (int s : pred[size_t(q)]) on_cycle = on_cycle || from_q[size_t(s)];
    if (on_cycle) anchors.push_back(q);
  }
  if (anchors.empty()) {
    BuchiAutomaton R;
    R.ab = A.ab;
    R.num_states = 1;
    R.initial = {0};
    R.accepting = {false};
    R.delta.assign(1, std::vector<std::vector<int>>(A.ab.size()));
    return R;
  }
  auto live = closure(anchors, pred);
  BuchiAutomaton R = A;
  for (int q = 0; q < n; q++) {
    if (!live[size_t(q)]) R.accepting[size_t(q)] = false;
    for (auto& ss : R.delta[size_t(q)]) {
      std::vector<int> kept;
      for (int s : ss)
        if (live[size_t(s)] && fwd[size_t(s)]) kept.push_back(s);
      ss = std::move(kept);
    }
  }
  std::vector<int> init;
  for (int q : R.initial)
    if (live[size_t(q)]) init.push_back(q);
  if (!init.empty()) R.initial = std::move(init);
  return prune_unreachable(R);
}

}  // namespace

BuchiAutomaton eliminate_quantifier(const ParityAutomaton& D,
                                    const Proposition& ap, QuantKind kind,
                                    size_t budget) {
  bool has = false;
  for (auto& p : D.ab.props) has = has || p == ap;
  if (!has) throw std::invalid_argument("proposition not in alphabet: " + ap.name);

  if (kind == QuantKind::Exists)
    return project_letter(dpa_to_nba(D), ap);

  // forall = complement . exists . complement
  auto inner = trim_nba(project_letter(dpa_to_nba(complement_dpa(D)), ap));
  return dpa_to_nba(complement_dpa(determinize(inner, budget)));
}

BuchiAutomaton vanilla_to_nba(const FormulaPtr& f, size_t budget) {
  auto pv = to_prenex(f);
  if (!pv) throw std::invalid_argument("formula is not prenex");
  for (auto& q : pv->prefix.quantifiers)
    if (!q.spec.is_vanilla())
      throw std::invalid_argument("non-vanilla quantifier on " + q.prop.name);

  std::set<Proposition> P = free_props(f);
  for (auto& q : pv->prefix.quantifiers) P.insert(q.prop);
  BuchiAutomaton A = ltl_to_nba(pv->matrix, P);
  auto& qs = pv->prefix.quantifiers;
  for (auto it = qs.rbegin(); it != qs.rend(); ++it) {
    A = trim_nba(A);
    // existential projection works on the nondeterministic automaton directly;
    // only the universal case needs the determinization round-trip
    if (it->kind == QuantKind::Exists)
      A = project_letter(A, it->prop);
    else
      A = eliminate_quantifier(determinize(A, budget), it->prop, it->kind, budget);
  }
  return A;
}

// --------------------------------------------------------------------------
// membership / emptiness

bool nba_nonempty(const BuchiAutomaton& A) {
  // Tarjan SCCs over the reachable subgraph
  int n = A.num_states;
  std::vector<int> index(size_t(n), -1), low(size_t(n), 0), comp(size_t(n), -1);
  std::vector<bool> onstack(size_t(n), false), self(size_t(n), false);
  std::vector<int> stack;
  int next_index = 0, next_comp = 0;
  std::vector<int> comp_size;

  std::function<void(int)> strongconnect = [&](int q) {
    index[size_t(q)] = low[size_t(q)] = next_index++;
    stack.push_back(q);
    onstack[size_t(q)] = true;
    for (auto& succs : A.delta[size_t(q)])
      for (int s : succs) {
        if (s == q) self[size_t(q)] = true;
        if (index[size_t(s)] < 0) {
          strongconnect(s);
          low[size_t(q)] = std::min(low[size_t(q)], low[size_t(s)]);
        } else if (onstack[size_t(s)]) {
          low[size_t(q)] = std::min(low[size_t(q)], index[size_t(s)]);
        }
      }
    if (low[size_t(q)] == index[size_t(q)]) {
      int sz = 0;
      while (true) {
        int w = stack.back();
        stack.pop_back();
        onstack[size_t(w)] = false;
        comp[size_t(w)] = next_comp;
        sz++;
        if (w == q) break;
      }
      comp_size.push_back(sz);
      next_comp++;
    }
  };
  for (int q : A.initial)
    if (index[size_t(q)] < 0) strongconnect(q);

  for (int q = 0; q < n; q++)
    if (comp[size_t(q)] >= 0 && A.accepting[size_t(q)] &&
        (comp_size[size_t(comp[size_t(q)])] > 1 || self[size_t(q)]))
      return true;
  return false;
}

bool nba_accepts(const BuchiAutomaton& A, const LassoWord& w) {
  size_t total = w.total();
  auto next_pos = [&](size_t t) { return t + 1 < total ? t + 1 : w.stem.size(); };
  size_t np = size_t(A.num_states) * total;
  auto pid = [&](int q, size_t t) { return size_t(q) * total + t; };

  std::vector<bool> reach(np, false);
  std::queue<size_t> bfs;
  for (int q : A.initial) {
    reach[pid(q, 0)] = true;
    bfs.push(pid(q, 0));
  }
  while (!bfs.empty()) {
    size_t x = bfs.front();
    bfs.pop();
    int q = int(x / total);
    size_t t = x % total;
    for (int s : A.delta[size_t(q)][w.at(t)]) {
      size_t y = pid(s, next_pos(t));
      if (!reach[y]) {
        reach[y] = true;
        bfs.push(y);
      }
    }
  }
  // an accepted lasso needs a reachable accepting product state on a cycle
  for (int q = 0; q < A.num_states; q++) {
    if (!A.accepting[size_t(q)]) continue;
    for (size_t t = w.stem.size(); t < total; t++) {
      if (!reach[pid(q, t)]) continue;
      std::vector<bool> seen(np, false);
      std::queue<size_t> b2;
      b2.push(pid(q, t));
      bool cycle = false;
      while (!b2.empty() && !cycle) {
        size_t x = b2.front();
        b2.pop();
        int q2 = int(x / total);
        size_t t2 = x % total;
        for (int s : A.delta[size_t(q2)][w.at(t2)]) {
          size_t y = pid(s, next_pos(t2));
          if (y == pid(q, t)) cycle = true;
          if (!seen[y]) {
            seen[y] = true;
            b2.push(y);
          }
        }
      }
      if (cycle) return true;
    }
  }
  return false;
}

bool dpa_accepts(const ParityAutomaton& D, const LassoWord& w) {
  int q = D.initial;
  for (Letter v : w.stem) q = D.delta[size_t(q)][v];
  // iterate whole-loop applications until the entry state repeats
  std::map<int, size_t> seen;
  std::vector<int> entries;
  std::vector<int> maxpri;  // max priority during the i-th loop pass
  while (!seen.count(q)) {
    seen[q] = entries.size();
    entries.push_back(q);
    int mp = -1;
    int s = q;
    for (Letter v : w.loop) {
      s = D.delta[size_t(s)][v];
      mp = std::max(mp, D.priority[size_t(s)]);
    }
    maxpri.push_back(mp);
    q = s;
  }
  int best = -1;
  for (size_t i = seen[q]; i < entries.size(); i++) best = std::max(best, maxpri[i]);
  return best % 2 == 0;
}

// --------------------------------------------------------------------------
// HOA / DOT

namespace {

std::string label_expr(const Alphabet& ab, Letter v) {
  if (ab.props.empty()) return "t";
  std::string s;
  for (size_t i = 0; i < ab.props.size(); i++) {
    if (i) s += "&";
    if (!letter_bit(v, int(i))) s += "!";
    s += std::to_string(i);
  }
  return s;
}

std::string label_set(const Alphabet& ab, Letter v) {
  std::string s = "{";
  bool first = true;
  for (size_t i = 0; i < ab.props.size(); i++)
    if (letter_bit(v, int(i))) {
      if (!first) s += " ";
      s += ab.props[i].name;
      first = false;
    }
  return s + "}";
}

std::string hoa_header(const Alphabet& ab, int nstates,
                       const std::vector<int>& initial) {
  std::ostringstream os;
  os << "HOA: v1\n";
  os << "States: " << nstates << "\n";
  for (int q : initial) os << "Start: " << q << "\n";
  os << "AP: " << ab.props.size();
  for (auto& p : ab.props) os << " \"" << p.name << "\"";
  os << "\n";
  return os.str();
}

// max-even parity acceptance formula over sets 0..k-1
std::string parity_acceptance(int k) {
  std::string s;
  for (int j = k - 1; j >= 0; j--) {
    bool even = j % 2 == 0;
    if (s.empty()) {
      s = (even ? "Inf(" : "Fin(") + std::to_string(j) + ")";
    } else if (even) {
      s = "Inf(" + std::to_string(j) + ") | (" + s + ")";
    } else {
      s = "Fin(" + std::to_string(j) + ") & (" + s + ")";
    }
  }
  return s.empty() ? "t" : s;
}

}  // namespace

std::string export_hoa(const BuchiAutomaton& A) {
  std::ostringstream os;
  os << hoa_header(A.ab, A.num_states, A.initial);
  os << "acc-name: Buchi\n";
  os << "Acceptance: 1 Inf(0)\n";
  os << "--BODY--\n";
  for (int q = 0; q < A.num_states; q++) {
    os << "State: " << q;
    if (A.accepting[size_t(q)]) os << " {0}";
    os << "\n";
    for (Letter v = 0; v < Letter(A.ab.size()); v++)
      for (int s : A.delta[size_t(q)][v])
        os << "[" << label_expr(A.ab, v) << "] " << s << "\n";
  }
  os << "--END--\n";
  return os.str();
}

std::string export_hoa(const ParityAutomaton& D) {
  int k = 1;
  for (int p : D.priority) k = std::max(k, p + 1);
  std::ostringstream os;
  os << hoa_header(D.ab, D.num_states, {D.initial});
  os << "acc-name: parity max even " << k << "\n";
  os << "Acceptance: " << k << " " << parity_acceptance(k) << "\n";
  os << "--BODY--\n";
  for (int q = 0; q < D.num_states; q++) {
    os << "State: " << q << " {" << D.priority[size_t(q)] << "}\n";
    for (Letter v = 0; v < Letter(D.ab.size()); v++)
      os << "[" << label_expr(D.ab, v) << "] " << D.delta[size_t(q)][v] << "\n";
  }
  os << "--END--\n";
  return os.str();
}

namespace {

struct HoaData {
  Alphabet ab;
  int nstates = 0;
  std::vector<int> initial;
  // per state: marks and per-letter successor lists
  std::vector<std::vector<int>> marks;
  std::vector<std::vector<std::vector<int>>> delta;
};

Letter parse_label(const std::string& expr, size_t nprops) {
  if (expr == "t") return 0;
  Letter v = 0;
  std::istringstream is(expr);
  std::string tok;
  size_t i = 0;
  while (std::getline(is, tok, '&')) {
    bool neg = !tok.empty() && tok[0] == '!';
    size_t ap = std::stoul(neg ? tok.substr(1) : tok);
    if (ap >= nprops) throw std::invalid_argument("hoa: bad AP index");
    if (!neg) v |= Letter(1) << ap;
    i++;
  }
  if (i != nprops) throw std::invalid_argument("hoa: partial label");
  return v;
}

HoaData parse_hoa(const std::string& text) {
  HoaData d;
  std::istringstream is(text);
  std::string line;
  bool body = false;
  int cur = -1;
  while (std::getline(is, line)) {
    std::istringstream ls(line);
    std::string tok;
    if (!(ls >> tok)) continue;
    if (tok == "--BODY--") { body = true; continue; }
    if (tok == "--END--") break;
    if (!body) {
      if (tok == "States:") { ls >> d.nstates; }
      else if (tok == "Start:") { int q; ls >> q; d.initial.push_back(q); }
      else if (tok == "AP:") {
        size_t n; ls >> n;
        std::string rest;
        std::getline(ls, rest);
        size_t pos = 0;
        for (size_t i = 0; i < n; i++) {
          size_t a = rest.find('"', pos);
          size_t b = rest.find('"', a + 1);
          d.ab.props.push_back({rest.substr(a + 1, b - a - 1)});
          pos = b + 1;
        }
      }
      continue;
    }
    if (d.delta.empty()) {
      d.delta.resize(size_t(d.nstates));
      d.marks.resize(size_t(d.nstates));
      for (auto& dd : d.delta) dd.resize(d.ab.size());
    }
    if (tok == "State:") {
      ls >> cur;
      std::string rest;
      std::getline(ls, rest);
      size_t a = rest.find('{');
      if (a != std::string::npos) {
        size_t b = rest.find('}', a);
        std::istringstream ms(rest.substr(a + 1, b - a - 1));
        int m;
        while (ms >> m) d.marks[size_t(cur)].push_back(m);
      }
      continue;
    }
    // transition: [expr] target
    size_t a = line.find('['), b = line.find(']');
    if (a == std::string::npos || cur < 0)
      throw std::invalid_argument("hoa: malformed body line");
    Letter v = parse_label(line.substr(a + 1, b - a - 1), d.ab.props.size());
    int target = std::stoi(line.substr(b + 1));
    d.delta[size_t(cur)][v].push_back(target);
  }
  if (d.delta.empty()) {
    d.delta.resize(size_t(d.nstates));
    d.marks.resize(size_t(d.nstates));
    for (auto& dd : d.delta) dd.resize(d.ab.size());
  }
  return d;
}

}  // namespace

BuchiAutomaton import_hoa_nba(const std::string& text) {
  auto d = parse_hoa(text);
  BuchiAutomaton A;
  A.ab = d.ab;
  A.num_states = d.nstates;
  A.initial = d.initial;
  A.delta = d.delta;
  A.accepting.resize(size_t(d.nstates), false);
  for (int q = 0; q < d.nstates; q++)
    A.accepting[size_t(q)] = !d.marks[size_t(q)].empty();
  if (A.initial.empty()) throw std::invalid_argument("hoa: no initial state");
  return A;
}

ParityAutomaton import_hoa_dpa(const std::string& text) {
  auto d = parse_hoa(text);
  ParityAutomaton D;
  D.ab = d.ab;
  D.num_states = d.nstates;
  if (d.initial.size() != 1) throw std::invalid_argument("hoa: dpa needs one start");
  D.initial = d.initial[0];
  D.priority.resize(size_t(d.nstates));
  D.delta.resize(size_t(d.nstates));
  for (int q = 0; q < d.nstates; q++) {
    if (d.marks[size_t(q)].size() != 1)
      throw std::invalid_argument("hoa: dpa state needs one priority");
    D.priority[size_t(q)] = d.marks[size_t(q)][0];
    D.delta[size_t(q)].resize(d.ab.size());
    for (Letter v = 0; v < Letter(d.ab.size()); v++) {
      if (d.delta[size_t(q)][v].size() != 1)
        throw std::invalid_argument("hoa: dpa must be deterministic and complete");
      D.delta[size_t(q)][v] = d.delta[size_t(q)][v][0];
    }
  }
  return D;
}

std::string export_dot(const BuchiAutomaton& A) {
  std::ostringstream os;
  os << "digraph nba {\n  rankdir=LR;\n";
  os << "  init [shape=point];\n";
  for (int q : A.initial) os << "  init -> s" << q << ";\n";
  for (int q = 0; q < A.num_states; q++)
    os << "  s" << q << " [shape=" << (A.accepting[size_t(q)] ? "doublecircle" : "circle")
       << " label=\"" << q << "\"];\n";
  for (int q = 0; q < A.num_states; q++)
    for (Letter v = 0; v < Letter(A.ab.size()); v++)
      for (int s : A.delta[size_t(q)][v])
        os << "  s" << q << " -> s" << s << " [label=\"" << label_set(A.ab, v)
           << "\"];\n";
  os << "}\n";
  return os.str();
}

std::string export_dot(const ParityAutomaton& D) {
  std::ostringstream os;
  os << "digraph dpa {\n  rankdir=LR;\n";
  os << "  init [shape=point];\n  init -> s" << D.initial << ";\n";
  for (int q = 0; q < D.num_states; q++)
    os << "  s" << q << " [shape=circle label=\"" << q << ":"
       << D.priority[size_t(q)] << "\"];\n";
  for (int q = 0; q < D.num_states; q++)
    for (Letter v = 0; v < Letter(D.ab.size()); v++)
      os << "  s" << q << " -> s" << D.delta[size_t(q)][v] << " [label=\""
         << label_set(D.ab, v) << "\"];\n";
  os << "}\n";
  return os.str();
}

}  // namespace gfgq
