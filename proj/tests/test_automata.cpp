#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "gfgq/automata.hpp"

using namespace gfgq;

namespace {

struct Gen {
  std::mt19937 rng;
  explicit Gen(uint32_t seed) : rng(seed) {}
  int pick(int n) { return int(rng() % uint32_t(n)); }
  bool coin() { return (rng() & 1) != 0; }

  LassoWord lasso(const Alphabet& ab, int max_stem = 4, int max_loop = 4) {
    LassoWord w;
    int ns = pick(max_stem + 1), nl = 1 + pick(max_loop);
    for (int i = 0; i < ns; i++) w.stem.push_back(Letter(pick(int(ab.size()))));
    for (int i = 0; i < nl; i++) w.loop.push_back(Letter(pick(int(ab.size()))));
    return w;
  }

  LtlPtr matrix(const std::vector<std::string>& props, int depth) {
    if (depth == 0 || pick(4) == 0) {
      switch (pick(4)) {
        case 0: return ltl_true();
        case 1: return ltl_false();
        default: return ltl_atom(props[size_t(pick(int(props.size())))]);
      }
    }
    switch (pick(8)) {
      case 0: return ltl_not(matrix(props, depth - 1));
      case 1: return ltl_and(matrix(props, depth - 1), matrix(props, depth - 1));
      case 2: return ltl_or(matrix(props, depth - 1), matrix(props, depth - 1));
      case 3: return ltl_next(matrix(props, depth - 1));
      case 4: return ltl_future(matrix(props, depth - 1));
      case 5: return ltl_globally(matrix(props, depth - 1));
      case 6: return ltl_until(matrix(props, depth - 1), matrix(props, depth - 1));
      default: return ltl_release(matrix(props, depth - 1), matrix(props, depth - 1));
    }
  }
};

std::set<Proposition> props_of(std::initializer_list<std::string> names) {
  std::set<Proposition> P;
  for (auto& n : names) P.insert({n});
  return P;
}

// independent reachable-cycle check for Büchi nonemptiness
bool nonempty_bruteforce(const BuchiAutomaton& A) {
  int n = A.num_states;
  std::vector<std::vector<bool>> edge(size_t(n), std::vector<bool>(size_t(n), false));
  for (int q = 0; q < n; q++)
    for (auto& succs : A.delta[size_t(q)])
      for (int s : succs) edge[size_t(q)][size_t(s)] = true;
  // reach[i][j]: j reachable from i in >= 1 step
  auto reach = edge;
  for (int k = 0; k < n; k++)
    for (int i = 0; i < n; i++)
      for (int j = 0; j < n; j++)
        if (reach[size_t(i)][size_t(k)] && reach[size_t(k)][size_t(j)])
          reach[size_t(i)][size_t(j)] = true;
  for (int q = 0; q < n; q++) {
    if (!A.accepting[size_t(q)] || !reach[size_t(q)][size_t(q)]) continue;
    for (int i : A.initial)
      if (i == q || reach[size_t(i)][size_t(q)]) return true;
  }
  return false;
}

}  // namespace

TEST_CASE("nba for TRUE accepts everything") {
  auto A = ltl_to_nba(ltl_true(), props_of({"p"}));
  Gen g(1);
  Alphabet ab = A.ab;
  for (int i = 0; i < 100; i++) CHECK(nba_accepts(A, g.lasso(ab)));
}

TEST_CASE("nba for G p recognizes exactly the constant-p word") {
  auto A = ltl_to_nba(ltl_globally(ltl_atom("p")), props_of({"p"}));
  LassoWord allp{{}, {1}};
  CHECK(nba_accepts(A, allp));
  LassoWord drop{{1, 1}, {0}};
  CHECK_FALSE(nba_accepts(A, drop));
  Gen g(2);
  for (int i = 0; i < 500; i++) {
    auto w = g.lasso(A.ab);
    bool all = true;
    for (Letter v : w.stem) all = all && v == 1;
    for (Letter v : w.loop) all = all && v == 1;
    CHECK(nba_accepts(A, w) == all);
  }
}

TEST_CASE("nba agrees with the lasso oracle on fixed and random matrices") {
  Gen g(3);
  std::vector<LtlPtr> fixed = {
      ltl_iff(ltl_atom("p"), ltl_next(ltl_atom("q"))),
      ltl_future(ltl_globally(ltl_atom("p"))),
      ltl_globally(ltl_future(ltl_atom("p"))),
      ltl_until(ltl_atom("p"), ltl_atom("q")),
      ltl_release(ltl_atom("p"), ltl_atom("q")),
  };
  auto P = props_of({"p", "q"});
  Alphabet ab = Alphabet::over(P);
  for (auto& psi : fixed) {
    auto A = ltl_to_nba(psi, P);
    for (int i = 0; i < 500; i++) {
      auto w = g.lasso(ab);
      CHECK(nba_accepts(A, w) == eval_ltl_lasso(psi, ab, w));
    }
  }
  for (int round = 0; round < 40; round++) {
    auto psi = g.matrix({"p", "q"}, 3);
    BuchiAutomaton A;
    try {
      A = ltl_to_nba(psi, P);
    } catch (const GuardError&) {
      continue;
    }
    for (int i = 0; i < 50; i++) {
      auto w = g.lasso(ab);
      CHECK(nba_accepts(A, w) == eval_ltl_lasso(psi, ab, w));
    }
  }
}

TEST_CASE("determinization of the all-accepting automaton accepts every lasso") {
  auto D = determinize(ltl_to_nba(ltl_true(), props_of({"p"})));
  Gen g(4);
  for (int i = 0; i < 200; i++) CHECK(dpa_accepts(D, g.lasso(D.ab)));
}

TEST_CASE("determinization preserves FG p membership") {
  auto psi = ltl_future(ltl_globally(ltl_atom("p")));
  auto A = ltl_to_nba(psi, props_of({"p"}));
  auto D = determinize(A);
  Gen g(5);
  for (int i = 0; i < 1000; i++) {
    auto w = g.lasso(D.ab);
    bool expect = eval_ltl_lasso(psi, D.ab, w);
    CHECK(nba_accepts(A, w) == expect);
    CHECK(dpa_accepts(D, w) == expect);
  }
}

TEST_CASE("determinization preserves GF p membership") {
  auto psi = ltl_globally(ltl_future(ltl_atom("p")));
  auto A = ltl_to_nba(psi, props_of({"p"}));
  auto D = determinize(A);
  Gen g(6);
  for (int i = 0; i < 1000; i++) {
    auto w = g.lasso(D.ab);
    CHECK(dpa_accepts(D, w) == eval_ltl_lasso(psi, D.ab, w));
  }
}

TEST_CASE("determinization agrees with the nba on random matrices") {
  Gen g(7);
  auto P = props_of({"p", "q"});
  Alphabet ab = Alphabet::over(P);
  int rounds = 0;
  while (rounds < 25) {
    auto psi = g.matrix({"p", "q"}, 3);
    BuchiAutomaton A;
    ParityAutomaton D;
    try {
      A = ltl_to_nba(psi, P);
      D = determinize(A);
    } catch (const GuardError&) {
      continue;
    }
    rounds++;
    for (int i = 0; i < 40; i++) {
      auto w = g.lasso(ab);
      CHECK(dpa_accepts(D, w) == nba_accepts(A, w));
    }
  }
}

TEST_CASE("parity complement flips membership on every lasso") {
  Gen g(8);
  auto P = props_of({"p", "q"});
  Alphabet ab = Alphabet::over(P);
  int rounds = 0;
  while (rounds < 20) {
    auto psi = g.matrix({"p", "q"}, 3);
    ParityAutomaton D;
    try {
      D = determinize(ltl_to_nba(psi, P));
    } catch (const GuardError&) {
      continue;
    }
    rounds++;
    auto C = complement_dpa(D);
    auto CC = complement_dpa(C);
    for (int i = 0; i < 30; i++) {
      auto w = g.lasso(ab);
      CHECK(dpa_accepts(D, w) != dpa_accepts(C, w));
      CHECK(dpa_accepts(CC, w) == dpa_accepts(D, w));
    }
  }
  auto all = determinize(ltl_to_nba(ltl_true(), props_of({"p"})));
  CHECK_FALSE(nba_nonempty(dpa_to_nba(complement_dpa(all))));
}

TEST_CASE("parity-to-buchi translation preserves the language") {
  Gen g(9);
  auto P = props_of({"p", "q"});
  Alphabet ab = Alphabet::over(P);
  int rounds = 0;
  while (rounds < 20) {
    auto psi = g.matrix({"p", "q"}, 3);
    ParityAutomaton D;
    try {
      D = determinize(ltl_to_nba(psi, P));
    } catch (const GuardError&) {
      continue;
    }
    rounds++;
    auto B = dpa_to_nba(D);
    for (int i = 0; i < 40; i++) {
      auto w = g.lasso(ab);
      CHECK(nba_accepts(B, w) == dpa_accepts(D, w));
    }
  }
}

namespace {

// all ways of adding an ap-bit to each position of w
std::vector<LassoWord> annotations(const LassoWord& w, int bit) {
  size_t n = w.total();
  std::vector<LassoWord> out;
  Letter lowmask = (Letter(1) << bit) - 1;
  for (uint32_t bits = 0; bits < (1u << n); bits++) {
    LassoWord a = w;
    for (size_t t = 0; t < n; t++) {
      Letter v = t < w.stem.size() ? w.stem[t] : w.loop[t - w.stem.size()];
      Letter low = v & lowmask, high = v >> bit;
      Letter nv = low | (Letter((bits >> t) & 1) << bit) | (high << (bit + 1));
      if (t < w.stem.size()) a.stem[t] = nv; else a.loop[t - w.stem.size()] = nv;
    }
    out.push_back(std::move(a));
  }
  return out;
}

}  // namespace

TEST_CASE("existential elimination is projection") {
  // golden: ∃p over G(p↔q) leaves every word over {q}
  auto D = determinize(
      ltl_to_nba(ltl_globally(ltl_iff(ltl_atom("p"), ltl_atom("q"))),
                 props_of({"p", "q"})));
  auto E = eliminate_quantifier(D, {"p"}, QuantKind::Exists);
  REQUIRE(E.ab.props.size() == 1);
  Gen g(10);
  for (int i = 0; i < 200; i++) CHECK(nba_accepts(E, g.lasso(E.ab)));

  // differential: membership iff some annotation is in the original language
  auto P = props_of({"p", "q"});
  int rounds = 0;
  while (rounds < 15) {
    auto psi = g.matrix({"p", "q"}, 3);
    ParityAutomaton Dr;
    try {
      Dr = determinize(ltl_to_nba(psi, P));
    } catch (const GuardError&) {
      continue;
    }
    rounds++;
    int bit = Dr.ab.index_of({"p"});
    auto Er = eliminate_quantifier(Dr, {"p"}, QuantKind::Exists);
    for (int i = 0; i < 12; i++) {
      auto w = g.lasso(Er.ab, 3, 3);
      bool some = false;
      for (auto& a : annotations(w, bit)) some = some || dpa_accepts(Dr, a);
      CHECK(nba_accepts(Er, w) == some);
    }
  }
}

TEST_CASE("universal elimination is coprojection") {
  // golden: ∀p over G p is empty
  auto D = determinize(ltl_to_nba(ltl_globally(ltl_atom("p")), props_of({"p"})));
  auto U = eliminate_quantifier(D, {"p"}, QuantKind::Forall);
  CHECK_FALSE(nba_nonempty(U));

  // golden: vacuous projection leaves the language unchanged
  auto Dq = determinize(ltl_to_nba(ltl_globally(ltl_atom("q")), props_of({"p", "q"})));
  auto Vq = eliminate_quantifier(Dq, {"p"}, QuantKind::Forall);
  Gen g(11);
  for (int i = 0; i < 200; i++) {
    auto w = g.lasso(Vq.ab);
    bool allq = true;
    for (size_t t = 0; t < w.total(); t++) allq = allq && letter_bit(w.at(t), 0);
    CHECK(nba_accepts(Vq, w) == allq);
  }

  // differential: membership iff every annotation is in the original language
  auto P = props_of({"p", "q"});
  int rounds = 0;
  while (rounds < 10) {
    auto psi = g.matrix({"p", "q"}, 2);
    ParityAutomaton Dr;
    BuchiAutomaton Ur;
    try {
      Dr = determinize(ltl_to_nba(psi, P));
      Ur = eliminate_quantifier(Dr, {"p"}, QuantKind::Forall);
    } catch (const GuardError&) {
      continue;
    }
    rounds++;
    int bit = Dr.ab.index_of({"p"});
    for (int i = 0; i < 10; i++) {
      auto w = g.lasso(Ur.ab, 3, 3);
      bool every = true;
      for (auto& a : annotations(w, bit)) every = every && dpa_accepts(Dr, a);
      CHECK(nba_accepts(Ur, w) == every);
    }
  }
}

TEST_CASE("vanilla elimination pipeline on the known sentences") {
  // ∃q.∀p.(p↔Xq): unsatisfiable
  auto f1 = to_prenex(parse("E q. A p. (p <-> X q)"));
  REQUIRE(f1);
  CHECK_FALSE(nba_nonempty(vanilla_to_nba(from_prenex(f1->prefix, f1->matrix))));

  // ∀x.∃y.G(y↔Xx): satisfiable
  auto f2 = to_prenex(parse("A x. E y. G (y <-> X x)"));
  REQUIRE(f2);
  CHECK(nba_nonempty(vanilla_to_nba(from_prenex(f2->prefix, f2->matrix))));

  // swapped matrix without lookahead: ∃q.∀p.G(q↔Xp) is satisfiable
  auto f3 = to_prenex(parse("A p. E q. (p <-> X q)"));
  REQUIRE(f3);
  CHECK(nba_nonempty(vanilla_to_nba(from_prenex(f3->prefix, f3->matrix))));
}

TEST_CASE("buchi nonemptiness agrees with the brute-force cycle check") {
  Gen g(12);
  auto P = props_of({"p"});
  for (int round = 0; round < 200; round++) {
    // random small automaton
    BuchiAutomaton A;
    A.ab = Alphabet::over(P);
    A.num_states = 1 + g.pick(6);
    A.initial = {g.pick(A.num_states)};
    A.delta.assign(size_t(A.num_states),
                   std::vector<std::vector<int>>(A.ab.size()));
    A.accepting.assign(size_t(A.num_states), false);
    for (int q = 0; q < A.num_states; q++) {
      A.accepting[size_t(q)] = g.pick(3) == 0;
      for (size_t v = 0; v < A.ab.size(); v++) {
        int k = g.pick(3);
        for (int e = 0; e < k; e++)
          A.delta[size_t(q)][v].push_back(g.pick(A.num_states));
      }
    }
    CHECK(nba_nonempty(A) == nonempty_bruteforce(A));
  }
}

TEST_CASE("hoa round trip preserves structure and membership") {
  Gen g(13);
  auto P = props_of({"p", "q"});
  auto psi = ltl_until(ltl_atom("p"), ltl_atom("q"));
  auto A = ltl_to_nba(psi, P);
  auto A2 = import_hoa_nba(export_hoa(A));
  CHECK(A2.num_states == A.num_states);
  CHECK(A2.ab == A.ab);
  auto D = determinize(A);
  auto D2 = import_hoa_dpa(export_hoa(D));
  CHECK(D2.num_states == D.num_states);
  CHECK(D2.priority == D.priority);
  for (int i = 0; i < 300; i++) {
    auto w = g.lasso(A.ab);
    CHECK(nba_accepts(A2, w) == nba_accepts(A, w));
    CHECK(dpa_accepts(D2, w) == dpa_accepts(D, w));
  }
  CHECK(export_dot(A).find("digraph") == 0);
  CHECK(export_dot(D).find("digraph") == 0);
}
