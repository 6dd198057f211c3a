#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "gfgq/hyper.hpp"

using namespace gfgq;

namespace {

TemporalVal tv(const std::string& bits) {
  TemporalVal v;
  v.h = uint8_t(bits.size());
  for (size_t t = 0; t < bits.size(); t++) v.set(int(t), bits[t] == '1');
  return v;
}

Assignment asg(std::initializer_list<std::pair<std::string, std::string>> xs) {
  Assignment a;
  for (auto& [p, bits] : xs) a.val[Proposition{p}] = tv(bits);
  return a;
}

Hyperassignment hyper(int h, std::vector<AsgSet> sets) {
  Hyperassignment A{h, std::move(sets)};
  A.canonicalize();
  return A;
}

}  // namespace

TEST_CASE("wrd transposition and round trip") {
  auto chi = asg({{"p", "01"}, {"q", "11"}});
  Alphabet ab = Alphabet::over({{"p"}, {"q"}});
  auto w = wrd(chi, ab, 2);
  REQUIRE(w.size() == 2);
  int pi = ab.index_of({"p"}), qi = ab.index_of({"q"});
  CHECK_FALSE(letter_bit(w[0], pi));
  CHECK(letter_bit(w[0], qi));
  CHECK(letter_bit(w[1], pi));
  CHECK(letter_bit(w[1], qi));

  Assignment empty;
  Alphabet noprops;
  auto we = wrd(empty, noprops, 2);
  CHECK(we == std::vector<Letter>{0, 0});

  std::mt19937 rng(7);
  for (int i = 0; i < 1000; i++) {
    int h = 1 + int(rng() % 4);
    Assignment chi2;
    for (auto& n : {"p", "q", "r"})
      chi2.val[Proposition{n}] = TemporalVal{uint8_t(rng() & ((1u << h) - 1)), uint8_t(h)};
    Alphabet ab2 = Alphabet::over(chi2.domain());
    CHECK(wrd_inv(wrd(chi2, ab2, h), ab2) == chi2);
  }
}

TEST_CASE("spec_equiv: distinguishability triple at k=3, h=4") {
  // chi1 ~_p^{>3} chi2 (p may differ only beyond 3: nothing within horizon 4,
  // so take them p-equal) and chi2 ~_q^{>=3} chi3 (q differs at t=3 only)
  QuantSpec sigma{PropSet::of({"p"}), PropSet::of({"q"})};
  auto chi1 = asg({{"p", "0110"}, {"q", "1010"}});
  auto chi2 = asg({{"p", "0110"}, {"q", "1010"}});
  auto chi3 = asg({{"p", "0110"}, {"q", "1011"}});
  CHECK(spec_equiv(chi1, chi2, sigma, 3));
  CHECK(spec_equiv(chi2, chi3, sigma, 3));
  CHECK(spec_equiv(chi1, chi3, sigma, 3));
  // q's change at t=3 is visible at k=4-ish; here condition 3 only ignores t<k
  CHECK_FALSE(spec_equiv(chi1, chi3, QuantSpec{PropSet::of({"p", "q"}), PropSet::none()}, 3));

  CHECK(spec_equiv(chi1, chi1, QuantSpec::vanilla(), 0));
  auto a = asg({{"p", "10"}});
  auto b = asg({{"p", "00"}});
  CHECK_FALSE(spec_equiv(a, b, QuantSpec::vanilla(), 0));
  CHECK_THROWS_AS(spec_equiv(a, asg({{"q", "00"}}), QuantSpec::vanilla(), 0),
                  std::invalid_argument);
}

TEST_CASE("spec_equiv equals transitive closure of one-step relation") {
  // independent oracle: BFS closure of ~ (single-prop changes) over the space
  std::mt19937 rng(11);
  for (int round = 0; round < 20; round++) {
    int h = 1 + int(rng() % 3);
    std::vector<Proposition> props = {{"p"}, {"q"}};
    QuantSpec sigma;
    for (auto& p : props) {
      switch (rng() % 3) {
        case 0: sigma.behavioral.props.insert(p); break;
        case 1: sigma.strongly_behavioral.props.insert(p); break;
        default: break;
      }
    }
    int k = int(rng() % h);
    size_t n = size_t{1} << (props.size() * h);
    auto decode = [&](size_t idx) {
      Assignment chi;
      for (size_t i = 0; i < props.size(); i++)
        chi.val[props[i]] = TemporalVal{uint8_t((idx >> (i * h)) & ((1u << h) - 1)), uint8_t(h)};
      return chi;
    };
    auto one_step = [&](size_t i, size_t j) {
      auto a = decode(i), b = decode(j);
      // differ on at most one prop, respecting the per-prop window
      int diffs = 0;
      bool ok = true;
      for (auto& p : props) {
        auto va = a.val[p], vb = b.val[p];
        if (va == vb) continue;
        diffs++;
        if (sigma.strongly_behavioral.contains(p)) {
          uint8_t m = uint8_t((1u << std::min(k, h)) - 1);
          if ((va.bits & m) != (vb.bits & m)) ok = false;
        } else if (sigma.behavioral.contains(p)) {
          uint8_t m = uint8_t((1u << std::min(k + 1, h)) - 1);
          if ((va.bits & m) != (vb.bits & m)) ok = false;
        } else {
          ok = false;
        }
      }
      return diffs <= 1 && ok;
    };
    // Floyd-Warshall style closure
    std::vector<std::vector<bool>> reach(n, std::vector<bool>(n, false));
    for (size_t i = 0; i < n; i++)
      for (size_t j = 0; j < n; j++) reach[i][j] = one_step(i, j);
    for (size_t m = 0; m < n; m++)
      for (size_t i = 0; i < n; i++)
        if (reach[i][m])
          for (size_t j = 0; j < n; j++)
            if (reach[m][j]) reach[i][j] = true;
    for (size_t i = 0; i < n; i++)
      for (size_t j = 0; j < n; j++)
        CHECK(reach[i][j] == spec_equiv(decode(i), decode(j), sigma, k));
  }
}

TEST_CASE("functor census at h=2 over one proposition") {
  std::set<Proposition> P = {{"q"}};
  auto vanilla = enumerate_functors(P, QuantSpec::vanilla(), 2);
  auto behavioral = enumerate_functors(P, QuantSpec::B(), 2);
  auto strong = enumerate_functors(P, QuantSpec::S(), 2);
  CHECK(vanilla.size() == 256);
  CHECK(behavioral.size() == 64);
  CHECK(strong.size() == 8);

  // enumeration agrees with the definition-based filter
  int nb = 0, ns = 0;
  for (auto& F : vanilla) {
    if (is_sigma_functor(F, QuantSpec::B())) nb++;
    if (is_sigma_functor(F, QuantSpec::S())) ns++;
    CHECK(is_sigma_functor(F, QuantSpec::vanilla()));
  }
  CHECK(nb == 64);
  CHECK(ns == 8);
  for (auto& F : behavioral) CHECK(is_sigma_functor(F, QuantSpec::B()));
  for (auto& F : strong) CHECK(is_sigma_functor(F, QuantSpec::S()));
}

TEST_CASE("example functors: negation is behavioral, lookahead is not") {
  // over P={p}, h=3
  std::vector<Proposition> dom = {{"p"}};
  int h = 3;
  auto build = [&](auto fn) {
    Functor F;
    F.domain = dom;
    F.h = h;
    F.table.resize(F.space_size());
    for (size_t i = 0; i < F.table.size(); i++) {
      TemporalVal in{uint8_t(i), uint8_t(h)};
      TemporalVal out;
      out.h = uint8_t(h);
      for (int t = 0; t < h; t++) out.set(t, fn(in, t));
      F.table[i] = out;
    }
    return F;
  };
  auto F_B = build([](TemporalVal in, int t) { return !in.at(t); });
  auto F_S = build([](TemporalVal in, int t) { return t == 0 ? true : in.at(t - 1); });
  auto F_A = build([](TemporalVal in, int t) { return in.at(t + 1); });
  CHECK(is_sigma_functor(F_B, QuantSpec::B()));
  CHECK_FALSE(is_sigma_functor(F_B, QuantSpec::S()));
  CHECK(is_sigma_functor(F_S, QuantSpec::S()));
  CHECK(is_sigma_functor(F_S, QuantSpec::B()));
  CHECK_FALSE(is_sigma_functor(F_A, QuantSpec::B()));
  CHECK_FALSE(is_sigma_functor(F_A, QuantSpec::S()));
}

TEST_CASE("dualize: choice-function images") {
  auto a11 = asg({{"p", "00"}});
  auto a12 = asg({{"p", "01"}});
  auto a21 = asg({{"p", "10"}});
  auto a22 = asg({{"p", "11"}});
  // X3 shares an assignment with X1 to keep the space small
  auto A = hyper(2, {{a11, a12}, {a21, a22}, {a11}});
  auto D = dualize(A);
  auto expect = hyper(2, {{a11, a21}, {a11, a22}, {a11, a12, a21}, {a11, a12, a22}});
  CHECK(D == expect);

  auto single = hyper(2, {{a11}});
  CHECK(dualize(single) == single);
  CHECK(dualize(hyper(2, {{a11}, {a12}})) == hyper(2, {{a11, a12}}));
}

TEST_CASE("partitions") {
  auto a = asg({{"p", "0"}});
  auto b = asg({{"p", "1"}});
  CHECK(partitions(hyper(1, {{a}})).size() == 2);
  CHECK(partitions(hyper(1, {{a}, {b}})).size() == 4);
  auto A = hyper(1, {{a}, {b}, {a, b}});
  auto ps = partitions(A);
  CHECK(ps.size() == 8);
  for (auto& [a1, a2] : ps) {
    CHECK(a1.sets.size() + a2.sets.size() == 3);
    for (auto& X : a1.sets)
      CHECK(std::count(a2.sets.begin(), a2.sets.end(), X) == 0);
  }
}

TEST_CASE("extend: constant functors over the empty domain") {
  auto A = Hyperassignment::trivial(2);
  auto E = extend(A, {"q"}, QuantSpec::S());
  REQUIRE(E.sets.size() == 4);
  for (auto& X : E.sets) CHECK(X.size() == 1);
  CHECK_THROWS_AS(extend(E, {"q"}, QuantSpec::B()), std::invalid_argument);
}

TEST_CASE("extend preserves set cardinalities") {
  auto A = hyper(2, {{asg({{"p", "00"}}), asg({{"p", "11"}})},
                     {asg({{"p", "01"}})}});
  auto E = extend(A, {"q"}, QuantSpec::B());
  for (auto& X : E.sets) CHECK((X.size() == 2 || X.size() == 1));
}

TEST_CASE("extend with strongly-behavioral dependence contains the past-copy set") {
  // A = { Asg({p}) } at h=2; sigma = <;p>; the one-instant-delayed copy functor gives
  // q(0)=1, q(t)=p(t-1)
  AsgSet all;
  for (auto bits : {"00", "01", "10", "11"}) all.insert(asg({{"p", bits}}));
  auto A = hyper(2, {all});
  QuantSpec sigma{PropSet::none(), PropSet::of({"p"})};
  auto E = extend(A, {"q"}, sigma);
  AsgSet expected;
  for (auto bits : {"00", "01", "10", "11"}) {
    std::string qb = {'1', bits[0]};
    expected.insert(asg({{"p", bits}, {"q", qb}}));
  }
  CHECK(std::count(E.sets.begin(), E.sets.end(), expected) == 1);
}

TEST_CASE("evolve golden cases") {
  auto A = Hyperassignment::trivial(2);
  Prefix forall_p{{{QuantKind::Forall, {"p"}, QuantSpec::B()}}};
  auto R = evolve(A, forall_p, Alt::EA, EvolveMode::EV);
  AsgSet all;
  for (auto bits : {"00", "01", "10", "11"}) all.insert(asg({{"p", bits}}));
  CHECK(R == hyper(2, {all}));

  CHECK(evolve(A, Prefix{}, Alt::AE, EvolveMode::NEV) == A);

  Prefix exists_q{{{QuantKind::Exists, {"q"}, QuantSpec::B()}}};
  auto R2 = evolve(A, exists_q, Alt::EA, EvolveMode::EV);
  CHECK(R2.sets.size() == 4);
  for (auto& X : R2.sets) CHECK(X.size() == 1);
}

TEST_CASE("eval_tarski") {
  auto chi = asg({{"p", "01"}});
  CHECK(eval_tarski(chi, f_leaf(ltl_next(ltl_atom("p"))), 2));
  CHECK_FALSE(eval_tarski(chi, f_leaf(ltl_globally(ltl_atom("p"))), 2));
  CHECK(eval_tarski(chi, f_leaf(ltl_future(ltl_globally(ltl_atom("p")))), 2));

  // E q. A p. (p <-> X q) is unsatisfiable under Tarski semantics
  auto f = parse("E q. A p. (p <-> X q)");
  CHECK_FALSE(eval_tarski(Assignment{}, f, 2));
  // but A p. E q. (p <-> X q) is satisfiable
  CHECK(eval_tarski(Assignment{}, parse("A p. E q. (p <-> X q)"), 2));

  CHECK_THROWS_AS(eval_tarski(Assignment{}, f_leaf(ltl_atom("z")), 2),
                  std::invalid_argument);
}

TEST_CASE("eval_alternating: behavioral coordination sentences") {
  auto A = Hyperassignment::trivial(2);
  CHECK(eval_alternating(A, parse("E q:B. A p:B. (p <-> X q)"), Alt::AE));
  CHECK(eval_alternating(A, parse("A p:B. E q:S. (p <-> X q)"), Alt::AE));
  CHECK(eval_alternating(A, parse("E q:B. A p:B. (p <-> X q)"), Alt::EA));
  // vanilla variant is unsatisfiable
  CHECK_FALSE(eval_alternating(A, parse("E q. A p. (p <-> X q)"), Alt::AE));
}

TEST_CASE("eval_alternating: LTL base case") {
  auto sat = asg({{"p", "11"}});
  auto unsat = asg({{"p", "00"}});
  auto A = hyper(2, {{sat, unsat}, {sat}});
  auto gp = f_leaf(ltl_globally(ltl_atom("p")));
  CHECK(eval_alternating(A, gp, Alt::EA));        // {sat} is all-satisfying
  CHECK(eval_alternating(A, gp, Alt::AE));        // every set has a satisfying element
  auto B = hyper(2, {{unsat}});
  CHECK_FALSE(eval_alternating(B, gp, Alt::EA));
  CHECK_FALSE(eval_alternating(B, gp, Alt::AE));
}

TEST_CASE("information leak via quantification (h=2, matrix q <-> X p)") {
  auto A = Hyperassignment::trivial(2);
  auto v1 = eval_alternating(A, parse("A p. E u. E q. (q <-> X p)"), Alt::AE);
  auto v2 = eval_alternating(A, parse("A p. E q. (q <-> X p)"), Alt::AE);
  CHECK(v1 == v2);
  auto v3 = eval_alternating(A, parse("A p. E q:B. (q <-> X p)"), Alt::AE);
  auto v4 = eval_alternating(A, parse("A p. E u:B. E q:B. (q <-> X p)"), Alt::AE);
  CHECK(v3 == v4);
  CHECK(v2 != v3);  // vanilla sees the future, behavioral does not
}

TEST_CASE("refines") {
  auto a = asg({{"p", "0"}});
  auto b = asg({{"p", "1"}});
  auto A1 = hyper(1, {{a}});
  auto A2 = hyper(1, {{a}, {b}});
  CHECK(refines(A1, A2));  // subset implies refinement
  CHECK(refines(hyper(1, {{a, b}}), hyper(1, {{a}})));
  CHECK(refines(A2, A2));
  CHECK_FALSE(refines(hyper(1, {{b}}), hyper(1, {{a}})));
}

TEST_CASE("dump format") {
  auto A = hyper(2, {{asg({{"p", "01"}, {"q", "11"}})}});
  CHECK(dump(A) == "{ p=01,q=11 }\n");
}
