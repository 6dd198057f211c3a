#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <functional>
#include <random>

#include "gfgq/decision.hpp"
#include "gfgq/hyper.hpp"

using namespace gfgq;

namespace {

struct Gen {
  std::mt19937 rng;
  explicit Gen(uint32_t seed) : rng(seed) {}
  int pick(int n) { return int(rng() % uint32_t(n)); }

  Prefix all_b_prefix(int n) {
    Prefix p;
    for (int i = 0; i < n; i++)
      p.quantifiers.push_back({pick(2) ? QuantKind::Exists : QuantKind::Forall,
                               {"a" + std::to_string(i)}, QuantSpec::B()});
    return p;
  }

  LtlPtr matrix(const std::vector<std::string>& props, int depth) {
    if (depth == 0 || pick(4) == 0) {
      switch (pick(5)) {
        case 0: return ltl_true();
        case 1: return ltl_false();
        default: return ltl_atom(props[size_t(pick(int(props.size())))]);
      }
    }
    switch (pick(7)) {
      case 0: return ltl_not(matrix(props, depth - 1));
      case 1: return ltl_and(matrix(props, depth - 1), matrix(props, depth - 1));
      case 2: return ltl_or(matrix(props, depth - 1), matrix(props, depth - 1));
      case 3: return ltl_next(matrix(props, depth - 1));
      case 4: return ltl_globally(matrix(props, depth - 1));
      case 5: return ltl_future(matrix(props, depth - 1));
      default: return ltl_until(matrix(props, depth - 1), matrix(props, depth - 1));
    }
  }

  // boolean combinations of literals and X-literals: the horizon-2 oracle is
  // exact on these
  LtlPtr x_bounded(const std::vector<std::string>& props, int depth) {
    if (depth == 0 || pick(3) == 0) {
      LtlPtr a = ltl_atom(props[size_t(pick(int(props.size())))]);
      if (pick(2)) a = ltl_next(a);
      return pick(2) ? a : ltl_not(a);
    }
    switch (pick(3)) {
      case 0: return ltl_not(x_bounded(props, depth - 1));
      case 1:
        return ltl_and(x_bounded(props, depth - 1), x_bounded(props, depth - 1));
      default:
        return ltl_or(x_bounded(props, depth - 1), x_bounded(props, depth - 1));
    }
  }

  FormulaPtr sentence(int max_quants, int depth, bool xbounded) {
    int n = 1 + pick(max_quants);
    Prefix p = all_b_prefix(n);
    std::vector<std::string> props;
    for (auto& q : p.quantifiers) props.push_back(q.prop.name);
    LtlPtr m = xbounded ? x_bounded(props, depth) : matrix(props, depth);
    return from_prenex(p, m);
  }

  LassoWord lasso(const Alphabet& ab, int max_stem = 4, int max_loop = 4) {
    LassoWord w;
    int ns = pick(max_stem + 1), nl = 1 + pick(max_loop);
    for (int i = 0; i < ns; i++) w.stem.push_back(Letter(pick(int(ab.size()))));
    for (int i = 0; i < nl; i++) w.loop.push_back(Letter(pick(int(ab.size()))));
    return w;
  }
};

std::vector<std::string> prop_order(const Prefix& p) {
  std::vector<std::string> v;
  for (auto& q : p.quantifiers) v.push_back(q.prop.name);
  return v;
}

// run the transducer for `steps` rounds against an explicit adversary input
std::vector<Letter> run_transducer(const Transducer& t,
                                   const std::vector<Letter>& inputs) {
  std::vector<Letter> outs;
  int s = t.initial;
  for (Letter u : inputs) {
    outs.push_back(t.out[size_t(s)][u]);
    s = t.delta[size_t(s)][u];
  }
  return outs;
}

const char* kSemVanilla =
    "A p. E q. ((!p & X (G p | G !p)) -> ((G q | G !q) & (q <-> X p)))";
const char* kSemBehavioral =
    "A p:B. E q:B. ((!p & X (G p | G !p)) -> ((G q | G !q) & (q <-> X p)))";

}  // namespace

TEST_CASE("schedule: canonical forms return to the source order") {
  // forall p. exists q r. forall s. exists t
  Prefix p;
  for (auto& [k, name] : std::vector<std::pair<QuantKind, std::string>>{
           {QuantKind::Forall, "p"},
           {QuantKind::Exists, "q"},
           {QuantKind::Exists, "r"},
           {QuantKind::Forall, "s"},
           {QuantKind::Exists, "t"}})
    p.quantifiers.push_back({k, {name}, QuantSpec::B()});
  CHECK(prop_order(schedule_prefix(canonize(p, CanonTarget::EA))) ==
        prop_order(p));
  CHECK(prop_order(schedule_prefix(canonize(p, CanonTarget::AE))) ==
        prop_order(p));
  CHECK(prop_order(schedule_prefix(p)) == prop_order(p));
}

TEST_CASE("schedule: rejects vanilla and cyclic dependencies") {
  Prefix vanilla;
  vanilla.quantifiers.push_back({QuantKind::Exists, {"q"}, QuantSpec::vanilla()});
  vanilla.quantifiers.push_back({QuantKind::Forall, {"p"}, QuantSpec::vanilla()});
  CHECK_THROWS_AS(schedule_prefix(vanilla), std::invalid_argument);

  Prefix cyc;
  cyc.quantifiers.push_back({QuantKind::Forall, {"p"}, QuantSpec::S()});
  cyc.quantifiers.push_back({QuantKind::Exists, {"q"}, QuantSpec::S()});
  CHECK_THROWS_AS(schedule_prefix(cyc), std::invalid_argument);
}

TEST_CASE("golden verdicts") {
  CHECK_FALSE(sat_vanilla(parse("E q. A p. (p <-> X q)")).yes);
  CHECK(sat_behavioral(parse("E q:B. A p:B. (p <-> X q)")).yes);
  CHECK(sat_behavioral(parse("A p:B. E q:S. (p <-> X q)")).yes);
  CHECK(sat_vanilla(parse(kSemVanilla)).yes);
  CHECK_FALSE(sat_behavioral(parse(kSemBehavioral)).yes);
  CHECK(sat_vanilla(parse("A x. E y. G (y <-> X x)")).yes);
  CHECK_FALSE(sat_behavioral(parse("A x:B. E y:B. G (y <-> X x)")).yes);
}

TEST_CASE("verdict report shape") {
  auto v = sat_behavioral(parse("E q:B. G q"));
  auto r = v.report();
  CHECK(r.find("answer=YES") != std::string::npos);
  CHECK(r.find("mode=sat_behavioral") != std::string::npos);
  CHECK(r.find("game_positions=") != std::string::npos);
  CHECK(r.find("millis=") != std::string::npos);
}

TEST_CASE("input validation") {
  CHECK_THROWS_AS(sat_behavioral(parse("E q:B. (q & p)")), std::invalid_argument);
  CHECK_THROWS_AS(sat_vanilla(parse("E q:B. G q")), std::invalid_argument);
}

TEST_CASE("canonical forms preserve satisfiability end to end") {
  Gen g(41);
  for (int it = 0; it < 20; it++) {
    auto f = g.sentence(4, 2, false);
    auto pv = to_prenex(f);
    bool base = sat_behavioral(f).yes;
    bool ea = sat_behavioral(
                  from_prenex(canonize(pv->prefix, CanonTarget::EA), pv->matrix))
                  .yes;
    bool ae = sat_behavioral(
                  from_prenex(canonize(pv->prefix, CanonTarget::AE), pv->matrix))
                  .yes;
    CHECK(base == ea);
    CHECK(base == ae);
  }
}

TEST_CASE("negation determinacy") {
  Gen g(43);
  for (int it = 0; it < 30; it++) {
    auto f = g.sentence(3, 2, false);
    bool pos = sat_behavioral(f).yes;
    bool neg = sat_behavioral(negate_prenex(f)).yes;
    CHECK(pos != neg);
  }
}

TEST_CASE("game verdicts agree with the alternating oracle at horizon 2") {
  Gen g(47);
  int done = 0, attempts = 0;
  while (done < 20) {
    REQUIRE(++attempts < 400);
    auto f = g.sentence(3, 2, true);
    auto pv = to_prenex(f);
    if (!is_x_bounded(pv->matrix, 2)) continue;
    bool game = sat_behavioral(f).yes;
    try {
      bool oracle = eval_alternating(Hyperassignment::trivial(2), f, Alt::AE);
      CHECK(game == oracle);
      done++;
    } catch (const GuardError&) {
      continue;
    }
  }
}

TEST_CASE("witness: constant choice") {
  auto t = extract_witness(parse("E q:B. G q"));
  CHECK(t.in_ab.props.empty());
  CHECK(t.out_ab.props.size() == 1);
  int s = t.initial;
  for (int k = 0; k < 10; k++) {
    CHECK(t.out[size_t(s)][0] == 1);  // q = true every round
    s = t.delta[size_t(s)][0];
  }
  CHECK_THROWS_AS(extract_witness(parse("E q:B. (q & !q)")), std::logic_error);
}

TEST_CASE("witness: one-instant-in-the-past copy") {
  auto f = parse("A p:B. E q:S. (p <-> X q)");
  auto t = extract_witness(f);
  Gen g(53);
  for (int it = 0; it < 50; it++) {
    std::vector<Letter> in;
    for (int k = 0; k < 8; k++) in.push_back(Letter(g.pick(2)));
    auto out = run_transducer(t, in);
    for (size_t k = 1; k < in.size(); k++)
      CHECK(out[k] == in[k - 1]);  // q(t) = p(t-1), q(0) unconstrained
  }
}

TEST_CASE("witness simulation on random adversaries") {
  auto f = parse("E q:B. A p:B. (p <-> X q)");
  auto t = extract_witness(f);
  Gen g(59);
  for (int it = 0; it < 200; it++)
    CHECK(simulate_witness(t, f, g.lasso(t.in_ab)));

  // a corrupted output must be caught on some adversary
  Transducer bad = t;
  // corrupt a constrained output: q in round 1 after p(0) = 0
  bad.out[size_t(bad.delta[size_t(bad.initial)][0])][0] ^= 1;
  bool refuted = false;
  for (int it = 0; it < 200 && !refuted; it++)
    refuted = !simulate_witness(bad, f, g.lasso(bad.in_ab));
  CHECK(refuted);
}

TEST_CASE("model checking scenarios and duality") {
  auto K1 = parse_kripke("kripke\naps: p\ninit: s\nstate s {p}\nedge s s\n");
  CHECK(model_check(K1, parse("G p"), McMode::Universal).yes);
  CHECK(model_check(K1, parse("E q:B. G (q <-> p)"), McMode::Universal).yes);

  auto K2 = parse_kripke(
      "kripke\naps: p\ninit: a\nstate a {p}\nstate b {}\n"
      "edge a a\nedge a b\nedge b b\n");
  CHECK_FALSE(model_check(K2, parse("G p"), McMode::Universal).yes);
  CHECK(model_check(K2, parse("G p"), McMode::Existential).yes);

  Gen g(61);
  for (int it = 0; it < 30; it++) {
    auto f = from_prenex(g.all_b_prefix(g.pick(2) + 1),
                         g.matrix({"p", "a0"}, 2));
    if (!free_props(f).count({"p"})) continue;
    bool ex = model_check(K2, f, McMode::Existential).yes;
    bool dual = !model_check(K2, negate_prenex(f), McMode::Universal).yes;
    CHECK(ex == dual);
  }
}

TEST_CASE("quantifier-free model checking matches lasso-trace enumeration") {
  Gen g(67);
  for (int it = 0; it < 15; it++) {
    // random sinkless structure over one proposition
    KripkeStructure K;
    K.ab = Alphabet::over({{"p"}});
    int n = 1 + g.pick(3);
    for (int s = 0; s < n; s++) {
      K.state_names.push_back("s" + std::to_string(s));
      K.label.push_back(Letter(g.pick(2)));
      std::vector<int> out;
      for (int u = 0; u < n; u++)
        if (g.pick(2)) out.push_back(u);
      if (out.empty()) out.push_back(g.pick(n));
      K.succ.push_back(out);
    }
    K.init = g.pick(n);

    auto m = g.matrix({"p"}, 2);
    bool verdict = model_check(K, f_leaf(m), McMode::Universal).yes;
    bool all_traces = true;
    for (int stem = 0; stem <= 3; stem++)
      for (int loop = 1; loop + stem <= 6; loop++)
        for (uint32_t bits = 0; bits < (1u << (stem + loop)); bits++) {
          LassoWord w;
          for (int i = 0; i < stem; i++) w.stem.push_back((bits >> i) & 1);
          for (int i = 0; i < loop; i++) w.loop.push_back((bits >> (stem + i)) & 1);
          if (!is_trace(K, w)) continue;
          if (!eval_ltl_lasso(m, K.ab, w)) all_traces = false;
        }
    CHECK(verdict == all_traces);
  }
}
