#include "gfgq/game.hpp"

#include <sstream>

namespace gfgq {

namespace {

constexpr size_t kMaxGamePositions = 8'000'000;

}  // namespace

Letter QuantArena::letter_of(uint32_t bits) const {
  Letter v = 0;
  for (size_t i = 0; i < prefix.size(); i++)
    if ((bits >> i) & 1)
      v |= Letter(1) << ab.index_of(prefix.quantifiers[i].prop);
  return v;
}

QuantArena build_arena(const Prefix& p) {
  size_t n = p.size();
  std::set<Proposition> seen;
  for (size_t i = 0; i < n; i++) {
    const auto& qi = p.quantifiers[i];
    if (!seen.insert(qi.prop).second)
      throw std::invalid_argument("duplicate proposition in prefix: " +
                                  qi.prop.name);
    for (size_t j = 0; j < i; j++) {
      const auto& pj = p.quantifiers[j].prop;
      if (!qi.spec.behavioral.contains(pj) &&
          !qi.spec.strongly_behavioral.contains(pj))
        throw std::invalid_argument("prefix is not behavioral: " +
                                    qi.prop.name + " depends on " + pj.name);
      if (qi.spec.strongly_behavioral.contains(pj))
        throw std::invalid_argument(
            "prefix order violates a strict dependence: " + qi.prop.name +
            " must precede " + pj.name);
    }
  }
  if (n > 20) throw GuardError("quantifier prefix too long for the arena");

  QuantArena qa;
  qa.prefix = p;
  qa.ab = Alphabet::over(seen);
  Arena& A = qa.arena;
  A.num_positions = int((uint32_t(1) << (n + 1)) - 1);
  A.initial = 0;
  for (size_t d = 0; d <= n; d++) {
    bool el = d < n && p.quantifiers[d].kind == QuantKind::Exists;
    for (uint32_t b = 0; b < (uint32_t(1) << d); b++) {
      A.eloise.push_back(el);
      std::vector<int> out;
      if (d < n) {
        out.push_back(qa.position_id(int(d) + 1, b));
        out.push_back(qa.position_id(int(d) + 1, b | (uint32_t(1) << d)));
      } else {
        out.push_back(0);  // reset: round complete
      }
      A.moves.push_back(out);
      std::ostringstream name;
      name << "{";
      for (size_t i = 0; i < d; i++)
        name << (i ? " " : "") << p.quantifiers[i].prop.name << "="
             << ((b >> i) & 1);
      name << "}";
      A.names.push_back(name.str());
    }
  }
  return qa;
}

ParityGame build_sat_game(const QuantArena& qa, const ParityAutomaton& D) {
  if (!(D.ab == qa.ab))
    throw std::invalid_argument("automaton alphabet differs from Val(ap(prefix))");
  size_t np = size_t(qa.arena.num_positions);
  if (size_t(D.num_states) * np > kMaxGamePositions)
    throw GuardError("game product exceeds position guard");

  ParityGame g;
  g.arena.num_positions = int(size_t(D.num_states) * np);
  g.arena.initial = int(size_t(D.initial) * np);  // (initial state, empty)
  int full_base = qa.position_id(qa.full_depth(), 0);
  for (int q = 0; q < D.num_states; q++) {
    for (size_t pos = 0; pos < np; pos++) {
      g.arena.eloise.push_back(qa.arena.eloise[pos]);
      std::vector<int> out;
      if (int(pos) >= full_base) {
        // reset edge: the automaton consumes the valuation fixed this round
        Letter v = qa.letter_of(uint32_t(pos) - uint32_t(full_base));
        out.push_back(int(size_t(D.delta[size_t(q)][v]) * np));
      } else {
        for (int m : qa.arena.moves[pos])
          out.push_back(int(size_t(q) * np + size_t(m)));
      }
      g.arena.moves.push_back(out);
      g.arena.names.push_back("q" + std::to_string(q) + " " +
                              qa.arena.names[pos]);
      bool obs = pos == 0;
      g.observable.push_back(obs);
      g.priority.push_back(obs ? D.priority[size_t(q)] + 2 : 0);
    }
  }
  return g;
}

ParityGame build_mc_game(const KripkeStructure& K, const Prefix& p,
                         const LtlPtr& psi, size_t budget) {
  std::set<Proposition> kprops(K.ab.props.begin(), K.ab.props.end());
  std::set<Proposition> all = kprops;
  for (auto& q : p.quantifiers) {
    if (kprops.count(q.prop))
      throw std::invalid_argument("quantified proposition clashes with the model: " +
                                  q.prop.name);
    all.insert(q.prop);
  }
  for (auto& fp : ltl_props(psi))
    if (!all.count(fp))
      throw std::invalid_argument("matrix proposition outside model and prefix: " +
                                  fp.name);

  ParityAutomaton Dpsi = determinize(ltl_to_nba(expand_core(psi), all), budget);
  auto [lang, co] = trace_automata(K);
  (void)lang;
  if (size_t(Dpsi.num_states) * size_t(co.num_states) > budget)
    throw GuardError("winning-automaton product exceeds budget");

  // bit positions of the model's propositions inside the joint alphabet
  Alphabet jab = Alphabet::over(all);
  std::vector<int> kbit;
  for (auto& kp : K.ab.props) kbit.push_back(jab.index_of(kp));
  auto project = [&](Letter v) {
    Letter r = 0;
    for (size_t i = 0; i < kbit.size(); i++)
      if (letter_bit(v, kbit[i])) r |= Letter(1) << i;
    return r;
  };

  int fail = -1;
  for (int c = 0; c < co.num_states; c++)
    if (co.priority[size_t(c)] == 2) fail = c;
  int maxp = 0;
  for (int q = 0; q < Dpsi.num_states; q++)
    maxp = std::max(maxp, Dpsi.priority[size_t(q)]);
  int deviated = maxp + (maxp % 2);  // dominant even once the trace leaves K

  // union automaton: accept iff the played trace deviates from K or psi holds
  ParityAutomaton W;
  W.ab = jab;
  W.num_states = Dpsi.num_states * co.num_states;
  W.initial = Dpsi.initial * co.num_states + co.initial;
  for (int q = 0; q < Dpsi.num_states; q++)
    for (int c = 0; c < co.num_states; c++) {
      std::vector<int> row(jab.size());
      for (Letter v = 0; v < Letter(jab.size()); v++)
        row[v] = Dpsi.delta[size_t(q)][v] * co.num_states +
                 co.delta[size_t(c)][project(v)];
      W.delta.push_back(std::move(row));
      W.priority.push_back(c == fail ? deviated : Dpsi.priority[size_t(q)]);
    }

  Prefix full;
  for (auto& kp : K.ab.props)
    full.quantifiers.push_back({QuantKind::Forall, kp, QuantSpec::B()});
  for (auto& q : p.quantifiers) full.quantifiers.push_back(q);
  return build_sat_game(build_arena(full), W);
}

std::string export_dot(const ParityGame& g) {
  std::ostringstream os;
  os << "digraph game {\n";
  for (int v = 0; v < g.arena.num_positions; v++) {
    os << "  n" << v << " [shape="
       << (g.arena.eloise[size_t(v)] ? "circle" : "box") << ", label=\""
       << (v < int(g.arena.names.size()) ? g.arena.names[size_t(v)] : "")
       << "\\n" << g.priority[size_t(v)] << "\"];\n";
  }
  for (int v = 0; v < g.arena.num_positions; v++)
    for (int w : g.arena.moves[size_t(v)])
      os << "  n" << v << " -> n" << w << ";\n";
  os << "}\n";
  return os.str();
}

}  // namespace gfgq
