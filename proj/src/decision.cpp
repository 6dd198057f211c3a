#include "gfgq/decision.hpp"

#include <algorithm>
#include <chrono>
#include <sstream>

namespace gfgq {

namespace {

using Clock = std::chrono::steady_clock;

long long millis_since(Clock::time_point t0) {
  return std::chrono::duration_cast<std::chrono::milliseconds>(Clock::now() - t0)
      .count();
}

const char* mode_name(DecisionMode m) {
  switch (m) {
    case DecisionMode::SatBehavioral: return "sat_behavioral";
    case DecisionMode::SatVanilla: return "sat_vanilla";
    case DecisionMode::McUniversal: return "mc_universal";
    default: return "mc_existential";
  }
}

PrenexView require_prenex(const FormulaPtr& f) {
  auto pv = to_prenex(f);
  if (!pv) throw std::invalid_argument("formula is not prenex");
  return *pv;
}

void require_closed(const FormulaPtr& f) {
  if (!free_props(f).empty())
    throw std::invalid_argument("formula is not closed");
}

// game pipeline shared by satisfiability, witness extraction and (indirectly)
// model checking
struct SatPipeline {
  Prefix scheduled;
  QuantArena qa;
  ParityAutomaton D;
  ParityGame game;
  Solution sol;
  bool yes;

  SatPipeline(const FormulaPtr& f, size_t budget) {
    require_closed(f);
    auto pv = require_prenex(f);
    scheduled = schedule_prefix(pv.prefix);
    qa = build_arena(scheduled);
    D = determinize(ltl_to_nba(expand_core(pv.matrix), scheduled.props()),
                    budget);
    game = build_sat_game(qa, D);
    sol = solve(game);
    yes = sol.eloise_wins[size_t(game.arena.initial)];
  }
};

int arena_depth(const QuantArena& qa, int pos) {
  int d = 0;
  while (qa.position_id(d + 1, 0) <= pos && d < qa.full_depth()) d++;
  return d;
}

// per existential quantifier: the single universal proposition it watches
// strictly behaviorally, if unique (echo-default candidate)
std::vector<std::optional<Proposition>> watch_props(const SatPipeline& pl) {
  std::set<Proposition> uni;
  for (auto& q : pl.scheduled.quantifiers)
    if (q.kind == QuantKind::Forall) uni.insert(q.prop);
  std::vector<std::optional<Proposition>> w;
  for (auto& q : pl.scheduled.quantifiers) {
    std::optional<Proposition> p;
    if (q.kind == QuantKind::Exists) {
      std::vector<Proposition> watched;
      for (auto& up : uni)
        if (q.spec.strongly_behavioral.contains(up)) watched.push_back(up);
      if (watched.size() == 1) p = watched[0];
    }
    w.push_back(p);
  }
  return w;
}

// transducer states are (round-start game position, previous round's input);
// uprev < 0 in the first round or when echo defaults are disabled
Transducer build_transducer(const SatPipeline& pl, bool echo_defaults) {
  std::set<Proposition> uni, exi;
  for (auto& q : pl.scheduled.quantifiers)
    (q.kind == QuantKind::Forall ? uni : exi).insert(q.prop);

  Transducer t;
  t.in_ab = Alphabet::over(uni);
  t.out_ab = Alphabet::over(exi);
  size_t np = size_t(pl.qa.arena.num_positions);
  int full_base = pl.qa.position_id(pl.qa.full_depth(), 0);
  auto watch = watch_props(pl);

  std::map<std::pair<int, int>, int> state_id;
  std::vector<std::pair<int, int>> states;  // (game position, uprev)
  auto intern = [&](int gpos, int uprev) {
    auto [it, fresh] =
        state_id.emplace(std::make_pair(gpos, uprev), int(states.size()));
    if (fresh) states.push_back({gpos, uprev});
    return it->second;
  };
  t.initial = intern(pl.game.arena.initial, -1);

  for (size_t si = 0; si < states.size(); si++) {
    std::vector<int> drow(t.in_ab.size());
    std::vector<Letter> orow(t.in_ab.size());
    for (Letter u = 0; u < Letter(t.in_ab.size()); u++) {
      auto [gpos, uprev] = states[si];
      int q = int(size_t(gpos) / np);
      int pos = int(size_t(gpos) % np);
      while (pos < full_base) {
        int d = arena_depth(pl.qa, pos);
        const auto& quant = pl.scheduled.quantifiers[size_t(d)];
        uint32_t bits = uint32_t(pos) - ((uint32_t(1) << d) - 1);
        bool val;
        if (quant.kind == QuantKind::Forall) {
          val = letter_bit(u, t.in_ab.index_of(quant.prop));
        } else if (echo_defaults && uprev >= 0 && watch[size_t(d)]) {
          // don't-care default: echo the strictly-watched proposition's
          // previous value (kept only if the verifier approves the result)
          val = letter_bit(Letter(uprev), t.in_ab.index_of(*watch[size_t(d)]));
        } else {
          int nxt = pl.sol.strategy[size_t(q) * np + size_t(pos)];
          if (nxt >= 0) {
            uint32_t nbits = uint32_t(size_t(nxt) % np) -
                             ((uint32_t(1) << (d + 1)) - 1);
            val = (nbits >> d) & 1;
          } else {
            val = false;  // off the winning region: verifier will reject
          }
        }
        pos = pl.qa.position_id(d + 1, bits | (uint32_t(val) << d));
      }
      uint32_t bits = uint32_t(pos) - uint32_t(full_base);
      Letter o = 0;
      for (size_t i = 0; i < pl.scheduled.size(); i++) {
        const auto& quant = pl.scheduled.quantifiers[i];
        if (quant.kind == QuantKind::Exists && ((bits >> i) & 1))
          o |= Letter(1) << t.out_ab.index_of(quant.prop);
      }
      orow[u] = o;
      int reset = pl.game.arena.moves[size_t(q) * np + size_t(pos)][0];
      drow[u] = intern(reset, echo_defaults ? int(u) : -1);
    }
    t.delta.push_back(std::move(drow));
    t.out.push_back(std::move(orow));
  }
  t.num_states = int(states.size());
  return t;
}

// explicit verification: against every adversary input sequence the combined
// word must be accepted, i.e., every reachable cycle of the transducer x DPA
// product has an even maximal priority
bool transducer_wins(const Transducer& t, const ParityAutomaton& D) {
  size_t nd = size_t(D.num_states);
  size_t n = size_t(t.num_states) * nd;
  if (n > 4000) return false;  // fall back rather than pay a cubic blow-up
  auto combine = [&](Letter u, Letter o) {
    Letter v = 0;
    for (size_t i = 0; i < t.in_ab.props.size(); i++)
      if (letter_bit(u, int(i))) v |= Letter(1) << D.ab.index_of(t.in_ab.props[i]);
    for (size_t i = 0; i < t.out_ab.props.size(); i++)
      if (letter_bit(o, int(i))) v |= Letter(1) << D.ab.index_of(t.out_ab.props[i]);
    return v;
  };
  std::vector<std::vector<size_t>> succ(n);
  for (int s = 0; s < t.num_states; s++)
    for (size_t q = 0; q < nd; q++)
      for (Letter u = 0; u < Letter(t.in_ab.size()); u++) {
        Letter v = combine(u, t.out[size_t(s)][u]);
        succ[size_t(s) * nd + q].push_back(
            size_t(t.delta[size_t(s)][u]) * nd + size_t(D.delta[q][v]));
      }
  std::vector<bool> reach(n, false);
  std::vector<size_t> stack{size_t(t.initial) * nd + size_t(D.initial)};
  reach[stack[0]] = true;
  while (!stack.empty()) {
    size_t x = stack.back();
    stack.pop_back();
    for (size_t y : succ[x])
      if (!reach[y]) {
        reach[y] = true;
        stack.push_back(y);
      }
  }
  int maxd = *std::max_element(D.priority.begin(), D.priority.end());
  for (int d = 1; d <= maxd; d += 2) {
    // cycle through a priority-d node using only priorities <= d
    auto ok = std::vector<bool>(n, false);
    for (size_t x = 0; x < n; x++)
      ok[x] = reach[x] && D.priority[x % nd] <= d;
    std::vector<std::vector<bool>> rr(n, std::vector<bool>(n, false));
    for (size_t x = 0; x < n; x++)
      if (ok[x])
        for (size_t y : succ[x])
          if (ok[y]) rr[x][y] = true;
    for (size_t k = 0; k < n; k++)
      for (size_t i = 0; i < n; i++)
        for (size_t j = 0; j < n; j++)
          if (rr[i][k] && rr[k][j]) rr[i][j] = true;
    for (size_t x = 0; x < n; x++)
      if (ok[x] && D.priority[x % nd] == d && rr[x][x]) return false;
  }
  return true;
}

Transducer extract_from(const SatPipeline& pl) {
  if (!pl.yes) throw std::logic_error("no witness for an unsatisfiable sentence");
  auto watch = watch_props(pl);
  bool any_watch = false;
  for (auto& w : watch) any_watch = any_watch || w.has_value();
  if (any_watch) {
    Transducer cand = build_transducer(pl, true);
    if (transducer_wins(cand, pl.D)) return cand;
  }
  return build_transducer(pl, false);
}

}  // namespace

Prefix schedule_prefix(const Prefix& p) {
  size_t n = p.size();
  for (size_t j = 0; j < n; j++) {
    const auto& qj = p.quantifiers[j];
    for (size_t i = 0; i < j; i++) {
      const auto& pi = p.quantifiers[i].prop;
      if (!qj.spec.behavioral.contains(pi) &&
          !qj.spec.strongly_behavioral.contains(pi))
        throw std::invalid_argument("vanilla dependence of " + qj.prop.name +
                                    " on " + pi.name);
    }
  }
  // i must precede j whenever i is strictly behavioral on j's proposition
  std::vector<std::vector<bool>> before(n, std::vector<bool>(n, false));
  for (size_t i = 0; i < n; i++)
    for (size_t j = 0; j < n; j++)
      if (i != j &&
          p.quantifiers[i].spec.strongly_behavioral.contains(
              p.quantifiers[j].prop))
        before[i][j] = true;
  Prefix out;
  std::vector<bool> placed(n, false);
  for (size_t step = 0; step < n; step++) {
    size_t picki = n;
    for (size_t j = 0; j < n && picki == n; j++) {
      if (placed[j]) continue;
      bool ready = true;
      for (size_t i = 0; i < n; i++)
        if (!placed[i] && i != j && before[i][j]) ready = false;
      if (ready) picki = j;
    }
    if (picki == n)
      throw std::invalid_argument(
          "cyclic strict dependencies admit no round order");
    placed[picki] = true;
    out.quantifiers.push_back(p.quantifiers[picki]);
  }
  return out;
}

Verdict sat_behavioral(const FormulaPtr& f, bool want_witness, size_t budget) {
  auto t0 = Clock::now();
  SatPipeline pl(f, budget);
  Verdict v;
  v.mode = DecisionMode::SatBehavioral;
  v.yes = pl.yes;
  if (want_witness && pl.yes) v.witness = extract_from(pl);
  v.stats["automaton_states"] = pl.D.num_states;
  v.stats["game_positions"] = pl.game.arena.num_positions;
  v.stats["priorities"] =
      *std::max_element(pl.game.priority.begin(), pl.game.priority.end()) + 1;
  v.stats["millis"] = millis_since(t0);
  return v;
}

Verdict sat_vanilla(const FormulaPtr& f, size_t budget) {
  auto t0 = Clock::now();
  require_closed(f);
  auto pv = require_prenex(f);
  for (auto& q : pv.prefix.quantifiers)
    if (!q.spec.is_vanilla())
      throw std::invalid_argument("sat_vanilla requires vanilla quantifiers");
  auto A = vanilla_to_nba(f, budget);
  Verdict v;
  v.mode = DecisionMode::SatVanilla;
  v.yes = nba_nonempty(A);
  v.stats["automaton_states"] = A.num_states;
  v.stats["millis"] = millis_since(t0);
  return v;
}

Verdict model_check(const KripkeStructure& K, const FormulaPtr& f, McMode mode,
                    size_t budget) {
  auto t0 = Clock::now();
  if (mode == McMode::Existential) {
    Verdict v = model_check(K, negate_prenex(f), McMode::Universal, budget);
    v.mode = DecisionMode::McExistential;
    v.yes = !v.yes;
    v.stats["millis"] = millis_since(t0);
    return v;
  }
  auto pv = require_prenex(f);
  std::set<Proposition> kprops(K.ab.props.begin(), K.ab.props.end());
  for (auto& fp : free_props(f))
    if (!kprops.count(fp))
      throw std::invalid_argument("free proposition outside the model: " +
                                  fp.name);
  auto g = build_mc_game(K, schedule_prefix(pv.prefix), pv.matrix, budget);
  auto sol = solve(g);
  Verdict v;
  v.mode = DecisionMode::McUniversal;
  v.yes = sol.eloise_wins[size_t(g.arena.initial)];
  v.stats["game_positions"] = g.arena.num_positions;
  v.stats["priorities"] =
      *std::max_element(g.priority.begin(), g.priority.end()) + 1;
  v.stats["millis"] = millis_since(t0);
  return v;
}

Transducer extract_witness(const FormulaPtr& f, size_t budget) {
  SatPipeline pl(f, budget);
  return extract_from(pl);
}

bool simulate_witness(const Transducer& t, const FormulaPtr& f,
                      const LassoWord& adversary) {
  auto pv = require_prenex(f);
  std::set<Proposition> uni, exi, all;
  for (auto& q : pv.prefix.quantifiers) {
    (q.kind == QuantKind::Forall ? uni : exi).insert(q.prop);
    all.insert(q.prop);
  }
  if (!(t.in_ab == Alphabet::over(uni)) || !(t.out_ab == Alphabet::over(exi)))
    throw std::invalid_argument("transducer alphabets do not match the formula");

  Alphabet jab = Alphabet::over(all);
  auto combine = [&](Letter u, Letter o) {
    Letter v = 0;
    for (size_t i = 0; i < t.in_ab.props.size(); i++)
      if (letter_bit(u, int(i))) v |= Letter(1) << jab.index_of(t.in_ab.props[i]);
    for (size_t i = 0; i < t.out_ab.props.size(); i++)
      if (letter_bit(o, int(i))) v |= Letter(1) << jab.index_of(t.out_ab.props[i]);
    return v;
  };

  // the product of transducer state and adversary position is eventually
  // periodic; unroll until the pair repeats
  std::map<std::pair<int, size_t>, size_t> seen;
  std::vector<Letter> word;
  int st = t.initial;
  size_t k = 0;
  while (true) {
    auto key = std::make_pair(st, adversary.pos(k));
    auto it = seen.find(key);
    if (it != seen.end()) {
      LassoWord w;
      w.stem.assign(word.begin(), word.begin() + long(it->second));
      w.loop.assign(word.begin() + long(it->second), word.end());
      return eval_ltl_lasso(pv.matrix, jab, w);
    }
    seen.emplace(key, word.size());
    Letter u = adversary.at(k);
    word.push_back(combine(u, t.out[size_t(st)][u]));
    st = t.delta[size_t(st)][u];
    k++;
  }
}

std::string Verdict::report() const {
  std::ostringstream os;
  os << "answer=" << (yes ? "YES" : "NO") << "\n";
  os << "mode=" << mode_name(mode) << "\n";
  for (auto& [k, v] : stats) os << k << "=" << v << "\n";
  if (witness) os << "witness_states=" << witness->num_states << "\n";
  return os.str();
}

std::string dump(const Transducer& t) {
  std::ostringstream os;
  os << "inputs:";
  for (auto& p : t.in_ab.props) os << " " << p.name;
  os << "\noutputs:";
  for (auto& p : t.out_ab.props) os << " " << p.name;
  os << "\ninitial: " << t.initial << "\n";
  for (int s = 0; s < t.num_states; s++)
    for (Letter u = 0; u < Letter(t.in_ab.size()); u++)
      os << s << " " << u << " / " << t.out[size_t(s)][u] << " -> "
         << t.delta[size_t(s)][u] << "\n";
  return os.str();
}

}  // namespace gfgq
