#include "gfgq/models.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <queue>
#include <sstream>

namespace gfgq {

KripkeStructure parse_kripke(const std::string& text) {
  std::istringstream is(text);
  std::string line;
  bool seen_header = false;
  std::set<Proposition> aps;
  std::string init_name;
  std::vector<std::pair<std::string, std::vector<std::string>>> states;
  std::vector<std::pair<std::string, std::string>> edges;

  while (std::getline(is, line)) {
    std::istringstream ls(line);
    std::string tok;
    if (!(ls >> tok)) continue;
    if (tok == "kripke") {
      seen_header = true;
    } else if (tok == "aps:") {
      std::string p;
      while (ls >> p) aps.insert({p});
    } else if (tok == "init:") {
      if (!(ls >> init_name)) throw KripkeParseError("init: needs a state name");
    } else if (tok == "state") {
      std::string name, rest;
      if (!(ls >> name)) throw KripkeParseError("state needs a name");
      std::getline(ls, rest);
      size_t a = rest.find('{'), b = rest.find('}');
      if (a == std::string::npos || b == std::string::npos || b < a)
        throw KripkeParseError("state " + name + " needs a {label}");
      std::istringstream ps(rest.substr(a + 1, b - a - 1));
      std::vector<std::string> lbl;
      std::string p;
      while (ps >> p) lbl.push_back(p);
      states.push_back({name, lbl});
    } else if (tok == "edge") {
      std::string from, to;
      if (!(ls >> from >> to)) throw KripkeParseError("edge needs two states");
      edges.push_back({from, to});
    } else {
      throw KripkeParseError("unknown directive: " + tok);
    }
  }
  if (!seen_header) throw KripkeParseError("missing kripke header");
  if (init_name.empty()) throw KripkeParseError("missing init");
  if (states.empty()) throw KripkeParseError("no states");

  KripkeStructure K;
  K.ab = Alphabet::over(aps);
  std::map<std::string, int> id;
  for (auto& [name, lbl] : states) {
    if (id.count(name)) throw KripkeParseError("duplicate state " + name);
    id[name] = int(K.state_names.size());
    K.state_names.push_back(name);
    Letter v = 0;
    for (auto& p : lbl) {
      if (!aps.count({p}))
        throw KripkeParseError("label uses undeclared proposition " + p);
      v |= Letter(1) << K.ab.index_of({p});
    }
    K.label.push_back(v);
  }
  if (!id.count(init_name))
    throw KripkeParseError("unknown initial state " + init_name);
  K.init = id[init_name];
  K.succ.resize(K.state_names.size());
  for (auto& [from, to] : edges) {
    if (!id.count(from)) throw KripkeParseError("unknown state " + from);
    if (!id.count(to)) throw KripkeParseError("unknown state " + to);
    K.succ[size_t(id[from])].push_back(id[to]);
  }
  for (size_t s = 0; s < K.succ.size(); s++)
    if (K.succ[s].empty())
      throw KripkeParseError("sink state " + K.state_names[s]);
  return K;
}

std::pair<ParityAutomaton, ParityAutomaton> trace_automata(
    const KripkeStructure& K, size_t subset_budget) {
  // deterministic tracker: subsets of K-states consistent with the prefix,
  // plus a "pre" start (nothing read) and an absorbing failure state
  using Subset = std::vector<int>;
  std::map<Subset, int> ids;
  std::vector<Subset> subsets;
  auto intern = [&](const Subset& s) {
    auto [it, fresh] = ids.emplace(s, int(subsets.size()));
    if (fresh) {
      subsets.push_back(s);
      if (subsets.size() > subset_budget)
        throw GuardError("trace tracker exceeds subset budget");
    }
    return it->second;
  };

  ParityAutomaton D;
  D.ab = K.ab;
  int pre = intern({-2});   // nothing read yet
  int fail = intern({-1});  // prefix deviated from every trace
  D.initial = pre;
  for (size_t q = 0; q < subsets.size(); q++) {
    D.delta.push_back(std::vector<int>(K.ab.size()));
    for (Letter v = 0; v < Letter(K.ab.size()); v++) {
      int target;
      if (subsets[q] == Subset{-1}) {
        target = fail;
      } else if (subsets[q] == Subset{-2}) {
        target = v == K.label[size_t(K.init)] ? intern({K.init}) : fail;
      } else {
        Subset next;
        for (int s : subsets[q])
          for (int s2 : K.succ[size_t(s)])
            if (K.label[size_t(s2)] == v) next.push_back(s2);
        std::sort(next.begin(), next.end());
        next.erase(std::unique(next.begin(), next.end()), next.end());
        target = next.empty() ? fail : intern(next);
      }
      D.delta[q][v] = target;
    }
  }
  D.num_states = int(subsets.size());

  // L(K) is a safety language: accept iff the failure state is never reached
  ParityAutomaton lang = D, co = D;
  lang.priority.assign(subsets.size(), 2);
  lang.priority[size_t(fail)] = 1;
  co.priority.assign(subsets.size(), 1);
  co.priority[size_t(fail)] = 2;
  return {lang, co};
}

bool is_trace(const KripkeStructure& K, const LassoWord& w) {
  if (w.at(0) != K.label[size_t(K.init)]) return false;
  size_t total = w.total();
  auto next_pos = [&](size_t t) { return t + 1 < total ? t + 1 : w.stem.size(); };
  // product reachability: an infinite matching path exists iff the reachable
  // product graph from (init, 0) has no dead end (every state is sinkless in
  // K, but labels must keep matching) — equivalently a cycle is reachable
  size_t np = size_t(K.num_states()) * total;
  auto pid = [&](int s, size_t t) { return size_t(s) * total + t; };
  std::vector<bool> reach(np, false);
  std::queue<size_t> bfs;
  reach[pid(K.init, 0)] = true;
  bfs.push(pid(K.init, 0));
  std::vector<std::vector<size_t>> succs(np);
  while (!bfs.empty()) {
    size_t x = bfs.front();
    bfs.pop();
    int s = int(x / total);
    size_t t = x % total;
    for (int s2 : K.succ[size_t(s)])
      if (K.label[size_t(s2)] == w.at(next_pos(t))) {
        size_t y = pid(s2, next_pos(t));
        succs[x].push_back(y);
        if (!reach[y]) {
          reach[y] = true;
          bfs.push(y);
        }
      }
  }
  // any node on or reaching a cycle yields an infinite path; since the graph
  // is finite, an infinite path exists iff some reachable node lies on a cycle
  std::function<bool(size_t, std::vector<int>&)> on_cycle =
      [&](size_t x, std::vector<int>& color) {
        color[x] = 1;
        for (size_t y : succs[x]) {
          if (color[y] == 1) return true;
          if (color[y] == 0 && on_cycle(y, color)) return true;
        }
        color[x] = 2;
        return false;
      };
  std::vector<int> color(np, 0);
  return on_cycle(pid(K.init, 0), color);
}

}  // namespace gfgq
