#include "gfgq/solver.hpp"

#include <algorithm>
#include <functional>
#include <sstream>

namespace gfgq {

namespace {

struct Zielonka {
  const Arena& A;
  const std::vector<int>& pri;
  std::vector<bool>& win;    // true = Eloise
  std::vector<int>& strat;
  std::vector<std::vector<int>> preds;

  Zielonka(const ParityGame& g, std::vector<bool>& w, std::vector<int>& s)
      : A(g.arena), pri(g.priority), win(w), strat(s) {
    preds.resize(size_t(A.num_positions));
    for (int v = 0; v < A.num_positions; v++)
      for (int u : A.moves[size_t(v)]) preds[size_t(u)].push_back(v);
  }

  // attractor of `targets` for `eloise` within `alive`; fills `strat` for the
  // attracting player's positions pulled in (not for the targets themselves)
  std::vector<char> attractor(const std::vector<char>& alive,
                              std::vector<char> in, bool eloise) {
    std::vector<int> live_deg(size_t(A.num_positions), 0);
    std::vector<int> queue;
    for (int v = 0; v < A.num_positions; v++) {
      if (!alive[size_t(v)]) continue;
      for (int u : A.moves[size_t(v)])
        if (alive[size_t(u)]) live_deg[size_t(v)]++;
      if (in[size_t(v)]) queue.push_back(v);
    }
    for (size_t i = 0; i < queue.size(); i++) {
      int u = queue[i];
      for (int v : preds[size_t(u)]) {
        if (!alive[size_t(v)] || in[size_t(v)]) continue;
        if (A.eloise[size_t(v)] == eloise) {
          in[size_t(v)] = 1;
          strat[size_t(v)] = u;
          queue.push_back(v);
        } else if (--live_deg[size_t(v)] == 0) {
          in[size_t(v)] = 1;
          queue.push_back(v);
        }
      }
    }
    return in;
  }

  void run(std::vector<char> alive) {
    int d = -1;
    for (int v = 0; v < A.num_positions; v++)
      if (alive[size_t(v)]) d = std::max(d, pri[size_t(v)]);
    if (d < 0) return;
    bool player = d % 2 == 0;

    std::vector<char> targets(size_t(A.num_positions), 0);
    for (int v = 0; v < A.num_positions; v++)
      if (alive[size_t(v)] && pri[size_t(v)] == d) targets[size_t(v)] = 1;
    auto att = attractor(alive, targets, player);

    std::vector<char> rest = alive;
    for (int v = 0; v < A.num_positions; v++)
      if (att[size_t(v)]) rest[size_t(v)] = 0;
    run(rest);

    bool opponent_present = false;
    for (int v = 0; v < A.num_positions; v++)
      if (rest[size_t(v)] && win[size_t(v)] != player) opponent_present = true;

    if (!opponent_present) {
      for (int v = 0; v < A.num_positions; v++) {
        if (!att[size_t(v)]) continue;
        win[size_t(v)] = player;
        if (targets[size_t(v)] && A.eloise[size_t(v)] == player) {
          // any move staying inside the (fully won) subgame
          for (int u : A.moves[size_t(v)])
            if (alive[size_t(u)]) {
              strat[size_t(v)] = u;
              break;
            }
        }
      }
      return;
    }

    std::vector<char> opp(size_t(A.num_positions), 0);
    for (int v = 0; v < A.num_positions; v++)
      if (rest[size_t(v)] && win[size_t(v)] != player) opp[size_t(v)] = 1;
    auto oatt = attractor(alive, opp, !player);
    std::vector<char> rest2 = alive;
    for (int v = 0; v < A.num_positions; v++)
      if (oatt[size_t(v)]) rest2[size_t(v)] = 0;
    run(rest2);
    for (int v = 0; v < A.num_positions; v++)
      if (oatt[size_t(v)]) win[size_t(v)] = !player;
  }
};

// does the restricted graph (one player's choices fixed) contain a cycle,
// reachable from v, whose maximal priority has the given parity?
struct CycleAnalysis {
  int n;
  const std::vector<std::vector<int>>& succ;
  const std::vector<int>& pri;

  std::vector<bool> bad_for(bool eloise_bad) const {
    // nodes on a cycle whose maximal priority is odd (eloise_bad) / even
    std::vector<bool> on_bad(size_t(n), false);
    for (int d = 0; d <= *std::max_element(pri.begin(), pri.end()); d++) {
      if ((d % 2 == 0) == eloise_bad) continue;
      // cycles through a priority-d node using only priorities <= d
      auto ok = std::vector<bool>(size_t(n));
      for (int v = 0; v < n; v++) ok[size_t(v)] = pri[size_t(v)] <= d;
      // reach[u][w] within the subgraph, >= 1 step
      std::vector<std::vector<bool>> reach(size_t(n),
                                           std::vector<bool>(size_t(n), false));
      for (int v = 0; v < n; v++)
        if (ok[size_t(v)])
          for (int u : succ[size_t(v)])
            if (ok[size_t(u)]) reach[size_t(v)][size_t(u)] = true;
      for (int k = 0; k < n; k++)
        for (int i = 0; i < n; i++)
          for (int j = 0; j < n; j++)
            if (reach[size_t(i)][size_t(k)] && reach[size_t(k)][size_t(j)])
              reach[size_t(i)][size_t(j)] = true;
      for (int v = 0; v < n; v++)
        if (ok[size_t(v)] && pri[size_t(v)] == d && reach[size_t(v)][size_t(v)])
          for (int u = 0; u < n; u++)
            if (u == v || (reach[size_t(v)][size_t(u)] && reach[size_t(u)][size_t(v)]))
              on_bad[size_t(u)] = true;
    }
    return on_bad;
  }
};

// wins[v] for `eloise`: some positional strategy of that player avoids, from
// v, every reachable cycle of hostile parity
void brute_player(const ParityGame& g, bool eloise, size_t max_strategies,
                  std::vector<bool>& wins, std::vector<int>& strat) {
  int n = g.arena.num_positions;
  std::vector<int> owned;
  size_t total = 1;
  for (int v = 0; v < n; v++)
    if (g.arena.eloise[size_t(v)] == eloise) {
      owned.push_back(v);
      total *= g.arena.moves[size_t(v)].size();
      if (total > max_strategies)
        throw GuardError("strategy enumeration exceeds guard");
    }
  std::vector<size_t> choice(owned.size(), 0);
  while (true) {
    auto succ = std::vector<std::vector<int>>(size_t(n));
    for (int v = 0; v < n; v++) succ[size_t(v)] = g.arena.moves[size_t(v)];
    for (size_t i = 0; i < owned.size(); i++)
      succ[size_t(owned[i])] = {g.arena.moves[size_t(owned[i])][choice[i]]};
    auto bad = CycleAnalysis{n, succ, g.priority}.bad_for(eloise);
    // fixpoint: v loses if it is on a bad cycle or can be driven to one
    std::vector<bool> loses(size_t(n), false);
    bool changed = true;
    for (int v = 0; v < n; v++) loses[size_t(v)] = bad[size_t(v)];
    while (changed) {
      changed = false;
      for (int v = 0; v < n; v++) {
        if (loses[size_t(v)]) continue;
        for (int u : succ[size_t(v)])
          if (loses[size_t(u)]) {
            loses[size_t(v)] = true;
            changed = true;
          }
      }
    }
    for (int v = 0; v < n; v++)
      if (!loses[size_t(v)] && !wins[size_t(v)]) {
        wins[size_t(v)] = true;
        for (size_t i = 0; i < owned.size(); i++)
          if (!loses[size_t(owned[i])] && strat[size_t(owned[i])] < 0)
            strat[size_t(owned[i])] =
                g.arena.moves[size_t(owned[i])][choice[i]];
      }
    // next strategy
    size_t i = 0;
    for (; i < owned.size(); i++) {
      if (++choice[i] < g.arena.moves[size_t(owned[i])].size()) break;
      choice[i] = 0;
    }
    if (i == owned.size()) break;
    if (owned.empty()) break;
  }
}

}  // namespace

Solution solve(const ParityGame& g) {
  Solution s;
  s.eloise_wins.assign(size_t(g.arena.num_positions), false);
  s.strategy.assign(size_t(g.arena.num_positions), -1);
  std::vector<bool> win(size_t(g.arena.num_positions), false);
  Zielonka z(g, win, s.strategy);
  z.run(std::vector<char>(size_t(g.arena.num_positions), 1));
  s.eloise_wins = win;
  // strategies recorded for losing-side positions along the way are stale
  for (int v = 0; v < g.arena.num_positions; v++)
    if (g.arena.eloise[size_t(v)] != s.eloise_wins[size_t(v)])
      s.strategy[size_t(v)] = -1;
  return s;
}

Solution brute_solve(const ParityGame& g, size_t max_strategies) {
  if (g.arena.num_positions > 12)
    throw GuardError("brute_solve limited to 12 positions");
  Solution s;
  s.eloise_wins.assign(size_t(g.arena.num_positions), false);
  s.strategy.assign(size_t(g.arena.num_positions), -1);
  std::vector<bool> ewins(size_t(g.arena.num_positions), false);
  std::vector<bool> awins(size_t(g.arena.num_positions), false);
  brute_player(g, true, max_strategies, ewins, s.strategy);
  brute_player(g, false, max_strategies, awins, s.strategy);
  for (int v = 0; v < g.arena.num_positions; v++) {
    if (ewins[size_t(v)] == awins[size_t(v)])
      throw std::logic_error("brute_solve: winner sets do not partition");
    s.eloise_wins[size_t(v)] = ewins[size_t(v)];
    if (g.arena.eloise[size_t(v)] != s.eloise_wins[size_t(v)])
      s.strategy[size_t(v)] = -1;
  }
  return s;
}

std::string dump(const Solution& s) {
  std::ostringstream os;
  for (size_t v = 0; v < s.eloise_wins.size(); v++) {
    os << v << " " << (s.eloise_wins[v] ? "E" : "A");
    if (s.strategy[v] >= 0) os << " -> " << s.strategy[v];
    os << "\n";
  }
  return os.str();
}

}  // namespace gfgq
