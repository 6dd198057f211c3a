#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "gfgq/decision.hpp"
#include "gfgq/game.hpp"
#include "gfgq/prefix_canon.hpp"

namespace {

// exit codes: 0 = YES/true, 1 = NO/false, 2 = usage/parse error, 3 = guard
constexpr int kYes = 0, kNo = 1, kUsage = 2, kGuard = 3;

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open " + path);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

void spill(const std::string& path, const std::string& text) {
  std::ofstream out(path);
  if (!out) throw std::invalid_argument("cannot write " + path);
  out << text;
}

gfgq::FormulaPtr load_formula(const std::string& path) {
  return gfgq::parse(slurp(path));
}

int run(int argc, char** argv) {
  CLI::App app{"decision procedures for QPTL with behavioral quantifiers"};
  app.require_subcommand(1);
  unsigned long seed = 0;
  app.add_option("--seed", seed, "seed for randomized utility subcommands");

  std::string formula_file, kripke_file, form = "ea", mode = "universal",
              alt = "ae", dot_file, witness_file;
  bool vanilla = false;
  int horizon = 1;
  std::size_t budget = gfgq::kDefaultStateBudget;

  auto* parse_cmd = app.add_subcommand("parse", "parse a formula and echo it");
  parse_cmd->add_option("formula", formula_file)->required();

  auto* canon_cmd =
      app.add_subcommand("canon", "rewrite the prefix into a canonical form");
  canon_cmd->add_option("formula", formula_file)->required();
  canon_cmd->add_option("--form", form, "target form: ea or ae")
      ->check(CLI::IsMember({"ea", "ae"}));

  auto* sat_cmd = app.add_subcommand("sat", "decide satisfiability");
  sat_cmd->add_option("formula", formula_file)->required();
  sat_cmd->add_flag("--vanilla", vanilla, "classic QPTL semantics");
  sat_cmd->add_option("--witness", witness_file, "write a witness transducer");
  sat_cmd->add_option("--budget", budget, "automaton state budget");

  auto* mc_cmd = app.add_subcommand("mc", "model check a Kripke structure");
  mc_cmd->add_option("kripke", kripke_file)->required();
  mc_cmd->add_option("formula", formula_file)->required();
  mc_cmd->add_option("--mode", mode, "universal or existential")
      ->check(CLI::IsMember({"universal", "existential"}));
  mc_cmd->add_option("--budget", budget, "automaton state budget");

  auto* oracle_cmd =
      app.add_subcommand("oracle", "bounded-horizon enumeration semantics");
  oracle_cmd->add_option("formula", formula_file)->required();
  oracle_cmd->add_option("--horizon", horizon, "explicit time steps")
      ->check(CLI::Range(1, 8));
  oracle_cmd->add_option("--alt", alt, "alternation flag: ea or ae")
      ->check(CLI::IsMember({"ea", "ae"}));

  auto* game_cmd =
      app.add_subcommand("game", "build and solve the quantification game");
  game_cmd->add_option("formula", formula_file)->required();
  game_cmd->add_option("--dot", dot_file, "write the game graph as DOT");
  game_cmd->add_option("--budget", budget, "automaton state budget");

  auto* witness_cmd =
      app.add_subcommand("witness", "extract a witness transducer");
  witness_cmd->add_option("formula", formula_file)->required();
  witness_cmd->add_option("--witness", witness_file, "write instead of print");
  witness_cmd->add_option("--budget", budget, "automaton state budget");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? kYes : kUsage;
  }
  (void)seed;  // reserved: no randomized subcommand ships yet

  if (*parse_cmd) {
    std::cout << gfgq::render(load_formula(formula_file)) << "\n";
    return kYes;
  }

  if (*canon_cmd) {
    auto pv = gfgq::to_prenex(load_formula(formula_file));
    if (!pv) throw std::invalid_argument("formula is not prenex");
    auto target = form == "ea" ? gfgq::CanonTarget::EA : gfgq::CanonTarget::AE;
    std::cout << gfgq::render(gfgq::canonize(pv->prefix, target)) << "\n";
    return kYes;
  }

  if (*sat_cmd) {
    auto f = load_formula(formula_file);
    auto v = vanilla ? gfgq::sat_vanilla(f, budget)
                     : gfgq::sat_behavioral(f, !witness_file.empty(), budget);
    std::cout << (v.yes ? "SAT" : "UNSAT") << "\n";
    std::cerr << v.report();
    if (v.witness) spill(witness_file, gfgq::dump(*v.witness));
    return v.yes ? kYes : kNo;
  }

  if (*mc_cmd) {
    auto K = gfgq::parse_kripke(slurp(kripke_file));
    auto m = mode == "universal" ? gfgq::McMode::Universal
                                 : gfgq::McMode::Existential;
    auto v = gfgq::model_check(K, load_formula(formula_file), m, budget);
    std::cout << (v.yes ? "YES" : "NO") << "\n";
    std::cerr << v.report();
    return v.yes ? kYes : kNo;
  }

  if (*oracle_cmd) {
    auto f = load_formula(formula_file);
    auto a = alt == "ea" ? gfgq::Alt::EA : gfgq::Alt::AE;
    bool yes =
        gfgq::eval_alternating(gfgq::Hyperassignment::trivial(horizon), f, a);
    std::cout << (yes ? "TRUE" : "FALSE") << "\n";
    return yes ? kYes : kNo;
  }

  if (*game_cmd) {
    auto pv = gfgq::to_prenex(load_formula(formula_file));
    if (!pv) throw std::invalid_argument("formula is not prenex");
    auto scheduled = gfgq::schedule_prefix(pv->prefix);
    auto qa = gfgq::build_arena(scheduled);
    auto D = gfgq::determinize(
        gfgq::ltl_to_nba(gfgq::expand_core(pv->matrix), scheduled.props()),
        budget);
    auto g = gfgq::build_sat_game(qa, D);
    auto sol = gfgq::solve(g);
    bool yes = sol.eloise_wins[std::size_t(g.arena.initial)];
    std::cout << "positions=" << g.arena.num_positions
              << " automaton_states=" << D.num_states
              << " winner=" << (yes ? "eloise" : "abelard") << "\n";
    if (!dot_file.empty()) spill(dot_file, gfgq::export_dot(g));
    return yes ? kYes : kNo;
  }

  // witness
  auto f = load_formula(formula_file);
  auto v = gfgq::sat_behavioral(f, true, budget);
  if (!v.yes) {
    std::cout << "UNSAT\n";
    return kNo;
  }
  if (witness_file.empty())
    std::cout << gfgq::dump(*v.witness);
  else
    spill(witness_file, gfgq::dump(*v.witness));
  return kYes;
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return run(argc, argv);
  } catch (const gfgq::GuardError& e) {
    std::cerr << "guard: " << e.what() << "\n";
    return kGuard;
  } catch (const gfgq::ParseError& e) {
    std::cerr << "parse error at " << e.line << ":" << e.col << ": "
              << e.what() << "\n";
    return kUsage;
  } catch (const gfgq::KripkeParseError& e) {
    std::cerr << "kripke parse error: " << e.what() << "\n";
    return kUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  }
}
