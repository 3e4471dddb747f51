#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "clw/evaluator.hpp"
#include "clw/experiments.hpp"
#include "clw/nets.hpp"
#include "clw/parser.hpp"

namespace {

using namespace clw;

void write_text(const std::string& path, const std::string& text) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << text;
}

void emit(const std::string& out_path, const std::string& text) {
  if (out_path.empty()) {
    std::cout << text;
    if (!text.empty() && text.back() != '\n') std::cout << "\n";
  } else {
    write_text(out_path, text);
  }
}

SpaceSpec space_by_name(const std::string& name, int dim, int atoms,
                        bool with_function) {
  if (name == "interval") return SpaceSpec::interval(with_function);
  if (name == "circle") return SpaceSpec::circle();
  if (name == "ball") return SpaceSpec::ball(dim);
  if (name == "prob" || name == "prob_algebra") return SpaceSpec::prob_algebra(atoms);
  throw CLI::ValidationError("--space", "unknown space: " + name);
}

int report_exit(const ExperimentReport& rep, const std::string& out_path) {
  std::cout << rep.summary();
  if (!out_path.empty()) write_text(out_path, rep.to_json().dump(2) + "\n");
  return rep.pass() ? 0 : 1;
}

std::vector<int> parse_ms(const std::string& csv) {
  std::vector<int> ms;
  std::size_t pos = 0;
  while (pos < csv.size()) {
    std::size_t comma = csv.find(',', pos);
    if (comma == std::string::npos) comma = csv.size();
    ms.push_back(std::stoi(csv.substr(pos, comma - pos)));
    pos = comma + 1;
  }
  if (ms.empty()) throw CLI::ValidationError("--ms", "empty resolution list");
  return ms;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"clw: continuous-logic workbench for finite metric structures"};
  app.require_subcommand(1);

  double tol = kTolDefault;
  app.add_option("--tol", tol, "numeric comparison tolerance")
      ->capture_default_str();

  long long cap_points = 100000;
  app.add_option("--cap-points", cap_points, "net point-count cap")
      ->capture_default_str();
  std::uint64_t cap_atoms = 0;
  app.add_option("--cap-atoms", cap_atoms,
                 "atom-evaluation cap (0 = unlimited, env CLW_CAP_ATOMS)");
  std::uint64_t seed = 20260810;
  app.add_option("--seed", seed, "seed for randomized corpora (echoed in reports)");

  // check
  auto* cmd_check = app.add_subcommand("check", "parse and validate a formula file");
  std::string check_formula_path, check_sig;
  bool check_classical = false;
  cmd_check->add_option("--formula", check_formula_path, "formula file")->required();
  cmd_check->add_option("--signature", check_sig, "signature JSON")->required();
  cmd_check->add_flag("--classical", check_classical, "use the classical grammar");

  // eval
  auto* cmd_eval = app.add_subcommand("eval", "evaluate a formula on a structure");
  std::string eval_structure, eval_formula_path, eval_out;
  std::vector<std::string> eval_lets;
  bool eval_wit = false;
  cmd_eval->add_option("--structure", eval_structure, "structure JSON")->required();
  cmd_eval->add_option("--formula", eval_formula_path, "formula file")->required();
  cmd_eval->add_option("--let", eval_lets, "bind a free variable, e.g. --let x=0.25");
  cmd_eval->add_flag("--witness", eval_wit, "emit the quantifier witness trace");
  cmd_eval->add_option("--out", eval_out, "write witness JSON here");

  // net / discretize
  std::string net_space = "interval", net_out, net_prov;
  int net_m = 8, net_dim = 2, net_atoms = 3;
  bool net_nofunc = false;
  auto* cmd_net = app.add_subcommand("net", "generate a net structure JSON");
  cmd_net->add_option("--space", net_space, "interval|circle|ball|prob")->required();
  cmd_net->add_option("--m", net_m, "net resolution");
  cmd_net->add_option("--dim", net_dim, "ball dimension");
  cmd_net->add_option("--atoms", net_atoms, "probability-algebra atoms");
  cmd_net->add_flag("--no-function", net_nofunc, "interval without h");
  cmd_net->add_option("--out", net_out, "structure JSON path")->required();
  cmd_net->add_option("--provenance", net_prov, "sidecar provenance path");

  auto* cmd_disc = app.add_subcommand("discretize", "report symbol snapping for a net");
  std::string disc_space = "interval", disc_out;
  int disc_m = 8, disc_dim = 2, disc_atoms = 3;
  cmd_disc->add_option("--space", disc_space, "interval|circle|ball|prob")->required();
  cmd_disc->add_option("--m", disc_m, "net resolution");
  cmd_disc->add_option("--dim", disc_dim, "ball dimension");
  cmd_disc->add_option("--atoms", disc_atoms, "probability-algebra atoms");
  cmd_disc->add_option("--out", disc_out, "write the snap report here");

  // quotient
  auto* cmd_quot = app.add_subcommand("quotient", "E-quotient discretization");
  std::string quot_in, quot_out, quot_symbols;
  double quot_e = 0.25, quot_t = 0.5;
  cmd_quot->add_option("--in", quot_in, "structure JSON")->required();
  cmd_quot->add_option("--e", quot_e, "E-threshold")->capture_default_str();
  cmd_quot->add_option("--t", quot_t, "truth threshold")->capture_default_str();
  cmd_quot->add_option("--symbols", quot_symbols, "comma list of symbols to carry");
  cmd_quot->add_option("--out", quot_out, "classical structure JSON path");

  // transform
  auto* cmd_trans = app.add_subcommand("transform", "continuous transform of a classical formula");
  std::string trans_in, trans_sig, trans_out;
  cmd_trans->add_option("--in", trans_in, "classical formula file")->required();
  cmd_trans->add_option("--signature", trans_sig, "signature JSON")->required();
  cmd_trans->add_option("--out", trans_out, "output file (default stdout)");

  // experiment
  auto* cmd_exp = app.add_subcommand("experiment", "run a built-in experiment");
  cmd_exp->require_subcommand(1);
  std::string exp_out, exp_format = "json", exp_space = "circle", exp_ms;
  int exp_m = 7, exp_n = 2, exp_mref = 1024, exp_dim = 1, exp_atoms = 6;
  auto* e_apaa = cmd_exp->add_subcommand("apaa", "aperiodic-automorphism axiom bound");
  auto* e_atomless = cmd_exp->add_subcommand("atomless", "atomlessness value 1/m");
  auto* e_circle = cmd_exp->add_subcommand("circle", "circle squaring sentences");
  auto* e_interval = cmd_exp->add_subcommand("interval", "interval halving sentences");
  auto* e_unitary = cmd_exp->add_subcommand("unitary", "unitary eigenvalue sentence");
  auto* e_categ = cmd_exp->add_subcommand("categoricity", "net-description formulas");
  auto* e_conv = cmd_exp->add_subcommand("convergence", "net convergence table");
  for (auto* sc : {e_apaa, e_atomless, e_circle, e_interval, e_unitary, e_categ, e_conv}) {
    sc->add_option("--out", exp_out, "write the report here");
    sc->add_option("--m", exp_m, "resolution / atom count");
    sc->add_option("--n", exp_n, "axiom index / eigenvalue index");
  }
  e_circle->add_option("--ms", exp_ms, "comma-separated resolutions");
  e_interval->add_option("--ms", exp_ms, "comma-separated resolutions");
  e_conv->add_option("--ms", exp_ms, "comma-separated resolutions");
  e_conv->add_option("--mref", exp_mref, "reference resolution");
  e_conv->add_option("--space", exp_space, "interval|circle|ball|prob");
  e_conv->add_option("--dim", exp_dim, "ball dimension");
  e_conv->add_option("--atoms", exp_atoms, "probability-algebra atoms");
  e_conv->add_option("--format", exp_format, "csv|json")->capture_default_str();

  CLI11_PARSE(app, argc, argv);

  set_num_tol(tol);
  if (const char* env = std::getenv("CLW_CAP_ATOMS")) {
    cap_atoms = std::strtoull(env, nullptr, 10);
  }
  NetOptions net_opts;
  net_opts.max_points = cap_points;
  net_opts.max_table_entries =
      std::max(net_opts.max_table_entries, 3 * cap_points * cap_points);
  EvalOptions eval_opts;
  eval_opts.atom_cap = cap_atoms;

  try {
    if (*cmd_check) {
      Signature sig = load_signature(check_sig);
      auto sig_errs = validate_signature(sig);
      for (const auto& e : sig_errs) std::cout << "signature: " << e << "\n";
      FormulaFile ff = read_formula_file(check_formula_path);
      if (check_classical) {
        CFormulaPtr f = parse_classical(ff.body, sig, ff.body_line);
        std::cout << "ok: " << pretty(f) << "\n";
      } else {
        FormulaPtr f = parse_formula(ff.body, sig, ff.pl, ff.body_line);
        auto errs = check_formula(f, sig);
        for (const auto& e : errs) std::cout << e << "\n";
        if (!errs.empty()) return 1;
        std::cout << "ok: " << pretty(f) << "\n";
        std::cout << "free variables:";
        for (const auto& v : free_vars(f)) std::cout << " " << v;
        std::cout << "\n";
      }
      return sig_errs.empty() ? 0 : 1;
    }

    if (*cmd_eval) {
      FiniteStructure a = load_structure(eval_structure);
      auto errs = validate_structure(a);
      if (!errs.empty()) {
        for (const auto& e : errs) std::cerr << "structure: " << e << "\n";
        return 1;
      }
      FormulaFile ff = read_formula_file(eval_formula_path);
      FormulaPtr f = parse_formula(ff.body, a.sig, ff.pl, ff.body_line);
      Assignment asg;
      for (const auto& let : eval_lets) {
        auto eq = let.find('=');
        if (eq == std::string::npos) {
          throw std::runtime_error("--let expects var=point, got: " + let);
        }
        std::string var = let.substr(0, eq), label = let.substr(eq + 1);
        int idx = a.point_index(label);
        if (idx < 0) {
          try {
            idx = std::stoi(label);
          } catch (...) {
            idx = -1;
          }
        }
        if (idx < 0 || idx >= a.n()) {
          throw std::runtime_error("unknown point for --let " + let);
        }
        asg.set(var, idx);
      }
      if (eval_wit) {
        WitnessResult w = eval_witness(a, f, asg);
        std::printf("%.12g\n", w.value);
        ojson j;
        j["value"] = w.value;
        j["trace"] = witness_to_json(w.trace);
        emit(eval_out, j.dump(2) + "\n");
      } else {
        EvalStats stats;
        double v = eval_formula(a, f, asg, eval_opts, &stats);
        std::printf("%.12g\n", v);
      }
      return 0;
    }

    if (*cmd_net) {
      SpaceSpec spec = space_by_name(net_space, net_dim, net_atoms, !net_nofunc);
      NetResult net = generate_net(spec, net_m, net_opts);
      FiniteStructure a = discretize_symbols(net);
      save_structure(a, net_out);
      std::string prov = net_prov.empty() ? net_out + ".provenance.json" : net_prov;
      write_text(prov, net_provenance(net).dump(2) + "\n");
      std::cout << "wrote " << a.n() << " points to " << net_out << " (mesh "
                << format_double(net.mesh) << ")\n";
      return 0;
    }

    if (*cmd_disc) {
      SpaceSpec spec = space_by_name(disc_space, disc_dim, disc_atoms, true);
      NetResult net = generate_net(spec, disc_m, net_opts);
      ojson j = net_provenance(net);
      j["discretized_symbols"] = ojson::array();
      for (const auto& [name, table] : net.pending_funcs) {
        (void)table;
        j["discretized_symbols"].push_back(name);
      }
      emit(disc_out, j.dump(2) + "\n");
      return 0;
    }

    if (*cmd_quot) {
      FiniteStructure a = load_structure(quot_in);
      auto errs = validate_structure(a);
      if (!errs.empty()) {
        for (const auto& e : errs) std::cerr << "structure: " << e << "\n";
        return 1;
      }
      std::vector<std::string> symbols;
      if (!quot_symbols.empty()) {
        std::size_t pos = 0;
        while (pos < quot_symbols.size()) {
          auto comma = quot_symbols.find(',', pos);
          if (comma == std::string::npos) comma = quot_symbols.size();
          symbols.push_back(quot_symbols.substr(pos, comma - pos));
          pos = comma + 1;
        }
      }
      QuotientResult res = quotient_discretize(
          a, quot_e, quot_t, symbols.empty() ? nullptr : &symbols);
      ojson j = classical_to_json(res.quotient);
      j["class_map"] = res.class_of;
      emit(quot_out, j.dump(2) + "\n");
      std::cout << "quotient has " << res.quotient.n() << " classes\n";
      return 0;
    }

    if (*cmd_trans) {
      Signature sig = load_signature(trans_sig);
      FormulaFile ff = read_formula_file(trans_in);
      CFormulaPtr f = parse_classical(ff.body, sig, ff.body_line);
      FormulaPtr t = classical_to_continuous(f);
      emit(trans_out, pretty(t) + "\n");
      return 0;
    }

    if (*cmd_exp) {
      if (*e_apaa) return report_exit(run_apaa(exp_m, exp_n, net_opts), exp_out);
      if (*e_atomless) return report_exit(run_atomless(exp_m, net_opts), exp_out);
      if (*e_circle) {
        auto ms = exp_ms.empty() ? std::vector<int>{8, 16, 32, 64} : parse_ms(exp_ms);
        return report_exit(run_circle_injsurj(ms), exp_out);
      }
      if (*e_interval) {
        auto ms = exp_ms.empty() ? std::vector<int>{8, 16, 32, 64} : parse_ms(exp_ms);
        return report_exit(run_interval_injsurj(ms), exp_out);
      }
      if (*e_unitary) return report_exit(run_unitary_eigen(exp_n, exp_m), exp_out);
      if (*e_categ) return report_exit(run_categoricity(exp_m), exp_out);
      if (*e_conv) {
        SpaceSpec spec = space_by_name(exp_space, exp_dim, exp_atoms, true);
        auto ms = exp_ms.empty() ? std::vector<int>{8, 16, 32, 64} : parse_ms(exp_ms);
        std::vector<ConvergenceRow> rows;
        ExperimentReport rep = run_convergence(spec, convergence_battery(spec), ms,
                                               exp_mref, &rows, net_opts);
        if (exp_format == "csv") {
          emit(exp_out, convergence_csv(rows));
          std::cout << rep.summary();
          return rep.pass() ? 0 : 1;
        }
        return report_exit(rep, exp_out);
      }
    }
  } catch (const ParseError& e) {
    std::cerr << e.what() << "\n";
    return 2;
  } catch (const QuotientError& e) {
    std::cerr << "quotient error: " << e.what() << " (witness:";
    for (int w : e.witness) std::cerr << " " << w;
    std::cerr << ")\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
