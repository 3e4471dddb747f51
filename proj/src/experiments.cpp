#include "clw/experiments.hpp"

#include <algorithm>
#include <bit>
#include <chrono>
#include <cmath>
#include <set>
#include <sstream>

namespace clw {

namespace {

struct Timer {
  std::chrono::steady_clock::time_point start = std::chrono::steady_clock::now();
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
        .count();
  }
};

std::set<std::string> names_in(const FormulaPtr& f) {
  std::set<std::string> out;
  auto walk = [&](auto&& self, const FormulaPtr& g) -> void {
    for (const auto& t : g->terms) {
      for (const auto& v : term_vars(t)) out.insert(v);
    }
    if (g->kind == Formula::Kind::Sup || g->kind == Formula::Kind::Inf) {
      out.insert(g->name);
    }
    for (const auto& c : g->children) self(self, c);
  };
  walk(walk, f);
  return out;
}

std::string fresh(const std::string& base, std::set<std::string>& used) {
  std::string n = base;
  while (used.count(n)) n += "'";
  used.insert(n);
  return n;
}

}  // namespace

bool ExperimentReport::pass() const {
  return std::all_of(assertions.begin(), assertions.end(),
                     [](const Assertion& a) { return a.pass; });
}

ojson ExperimentReport::to_json() const {
  ojson j;
  j["experiment"] = name;
  j["params"] = params;
  j["values"] = values;
  ojson as = ojson::array();
  for (const auto& a : assertions) {
    as.push_back({{"name", a.name},
                  {"lhs", a.lhs},
                  {"cmp", a.cmp},
                  {"rhs", a.rhs},
                  {"pass", a.pass}});
  }
  j["assertions"] = std::move(as);
  j["atom_evals"] = atom_evals;
  j["wall_seconds"] = wall_seconds;
  j["pass"] = pass();
  return j;
}

std::string ExperimentReport::summary() const {
  std::ostringstream os;
  os << (pass() ? "[PASS] " : "[FAIL] ") << name << "\n";
  for (const auto& a : assertions) {
    os << "  " << (a.pass ? "ok   " : "FAIL ") << a.name << ": "
       << format_double(a.lhs) << " " << a.cmp << " " << format_double(a.rhs)
       << "\n";
  }
  return os.str();
}

void ExperimentReport::assert_le(const std::string& what, double lhs, double rhs,
                                 double tol) {
  if (tol < 0.0) tol = num_tol();
  assertions.push_back({what, lhs, "<=", rhs, lhs <= rhs + tol});
}

void ExperimentReport::assert_eq(const std::string& what, double lhs, double rhs,
                                 double tol) {
  if (tol < 0.0) tol = num_tol();
  assertions.push_back({what, lhs, "==", rhs, std::fabs(lhs - rhs) <= tol});
}

void ExperimentReport::assert_gt(const std::string& what, double lhs, double rhs) {
  assertions.push_back({what, lhs, ">", rhs, lhs > rhs});
}

void ExperimentReport::assert_exact_zero(const std::string& what, double lhs) {
  assertions.push_back({what, lhs, "==", 0.0, lhs == 0.0});
}

std::pair<FormulaPtr, FormulaPtr> build_threshold_sentences(
    const Signature& sig, const std::string& pred_name, const PlFunc& alpha,
    const std::string& alpha_name) {
  if (!alpha.increasing() || !alpha.zero_at_zero()) {
    throw std::invalid_argument("threshold sentences need an increasing witness with alpha(0)=0");
  }
  const PredicateSymbol* ps = sig.predicate(pred_name);
  if (!ps) throw std::invalid_argument("unknown predicate: " + pred_name);
  std::vector<Term> args;
  std::vector<std::string> vars;
  for (int i = 0; i < ps->arity; ++i) {
    vars.push_back("x" + std::to_string(i + 1));
    args.push_back(tvar(vars.back()));
  }
  FormulaPtr p = fml::pred(pred_name, args);
  FormulaPtr sigma_p =
      fml::dminus(p, fml::apply(alpha_name, alpha, fml::dminus(p, fml::cst(0.5))));
  for (auto it = vars.rbegin(); it != vars.rend(); ++it) {
    sigma_p = fml::sup(*it, sigma_p);
  }
  FormulaPtr dxy = fml::dist(tvar("x"), tvar("y"));
  FormulaPtr tau = fml::sup(
      "x", fml::sup("y", fml::dminus(dxy, fml::apply(alpha_name, alpha,
                                                     fml::dminus(dxy, fml::cst(0.5))))));
  return {sigma_p, tau};
}

InjSurjSentences build_injsurj(const InjSurjSpec& spec) {
  auto need_witness = [](const PlFunc& w, const char* which) {
    if (!w.increasing() || !w.zero_at_zero()) {
      throw std::invalid_argument(std::string("witness ") + which +
                                  " must be increasing with value 0 at 0");
    }
  };
  need_witness(spec.alpha, "alpha");
  if (spec.mode == InjSurjSpec::Mode::InjectiveImpliesSurjective) {
    need_witness(spec.beta, "beta");
  } else {
    need_witness(spec.gamma, "gamma");
  }
  if (!(spec.epsilon > 0.0 && spec.epsilon <= 1.0)) {
    throw std::invalid_argument("epsilon must lie in (0,1]");
  }

  std::set<std::string> used = names_in(spec.phi);
  for (const auto& z : spec.params) used.insert(z);

  auto phi_at = [&](const std::string& vx, const std::string& vy) {
    return substitute_vars(spec.phi,
                           {{spec.x_var, tvar(vx)}, {spec.y_var, tvar(vy)}});
  };

  InjSurjSentences out;
  {
    std::string x = fresh("x", used), y = fresh("y", used);
    out.p = fml::sup(x, fml::inf(y, phi_at(x, y)));
  }
  {
    std::string x = fresh("x", used), y1 = fresh("y1", used), y2 = fresh("y2", used);
    FormulaPtr body = fml::dminus(
        fml::dist(tvar(y1), tvar(y2)),
        fml::apply("alpha", spec.alpha,
                   fml::fmax({phi_at(x, y1), phi_at(x, y2)})));
    out.q = fml::sup(x, fml::sup(y1, fml::sup(y2, body)));
  }
  if (spec.mode == InjSurjSpec::Mode::InjectiveImpliesSurjective) {
    {
      std::string x1 = fresh("x1", used), x2 = fresh("x2", used), y = fresh("y", used);
      FormulaPtr body = fml::dminus(
          fml::dist(tvar(x1), tvar(x2)),
          fml::apply("beta", spec.beta,
                     fml::fmax({phi_at(x1, y), phi_at(x2, y)})));
      out.r = fml::sup(x1, fml::sup(x2, fml::sup(y, body)));
    }
    {
      std::string y = fresh("y", used), x = fresh("x", used);
      out.s = fml::inf(
          y, fml::sup(x, fml::dminus(fml::cst(spec.epsilon), phi_at(x, y))));
    }
  } else {
    {
      std::string x1 = fresh("x1", used), x2 = fresh("x2", used);
      std::string w1 = fresh("w1", used), w2 = fresh("w2", used);
      FormulaPtr g = fml::sup(
          w1, fml::sup(w2, fml::dminus(fml::dist(tvar(w1), tvar(w2)),
                                       fml::apply("gamma", spec.gamma,
                                                  fml::fmax({phi_at(x1, w1),
                                                             phi_at(x2, w2)})))));
      FormulaPtr body = fml::fmax(
          {fml::absdiff(fml::dist(tvar(x1), tvar(x2)), fml::cst(spec.epsilon)), g});
      out.r = fml::inf(x1, fml::inf(x2, body));
    }
    {
      std::string y = fresh("y", used), x = fresh("x", used);
      out.s = fml::sup(y, fml::inf(x, phi_at(x, y)));
    }
  }
  out.sigma = fml::fmax({out.p, out.q, out.r, out.s});
  for (auto it = spec.params.rbegin(); it != spec.params.rend(); ++it) {
    out.sigma = fml::inf(*it, out.sigma);
  }
  return out;
}

namespace {

// inf_e max(|1/n - mu(e)|, mu(e n tau(e)), ..., mu(e n tau^{n-1}(e)))
FormulaPtr apaa_body(int n, const std::string& var) {
  Term e = tvar(var);
  FormulaPtr measure_clause =
      fml::absdiff(fml::cst(1.0 / n), fml::pred("mu", {e}));
  if (n == 1) return measure_clause;
  std::vector<FormulaPtr> parts{measure_clause};
  Term shifted = e;
  for (int i = 1; i < n; ++i) {
    shifted = tapp("tau", {shifted});
    parts.push_back(fml::pred("mu", {tapp("inter", {e, shifted})}));
  }
  return fml::fmax(std::move(parts));
}

}  // namespace

ExperimentReport run_apaa(int m, int n, const NetOptions& opts) {
  Timer timer;
  ExperimentReport rep;
  rep.name = "apaa";
  rep.params = {{"m", m}, {"n", n}};
  if (n < 1 || n >= m) throw std::invalid_argument("run_apaa needs 1 <= n < m");
  if (m > 14) throw ResourceError("run_apaa: m above the brute-force cap of 14");

  NetResult net = generate_net(SpaceSpec::prob_algebra(m), 1, opts);
  const FiniteStructure& a = net.structure;

  FormulaPtr body = apaa_body(n, "e");
  FormulaPtr axiom = fml::inf("e", body);
  EvalStats stats;
  double brute = eval_formula(a, axiom, {}, {}, &stats);
  rep.atom_evals += stats.atoms;

  // witness e = {1, 1+n, ..., 1+(k-1)n}, k maximal with (k-1)/(m-1) <= 1/n
  int k = std::min(m, (m - 1) / n + 1);
  std::uint32_t mask = 0;
  for (int i = 0; i < k; ++i) mask |= 1u << (i * n);
  Assignment asg;
  asg.set("e", int(mask));
  double witness = eval_formula(a, body, asg, {}, &stats);
  rep.atom_evals += stats.atoms;
  double bound = 3.0 / (m - 1);

  rep.values = {{"brute_force", brute},
                {"witness", witness},
                {"bound", bound},
                {"k", k},
                {"witness_size", std::popcount(mask)}};
  rep.assert_le("brute <= witness", brute, witness);
  rep.assert_le("witness <= 3/(m-1)", witness, bound);
  rep.assert_le("brute <= 3/(m-1)", brute, bound);
  rep.wall_seconds = timer.seconds();
  return rep;
}

ExperimentReport run_atomless(int m, const NetOptions& opts) {
  Timer timer;
  ExperimentReport rep;
  rep.name = "atomless";
  rep.params = {{"m", m}};
  if (m < 1 || m > 14) throw ResourceError("run_atomless: m out of range 1..14");

  NetResult net = generate_net(SpaceSpec::prob_algebra(m), 1, opts);
  const FiniteStructure& a = net.structure;

  Term x = tvar("x"), y = tvar("y");
  FormulaPtr split_gap =
      fml::absdiff(fml::pred("mu", {tapp("inter", {x, y})}),
                   fml::pred("mu", {tapp("inter", {x, tapp("compl", {y})})}));
  FormulaPtr inner = fml::inf("y", split_gap);
  FormulaPtr sentence = fml::sup("x", inner);
  EvalStats stats;
  double value = eval_formula(a, sentence, {}, {}, &stats);
  rep.atom_evals += stats.atoms;
  rep.values = {{"value", value}, {"expected", 1.0 / m}};
  rep.assert_eq("value == 1/m", value, 1.0 / m);

  // diagnostic: events of even cardinality split perfectly
  double worst_even = 0.0;
  for (int p = 0; p < a.n(); ++p) {
    if (std::popcount(unsigned(p)) % 2 != 0) continue;
    Assignment asg;
    asg.set("x", p);
    worst_even = std::max(worst_even, eval_formula(a, inner, asg, {}, &stats));
    rep.atom_evals += stats.atoms;
  }
  rep.values["even_cardinality_inner_inf"] = worst_even;
  rep.assert_exact_zero("even-cardinality events split exactly", worst_even);
  rep.wall_seconds = timer.seconds();
  return rep;
}

ExperimentReport run_unitary_eigen(int n, int m, int net_resolution) {
  Timer timer;
  ExperimentReport rep;
  rep.name = "unitary";
  rep.params = {{"n", n}, {"m", m}, {"net_resolution", net_resolution}};
  if (n < 0 || n >= m) throw std::invalid_argument("run_unitary_eigen needs 0 <= n < m");
  if (m > 64) throw ResourceError("run_unitary_eigen: dimension cap exceeded");

  static const double kGoldenAngle = M_PI * (3.0 - std::sqrt(5.0));
  const int dim = 2 * m;
  std::vector<double> angles(m);
  for (int j = 0; j < m; ++j) angles[j] = j * kGoldenAngle;

  // exact witness: the first basis vector of the n-th rotation block
  BallOperator u_full = rotation_blocks("u", angles);
  BallOperator zn_full =
      rotation_blocks("zn", std::vector<double>(m, angles[n]));
  std::vector<double> x(dim, 0.0);
  x[2 * n] = 1.0;
  std::vector<double> ux = u_full.apply(x);
  std::vector<double> znx = zn_full.apply(x);
  double ipxx = 0.0, resid2 = 0.0;
  for (int i = 0; i < dim; ++i) {
    ipxx += x[i] * x[i];
    resid2 += (ux[i] - znx[i]) * (ux[i] - znx[i]);
  }
  double witness_value = std::max(std::fabs(ipxx - 1.0), std::sqrt(resid2));
  rep.values["witness_value"] = witness_value;
  rep.values["theta_n"] = angles[n];
  rep.assert_le("witness value == 0", witness_value, 0.0);

  // net check on the invariant coordinate plane of the witness block, where
  // both U and multiplication by z_n act as the same rotation
  BallOperator u2 = rotation_blocks("u", {angles[n]});
  BallOperator zn2 = rotation_blocks("zn", {angles[n]});
  SpaceSpec plane = SpaceSpec::ball(2, {u2, zn2});
  NetResult net = generate_net(plane, net_resolution);
  FiniteStructure a = discretize_symbols(net);

  Term xx = tvar("x");
  FormulaPtr norm_defect = fml::neg(fml::pred("ip", {xx, xx}));
  FormulaPtr eigen_defect =
      fml::dist(tapp("u", {xx}), tapp("zn", {xx}));
  FormulaPtr sentence = fml::inf(
      "x", fml::fmax({fml::tadd(norm_defect, norm_defect),
                      fml::tadd(eigen_defect, eigen_defect)}));
  EvalStats stats;
  double net_value = eval_formula(a, sentence, {}, {}, &stats);
  rep.atom_evals += stats.atoms;
  rep.values["net_value"] = net_value;
  rep.values["mesh"] = net.mesh;
  rep.assert_le("net value <= 2*mesh", net_value, 2.0 * net.mesh);
  rep.wall_seconds = timer.seconds();
  return rep;
}

CategoricitySet build_categoricity(const FiniteStructure& net, double mesh, int m) {
  if (m < 1) throw std::invalid_argument("build_categoricity: m must be >= 1");
  double slack = 1.0 / m;
  if (mesh > slack + num_tol()) {
    throw std::invalid_argument("build_categoricity: net too coarse for the 1/m slack");
  }
  const PredicateSymbol* pred_sym = nullptr;
  const FunctionSymbol* func_sym = nullptr;
  for (const auto& p : net.sig.predicates) {
    if (p.arity == 1) {
      pred_sym = &p;
      break;
    }
  }
  for (const auto& f : net.sig.functions) {
    if (f.arity == 1) {
      func_sym = &f;
      break;
    }
  }
  if (!pred_sym || !func_sym) {
    throw std::invalid_argument(
        "build_categoricity: need a unary predicate and a unary function");
  }
  const int n = net.n();
  CategoricitySet out;
  for (int i = 0; i < n; ++i) out.vars.push_back("x" + std::to_string(i + 1));

  {
    std::vector<FormulaPtr> close;
    for (int i = 0; i < n; ++i) {
      close.push_back(fml::dminus(fml::dist(tvar("x0"), tvar(out.vars[i])),
                                  fml::cst(slack)));
    }
    out.psi = fml::sup("x0", fml::fmin(std::move(close)));
  }
  {
    const auto& ptable = net.preds.at(pred_sym->name);
    auto ftable_it = net.funcs.find(func_sym->name);
    if (ftable_it == net.funcs.end()) {
      throw std::invalid_argument("build_categoricity: no admissible j (function " +
                                  func_sym->name + " not discretized)");
    }
    const auto& ftable = ftable_it->second;
    std::vector<FormulaPtr> parts;
    for (int i = 0; i < n; ++i) {
      double r = ptable[i];
      int j = ftable[i];
      parts.push_back(fml::fmax(
          {fml::absdiff(fml::pred(pred_sym->name, {tvar(out.vars[i])}), fml::cst(r)),
           fml::dminus(fml::dist(tapp(func_sym->name, {tvar(out.vars[i])}),
                                 tvar(out.vars[j])),
                       fml::cst(slack))}));
    }
    out.chi = fml::fmax(std::move(parts));
  }
  {
    std::vector<FormulaPtr> parts;
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) {
        parts.push_back(fml::absdiff(
            fml::dist(tvar(out.vars[i]), tvar(out.vars[j])), fml::cst(net.d(i, j))));
      }
    }
    out.tau = fml::fmax(std::move(parts));
  }
  out.phi = fml::fmax({out.psi, out.chi, out.tau});
  return out;
}

ExperimentReport run_categoricity(int m, int fine_factor) {
  Timer timer;
  ExperimentReport rep;
  rep.name = "categoricity";
  rep.params = {{"m", m}, {"fine_factor", fine_factor}};

  SpaceSpec spec = SpaceSpec::interval(true);
  NetResult coarse = generate_net(spec, m);
  FiniteStructure a = discretize_symbols(coarse);
  CategoricitySet cat = build_categoricity(a, coarse.mesh, m);

  Assignment defining;
  for (int i = 0; i < a.n(); ++i) defining.set(cat.vars[i], i);
  EvalStats stats;
  double phi_gen = eval_formula(a, cat.phi, defining, {}, &stats);
  rep.atom_evals += stats.atoms;
  double tau_gen = eval_formula(a, cat.tau, defining, {}, &stats);
  rep.atom_evals += stats.atoms;

  NetResult fine = generate_net(spec, m * fine_factor);
  FiniteStructure b = discretize_symbols(fine);
  Assignment snapped;
  for (int i = 0; i < a.n(); ++i) {
    // nearest fine-net point to the coarse point (the nets are nested)
    int best = 0;
    double best_d = 2.0;
    for (int j = 0; j < b.n(); ++j) {
      double dd = std::fabs(coarse.coords[i][0] - fine.coords[j][0]);
      if (dd < best_d) {
        best_d = dd;
        best = j;
      }
    }
    snapped.set(cat.vars[i], best);
  }
  double phi_fine = eval_formula(b, cat.phi, snapped, {}, &stats);
  rep.atom_evals += stats.atoms;
  double bound = net_error_bound(cat.phi, a.sig, coarse.mesh) +
                 net_error_bound(cat.phi, a.sig, fine.mesh);

  rep.values = {{"phi_at_defining_tuple", phi_gen},
                {"tau_at_defining_tuple", tau_gen},
                {"phi_on_fine_net", phi_fine},
                {"modulus_bound", bound},
                {"coarse_mesh", coarse.mesh},
                {"fine_mesh", fine.mesh}};
  rep.assert_eq("phi == 0 at defining tuple", phi_gen, 0.0);
  rep.assert_exact_zero("tau component exactly 0", tau_gen);
  rep.assert_le("phi on fine net <= composed modulus bound", phi_fine, bound);
  rep.wall_seconds = timer.seconds();
  return rep;
}

std::vector<BatteryEntry> convergence_battery(const SpaceSpec& spec) {
  std::vector<BatteryEntry> out;
  Signature sig = spec.signature();
  Term x = tvar("x"), y = tvar("y");
  FormulaPtr closest = fml::sup("x", fml::inf("y", fml::dist(x, y)));
  PlFunc alpha = pl_min_scale(2);
  auto tau_sentence = build_threshold_sentences(sig, sig.predicates[0].name, alpha).second;
  switch (spec.kind) {
    case SpaceSpec::Kind::Interval: {
      out.push_back({"closest_point", closest});
      out.push_back({"image_closest",
                     fml::sup("x", fml::inf("y", fml::dist(tapp("h", {x}), y)))});
      out.push_back({"halving_defect",
                     fml::sup("x", fml::absdiff(fml::pred("P", {tapp("h", {x})}),
                                                fml::scale(0.5, fml::pred("P", {x}))))});
      out.push_back({"tau_threshold", tau_sentence});
      out.push_back(
          {"sigma_P", build_threshold_sentences(sig, "P", alpha).first});
      out.push_back({"inf_P", fml::inf("x", fml::pred("P", {x}))});
      out.push_back({"mid_gap", fml::inf("x", fml::fmax({fml::pred("P", {x}),
                                                         fml::neg(fml::pred("P", {x}))}))});
      break;
    }
    case SpaceSpec::Kind::Circle: {
      out.push_back({"surjectivity_defect",
                     fml::sup("y", fml::inf("x", fml::pred("P", {x, x, y})))});
      out.push_back({"closest_point", closest});
      out.push_back({"square_spread", fml::sup("x", fml::pred("P", {x, x, x}))});
      out.push_back({"unit_exists",
                     fml::sup("x", fml::inf("y", fml::pred("P", {x, y, x})))});
      out.push_back({"absorb_defect",
                     fml::inf("x", fml::sup("y", fml::pred("P", {x, y, y})))});
      out.push_back({"tau_threshold", tau_sentence});
      break;
    }
    case SpaceSpec::Kind::Ball: {
      out.push_back({"closest_point", closest});
      out.push_back({"min_self_ip", fml::inf("x", fml::pred("ip", {x, x}))});
      out.push_back({"max_self_ip", fml::sup("x", fml::pred("ip", {x, x}))});
      out.push_back({"center_flatness",
                     fml::inf("x", fml::sup("y", fml::absdiff(fml::pred("ip", {x, y}),
                                                              fml::cst(0.5))))});
      out.push_back({"worst_opposition",
                     fml::sup("x", fml::inf("y", fml::pred("ip", {x, y})))});
      out.push_back({"ip_level_06",
                     fml::inf("x", fml::absdiff(fml::pred("ip", {x, x}), fml::cst(0.6)))});
      out.push_back({"tau_threshold", tau_sentence});
      break;
    }
    case SpaceSpec::Kind::ProbAlgebra: {
      Term e = tvar("e");
      out.push_back({"atomlessness",
                     fml::sup("x", fml::inf("y",
                         fml::absdiff(fml::pred("mu", {tapp("inter", {x, y})}),
                                      fml::pred("mu", {tapp("inter", {x, tapp("compl", {y})})}))))});
      out.push_back({"apaa_n2", fml::inf("e", apaa_body(2, "e"))});
      out.push_back({"empty_min", fml::inf("e", fml::pred("mu", {e}))});
      out.push_back({"full_max", fml::sup("e", fml::pred("mu", {e}))});
      out.push_back({"half_event",
                     fml::inf("e", fml::absdiff(fml::pred("mu", {e}), fml::cst(0.5)))});
      out.push_back({"complement_additivity",
                     fml::sup("e", fml::absdiff(
                         fml::tadd(fml::pred("mu", {e}),
                                   fml::pred("mu", {tapp("compl", {e})})),
                         fml::cst(1.0)))});
      out.push_back({"diameter", fml::dist(tconst("bot"), tconst("top"))});
      break;
    }
  }
  return out;
}

ExperimentReport run_convergence(const SpaceSpec& spec,
                                 const std::vector<BatteryEntry>& battery,
                                 const std::vector<int>& ms, int m_ref,
                                 std::vector<ConvergenceRow>* rows,
                                 const NetOptions& opts) {
  Timer timer;
  ExperimentReport rep;
  rep.name = "convergence_" + spec.kind_name();
  ojson msj = ojson::array();
  for (int m : ms) msj.push_back(m);
  rep.params = {{"space", spec.kind_name()}, {"ms", msj}, {"m_ref", m_ref}};

  std::vector<ReferenceValue> refs;
  refs.reserve(battery.size());
  for (const auto& entry : battery) {
    refs.push_back(reference_value(spec, entry.sentence, m_ref, opts));
  }
  std::vector<std::vector<double>> vals(battery.size());
  for (int m : ms) {
    NetResult net = generate_net(spec, m, opts);
    FiniteStructure a = discretize_symbols(net);
    for (std::size_t s = 0; s < battery.size(); ++s) {
      EvalStats stats;
      double v = eval_formula(a, battery[s].sentence, {}, {}, &stats);
      rep.atom_evals += stats.atoms;
      vals[s].push_back(v);
      if (rows) {
        rows->push_back({battery[s].name, m, v, refs[s].value,
                         std::fabs(v - refs[s].value)});
      }
    }
  }
  for (std::size_t s = 0; s < battery.size(); ++s) {
    rep.values[battery[s].name + ".reference"] = refs[s].value;
    for (std::size_t i = 0; i < ms.size(); ++i) {
      rep.values[battery[s].name + ".m" + std::to_string(ms[i])] = vals[s][i];
    }
    for (std::size_t i = 1; i < ms.size(); ++i) {
      double prev = std::fabs(vals[s][i - 1] - refs[s].value);
      double cur = std::fabs(vals[s][i] - refs[s].value);
      rep.assert_le(battery[s].name + ": error(m=" + std::to_string(ms[i]) +
                        ") <= error(m=" + std::to_string(ms[i - 1]) + ")",
                    cur, prev);
    }
    if (std::fabs(refs[s].value) <= num_tol() && !ms.empty()) {
      rep.assert_le(battery[s].name + ": zero-limit value at largest m <= 0.2",
                    vals[s].back(), 0.2);
      rep.assert_le(battery[s].name + ": value at largest m <= value at smallest m",
                    vals[s].back(), vals[s].front());
    }
  }
  rep.wall_seconds = timer.seconds();
  return rep;
}

std::string convergence_csv(const std::vector<ConvergenceRow>& rows) {
  std::ostringstream os;
  os << "sentence,m,value,reference,error\n";
  for (const auto& r : rows) {
    os << r.sentence << "," << r.m << "," << format_double(r.value) << ","
       << format_double(r.reference) << "," << format_double(r.error) << "\n";
  }
  return os.str();
}

InjSurjSpec circle_injsurj_spec() {
  InjSurjSpec spec;
  // squaring on the circle: d(f(x), y) = P(x, x, y)
  spec.phi = fml::pred("P", {tvar("x"), tvar("x"), tvar("y")});
  spec.alpha = pl_min_scale(2);
  spec.gamma = pl_min_scale(2);
  spec.epsilon = 1.0;  // the collision pair 1, -1 sits at distance 1
  spec.mode = InjSurjSpec::Mode::SurjectiveImpliesInjective;
  return spec;
}

InjSurjSpec interval_injsurj_spec() {
  InjSurjSpec spec;
  // halving on the interval: d(f(x), y) = d(h(x), y)
  spec.phi = fml::dist(tapp("h", {tvar("x")}), tvar("y"));
  spec.alpha = pl_min_scale(2);
  spec.beta = pl_min_scale(4);
  spec.epsilon = 0.5;  // y = 1 stays 1/2 away from every image
  spec.mode = InjSurjSpec::Mode::InjectiveImpliesSurjective;
  return spec;
}

namespace {

ExperimentReport run_injsurj_on_nets(const std::string& name, const SpaceSpec& space,
                                     const InjSurjSpec& spec,
                                     const std::vector<int>& ms,
                                     bool circle_expectations) {
  Timer timer;
  ExperimentReport rep;
  rep.name = name;
  ojson msj = ojson::array();
  for (int m : ms) msj.push_back(m);
  rep.params = {{"ms", msj}, {"epsilon", spec.epsilon}};

  InjSurjSentences sentences = build_injsurj(spec);
  std::vector<double> sigmas;
  for (int m : ms) {
    NetResult net = generate_net(space, m);
    FiniteStructure a = discretize_symbols(net);
    EvalStats stats;
    auto value = [&](const FormulaPtr& f) {
      double v = eval_formula(a, f, {}, {}, &stats);
      rep.atom_evals += stats.atoms;
      return v;
    };
    double p = value(sentences.p);
    double q = value(sentences.q);
    double r = value(sentences.r);
    double s = value(sentences.s);
    double sigma = value(sentences.sigma);
    sigmas.push_back(sigma);
    std::string tag = "m" + std::to_string(m) + ".";
    rep.values[tag + "P"] = p;
    rep.values[tag + "Q"] = q;
    rep.values[tag + "R"] = r;
    rep.values[tag + "S"] = s;
    rep.values[tag + "Sigma"] = sigma;
    rep.assert_exact_zero("m=" + std::to_string(m) + ": Q == 0 exactly", q);
    rep.assert_gt("m=" + std::to_string(m) + ": Sigma > 0", sigma, 0.0);
    if (circle_expectations && m % 2 == 0) {
      rep.assert_eq("m=" + std::to_string(m) + ": Sigma == sin(pi/m)", sigma,
                    std::sin(M_PI / m));
    }
  }
  if (sigmas.size() >= 2) {
    rep.assert_le("Sigma at finest <= Sigma at coarsest", sigmas.back(),
                  sigmas.front());
  }
  rep.wall_seconds = timer.seconds();
  return rep;
}

}  // namespace

ExperimentReport run_circle_injsurj(const std::vector<int>& ms) {
  return run_injsurj_on_nets("circle_injsurj", SpaceSpec::circle(),
                             circle_injsurj_spec(), ms, true);
}

ExperimentReport run_interval_injsurj(const std::vector<int>& ms) {
  return run_injsurj_on_nets("interval_injsurj", SpaceSpec::interval(true),
                             interval_injsurj_spec(), ms, false);
}

}  // namespace clw
