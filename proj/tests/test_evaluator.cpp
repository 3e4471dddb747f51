#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <bit>
#include <cmath>

#include "clw/evaluator.hpp"
#include "clw/nets.hpp"
#include "corpus.hpp"

using namespace clw;

TEST_CASE("eval_term: variables, constants, and snapped tables") {
  NetResult net = generate_net(SpaceSpec::interval(true), 4);
  FiniteStructure a = discretize_symbols(net);
  // adjoin a constant pinned at 1.0
  a.sig.constants.push_back("c");
  a.consts["c"] = 4;

  Assignment asg;
  asg.set("x", 2);
  CHECK(eval_term(a, tvar("x"), asg) == 2);
  CHECK(eval_term(a, tconst("c"), asg) == 4);
  // h(1.0) = 0.5 lands exactly on the net
  CHECK(eval_term(a, tapp("h", {tconst("c")}), asg) == 2);
  CHECK(a.points[2] == "0.5");
  CHECK_THROWS_AS(eval_term(a, tvar("zz"), asg), EvalError);
}

TEST_CASE("snapping tie-break goes to the lower index") {
  NetResult net = generate_net(SpaceSpec::interval(true), 4);
  FiniteStructure a = discretize_symbols(net);
  // h(0.25) = 0.125 sits exactly between 0 and 0.25
  CHECK(a.funcs["h"][1] == 0);
  // h(1.0) = 0.5 exactly, no snap error
  CHECK(net.pending_errors.at("h")[4] == 0.0);
  CHECK(net.pending_errors.at("h")[1] == doctest::Approx(0.125));
}

TEST_CASE("reflexivity sentence evaluates to zero") {
  clwtest::Rng rng(31);
  FiniteStructure a =
      clwtest::random_dyadic_structure(clwtest::dyadic_signature(), 6, rng);
  FormulaPtr f = fml::sup("x", fml::dist(tvar("x"), tvar("x")));
  CHECK(eval_formula(a, f) == 0.0);
}

TEST_CASE("atomlessness value on the 4-atom algebra is 1/4") {
  // independent oracle: direct bitmask enumeration, no formula machinery
  const int m = 4, n = 1 << m;
  double brute = 0.0;
  for (int x = 0; x < n; ++x) {
    double best = 1.0;
    for (int y = 0; y < n; ++y) {
      double gap = std::fabs(double(std::popcount(unsigned(x & y))) -
                             double(std::popcount(unsigned(x & ~y & (n - 1))))) /
                   m;
      best = std::min(best, gap);
    }
    brute = std::max(brute, best);
  }
  CHECK(brute == 0.25);

  NetResult net = generate_net(SpaceSpec::prob_algebra(m), 1);
  Term x = tvar("x"), y = tvar("y");
  FormulaPtr sentence = fml::sup(
      "x", fml::inf("y", fml::absdiff(
                             fml::pred("mu", {tapp("inter", {x, y})}),
                             fml::pred("mu", {tapp("inter", {x, tapp("compl", {y})})}))));
  CHECK(eval_formula(net.structure, sentence) == brute);
}

TEST_CASE("surjectivity defect of squaring on the 8-point circle") {
  NetResult net = generate_net(SpaceSpec::circle(), 8);
  FormulaPtr s = fml::sup(
      "y", fml::inf("x", fml::pred("P", {tvar("x"), tvar("x"), tvar("y")})));
  double v = eval_formula(net.structure, s);
  // squares of 8th roots of unity hit only 4 points; the nearest-hit
  // half-chord is sin(pi/8)
  CHECK(v == doctest::Approx(std::sin(M_PI / 8)).epsilon(1e-12));
  CHECK(v == doctest::Approx(0.3826834323650898).epsilon(1e-12));
}

TEST_CASE("classical evaluator basics") {
  clwtest::Rng rng(32);
  Signature sig = clwtest::random_classical_signature(rng);
  sig.constants.push_back("c");
  ClassicalStructure b = clwtest::random_classical_structure(sig, 4, rng);
  CHECK(eval_classical(b, cfml::exists("x", cfml::eq(tvar("x"), tvar("x")))));
  CHECK(eval_classical(b, cfml::exists("y", cfml::eq(tvar("y"), tconst("c")))));
}

TEST_CASE("range, duality, witnesses, pruning on a seeded corpus") {
  Signature sig = clwtest::dyadic_signature();
  clwtest::Rng rng(20260810);
  EvalOptions pruned, plain;
  plain.pruning = false;
  int cases = 0;
  while (cases < 500) {
    FiniteStructure a = clwtest::random_dyadic_structure(sig, 6, rng);
    FormulaPtr body = clwtest::random_formula(sig, 4, {"v"}, rng);
    if (!check_formula(body, sig).empty()) continue;
    auto fv = free_vars(body);
    if (!(fv.empty() || fv == std::vector<std::string>{"v"})) continue;
    ++cases;

    FormulaPtr closed_inf = fml::inf("v", body);
    FormulaPtr closed_sup_neg = fml::sup("v", fml::neg(body));

    double v_inf = eval_formula(a, closed_inf);
    double v_dual = eval_formula(a, closed_sup_neg);
    // range
    CHECK(v_inf >= 0.0);
    CHECK(v_inf <= 1.0);
    // duality, exact: dyadic tables keep 1-x lossless
    CHECK(v_inf == 1.0 - v_dual);

    // pruning is bit-transparent
    CHECK(eval_formula(a, closed_inf, {}, pruned) ==
          eval_formula(a, closed_inf, {}, plain));

    // witnesses attain the value
    WitnessResult w = eval_witness(a, closed_inf);
    CHECK(w.value == v_inf);
    CHECK(eval_pinned(a, closed_inf, {}, w.trace) == v_inf);
  }
}

TEST_CASE("monotonicity of sup over pointwise-dominated bodies") {
  Signature sig = clwtest::dyadic_signature();
  clwtest::Rng rng(33);
  for (int trial = 0; trial < 50; ++trial) {
    FiniteStructure a = clwtest::random_dyadic_structure(sig, 5, rng);
    FormulaPtr phi = clwtest::random_formula(sig, 2, {"v"}, rng);
    if (!check_formula(phi, sig).empty()) continue;
    // psi = max(phi, something) dominates phi pointwise
    FormulaPtr extra = clwtest::random_formula(sig, 2, {"v"}, rng);
    if (!check_formula(extra, sig).empty()) continue;
    FormulaPtr psi = fml::fmax({phi, extra});
    // enumeration check of pointwise dominance (max is, by construction)
    for (int p = 0; p < a.n(); ++p) {
      Assignment asg;
      asg.set("v", p);
      CHECK(eval_formula(a, phi, asg) <= eval_formula(a, psi, asg));
    }
    CHECK(eval_formula(a, fml::sup("v", phi)) <=
          eval_formula(a, fml::sup("v", psi)));
  }
}

TEST_CASE("parallel outermost quantifier is bit-identical to serial") {
  Signature sig = clwtest::dyadic_signature();
  clwtest::Rng rng(34);
  EvalOptions par;
  par.parallel_outer = true;
  for (int trial = 0; trial < 20; ++trial) {
    FiniteStructure a = clwtest::random_dyadic_structure(sig, 6, rng);
    FormulaPtr body = clwtest::random_formula(sig, 3, {"v"}, rng);
    if (!check_formula(body, sig).empty()) continue;
    auto fv = free_vars(body);
    if (!(fv.empty() || fv == std::vector<std::string>{"v"})) continue;
    FormulaPtr f = fml::sup("v", body);
    CHECK(eval_formula(a, f, {}, par) == eval_formula(a, f));
  }
}

TEST_CASE("uniform continuity transfer through composed moduli") {
  // moving every free variable by at most D moves the value by at most the
  // composed modulus bound; holds for structures in full modulus compliance
  clwtest::Rng rng(35);
  auto run_corpus = [&](const FiniteStructure& a, int trials) {
    REQUIRE(compliance_report(a).overall == StructureClass::Structure);
    const Signature& sig = a.sig;
    int checked = 0;
    for (int trial = 0; trial < trials; ++trial) {
      FormulaPtr f = clwtest::random_formula(sig, 3, {"u", "w"}, rng);
      if (!check_formula(f, sig).empty()) continue;
      auto fv = free_vars(f);
      if (fv.empty()) continue;
      std::set<std::string> displaced(fv.begin(), fv.end());
      for (int i = 0; i < a.n(); ++i) {
        for (int j = 0; j < a.n(); ++j) {
          Assignment one, two;
          for (const auto& v : fv) {
            one.set(v, i);
            two.set(v, j);
          }
          double shift = a.d(i, j);
          double bound = formula_shift_bound(f, sig, shift, displaced);
          double gap =
              std::fabs(eval_formula(a, f, one) - eval_formula(a, f, two));
          CHECK(gap <= bound + 1e-9);
          ++checked;
        }
      }
    }
    return checked;
  };

  // relational interval nets comply exactly, and the identity modulus of P
  // makes the bound tight
  int checked = 0;
  for (int m : {4, 8}) {
    NetResult net = generate_net(SpaceSpec::interval(false), m);
    checked += run_corpus(net.structure, 30);
  }
  CHECK(checked > 500);

  // random band structures comply once every modulus is slackened to eps/2
  Signature loose = clwtest::dyadic_signature();
  for (auto& p : loose.predicates) p.modulus = pl_shrink(2);
  for (auto& f : loose.functions) f.modulus = pl_shrink(2);
  for (int trial = 0; trial < 5; ++trial) {
    FiniteStructure a = clwtest::random_dyadic_structure(loose, 5, rng);
    a.sig = loose;
    run_corpus(a, 10);
  }
}

TEST_CASE("pruning stays sound under non-monotone unary maps") {
  Signature sig = clwtest::dyadic_signature();
  PlFunc hump({{0.0, 0.0}, {0.5, 1.0}, {1.0, 0.25}}, false, false);
  clwtest::Rng rng(36);
  EvalOptions plain;
  plain.pruning = false;
  for (int trial = 0; trial < 50; ++trial) {
    FiniteStructure a = clwtest::random_dyadic_structure(sig, 5, rng);
    FormulaPtr inner = clwtest::random_formula(sig, 2, {"v"}, rng);
    if (!check_formula(inner, sig).empty()) continue;
    FormulaPtr f = fml::sup(
        "v", fml::fmin({fml::apply("hump", hump, inner),
                        clwtest::random_formula(sig, 2, {"v"}, rng)}));
    if (!check_formula(f, sig).empty()) continue;
    CHECK(eval_formula(a, f) == eval_formula(a, f, {}, plain));
  }
}

TEST_CASE("atom cap raises a resource error") {
  NetResult net = generate_net(SpaceSpec::circle(), 32);
  FormulaPtr s = fml::sup(
      "y", fml::inf("x", fml::pred("P", {tvar("x"), tvar("x"), tvar("y")})));
  EvalOptions opts;
  opts.atom_cap = 10;
  CHECK_THROWS_AS(eval_formula(net.structure, s, {}, opts), ResourceError);
}

TEST_CASE("witness trace serializes with point labels") {
  NetResult net = generate_net(SpaceSpec::interval(false), 4);
  FormulaPtr f = fml::sup("x", fml::pred("P", {tvar("x")}));
  WitnessResult w = eval_witness(net.structure, f);
  CHECK(w.value == 1.0);
  CHECK(w.trace.label == "1");
  ojson j = witness_to_json(w.trace);
  CHECK(j["var"] == "x");
  CHECK(j["label"] == "1");
}
