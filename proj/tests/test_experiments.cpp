#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <bit>
#include <cmath>

#include "clw/evaluator.hpp"
#include "clw/experiments.hpp"
#include "corpus.hpp"

using namespace clw;

TEST_CASE("threshold sentences vanish on classical structures") {
  clwtest::Rng rng(41);
  PlFunc alpha = pl_min_scale(2);
  for (int trial = 0; trial < 10; ++trial) {
    Signature sig = clwtest::random_classical_signature(rng);
    ClassicalStructure b = clwtest::random_classical_structure(sig, 4, rng);
    FiniteStructure a = classical_as_metric(b);
    // two-case oracle: at value 1, 1 -. alpha(1/2) = 0; at 0 it is 0
    CHECK(dot_minus(1.0, alpha.eval(dot_minus(1.0, 0.5))) == 0.0);
    auto [sigma_p, tau] = build_threshold_sentences(a.sig, sig.predicates[0].name, alpha);
    CHECK(eval_formula(a, sigma_p) == 0.0);
    CHECK(eval_formula(a, tau) == 0.0);
  }
}

TEST_CASE("tau threshold sentence is positive on the 8-point interval net") {
  NetResult net = generate_net(SpaceSpec::interval(true), 8);
  auto [sigma_p, tau] =
      build_threshold_sentences(net.structure.sig, "P", pl_min_scale(2));
  (void)sigma_p;
  FiniteStructure a = discretize_symbols(net);
  double v = eval_formula(a, tau);
  // single-pair lower bound at d = 0.625: 0.625 - alpha(0.125) = 0.375
  CHECK(v >= 0.375);
  // brute-force sup over the distance grid
  double brute = 0.0;
  for (int i = 0; i < a.n(); ++i) {
    for (int j = 0; j < a.n(); ++j) {
      double d = a.d(i, j);
      brute = std::max(brute, dot_minus(d, pl_min_scale(2).eval(dot_minus(d, 0.5))));
    }
  }
  CHECK(v == brute);
  CHECK(v == 0.5);
}

TEST_CASE("injectivity/surjectivity sentences: circle components") {
  InjSurjSentences s = build_injsurj(circle_injsurj_spec());
  for (int m : {8, 10, 16}) {
    NetResult net = generate_net(SpaceSpec::circle(), m);
    const FiniteStructure& a = net.structure;
    CAPTURE(m);
    // Q = 0 exactly: the triangle inequality through the common image point
    CHECK(eval_formula(a, s.q) == 0.0);
    CHECK(eval_formula(a, s.p) == 0.0);
    if (m % 2 == 0) {
      CHECK(eval_formula(a, s.r) == 0.0);
      CHECK(eval_formula(a, s.s) ==
            doctest::Approx(std::sin(M_PI / m)).epsilon(1e-12));
      CHECK(eval_formula(a, s.sigma) ==
            doctest::Approx(std::sin(M_PI / m)).epsilon(1e-12));
    } else {
      // odd circle: squaring is a bijection, S = 0, but no pair sits at
      // distance exactly 1 so R stays positive
      CHECK(eval_formula(a, s.s) == 0.0);
      CHECK(eval_formula(a, s.r) > 0.0);
      CHECK(eval_formula(a, s.sigma) > 0.0);
    }
  }
}

TEST_CASE("injectivity/surjectivity sentences: interval components") {
  InjSurjSentences s = build_injsurj(interval_injsurj_spec());
  std::vector<double> sigmas;
  for (int m : {8, 16, 64}) {
    NetResult net = generate_net(SpaceSpec::interval(true), m);
    FiniteStructure a = discretize_symbols(net);
    CAPTURE(m);
    CHECK(eval_formula(a, s.q) == 0.0);
    CHECK(eval_formula(a, s.p) == 0.0);
    CHECK(eval_formula(a, s.s) == 0.0);  // y = 1 realizes the 1/2 gap
    double sigma = eval_formula(a, s.sigma);
    CHECK(sigma > 0.0);
    CHECK(sigma == eval_formula(a, s.r));
    sigmas.push_back(sigma);
  }
  CHECK(sigmas.back() <= sigmas.front());
  // on a fine net every component is mesh-order small
  CHECK(sigmas.back() <= 4.0 / 64);
  // witness-flag validation
  InjSurjSpec bad = interval_injsurj_spec();
  bad.beta = PlFunc({{0.0, 0.5}, {1.0, 1.0}}, true, false);
  CHECK_THROWS_AS(build_injsurj(bad), std::invalid_argument);
}

TEST_CASE("apaa: witness arithmetic for m = 7, n = 2") {
  // independent set oracle: e = {1,3,5,7}, tau(e) = {2,4,6,1},
  // e n tau(e) = {1}
  const int m = 7;
  std::uint32_t e = 0;
  for (int elem : {1, 3, 5, 7}) e |= 1u << (elem - 1);
  std::uint32_t tau_e = ((e << 1) | (e >> (m - 1))) & ((1u << m) - 1);
  CHECK(std::popcount(e) == 4);
  CHECK(std::popcount(e & tau_e) == 1);
  double witness_oracle =
      std::max(std::fabs(4.0 / 7 - 0.5), double(std::popcount(e & tau_e)) / m);
  CHECK(witness_oracle == doctest::Approx(1.0 / 7).epsilon(1e-15));

  ExperimentReport rep = run_apaa(7, 2);
  INFO(rep.summary());
  CHECK(rep.pass());
  CHECK(double(rep.values["witness"]) == doctest::Approx(1.0 / 7).epsilon(1e-12));
  CHECK(double(rep.values["k"]) == 4);
  CHECK(double(rep.values["brute_force"]) <= 1.0 / 7 + 1e-12);
}

TEST_CASE("apaa: n = 1 reduces to the full event") {
  ExperimentReport rep = run_apaa(5, 1);
  CHECK(rep.pass());
  CHECK(double(rep.values["brute_force"]) == 0.0);
}

TEST_CASE("apaa: paper bound at m = 12, n = 3") {
  ExperimentReport rep = run_apaa(12, 3);
  CHECK(rep.pass());
  CHECK(double(rep.values["brute_force"]) <= 3.0 / 11 + 1e-12);
  CHECK_THROWS_AS(run_apaa(15, 2), ResourceError);
  CHECK_THROWS_AS(run_apaa(4, 4), std::invalid_argument);
}

TEST_CASE("atomlessness experiment: 1/m exactly, single atom gives 1") {
  ExperimentReport r4 = run_atomless(4);
  CHECK(r4.pass());
  CHECK(double(r4.values["value"]) == 0.25);

  ExperimentReport r1 = run_atomless(1);
  CHECK(r1.pass());
  CHECK(double(r1.values["value"]) == 1.0);
}

TEST_CASE("unitary eigenvalue sentence: witness and plane net") {
  for (int n : {0, 1, 2}) {
    ExperimentReport rep = run_unitary_eigen(n, n + 2);
    INFO(rep.summary());
    CHECK(rep.pass());
    CHECK(double(rep.values["witness_value"]) == 0.0);
    CHECK(double(rep.values["net_value"]) <= 2.0 * double(rep.values["mesh"]) + 1e-9);
  }
  CHECK_THROWS_AS(run_unitary_eigen(3, 2), std::invalid_argument);
}

TEST_CASE("categoricity formulas vanish at the defining tuple") {
  SpaceSpec spec = SpaceSpec::interval(true);
  NetResult net = generate_net(spec, 4);
  FiniteStructure a = discretize_symbols(net);
  CategoricitySet cat = build_categoricity(a, net.mesh, 4);
  Assignment defining;
  for (int i = 0; i < a.n(); ++i) defining.set(cat.vars[i], i);
  CHECK(eval_formula(a, cat.psi, defining) == 0.0);
  CHECK(eval_formula(a, cat.chi, defining) == 0.0);
  CHECK(eval_formula(a, cat.tau, defining) == 0.0);
  CHECK(eval_formula(a, cat.phi, defining) == 0.0);

  // a 1/m-net is required: resolution 4 has mesh 1/8, too coarse for m = 16
  CHECK_THROWS_AS(build_categoricity(a, net.mesh, 16), std::invalid_argument);

  ExperimentReport rep = run_categoricity(8);
  INFO(rep.summary());
  CHECK(rep.pass());
}

TEST_CASE("convergence experiment passes on circle and writes CSV") {
  SpaceSpec spec = SpaceSpec::circle();
  std::vector<ConvergenceRow> rows;
  ExperimentReport rep =
      run_convergence(spec, convergence_battery(spec), {8, 16, 32}, 256, &rows);
  INFO(rep.summary());
  CHECK(rep.pass());
  // closed-form oracle for the defect column: sin(pi/m)
  for (const auto& r : rows) {
    if (r.sentence == "surjectivity_defect") {
      CHECK(r.value == doctest::Approx(std::sin(M_PI / r.m)).epsilon(1e-12));
    }
    if (r.sentence == "closest_point") CHECK(r.value == 0.0);
  }
  std::string csv = convergence_csv(rows);
  CHECK(csv.rfind("sentence,m,value,reference,error\n", 0) == 0);
  CHECK(csv.find("surjectivity_defect,8,") != std::string::npos);
}

TEST_CASE("experiment reports serialize both sides of each assertion") {
  ExperimentReport rep = run_apaa(6, 2);
  ojson j = rep.to_json();
  CHECK(j["experiment"] == "apaa");
  REQUIRE(!j["assertions"].empty());
  for (const auto& a : j["assertions"]) {
    CHECK(a.contains("lhs"));
    CHECK(a.contains("rhs"));
    CHECK(a.contains("pass"));
  }
  CHECK(j["pass"] == rep.pass());
}
