#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <random>

#include "clw/evaluator.hpp"
#include "clw/experiments.hpp"
#include "clw/parser.hpp"
#include <cstdio>
#include <fstream>

#include "corpus.hpp"

using namespace clw;

namespace {

Signature one_pred_sig() {
  Signature sig;
  sig.name = "onepred";
  sig.predicates.push_back({"P", 1, PlFunc::identity()});
  return sig;
}

}  // namespace

TEST_CASE("parser: atoms and the sigma_P tree") {
  Signature sig = one_pred_sig();
  FormulaPtr f = parse_formula("d(x,y)", sig);
  CHECK(f->kind == Formula::Kind::Dist);
  CHECK(f->terms[0] == tvar("x"));
  CHECK(f->terms[1] == tvar("y"));

  PlBindings pl{{"alpha", pl_min_scale(2)}};
  FormulaPtr parsed =
      parse_formula("sup x1 . (P(x1) -. alpha(P(x1) -. 0.5))", sig, pl);
  FormulaPtr built = build_threshold_sentences(sig, "P", pl_min_scale(2)).first;
  CHECK(formulas_equal(parsed, built));
}

TEST_CASE("parser: the aperiodicity axiom body for n = 2") {
  Signature sig = SpaceSpec::prob_algebra(3).signature();
  FormulaPtr parsed = parse_formula(
      "inf e . max(|0.5 - mu(e)|, mu(inter(e, tau(e))))", sig);
  // programmatic tree
  Term e = tvar("e");
  FormulaPtr body = fml::fmax(
      {fml::absdiff(fml::cst(0.5), fml::pred("mu", {e})),
       fml::pred("mu", {tapp("inter", {e, tapp("tau", {e})})})});
  CHECK(formulas_equal(parsed, fml::inf("e", body)));
}

TEST_CASE("parser: errors carry positions and name the symbol") {
  Signature sig = one_pred_sig();
  CHECK_THROWS_AS(parse_formula("sup x . Q(x)", sig), ParseError);
  CHECK_THROWS_AS(parse_formula("P(x, y)", sig), ParseError);  // arity
  CHECK_THROWS_AS(parse_formula("sup x . sup x . P(x)", sig), ParseError);
  CHECK_THROWS_AS(parse_formula("max(P(x), sup x . P(x))", sig), ParseError);
  CHECK_THROWS_AS(parse_formula("d(x,", sig), ParseError);
  CHECK_THROWS_AS(parse_formula("1.5", sig), ParseError);
  try {
    parse_formula("sup x .\n  Q(x)", sig);
    FAIL("expected ParseError");
  } catch (const ParseError& e) {
    CHECK(e.line == 2);
    CHECK(std::string(e.what()).find("Q") != std::string::npos);
  }
}

TEST_CASE("inline piecewise-linear literals parse and round trip") {
  Signature sig = one_pred_sig();
  FormulaPtr f = parse_formula("pl[(0,0),(0.5,1),(1,1)](d(x,y))", sig);
  CHECK(f->kind == Formula::Kind::Apply);
  CHECK(f->name.empty());
  CHECK(*f->pl == pl_min_scale(2));
  CHECK(formulas_equal(parse_formula(pretty(f), sig), f));
}

TEST_CASE("quantifier blocks are sugar for nesting") {
  Signature sig = one_pred_sig();
  CHECK(formulas_equal(
      parse_formula("sup x, y . d(x,y)", sig),
      fml::sup("x", fml::sup("y", fml::dist(tvar("x"), tvar("y"))))));
  CHECK(formulas_equal(
      parse_classical("exists x, y . x = y", sig)
          ? classical_to_continuous(parse_classical("exists x, y . x = y", sig))
          : nullptr,
      fml::inf("x", fml::inf("y", fml::dist(tvar("x"), tvar("y"))))));
}

TEST_CASE("free_vars in first-occurrence order") {
  Signature sig = one_pred_sig();
  CHECK(free_vars(parse_formula("d(x,y)", sig)) ==
        std::vector<std::string>{"x", "y"});
  CHECK(free_vars(parse_formula("sup x . d(x,y)", sig)) ==
        std::vector<std::string>{"y"});
  FormulaPtr sigma = build_threshold_sentences(sig, "P", pl_min_scale(2)).first;
  CHECK(free_vars(sigma).empty());
}

TEST_CASE("round trip: pretty then parse is the identity") {
  Signature sig = clwtest::dyadic_signature();
  clwtest::Rng rng(20260810);
  PlBindings pl{{"id", PlFunc::identity()},
                {"twice", pl_min_scale(2)},
                {"quad", pl_min_scale(4)},
                {"half", pl_shrink(2)},
                {"bend", PlFunc({{0.0, 0.0}, {0.5, 0.25}, {1.0, 1.0}})}};
  int checked = 0;
  for (int i = 0; i < 300; ++i) {
    FormulaPtr f = clwtest::random_formula(sig, 6, {}, rng);
    if (!check_formula(f, sig).empty()) continue;
    std::string text = pretty(f);
    INFO(text);
    FormulaPtr back = parse_formula(text, sig, pl);
    CHECK(formulas_equal(f, back));
    ++checked;
  }
  CHECK(checked > 250);
}

TEST_CASE("abstract_constants closes over the named constants") {
  Signature sig = clwtest::dyadic_signature();  // has constant c
  // d(c,c) -> sup x_c . d(x_c, x_c), identically 0
  FormulaPtr f = fml::dist(tconst("c"), tconst("c"));
  FormulaPtr g = abstract_constants(f, {"c"}, sig);
  CHECK(g->kind == Formula::Kind::Sup);
  CHECK(free_vars(g).empty());

  clwtest::Rng rng(11);
  FiniteStructure a = clwtest::random_dyadic_structure(sig, 4, rng);
  CHECK(eval_formula(a, g) == 0.0);

  // empty list: unchanged
  CHECK(formulas_equal(abstract_constants(f, {}, sig), f));
  CHECK_THROWS_AS(abstract_constants(f, {"nope"}, sig), std::invalid_argument);

  // P(c) on a 2-point structure with P values {0.2, 0.7}: the sup-form
  // equals the brute-force max over reinterpretations of c
  Signature psig = one_pred_sig();
  psig.constants.push_back("c");
  FiniteStructure b;
  b.sig = psig;
  b.points = {"u", "v"};
  b.dist = {0.0, 1.0, 1.0, 0.0};
  b.preds["P"] = {0.2, 0.7};
  b.consts["c"] = 0;
  FormulaPtr pc = fml::pred("P", {tconst("c")});
  FormulaPtr spc = abstract_constants(pc, {"c"}, psig);
  double brute = 0.0;
  for (int i = 0; i < b.n(); ++i) {
    FiniteStructure bi = b;
    bi.consts["c"] = i;
    brute = std::max(brute, eval_formula(bi, pc));
  }
  CHECK(eval_formula(b, spc) == brute);
  CHECK(eval_formula(b, spc) == 0.7);
}

TEST_CASE("abstract_constants equals brute force on random structures") {
  Signature sig = clwtest::dyadic_signature();
  clwtest::Rng rng(12);
  for (int trial = 0; trial < 40; ++trial) {
    FiniteStructure a = clwtest::random_dyadic_structure(sig, 5, rng);
    FormulaPtr f = clwtest::random_formula(sig, 3, {}, rng);
    if (!check_formula(f, sig).empty()) continue;
    FormulaPtr g = abstract_constants(f, {"c"}, sig);
    double brute = 0.0;
    for (int i = 0; i < a.n(); ++i) {
      FiniteStructure ai = a;
      ai.consts["c"] = i;
      brute = std::max(brute, eval_formula(ai, f));
    }
    CHECK(eval_formula(a, g) == brute);
  }
}

TEST_CASE("abstract_constants handles several constants, outermost first") {
  Signature sig = clwtest::dyadic_signature();
  sig.constants.push_back("c2");
  clwtest::Rng rng(14);
  FormulaPtr f =
      fml::absdiff(fml::pred("Q", {tconst("c")}),
                   fml::dist(tconst("c2"), tapp("f", {tconst("c")})));
  FormulaPtr g = abstract_constants(f, {"c", "c2"}, sig);
  REQUIRE(g->kind == Formula::Kind::Sup);
  CHECK(g->name == "x_c");
  CHECK(g->children[0]->name == "x_c2");
  for (int trial = 0; trial < 10; ++trial) {
    FiniteStructure a = clwtest::random_dyadic_structure(sig, 5, rng);
    a.consts["c2"] = 0;
    double brute = 0.0;
    for (int i = 0; i < a.n(); ++i) {
      for (int j = 0; j < a.n(); ++j) {
        FiniteStructure aij = a;
        aij.consts["c"] = i;
        aij.consts["c2"] = j;
        brute = std::max(brute, eval_formula(aij, f));
      }
    }
    CHECK(eval_formula(a, g) == brute);
  }
}

TEST_CASE("substitute_predicate rewrites occurrences capture-free") {
  Signature sig = clwtest::dyadic_signature();
  // P(x) with replacement d(x, c)
  Signature psig = sig;
  psig.predicates.push_back({"P", 1, PlFunc::identity()});
  FormulaPtr f = fml::pred("P", {tvar("x")});
  FormulaPtr repl = fml::dist(tvar("x"), tconst("c"));
  FormulaPtr out = substitute_predicate(f, "P", {"x"}, repl);
  CHECK(formulas_equal(out, repl));

  // through terms and binders: sup x . P(f(x)) with psi = Q(x) -. 0.5
  FormulaPtr g = fml::sup("x", fml::pred("P", {tapp("f", {tvar("x")})}));
  FormulaPtr psi = fml::dminus(fml::pred("Q", {tvar("x")}), fml::cst(0.5));
  FormulaPtr gout = substitute_predicate(g, "P", {"x"}, psi);
  FormulaPtr expect = fml::sup(
      "x", fml::dminus(fml::pred("Q", {tapp("f", {tvar("x")})}), fml::cst(0.5)));
  CHECK(formulas_equal(gout, expect));

  CHECK_THROWS_AS(substitute_predicate(f, "P", {"x", "y"}, repl),
                  std::invalid_argument);
}

TEST_CASE("substitute_predicate: evaluation invariance on random structures") {
  // if the structure interprets P pointwise as psi, substituting psi for P
  // does not change any value
  Signature base = clwtest::dyadic_signature();
  Signature ext = base;
  ext.predicates.push_back({"P", 1, PlFunc::identity()});
  clwtest::Rng rng(13);
  int checked = 0;
  for (int trial = 0; trial < 60; ++trial) {
    FiniteStructure a = clwtest::random_dyadic_structure(base, 4, rng);
    FormulaPtr psi = clwtest::random_formula(base, 2, {"x"}, rng);
    if (!check_formula(psi, base).empty()) continue;
    auto fv = free_vars(psi);
    if (fv.size() > 1) continue;
    FiniteStructure a_ext = a;
    a_ext.sig = ext;
    std::vector<double> ptable(a.n());
    for (int i = 0; i < a.n(); ++i) {
      Assignment asg;
      asg.set("x", i);
      ptable[i] = fv.empty() ? eval_formula(a, psi) : eval_formula(a, psi, asg);
    }
    a_ext.preds["P"] = std::move(ptable);

    FormulaPtr phi = clwtest::random_formula(ext, 3, {}, rng);
    if (!check_formula(phi, ext).empty()) continue;
    FormulaPtr substituted = substitute_predicate(phi, "P", {"x"}, psi);
    CHECK(check_formula(substituted, base).empty());
    CHECK(eval_formula(a_ext, phi) ==
          doctest::Approx(eval_formula(a_ext, substituted)).epsilon(1e-12));
    ++checked;
  }
  CHECK(checked > 20);
}

TEST_CASE("classical transform follows the recursion") {
  Signature sig = one_pred_sig();
  // not (x = y)  ->  1 -. d(x,y)
  CFormulaPtr neq = cfml::not_(cfml::eq(tvar("x"), tvar("y")));
  FormulaPtr t = classical_to_continuous(neq);
  CHECK(formulas_equal(t, fml::neg(fml::dist(tvar("x"), tvar("y")))));
  CHECK(pretty(t) == "1 -. d(x,y)");

  // (x = y) and P(x)  ->  max(d(x,y), P(x))
  CFormulaPtr conj =
      cfml::and_(cfml::eq(tvar("x"), tvar("y")), cfml::pred("P", {tvar("x")}));
  CHECK(formulas_equal(classical_to_continuous(conj),
                       fml::fmax({fml::dist(tvar("x"), tvar("y")),
                                  fml::pred("P", {tvar("x")})})));

  // exists y (y = c): evaluates to 0 on any classical structure
  Signature csig = sig;
  csig.constants.push_back("c");
  csig.classical = true;
  CFormulaPtr ex = cfml::exists("y", cfml::eq(tvar("y"), tconst("c")));
  FormulaPtr ext = classical_to_continuous(ex);
  CHECK(ext->kind == Formula::Kind::Inf);
  clwtest::Rng rng(3);
  Signature rsig = csig;
  ClassicalStructure b = clwtest::random_classical_structure(rsig, 4, rng);
  CHECK(eval_formula(classical_as_metric(b), ext) == 0.0);
}

TEST_CASE("classical parser expands or/forall sugar") {
  Signature sig = one_pred_sig();
  CFormulaPtr parsed = parse_classical("forall x . (P(x) or not P(x))", sig);
  CFormulaPtr built = cfml::forall(
      "x", cfml::or_(cfml::pred("P", {tvar("x")}),
                     cfml::not_(cfml::pred("P", {tvar("x")}))));
  CHECK(classical_equal(parsed, built));
  // only core connectives remain
  auto walk = [](auto&& self, const CFormulaPtr& f) -> bool {
    switch (f->kind) {
      case ClassicalFormula::Kind::Equal:
      case ClassicalFormula::Kind::Pred:
      case ClassicalFormula::Kind::Not:
      case ClassicalFormula::Kind::And:
      case ClassicalFormula::Kind::Exists:
        break;
    }
    for (const auto& c : f->children) {
      if (!self(self, c)) return false;
    }
    return true;
  };
  CHECK(walk(walk, parsed));
}

TEST_CASE("value_set: finite range on classical structures") {
  Signature sig = one_pred_sig();
  sig.classical = true;

  FormulaPtr d = fml::dist(tvar("x"), tvar("y"));
  CHECK(value_set(d, sig) == std::vector<double>{0.0, 1.0});

  FormulaPtr dm = fml::dminus(fml::pred("P", {tvar("x")}), fml::cst(0.5));
  CHECK(value_set(dm, sig) == std::vector<double>{0.0, 0.5});

  FormulaPtr ng = fml::neg(fml::fmax({d, fml::pred("P", {tvar("x")})}));
  CHECK(value_set(ng, sig) == std::vector<double>{0.0, 1.0});

  Signature nc = one_pred_sig();
  CHECK_THROWS_AS(value_set(d, nc), std::invalid_argument);

  // cross-check the closure set by enumerating every classical structure
  // with at most 3 points over {P/1}
  auto rset = value_set(ng, sig);
  for (int n = 1; n <= 3; ++n) {
    for (int bits = 0; bits < (1 << n); ++bits) {
      ClassicalStructure b;
      b.sig = sig;
      for (int i = 0; i < n; ++i) b.points.push_back("p" + std::to_string(i));
      std::vector<std::uint8_t> table(n);
      for (int i = 0; i < n; ++i) table[i] = std::uint8_t((bits >> i) & 1);
      b.relations["P"] = std::move(table);
      FiniteStructure a = classical_as_metric(b);
      for (int x = 0; x < n; ++x) {
        for (int y = 0; y < n; ++y) {
          Assignment asg;
          asg.set("x", x);
          asg.set("y", y);
          double v = eval_formula(a, ng, asg);
          CHECK(std::find(rset.begin(), rset.end(), v) != rset.end());
        }
      }
    }
  }
}

TEST_CASE("value_set contains every evaluation on small classical structures") {
  clwtest::Rng rng(99);
  for (int trial = 0; trial < 30; ++trial) {
    Signature sig = clwtest::random_classical_signature(rng);
    CFormulaPtr sentence = clwtest::random_classical_sentence(sig, 3, rng);
    FormulaPtr t = classical_to_continuous(sentence);
    auto rset = value_set(t, sig);
    for (int s = 0; s < 5; ++s) {
      ClassicalStructure b = clwtest::random_classical_structure(sig, 3, rng);
      double v = eval_formula(classical_as_metric(b), t);
      bool found = false;
      for (double r : rset) {
        if (std::fabs(r - v) <= 1e-9) found = true;
      }
      CHECK(found);
    }
  }
}

TEST_CASE("formula file: pl definitions block plus body") {
  std::string path = "clw_test_formula.cf";
  {
    std::ofstream out(path);
    out << "# threshold sentence\n";
    out << "pl alpha = (0,0) (0.5,1) (1,1)\n";
    out << "sup x1 . (P(x1) -. alpha(P(x1) -. 0.5))\n";
  }
  FormulaFile ff = read_formula_file(path);
  REQUIRE(ff.pl.count("alpha"));
  Signature sig = one_pred_sig();
  FormulaPtr f = parse_formula(ff.body, sig, ff.pl, ff.body_line);
  CHECK(formulas_equal(f, build_threshold_sentences(sig, "P", pl_min_scale(2)).first));
  std::remove(path.c_str());
}
