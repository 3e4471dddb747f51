#pragma once

#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "clw/signature.hpp"

namespace clw {

/// First-order term: variable, constant symbol, or function application.
struct Term {
  enum class Kind { Var, Const, App };
  Kind kind = Kind::Var;
  std::string name;
  std::vector<Term> args;

  bool operator==(const Term& t) const;
};

Term tvar(std::string name);
Term tconst(std::string name);
Term tapp(std::string name, std::vector<Term> args);

struct Formula;
using FormulaPtr = std::shared_ptr<const Formula>;

/// Continuous-logic formula. Immutable tree; nodes are shared freely.
///
/// Connective basis: constants, 1-x, truncated -/+, |a-b|, k-ary max/min,
/// scaling by q in (0,1], and composition with a monotone piecewise-linear
/// unary function. Quantifiers are sup/inf binding one variable.
struct Formula {
  enum class Kind {
    Dist,      // d(t1, t2)
    Pred,      // P(t...)
    Const,     // c in [0,1]
    Neg,       // 1 - phi
    DotMinus,  // phi -. psi
    TruncAdd,  // min(phi + psi, 1)
    AbsDiff,   // |phi - psi|
    Max,
    Min,
    Scale,     // q * phi
    Apply,     // u(phi) for piecewise-linear u
    Sup,
    Inf,
  };

  Kind kind = Kind::Const;
  double value = 0.0;            // Const payload, Scale factor
  std::string name;              // Pred symbol, Apply name, Sup/Inf variable
  std::optional<PlFunc> pl;      // Apply payload
  std::vector<Term> terms;       // Dist (2), Pred (arity)
  std::vector<FormulaPtr> children;
};

namespace fml {
FormulaPtr dist(Term a, Term b);
FormulaPtr pred(std::string name, std::vector<Term> args);
FormulaPtr cst(double c);
FormulaPtr neg(FormulaPtr a);
FormulaPtr dminus(FormulaPtr a, FormulaPtr b);
FormulaPtr tadd(FormulaPtr a, FormulaPtr b);
FormulaPtr absdiff(FormulaPtr a, FormulaPtr b);
FormulaPtr fmax(std::vector<FormulaPtr> xs);
FormulaPtr fmin(std::vector<FormulaPtr> xs);
FormulaPtr scale(double q, FormulaPtr a);
FormulaPtr apply(std::string name, PlFunc u, FormulaPtr a);
FormulaPtr sup(std::string var, FormulaPtr a);
FormulaPtr inf(std::string var, FormulaPtr a);
}  // namespace fml

bool formulas_equal(const FormulaPtr& a, const FormulaPtr& b);

/// Free variables in first-occurrence order.
std::vector<std::string> free_vars(const FormulaPtr& f);
std::vector<std::string> term_vars(const Term& t);

/// Well-formedness against a signature: unknown symbols, arity mismatches,
/// constants outside [0,1], and variable-hygiene (capture) violations.
/// Empty result means well-formed.
std::vector<std::string> check_formula(const FormulaPtr& f, const Signature& sig);

/// Simultaneous capture-avoiding substitution of terms for free variables.
FormulaPtr substitute_vars(const FormulaPtr& f,
                           const std::map<std::string, Term>& subst);
Term substitute_term_vars(const Term& t, const std::map<std::string, Term>& subst);

/// Replace each listed constant symbol by a fresh variable and close the
/// result under sup quantifiers (outermost, in list order). Evaluating the
/// output equals the supremum of the input over all reinterpretations of
/// those constants.
FormulaPtr abstract_constants(const FormulaPtr& sentence,
                              const std::vector<std::string>& constants,
                              const Signature& sig);

/// Replace every occurrence of predicate `p` by `replacement` with its
/// parameter variables simultaneously substituted by the occurrence's
/// argument terms (capture-avoiding). The result contains no `p`.
FormulaPtr substitute_predicate(const FormulaPtr& f, const std::string& p,
                                const std::vector<std::string>& params,
                                const FormulaPtr& replacement);

struct ClassicalFormula;
using CFormulaPtr = std::shared_ptr<const ClassicalFormula>;

/// Classical first-order formula over the same signatures. Core connectives
/// only; or/forall are expanded by their builders.
struct ClassicalFormula {
  enum class Kind { Equal, Pred, Not, And, Exists };
  Kind kind = Kind::Equal;
  std::string name;  // Pred symbol, Exists variable
  std::vector<Term> terms;
  std::vector<CFormulaPtr> children;
};

namespace cfml {
CFormulaPtr eq(Term a, Term b);
CFormulaPtr pred(std::string name, std::vector<Term> args);
CFormulaPtr not_(CFormulaPtr a);
CFormulaPtr and_(CFormulaPtr a, CFormulaPtr b);
CFormulaPtr or_(CFormulaPtr a, CFormulaPtr b);    // sugar: not(and(not a, not b))
CFormulaPtr exists(std::string var, CFormulaPtr a);
CFormulaPtr forall(std::string var, CFormulaPtr a);  // sugar: not exists not
}  // namespace cfml

std::vector<std::string> classical_free_vars(const CFormulaPtr& f);
std::vector<std::string> check_classical(const CFormulaPtr& f, const Signature& sig);
bool classical_equal(const CFormulaPtr& a, const CFormulaPtr& b);

/// The continuous transform: equality -> d, predicates unchanged,
/// not -> 1-., and -> max, exists -> inf.
FormulaPtr classical_to_continuous(const CFormulaPtr& f);

/// Finite set of values a formula can take on finite classical structures
/// (discrete metric, {0,1}-valued predicates). Requires sig.classical.
std::vector<double> value_set(const FormulaPtr& f, const Signature& sig);

std::string pretty(const Term& t);
std::string pretty(const FormulaPtr& f);
std::string pretty(const CFormulaPtr& f);
std::string format_double(double v);

}  // namespace clw
