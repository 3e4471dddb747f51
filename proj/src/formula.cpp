#include "clw/formula.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <set>
#include <sstream>
#include <stdexcept>

namespace clw {

Term tvar(std::string name) { return Term{Term::Kind::Var, std::move(name), {}}; }
Term tconst(std::string name) { return Term{Term::Kind::Const, std::move(name), {}}; }
Term tapp(std::string name, std::vector<Term> args) {
  return Term{Term::Kind::App, std::move(name), std::move(args)};
}

bool Term::operator==(const Term& t) const {
  return kind == t.kind && name == t.name && args == t.args;
}

namespace fml {

static FormulaPtr mk(Formula f) { return std::make_shared<Formula>(std::move(f)); }

FormulaPtr dist(Term a, Term b) {
  Formula f;
  f.kind = Formula::Kind::Dist;
  f.terms = {std::move(a), std::move(b)};
  return mk(std::move(f));
}

FormulaPtr pred(std::string name, std::vector<Term> args) {
  Formula f;
  f.kind = Formula::Kind::Pred;
  f.name = std::move(name);
  f.terms = std::move(args);
  return mk(std::move(f));
}

FormulaPtr cst(double c) {
  if (!(c >= 0.0 && c <= 1.0)) {
    throw std::invalid_argument("formula constant outside [0,1]");
  }
  Formula f;
  f.kind = Formula::Kind::Const;
  f.value = c;
  return mk(std::move(f));
}

static FormulaPtr unary(Formula::Kind k, FormulaPtr a) {
  Formula f;
  f.kind = k;
  f.children = {std::move(a)};
  return mk(std::move(f));
}

static FormulaPtr binary(Formula::Kind k, FormulaPtr a, FormulaPtr b) {
  Formula f;
  f.kind = k;
  f.children = {std::move(a), std::move(b)};
  return mk(std::move(f));
}

FormulaPtr neg(FormulaPtr a) { return unary(Formula::Kind::Neg, std::move(a)); }
FormulaPtr dminus(FormulaPtr a, FormulaPtr b) {
  // canonical form: 1 -. x is negation (values never exceed 1)
  if (a->kind == Formula::Kind::Const && a->value == 1.0) {
    return neg(std::move(b));
  }
  return binary(Formula::Kind::DotMinus, std::move(a), std::move(b));
}
FormulaPtr tadd(FormulaPtr a, FormulaPtr b) {
  return binary(Formula::Kind::TruncAdd, std::move(a), std::move(b));
}
FormulaPtr absdiff(FormulaPtr a, FormulaPtr b) {
  return binary(Formula::Kind::AbsDiff, std::move(a), std::move(b));
}

FormulaPtr fmax(std::vector<FormulaPtr> xs) {
  if (xs.empty()) throw std::invalid_argument("max needs at least one argument");
  Formula f;
  f.kind = Formula::Kind::Max;
  f.children = std::move(xs);
  return mk(std::move(f));
}

FormulaPtr fmin(std::vector<FormulaPtr> xs) {
  if (xs.empty()) throw std::invalid_argument("min needs at least one argument");
  Formula f;
  f.kind = Formula::Kind::Min;
  f.children = std::move(xs);
  return mk(std::move(f));
}

FormulaPtr scale(double q, FormulaPtr a) {
  if (!(q > 0.0 && q <= 1.0)) {
    throw std::invalid_argument("scale factor must lie in (0,1]");
  }
  Formula f;
  f.kind = Formula::Kind::Scale;
  f.value = q;
  f.children = {std::move(a)};
  return mk(std::move(f));
}

FormulaPtr apply(std::string name, PlFunc u, FormulaPtr a) {
  Formula f;
  f.kind = Formula::Kind::Apply;
  f.name = std::move(name);
  f.pl = std::move(u);
  f.children = {std::move(a)};
  return mk(std::move(f));
}

FormulaPtr sup(std::string var, FormulaPtr a) {
  Formula f;
  f.kind = Formula::Kind::Sup;
  f.name = std::move(var);
  f.children = {std::move(a)};
  return mk(std::move(f));
}

FormulaPtr inf(std::string var, FormulaPtr a) {
  Formula f;
  f.kind = Formula::Kind::Inf;
  f.name = std::move(var);
  f.children = {std::move(a)};
  return mk(std::move(f));
}

}  // namespace fml

bool formulas_equal(const FormulaPtr& a, const FormulaPtr& b) {
  if (a == b) return true;
  if (!a || !b) return false;
  if (a->kind != b->kind || a->value != b->value || a->name != b->name ||
      a->terms != b->terms || a->children.size() != b->children.size()) {
    return false;
  }
  if (a->pl.has_value() != b->pl.has_value()) return false;
  if (a->pl && !(*a->pl == *b->pl)) return false;
  for (std::size_t i = 0; i < a->children.size(); ++i) {
    if (!formulas_equal(a->children[i], b->children[i])) return false;
  }
  return true;
}

std::vector<std::string> term_vars(const Term& t) {
  std::vector<std::string> out;
  auto walk = [&](auto&& self, const Term& u) -> void {
    if (u.kind == Term::Kind::Var) {
      if (std::find(out.begin(), out.end(), u.name) == out.end()) out.push_back(u.name);
    }
    for (const auto& a : u.args) self(self, a);
  };
  walk(walk, t);
  return out;
}

static void free_vars_walk(const FormulaPtr& f, std::vector<std::string>& scope,
                           std::vector<std::string>& out) {
  auto add_term = [&](const Term& t) {
    for (const auto& v : term_vars(t)) {
      if (std::find(scope.begin(), scope.end(), v) == scope.end() &&
          std::find(out.begin(), out.end(), v) == out.end()) {
        out.push_back(v);
      }
    }
  };
  for (const auto& t : f->terms) add_term(t);
  bool binds = f->kind == Formula::Kind::Sup || f->kind == Formula::Kind::Inf;
  if (binds) scope.push_back(f->name);
  for (const auto& c : f->children) free_vars_walk(c, scope, out);
  if (binds) scope.pop_back();
}

std::vector<std::string> free_vars(const FormulaPtr& f) {
  std::vector<std::string> scope, out;
  free_vars_walk(f, scope, out);
  return out;
}

static void collect_bound(const FormulaPtr& f, std::set<std::string>& out) {
  if (f->kind == Formula::Kind::Sup || f->kind == Formula::Kind::Inf) {
    out.insert(f->name);
  }
  for (const auto& c : f->children) collect_bound(c, out);
}

static void check_term(const Term& t, const Signature& sig, int expect_point,
                       std::vector<std::string>& out) {
  (void)expect_point;
  switch (t.kind) {
    case Term::Kind::Var:
      if (sig.has_symbol(t.name)) {
        out.push_back("variable name collides with signature symbol: " + t.name);
      }
      break;
    case Term::Kind::Const:
      if (!sig.has_constant(t.name)) {
        out.push_back("unknown constant symbol: " + t.name);
      }
      break;
    case Term::Kind::App: {
      const FunctionSymbol* fs = sig.function(t.name);
      if (!fs) {
        out.push_back("unknown function symbol: " + t.name);
      } else if ((int)t.args.size() != fs->arity) {
        out.push_back("arity mismatch for function " + t.name);
      }
      for (const auto& a : t.args) check_term(a, sig, 0, out);
      break;
    }
  }
}

static void check_walk(const FormulaPtr& f, const Signature& sig,
                       std::vector<std::string>& scope,
                       std::vector<std::string>& out) {
  switch (f->kind) {
    case Formula::Kind::Dist:
      for (const auto& t : f->terms) check_term(t, sig, 0, out);
      break;
    case Formula::Kind::Pred: {
      const PredicateSymbol* ps = sig.predicate(f->name);
      if (!ps) {
        out.push_back("unknown predicate symbol: " + f->name);
      } else if ((int)f->terms.size() != ps->arity) {
        out.push_back("arity mismatch for predicate " + f->name);
      }
      for (const auto& t : f->terms) check_term(t, sig, 0, out);
      break;
    }
    case Formula::Kind::Const:
      if (!(f->value >= 0.0 && f->value <= 1.0)) {
        out.push_back("constant outside [0,1]");
      }
      break;
    case Formula::Kind::Scale:
      if (!(f->value > 0.0 && f->value <= 1.0)) {
        out.push_back("scale factor outside (0,1]");
      }
      break;
    case Formula::Kind::Sup:
    case Formula::Kind::Inf:
      if (std::find(scope.begin(), scope.end(), f->name) != scope.end()) {
        out.push_back("capture violation: rebinding of variable " + f->name);
      }
      if (sig.has_symbol(f->name)) {
        out.push_back("bound variable collides with signature symbol: " + f->name);
      }
      scope.push_back(f->name);
      for (const auto& c : f->children) check_walk(c, sig, scope, out);
      scope.pop_back();
      return;
    default:
      break;
  }
  for (const auto& c : f->children) check_walk(c, sig, scope, out);
}

std::vector<std::string> check_formula(const FormulaPtr& f, const Signature& sig) {
  std::vector<std::string> out, scope;
  check_walk(f, sig, scope, out);
  // hygiene: a name may not occur both free and bound in the same tree
  std::set<std::string> bound;
  collect_bound(f, bound);
  for (const auto& v : free_vars(f)) {
    if (bound.count(v)) {
      out.push_back("capture violation: " + v + " occurs both free and bound");
    }
  }
  return out;
}

Term substitute_term_vars(const Term& t, const std::map<std::string, Term>& subst) {
  switch (t.kind) {
    case Term::Kind::Var: {
      auto it = subst.find(t.name);
      return it == subst.end() ? t : it->second;
    }
    case Term::Kind::Const:
      return t;
    case Term::Kind::App: {
      std::vector<Term> args;
      args.reserve(t.args.size());
      for (const auto& a : t.args) args.push_back(substitute_term_vars(a, subst));
      return tapp(t.name, std::move(args));
    }
  }
  return t;
}

static void collect_all_names(const FormulaPtr& f, std::set<std::string>& out) {
  for (const auto& t : f->terms) {
    for (const auto& v : term_vars(t)) out.insert(v);
  }
  if (f->kind == Formula::Kind::Sup || f->kind == Formula::Kind::Inf) {
    out.insert(f->name);
  }
  for (const auto& c : f->children) collect_all_names(c, out);
}

static std::string fresh_name(std::string base, const std::set<std::string>& used) {
  std::string n = std::move(base);
  while (used.count(n)) n += "'";
  return n;
}

FormulaPtr substitute_vars(const FormulaPtr& f,
                           const std::map<std::string, Term>& subst) {
  if (subst.empty()) return f;
  switch (f->kind) {
    case Formula::Kind::Dist:
    case Formula::Kind::Pred: {
      Formula g = *f;
      for (auto& t : g.terms) t = substitute_term_vars(t, subst);
      return std::make_shared<Formula>(std::move(g));
    }
    case Formula::Kind::Sup:
    case Formula::Kind::Inf: {
      std::map<std::string, Term> inner = subst;
      inner.erase(f->name);  // shadowed
      // rename the binder if a substituted term would capture it
      bool capture = false;
      for (const auto& [from, to] : inner) {
        (void)from;
        auto tv = term_vars(to);
        if (std::find(tv.begin(), tv.end(), f->name) != tv.end()) {
          capture = true;
          break;
        }
      }
      std::string var = f->name;
      FormulaPtr body = f->children[0];
      if (capture) {
        std::set<std::string> used;
        collect_all_names(f, used);
        for (const auto& [from, to] : inner) {
          used.insert(from);
          for (const auto& v : term_vars(to)) used.insert(v);
        }
        std::string renamed = fresh_name(var, used);
        body = substitute_vars(body, {{var, tvar(renamed)}});
        var = renamed;
      }
      if (inner.empty()) {
        if (!capture) return f;
        Formula g = *f;
        g.name = var;
        g.children = {body};
        return std::make_shared<Formula>(std::move(g));
      }
      Formula g = *f;
      g.name = var;
      g.children = {substitute_vars(body, inner)};
      return std::make_shared<Formula>(std::move(g));
    }
    default: {
      if (f->children.empty()) return f;
      Formula g = *f;
      for (auto& c : g.children) c = substitute_vars(c, subst);
      return std::make_shared<Formula>(std::move(g));
    }
  }
}

static Term abstract_in_term(const Term& t, const std::map<std::string, std::string>& ren) {
  switch (t.kind) {
    case Term::Kind::Var:
      return t;
    case Term::Kind::Const: {
      auto it = ren.find(t.name);
      return it == ren.end() ? t : tvar(it->second);
    }
    case Term::Kind::App: {
      std::vector<Term> args;
      for (const auto& a : t.args) args.push_back(abstract_in_term(a, ren));
      return tapp(t.name, std::move(args));
    }
  }
  return t;
}

static FormulaPtr abstract_walk(const FormulaPtr& f,
                                const std::map<std::string, std::string>& ren) {
  Formula g = *f;
  for (auto& t : g.terms) t = abstract_in_term(t, ren);
  for (auto& c : g.children) c = abstract_walk(c, ren);
  return std::make_shared<Formula>(std::move(g));
}

FormulaPtr abstract_constants(const FormulaPtr& sentence,
                              const std::vector<std::string>& constants,
                              const Signature& sig) {
  for (const auto& c : constants) {
    if (!sig.has_constant(c)) {
      throw std::invalid_argument("abstract_constants: unknown constant symbol " + c);
    }
  }
  if (constants.empty()) return sentence;
  std::set<std::string> used;
  collect_all_names(sentence, used);
  std::map<std::string, std::string> ren;
  std::vector<std::string> fresh;
  for (const auto& c : constants) {
    std::string v = fresh_name("x_" + c, used);
    used.insert(v);
    ren[c] = v;
    fresh.push_back(v);
  }
  FormulaPtr body = abstract_walk(sentence, ren);
  for (auto it = fresh.rbegin(); it != fresh.rend(); ++it) {
    body = fml::sup(*it, body);
  }
  return body;
}

static FormulaPtr subst_pred_walk(const FormulaPtr& f, const std::string& p,
                                  const std::vector<std::string>& params,
                                  const FormulaPtr& replacement,
                                  const std::set<std::string>& danger,
                                  std::set<std::string>& used) {
  if (f->kind == Formula::Kind::Pred && f->name == p) {
    if (f->terms.size() != params.size()) {
      throw std::invalid_argument("substitute_predicate: arity mismatch for " + p);
    }
    std::map<std::string, Term> subst;
    for (std::size_t i = 0; i < params.size(); ++i) subst[params[i]] = f->terms[i];
    return substitute_vars(replacement, subst);
  }
  if (f->kind == Formula::Kind::Sup || f->kind == Formula::Kind::Inf) {
    std::string var = f->name;
    FormulaPtr body = f->children[0];
    if (danger.count(var)) {
      // the binder would capture a free variable of the replacement
      std::string renamed = fresh_name(var, used);
      used.insert(renamed);
      body = substitute_vars(body, {{var, tvar(renamed)}});
      var = renamed;
    }
    Formula g = *f;
    g.name = var;
    g.children = {subst_pred_walk(body, p, params, replacement, danger, used)};
    return std::make_shared<Formula>(std::move(g));
  }
  if (f->children.empty()) return f;
  Formula g = *f;
  for (auto& c : g.children) {
    c = subst_pred_walk(c, p, params, replacement, danger, used);
  }
  return std::make_shared<Formula>(std::move(g));
}

namespace {

// alpha-rename every binder in f to a name outside `used`, keeping the
// output hygienic no matter where it is spliced in
FormulaPtr rename_binders_fresh(const FormulaPtr& f, std::set<std::string>& used) {
  if (f->kind == Formula::Kind::Sup || f->kind == Formula::Kind::Inf) {
    std::string renamed = fresh_name(f->name + "'", used);
    used.insert(renamed);
    FormulaPtr body = substitute_vars(f->children[0], {{f->name, tvar(renamed)}});
    Formula g = *f;
    g.name = renamed;
    g.children = {rename_binders_fresh(body, used)};
    return std::make_shared<Formula>(std::move(g));
  }
  if (f->children.empty()) return f;
  Formula g = *f;
  for (auto& c : g.children) c = rename_binders_fresh(c, used);
  return std::make_shared<Formula>(std::move(g));
}

}  // namespace

FormulaPtr substitute_predicate(const FormulaPtr& f, const std::string& p,
                                const std::vector<std::string>& params,
                                const FormulaPtr& replacement) {
  std::set<std::string> used;
  collect_all_names(f, used);
  collect_all_names(replacement, used);
  for (const auto& v : params) used.insert(v);
  FormulaPtr repl = rename_binders_fresh(replacement, used);
  std::set<std::string> danger;
  for (const auto& v : free_vars(repl)) {
    if (std::find(params.begin(), params.end(), v) == params.end()) danger.insert(v);
  }
  return subst_pred_walk(f, p, params, repl, danger, used);
}

namespace cfml {

static CFormulaPtr mk(ClassicalFormula f) {
  return std::make_shared<ClassicalFormula>(std::move(f));
}

CFormulaPtr eq(Term a, Term b) {
  ClassicalFormula f;
  f.kind = ClassicalFormula::Kind::Equal;
  f.terms = {std::move(a), std::move(b)};
  return mk(std::move(f));
}

CFormulaPtr pred(std::string name, std::vector<Term> args) {
  ClassicalFormula f;
  f.kind = ClassicalFormula::Kind::Pred;
  f.name = std::move(name);
  f.terms = std::move(args);
  return mk(std::move(f));
}

CFormulaPtr not_(CFormulaPtr a) {
  ClassicalFormula f;
  f.kind = ClassicalFormula::Kind::Not;
  f.children = {std::move(a)};
  return mk(std::move(f));
}

CFormulaPtr and_(CFormulaPtr a, CFormulaPtr b) {
  ClassicalFormula f;
  f.kind = ClassicalFormula::Kind::And;
  f.children = {std::move(a), std::move(b)};
  return mk(std::move(f));
}

CFormulaPtr or_(CFormulaPtr a, CFormulaPtr b) {
  return not_(and_(not_(std::move(a)), not_(std::move(b))));
}

CFormulaPtr exists(std::string var, CFormulaPtr a) {
  ClassicalFormula f;
  f.kind = ClassicalFormula::Kind::Exists;
  f.name = std::move(var);
  f.children = {std::move(a)};
  return mk(std::move(f));
}

CFormulaPtr forall(std::string var, CFormulaPtr a) {
  return not_(exists(std::move(var), not_(std::move(a))));
}

}  // namespace cfml

static void cfree_walk(const CFormulaPtr& f, std::vector<std::string>& scope,
                       std::vector<std::string>& out) {
  for (const auto& t : f->terms) {
    for (const auto& v : term_vars(t)) {
      if (std::find(scope.begin(), scope.end(), v) == scope.end() &&
          std::find(out.begin(), out.end(), v) == out.end()) {
        out.push_back(v);
      }
    }
  }
  bool binds = f->kind == ClassicalFormula::Kind::Exists;
  if (binds) scope.push_back(f->name);
  for (const auto& c : f->children) cfree_walk(c, scope, out);
  if (binds) scope.pop_back();
}

std::vector<std::string> classical_free_vars(const CFormulaPtr& f) {
  std::vector<std::string> scope, out;
  cfree_walk(f, scope, out);
  return out;
}

std::vector<std::string> check_classical(const CFormulaPtr& f, const Signature& sig) {
  // piggyback on the continuous checker via the transform
  return check_formula(classical_to_continuous(f), sig);
}

bool classical_equal(const CFormulaPtr& a, const CFormulaPtr& b) {
  if (a == b) return true;
  if (!a || !b) return false;
  if (a->kind != b->kind || a->name != b->name || a->terms != b->terms ||
      a->children.size() != b->children.size()) {
    return false;
  }
  for (std::size_t i = 0; i < a->children.size(); ++i) {
    if (!classical_equal(a->children[i], b->children[i])) return false;
  }
  return true;
}

FormulaPtr classical_to_continuous(const CFormulaPtr& f) {
  switch (f->kind) {
    case ClassicalFormula::Kind::Equal:
      return fml::dist(f->terms[0], f->terms[1]);
    case ClassicalFormula::Kind::Pred:
      return fml::pred(f->name, f->terms);
    case ClassicalFormula::Kind::Not:
      return fml::neg(classical_to_continuous(f->children[0]));
    case ClassicalFormula::Kind::And:
      return fml::fmax({classical_to_continuous(f->children[0]),
                        classical_to_continuous(f->children[1])});
    case ClassicalFormula::Kind::Exists:
      return fml::inf(f->name, classical_to_continuous(f->children[0]));
  }
  throw std::logic_error("classical_to_continuous: bad node");
}

static constexpr std::size_t kValueSetCap = 200000;

static std::set<double> vset(const FormulaPtr& f) {
  auto combine = [](const std::set<double>& a, const std::set<double>& b,
                    auto&& op) {
    std::set<double> out;
    for (double x : a) {
      for (double y : b) {
        out.insert(op(x, y));
        if (out.size() > kValueSetCap) {
          throw std::runtime_error("value_set: result set exceeds cap");
        }
      }
    }
    return out;
  };
  switch (f->kind) {
    case Formula::Kind::Dist:
    case Formula::Kind::Pred:
      return {0.0, 1.0};
    case Formula::Kind::Const:
      return {f->value};
    case Formula::Kind::Neg: {
      std::set<double> out;
      for (double x : vset(f->children[0])) out.insert(1.0 - x);
      return out;
    }
    case Formula::Kind::DotMinus:
      return combine(vset(f->children[0]), vset(f->children[1]), dot_minus);
    case Formula::Kind::TruncAdd:
      return combine(vset(f->children[0]), vset(f->children[1]), trunc_add);
    case Formula::Kind::AbsDiff:
      return combine(vset(f->children[0]), vset(f->children[1]),
                     [](double x, double y) { return std::fabs(x - y); });
    case Formula::Kind::Max:
    case Formula::Kind::Min: {
      bool is_max = f->kind == Formula::Kind::Max;
      std::set<double> acc = vset(f->children[0]);
      for (std::size_t i = 1; i < f->children.size(); ++i) {
        acc = combine(acc, vset(f->children[i]), [&](double x, double y) {
          return is_max ? std::max(x, y) : std::min(x, y);
        });
      }
      return acc;
    }
    case Formula::Kind::Scale: {
      std::set<double> out;
      for (double x : vset(f->children[0])) out.insert(f->value * x);
      return out;
    }
    case Formula::Kind::Apply: {
      std::set<double> out;
      for (double x : vset(f->children[0])) out.insert(f->pl->eval(x));
      return out;
    }
    case Formula::Kind::Sup:
    case Formula::Kind::Inf:
      return vset(f->children[0]);
  }
  throw std::logic_error("value_set: bad node");
}

std::vector<double> value_set(const FormulaPtr& f, const Signature& sig) {
  if (!sig.classical) {
    throw std::invalid_argument("value_set: signature not flagged classical");
  }
  auto s = vset(f);
  return std::vector<double>(s.begin(), s.end());
}

std::string format_double(double v) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

std::string pretty(const Term& t) {
  switch (t.kind) {
    case Term::Kind::Var:
    case Term::Kind::Const:
      return t.name;
    case Term::Kind::App: {
      std::string s = t.name + "(";
      for (std::size_t i = 0; i < t.args.size(); ++i) {
        if (i) s += ",";
        s += pretty(t.args[i]);
      }
      return s + ")";
    }
  }
  return "?";
}

static std::string pretty_pl_literal(const PlFunc& u) {
  std::string s = "pl[";
  const auto& pts = u.breakpoints();
  for (std::size_t i = 0; i < pts.size(); ++i) {
    if (i) s += ",";
    s += "(" + format_double(pts[i].first) + "," + format_double(pts[i].second) + ")";
  }
  return s + "]";
}

static std::string pretty_expr(const FormulaPtr& f);

// left operand of a sum: chains print left-associatively, only quantifier
// bodies would swallow the operator and need parentheses
static std::string pretty_sum_lhs(const FormulaPtr& f) {
  switch (f->kind) {
    case Formula::Kind::Sup:
    case Formula::Kind::Inf:
      return "(" + pretty_expr(f) + ")";
    default:
      return pretty_expr(f);
  }
}

// operand position inside a sum or scale: parenthesize sums and quantifiers
static std::string pretty_operand(const FormulaPtr& f) {
  switch (f->kind) {
    case Formula::Kind::Neg:
    case Formula::Kind::DotMinus:
    case Formula::Kind::TruncAdd:
    case Formula::Kind::Scale:
    case Formula::Kind::Sup:
    case Formula::Kind::Inf:
      return "(" + pretty_expr(f) + ")";
    default:
      return pretty_expr(f);
  }
}

static std::string pretty_expr(const FormulaPtr& f) {
  switch (f->kind) {
    case Formula::Kind::Dist:
      return "d(" + pretty(f->terms[0]) + "," + pretty(f->terms[1]) + ")";
    case Formula::Kind::Pred: {
      std::string s = f->name + "(";
      for (std::size_t i = 0; i < f->terms.size(); ++i) {
        if (i) s += ",";
        s += pretty(f->terms[i]);
      }
      return s + ")";
    }
    case Formula::Kind::Const:
      return format_double(f->value);
    case Formula::Kind::Neg:
      return "1 -. " + pretty_operand(f->children[0]);
    case Formula::Kind::DotMinus:
      return pretty_sum_lhs(f->children[0]) + " -. " + pretty_operand(f->children[1]);
    case Formula::Kind::TruncAdd:
      return pretty_sum_lhs(f->children[0]) + " +. " + pretty_operand(f->children[1]);
    case Formula::Kind::AbsDiff:
      return "|" + pretty_expr(f->children[0]) + " - " + pretty_expr(f->children[1]) + "|";
    case Formula::Kind::Max:
    case Formula::Kind::Min: {
      std::string s = f->kind == Formula::Kind::Max ? "max(" : "min(";
      for (std::size_t i = 0; i < f->children.size(); ++i) {
        if (i) s += ", ";
        s += pretty_expr(f->children[i]);
      }
      return s + ")";
    }
    case Formula::Kind::Scale:
      return format_double(f->value) + " * " + pretty_operand(f->children[0]);
    case Formula::Kind::Apply: {
      std::string head = f->name.empty() ? pretty_pl_literal(*f->pl) : f->name;
      return head + "(" + pretty_expr(f->children[0]) + ")";
    }
    case Formula::Kind::Sup:
    case Formula::Kind::Inf: {
      std::string q = f->kind == Formula::Kind::Sup ? "sup " : "inf ";
      return q + f->name + " . (" + pretty_expr(f->children[0]) + ")";
    }
  }
  return "?";
}

std::string pretty(const FormulaPtr& f) { return pretty_expr(f); }

std::string pretty(const CFormulaPtr& f) {
  switch (f->kind) {
    case ClassicalFormula::Kind::Equal:
      return pretty(f->terms[0]) + " = " + pretty(f->terms[1]);
    case ClassicalFormula::Kind::Pred: {
      std::string s = f->name + "(";
      for (std::size_t i = 0; i < f->terms.size(); ++i) {
        if (i) s += ",";
        s += pretty(f->terms[i]);
      }
      return s + ")";
    }
    case ClassicalFormula::Kind::Not:
      return "not (" + pretty(f->children[0]) + ")";
    case ClassicalFormula::Kind::And:
      return "(" + pretty(f->children[0]) + " and " + pretty(f->children[1]) + ")";
    case ClassicalFormula::Kind::Exists:
      return "exists " + f->name + " . (" + pretty(f->children[0]) + ")";
  }
  return "?";
}

}  // namespace clw
