#include "clw/evaluator.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <thread>

namespace clw {

void Assignment::set(const std::string& var, int point) {
  for (auto& [name, p] : v_) {
    if (name == var) {
      p = point;
      return;
    }
  }
  v_.emplace_back(var, point);
}

std::optional<int> Assignment::get(const std::string& var) const {
  for (const auto& [name, p] : v_) {
    if (name == var) return p;
  }
  return std::nullopt;
}

namespace {

struct Env {
  std::vector<std::pair<std::string, int>> v;

  explicit Env(const Assignment& asg) : v(asg.entries()) {}

  int lookup(const std::string& name) const {
    for (auto it = v.rbegin(); it != v.rend(); ++it) {
      if (it->first == name) return it->second;
    }
    throw EvalError("unbound variable: " + name);
  }
  void push(const std::string& name, int p) { v.emplace_back(name, p); }
  void pop() { v.pop_back(); }
};

struct Interval {
  double lo = 0.0, hi = 1.0;
};

struct EvalCtx {
  const FiniteStructure& a;
  EvalOptions opts;
  EvalStats stats;
  std::map<const Formula*, Interval> bounds;
  double max_dist = -1.0;

  explicit EvalCtx(const FiniteStructure& a_, const EvalOptions& o)
      : a(a_), opts(o) {}

  void count_atom() {
    ++stats.atoms;
    if (opts.atom_cap && stats.atoms > opts.atom_cap) {
      throw ResourceError("atom evaluation cap exceeded");
    }
  }

  double dist_upper() {
    if (max_dist < 0.0) {
      max_dist = 0.0;
      for (double v : a.dist) max_dist = std::max(max_dist, v);
    }
    return max_dist;
  }

  Interval bound(const Formula* f) {
    auto it = bounds.find(f);
    if (it != bounds.end()) return it->second;
    Interval r;
    switch (f->kind) {
      case Formula::Kind::Dist:
        r = {0.0, dist_upper()};
        break;
      case Formula::Kind::Pred: {
        auto pt = a.preds.find(f->name);
        if (pt != a.preds.end() && !pt->second.empty()) {
          auto [mn, mx] = std::minmax_element(pt->second.begin(), pt->second.end());
          r = {*mn, *mx};
        } else {
          r = {0.0, 1.0};
        }
        break;
      }
      case Formula::Kind::Const:
        r = {f->value, f->value};
        break;
      case Formula::Kind::Neg: {
        Interval c = bound(f->children[0].get());
        r = {1.0 - c.hi, 1.0 - c.lo};
        break;
      }
      case Formula::Kind::DotMinus: {
        Interval x = bound(f->children[0].get());
        Interval y = bound(f->children[1].get());
        r = {dot_minus(x.lo, y.hi), dot_minus(x.hi, y.lo)};
        break;
      }
      case Formula::Kind::TruncAdd: {
        Interval x = bound(f->children[0].get());
        Interval y = bound(f->children[1].get());
        r = {trunc_add(x.lo, y.lo), trunc_add(x.hi, y.hi)};
        break;
      }
      case Formula::Kind::AbsDiff: {
        Interval x = bound(f->children[0].get());
        Interval y = bound(f->children[1].get());
        double lo = std::max({0.0, x.lo - y.hi, y.lo - x.hi});
        double hi = std::max({x.hi - y.lo, y.hi - x.lo, 0.0});
        r = {lo, hi};
        break;
      }
      case Formula::Kind::Max: {
        r = {0.0, 0.0};
        bool first = true;
        for (const auto& c : f->children) {
          Interval b = bound(c.get());
          if (first) {
            r = b;
            first = false;
          } else {
            r = {std::max(r.lo, b.lo), std::max(r.hi, b.hi)};
          }
        }
        break;
      }
      case Formula::Kind::Min: {
        r = {1.0, 1.0};
        bool first = true;
        for (const auto& c : f->children) {
          Interval b = bound(c.get());
          if (first) {
            r = b;
            first = false;
          } else {
            r = {std::min(r.lo, b.lo), std::min(r.hi, b.hi)};
          }
        }
        break;
      }
      case Formula::Kind::Scale: {
        Interval c = bound(f->children[0].get());
        r = {f->value * c.lo, f->value * c.hi};
        break;
      }
      case Formula::Kind::Apply: {
        Interval c = bound(f->children[0].get());
        if (f->pl->increasing()) {
          r = {f->pl->eval(c.lo), f->pl->eval(c.hi)};
        } else {
          double lo = 1.0, hi = 0.0;
          for (const auto& [x, y] : f->pl->breakpoints()) {
            (void)x;
            lo = std::min(lo, y);
            hi = std::max(hi, y);
          }
          r = {lo, hi};
        }
        break;
      }
      case Formula::Kind::Sup:
      case Formula::Kind::Inf:
        r = bound(f->children[0].get());
        break;
    }
    bounds.emplace(f, r);
    return r;
  }
};

int eval_term_impl(const FiniteStructure& a, const Term& t, Env& env) {
  switch (t.kind) {
    case Term::Kind::Var:
      return env.lookup(t.name);
    case Term::Kind::Const: {
      auto it = a.consts.find(t.name);
      if (it == a.consts.end()) {
        throw EvalError("constant not interpreted: " + t.name);
      }
      return it->second;
    }
    case Term::Kind::App: {
      auto it = a.funcs.find(t.name);
      if (it == a.funcs.end()) {
        throw EvalError("function not interpreted: " + t.name);
      }
      int args[16];
      if (t.args.size() > 16) throw EvalError("function arity above 16");
      for (std::size_t k = 0; k < t.args.size(); ++k) {
        args[k] = eval_term_impl(a, t.args[k], env);
      }
      return it->second[a.flat_index((int)t.args.size(), args)];
    }
  }
  throw EvalError("bad term");
}

double eval_impl(const Formula* f, Env& env, EvalCtx& ctx) {
  const FiniteStructure& a = ctx.a;
  switch (f->kind) {
    case Formula::Kind::Dist: {
      int i = eval_term_impl(a, f->terms[0], env);
      int j = eval_term_impl(a, f->terms[1], env);
      ctx.count_atom();
      return a.d(i, j);
    }
    case Formula::Kind::Pred: {
      int args[16];
      if (f->terms.size() > 16) throw EvalError("predicate arity above 16");
      for (std::size_t k = 0; k < f->terms.size(); ++k) {
        args[k] = eval_term_impl(a, f->terms[k], env);
      }
      ctx.count_atom();
      if (!a.has_pred_data(f->name)) {
        throw EvalError("predicate not interpreted: " + f->name);
      }
      return a.pred_value(f->name, (int)f->terms.size(), args);
    }
    case Formula::Kind::Const:
      return f->value;
    case Formula::Kind::Neg:
      return 1.0 - eval_impl(f->children[0].get(), env, ctx);
    case Formula::Kind::DotMinus:
      return dot_minus(eval_impl(f->children[0].get(), env, ctx),
                       eval_impl(f->children[1].get(), env, ctx));
    case Formula::Kind::TruncAdd:
      return trunc_add(eval_impl(f->children[0].get(), env, ctx),
                       eval_impl(f->children[1].get(), env, ctx));
    case Formula::Kind::AbsDiff:
      return std::fabs(eval_impl(f->children[0].get(), env, ctx) -
                       eval_impl(f->children[1].get(), env, ctx));
    case Formula::Kind::Max: {
      double r = eval_impl(f->children[0].get(), env, ctx);
      for (std::size_t i = 1; i < f->children.size(); ++i) {
        if (ctx.opts.pruning) {
          // no remaining child can push the max above its upper bound
          double rest_hi = 0.0;
          for (std::size_t k = i; k < f->children.size(); ++k) {
            rest_hi = std::max(rest_hi, ctx.bound(f->children[k].get()).hi);
          }
          if (r >= rest_hi) break;
        }
        double v = eval_impl(f->children[i].get(), env, ctx);
        if (v > r) r = v;
      }
      return r;
    }
    case Formula::Kind::Min: {
      double r = eval_impl(f->children[0].get(), env, ctx);
      for (std::size_t i = 1; i < f->children.size(); ++i) {
        if (ctx.opts.pruning) {
          double rest_lo = 1.0;
          for (std::size_t k = i; k < f->children.size(); ++k) {
            rest_lo = std::min(rest_lo, ctx.bound(f->children[k].get()).lo);
          }
          if (r <= rest_lo) break;
        }
        double v = eval_impl(f->children[i].get(), env, ctx);
        if (v < r) r = v;
      }
      return r;
    }
    case Formula::Kind::Scale:
      return f->value * eval_impl(f->children[0].get(), env, ctx);
    case Formula::Kind::Apply:
      return f->pl->eval(eval_impl(f->children[0].get(), env, ctx));
    case Formula::Kind::Sup: {
      const Formula* child = f->children[0].get();
      double hi = ctx.opts.pruning ? ctx.bound(child).hi : 2.0;
      double r = 0.0;
      bool first = true;
      for (int p = 0; p < a.n(); ++p) {
        env.push(f->name, p);
        double v = eval_impl(child, env, ctx);
        env.pop();
        if (first || v > r) {
          r = v;
          first = false;
        }
        if (ctx.opts.pruning && r >= hi) break;
      }
      return r;
    }
    case Formula::Kind::Inf: {
      const Formula* child = f->children[0].get();
      double lo = ctx.opts.pruning ? ctx.bound(child).lo : -1.0;
      double r = 0.0;
      bool first = true;
      for (int p = 0; p < a.n(); ++p) {
        env.push(f->name, p);
        double v = eval_impl(child, env, ctx);
        env.pop();
        if (first || v < r) {
          r = v;
          first = false;
        }
        if (ctx.opts.pruning && r <= lo) break;
      }
      return r;
    }
  }
  throw EvalError("bad formula node");
}

double eval_parallel_outer(const Formula* f, Env& env, EvalCtx& ctx) {
  const FiniteStructure& a = ctx.a;
  bool is_sup = f->kind == Formula::Kind::Sup;
  const int n = a.n();
  unsigned workers = std::max(1u, std::thread::hardware_concurrency());
  workers = std::min<unsigned>(workers, (unsigned)n);
  std::vector<double> vals(n);
  std::vector<std::uint64_t> atom_counts(workers, 0);
  std::vector<std::thread> threads;
  for (unsigned w = 0; w < workers; ++w) {
    threads.emplace_back([&, w]() {
      EvalCtx local(ctx.a, ctx.opts);
      Env local_env(Assignment{});
      local_env.v = env.v;
      for (int p = w; p < n; p += (int)workers) {
        local_env.push(f->name, p);
        vals[p] = eval_impl(f->children[0].get(), local_env, local);
        local_env.pop();
      }
      atom_counts[w] = local.stats.atoms;
    });
  }
  for (auto& t : threads) t.join();
  for (auto c : atom_counts) ctx.stats.atoms += c;
  double r = vals[0];
  for (int p = 1; p < n; ++p) {
    r = is_sup ? std::max(r, vals[p]) : std::min(r, vals[p]);
  }
  return r;
}

}  // namespace

int eval_term(const FiniteStructure& a, const Term& t, const Assignment& asg) {
  Env env(asg);
  return eval_term_impl(a, t, env);
}

double eval_formula(const FiniteStructure& a, const FormulaPtr& f,
                    const Assignment& asg, const EvalOptions& opts,
                    EvalStats* stats) {
  EvalCtx ctx(a, opts);
  Env env(asg);
  double r;
  if (opts.parallel_outer &&
      (f->kind == Formula::Kind::Sup || f->kind == Formula::Kind::Inf) &&
      a.n() > 1) {
    r = eval_parallel_outer(f.get(), env, ctx);
  } else {
    r = eval_impl(f.get(), env, ctx);
  }
  if (stats) *stats = ctx.stats;
  return r;
}

namespace {

WitnessNode witness_impl(const Formula* f, Env& env, EvalCtx& ctx, double& value) {
  WitnessNode w;
  switch (f->kind) {
    case Formula::Kind::Sup:
    case Formula::Kind::Inf: {
      bool is_sup = f->kind == Formula::Kind::Sup;
      w.node = is_sup ? "sup" : "inf";
      w.var = f->name;
      const FiniteStructure& a = ctx.a;
      double best = 0.0;
      int best_p = 0;
      for (int p = 0; p < a.n(); ++p) {
        env.push(f->name, p);
        double v = eval_impl(f->children[0].get(), env, ctx);
        env.pop();
        if (p == 0 || (is_sup ? v > best : v < best)) {
          best = v;
          best_p = p;
        }
      }
      env.push(f->name, best_p);
      double child_value = 0.0;
      w.children.push_back(witness_impl(f->children[0].get(), env, ctx, child_value));
      env.pop();
      w.point = best_p;
      w.label = ctx.a.points[best_p];
      value = best;
      return w;
    }
    default: {
      switch (f->kind) {
        case Formula::Kind::Dist: w.node = "d"; break;
        case Formula::Kind::Pred: w.node = f->name; break;
        case Formula::Kind::Const: w.node = "const"; break;
        case Formula::Kind::Neg: w.node = "neg"; break;
        case Formula::Kind::DotMinus: w.node = "-."; break;
        case Formula::Kind::TruncAdd: w.node = "+."; break;
        case Formula::Kind::AbsDiff: w.node = "absdiff"; break;
        case Formula::Kind::Max: w.node = "max"; break;
        case Formula::Kind::Min: w.node = "min"; break;
        case Formula::Kind::Scale: w.node = "scale"; break;
        case Formula::Kind::Apply: w.node = "apply"; break;
        default: w.node = "?"; break;
      }
      std::vector<double> child_vals(f->children.size());
      for (std::size_t i = 0; i < f->children.size(); ++i) {
        w.children.push_back(
            witness_impl(f->children[i].get(), env, ctx, child_vals[i]));
      }
      // recompute this node's value from child values
      switch (f->kind) {
        case Formula::Kind::Dist:
        case Formula::Kind::Pred:
          value = eval_impl(f, env, ctx);
          break;
        case Formula::Kind::Const: value = f->value; break;
        case Formula::Kind::Neg: value = 1.0 - child_vals[0]; break;
        case Formula::Kind::DotMinus:
          value = dot_minus(child_vals[0], child_vals[1]);
          break;
        case Formula::Kind::TruncAdd:
          value = trunc_add(child_vals[0], child_vals[1]);
          break;
        case Formula::Kind::AbsDiff:
          value = std::fabs(child_vals[0] - child_vals[1]);
          break;
        case Formula::Kind::Max:
          value = *std::max_element(child_vals.begin(), child_vals.end());
          break;
        case Formula::Kind::Min:
          value = *std::min_element(child_vals.begin(), child_vals.end());
          break;
        case Formula::Kind::Scale: value = f->value * child_vals[0]; break;
        case Formula::Kind::Apply: value = f->pl->eval(child_vals[0]); break;
        default: break;
      }
      return w;
    }
  }
}

double pinned_impl(const Formula* f, Env& env, EvalCtx& ctx, const WitnessNode& w) {
  switch (f->kind) {
    case Formula::Kind::Sup:
    case Formula::Kind::Inf: {
      env.push(f->name, w.point);
      double v = pinned_impl(f->children[0].get(), env, ctx, w.children[0]);
      env.pop();
      return v;
    }
    case Formula::Kind::Dist:
    case Formula::Kind::Pred:
    case Formula::Kind::Const:
      return eval_impl(f, env, ctx);
    case Formula::Kind::Neg:
      return 1.0 - pinned_impl(f->children[0].get(), env, ctx, w.children[0]);
    case Formula::Kind::DotMinus:
      return dot_minus(pinned_impl(f->children[0].get(), env, ctx, w.children[0]),
                       pinned_impl(f->children[1].get(), env, ctx, w.children[1]));
    case Formula::Kind::TruncAdd:
      return trunc_add(pinned_impl(f->children[0].get(), env, ctx, w.children[0]),
                       pinned_impl(f->children[1].get(), env, ctx, w.children[1]));
    case Formula::Kind::AbsDiff:
      return std::fabs(pinned_impl(f->children[0].get(), env, ctx, w.children[0]) -
                       pinned_impl(f->children[1].get(), env, ctx, w.children[1]));
    case Formula::Kind::Max: {
      double r = 0.0;
      for (std::size_t i = 0; i < f->children.size(); ++i) {
        double v = pinned_impl(f->children[i].get(), env, ctx, w.children[i]);
        if (i == 0 || v > r) r = v;
      }
      return r;
    }
    case Formula::Kind::Min: {
      double r = 0.0;
      for (std::size_t i = 0; i < f->children.size(); ++i) {
        double v = pinned_impl(f->children[i].get(), env, ctx, w.children[i]);
        if (i == 0 || v < r) r = v;
      }
      return r;
    }
    case Formula::Kind::Scale:
      return f->value * pinned_impl(f->children[0].get(), env, ctx, w.children[0]);
    case Formula::Kind::Apply:
      return f->pl->eval(pinned_impl(f->children[0].get(), env, ctx, w.children[0]));
  }
  throw EvalError("bad formula node");
}

}  // namespace

WitnessResult eval_witness(const FiniteStructure& a, const FormulaPtr& f,
                           const Assignment& asg) {
  EvalOptions opts;
  opts.pruning = false;
  EvalCtx ctx(a, opts);
  Env env(asg);
  WitnessResult res;
  res.trace = witness_impl(f.get(), env, ctx, res.value);
  return res;
}

double eval_pinned(const FiniteStructure& a, const FormulaPtr& f,
                   const Assignment& asg, const WitnessNode& trace) {
  EvalOptions opts;
  opts.pruning = false;
  EvalCtx ctx(a, opts);
  Env env(asg);
  return pinned_impl(f.get(), env, ctx, trace);
}

ojson witness_to_json(const WitnessNode& w) {
  ojson j;
  j["node"] = w.node;
  if (!w.var.empty()) {
    j["var"] = w.var;
    j["point"] = w.point;
    j["label"] = w.label;
  }
  if (!w.children.empty()) {
    ojson kids = ojson::array();
    for (const auto& c : w.children) kids.push_back(witness_to_json(c));
    j["children"] = std::move(kids);
  }
  return j;
}

namespace {

int ceval_term(const ClassicalStructure& b, const Term& t, Env& env) {
  switch (t.kind) {
    case Term::Kind::Var:
      return env.lookup(t.name);
    case Term::Kind::Const: {
      auto it = b.consts.find(t.name);
      if (it == b.consts.end()) throw EvalError("constant not interpreted: " + t.name);
      return it->second;
    }
    case Term::Kind::App: {
      auto it = b.funcs.find(t.name);
      if (it == b.funcs.end()) throw EvalError("function not interpreted: " + t.name);
      int args[16];
      for (std::size_t k = 0; k < t.args.size(); ++k) {
        args[k] = ceval_term(b, t.args[k], env);
      }
      return it->second[b.flat_index((int)t.args.size(), args)];
    }
  }
  throw EvalError("bad term");
}

bool ceval_impl(const ClassicalStructure& b, const ClassicalFormula* f, Env& env) {
  switch (f->kind) {
    case ClassicalFormula::Kind::Equal:
      return ceval_term(b, f->terms[0], env) == ceval_term(b, f->terms[1], env);
    case ClassicalFormula::Kind::Pred: {
      int args[16];
      for (std::size_t k = 0; k < f->terms.size(); ++k) {
        args[k] = ceval_term(b, f->terms[k], env);
      }
      return b.holds(f->name, (int)f->terms.size(), args);
    }
    case ClassicalFormula::Kind::Not:
      return !ceval_impl(b, f->children[0].get(), env);
    case ClassicalFormula::Kind::And:
      return ceval_impl(b, f->children[0].get(), env) &&
             ceval_impl(b, f->children[1].get(), env);
    case ClassicalFormula::Kind::Exists: {
      for (int p = 0; p < b.n(); ++p) {
        env.push(f->name, p);
        bool v = ceval_impl(b, f->children[0].get(), env);
        env.pop();
        if (v) return true;
      }
      return false;
    }
  }
  throw EvalError("bad classical node");
}

}  // namespace

bool eval_classical(const ClassicalStructure& b, const CFormulaPtr& f,
                    const Assignment& asg) {
  Env env(asg);
  return ceval_impl(b, f.get(), env);
}

namespace {

double term_shift_bound(const Term& t, const Signature& sig, double shift,
                        const std::set<std::string>& displaced) {
  switch (t.kind) {
    case Term::Kind::Var:
      return displaced.count(t.name) ? shift : 0.0;
    case Term::Kind::Const:
      return 0.0;
    case Term::Kind::App: {
      double arg = 0.0;
      for (const auto& u : t.args) {
        arg = std::max(arg, term_shift_bound(u, sig, shift, displaced));
      }
      if (arg == 0.0) return 0.0;
      const FunctionSymbol* fs = sig.function(t.name);
      if (!fs) throw EvalError("unknown function symbol: " + t.name);
      return std::min(1.0, fs->modulus.threshold(std::min(1.0, arg)));
    }
  }
  return 0.0;
}

double shift_bound_impl(const Formula* f, const Signature& sig, double shift,
                        std::set<std::string>& displaced) {
  switch (f->kind) {
    case Formula::Kind::Dist: {
      double b = term_shift_bound(f->terms[0], sig, shift, displaced) +
                 term_shift_bound(f->terms[1], sig, shift, displaced);
      return std::min(1.0, b);
    }
    case Formula::Kind::Pred: {
      double arg = 0.0;
      for (const auto& t : f->terms) {
        arg = std::max(arg, term_shift_bound(t, sig, shift, displaced));
      }
      if (arg == 0.0) return 0.0;
      const PredicateSymbol* ps = sig.predicate(f->name);
      if (!ps) throw EvalError("unknown predicate symbol: " + f->name);
      return std::min(1.0, ps->modulus.threshold(std::min(1.0, arg)));
    }
    case Formula::Kind::Const:
      return 0.0;
    case Formula::Kind::Neg:
      return shift_bound_impl(f->children[0].get(), sig, shift, displaced);
    case Formula::Kind::DotMinus:
    case Formula::Kind::TruncAdd:
    case Formula::Kind::AbsDiff:
      return std::min(1.0,
                      shift_bound_impl(f->children[0].get(), sig, shift, displaced) +
                          shift_bound_impl(f->children[1].get(), sig, shift, displaced));
    case Formula::Kind::Max:
    case Formula::Kind::Min: {
      double b = 0.0;
      for (const auto& c : f->children) {
        b = std::max(b, shift_bound_impl(c.get(), sig, shift, displaced));
      }
      return b;
    }
    case Formula::Kind::Scale:
      return f->value * shift_bound_impl(f->children[0].get(), sig, shift, displaced);
    case Formula::Kind::Apply: {
      double b = shift_bound_impl(f->children[0].get(), sig, shift, displaced);
      return std::min(1.0, f->pl->max_slope() * b);
    }
    case Formula::Kind::Sup:
    case Formula::Kind::Inf: {
      // the quantified point is shared between both sides
      bool was = displaced.erase(f->name) > 0;
      double b = shift_bound_impl(f->children[0].get(), sig, shift, displaced);
      if (was) displaced.insert(f->name);
      return b;
    }
  }
  return 1.0;
}

double net_bound_term(const Term& t, const Signature& sig, double mesh) {
  switch (t.kind) {
    case Term::Kind::Var:
      return 0.0;
    case Term::Kind::Const:
      return mesh;
    case Term::Kind::App: {
      double arg = 0.0;
      for (const auto& u : t.args) arg = std::max(arg, net_bound_term(u, sig, mesh));
      const FunctionSymbol* fs = sig.function(t.name);
      if (!fs) throw EvalError("unknown function symbol: " + t.name);
      double through = arg == 0.0 ? 0.0 : fs->modulus.threshold(std::min(1.0, arg));
      return std::min(1.0, through + mesh);
    }
  }
  return 0.0;
}

double net_bound_impl(const Formula* f, const Signature& sig, double mesh) {
  switch (f->kind) {
    case Formula::Kind::Dist:
      return std::min(1.0, net_bound_term(f->terms[0], sig, mesh) +
                               net_bound_term(f->terms[1], sig, mesh));
    case Formula::Kind::Pred: {
      double arg = 0.0;
      for (const auto& t : f->terms) arg = std::max(arg, net_bound_term(t, sig, mesh));
      if (arg == 0.0) return 0.0;
      const PredicateSymbol* ps = sig.predicate(f->name);
      if (!ps) throw EvalError("unknown predicate symbol: " + f->name);
      return std::min(1.0, ps->modulus.threshold(std::min(1.0, arg)));
    }
    case Formula::Kind::Const:
      return 0.0;
    case Formula::Kind::Neg:
      return net_bound_impl(f->children[0].get(), sig, mesh);
    case Formula::Kind::DotMinus:
    case Formula::Kind::TruncAdd:
    case Formula::Kind::AbsDiff:
      return std::min(1.0, net_bound_impl(f->children[0].get(), sig, mesh) +
                               net_bound_impl(f->children[1].get(), sig, mesh));
    case Formula::Kind::Max:
    case Formula::Kind::Min: {
      double b = 0.0;
      for (const auto& c : f->children) {
        b = std::max(b, net_bound_impl(c.get(), sig, mesh));
      }
      return b;
    }
    case Formula::Kind::Scale:
      return f->value * net_bound_impl(f->children[0].get(), sig, mesh);
    case Formula::Kind::Apply:
      return std::min(1.0, f->pl->max_slope() *
                               net_bound_impl(f->children[0].get(), sig, mesh));
    case Formula::Kind::Sup:
    case Formula::Kind::Inf: {
      // picking a net point near the exact optimum moves the body by at most
      // its modulus in the quantified variable at distance mesh
      std::set<std::string> displaced{f->name};
      double through =
          shift_bound_impl(f->children[0].get(), sig, mesh, displaced);
      return std::min(1.0, net_bound_impl(f->children[0].get(), sig, mesh) + through);
    }
  }
  return 1.0;
}

}  // namespace

double formula_shift_bound(const FormulaPtr& f, const Signature& sig, double shift,
                           const std::set<std::string>& displaced) {
  std::set<std::string> d = displaced;
  return shift_bound_impl(f.get(), sig, shift, d);
}

double net_error_bound(const FormulaPtr& f, const Signature& sig, double mesh) {
  return net_bound_impl(f.get(), sig, mesh);
}

}  // namespace clw
