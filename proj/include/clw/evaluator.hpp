#pragma once

#include <cstdint>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "clw/formula.hpp"
#include "clw/structure.hpp"

namespace clw {

struct EvalError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct ResourceError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Variable-to-point binding for the free variables of a formula.
class Assignment {
 public:
  void set(const std::string& var, int point);
  std::optional<int> get(const std::string& var) const;
  const std::vector<std::pair<std::string, int>>& entries() const { return v_; }

 private:
  std::vector<std::pair<std::string, int>> v_;
};

struct EvalOptions {
  bool pruning = true;
  /// Evaluate the outermost quantifier in parallel (deterministic reduction
  /// in point order; values are bit-identical to the serial path).
  bool parallel_outer = false;
  /// Abort with ResourceError past this many atom evaluations (0 = no cap).
  std::uint64_t atom_cap = 0;
};

struct EvalStats {
  std::uint64_t atoms = 0;
};

/// Recursive table lookup. Throws EvalError for unbound variables or
/// missing symbols.
int eval_term(const FiniteStructure& a, const Term& t, const Assignment& asg);

/// Exact evaluation: sup/inf are max/min over all points, connectives are
/// exact double arithmetic, piecewise-linear applications interpolate
/// exactly. Pruning never changes the value.
double eval_formula(const FiniteStructure& a, const FormulaPtr& f,
                    const Assignment& asg = {}, const EvalOptions& opts = {},
                    EvalStats* stats = nullptr);

/// Quantifier trace: chosen point per quantifier along the evaluated tree.
struct WitnessNode {
  std::string node;  // formula node kind
  std::string var;   // quantified variable, when applicable
  int point = -1;
  std::string label;
  std::vector<WitnessNode> children;
};

struct WitnessResult {
  double value = 0.0;
  WitnessNode trace;
};

WitnessResult eval_witness(const FiniteStructure& a, const FormulaPtr& f,
                           const Assignment& asg = {});

/// Re-evaluate with every quantifier pinned to its traced point; equals the
/// reported value exactly (quantifiers are attained on finite structures).
double eval_pinned(const FiniteStructure& a, const FormulaPtr& f,
                   const Assignment& asg, const WitnessNode& trace);

ojson witness_to_json(const WitnessNode& w);

/// Brute-force Tarskian evaluation on a classical structure.
bool eval_classical(const ClassicalStructure& b, const CFormulaPtr& f,
                    const Assignment& asg = {});

/// Bound on |phi(a) - phi(b)| when the tuples a, b differ by at most
/// `shift` in every displaced free variable, composed from the moduli along
/// the syntax tree. Pass the full free-variable set for the uniform
/// continuity bound of the formula.
double formula_shift_bound(const FormulaPtr& f, const Signature& sig, double shift,
                           const std::set<std::string>& displaced);

/// Heuristic bound on |phi^M - phi^X| for an eps-net X of mesh `mesh` with
/// nearest-point snapped symbols, following the constructive approximation
/// argument (term snapping plus quantifier transfer through composed moduli).
double net_error_bound(const FormulaPtr& f, const Signature& sig, double mesh);

}  // namespace clw
