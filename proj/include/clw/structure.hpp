#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "clw/signature.hpp"

namespace clw {

/// Finite metric structure as explicit tables. Tables are flattened
/// row-major with the last argument varying fastest. Immutable after
/// construction/validation; safe to share across threads.
///
/// Generated nets may back a large predicate by a procedural table
/// (`lazy_preds`) instead of a dense vector; lookups are value-identical.
struct FiniteStructure {
  Signature sig;
  std::vector<std::string> points;
  std::vector<double> dist;  // n*n row-major
  std::map<std::string, std::vector<double>> preds;
  std::map<std::string, std::vector<int>> funcs;
  std::map<std::string, int> consts;
  std::map<std::string, std::function<double(const int*)>> lazy_preds;

  int n() const { return static_cast<int>(points.size()); }
  double d(int i, int j) const { return dist[std::size_t(i) * points.size() + j]; }

  std::size_t flat_index(int arity, const int* args) const {
    std::size_t idx = 0;
    for (int k = 0; k < arity; ++k) idx = idx * points.size() + std::size_t(args[k]);
    return idx;
  }

  bool has_pred_data(const std::string& name) const {
    return preds.count(name) || lazy_preds.count(name);
  }
  double pred_value(const std::string& name, int arity, const int* args) const {
    auto it = preds.find(name);
    if (it != preds.end()) return it->second[flat_index(arity, args)];
    return lazy_preds.at(name)(args);
  }
  int point_index(const std::string& label) const;  // -1 when absent
};

/// Metric-axiom and totality violations, with witnesses in the text.
/// The triangle inequality scan is O(n^3); structures larger than
/// `triangle_cap` points get a deterministic sampled scan instead.
std::vector<std::string> validate_structure(const FiniteStructure& a,
                                            int triangle_cap = 512);

enum class SymbolStatus { Full, Almost, Violation };
enum class StructureClass { Structure, AlmostStructure, Invalid };

struct SymbolCompliance {
  std::string symbol;
  SymbolStatus status = SymbolStatus::Full;
  /// Violations of the modulus clause occur only at eps >= eps0 (> 0).
  double eps0 = 0.0;
  /// Worst witness pair of argument tuples and its distances.
  std::vector<int> witness_a, witness_b;
  double tuple_dist = 0.0;
  double output_disc = 0.0;
};

struct ComplianceReport {
  std::vector<SymbolCompliance> symbols;
  StructureClass overall = StructureClass::Structure;
};

/// Checks every pair of argument tuples of every symbol against its modulus:
/// full when the output discrepancy never exceeds the modulus threshold, else
/// almost(eps0) with eps0 the infimum over violating pairs of the smallest
/// eps at which the pair violates the clause. On a valid structure eps0 is
/// positive (distinct points are separated); Violation is reserved for
/// degenerate inputs where no positive eps0 exists.
/// Pair enumeration is capped; throws std::runtime_error beyond `pair_cap`.
ComplianceReport compliance_report(const FiniteStructure& a,
                                   long long pair_cap = 200000000);

/// Classical structure: discrete universe, {0,1}-valued relation tables with
/// the continuous-logic truth convention (0 = holds).
struct ClassicalStructure {
  Signature sig;  // classical flag set
  std::vector<std::string> points;
  std::map<std::string, std::vector<std::uint8_t>> relations;  // 0 = holds
  std::map<std::string, std::vector<int>> funcs;
  std::map<std::string, int> consts;

  int n() const { return static_cast<int>(points.size()); }
  std::size_t flat_index(int arity, const int* args) const {
    std::size_t idx = 0;
    for (int k = 0; k < arity; ++k) idx = idx * points.size() + std::size_t(args[k]);
    return idx;
  }
  bool holds(const std::string& rel, int arity, const int* args) const {
    return relations.at(rel)[flat_index(arity, args)] == 0;
  }
};

std::vector<std::string> validate_classical(const ClassicalStructure& b);

/// View a classical structure as a metric structure: discrete metric,
/// identity moduli, relation tables reused as [0,1] predicate values.
FiniteStructure classical_as_metric(const ClassicalStructure& b);

struct QuotientError : std::runtime_error {
  QuotientError(const std::string& msg, std::vector<int> witness)
      : std::runtime_error(msg), witness(std::move(witness)) {}
  std::vector<int> witness;
};

struct QuotientResult {
  ClassicalStructure quotient;
  std::vector<int> class_of;  // input point -> class index
};

/// E-quotient discretization: E(x,y) iff d(x,y) <= e_threshold, classes
/// become the points of a classical structure, [a] in P iff P(a) <=
/// truth_threshold, f([a]) = [f(a)]. Throws QuotientError when E is not
/// transitive or a selected symbol is not E-well-defined (witness attached).
/// `symbols` restricts which predicates/functions are carried over
/// (null = all).
QuotientResult quotient_discretize(const FiniteStructure& a,
                                   double e_threshold = 0.25,
                                   double truth_threshold = 0.5,
                                   const std::vector<std::string>* symbols = nullptr);

ojson structure_to_json(const FiniteStructure& a);
FiniteStructure structure_from_json(const ojson& j, const std::string& base_dir = "");
FiniteStructure load_structure(const std::string& path);
void save_structure(const FiniteStructure& a, const std::string& path);

ojson classical_to_json(const ClassicalStructure& b);
ClassicalStructure classical_from_json(const ojson& j);

}  // namespace clw
