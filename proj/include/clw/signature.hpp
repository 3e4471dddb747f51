#pragma once

#include <string>
#include <vector>

#include "clw/plfunc.hpp"
#include "json.hpp"

namespace clw {

using ojson = nlohmann::ordered_json;

struct PredicateSymbol {
  std::string name;
  int arity = 1;
  PlFunc modulus = PlFunc::identity();
};

struct FunctionSymbol {
  std::string name;
  int arity = 1;
  PlFunc modulus = PlFunc::identity();
};

/// One-sorted, 1-bounded metric signature. Every predicate and function
/// symbol carries a modulus of uniform continuity; tuple distance is the
/// maximum over coordinates.
struct Signature {
  std::string name;
  std::vector<PredicateSymbol> predicates;
  std::vector<FunctionSymbol> functions;
  std::vector<std::string> constants;
  /// Set when all predicates are {0,1}-valued and the metric is discrete.
  bool classical = false;

  const PredicateSymbol* predicate(const std::string& sym) const;
  const FunctionSymbol* function(const std::string& sym) const;
  bool has_constant(const std::string& sym) const;
  bool has_symbol(const std::string& sym) const;
};

/// Report-style validation: duplicate names, malformed moduli. Empty result
/// means valid.
std::vector<std::string> validate_signature(const Signature& sig);

ojson signature_to_json(const Signature& sig);
Signature signature_from_json(const ojson& j);
Signature load_signature(const std::string& path);
void save_signature(const Signature& sig, const std::string& path);

}  // namespace clw
