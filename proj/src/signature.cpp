#include "clw/signature.hpp"

#include <fstream>
#include <set>
#include <stdexcept>

namespace clw {

const PredicateSymbol* Signature::predicate(const std::string& sym) const {
  for (const auto& p : predicates) {
    if (p.name == sym) return &p;
  }
  return nullptr;
}

const FunctionSymbol* Signature::function(const std::string& sym) const {
  for (const auto& f : functions) {
    if (f.name == sym) return &f;
  }
  return nullptr;
}

bool Signature::has_constant(const std::string& sym) const {
  for (const auto& c : constants) {
    if (c == sym) return true;
  }
  return false;
}

bool Signature::has_symbol(const std::string& sym) const {
  return predicate(sym) || function(sym) || has_constant(sym);
}

std::vector<std::string> validate_signature(const Signature& sig) {
  std::vector<std::string> out;
  std::set<std::string> seen;
  auto check_name = [&](const std::string& n) {
    if (n.empty()) out.push_back("empty symbol name");
    if (!seen.insert(n).second) out.push_back("duplicate symbol name: " + n);
  };
  auto check_modulus = [&](const std::string& n, const PlFunc& m) {
    if (!m.increasing()) out.push_back("modulus of " + n + " not marked increasing");
    if (!m.zero_at_zero()) out.push_back("modulus of " + n + " not zero at zero");
    if (m.breakpoints().front().second != 0.0) {
      out.push_back("modulus of " + n + " has y(0) != 0");
    }
    if (!m.positive_after_zero()) {
      out.push_back("modulus of " + n + " is not positive for eps > 0");
    }
  };
  for (const auto& p : sig.predicates) {
    check_name(p.name);
    if (p.arity < 1) out.push_back("predicate " + p.name + " has arity < 1");
    check_modulus(p.name, p.modulus);
  }
  for (const auto& f : sig.functions) {
    check_name(f.name);
    if (f.arity < 1) out.push_back("function " + f.name + " has arity < 1");
    check_modulus(f.name, f.modulus);
  }
  for (const auto& c : sig.constants) check_name(c);
  return out;
}

static ojson plfunc_to_json(const PlFunc& f) {
  ojson arr = ojson::array();
  for (const auto& [x, y] : f.breakpoints()) arr.push_back(ojson::array({x, y}));
  return arr;
}

static PlFunc plfunc_from_json(const ojson& j, bool increasing, bool zero) {
  std::vector<PlFunc::Point> pts;
  for (const auto& p : j) pts.emplace_back(p.at(0).get<double>(), p.at(1).get<double>());
  return PlFunc(std::move(pts), increasing, zero);
}

ojson signature_to_json(const Signature& sig) {
  ojson j;
  j["name"] = sig.name;
  j["predicates"] = ojson::array();
  for (const auto& p : sig.predicates) {
    j["predicates"].push_back(
        {{"name", p.name}, {"arity", p.arity}, {"modulus", plfunc_to_json(p.modulus)}});
  }
  j["functions"] = ojson::array();
  for (const auto& f : sig.functions) {
    j["functions"].push_back(
        {{"name", f.name}, {"arity", f.arity}, {"modulus", plfunc_to_json(f.modulus)}});
  }
  j["constants"] = sig.constants;
  if (sig.classical) j["classical"] = true;
  return j;
}

Signature signature_from_json(const ojson& j) {
  Signature sig;
  sig.name = j.value("name", std::string());
  for (const auto& p : j.value("predicates", ojson::array())) {
    PredicateSymbol sym;
    sym.name = p.at("name").get<std::string>();
    sym.arity = p.at("arity").get<int>();
    if (p.contains("modulus")) sym.modulus = plfunc_from_json(p["modulus"], true, true);
    sig.predicates.push_back(std::move(sym));
  }
  for (const auto& f : j.value("functions", ojson::array())) {
    FunctionSymbol sym;
    sym.name = f.at("name").get<std::string>();
    sym.arity = f.at("arity").get<int>();
    if (f.contains("modulus")) sym.modulus = plfunc_from_json(f["modulus"], true, true);
    sig.functions.push_back(std::move(sym));
  }
  for (const auto& c : j.value("constants", ojson::array())) {
    sig.constants.push_back(c.get<std::string>());
  }
  sig.classical = j.value("classical", false);
  return sig;
}

Signature load_signature(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open signature file: " + path);
  ojson j;
  in >> j;
  return signature_from_json(j);
}

void save_signature(const Signature& sig, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write signature file: " + path);
  out << signature_to_json(sig).dump(2) << "\n";
}

}  // namespace clw
