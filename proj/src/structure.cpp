#include "clw/structure.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <numeric>
#include <sstream>

namespace clw {

int FiniteStructure::point_index(const std::string& label) const {
  for (std::size_t i = 0; i < points.size(); ++i) {
    if (points[i] == label) return static_cast<int>(i);
  }
  return -1;
}

namespace {

// iterate all arity-tuples over n points; f gets a pointer to the tuple
template <typename F>
void for_each_tuple(int n, int arity, F&& f) {
  std::vector<int> t(arity, 0);
  while (true) {
    f(t.data());
    int k = arity - 1;
    while (k >= 0 && ++t[k] == n) t[k--] = 0;
    if (k < 0) break;
  }
}

std::size_t power(std::size_t n, int k) {
  std::size_t p = 1;
  while (k--) p *= n;
  return p;
}

}  // namespace

std::vector<std::string> validate_structure(const FiniteStructure& a,
                                            int triangle_cap) {
  std::vector<std::string> out;
  const int n = a.n();
  if (n < 1) {
    out.push_back("structure has no points");
    return out;
  }
  if (a.dist.size() != std::size_t(n) * n) {
    out.push_back("distance matrix has wrong size");
    return out;
  }
  {
    std::map<std::string, int> seen;
    for (const auto& p : a.points) {
      if (++seen[p] == 2) out.push_back("duplicate point label: " + p);
    }
  }
  for (int i = 0; i < n; ++i) {
    if (a.d(i, i) != 0.0) out.push_back("nonzero diagonal at " + a.points[i]);
    for (int j = 0; j < n; ++j) {
      double v = a.d(i, j);
      if (!(v >= 0.0 && v <= 1.0)) {
        out.push_back("distance outside [0,1] at (" + a.points[i] + "," + a.points[j] + ")");
      }
      if (std::fabs(v - a.d(j, i)) > num_tol()) {
        out.push_back("asymmetric distance at (" + a.points[i] + "," + a.points[j] + ")");
        return out;
      }
      if (i != j && v <= 0.0) {
        out.push_back("zero distance between distinct points " + a.points[i] +
                      " and " + a.points[j]);
      }
    }
  }
  if (!out.empty()) return out;
  auto triangle_check = [&](int i, int j, int k) {
    if (a.d(i, k) > a.d(i, j) + a.d(j, k) + num_tol()) {
      out.push_back("triangle violation at (" + a.points[i] + "," + a.points[j] +
                    "," + a.points[k] + ")");
      return false;
    }
    return true;
  };
  if (n <= triangle_cap) {
    for (int i = 0; i < n && out.size() < 8; ++i) {
      for (int j = 0; j < n; ++j) {
        for (int k = 0; k < n; ++k) {
          if (!triangle_check(i, j, k)) break;
        }
      }
    }
  } else {
    // deterministic sample: stride the triple grid
    long long stride = std::max(1LL, (long long)n * n * n / 2000000LL);
    long long idx = 0;
    for (long long c = 0; c < 2000000LL && out.size() < 8; ++c, idx += stride) {
      long long t = idx % ((long long)n * n * n);
      int i = int(t / ((long long)n * n));
      int j = int((t / n) % n);
      int k = int(t % n);
      triangle_check(i, j, k);
    }
  }
  // totality of tables
  for (const auto& p : a.sig.predicates) {
    if (a.lazy_preds.count(p.name)) continue;
    auto it = a.preds.find(p.name);
    if (it == a.preds.end()) {
      out.push_back("missing predicate table: " + p.name);
      continue;
    }
    if (it->second.size() != power(n, p.arity)) {
      out.push_back("predicate table has wrong size: " + p.name);
      continue;
    }
    for (double v : it->second) {
      if (!(v >= 0.0 && v <= 1.0)) {
        out.push_back("predicate value outside [0,1] in " + p.name);
        break;
      }
    }
  }
  for (const auto& f : a.sig.functions) {
    auto it = a.funcs.find(f.name);
    if (it == a.funcs.end()) {
      out.push_back("missing function table: " + f.name);
      continue;
    }
    if (it->second.size() != power(n, f.arity)) {
      out.push_back("function table has wrong size: " + f.name);
      continue;
    }
    for (int v : it->second) {
      if (v < 0 || v >= n) {
        out.push_back("function value out of range in " + f.name);
        break;
      }
    }
  }
  for (const auto& c : a.sig.constants) {
    auto it = a.consts.find(c);
    if (it == a.consts.end()) {
      out.push_back("missing constant assignment: " + c);
    } else if (it->second < 0 || it->second >= n) {
      out.push_back("constant out of range: " + c);
    }
  }
  return out;
}

namespace {

struct SymbolView {
  std::string name;
  int arity;
  const PlFunc* modulus;
  bool is_function;
};

}  // namespace

ComplianceReport compliance_report(const FiniteStructure& a, long long pair_cap) {
  ComplianceReport rep;
  const int n = a.n();
  std::vector<SymbolView> symbols;
  for (const auto& p : a.sig.predicates) {
    symbols.push_back({p.name, p.arity, &p.modulus, false});
  }
  for (const auto& f : a.sig.functions) {
    symbols.push_back({f.name, f.arity, &f.modulus, true});
  }
  bool any_almost = false, any_violation = false;
  for (const auto& sym : symbols) {
    long long tuples = (long long)power(n, sym.arity);
    if (tuples * tuples > pair_cap) {
      throw std::runtime_error("compliance_report: pair count for " + sym.name +
                               " exceeds cap");
    }
    SymbolCompliance sc;
    sc.symbol = sym.name;
    double eps0 = 2.0;  // min over violating pairs of their first violating eps
    bool violated = false;
    std::vector<int> ta(sym.arity), tb(sym.arity);
    for_each_tuple(n, sym.arity, [&](const int* u) {
      std::copy(u, u + sym.arity, ta.begin());
      for_each_tuple(n, sym.arity, [&](const int* v) {
        double tdist = 0.0;
        for (int k = 0; k < sym.arity; ++k) {
          tdist = std::max(tdist, a.d(ta[k], v[k]));
        }
        double disc;
        if (sym.is_function) {
          const auto& table = a.funcs.at(sym.name);
          int ia = table[a.flat_index(sym.arity, ta.data())];
          int ib = table[a.flat_index(sym.arity, v)];
          disc = a.d(ia, ib);
        } else {
          disc = std::fabs(a.pred_value(sym.name, sym.arity, ta.data()) -
                           a.pred_value(sym.name, sym.arity, v));
        }
        double limit = sym.modulus->threshold(tdist);
        if (disc > limit + num_tol()) {
          violated = true;
          if (limit < eps0) {
            eps0 = limit;
            std::copy(v, v + sym.arity, tb.begin());
            sc.witness_a = ta;
            sc.witness_b = tb;
            sc.tuple_dist = tdist;
            sc.output_disc = disc;
          }
        }
      });
    });
    if (!violated) {
      sc.status = SymbolStatus::Full;
    } else if (eps0 > num_tol()) {
      sc.status = SymbolStatus::Almost;
      sc.eps0 = eps0;
      any_almost = true;
    } else {
      sc.status = SymbolStatus::Violation;
      sc.eps0 = eps0;
      any_violation = true;
    }
    rep.symbols.push_back(std::move(sc));
  }
  rep.overall = any_violation  ? StructureClass::Invalid
                : any_almost   ? StructureClass::AlmostStructure
                               : StructureClass::Structure;
  return rep;
}

std::vector<std::string> validate_classical(const ClassicalStructure& b) {
  std::vector<std::string> out;
  const int n = b.n();
  if (n < 1) {
    out.push_back("structure has no points");
    return out;
  }
  for (const auto& p : b.sig.predicates) {
    auto it = b.relations.find(p.name);
    if (it == b.relations.end()) {
      out.push_back("missing relation table: " + p.name);
    } else if (it->second.size() != power(n, p.arity)) {
      out.push_back("relation table has wrong size: " + p.name);
    }
  }
  for (const auto& f : b.sig.functions) {
    auto it = b.funcs.find(f.name);
    if (it == b.funcs.end()) {
      out.push_back("missing function table: " + f.name);
    } else if (it->second.size() != power(n, f.arity)) {
      out.push_back("function table has wrong size: " + f.name);
    } else {
      for (int v : it->second) {
        if (v < 0 || v >= n) {
          out.push_back("function value out of range in " + f.name);
          break;
        }
      }
    }
  }
  for (const auto& c : b.sig.constants) {
    auto it = b.consts.find(c);
    if (it == b.consts.end() || it->second < 0 || it->second >= n) {
      out.push_back("missing or out-of-range constant: " + c);
    }
  }
  return out;
}

FiniteStructure classical_as_metric(const ClassicalStructure& b) {
  FiniteStructure a;
  a.sig = b.sig;
  a.sig.classical = true;
  for (auto& p : a.sig.predicates) p.modulus = PlFunc::identity();
  for (auto& f : a.sig.functions) f.modulus = PlFunc::identity();
  a.points = b.points;
  const int n = b.n();
  a.dist.assign(std::size_t(n) * n, 1.0);
  for (int i = 0; i < n; ++i) a.dist[std::size_t(i) * n + i] = 0.0;
  for (const auto& [name, table] : b.relations) {
    std::vector<double> vals(table.size());
    for (std::size_t i = 0; i < table.size(); ++i) vals[i] = table[i] ? 1.0 : 0.0;
    a.preds[name] = std::move(vals);
  }
  a.funcs = b.funcs;
  a.consts = b.consts;
  return a;
}

QuotientResult quotient_discretize(const FiniteStructure& a, double e_threshold,
                                   double truth_threshold,
                                   const std::vector<std::string>* symbols) {
  const int n = a.n();
  auto selected = [&](const std::string& name) {
    if (!symbols) return true;
    return std::find(symbols->begin(), symbols->end(), name) != symbols->end();
  };
  auto related = [&](int i, int j) { return a.d(i, j) <= e_threshold + num_tol(); };

  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      if (!related(i, j)) continue;
      for (int k = 0; k < n; ++k) {
        if (related(j, k) && !related(i, k)) {
          throw QuotientError("E is not transitive", {i, j, k});
        }
      }
    }
  }

  QuotientResult res;
  res.class_of.assign(n, -1);
  std::vector<int> reps;
  for (int i = 0; i < n; ++i) {
    if (res.class_of[i] >= 0) continue;
    int cls = static_cast<int>(reps.size());
    reps.push_back(i);
    for (int j = i; j < n; ++j) {
      if (related(i, j)) res.class_of[j] = cls;
    }
  }
  const int m = static_cast<int>(reps.size());

  ClassicalStructure& b = res.quotient;
  b.sig.name = a.sig.name.empty() ? "quotient" : a.sig.name + "_quotient";
  b.sig.classical = true;
  for (int c = 0; c < m; ++c) b.points.push_back("[" + a.points[reps[c]] + "]");

  for (const auto& p : a.sig.predicates) {
    if (!selected(p.name)) continue;
    b.sig.predicates.push_back({p.name, p.arity, PlFunc::identity()});
    std::vector<std::uint8_t> table(power(m, p.arity), 1);
    std::vector<std::uint8_t> defined(table.size(), 0);
    std::vector<int> cls_tuple(p.arity);
    for_each_tuple(n, p.arity, [&](const int* t) {
      for (int k = 0; k < p.arity; ++k) cls_tuple[k] = res.class_of[t[k]];
      bool holds = a.pred_value(p.name, p.arity, t) <= truth_threshold;
      std::size_t idx = b.flat_index(p.arity, cls_tuple.data());
      std::uint8_t v = holds ? 0 : 1;
      if (defined[idx] && table[idx] != v) {
        throw QuotientError("predicate " + p.name + " is not E-well-defined",
                            std::vector<int>(t, t + p.arity));
      }
      defined[idx] = 1;
      table[idx] = v;
    });
    b.relations[p.name] = std::move(table);
  }
  for (const auto& f : a.sig.functions) {
    if (!selected(f.name)) continue;
    b.sig.functions.push_back({f.name, f.arity, PlFunc::identity()});
    const auto& src = a.funcs.at(f.name);
    std::vector<int> table(power(m, f.arity), -1);
    std::vector<int> cls_tuple(f.arity);
    for_each_tuple(n, f.arity, [&](const int* t) {
      for (int k = 0; k < f.arity; ++k) cls_tuple[k] = res.class_of[t[k]];
      int image_cls = res.class_of[src[a.flat_index(f.arity, t)]];
      std::size_t idx = b.flat_index(f.arity, cls_tuple.data());
      if (table[idx] >= 0 && table[idx] != image_cls) {
        throw QuotientError("function " + f.name + " is not E-well-defined",
                            std::vector<int>(t, t + f.arity));
      }
      table[idx] = image_cls;
    });
    b.funcs[f.name] = std::move(table);
  }
  for (const auto& c : a.sig.constants) {
    if (!selected(c)) continue;
    b.sig.constants.push_back(c);
    b.consts[c] = res.class_of[a.consts.at(c)];
  }
  return res;
}

ojson structure_to_json(const FiniteStructure& a) {
  ojson j;
  j["signature"] = signature_to_json(a.sig);
  j["points"] = a.points;
  const int n = a.n();
  ojson rows = ojson::array();
  for (int i = 0; i < n; ++i) {
    ojson row = ojson::array();
    for (int k = 0; k < n; ++k) row.push_back(a.d(i, k));
    rows.push_back(std::move(row));
  }
  j["dist"] = std::move(rows);
  ojson preds;
  for (const auto& p : a.sig.predicates) {
    auto it = a.preds.find(p.name);
    if (it != a.preds.end()) {
      preds[p.name] = it->second;
    } else if (a.lazy_preds.count(p.name)) {
      std::size_t entries = power(n, p.arity);
      if (entries > 20000000) {
        throw std::runtime_error("structure_to_json: table for " + p.name +
                                 " too large to materialize");
      }
      std::vector<double> table(entries);
      std::size_t idx = 0;
      for_each_tuple(n, p.arity,
                     [&](const int* t) { table[idx++] = a.pred_value(p.name, p.arity, t); });
      preds[p.name] = std::move(table);
    }
  }
  j["predicates"] = std::move(preds);
  ojson funcs;
  for (const auto& [name, table] : a.funcs) funcs[name] = table;
  j["functions"] = std::move(funcs);
  ojson consts;
  for (const auto& [name, idx] : a.consts) consts[name] = idx;
  j["constants"] = std::move(consts);
  return j;
}

FiniteStructure structure_from_json(const ojson& j, const std::string& base_dir) {
  FiniteStructure a;
  const auto& sj = j.at("signature");
  if (sj.is_string()) {
    std::filesystem::path p = sj.get<std::string>();
    if (p.is_relative() && !base_dir.empty()) p = std::filesystem::path(base_dir) / p;
    a.sig = load_signature(p.string());
  } else {
    a.sig = signature_from_json(sj);
  }
  for (const auto& p : j.at("points")) a.points.push_back(p.get<std::string>());
  const int n = a.n();
  a.dist.reserve(std::size_t(n) * n);
  for (const auto& row : j.at("dist")) {
    for (const auto& v : row) a.dist.push_back(v.get<double>());
  }
  if (j.contains("predicates")) {
    for (const auto& [name, table] : j.at("predicates").items()) {
      a.preds[name] = table.get<std::vector<double>>();
    }
  }
  if (j.contains("functions")) {
    for (const auto& [name, table] : j.at("functions").items()) {
      a.funcs[name] = table.get<std::vector<int>>();
    }
  }
  if (j.contains("constants")) {
    for (const auto& [name, idx] : j.at("constants").items()) {
      a.consts[name] = idx.get<int>();
    }
  }
  return a;
}

FiniteStructure load_structure(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open structure file: " + path);
  ojson j;
  in >> j;
  return structure_from_json(j, std::filesystem::path(path).parent_path().string());
}

void save_structure(const FiniteStructure& a, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write structure file: " + path);
  out << structure_to_json(a).dump() << "\n";
}

ojson classical_to_json(const ClassicalStructure& b) {
  ojson j;
  j["signature"] = signature_to_json(b.sig);
  j["points"] = b.points;
  ojson rels;
  for (const auto& [name, table] : b.relations) {
    rels[name] = std::vector<int>(table.begin(), table.end());
  }
  j["relations"] = std::move(rels);
  ojson funcs;
  for (const auto& [name, table] : b.funcs) funcs[name] = table;
  j["functions"] = std::move(funcs);
  ojson consts;
  for (const auto& [name, idx] : b.consts) consts[name] = idx;
  j["constants"] = std::move(consts);
  return j;
}

ClassicalStructure classical_from_json(const ojson& j) {
  ClassicalStructure b;
  b.sig = signature_from_json(j.at("signature"));
  b.sig.classical = true;
  for (const auto& p : j.at("points")) b.points.push_back(p.get<std::string>());
  if (j.contains("relations")) {
    for (const auto& [name, table] : j.at("relations").items()) {
      auto ints = table.get<std::vector<int>>();
      b.relations[name] = std::vector<std::uint8_t>(ints.begin(), ints.end());
    }
  }
  if (j.contains("functions")) {
    for (const auto& [name, table] : j.at("functions").items()) {
      b.funcs[name] = table.get<std::vector<int>>();
    }
  }
  if (j.contains("constants")) {
    for (const auto& [name, idx] : j.at("constants").items()) {
      b.consts[name] = idx.get<int>();
    }
  }
  return b;
}

}  // namespace clw
