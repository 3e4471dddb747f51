#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "clw/nets.hpp"

namespace clw {

struct Assertion {
  std::string name;
  double lhs = 0.0;
  std::string cmp;  // "<=", "==", ">", ...
  double rhs = 0.0;
  bool pass = false;
};

struct ExperimentReport {
  std::string name;
  ojson params = ojson::object();
  ojson values = ojson::object();
  std::vector<Assertion> assertions;
  std::uint64_t atom_evals = 0;
  double wall_seconds = 0.0;

  bool pass() const;
  ojson to_json() const;
  std::string summary() const;

  void assert_le(const std::string& what, double lhs, double rhs, double tol = -1.0);
  void assert_eq(const std::string& what, double lhs, double rhs, double tol = -1.0);
  void assert_gt(const std::string& what, double lhs, double rhs);
  void assert_exact_zero(const std::string& what, double lhs);
};

/// sigma_P = sup_x (P(x) -. alpha(P(x) -. 1/2)) and
/// tau     = sup_{x,y} (d(x,y) -. alpha(d(x,y) -. 1/2)).
std::pair<FormulaPtr, FormulaPtr> build_threshold_sentences(
    const Signature& sig, const std::string& pred_name, const PlFunc& alpha,
    const std::string& alpha_name = "alpha");

/// A formula-definable endofunction d(f(x),y) = phi(x,y,z...) together with
/// the concrete witness functions and the gap used by the injectivity /
/// surjectivity sentences.
struct InjSurjSpec {
  FormulaPtr phi;
  std::string x_var = "x";
  std::string y_var = "y";
  std::vector<std::string> params;  // z tuple, may be empty
  PlFunc alpha = PlFunc::identity();
  PlFunc beta = PlFunc::identity();   // injectivity witness (mode 1)
  PlFunc gamma = PlFunc::identity();  // collision witness (mode 2)
  double epsilon = 1.0;
  enum class Mode { InjectiveImpliesSurjective, SurjectiveImpliesInjective };
  Mode mode = Mode::InjectiveImpliesSurjective;
};

struct InjSurjSentences {
  FormulaPtr p, q, r, s;
  FormulaPtr sigma;  // inf_z max(P,Q,R,S), inf omitted for empty z
};

InjSurjSentences build_injsurj(const InjSurjSpec& spec);

/// Aperiodicity axiom inf_e max(|1/n - mu(e)|, mu(e n tau(e)), ...,
/// mu(e n tau^{n-1}(e))) on the m-atom algebra with the cyclic shift;
/// brute-force value, the arithmetic-progression witness set, and the
/// 3/(m-1) bound.
ExperimentReport run_apaa(int m, int n, const NetOptions& opts = {});

/// sup_x inf_y |mu(x n y) - mu(x n y^c)| equals 1/m exactly.
ExperimentReport run_atomless(int m, const NetOptions& opts = {});

/// Eigenvalue sentence inf_x max(|<x,x> - 1|, |U(x) - z_n x|) for the
/// rotation-block unitary with the golden-angle eigenvalue list; exact
/// witness evaluation plus a net evaluation on the eigenvector's invariant
/// coordinate plane.
ExperimentReport run_unitary_eigen(int n, int m, int net_resolution = 8);

struct CategoricitySet {
  FormulaPtr psi, chi, tau, phi;
  std::vector<std::string> vars;  // x_1 .. x_n, in point order
};

/// The net-description formulas: psi pins the net as 1/m-dense, chi pins
/// predicate values and function behavior, tau pins the distance matrix.
CategoricitySet build_categoricity(const FiniteStructure& net, double mesh, int m);

ExperimentReport run_categoricity(int m, int fine_factor = 4);

struct BatteryEntry {
  std::string name;
  FormulaPtr sentence;
};

std::vector<BatteryEntry> convergence_battery(const SpaceSpec& spec);

struct ConvergenceRow {
  std::string sentence;
  int m = 0;
  double value = 0.0;
  double reference = 0.0;
  double error = 0.0;
};

ExperimentReport run_convergence(const SpaceSpec& spec,
                                 const std::vector<BatteryEntry>& battery,
                                 const std::vector<int>& ms, int m_ref,
                                 std::vector<ConvergenceRow>* rows = nullptr,
                                 const NetOptions& opts = {});

std::string convergence_csv(const std::vector<ConvergenceRow>& rows);

/// Surjective-but-not-injective squaring on circle nets: P = Q = R = 0 and
/// Sigma = S = sin(pi/m) for even m; Sigma stays positive for every m.
ExperimentReport run_circle_injsurj(const std::vector<int>& ms);

/// Injective-but-not-surjective halving on interval nets: Q = 0 exactly,
/// Sigma positive and nonincreasing along refinement.
ExperimentReport run_interval_injsurj(const std::vector<int>& ms);

/// Builds the spec used by run_circle_injsurj / run_interval_injsurj.
InjSurjSpec circle_injsurj_spec();
InjSurjSpec interval_injsurj_spec();

}  // namespace clw
