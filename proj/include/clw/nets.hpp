#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "clw/evaluator.hpp"
#include "clw/structure.hpp"

namespace clw {

/// Named linear operator on the ball, given as a dim x dim row-major matrix.
/// Operators must be non-expanding (unitaries, rotations, projections), so
/// the identity modulus is correct and images stay in the ball.
struct BallOperator {
  std::string name;
  int dim = 0;
  std::vector<double> matrix;

  std::vector<double> apply(const std::vector<double>& x) const;
};

BallOperator rotation_blocks(std::string name, const std::vector<double>& angles);

/// Description of a built-in compact structure with exact interpretations
/// and an eps-net generator.
struct SpaceSpec {
  enum class Kind { Interval, Circle, Ball, ProbAlgebra };
  Kind kind = Kind::Interval;
  bool interval_function = true;  // include h(x) = x/2
  int ball_dim = 2;
  std::vector<BallOperator> operators;
  int atoms = 3;  // probability algebra over {1..atoms}

  static SpaceSpec interval(bool with_function = true);
  static SpaceSpec circle();
  static SpaceSpec ball(int n, std::vector<BallOperator> ops = {});
  static SpaceSpec prob_algebra(int m);

  Signature signature() const;
  std::string kind_name() const;
};

struct NetOptions {
  long long max_points = 100000;
  /// Guard on the total dense table entries a net may materialize.
  long long max_table_entries = 60000000;
  /// Predicate tables larger than this stay procedural (value-identical).
  long long dense_pred_threshold = 8000000;
};

/// A generated net. Function and constant symbols are left uninterpreted
/// until discretize_symbols snaps them to nearest net points; relational
/// data is exact (the net is a substructure for relational signatures).
struct NetResult {
  FiniteStructure structure;
  double mesh = 0.0;  // guaranteed covering radius (0 when exact)
  int resolution = 1;
  bool exact = false;  // prob algebras are their own space
  std::vector<std::vector<double>> coords;  // interval/circle/ball geometry

  std::map<std::string, std::vector<int>> pending_funcs;
  std::map<std::string, std::vector<double>> pending_errors;
  std::map<std::string, int> pending_consts;
  std::map<std::string, double> pending_const_errors;
};

/// Interval -> {k/m}, circle -> m-th roots of unity, ball -> grid of spacing
/// 1/m intersected with the ball plus normalized boundary directions,
/// probability algebra -> the exact finite structure (resolution ignored).
/// Throws ResourceError past the configured caps.
NetResult generate_net(const SpaceSpec& spec, int m, const NetOptions& opts = {});

/// Install the snapped function/constant tables recorded at generation.
/// Identity on relational and exact nets.
FiniteStructure discretize_symbols(const NetResult& net);

/// Sidecar provenance: mesh, resolution, per-entry snap errors.
ojson net_provenance(const NetResult& net);

struct ReferenceValue {
  double value = 0.0;
  double error_bound = 0.0;
  int m_ref = 0;
  bool exact = false;
};

/// Oracle approximation of a sentence's value on the exact space: evaluate
/// on a fine net (default caller-chosen m_ref) and report the heuristic
/// error bound composed from the mesh and the formula's moduli.
ReferenceValue reference_value(const SpaceSpec& spec, const FormulaPtr& sentence,
                               int m_ref, const NetOptions& opts = {});

/// Max over a deterministic sample of exact space points of the distance to
/// the nearest net point; at most mesh by construction.
double covering_sample_max_dist(const SpaceSpec& spec, const NetResult& net,
                                int samples, std::uint64_t seed);

}  // namespace clw
