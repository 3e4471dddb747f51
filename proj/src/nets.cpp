#include "clw/nets.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <numeric>
#include <random>
#include <set>

namespace clw {

std::vector<double> BallOperator::apply(const std::vector<double>& x) const {
  std::vector<double> y(dim, 0.0);
  for (int i = 0; i < dim; ++i) {
    double s = 0.0;
    for (int j = 0; j < dim; ++j) s += matrix[std::size_t(i) * dim + j] * x[j];
    y[i] = s;
  }
  return y;
}

BallOperator rotation_blocks(std::string name, const std::vector<double>& angles) {
  BallOperator op;
  op.name = std::move(name);
  op.dim = static_cast<int>(angles.size()) * 2;
  op.matrix.assign(std::size_t(op.dim) * op.dim, 0.0);
  for (std::size_t b = 0; b < angles.size(); ++b) {
    double c = std::cos(angles[b]);
    double s = std::sin(angles[b]);
    int i = static_cast<int>(2 * b);
    op.matrix[std::size_t(i) * op.dim + i] = c;
    op.matrix[std::size_t(i) * op.dim + i + 1] = -s;
    op.matrix[std::size_t(i + 1) * op.dim + i] = s;
    op.matrix[std::size_t(i + 1) * op.dim + i + 1] = c;
  }
  return op;
}

SpaceSpec SpaceSpec::interval(bool with_function) {
  SpaceSpec s;
  s.kind = Kind::Interval;
  s.interval_function = with_function;
  return s;
}

SpaceSpec SpaceSpec::circle() {
  SpaceSpec s;
  s.kind = Kind::Circle;
  return s;
}

SpaceSpec SpaceSpec::ball(int n, std::vector<BallOperator> ops) {
  SpaceSpec s;
  s.kind = Kind::Ball;
  s.ball_dim = n;
  s.operators = std::move(ops);
  return s;
}

SpaceSpec SpaceSpec::prob_algebra(int m) {
  SpaceSpec s;
  s.kind = Kind::ProbAlgebra;
  s.atoms = m;
  return s;
}

std::string SpaceSpec::kind_name() const {
  switch (kind) {
    case Kind::Interval: return "interval";
    case Kind::Circle: return "circle";
    case Kind::Ball: return "ball";
    case Kind::ProbAlgebra: return "prob_algebra";
  }
  return "?";
}

Signature SpaceSpec::signature() const {
  Signature sig;
  switch (kind) {
    case Kind::Interval:
      sig.name = "interval";
      sig.predicates.push_back({"P", 1, PlFunc::identity()});
      if (interval_function) {
        // h is 1/2-Lipschitz: d < min(2eps,1) forces |h(a)-h(b)| <= eps
        sig.functions.push_back({"h", 1, pl_min_scale(2)});
      }
      break;
    case Kind::Circle:
      sig.name = "circle";
      // |P(u,v,w) - P(u',v',w')| <= d(u,u') + d(v,v') + d(w,w') <= 3D
      sig.predicates.push_back({"P", 3, pl_shrink(3)});
      break;
    case Kind::Ball:
      sig.name = "ball" + std::to_string(ball_dim);
      // |ip(x,y) - ip(x',y')| <= d(x,x') + d(y,y') <= 2D
      sig.predicates.push_back({"ip", 2, pl_shrink(2)});
      for (const auto& op : operators) {
        sig.functions.push_back({op.name, 1, PlFunc::identity()});
      }
      break;
    case Kind::ProbAlgebra:
      sig.name = "prob_algebra" + std::to_string(atoms);
      sig.predicates.push_back({"mu", 1, PlFunc::identity()});
      // mu((x o y) delta (x' o y')) <= mu(x delta x') + mu(y delta y') <= 2D
      sig.functions.push_back({"inter", 2, pl_shrink(2)});
      sig.functions.push_back({"union", 2, pl_shrink(2)});
      sig.functions.push_back({"compl", 1, PlFunc::identity()});
      sig.functions.push_back({"tau", 1, PlFunc::identity()});
      sig.constants = {"bot", "top"};
      break;
  }
  return sig;
}

namespace {

long long ipow(long long b, int e) {
  long long r = 1;
  while (e--) r *= b;
  return r;
}

void guard_tables(const Signature& sig, long long n, const NetOptions& opts,
                  long long dense_pred_threshold) {
  if (n > opts.max_points) {
    throw ResourceError("net would have " + std::to_string(n) +
                        " points, above the cap of " +
                        std::to_string(opts.max_points));
  }
  long long entries = n * n;  // distance matrix
  for (const auto& p : sig.predicates) {
    long long t = ipow(n, p.arity);
    if (t <= dense_pred_threshold) entries += t;
  }
  for (const auto& f : sig.functions) entries += ipow(n, f.arity);
  if (entries > opts.max_table_entries) {
    throw ResourceError("net tables would need " + std::to_string(entries) +
                        " entries, above the cap of " +
                        std::to_string(opts.max_table_entries));
  }
}

NetResult make_interval(const SpaceSpec& spec, int m, const NetOptions& opts) {
  NetResult net;
  net.resolution = m;
  // every x in [0,1] is within 1/(2m) of some k/m
  net.mesh = 0.5 / m;
  const int n = m + 1;
  guard_tables(spec.signature(), n, opts, opts.dense_pred_threshold);
  FiniteStructure& a = net.structure;
  a.sig = spec.signature();
  for (int k = 0; k <= m; ++k) {
    double x = double(k) / m;
    a.points.push_back(format_double(x));
    net.coords.push_back({x});
  }
  a.dist.resize(std::size_t(n) * n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      a.dist[std::size_t(i) * n + j] = double(std::abs(i - j)) / m;
    }
  }
  std::vector<double> pvals(n);
  for (int k = 0; k <= m; ++k) pvals[k] = double(k) / m;
  a.preds["P"] = std::move(pvals);
  if (spec.interval_function) {
    // exact image of k/m is k/(2m); nearest net point minimizes |2j - k|,
    // ties broken toward the lower index
    std::vector<int> table(n);
    std::vector<double> errors(n);
    for (int k = 0; k <= m; ++k) {
      int best = 0;
      long long best_num = std::llabs(2LL * 0 - k);
      for (int j = 1; j <= m; ++j) {
        long long num = std::llabs(2LL * j - k);
        if (num < best_num) {
          best_num = num;
          best = j;
        }
      }
      table[k] = best;
      errors[k] = double(best_num) / (2.0 * m);
    }
    net.pending_funcs["h"] = std::move(table);
    net.pending_errors["h"] = std::move(errors);
  }
  return net;
}

double circle_chord(int delta, int m) {
  // half of |z_j - z_k| for roots delta steps apart
  return std::sin(M_PI * double(delta) / double(m));
}

NetResult make_circle(const SpaceSpec& spec, int m, const NetOptions& opts) {
  NetResult net;
  net.resolution = m;
  // farthest point from the net sits mid-arc; the half-chord there is
  // sin(pi/(2m))
  net.mesh = std::sin(M_PI / (2.0 * m));
  const int n = m;
  guard_tables(spec.signature(), n, opts, opts.dense_pred_threshold);
  FiniteStructure& a = net.structure;
  a.sig = spec.signature();
  for (int k = 0; k < m; ++k) {
    a.points.push_back("z" + std::to_string(k));
    double theta = 2.0 * M_PI * k / m;
    net.coords.push_back({std::cos(theta), std::sin(theta)});
  }
  auto circ = [m](int i, int j) {
    int d = std::abs(i - j) % m;
    return std::min(d, m - d);
  };
  a.dist.resize(std::size_t(n) * n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      a.dist[std::size_t(i) * n + j] = circle_chord(circ(i, j), m);
    }
  }
  // P(u,v,w) = d(uv, w); products of roots are roots, so the restriction
  // is exact
  long long entries = ipow(n, 3);
  if (entries <= opts.dense_pred_threshold) {
    std::vector<double> table(static_cast<std::size_t>(entries));
    std::size_t idx = 0;
    for (int u = 0; u < m; ++u) {
      for (int v = 0; v < m; ++v) {
        int uv = (u + v) % m;
        for (int w = 0; w < m; ++w) {
          table[idx++] = circle_chord(circ(uv, w), m);
        }
      }
    }
    a.preds["P"] = std::move(table);
  } else {
    a.lazy_preds["P"] = [m, circ](const int* t) {
      return circle_chord(circ((t[0] + t[1]) % m, t[2]), m);
    };
  }
  return net;
}

NetResult make_ball(const SpaceSpec& spec, int m, const NetOptions& opts) {
  NetResult net;
  net.resolution = m;
  const int dim = spec.ball_dim;
  if (dim < 1) throw std::invalid_argument("ball dimension must be >= 1");
  double root_n = std::sqrt(double(dim));
  // grid rounding moves a point by at most sqrt(n)/(2m); near the sphere the
  // rounded point may fall outside, and its normalization adds at most the
  // overshoot |g|-1 <= sqrt(n)/(2m). Euclidean covering <= sqrt(n)/m, so the
  // half metric is covered within sqrt(n)/(2m).
  net.mesh = std::min(1.0, root_n / (2.0 * m));

  long long candidates = ipow(2LL * m + 1, dim);
  if (candidates > (1LL << 26)) {
    throw ResourceError("ball grid enumeration too large; lower m or the dimension");
  }

  std::vector<std::vector<double>> pts;
  std::vector<std::vector<int>> grid;  // integer coordinates of ball points
  std::set<std::vector<int>> shell_dirs;

  std::vector<int> g(dim, -m);
  long long mm = 1LL * m * m;
  double shell_limit = (m + root_n / 2.0) * (m + root_n / 2.0) + 1e-9;
  while (true) {
    long long s = 0;
    for (int c : g) s += 1LL * c * c;
    if (s <= mm) {
      std::vector<double> x(dim);
      for (int i = 0; i < dim; ++i) x[i] = double(g[i]) / m;
      pts.push_back(std::move(x));
      grid.push_back(g);
    } else if (double(s) <= shell_limit) {
      std::vector<int> p = g;
      int d = 0;
      for (int c : p) d = std::gcd(d, std::abs(c));
      for (int& c : p) c /= d;
      shell_dirs.insert(std::move(p));
    }
    int k = dim - 1;
    while (k >= 0 && ++g[k] > m) g[k--] = -m;
    if (k < 0) break;
  }
  for (const auto& p : shell_dirs) {
    long long s = 0;
    for (int c : p) s += 1LL * c * c;
    // skip directions whose unit vector is already a grid point: s = q^2
    // with q dividing m
    long long q = llround(std::sqrt(double(s)));
    if (q * q == s && m % q == 0) continue;
    double norm = std::sqrt(double(s));
    std::vector<double> x(dim);
    for (int i = 0; i < dim; ++i) x[i] = double(p[i]) / norm;
    pts.push_back(std::move(x));
  }

  const int n = static_cast<int>(pts.size());
  guard_tables(spec.signature(), n, opts, opts.dense_pred_threshold);

  FiniteStructure& a = net.structure;
  a.sig = spec.signature();
  net.coords = pts;
  for (const auto& x : pts) {
    std::string label = "(";
    for (int i = 0; i < dim; ++i) {
      if (i) label += ",";
      label += format_double(x[i]);
    }
    a.points.push_back(label + ")");
  }
  auto euclid = [&](const std::vector<double>& x, const std::vector<double>& y) {
    double s = 0.0;
    for (int i = 0; i < dim; ++i) s += (x[i] - y[i]) * (x[i] - y[i]);
    return std::sqrt(s);
  };
  a.dist.resize(std::size_t(n) * n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      a.dist[std::size_t(i) * n + j] = 0.5 * euclid(pts[i], pts[j]);
    }
  }
  std::vector<double> ip(std::size_t(n) * n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      double dot = 0.0;
      for (int k = 0; k < dim; ++k) dot += pts[i][k] * pts[j][k];
      ip[std::size_t(i) * n + j] = (1.0 + dot) / 2.0;
    }
  }
  a.preds["ip"] = std::move(ip);

  for (const auto& op : spec.operators) {
    if (op.dim != dim) {
      throw std::invalid_argument("operator " + op.name + " has wrong dimension");
    }
    std::vector<int> table(n);
    std::vector<double> errors(n);
    for (int i = 0; i < n; ++i) {
      std::vector<double> y = op.apply(pts[i]);
      int best = 0;
      double best_d = euclid(y, pts[0]);
      for (int j = 1; j < n; ++j) {
        double dd = euclid(y, pts[j]);
        if (dd < best_d) {
          best_d = dd;
          best = j;
        }
      }
      table[i] = best;
      errors[i] = 0.5 * best_d;
    }
    net.pending_funcs[op.name] = std::move(table);
    net.pending_errors[op.name] = std::move(errors);
  }
  return net;
}

std::string mask_label(std::uint32_t mask, int atoms) {
  std::string s = "{";
  bool first = true;
  for (int i = 0; i < atoms; ++i) {
    if (mask & (1u << i)) {
      if (!first) s += ",";
      s += std::to_string(i + 1);
      first = false;
    }
  }
  return s + "}";
}

NetResult make_prob_algebra(const SpaceSpec& spec, const NetOptions& opts) {
  NetResult net;
  net.resolution = spec.atoms;
  net.mesh = 0.0;
  net.exact = true;
  const int atoms = spec.atoms;
  if (atoms < 1 || atoms > 24) {
    throw std::invalid_argument("prob_algebra atom count out of range");
  }
  const long long n = 1LL << atoms;
  guard_tables(spec.signature(), n, opts, opts.dense_pred_threshold);
  FiniteStructure& a = net.structure;
  a.sig = spec.signature();
  const std::uint32_t full = static_cast<std::uint32_t>(n - 1);
  a.points.reserve(n);
  for (std::uint32_t x = 0; x < n; ++x) a.points.push_back(mask_label(x, atoms));

  a.dist.resize(std::size_t(n) * n);
  for (std::uint32_t x = 0; x < n; ++x) {
    for (std::uint32_t y = 0; y < n; ++y) {
      a.dist[std::size_t(x) * n + y] = double(std::popcount(x ^ y)) / atoms;
    }
  }
  std::vector<double> mu(n);
  for (std::uint32_t x = 0; x < n; ++x) mu[x] = double(std::popcount(x)) / atoms;
  a.preds["mu"] = std::move(mu);

  std::vector<int> inter(std::size_t(n) * n), uni(std::size_t(n) * n);
  for (std::uint32_t x = 0; x < n; ++x) {
    for (std::uint32_t y = 0; y < n; ++y) {
      inter[std::size_t(x) * n + y] = int(x & y);
      uni[std::size_t(x) * n + y] = int(x | y);
    }
  }
  a.funcs["inter"] = std::move(inter);
  a.funcs["union"] = std::move(uni);
  std::vector<int> compl_(n), tau(n);
  for (std::uint32_t x = 0; x < n; ++x) {
    compl_[x] = int(~x & full);
    // atom i -> i+1, atom `atoms` wraps to 1
    std::uint32_t shifted = ((x << 1) | (x >> (atoms - 1))) & full;
    tau[x] = int(atoms == 1 ? x : shifted);
  }
  a.funcs["compl"] = std::move(compl_);
  a.funcs["tau"] = std::move(tau);
  a.consts["bot"] = 0;
  a.consts["top"] = int(full);
  return net;
}

}  // namespace

NetResult generate_net(const SpaceSpec& spec, int m, const NetOptions& opts) {
  if (m < 1) throw std::invalid_argument("net resolution must be >= 1");
  switch (spec.kind) {
    case SpaceSpec::Kind::Interval: return make_interval(spec, m, opts);
    case SpaceSpec::Kind::Circle: return make_circle(spec, m, opts);
    case SpaceSpec::Kind::Ball: return make_ball(spec, m, opts);
    case SpaceSpec::Kind::ProbAlgebra: return make_prob_algebra(spec, opts);
  }
  throw std::invalid_argument("bad space kind");
}

FiniteStructure discretize_symbols(const NetResult& net) {
  FiniteStructure a = net.structure;
  for (const auto& [name, table] : net.pending_funcs) a.funcs[name] = table;
  for (const auto& [name, idx] : net.pending_consts) a.consts[name] = idx;
  return a;
}

ojson net_provenance(const NetResult& net) {
  ojson j;
  j["mesh"] = net.mesh;
  j["resolution"] = net.resolution;
  j["exact"] = net.exact;
  ojson snaps;
  for (const auto& [name, errors] : net.pending_errors) {
    ojson s;
    double mx = 0.0;
    int snapped = 0;
    for (double e : errors) {
      mx = std::max(mx, e);
      if (e > 0.0) ++snapped;
    }
    s["max_error"] = mx;
    s["snapped_entries"] = snapped;
    if (errors.size() <= 10000) s["errors"] = errors;
    snaps[name] = std::move(s);
  }
  for (const auto& [name, err] : net.pending_const_errors) {
    snaps[name] = ojson{{"max_error", err}};
  }
  j["snap"] = std::move(snaps);
  return j;
}

ReferenceValue reference_value(const SpaceSpec& spec, const FormulaPtr& sentence,
                               int m_ref, const NetOptions& opts) {
  ReferenceValue out;
  NetResult net = generate_net(spec, m_ref, opts);
  FiniteStructure a = discretize_symbols(net);
  out.value = eval_formula(a, sentence);
  out.m_ref = net.resolution;
  out.exact = net.exact;
  out.error_bound = net.exact ? 0.0 : net_error_bound(sentence, a.sig, net.mesh);
  return out;
}

double covering_sample_max_dist(const SpaceSpec& spec, const NetResult& net,
                                int samples, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  double worst = 0.0;
  const int dim = spec.ball_dim;
  std::normal_distribution<double> gauss(0.0, 1.0);
  for (int s = 0; s < samples; ++s) {
    switch (spec.kind) {
      case SpaceSpec::Kind::Interval: {
        double x = unit(rng);
        double best = 2.0;
        for (const auto& p : net.coords) best = std::min(best, std::fabs(x - p[0]));
        worst = std::max(worst, best);
        break;
      }
      case SpaceSpec::Kind::Circle: {
        double theta = 2.0 * M_PI * unit(rng);
        double cx = std::cos(theta), sy = std::sin(theta);
        double best = 2.0;
        for (const auto& p : net.coords) {
          double dx = cx - p[0], dy = sy - p[1];
          best = std::min(best, 0.5 * std::sqrt(dx * dx + dy * dy));
        }
        worst = std::max(worst, best);
        break;
      }
      case SpaceSpec::Kind::Ball: {
        std::vector<double> x(dim);
        double norm2 = 0.0;
        for (int i = 0; i < dim; ++i) {
          x[i] = gauss(rng);
          norm2 += x[i] * x[i];
        }
        double norm = std::sqrt(norm2);
        double radius = std::pow(unit(rng), 1.0 / dim);
        for (int i = 0; i < dim; ++i) x[i] = x[i] / norm * radius;
        double best = 2.0;
        for (const auto& p : net.coords) {
          double s2 = 0.0;
          for (int i = 0; i < dim; ++i) s2 += (x[i] - p[i]) * (x[i] - p[i]);
          best = std::min(best, 0.5 * std::sqrt(s2));
        }
        worst = std::max(worst, best);
        break;
      }
      case SpaceSpec::Kind::ProbAlgebra:
        return 0.0;  // the net is the whole space
    }
  }
  return worst;
}

}  // namespace clw
