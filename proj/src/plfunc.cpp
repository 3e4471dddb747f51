#include "clw/plfunc.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace clw {

namespace {
double g_num_tol = kTolDefault;
}

double num_tol() { return g_num_tol; }
void set_num_tol(double tol) { g_num_tol = tol; }

PlFunc::PlFunc(std::vector<Point> breakpoints, bool increasing,
               bool zero_at_zero)
    : pts_(std::move(breakpoints)),
      increasing_(increasing),
      zero_at_zero_(zero_at_zero) {
  if (pts_.size() < 2) {
    throw std::invalid_argument("PlFunc: need at least two breakpoints");
  }
  if (pts_.front().first != 0.0 || pts_.back().first != 1.0) {
    throw std::invalid_argument("PlFunc: breakpoints must span x = 0..1");
  }
  for (std::size_t i = 0; i < pts_.size(); ++i) {
    auto [x, y] = pts_[i];
    if (!(x >= 0.0 && x <= 1.0 && y >= 0.0 && y <= 1.0)) {
      throw std::invalid_argument("PlFunc: coordinates must lie in [0,1]");
    }
    if (i > 0 && !(pts_[i - 1].first < x)) {
      throw std::invalid_argument("PlFunc: x-coordinates must be strictly increasing");
    }
    if (increasing_ && i > 0 && pts_[i - 1].second > y) {
      throw std::invalid_argument("PlFunc: marked increasing but y decreases");
    }
  }
  if (zero_at_zero_ && pts_.front().second != 0.0) {
    throw std::invalid_argument("PlFunc: marked zero-at-zero but y(0) != 0");
  }
}

PlFunc PlFunc::identity() { return PlFunc({{0.0, 0.0}, {1.0, 1.0}}); }

double PlFunc::eval(double x) const {
  if (!(x >= 0.0 && x <= 1.0)) {
    throw std::domain_error("PlFunc::eval: argument outside [0,1]");
  }
  // Exact at breakpoints; interpolation below never sees x == x1.
  auto it = std::lower_bound(
      pts_.begin(), pts_.end(), x,
      [](const Point& p, double v) { return p.first < v; });
  if (it != pts_.end() && it->first == x) return it->second;
  auto [x1, y1] = *it;
  auto [x0, y0] = *(it - 1);
  return y0 + (x - x0) * ((y1 - y0) / (x1 - x0));
}

double PlFunc::threshold(double dist) const {
  if (!(dist >= 0.0 && dist <= 1.0)) {
    throw std::domain_error("PlFunc::threshold: argument outside [0,1]");
  }
  if (pts_.front().second > dist) return 0.0;
  for (std::size_t i = 1; i < pts_.size(); ++i) {
    auto [x0, y0] = pts_[i - 1];
    auto [x1, y1] = pts_[i];
    if (y1 > dist) {
      if (y0 > dist) return x0;
      // crossing inside the segment: solve y(eps) = dist
      return x0 + (dist - y0) * ((x1 - x0) / (y1 - y0));
    }
  }
  return 1.0;
}

double PlFunc::max_slope() const {
  double s = 0.0;
  for (std::size_t i = 1; i < pts_.size(); ++i) {
    double slope = std::fabs(pts_[i].second - pts_[i - 1].second) /
                   (pts_[i].first - pts_[i - 1].first);
    s = std::max(s, slope);
  }
  return s;
}

bool PlFunc::positive_after_zero() const {
  for (const auto& [x, y] : pts_) {
    if (x > 0.0 && y <= 0.0) return false;
  }
  return true;
}

bool PlFunc::operator==(const PlFunc& other) const {
  return pts_ == other.pts_ && increasing_ == other.increasing_ &&
         zero_at_zero_ == other.zero_at_zero_;
}

PlFunc pl_min_scale(int k) {
  if (k < 1) throw std::invalid_argument("pl_min_scale: k must be >= 1");
  if (k == 1) return PlFunc::identity();
  return PlFunc({{0.0, 0.0}, {1.0 / k, 1.0}, {1.0, 1.0}});
}

PlFunc pl_shrink(int k) {
  if (k < 1) throw std::invalid_argument("pl_shrink: k must be >= 1");
  return PlFunc({{0.0, 0.0}, {1.0, 1.0 / k}});
}

}  // namespace clw
