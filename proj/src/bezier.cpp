#include "exogait/bezier.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "exogait/error.hpp"
#include "exogait/simd/bezier_kernels.hpp"

namespace exo {

namespace {

void split(const std::vector<Vec2>& pts, double* xs, double* ys) {
  for (std::size_t i = 0; i < pts.size(); ++i) {
    xs[i] = pts[i].x();
    ys[i] = pts[i].y();
  }
}

}  // namespace

BezierCurve::BezierCurve(std::vector<Vec2> control_points) : points_(std::move(control_points)) {
  if (points_.size() < 2 || points_.size() > simd::kMaxControlPoints)
    throw ValidationError("Bezier curve needs 2.." + std::to_string(simd::kMaxControlPoints) +
                          " control points");
  for (const Vec2& p : points_)
    if (!p.allFinite()) throw ValidationError("Bezier control point is not finite");
}

Vec2 BezierCurve::eval(double u) const {
  if (!(u >= 0.0 && u <= 1.0)) throw ValidationError("Bezier parameter outside [0, 1]");
  double cx[simd::kMaxControlPoints];
  double cy[simd::kMaxControlPoints];
  split(points_, cx, cy);
  Vec2 out;
  simd::detail::de_casteljau(cx, cy, points_.size(), u, &out.x(), &out.y());
  return out;
}

void BezierCurve::sample(std::size_t segments, std::vector<double>& xs,
                         std::vector<double>& ys) const {
  double cx[simd::kMaxControlPoints];
  double cy[simd::kMaxControlPoints];
  split(points_, cx, cy);
  xs.resize(segments + 1);
  ys.resize(segments + 1);
  simd::bezier_grid(std::span<const double>(cx, points_.size()),
                    std::span<const double>(cy, points_.size()), segments, xs, ys);
}

Vec2 bezier_eval(const BezierCurve& curve, double u) { return curve.eval(u); }

CurveTable::CurveTable(const BezierCurve& curve, std::size_t resolution,
                       bool require_monotone_value) {
  if (resolution == 0) throw ValidationError("curve resolution must be > 0");
  curve.sample(resolution, abscissa_, ordinate_);
  for (std::size_t j = 1; j < abscissa_.size(); ++j) {
    if (abscissa_[j] < abscissa_[j - 1])
      throw InfeasibleError("time reparameterization not monotone");
    if (require_monotone_value && ordinate_[j] < ordinate_[j - 1])
      throw InfeasibleError("pace variable not monotone");
  }
}

double CurveTable::lookup(double t) const {
  if (!(t >= abscissa_.front() && t <= abscissa_.back()))
    throw InfeasibleError("lookup time " + std::to_string(t) + " outside curve range");
  if (t == abscissa_.back()) return ordinate_.back();
  // First sample strictly after t; flat runs resolve to their last sample.
  const auto after = std::upper_bound(abscissa_.begin(), abscissa_.end(), t);
  const std::size_t hi = static_cast<std::size_t>(after - abscissa_.begin());
  const std::size_t lo = hi - 1;
  const double frac = (t - abscissa_[lo]) / (abscissa_[hi] - abscissa_[lo]);
  return ordinate_[lo] + frac * (ordinate_[hi] - ordinate_[lo]);
}

double curve_lookup(const BezierCurve& curve, double t, std::size_t resolution) {
  return CurveTable(curve, resolution).lookup(t);
}

}  // namespace exo
