#pragma once

#include <cstddef>
#include <vector>

#include "exogait/model.hpp"

namespace exo {

/// Planar Bezier curve. Each control point is (abscissa, ordinate); for the
/// time-parameterized gait curves the abscissa is time.
class BezierCurve {
 public:
  explicit BezierCurve(std::vector<Vec2> control_points);

  const std::vector<Vec2>& control_points() const { return points_; }
  std::size_t degree() const { return points_.size() - 1; }

  /// Point at parameter u in [0, 1]; throws ValidationError outside.
  Vec2 eval(double u) const;

  /// Samples at u_j = j / segments, j = 0..segments (SIMD dispatched).
  void sample(std::size_t segments, std::vector<double>& xs, std::vector<double>& ys) const;

 private:
  std::vector<Vec2> points_;
};

Vec2 bezier_eval(const BezierCurve& curve, double u);

inline constexpr std::size_t kDefaultResolution = 1000;

/// Ordinate as a function of abscissa, from a dense sampling of the curve
/// and linear interpolation between samples.
class CurveTable {
 public:
  /// Throws InfeasibleError("time reparameterization not monotone") when the
  /// sampled abscissa decreases anywhere. With `require_monotone_value` the
  /// ordinate must be non-decreasing as well.
  CurveTable(const BezierCurve& curve, std::size_t resolution = kDefaultResolution,
             bool require_monotone_value = false);

  /// Linear interpolation at abscissa t; throws InfeasibleError outside the
  /// sampled range.
  double lookup(double t) const;

  double front() const { return abscissa_.front(); }
  double back() const { return abscissa_.back(); }
  const std::vector<double>& abscissa() const { return abscissa_; }
  const std::vector<double>& ordinate() const { return ordinate_; }

 private:
  std::vector<double> abscissa_;
  std::vector<double> ordinate_;
};

double curve_lookup(const BezierCurve& curve, double t, std::size_t resolution = kDefaultResolution);

}  // namespace exo
