#pragma once

#include <array>
#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "exogait/bezier.hpp"
#include "exogait/error.hpp"
#include "exogait/model.hpp"

namespace exo {

/// Control points of the four gait curves, 19 points in fixed row order:
/// r2 over time (5), torso angle over time (5), swing-foot path (5), pace
/// over time (4).
struct GaitControlPoints {
  static constexpr std::size_t kRows = 19;
  static constexpr std::size_t kParameters = 2 * kRows;

  std::array<Vec2, 5> r2;     ///< (t [s], r2)
  std::array<Vec2, 5> torso;  ///< (t [s], phi3 [rad])
  std::array<Vec2, 5> path;   ///< (x5 [m], y5 [m])
  std::array<Vec2, 4> pace;   ///< (t [s], z)

  /// Row k (0-based) of the stacked 19 x 2 matrix.
  Vec2& row(std::size_t k);
  const Vec2& row(std::size_t k) const;

  /// Row-major flattening: row 0 (t, r2), row 1 ..., row 18 (t, z).
  std::array<double, kParameters> flatten() const;
  static GaitControlPoints unflatten(std::span<const double> values);

  bool operator==(const GaitControlPoints&) const = default;
};

/// Stance-ankle angle over the step, a logistic between two set points.
struct AnkleProfile {
  double phi1_start = 0.0;  ///< [rad]
  double phi1_end = 0.0;    ///< [rad]
  double steepness = 0.0;   ///< kappa [1/s]
  double midpoint = 0.0;    ///< t_mid [s]
};

double ankle_profile_eval(const AnkleProfile& profile, double t);

struct GaitTask {
  Vec2 start = Vec2::Zero();  ///< swing foot at t = 0 [m]
  Vec2 land = Vec2::Zero();   ///< swing foot at t = step_time [m]
  double step_time = 1.0;     ///< [s]
  double r2_0 = 0.5;
  double phi3_0 = 0.0;        ///< [rad]
  AnkleProfile ankle;
  std::size_t samples = 100;                   ///< N; the table has N + 1 rows
  std::size_t resolution = kDefaultResolution;  ///< M for the time lookups
  double penalty_weight = 0.0;                 ///< v_p
  double contact_radius = 0.002;               ///< [m]

  /// Throws ValidationError on broken invariants.
  void validate() const;

  /// Logistic with steepness 8 / t_s centred at t_s / 2.
  static AnkleProfile default_ankle(double phi1_start, double phi1_end, double step_time);
};

struct TrajectoryRow {
  double t = 0.0;
  Vec5 theta = Vec5::Zero(), dtheta = Vec5::Zero(), ddtheta = Vec5::Zero();
  Vec5 phi = Vec5::Zero(), dphi = Vec5::Zero(), ddphi = Vec5::Zero();
  Vec2 p5 = Vec2::Zero();
  Vec2 v5 = Vec2::Zero();
  Vec5 torque = Vec5::Zero();  ///< T_theta [N m]
};

struct TrajectoryTable {
  std::vector<TrajectoryRow> rows;

  std::size_t size() const { return rows.size(); }
  double max_foot_speed() const;
};

/// Backward differences of a uniformly spaced series: first(k) K = x(k) -
/// x(k-1), second(k) K = first(k) - first(k-1), both zero at k = 0.
template <typename V>
struct Derivatives {
  std::vector<V> first;
  std::vector<V> second;
};

template <typename V>
Derivatives<V> finite_diff(std::span<const double> times, std::span<const V> values);

/// Failure at a specific sample of a gait.
class SampleError : public InfeasibleError {
 public:
  SampleError(std::size_t index, const std::string& what)
      : InfeasibleError("sample " + std::to_string(index) + ": " + what), index_(index) {}
  std::size_t index() const { return index_; }

 private:
  std::size_t index_;
};

/// Uniform sample times t_k = k t_s / N with t_N = t_s exactly.
std::vector<double> sample_times(double step_time, std::size_t samples);

/// Full joint-space trajectory with torques for a set of control points.
TrajectoryTable sample_gait(const GaitControlPoints& points, const GaitTask& task,
                            const BodyModel& model);

/// Trajectory from relative joint angles sampled on a uniform grid: the
/// derivative scheme, forward kinematics and torques of sample_gait.
TrajectoryTable table_from_angles(std::span<const double> times, std::span<const Vec5> theta,
                                  const BodyModel& model);

}  // namespace exo
