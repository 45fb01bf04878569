#include "exogait/gait.hpp"

#include <algorithm>
#include <cmath>

#include "exogait/dynamics.hpp"
#include "exogait/kinematics.hpp"

namespace exo {

namespace {

template <typename V>
V zero_like() {
  if constexpr (std::is_arithmetic_v<V>) {
    return V{0};
  } else {
    return V::Zero();
  }
}

// Lookups interpolate between samples that are convex combinations of
// values in [lo, hi]; the result may leave the interval by an ulp.
double clamp_unit(double v, std::size_t k, const char* what) {
  constexpr double kEps = 1e-12;
  if (v < -kEps || v > 1.0 + kEps) throw SampleError(k, std::string(what) + " outside [0, 1]");
  return std::clamp(v, 0.0, 1.0);
}

TrajectoryTable build_table(std::span<const double> times, std::span<const Vec5> phis,
                            std::span<const Vec2> feet, const BodyModel& model) {
  const Derivatives<Vec5> dphi = finite_diff<Vec5>(times, phis);
  const Derivatives<Vec2> dfoot = finite_diff<Vec2>(times, feet);
  const ChainDynamics dynamics(model);

  TrajectoryTable table;
  table.rows.resize(times.size());
  for (std::size_t k = 0; k < times.size(); ++k) {
    TrajectoryRow& row = table.rows[k];
    row.t = times[k];
    const PoseAbs pose{phis[k], dphi.first[k], dphi.second[k]};
    const PoseRel rel = to_relative(pose);
    row.phi = pose.phi;
    row.dphi = pose.dphi;
    row.ddphi = pose.ddphi;
    row.theta = rel.theta;
    row.dtheta = rel.dtheta;
    row.ddtheta = rel.ddtheta;
    row.p5 = feet[k];
    row.v5 = dfoot.first[k];
    row.torque = dynamics.torque_relative(pose).values;
  }
  return table;
}

}  // namespace

Vec2& GaitControlPoints::row(std::size_t k) {
  return const_cast<Vec2&>(std::as_const(*this).row(k));
}

const Vec2& GaitControlPoints::row(std::size_t k) const {
  if (k < 5) return r2[k];
  if (k < 10) return torso[k - 5];
  if (k < 15) return path[k - 10];
  if (k < kRows) return pace[k - 15];
  throw std::out_of_range("control point row out of range");
}

std::array<double, GaitControlPoints::kParameters> GaitControlPoints::flatten() const {
  std::array<double, kParameters> out{};
  for (std::size_t k = 0; k < kRows; ++k) {
    out[2 * k] = row(k).x();
    out[2 * k + 1] = row(k).y();
  }
  return out;
}

GaitControlPoints GaitControlPoints::unflatten(std::span<const double> values) {
  if (values.size() != kParameters)
    throw ValidationError("expected " + std::to_string(kParameters) + " gait parameters, got " +
                          std::to_string(values.size()));
  GaitControlPoints p;
  for (std::size_t k = 0; k < kRows; ++k) p.row(k) = Vec2(values[2 * k], values[2 * k + 1]);
  return p;
}

double ankle_profile_eval(const AnkleProfile& profile, double t) {
  const double s = 1.0 / (1.0 + std::exp(-profile.steepness * (t - profile.midpoint)));
  return profile.phi1_start + (profile.phi1_end - profile.phi1_start) * s;
}

void GaitTask::validate() const {
  const auto require = [](bool ok, const char* what) {
    if (!ok) throw ValidationError(what);
  };
  require(start.allFinite() && land.allFinite(), "task: start/land must be finite");
  require(std::isfinite(step_time) && step_time > 0.0, "task: step_time must be > 0");
  require(samples >= 10, "task: samples must be >= 10");
  require(resolution >= 1, "task: resolution must be >= 1");
  require(std::isfinite(contact_radius) && contact_radius > 0.0, "task: contact_radius must be > 0");
  require(std::isfinite(penalty_weight) && penalty_weight >= 0.0,
          "task: penalty_weight must be >= 0");
  require(r2_0 >= 0.0 && r2_0 <= 1.0, "task: r2_0 must lie in [0, 1]");
  require(std::isfinite(phi3_0), "task: phi3_0 must be finite");
  require(std::isfinite(ankle.phi1_start) && std::isfinite(ankle.phi1_end),
          "task: ankle set points must be finite");
  require(std::isfinite(ankle.steepness) && ankle.steepness > 0.0,
          "task: ankle steepness must be > 0");
  require(ankle.midpoint > 0.0 && ankle.midpoint < step_time,
          "task: ankle midpoint must lie inside (0, step_time)");
}

AnkleProfile GaitTask::default_ankle(double phi1_start, double phi1_end, double step_time) {
  return {phi1_start, phi1_end, 8.0 / step_time, step_time / 2.0};
}

double TrajectoryTable::max_foot_speed() const {
  double best = 0.0;
  for (const auto& row : rows) best = std::max(best, row.v5.norm());
  return best;
}

template <typename V>
Derivatives<V> finite_diff(std::span<const double> times, std::span<const V> values) {
  const std::size_t n = values.size();
  if (n < 3) throw ValidationError("finite_diff: need at least 3 samples");
  if (times.size() != n) throw ValidationError("finite_diff: times/values length mismatch");
  const double step = (times[n - 1] - times[0]) / static_cast<double>(n - 1);
  if (!(step > 0.0)) throw ValidationError("finite_diff: step must be > 0");
  for (std::size_t k = 1; k < n; ++k) {
    if (std::abs((times[k] - times[k - 1]) - step) > 1e-9 * step)
      throw ValidationError("finite_diff: non-uniform spacing");
  }

  Derivatives<V> d;
  d.first.assign(n, zero_like<V>());
  d.second.assign(n, zero_like<V>());
  for (std::size_t k = 1; k < n; ++k) {
    d.first[k] = (values[k] - values[k - 1]) / step;
    d.second[k] = (d.first[k] - d.first[k - 1]) / step;
  }
  return d;
}

template Derivatives<double> finite_diff<double>(std::span<const double>, std::span<const double>);
template Derivatives<Vec2> finite_diff<Vec2>(std::span<const double>, std::span<const Vec2>);
template Derivatives<Vec5> finite_diff<Vec5>(std::span<const double>, std::span<const Vec5>);

std::vector<double> sample_times(double step_time, std::size_t samples) {
  std::vector<double> t(samples + 1);
  for (std::size_t k = 0; k <= samples; ++k)
    t[k] = step_time * static_cast<double>(k) / static_cast<double>(samples);
  t[samples] = step_time;
  return t;
}

TrajectoryTable sample_gait(const GaitControlPoints& points, const GaitTask& task,
                            const BodyModel& model) {
  task.validate();
  const std::size_t m = task.resolution;
  const CurveTable r2_of_t(BezierCurve({points.r2.begin(), points.r2.end()}), m);
  const CurveTable torso_of_t(BezierCurve({points.torso.begin(), points.torso.end()}), m);
  const CurveTable pace_of_t(BezierCurve({points.pace.begin(), points.pace.end()}), m, true);
  const BezierCurve path({points.path.begin(), points.path.end()});

  const std::vector<double> times = sample_times(task.step_time, task.samples);
  std::vector<Vec5> phis(times.size());
  std::vector<Vec2> feet(times.size());
  for (std::size_t k = 0; k < times.size(); ++k) {
    const double t = times[k];
    try {
      IkInput in;
      in.r2 = clamp_unit(r2_of_t.lookup(t), k, "r2");
      in.phi3 = torso_of_t.lookup(t);
      in.phi1 = ankle_profile_eval(task.ankle, t);
      in.target = path.eval(clamp_unit(pace_of_t.lookup(t), k, "pace z"));
      phis[k] = inverse_kinematics(model, in);
      feet[k] = in.target;
    } catch (const SampleError&) {
      throw;
    } catch (const std::runtime_error& e) {
      throw SampleError(k, e.what());
    }
  }
  return build_table(times, phis, feet, model);
}

TrajectoryTable table_from_angles(std::span<const double> times, std::span<const Vec5> theta,
                                  const BodyModel& model) {
  if (times.size() != theta.size())
    throw ValidationError("table_from_angles: times/angles length mismatch");
  std::vector<Vec5> phis(theta.size());
  std::vector<Vec2> feet(theta.size());
  for (std::size_t k = 0; k < theta.size(); ++k) {
    phis[k] = angle_transform::matrix() * theta[k] + angle_transform::offset();
    feet[k] = forward_kinematics(model, phis[k]).swing_foot();
  }
  return build_table(times, phis, feet, model);
}

}  // namespace exo
