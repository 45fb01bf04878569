#include "exogait/kinematics.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "exogait/error.hpp"

namespace exo {

namespace {

constexpr double kPi = std::numbers::pi;

// Slack on circle-intersection tests so exact-touch configurations (a fully
// straight leg) survive round-off.
constexpr double kReachSlack = 1e-12;

Vec2 unit_dir(double phi) { return {std::sin(phi), std::cos(phi)}; }

double sign(double x) { return (x > 0.0) - (x < 0.0); }

// Representative of `angle` within (center - pi, center + pi].
double wrap_near(double angle, double center) {
  double a = angle;
  while (a - center > kPi) a -= 2 * kPi;
  while (a - center <= -kPi) a += 2 * kPi;
  return a;
}

}  // namespace

JointPositions forward_kinematics(const BodyModel& model, const Vec5& phi) {
  JointPositions out;
  out.p[0] = Vec2::Zero();
  out.p[1] = out.p[0] + model.link(0).length * unit_dir(phi[0]);
  out.p[2] = out.p[1] + model.link(1).length * unit_dir(phi[1]);
  out.p[3] = out.p[2] + model.link(2).length * unit_dir(phi[2]);
  out.p[4] = out.p[2] + model.link(3).length * unit_dir(phi[3]);
  out.p[5] = out.p[4] + model.link(4).length * unit_dir(phi[4]);
  return out;
}

double segment_angle(const Vec2& p_from, const Vec2& p_to) {
  const Vec2 delta = p_to - p_from;
  if (delta.x() == 0.0 && delta.y() == 0.0) throw KinematicsError("zero-length segment");
  return kPi / 2 - std::atan2(delta.y(), delta.x());
}

Phi2Range phi2_range(const BodyModel& model, double phi1, const Vec2& target) {
  if (!std::isfinite(phi1) || !target.allFinite())
    throw KinematicsError("non-finite inverse kinematics input");
  const double l2 = model.link(1).length;
  const double leg = model.link(3).length + model.link(4).length;

  const Vec2 p1 = model.link(0).length * unit_dir(phi1);
  const Vec2 rel = target - p1;
  const double dist = rel.norm();
  if (dist > l2 + leg + kReachSlack) throw KinematicsError("target unreachable");

  Phi2Range range{phi1 - kPi / 4, phi1};
  // Circle of reach around the target contains the whole thigh circle: any
  // phi2 works, keep the clamps.
  if (dist + l2 <= leg) return range;

  const double b1 = (l2 * l2 - leg * leg + dist * dist) / (2 * dist);
  double disc = l2 * l2 - b1 * b1;
  if (disc < -kReachSlack) throw KinematicsError("no circle intersection");
  disc = std::max(disc, 0.0);
  const double x5 = target.x();
  const double b2 = sign(x5) * std::sqrt(disc);

  const Vec2 u = rel / dist;
  const Vec2 v{b1 * u.x() - b2 * u.y(), b2 * u.x() + b1 * u.y()};
  const double bound = wrap_near(kPi / 2 - std::atan2(v.y(), v.x()), phi1);

  if (x5 < 0.0) range.max = std::min(bound, phi1);
  if (x5 > 0.0) range.min = std::max(bound, phi1 - kPi / 4);
  if (range.min > range.max)
    throw KinematicsError("target outside the stance thigh's feasible range");
  return range;
}

Vec5 inverse_kinematics(const BodyModel& model, const IkInput& input, const IkOptions& options) {
  if (!(input.r2 >= 0.0 && input.r2 <= 1.0)) throw ValidationError("r2 must lie in [0, 1]");
  if (!std::isfinite(input.phi3)) throw KinematicsError("non-finite inverse kinematics input");

  const Phi2Range range = phi2_range(model, input.phi1, input.target);
  const double phi2 = input.r2 * range.max + (1.0 - input.r2) * range.min;

  const double l4 = model.link(3).length;
  const double l5 = model.link(4).length;
  const Vec2 p1 = model.link(0).length * unit_dir(input.phi1);
  const Vec2 p2 = p1 + model.link(1).length * unit_dir(phi2);
  const Vec2 e = input.target - p2;
  const double dist = e.norm();
  if (dist > l4 + l5 + kReachSlack || dist < std::abs(l4 - l5) - kReachSlack || dist == 0.0)
    throw KinematicsError("swing leg unreachable");

  const double c1 = (l4 * l4 - l5 * l5 + dist * dist) / (2 * dist);
  const double c2 = std::sqrt(std::max(l4 * l4 - c1 * c1, 0.0));
  const Vec2 u = e / dist;
  const Vec2 p4 = p2 + Vec2{c1 * u.x() - c2 * u.y(), c2 * u.x() + c1 * u.y()};

  Vec5 phi;
  phi << input.phi1, phi2, input.phi3, segment_angle(p2, p4), segment_angle(p4, input.target);

  if (options.check_joint_limits) {
    const PoseRel rel = to_relative(PoseAbs{phi, Vec5::Zero(), Vec5::Zero()});
    const ViolationReport report = validate_joint_limits(rel, model);
    if (!report.empty()) throw JointLimitError(report);
  }
  return phi;
}

}  // namespace exo
