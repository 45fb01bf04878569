#include "exogait/model.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

#include "exogait/error.hpp"

namespace exo {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kRadToDeg = 180.0 / kPi;

// Angles within this many radians of a bound count as inside it; the
// straight stand lands exactly on the zero-plantarflexion bound.
constexpr double kLimitSlack = 1e-9;

void require(bool ok, const std::string& what) {
  if (!ok) throw ValidationError(what);
}

}  // namespace

BodyModel::BodyModel(const std::array<LinkParams, kLinkCount>& links,
                     const JointLimits& limits, double gravity)
    : links_(links), limits_(limits), gravity_(gravity) {
  for (int i = 0; i < kLinkCount; ++i) {
    const LinkParams& p = links_[static_cast<std::size_t>(i)];
    const std::string tag = "link " + std::to_string(i + 1) + ": ";
    require(std::isfinite(p.length) && p.length > 0.0, tag + "length must be > 0");
    require(std::isfinite(p.mass) && p.mass > 0.0, tag + "mass must be > 0");
    require(std::isfinite(p.inertia) && p.inertia >= 0.0, tag + "inertia must be >= 0");
    require(std::isfinite(p.com_offset) && p.com_offset >= 0.0 && p.com_offset <= p.length,
            tag + "com offset d must satisfy 0 <= d <= l");
  }
  const auto interval = [](double plus, double minus, const char* name) {
    require(std::isfinite(plus) && std::isfinite(minus) && plus + minus >= 0.0,
            std::string("joint limit ") + name + " is an empty interval");
  };
  interval(limits_.hip_flexion, limits_.hip_extension, "hip");
  interval(limits_.knee_flexion, limits_.knee_extension, "knee");
  interval(limits_.ankle_dorsiflexion, limits_.ankle_plantarflexion, "ankle");
  require(std::isfinite(gravity_) && gravity_ > 0.0, "gravity must be > 0");
}

BodyModel BodyModel::exoskeleton_default() {
  return BodyModel({{
      {0.441, 0.269, 7.05, 0.226},
      {0.395, 0.228, 10.5, 0.626},
      {0.714, 0.342, 57.7, 9.44},
      {0.395, 0.167, 11.5, 0.626},
      {0.441, 0.172, 6.05, 0.226},
  }});
}

Vec5 BodyModel::lengths() const {
  Vec5 l;
  for (int i = 0; i < kLinkCount; ++i) l[i] = link(i).length;
  return l;
}

double BodyModel::total_mass() const {
  double m = 0.0;
  for (const auto& p : links_) m += p.mass;
  return m;
}

namespace angle_transform {

const Mat5& matrix() {
  static const Mat5 a = [] {
    Mat5 m = Mat5::Zero();
    for (int i = 0; i < kLinkCount; ++i)
      for (int j = 0; j <= i; ++j) m(i, j) = -1.0;
    return m;
  }();
  return a;
}

// Inverse of the all -1 lower triangle: -1 on the diagonal, +1 below it.
const Mat5& inverse() {
  static const Mat5 a_inv = [] {
    Mat5 m = Mat5::Zero();
    for (int i = 0; i < kLinkCount; ++i) {
      m(i, i) = -1.0;
      if (i > 0) m(i, i - 1) = 1.0;
    }
    return m;
  }();
  return a_inv;
}

const Vec5& offset() {
  static const Vec5 b = (Vec5() << kPi / 2, kPi / 2, kPi / 2, 3 * kPi / 2, 3 * kPi / 2).finished();
  return b;
}

}  // namespace angle_transform

PoseAbs to_absolute(const PoseRel& pose) {
  const Mat5& a = angle_transform::matrix();
  return {a * pose.theta + angle_transform::offset(), a * pose.dtheta, a * pose.ddtheta};
}

PoseRel to_relative(const PoseAbs& pose) {
  const Mat5& a_inv = angle_transform::inverse();
  return {a_inv * (pose.phi - angle_transform::offset()), a_inv * pose.dphi, a_inv * pose.ddphi};
}

std::string_view joint_name(Joint joint) {
  switch (joint) {
    case Joint::StanceAnkle: return "stance ankle";
    case Joint::StanceKnee: return "stance knee";
    case Joint::StanceHip: return "stance hip";
    case Joint::SwingHip: return "swing hip";
    case Joint::SwingKnee: return "swing knee";
  }
  return "unknown";
}

AnatomicalAngles to_anatomical(const Vec5& theta) {
  return {kPi / 2 - theta[0], theta[1], -theta[2], theta[3], -theta[4]};
}

Vec5 from_anatomical(const AnatomicalAngles& a) {
  return (Vec5() << kPi / 2 - a.stance_ankle, a.stance_knee, -a.stance_hip, a.swing_hip,
          -a.swing_knee)
      .finished();
}

ViolationReport validate_joint_limits(const PoseRel& pose, const BodyModel& model) {
  const JointLimits& lim = model.limits();
  const AnatomicalAngles a = to_anatomical(pose.theta);
  ViolationReport report;
  const auto check = [&report](Joint joint, double angle, double upper_deg, double lower_deg) {
    const double upper = upper_deg / kRadToDeg;
    const double lower = -lower_deg / kRadToDeg;
    if (!(angle <= upper + kLimitSlack))
      report.push_back({joint, angle * kRadToDeg, upper_deg});
    else if (!(angle >= lower - kLimitSlack))
      report.push_back({joint, angle * kRadToDeg, -lower_deg});
  };
  check(Joint::StanceAnkle, a.stance_ankle, lim.ankle_dorsiflexion, lim.ankle_plantarflexion);
  check(Joint::StanceKnee, a.stance_knee, lim.knee_flexion, lim.knee_extension);
  check(Joint::StanceHip, a.stance_hip, lim.hip_flexion, lim.hip_extension);
  check(Joint::SwingHip, a.swing_hip, lim.hip_flexion, lim.hip_extension);
  check(Joint::SwingKnee, a.swing_knee, lim.knee_flexion, lim.knee_extension);
  return report;
}

std::string describe(const ViolationReport& report) {
  std::ostringstream out;
  for (std::size_t i = 0; i < report.size(); ++i) {
    if (i) out << "; ";
    out << joint_name(report[i].joint) << " at " << report[i].angle_deg << " deg exceeds limit "
        << report[i].limit_deg << " deg";
  }
  return out.str();
}

}  // namespace exo
