#pragma once

#include <array>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Core>

namespace exo {

using Vec2 = Eigen::Vector2d;
using Vec5 = Eigen::Matrix<double, 5, 1>;
using Mat5 = Eigen::Matrix<double, 5, 5>;

inline constexpr int kLinkCount = 5;

/// Rigid link of the sagittal chain. All values SI.
struct LinkParams {
  double length = 0.0;      ///< l_i [m]
  double com_offset = 0.0;  ///< d_i, joint i to COM [m]
  double mass = 0.0;        ///< m_i [kg]
  double inertia = 0.0;     ///< I_i about the COM [kg m^2]
};

/// Anatomical joint ranges in degrees, both sides of neutral given as
/// non-negative magnitudes the way they are usually tabulated.
struct JointLimits {
  double hip_flexion = 100.0;
  double hip_extension = 80.0;
  double knee_flexion = 100.0;
  double knee_extension = 0.0;
  double ankle_dorsiflexion = 20.0;
  double ankle_plantarflexion = 0.0;
};

/// Five-link planar model. Link order: 1 stance shank, 2 stance thigh,
/// 3 torso, 4 swing thigh, 5 swing shank (stored zero-based).
class BodyModel {
 public:
  BodyModel(const std::array<LinkParams, kLinkCount>& links,
            const JointLimits& limits = {}, double gravity = 9.81);

  /// Exoskeleton plus pilot parameters shipped with the hardware.
  static BodyModel exoskeleton_default();

  const LinkParams& link(int i) const { return links_[static_cast<std::size_t>(i)]; }
  const std::array<LinkParams, kLinkCount>& links() const { return links_; }
  const JointLimits& limits() const { return limits_; }
  double gravity() const { return gravity_; }

  Vec5 lengths() const;
  double total_mass() const;

 private:
  std::array<LinkParams, kLinkCount> links_;
  JointLimits limits_;
  double gravity_;
};

/// Absolute angles: clockwise from vertical-up.
struct PoseAbs {
  Vec5 phi = Vec5::Zero();
  Vec5 dphi = Vec5::Zero();
  Vec5 ddphi = Vec5::Zero();
};

/// Relative angles: link i against link i-1 (ground for link 1),
/// anticlockwise positive.
struct PoseRel {
  Vec5 theta = Vec5::Zero();
  Vec5 dtheta = Vec5::Zero();
  Vec5 ddtheta = Vec5::Zero();
};

// Phi = A Theta + b.
namespace angle_transform {
const Mat5& matrix();
const Mat5& inverse();
const Vec5& offset();
}  // namespace angle_transform

PoseAbs to_absolute(const PoseRel& pose);
PoseRel to_relative(const PoseAbs& pose);

enum class Joint { StanceAnkle, StanceKnee, StanceHip, SwingHip, SwingKnee };

std::string_view joint_name(Joint joint);

/// Anatomical joint angles in radians. Positive is flexion (dorsiflexion for
/// the ankle).
struct AnatomicalAngles {
  double stance_ankle = 0.0;
  double stance_knee = 0.0;
  double stance_hip = 0.0;
  double swing_hip = 0.0;
  double swing_knee = 0.0;
};

// Fixed map between relative angles and anatomical angles:
//   ankle dorsiflexion  = pi/2 - theta1
//   stance knee flexion = theta2
//   stance hip flexion  = -theta3
//   swing hip flexion   = theta4
//   swing knee flexion  = -theta5
AnatomicalAngles to_anatomical(const Vec5& theta);
Vec5 from_anatomical(const AnatomicalAngles& angles);

struct LimitViolation {
  Joint joint;
  double angle_deg;  ///< anatomical angle found
  double limit_deg;  ///< signed bound that was crossed
};

using ViolationReport = std::vector<LimitViolation>;

ViolationReport validate_joint_limits(const PoseRel& pose, const BodyModel& model);

std::string describe(const ViolationReport& report);

}  // namespace exo
