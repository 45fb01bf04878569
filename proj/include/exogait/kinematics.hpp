#pragma once

#include <array>
#include <utility>

#include "exogait/error.hpp"
#include "exogait/model.hpp"

namespace exo {

/// Joint positions in the sagittal plane. p[0] is the stance ankle (origin),
/// p[i] the far end of link i. The swing thigh starts at p[2].
struct JointPositions {
  std::array<Vec2, 6> p;

  const Vec2& ankle() const { return p[0]; }
  const Vec2& hip() const { return p[2]; }
  const Vec2& swing_foot() const { return p[5]; }
};

JointPositions forward_kinematics(const BodyModel& model, const Vec5& phi);

/// Absolute angle of the segment p_from -> p_to, clockwise from vertical-up.
/// Throws KinematicsError on coincident points.
double segment_angle(const Vec2& p_from, const Vec2& p_to);

/// Swing-foot target and the two extra gait variables.
struct IkInput {
  Vec2 target = Vec2::Zero();  ///< (x5, y5) [m]
  double phi1 = 0.0;           ///< stance shank angle [rad]
  double phi3 = 0.0;           ///< torso angle [rad]
  double r2 = 0.0;             ///< position of phi2 inside its feasible range, [0, 1]
};

struct Phi2Range {
  double min = 0.0;
  double max = 0.0;
};

/// Feasible stance-thigh angles that still let the swing leg reach `target`.
/// Always phi1 - pi/4 <= min <= max <= phi1.
Phi2Range phi2_range(const BodyModel& model, double phi1, const Vec2& target);

/// IK produced a pose outside the joint limits.
class JointLimitError : public KinematicsError {
 public:
  explicit JointLimitError(ViolationReport report)
      : KinematicsError("joint limit violation: " + describe(report)), report_(std::move(report)) {}
  const ViolationReport& report() const { return report_; }

 private:
  ViolationReport report_;
};

struct IkOptions {
  bool check_joint_limits = true;
};

/// Analytic IK (target, phi1, phi3, r2) -> absolute angles. The swing knee
/// always bends forward; a pose outside the joint limits is an error, never
/// a silent branch switch.
Vec5 inverse_kinematics(const BodyModel& model, const IkInput& input, const IkOptions& options = {});

}  // namespace exo
