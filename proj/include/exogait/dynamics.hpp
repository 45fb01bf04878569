#pragma once

#include <cstddef>
#include <cstdint>

#include "exogait/model.hpp"

namespace exo {

/// Constant part of the closed-form Lagrangian solution.
struct CouplingCoefficients {
  Mat5 p = Mat5::Zero();     ///< inertia coupling p_ij [kg m^2], symmetric
  Vec5 gvec = Vec5::Zero();  ///< gravity coefficients g_i [N m]
  Vec5 a = Vec5::Zero();     ///< 1 when links further down the chain hang off link i's far end
};

enum class TorqueFrame { Absolute, Relative };

struct TorqueVector {
  Vec5 values = Vec5::Zero();  ///< [N m]
  TorqueFrame frame = TorqueFrame::Absolute;
};

CouplingCoefficients coupling_coefficients(const BodyModel& model);

/// T_phi = D(phi) ddphi + H(phi, dphi) dphi + G(phi).
/// Caches the coupling coefficients; cheap to copy, immutable.
class ChainDynamics {
 public:
  explicit ChainDynamics(const BodyModel& model);

  const CouplingCoefficients& coefficients() const { return coeffs_; }

  Mat5 inertia_matrix(const Vec5& phi) const;                  // D
  Mat5 velocity_matrix(const Vec5& phi, const Vec5& dphi) const;  // H
  Vec5 gravity_vector(const Vec5& phi) const;                  // G

  TorqueVector torque_absolute(const PoseAbs& pose) const;
  TorqueVector torque_relative(const PoseAbs& pose) const;

  /// First component of the relative torque (stance ankle).
  double ankle_torque(const PoseAbs& pose) const;

 private:
  CouplingCoefficients coeffs_;
};

TorqueVector torque_absolute(const BodyModel& model, const PoseAbs& pose);
TorqueVector torque_relative(const BodyModel& model, const PoseAbs& pose);

/// T_theta = A^T T_phi.
TorqueVector to_relative_torque(const TorqueVector& absolute);

struct MechanicalEnergy {
  double kinetic = 0.0;    ///< [J]
  double potential = 0.0;  ///< [J], zero at ankle height
};

/// Energy from COM kinematics. The swing thigh hangs from the stance hip,
/// so the torso does not extend the anchor chain.
MechanicalEnergy mechanical_energy(const BodyModel& model, const Vec5& phi, const Vec5& dphi);

/// Finite-difference steps of the Euler-Lagrange oracle. The kinetic energy
/// is exactly quadratic in the rates, so a unit rate step carries no
/// truncation error and keeps the mixed partials away from round-off.
struct OracleSteps {
  double angle = 1e-6;  ///< [rad]
  double rate = 1.0;    ///< [rad/s]
};

/// Joint torques from numerical partial derivatives of L = K - P, independent
/// of the closed form. Evaluated in extended precision.
TorqueVector lagrangian_oracle(const BodyModel& model, const PoseAbs& pose,
                               const OracleSteps& steps = {});

/// Comparison of the closed form against the oracle on random states:
/// angles in [-pi, pi], rates within 5 rad/s, accelerations within 20 rad/s^2.
/// A component passes when |closed - oracle| <= max(rel * |oracle|, floor).
struct OracleCheck {
  std::size_t trials = 0;
  std::size_t failures = 0;     ///< states with at least one failing component
  double max_rel_error = 0.0;   ///< over components with |oracle| > floor
  double max_abs_error = 0.0;   ///< [N m]
};

OracleCheck check_dynamics(const BodyModel& model, std::size_t trials, std::uint64_t seed,
                           double rel = 1e-4, double floor = 1e-6);

}  // namespace exo
