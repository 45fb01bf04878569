#include <cmath>

#include <Eigen/Eigenvalues>

#include "checks.hpp"
#include "doctest.h"
#include "exogait/dynamics.hpp"

using namespace exo;

namespace {

const BodyModel& model() {
  static const BodyModel m = BodyModel::exoskeleton_default();
  return m;
}

PoseAbs fixed_state() {
  PoseAbs p;
  p.phi << 0.1, -0.2, 0.05, 2.9, 3.5;
  p.dphi << 0.3, -0.5, 0.2, 1.0, -1.5;
  p.ddphi << 1, -2, 0.5, 3, -4;
  return p;
}

}  // namespace

// Reference values from a symbolic Euler-Lagrange derivation of L = K - P
// built directly from the COM positions (sympy, 20 digits).
TEST_CASE("closed form matches the symbolic derivation at a fixed state") {
  const Vec5 expect(-47.104118693683204810, 50.334379784383436629, -7.5510200433359173644,
                    -4.6372980799855465506, 3.3993151603429461183);
  const Vec5 got = torque_absolute(model(), fixed_state()).values;
  for (int i = 0; i < 5; ++i) CHECK(got[i] == doctest::Approx(expect[i]).epsilon(1e-12));
}

TEST_CASE("inertia matrix at the zero configuration equals the coupling coefficients") {
  const double expect[5][5] = {
      {17.4128908, 14.16392775, 8.7024294, 1.90082025, 0.4589046},
      {14.16392775, 12.91271325, 7.794693, 1.70254875, 0.411037},
      {8.7024294, 7.794693, 16.1888228, 0, 0},
      {1.90082025, 1.70254875, 0, 1.89067475, 0.411037},
      {0.4589046, 0.411037, 0, 0.411037, 0.4049832},
  };
  const ChainDynamics dyn(model());
  const Mat5 d = dyn.inertia_matrix(Vec5::Zero());
  for (int i = 0; i < 5; ++i)
    for (int j = 0; j < 5; ++j) CHECK(d(i, j) == doctest::Approx(expect[i][j]).epsilon(1e-13));
  CHECK((dyn.coefficients().p - d).cwiseAbs().maxCoeff() == 0.0);
  const Vec5 a = dyn.coefficients().a;
  CHECK(a == Vec5(1, 1, 0, 1, 1));
}

TEST_CASE("gravity vector matches the symbolic potential gradient") {
  const Vec5 expect(-38.892771209994876358, 62.595764730593593583, -9.6752001904716991021,
                    -10.116311572409211195, 3.5808955122587584619);
  const Vec5 got = ChainDynamics(model()).gravity_vector(fixed_state().phi);
  for (int i = 0; i < 5; ++i) CHECK(got[i] == doctest::Approx(expect[i]).epsilon(1e-13));
}

TEST_CASE("inertia matrix is symmetric positive definite") {
  const ChainDynamics dyn(model());
  test::Rng rng(3);
  for (int n = 0; n < 100; ++n) {
    const Mat5 d = dyn.inertia_matrix(rng.vec5(test::kPi));
    CHECK((d - d.transpose()).cwiseAbs().maxCoeff() == 0.0);
    const Eigen::SelfAdjointEigenSolver<Mat5> eig(d);
    CHECK(eig.eigenvalues().minCoeff() > 0.0);
  }
}

TEST_CASE("velocity matrix has a zero diagonal and matches the inertia rate") {
  const ChainDynamics dyn(model());
  test::Rng rng(4);
  const double eps = 1e-6;
  for (int n = 0; n < 100; ++n) {
    const Vec5 phi = rng.vec5(test::kPi);
    const Vec5 dphi = rng.vec5(5.0);
    const Mat5 h = dyn.velocity_matrix(phi, dphi);
    CHECK(h.diagonal().cwiseAbs().maxCoeff() == 0.0);
    // dphi^T H dphi = dphi^T (dD/dt) dphi / 2
    const Mat5 d_rate =
        (dyn.inertia_matrix(phi + eps * dphi) - dyn.inertia_matrix(phi - eps * dphi)) / (2 * eps);
    const double lhs = dphi.dot(h * dphi), rhs = 0.5 * dphi.dot(d_rate * dphi);
    CHECK(std::abs(lhs - rhs) <= 1e-6 * std::max(1.0, std::abs(rhs)));
  }
}

TEST_CASE("static torques") {
  const ChainDynamics dyn(model());
  SUBCASE("straight stand is balanced") {
    PoseAbs stand;
    stand.phi << 0, 0, 0, test::kPi, test::kPi;
    CHECK(dyn.torque_absolute(stand).values.cwiseAbs().maxCoeff() < 1e-12);
    CHECK(std::abs(dyn.ankle_torque(stand)) < 1e-12);
  }
  SUBCASE("static ankle torque is the gravity moment of the whole chain") {
    PoseAbs lean;
    lean.phi << 0.3, 0.1, -0.1, 3.0, 3.3;
    const Vec5 g = dyn.coefficients().gvec;
    double moment = 0.0;
    for (int i = 0; i < 5; ++i) moment += g[i] * std::sin(lean.phi[i]);
    CHECK(dyn.ankle_torque(lean) == doctest::Approx(moment).epsilon(1e-14));
    // symbolic potential gradient at this pose, summed
    const double expect = 115.12778157507895571 + 31.455026478760004238 - 19.326217419214071214 +
                          5.9670552695998191339 - 1.6103131610828025355;
    CHECK(dyn.ankle_torque(lean) == doctest::Approx(expect).epsilon(1e-13));
  }
}

TEST_CASE("free functions agree with the cached evaluator") {
  const PoseAbs p = fixed_state();
  const ChainDynamics dyn(model());
  CHECK(torque_absolute(model(), p).values == dyn.torque_absolute(p).values);
  const TorqueVector rel = torque_relative(model(), p);
  CHECK(rel.frame == TorqueFrame::Relative);
  CHECK(rel.values == to_relative_torque(dyn.torque_absolute(p)).values);
  CHECK(dyn.ankle_torque(p) == rel.values[0]);
  CHECK(dyn.ankle_torque(p) == doctest::Approx(-dyn.torque_absolute(p).values.sum()));
}

TEST_CASE("closed form matches the Lagrangian oracle on random states") {
  const OracleCheck c = check_dynamics(model(), 200, 11);
  CHECK(c.trials == 200);
  CHECK(c.failures == 0);
  CHECK(c.max_rel_error < 1e-4);
}

TEST_CASE("oracle tracks a model with different parameters") {
  auto links = model().links();
  links[2].com_offset = 0.5;
  links[4].mass = 2.0;
  const BodyModel other(links, {}, 3.7);
  CHECK(check_dynamics(other, 50, 5).failures == 0);
}

TEST_CASE("gravity vector is the potential gradient") {
  CHECK(test::gravity_gradient_error(model(), 200, 12) < 1e-6);
}

TEST_CASE("power balance along smooth trajectories") {
  CHECK(test::power_balance_error(model(), 3, 13) < 1e-3);
}

TEST_CASE("relative and absolute torques describe the same power") {
  const test::IdentityError e = test::coordinate_identity_error(model(), 500, 14);
  CHECK(e.torque < 1e-14);
  CHECK(e.power < 1e-13);
}

TEST_CASE("mechanical energy of simple configurations") {
  PoseAbs stand;
  stand.phi << 0, 0, 0, test::kPi, test::kPi;
  const MechanicalEnergy e = mechanical_energy(model(), stand.phi, Vec5::Zero());
  CHECK(e.kinetic == 0.0);
  // COM heights: 0.269, 0.441+0.228, 0.836+0.342, 0.836-0.167, 0.441-0.172
  const double expect = 9.81 * (7.05 * 0.269 + 10.5 * 0.669 + 57.7 * 1.178 + 11.5 * 0.669 +
                                6.05 * 0.269);
  CHECK(e.potential == doctest::Approx(expect).epsilon(1e-14));

  Vec5 spin = Vec5::Zero();
  spin[2] = 2.0;
  // torso spinning about the stance hip: 1/2 (I + m d^2) w^2
  const double k = 0.5 * (9.44 + 57.7 * 0.342 * 0.342) * 4.0;
  CHECK(mechanical_energy(model(), stand.phi, spin).kinetic == doctest::Approx(k).epsilon(1e-14));
}
