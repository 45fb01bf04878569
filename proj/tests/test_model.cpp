#include <cmath>
#include <numbers>

#include "doctest.h"
#include "exogait/error.hpp"
#include "exogait/model.hpp"
#include "support.hpp"

using namespace exo;
constexpr double kPi = std::numbers::pi;

TEST_CASE("default model carries the exoskeleton parameter table") {
  const BodyModel m = BodyModel::exoskeleton_default();
  const double l[] = {0.441, 0.395, 0.714, 0.395, 0.441};
  const double d[] = {0.269, 0.228, 0.342, 0.167, 0.172};
  const double mass[] = {7.05, 10.5, 57.7, 11.5, 6.05};
  const double inertia[] = {0.226, 0.626, 9.44, 0.626, 0.226};
  for (int i = 0; i < 5; ++i) {
    CHECK(m.link(i).length == l[i]);
    CHECK(m.link(i).com_offset == d[i]);
    CHECK(m.link(i).mass == mass[i]);
    CHECK(m.link(i).inertia == inertia[i]);
  }
  CHECK(m.total_mass() == doctest::Approx(92.8));
  CHECK(m.gravity() == 9.81);
  CHECK(m.limits().hip_flexion == 100.0);
  CHECK(m.limits().ankle_plantarflexion == 0.0);
}

TEST_CASE("model invariants are enforced") {
  auto links = BodyModel::exoskeleton_default().links();
  SUBCASE("com offset beyond the link") {
    links[0].com_offset = 0.5;
    CHECK_THROWS_AS(BodyModel{links}, ValidationError);
  }
  SUBCASE("non-positive mass") {
    links[2].mass = 0.0;
    CHECK_THROWS_AS(BodyModel{links}, ValidationError);
  }
  SUBCASE("negative inertia") {
    links[4].inertia = -1.0;
    CHECK_THROWS_AS(BodyModel{links}, ValidationError);
  }
  SUBCASE("non-finite length") {
    links[1].length = NAN;
    CHECK_THROWS_AS(BodyModel{links}, ValidationError);
  }
  SUBCASE("empty joint range") {
    JointLimits lim;
    lim.knee_flexion = -10.0;
    CHECK_THROWS_AS(BodyModel(links, lim), ValidationError);
  }
  SUBCASE("gravity") { CHECK_THROWS_AS(BodyModel(links, {}, 0.0), ValidationError); }
}

TEST_CASE("angle transform matrices") {
  const Mat5& a = angle_transform::matrix();
  for (int i = 0; i < 5; ++i)
    for (int j = 0; j < 5; ++j) CHECK(a(i, j) == (j <= i ? -1.0 : 0.0));
  CHECK((a * angle_transform::inverse()).isIdentity(0.0));
  const Vec5& b = angle_transform::offset();
  CHECK(b[0] == kPi / 2);
  CHECK(b[2] == kPi / 2);
  CHECK(b[3] == 3 * kPi / 2);
  CHECK(b[4] == 3 * kPi / 2);
}

TEST_CASE("straight stand in both coordinate sets") {
  PoseAbs stand;
  stand.phi << 0, 0, 0, kPi, kPi;
  const PoseRel rel = to_relative(stand);
  CHECK(rel.theta[0] == doctest::Approx(kPi / 2));
  for (int i = 1; i < 5; ++i) CHECK(std::abs(rel.theta[i]) < 1e-15);
  const AnatomicalAngles anat = to_anatomical(rel.theta);
  CHECK(std::abs(anat.stance_ankle) < 1e-15);
  CHECK(std::abs(anat.swing_knee) < 1e-15);
  CHECK(validate_joint_limits(rel, BodyModel::exoskeleton_default()).empty());
}

TEST_CASE("absolute and relative poses round trip") {
  test::Rng rng(7);
  for (int n = 0; n < 200; ++n) {
    PoseRel rel{rng.vec5(kPi), rng.vec5(5.0), rng.vec5(20.0)};
    const PoseRel back = to_relative(to_absolute(rel));
    CHECK((back.theta - rel.theta).cwiseAbs().maxCoeff() < 1e-14);
    CHECK((back.dtheta - rel.dtheta).cwiseAbs().maxCoeff() < 1e-14);
    CHECK((back.ddtheta - rel.ddtheta).cwiseAbs().maxCoeff() < 1e-13);
  }
}

TEST_CASE("anatomical map round trips and has the documented signs") {
  const AnatomicalAngles a{0.1, 0.2, 0.3, 0.4, 0.5};
  const Vec5 theta = from_anatomical(a);
  CHECK(theta[0] == doctest::Approx(kPi / 2 - 0.1));
  CHECK(theta[1] == 0.2);
  CHECK(theta[2] == -0.3);
  CHECK(theta[3] == 0.4);
  CHECK(theta[4] == -0.5);
  const AnatomicalAngles back = to_anatomical(theta);
  CHECK(back.stance_ankle == doctest::Approx(0.1));
  CHECK(back.swing_knee == 0.5);
}

TEST_CASE("joint limit validation") {
  const BodyModel m = BodyModel::exoskeleton_default();
  const auto pose = [](AnatomicalAngles a) {
    PoseRel p;
    p.theta = from_anatomical(a);
    return p;
  };
  const double deg = kPi / 180;
  CHECK(validate_joint_limits(pose({10 * deg, 30 * deg, 20 * deg, 40 * deg, 60 * deg}), m).empty());

  SUBCASE("knee hyperextension") {
    const ViolationReport r = validate_joint_limits(pose({0, -5 * deg, 0, 0, 0}), m);
    REQUIRE(r.size() == 1);
    CHECK(r[0].joint == Joint::StanceKnee);
    CHECK(r[0].angle_deg == doctest::Approx(-5.0));
    CHECK(r[0].limit_deg == 0.0);
  }
  SUBCASE("plantarflexion is not allowed") {
    const ViolationReport r = validate_joint_limits(pose({-2 * deg, 0, 0, 0, 0}), m);
    REQUIRE(r.size() == 1);
    CHECK(r[0].joint == Joint::StanceAnkle);
  }
  SUBCASE("several joints at once") {
    const ViolationReport r =
        validate_joint_limits(pose({25 * deg, 0, 0, 110 * deg, 120 * deg}), m);
    REQUIRE(r.size() == 3);
    CHECK(r[0].joint == Joint::StanceAnkle);
    CHECK(r[0].limit_deg == 20.0);
    CHECK(r[1].joint == Joint::SwingHip);
    CHECK(r[2].joint == Joint::SwingKnee);
    CHECK(describe(r).find("swing hip") != std::string::npos);
  }
  SUBCASE("hip extension bound is signed") {
    const ViolationReport r = validate_joint_limits(pose({0, 0, -85 * deg, 0, 0}), m);
    REQUIRE(r.size() == 1);
    CHECK(r[0].limit_deg == -80.0);
  }
}
