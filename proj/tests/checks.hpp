#pragma once

// Property checks shared by the unit tests and the acceptance runner.

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <vector>

#include "exogait/bezier.hpp"
#include "exogait/dynamics.hpp"
#include "exogait/kinematics.hpp"
#include "support.hpp"

namespace test {

constexpr double kPi = std::numbers::pi;

// Largest |G_i - dP/dphi_i| over random configurations.
inline double gravity_gradient_error(const exo::BodyModel& model, int trials, std::uint64_t seed) {
  const exo::ChainDynamics dyn(model);
  Rng rng(seed);
  const double h = 1e-5;
  double worst = 0.0;
  for (int n = 0; n < trials; ++n) {
    const exo::Vec5 phi = rng.vec5(kPi);
    const exo::Vec5 g = dyn.gravity_vector(phi);
    for (int i = 0; i < 5; ++i) {
      exo::Vec5 up = phi, down = phi;
      up[i] += h;
      down[i] -= h;
      const double dp = (exo::mechanical_energy(model, up, exo::Vec5::Zero()).potential -
                         exo::mechanical_energy(model, down, exo::Vec5::Zero()).potential) /
                        (2 * h);
      worst = std::max(worst, std::abs(g[i] - dp));
    }
  }
  return worst;
}

// Smooth multi-sine joint trajectory with analytic derivatives.
struct SineTrajectory {
  exo::Vec5 base, amp, freq, phase;

  explicit SineTrajectory(Rng& rng) {
    for (int i = 0; i < 5; ++i) {
      base[i] = rng.symmetric(kPi);
      amp[i] = rng.uniform(0.1, 0.8);
      freq[i] = rng.uniform(0.5, 3.0);
      phase[i] = rng.symmetric(kPi);
    }
  }
  exo::PoseAbs at(double t) const {
    exo::PoseAbs p;
    for (int i = 0; i < 5; ++i) {
      const double w = 2 * kPi * freq[i];
      const double arg = w * t + phase[i];
      p.phi[i] = base[i] + amp[i] * std::sin(arg);
      p.dphi[i] = amp[i] * w * std::cos(arg);
      p.ddphi[i] = -amp[i] * w * w * std::sin(arg);
    }
    return p;
  }
};

// Worst |dE/dt - T_phi . dphi| relative to the trajectory's peak power, with
// dE/dt from central differences of the 1 kHz energy samples.
inline double power_balance_error(const exo::BodyModel& model, int trajectories,
                                  std::uint64_t seed) {
  const exo::ChainDynamics dyn(model);
  Rng rng(seed);
  const double dt = 1e-3;
  const int samples = 2000;
  double worst = 0.0;
  for (int n = 0; n < trajectories; ++n) {
    const SineTrajectory traj(rng);
    std::vector<double> energy(samples + 1), power(samples + 1);
    for (int k = 0; k <= samples; ++k) {
      const exo::PoseAbs p = traj.at(k * dt);
      const exo::MechanicalEnergy e = exo::mechanical_energy(model, p.phi, p.dphi);
      energy[k] = e.kinetic + e.potential;
      power[k] = dyn.torque_absolute(p).values.dot(p.dphi);
    }
    double peak = 0.0;
    for (double p : power) peak = std::max(peak, std::abs(p));
    for (int k = 1; k < samples; ++k) {
      const double de = (energy[k + 1] - energy[k - 1]) / (2 * dt);
      worst = std::max(worst, std::abs(de - power[k]) / peak);
    }
  }
  return worst;
}

struct IdentityError {
  double torque = 0.0;  // |T_theta - A^T T_phi|, relative to |T_phi|
  double power = 0.0;   // |T_theta . dtheta - T_phi . dphi|, relative to the power scale
};

inline IdentityError coordinate_identity_error(const exo::BodyModel& model, int trials,
                                               std::uint64_t seed) {
  const exo::ChainDynamics dyn(model);
  Rng rng(seed);
  IdentityError worst;
  for (int n = 0; n < trials; ++n) {
    const exo::PoseAbs p{rng.vec5(kPi), rng.vec5(5.0), rng.vec5(20.0)};
    const exo::Vec5 t_phi = dyn.torque_absolute(p).values;
    const exo::Vec5 t_theta = dyn.torque_relative(p).values;
    const exo::PoseRel rel = exo::to_relative(p);
    const exo::Vec5 expect = exo::angle_transform::matrix().transpose() * t_phi;
    const double scale = t_phi.cwiseAbs().sum();
    worst.torque = std::max(worst.torque, (t_theta - expect).cwiseAbs().maxCoeff() / scale);
    const double power_scale = t_phi.cwiseAbs().dot(p.dphi.cwiseAbs());
    worst.power = std::max(
        worst.power, std::abs(t_theta.dot(rel.dtheta) - t_phi.dot(p.dphi)) / power_scale);
  }
  return worst;
}

struct IkSweep {
  int accepted = 0;
  int rejected = 0;
  int nan_outputs = 0;
  double worst_foot = 0.0;   // [m]
  double worst_input = 0.0;  // phi1, phi3 reproduced [rad]
  double worst_affine = 0.0; // phi2 against r2 max + (1 - r2) min [rad]
};

// Random anatomically plausible inputs until `wanted` solve; failures must
// throw, never return NaN.
inline IkSweep ik_round_trip(const exo::BodyModel& model, int wanted, std::uint64_t seed) {
  Rng rng(seed);
  IkSweep s;
  while (s.accepted < wanted && s.accepted + s.rejected < 100 * wanted) {
    exo::IkInput in;
    in.target = {rng.uniform(-0.5, 0.5), rng.uniform(-0.2, 0.4)};
    in.phi1 = rng.uniform(0.0, 0.34);
    in.phi3 = rng.symmetric(kPi / 12);
    in.r2 = rng.uniform(0.0, 1.0);
    exo::Vec5 phi;
    try {
      phi = exo::inverse_kinematics(model, in);
    } catch (const exo::KinematicsError&) {
      ++s.rejected;
      continue;
    }
    if (!phi.allFinite()) {
      ++s.nan_outputs;
      continue;
    }
    ++s.accepted;
    const exo::Vec2 foot = exo::forward_kinematics(model, phi).swing_foot();
    s.worst_foot = std::max(s.worst_foot, (foot - in.target).norm());
    s.worst_input = std::max({s.worst_input, std::abs(phi[0] - in.phi1), std::abs(phi[2] - in.phi3)});
    const exo::Phi2Range r = exo::phi2_range(model, in.phi1, in.target);
    s.worst_affine =
        std::max(s.worst_affine, std::abs(phi[1] - (in.r2 * r.max + (1 - in.r2) * r.min)));
  }
  return s;
}

// Convex hull (counter-clockwise, no collinear points) by monotone chain.
inline std::vector<exo::Vec2> convex_hull(std::vector<exo::Vec2> pts) {
  std::sort(pts.begin(), pts.end(), [](const exo::Vec2& a, const exo::Vec2& b) {
    return a.x() < b.x() || (a.x() == b.x() && a.y() < b.y());
  });
  const auto cross = [](const exo::Vec2& o, const exo::Vec2& a, const exo::Vec2& b) {
    return (a.x() - o.x()) * (b.y() - o.y()) - (a.y() - o.y()) * (b.x() - o.x());
  };
  std::vector<exo::Vec2> hull(2 * pts.size());
  std::size_t k = 0;
  for (std::size_t i = 0; i < pts.size(); ++i) {
    while (k >= 2 && cross(hull[k - 2], hull[k - 1], pts[i]) <= 0) --k;
    hull[k++] = pts[i];
  }
  for (std::size_t i = pts.size() - 1, t = k + 1; i-- > 0;) {
    while (k >= t && cross(hull[k - 2], hull[k - 1], pts[i]) <= 0) --k;
    hull[k++] = pts[i];
  }
  hull.resize(k > 1 ? k - 1 : k);
  return hull;
}

// Distance by which q lies outside the hull (0 or negative when inside).
inline double hull_excess(const std::vector<exo::Vec2>& hull, const exo::Vec2& q) {
  if (hull.size() == 1) return (q - hull[0]).norm();
  if (hull.size() == 2) {
    const exo::Vec2 ab = hull[1] - hull[0];
    const double t = std::clamp((q - hull[0]).dot(ab) / ab.squaredNorm(), 0.0, 1.0);
    return (q - (hull[0] + t * ab)).norm();
  }
  double excess = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < hull.size(); ++i) {
    const exo::Vec2& a = hull[i];
    const exo::Vec2& b = hull[(i + 1) % hull.size()];
    const exo::Vec2 edge = b - a;
    const double outward = (edge.x() * (q.y() - a.y()) - edge.y() * (q.x() - a.x())) / edge.norm();
    excess = std::max(excess, -outward);
  }
  return excess;
}

// Worst hull excess over random control polygons, sampled both on the grid
// and by direct evaluation.
inline double convex_hull_excess(int polygons, std::uint64_t seed) {
  Rng rng(seed);
  double worst = -std::numeric_limits<double>::infinity();
  for (int n = 0; n < polygons; ++n) {
    const int count = 2 + static_cast<int>(rng.raw() % 7);
    std::vector<exo::Vec2> pts;
    for (int i = 0; i < count; ++i) pts.emplace_back(rng.symmetric(1.0), rng.symmetric(1.0));
    const exo::BezierCurve curve(pts);
    const std::vector<exo::Vec2> hull = convex_hull(pts);
    std::vector<double> xs, ys;
    curve.sample(64, xs, ys);
    for (std::size_t j = 0; j < xs.size(); ++j)
      worst = std::max(worst, hull_excess(hull, {xs[j], ys[j]}));
    for (int j = 0; j < 16; ++j) worst = std::max(worst, hull_excess(hull, curve.eval(rng.uniform(0, 1))));
  }
  return worst;
}

}  // namespace test
