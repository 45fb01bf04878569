#include "exogait/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

namespace exo {

namespace {

template <typename Real>
struct EnergyT {
  Real kinetic{0};
  Real potential{0};
};

// Walks the anchor chain link by link. Shared by the public double
// version and the extended-precision oracle.
template <typename Real>
EnergyT<Real> chain_energy(const BodyModel& model, const Vec5& a, const Real* phi,
                           const Real* dphi) {
  using std::cos;
  using std::sin;
  const Real g = static_cast<Real>(model.gravity());
  Real ay{0}, avx{0}, avy{0};
  EnergyT<Real> e;
  for (int i = 0; i < kLinkCount; ++i) {
    const LinkParams& lp = model.link(i);
    const Real m = static_cast<Real>(lp.mass);
    const Real d = static_cast<Real>(lp.com_offset);
    const Real l = static_cast<Real>(lp.length) * static_cast<Real>(a[i]);
    const Real s = sin(phi[i]);
    const Real c = cos(phi[i]);
    const Real w = dphi[i];

    const Real cy = ay + d * c;
    const Real vx = avx + d * w * c;
    const Real vy = avy - d * w * s;
    e.kinetic += Real(0.5) * m * (vx * vx + vy * vy) +
                 Real(0.5) * static_cast<Real>(lp.inertia) * w * w;
    e.potential += m * g * cy;

    ay += l * c;
    avx += l * w * c;
    avy -= l * w * s;
  }
  return e;
}

Vec5 chain_flags() {
  // Links 4 and 5 hang off the stance hip, not the top of the torso.
  return (Vec5() << 1.0, 1.0, 0.0, 1.0, 1.0).finished();
}

}  // namespace

CouplingCoefficients coupling_coefficients(const BodyModel& model) {
  CouplingCoefficients c;
  c.a = chain_flags();
  const double g = model.gravity();

  // Mass carried beyond link i: sum over k > i of m_k.
  Vec5 tail = Vec5::Zero();
  for (int i = kLinkCount - 2; i >= 0; --i) tail[i] = tail[i + 1] + model.link(i + 1).mass;

  for (int i = 0; i < kLinkCount; ++i) {
    const LinkParams& li = model.link(i);
    c.p(i, i) = li.inertia + li.mass * li.com_offset * li.com_offset +
                c.a[i] * li.length * li.length * tail[i];
    c.gvec[i] = li.mass * li.com_offset * g + c.a[i] * li.length * g * tail[i];
    for (int j = i + 1; j < kLinkCount; ++j) {
      const LinkParams& lj = model.link(j);
      // Only the mass hanging beyond link j couples through both lengths.
      c.p(i, j) = c.a[i] * lj.mass * lj.com_offset * li.length +
                  c.a[i] * c.a[j] * li.length * lj.length * tail[j];
      c.p(j, i) = c.p(i, j);
    }
  }
  return c;
}

ChainDynamics::ChainDynamics(const BodyModel& model) : coeffs_(coupling_coefficients(model)) {}

Mat5 ChainDynamics::inertia_matrix(const Vec5& phi) const {
  Mat5 d;
  for (int i = 0; i < kLinkCount; ++i)
    for (int j = 0; j < kLinkCount; ++j) d(i, j) = coeffs_.p(i, j) * std::cos(phi[i] - phi[j]);
  return d;
}

Mat5 ChainDynamics::velocity_matrix(const Vec5& phi, const Vec5& dphi) const {
  Mat5 h;
  for (int i = 0; i < kLinkCount; ++i)
    for (int j = 0; j < kLinkCount; ++j)
      h(i, j) = coeffs_.p(i, j) * std::sin(phi[i] - phi[j]) * dphi[j];
  return h;
}

Vec5 ChainDynamics::gravity_vector(const Vec5& phi) const {
  Vec5 g;
  for (int i = 0; i < kLinkCount; ++i) g[i] = -coeffs_.gvec[i] * std::sin(phi[i]);
  return g;
}

TorqueVector ChainDynamics::torque_absolute(const PoseAbs& pose) const {
  Vec5 t;
  for (int i = 0; i < kLinkCount; ++i) {
    double acc = -coeffs_.gvec[i] * std::sin(pose.phi[i]);
    for (int j = 0; j < kLinkCount; ++j) {
      const double delta = pose.phi[i] - pose.phi[j];
      acc += coeffs_.p(i, j) *
             (std::cos(delta) * pose.ddphi[j] + std::sin(delta) * pose.dphi[j] * pose.dphi[j]);
    }
    t[i] = acc;
  }
  return {t, TorqueFrame::Absolute};
}

TorqueVector ChainDynamics::torque_relative(const PoseAbs& pose) const {
  return to_relative_torque(torque_absolute(pose));
}

double ChainDynamics::ankle_torque(const PoseAbs& pose) const {
  // First column of A is all -1.
  return -torque_absolute(pose).values.sum();
}

TorqueVector torque_absolute(const BodyModel& model, const PoseAbs& pose) {
  return ChainDynamics(model).torque_absolute(pose);
}

TorqueVector torque_relative(const BodyModel& model, const PoseAbs& pose) {
  return ChainDynamics(model).torque_relative(pose);
}

TorqueVector to_relative_torque(const TorqueVector& absolute) {
  if (absolute.frame == TorqueFrame::Relative) return absolute;
  return {angle_transform::matrix().transpose() * absolute.values, TorqueFrame::Relative};
}

MechanicalEnergy mechanical_energy(const BodyModel& model, const Vec5& phi, const Vec5& dphi) {
  const EnergyT<double> e = chain_energy<double>(model, chain_flags(), phi.data(), dphi.data());
  return {e.kinetic, e.potential};
}

TorqueVector lagrangian_oracle(const BodyModel& model, const PoseAbs& pose,
                               const OracleSteps& steps) {
  using Real = long double;
  const Vec5 a = chain_flags();
  Real q[kLinkCount], v[kLinkCount];
  for (int i = 0; i < kLinkCount; ++i) {
    q[i] = pose.phi[i];
    v[i] = pose.dphi[i];
  }
  const auto lagrangian = [&]() {
    const EnergyT<Real> e = chain_energy<Real>(model, a, q, v);
    return e.kinetic - e.potential;
  };
  const Real hq = steps.angle;
  const Real hv = steps.rate;

  // L evaluated with q_j and v_i displaced by sq*hq and sv*hv.
  const auto shifted = [&](int j, Real sq, int i, Real sv) {
    if (j >= 0) q[j] += sq * hq;
    if (i >= 0) v[i] += sv * hv;
    const Real l = lagrangian();
    if (j >= 0) q[j] = static_cast<Real>(pose.phi[j]);
    if (i >= 0) v[i] = static_cast<Real>(pose.dphi[i]);
    return l;
  };
  const auto shifted_rates = [&](int i, Real si, int j, Real sj) {
    v[i] += si * hv;
    v[j] += sj * hv;
    const Real l = lagrangian();
    v[i] = static_cast<Real>(pose.dphi[i]);
    v[j] = static_cast<Real>(pose.dphi[j]);
    return l;
  };

  const Real l0 = lagrangian();
  Vec5 out;
  for (int i = 0; i < kLinkCount; ++i) {
    const Real dl_dq = (shifted(i, 1, -1, 0) - shifted(i, -1, -1, 0)) / (2 * hq);

    Real total = -dl_dq;
    for (int j = 0; j < kLinkCount; ++j) {
      const Real mixed = (shifted(j, 1, i, 1) - shifted(j, 1, i, -1) - shifted(j, -1, i, 1) +
                          shifted(j, -1, i, -1)) /
                         (4 * hq * hv);
      Real rate_rate;
      if (i == j) {
        rate_rate = (shifted(-1, 0, i, 1) - 2 * l0 + shifted(-1, 0, i, -1)) / (hv * hv);
      } else {
        rate_rate = (shifted_rates(i, 1, j, 1) - shifted_rates(i, 1, j, -1) -
                     shifted_rates(i, -1, j, 1) + shifted_rates(i, -1, j, -1)) /
                    (4 * hv * hv);
      }
      total += mixed * static_cast<Real>(pose.dphi[j]) +
               rate_rate * static_cast<Real>(pose.ddphi[j]);
    }
    out[i] = static_cast<double>(total);
  }
  return {out, TorqueFrame::Absolute};
}

OracleCheck check_dynamics(const BodyModel& model, std::size_t trials, std::uint64_t seed,
                           double rel, double floor) {
  const ChainDynamics dynamics(model);
  std::mt19937_64 rng(seed);
  const auto uniform = [&rng](double bound) {
    return bound * (2.0 * (static_cast<double>(rng() >> 11) * 0x1.0p-53) - 1.0);
  };
  OracleCheck check;
  check.trials = trials;
  for (std::size_t n = 0; n < trials; ++n) {
    PoseAbs pose;
    for (int i = 0; i < kLinkCount; ++i) {
      pose.phi[i] = uniform(std::numbers::pi);
      pose.dphi[i] = uniform(5.0);
      pose.ddphi[i] = uniform(20.0);
    }
    const Vec5 closed = dynamics.torque_absolute(pose).values;
    const Vec5 oracle = lagrangian_oracle(model, pose).values;
    bool ok = true;
    for (int i = 0; i < kLinkCount; ++i) {
      const double err = std::abs(closed[i] - oracle[i]);
      const double scale = std::abs(oracle[i]);
      check.max_abs_error = std::max(check.max_abs_error, err);
      if (scale > floor) check.max_rel_error = std::max(check.max_rel_error, err / scale);
      if (err > std::max(rel * scale, floor)) ok = false;
    }
    if (!ok) ++check.failures;
  }
  return check;
}

}  // namespace exo
