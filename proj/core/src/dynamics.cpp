#include "catmouse/dynamics.hpp"

#include <cmath>

#include "catmouse/constants.hpp"
#include "catmouse/error.hpp"

namespace catmouse {

namespace {

// 1 - cos(x) without cancellation.
double one_minus_cos(double x) {
  const double h = std::sin(0.5 * x);
  return 2.0 * h * h;
}

// x - sin(x); the direct difference loses ~all digits for the small n*dt of GEO steps.
double x_minus_sin(double x) {
  if (std::abs(x) < 1e-2) {
    const double x2 = x * x;
    return x * x2 / 6.0 * (1.0 - x2 / 20.0 * (1.0 - x2 / 42.0 * (1.0 - x2 / 72.0)));
  }
  return x - std::sin(x);
}

// Kilometres per second squared per newton per kilogram.
constexpr double kAccelScale = 1e-3;

Mat6 transition(double n, double t) {
  const double tau = n * t;
  const double c = std::cos(tau), s = std::sin(tau);
  const double omc = one_minus_cos(tau), tms = x_minus_sin(tau);

  Mat6 a = Mat6::Zero();
  // position from position
  a(0, 0) = 1.0 + 3.0 * omc;
  a(1, 0) = -6.0 * tms;
  a(1, 1) = 1.0;
  a(2, 2) = c;
  // position from velocity
  a(0, 3) = s / n;
  a(0, 4) = 2.0 * omc / n;
  a(1, 3) = -2.0 * omc / n;
  a(1, 4) = (tau - 4.0 * tms) / n;
  a(2, 5) = s / n;
  // velocity from position
  a(3, 0) = 3.0 * n * s;
  a(4, 0) = -6.0 * n * omc;
  a(5, 2) = -n * s;
  // velocity from velocity
  a(3, 3) = c;
  a(3, 4) = 2.0 * s;
  a(4, 3) = -2.0 * s;
  a(4, 4) = 1.0 - 4.0 * omc;
  a(5, 5) = c;
  return a;
}

}  // namespace

Vec6 HillState::stacked() const {
  Vec6 x;
  x << pos, vel;
  return x;
}

HillState HillState::from_stacked(const Vec6& x) {
  return HillState{x.head<3>(), x.tail<3>()};
}

bool HillState::finite() const { return pos.allFinite() && vel.allFinite(); }

void CraftParams::validate() const {
  if (!(mass > 0.0)) throw DomainError("craft mass must be positive");
  if (!(thrust_limit >= 0.0)) throw DomainError("thrust limit must be non-negative");
}

double CraftParams::record(const ThrustCommand& u) {
  const double increment = u.impulse();
  fuel_used += increment;
  return increment;
}

Vec3 CraftParams::clamp(const Vec3& thrust) const {
  return thrust.cwiseMax(-thrust_limit).cwiseMin(thrust_limit);
}

double mean_motion(double semi_major_axis) {
  if (!(semi_major_axis > 0.0)) throw DomainError("mean_motion: semi-major axis must be positive");
  return std::sqrt(constants::kMu / (semi_major_axis * semi_major_axis * semi_major_axis));
}

OrbitState propagate_circular(const OrbitalElements& elems, double t) {
  const double a = elems.semi_major_axis;
  const double m = wrap_two_pi(elems.mean_anomaly + mean_motion(a) * (t - elems.epoch));
  const double speed = std::sqrt(constants::kMu / a);
  const double cm = std::cos(m), sm = std::sin(m);
  const Mat3 to_ecef = rotation_ecef_to_orbital(elems).transpose();

  OrbitState out;
  out.pos = EcefVector(to_ecef * Vec3(a * cm, a * sm, 0.0));
  out.vel = to_ecef * Vec3(-speed * sm, speed * cm, 0.0);
  return out;
}

Vec6 cw_derivative(const HillState& s, const Vec3& thrust, double mass, double n) {
  if (!(mass > 0.0)) throw DomainError("cw_derivative: mass must be positive");
  const Vec3 acc = thrust * (kAccelScale / mass);
  Vec6 d;
  d.head<3>() = s.vel;
  d(3) = 3.0 * n * n * s.pos.x() + 2.0 * n * s.vel.y() + acc.x();
  d(4) = -2.0 * n * s.vel.x() + acc.y();
  d(5) = -n * n * s.pos.z() + acc.z();
  return d;
}

DiscreteModel discrete_matrices(double n, double dt, double mass) {
  if (!(dt > 0.0)) throw DomainError("discrete_matrices: dt must be positive");
  if (!(n > 0.0)) throw DomainError("discrete_matrices: mean motion must be positive");
  if (!(mass > 0.0)) throw DomainError("discrete_matrices: mass must be positive");

  DiscreteModel model;
  model.n = n;
  model.dt = dt;
  model.mass = mass;
  model.A = transition(n, dt);

  // Integral of the velocity columns of the transition matrix over one held step.
  const double tau = n * dt;
  const double s = std::sin(tau);
  const double omc = one_minus_cos(tau), tms = x_minus_sin(tau);
  const double n2 = n * n;
  Eigen::Matrix<double, 6, 3> g = Eigen::Matrix<double, 6, 3>::Zero();
  g(0, 0) = omc / n2;
  g(0, 1) = 2.0 * tms / n2;
  g(1, 0) = -2.0 * tms / n2;
  g(1, 1) = 4.0 * omc / n2 - 1.5 * dt * dt;
  g(2, 2) = omc / n2;
  g(3, 0) = s / n;
  g(3, 1) = 2.0 * omc / n;
  g(4, 0) = -2.0 * omc / n;
  g(4, 1) = (tau - 4.0 * tms) / n;
  g(5, 2) = s / n;

  model.B.rightCols<3>() = g * (kAccelScale / mass);
  return model;
}

HillState DiscreteModel::apply(const HillState& s, const Vec3& thrust) const {
  return HillState::from_stacked(A * s.stacked() + B.rightCols<3>() * thrust);
}

HillState cw_step(const HillState& s, const ThrustCommand& u, double n, double mass) {
  if (!(u.dt > 0.0)) throw DomainError("cw_step: dt must be positive");
  return discrete_matrices(n, u.dt, mass).apply(s, u.thrust);
}

HillState cw_free_drift(const HillState& s, double n, double t) {
  if (!(n > 0.0)) throw DomainError("cw_free_drift: mean motion must be positive");
  return HillState::from_stacked(transition(n, t) * s.stacked());
}

}  // namespace catmouse
