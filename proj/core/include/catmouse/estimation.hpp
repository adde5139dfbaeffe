#pragma once

#include "catmouse/dynamics.hpp"
#include "catmouse/rfsense.hpp"

namespace catmouse {

// Cat position/velocity in ECEF (km, km/s) with its covariance.
struct EkfState {
  Vec6 x = Vec6::Zero();
  Mat6 P = Mat6::Identity();
  double t = 0.0;
};

struct EkfConfig {
  // Sized to absorb the gap between two-body prediction and linearized relative-motion truth.
  double q_pos = 1e-6;   // km^2 added to each position variance per prediction
  double q_vel = 1e-10;  // (km/s)^2
  double max_substep = 30.0;  // s, RK4 substep ceiling
  // R from each estimate's own sigma; when false the constant below is used.
  bool use_estimate_sigma = true;
  Vec3 constant_sigma = Vec3::Constant(1.0);  // km

  void validate() const;
};

// Two-body acceleration -mu r / |r|^3. Throws DomainError near the origin.
Vec3 two_body_accel(const Vec3& r);

// d(xdot)/dx of the two-body system at x.
Mat6 two_body_jacobian(const Vec6& x);

// One RK4 step of two-body motion.
Vec6 rk4_two_body(const Vec6& x, double dt);

// Second-order transition I + F dt + F^2 dt^2 / 2, F evaluated at x.
Mat6 transition_second_order(const Vec6& x, double dt);

// Propagates the state with RK4 (substeps of at most cfg.max_substep) and the
// covariance with the product of the substep transitions. dt must be > 0.
EkfState ekf_predict(const EkfState& s, double dt, const EkfConfig& cfg = {});

// Position-only update with H = [I 0]. Stale estimates leave the state unchanged.
// Throws ConfigError for a non-positive-definite R.
EkfState ekf_update(const EkfState& s, const CatEstimate& z, const EkfConfig& cfg = {});
EkfState ekf_update(const EkfState& s, const Vec3& z, const Mat3& R);

HillVector ekf_to_hill(const EkfState& s, const OrbitalElements& origin);

// Paper's average localization sigmas for the nearest tabulated constellation size (km).
Vec3 reference_sigma_for_size(int num_sats);

// Filter seeded at position z with P = diag(sigma_pos^2, sigma_vel^2).
EkfState ekf_init(const Vec3& pos, const Vec3& vel, const Vec3& sigma_pos, double sigma_vel, double t);

}  // namespace catmouse
