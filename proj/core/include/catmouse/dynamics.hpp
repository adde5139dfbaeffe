#pragma once

#include <Eigen/Dense>

#include "catmouse/frames.hpp"

namespace catmouse {

using Vec6 = Eigen::Matrix<double, 6, 1>;
using Mat6 = Eigen::Matrix<double, 6, 6>;

// Default relative-motion validity radius (km); also the episode deviation cutoff.
inline constexpr double kCwValidityRadius = 50.0;

// Craft position (km) and velocity (km/s) in the Hill frame.
struct HillState {
  Vec3 pos = Vec3::Zero();
  Vec3 vel = Vec3::Zero();

  Vec6 stacked() const;
  static HillState from_stacked(const Vec6& x);
  bool finite() const;
  // States beyond the radius are legal but outside where the linearization holds.
  bool within_validity(double radius = kCwValidityRadius) const { return pos.norm() <= radius; }
};

// Per-axis thrust (N), held constant over dt (s).
struct ThrustCommand {
  Vec3 thrust = Vec3::Zero();
  double dt = 0.0;

  // Accumulated impulse contribution sum_axis |T| * dt (N*s).
  double impulse() const { return thrust.cwiseAbs().sum() * dt; }
};

struct CraftParams {
  double mass = 2500.0;        // kg
  double thrust_limit = 1.0;   // N, per axis
  double fuel_used = 0.0;      // N*s, non-decreasing

  void validate() const;
  // Adds the command's impulse to fuel_used and returns the increment.
  double record(const ThrustCommand& u);
  // Componentwise clamp to +/- thrust_limit.
  Vec3 clamp(const Vec3& thrust) const;
};

// n = sqrt(mu / a^3); throws DomainError for a <= 0.
double mean_motion(double semi_major_axis);

struct OrbitState {
  EcefVector pos;
  Vec3 vel = Vec3::Zero();  // km/s, ECEF axes
};

// Circular-orbit position and velocity at time t, with M = M0 + n (t - epoch).
OrbitState propagate_circular(const OrbitalElements& elems, double t);

// Right-hand side of the Clohessy-Wiltshire equations with thrust (N) on a craft of mass m (kg).
Vec6 cw_derivative(const HillState& s, const Vec3& thrust, double mass, double n);

// Exact zero-order-hold discretization x+ = A x + B [0; u] with u in N.
// B is 6x6 to match that form; its first three columns are zero.
struct DiscreteModel {
  Mat6 A = Mat6::Identity();
  Mat6 B = Mat6::Zero();
  double n = 0.0;
  double dt = 0.0;
  double mass = 0.0;

  // The 6x3 block of B that multiplies the thrust vector.
  Eigen::Matrix<double, 6, 3> input() const { return B.rightCols<3>(); }
  // One step of the model. This is the single code path shared by the plant and the MPC.
  HillState apply(const HillState& s, const Vec3& thrust) const;
};

// Closed-form CW transition (A) and held-thrust input (B) matrices.
DiscreteModel discrete_matrices(double n, double dt, double mass);

// Advances one step with the exact discrete model. Throws DomainError for dt <= 0.
HillState cw_step(const HillState& s, const ThrustCommand& u, double n, double mass);

// Free-drift closed form for arbitrary t, used by oracles and spawn logic.
HillState cw_free_drift(const HillState& s, double n, double t);

}  // namespace catmouse
