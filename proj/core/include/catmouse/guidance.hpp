#pragma once

#include <string>
#include <vector>

#include "catmouse/dynamics.hpp"

namespace catmouse {

enum class GoalSource { Policy, Grs, Dvo, ReturnToOrigin, External };
std::string to_string(GoalSource s);

// Absolute desired mouse position in the Hill frame.
struct GoalCommand {
  HillVector target;
  GoalSource source = GoalSource::External;
};

struct MpcConfig {
  int horizon = 8;
  Mat6 Q = (Vec6() << 1.0, 1.0, 1.0, 1.0e6, 1.0e6, 1.0e6).finished().asDiagonal();
  Eigen::Matrix3d R = Eigen::Matrix3d::Identity() * 1.0e-6;
  Vec3 u_lb = Vec3::Constant(-1.0);  // N
  Vec3 u_ub = Vec3::Constant(1.0);   // N
  int max_iterations = 200;
  double tolerance = 1e-8;

  void validate() const;
};

struct MpcResult {
  ThrustCommand command;              // first input of the plan
  Eigen::VectorXd plan;               // all inputs, 3 per step
  int iterations = 0;
  bool converged = false;             // false: best iterate returned at the cap
  double cost = 0.0;
  std::vector<double> cost_trace;     // cost after each iteration
};

// Condensed box-constrained QP over the horizon:
//   min sum_{k=1..M} (x_k - g)^T Q (x_k - g) + sum_{k=0..M-1} u_k^T R u_k,  lb <= u_k <= ub
// with x_{k+1} = A x_k + B [0; u_k] from the shared discrete model.
// Solved by monotone accelerated projected gradient on a Jacobi-scaled problem.
class MpcSolver {
 public:
  MpcSolver(const DiscreteModel& model, MpcConfig cfg);

  const DiscreteModel& model() const { return model_; }
  const MpcConfig& config() const { return cfg_; }

  // warm: optional previous plan (size 3M), shifted by one step internally.
  MpcResult solve(const HillState& s, const HillVector& goal, const Eigen::VectorXd* warm = nullptr,
                  bool record_trace = false) const;

  // QP data for (s, goal): cost(u) = u^T H u + 2 q^T u + const.
  const Eigen::MatrixXd& hessian() const { return H_; }
  Eigen::VectorXd linear_term(const HillState& s, const HillVector& goal) const;
  double cost(const Eigen::VectorXd& u, const HillState& s, const HillVector& goal) const;

 private:
  DiscreteModel model_;
  MpcConfig cfg_;
  Eigen::MatrixXd Sx_;   // 6M x 6
  Eigen::MatrixXd Su_;   // 6M x 3M
  Eigen::MatrixXd Qbar_; // 6M x 6M block diagonal
  Eigen::MatrixXd H_;
  Eigen::VectorXd scale_;
  Eigen::MatrixXd Hs_;   // scaled Hessian
  double lipschitz_ = 1.0;
  Eigen::VectorXd lb_, ub_;
};

MpcResult mpc_solve(const HillState& s, const GoalCommand& goal, const MpcConfig& cfg, double n, double mass,
                    double dt);

// Position-from-velocity block of the CW transition at time t.
Eigen::Matrix3d cw_phi12(double n, double t);

struct DeltaV {
  double magnitude = 0.0;  // km/s
  Vec3 vector = Vec3::Zero();
  double lambda_max = 0.0;
};

// Minimum-norm impulse whose free drift from the origin is displaced by D
// perpendicular to e after t_fix. The sign of the returned vector makes the
// drift at t_fix move along +e. Throws DomainError for D < 0, t_fix <= 0 or degenerate e.
DeltaV dvo_delta_v(const Vec3& direction_e, double D, double t_fix, double n);

struct DvoSelection {
  DeltaV burn;
  Vec3 direction = Vec3::UnitX();  // chosen e
  Vec3 initial_direction = Vec3::UnitX();
  double initial_magnitude = 0.0;
  int candidates = 0;
};

// Sweeps e over rings within angle_tol of the initial guess (opposite mouse -> mean cat)
// and keeps the smallest |dV|. cat_estimates must be non-empty.
DvoSelection dvo_select(const std::vector<Vec3>& cat_estimates, const Vec3& mouse, double D, double t_fix,
                        double n, double angle_tol, int rings = 6, int per_ring = 16);

// Fuel surrogate for reaching g at rest after the MPC horizon with one burn at the
// first step and one at the last. Returns (|u0|_1 + |u1|_1) * dt in N*s.
class TransferFuel {
 public:
  TransferFuel(const DiscreteModel& model, int horizon);
  double operator()(const HillState& s, const Vec3& goal) const;

 private:
  Mat6 AM_;
  Mat6 pinv_;
  double dt_;
};

struct GrsConfig {
  int grid = 16;
  double refinement = 4.0;                       // a
  double tol = 0.5 * 3.14159265358979323846 / 180.0;  // rad
  double d_m = 25.0;                             // km
  double d_far = 35.0;                           // km, beyond this the goal is the origin
  double w_dev = 1.0 / 50.0;
  double w_fuel = 0.0;                           // per N*s

  void validate() const;
};

struct GrsResult {
  GoalCommand goal;
  double reward = 0.0;  // surrogate at the goal
  int levels = 0;
  int evaluations = 0;
};

// Surrogate r = 1 - w_dev |g| - w_fuel f(g).
double grs_reward(const Vec3& g, const HillState& mouse, const TransferFuel& fuel, const GrsConfig& cfg);

// Goal on the sphere of radius d_m about the mean of the filtered cat estimates (x = d c_phi s_theta,
// y = d c_phi c_theta, z = d s_phi). Ranges shrink to +/- width/a about the incumbent until both
// widths are below tol.
GrsResult grs(const std::vector<Vec3>& cat_estimates, const HillState& mouse, const TransferFuel& fuel,
              const GrsConfig& cfg, double phi_min = 0.0, double phi_max = 2.0 * 3.14159265358979323846,
              double theta_min = 0.0, double theta_max = 2.0 * 3.14159265358979323846);

// Number of grid levels grs evaluates for a starting width and tolerance.
int grs_level_count(double width, double tol, double refinement);

}  // namespace catmouse
