#include "catmouse/guidance.hpp"

#include <cmath>
#include <limits>

#include "catmouse/constants.hpp"
#include "catmouse/error.hpp"

namespace catmouse {

std::string to_string(GoalSource s) {
  switch (s) {
    case GoalSource::Policy: return "policy";
    case GoalSource::Grs: return "grs";
    case GoalSource::Dvo: return "dvo";
    case GoalSource::ReturnToOrigin: return "return-to-origin";
    case GoalSource::External: return "external";
  }
  return "external";
}

void MpcConfig::validate() const {
  if (horizon < 1) throw ConfigError("mpc horizon must be at least 1");
  if (max_iterations < 1) throw ConfigError("mpc iteration cap must be at least 1");
  if (!(tolerance > 0.0)) throw ConfigError("mpc tolerance must be positive");
  if ((u_lb.array() >= u_ub.array()).any()) throw ConfigError("mpc bounds need u_lb < u_ub");
  const Eigen::SelfAdjointEigenSolver<Mat6> q(0.5 * (Q + Q.transpose()));
  const Eigen::SelfAdjointEigenSolver<Eigen::Matrix3d> r(0.5 * (R + R.transpose()));
  if (q.eigenvalues().minCoeff() < -1e-12 * std::max(1.0, q.eigenvalues().maxCoeff())) {
    throw ConfigError("mpc Q must be positive semidefinite");
  }
  if (r.eigenvalues().minCoeff() < 0.0) throw ConfigError("mpc R must be positive semidefinite");
}

MpcSolver::MpcSolver(const DiscreteModel& model, MpcConfig cfg) : model_(model), cfg_(std::move(cfg)) {
  cfg_.validate();
  const int m = cfg_.horizon;
  const Eigen::Matrix<double, 6, 3> bu = model_.input();
  Sx_.setZero(6 * m, 6);
  Su_.setZero(6 * m, 3 * m);
  Qbar_.setZero(6 * m, 6 * m);
  Mat6 power = Mat6::Identity();
  for (int k = 0; k < m; ++k) {
    power = model_.A * power;
    Sx_.block<6, 6>(6 * k, 0) = power;
    Qbar_.block<6, 6>(6 * k, 6 * k) = cfg_.Q;
  }
  // x_{k+1} depends on u_j for j <= k through A^{k-j} B.
  for (int j = 0; j < m; ++j) {
    Eigen::Matrix<double, 6, 3> blk = bu;
    for (int k = j; k < m; ++k) {
      Su_.block<6, 3>(6 * k, 3 * j) = blk;
      blk = model_.A * blk;
    }
  }
  H_ = Su_.transpose() * Qbar_ * Su_;
  for (int k = 0; k < m; ++k) H_.block<3, 3>(3 * k, 3 * k) += cfg_.R;
  H_ = 0.5 * (H_ + H_.transpose()).eval();

  scale_ = H_.diagonal().cwiseMax(1e-300).cwiseSqrt().cwiseInverse();
  Hs_ = scale_.asDiagonal() * H_ * scale_.asDiagonal();
  const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(Hs_, Eigen::EigenvaluesOnly);
  lipschitz_ = 2.0 * std::max(eig.eigenvalues().maxCoeff(), 1e-300);

  lb_.resize(3 * m);
  ub_.resize(3 * m);
  for (int k = 0; k < m; ++k) {
    lb_.segment<3>(3 * k) = cfg_.u_lb.cwiseQuotient(scale_.segment<3>(3 * k));
    ub_.segment<3>(3 * k) = cfg_.u_ub.cwiseQuotient(scale_.segment<3>(3 * k));
  }
}

Eigen::VectorXd MpcSolver::linear_term(const HillState& s, const HillVector& goal) const {
  const int m = cfg_.horizon;
  Eigen::VectorXd err = Sx_ * s.stacked();
  for (int k = 0; k < m; ++k) err.segment<3>(6 * k) -= goal.v;
  return Su_.transpose() * (Qbar_ * err);
}

double MpcSolver::cost(const Eigen::VectorXd& u, const HillState& s, const HillVector& goal) const {
  HillState x = s;
  double j = 0.0;
  for (int k = 0; k < cfg_.horizon; ++k) {
    const Vec3 uk = u.segment<3>(3 * k);
    j += uk.dot(cfg_.R * uk);
    x = model_.apply(x, uk);
    Vec6 e = x.stacked();
    e.head<3>() -= goal.v;
    j += e.dot(cfg_.Q * e);
  }
  return j;
}

MpcResult MpcSolver::solve(const HillState& s, const HillVector& goal, const Eigen::VectorXd* warm,
                           bool record_trace) const {
  const int nu = 3 * cfg_.horizon;
  const Eigen::VectorXd q = scale_.cwiseProduct(linear_term(s, goal));
  auto project = [&](Eigen::VectorXd v) { return v.cwiseMax(lb_).cwiseMin(ub_).eval(); };
  // Scaled objective without the constant term.
  auto objective = [&](const Eigen::VectorXd& v) { return v.dot(Hs_ * v) + 2.0 * q.dot(v); };

  Eigen::VectorXd x = Eigen::VectorXd::Zero(nu);
  if (warm != nullptr && warm->size() == nu) {
    Eigen::VectorXd shifted = Eigen::VectorXd::Zero(nu);
    shifted.head(nu - 3) = warm->tail(nu - 3);
    shifted.tail<3>() = warm->tail<3>();
    x = project(shifted.cwiseQuotient(scale_));
  }

  MpcResult out;
  double fx = objective(x);
  Eigen::VectorXd y = x, x_prev = x;
  double t = 1.0;
  for (int it = 0; it < cfg_.max_iterations; ++it) {
    const Eigen::VectorXd grad = 2.0 * (Hs_ * y + q);
    const Eigen::VectorXd z = project(y - grad / lipschitz_);
    const double fz = objective(z);
    const bool accept = fz <= fx;
    x_prev = x;
    if (accept) {
      x = z;
      fx = fz;
    }
    const double t_next = 0.5 * (1.0 + std::sqrt(1.0 + 4.0 * t * t));
    if (accept) {
      y = x + ((t - 1.0) / t_next) * (x - x_prev);
      t = t_next;
    } else {
      // restart the momentum from the incumbent
      y = x;
      t = 1.0;
    }
    out.iterations = it + 1;
    if (record_trace) out.cost_trace.push_back(fx);
    const double step = (z - x_prev).cwiseAbs().maxCoeff();
    if (accept && step <= cfg_.tolerance * std::max(1.0, x.cwiseAbs().maxCoeff())) {
      out.converged = true;
      break;
    }
  }
  out.plan = scale_.cwiseProduct(x);
  // Undo scaling drift so the bounds hold exactly.
  for (int k = 0; k < cfg_.horizon; ++k) {
    out.plan.segment<3>(3 * k) = out.plan.segment<3>(3 * k).cwiseMax(cfg_.u_lb).cwiseMin(cfg_.u_ub);
  }
  out.command.thrust = out.plan.head<3>();
  out.command.dt = model_.dt;
  out.cost = cost(out.plan, s, goal);
  return out;
}

MpcResult mpc_solve(const HillState& s, const GoalCommand& goal, const MpcConfig& cfg, double n, double mass,
                    double dt) {
  const MpcSolver solver(discrete_matrices(n, dt, mass), cfg);
  return solver.solve(s, goal.target);
}

Eigen::Matrix3d cw_phi12(double n, double t) {
  if (!(n > 0.0)) throw DomainError("cw_phi12: mean motion must be positive");
  const HillState unit_x = cw_free_drift(HillState{Vec3::Zero(), Vec3::UnitX()}, n, t);
  const HillState unit_y = cw_free_drift(HillState{Vec3::Zero(), Vec3::UnitY()}, n, t);
  const HillState unit_z = cw_free_drift(HillState{Vec3::Zero(), Vec3::UnitZ()}, n, t);
  Eigen::Matrix3d phi;
  phi.col(0) = unit_x.pos;
  phi.col(1) = unit_y.pos;
  phi.col(2) = unit_z.pos;
  return phi;
}

DeltaV dvo_delta_v(const Vec3& direction_e, double D, double t_fix, double n) {
  if (!(D >= 0.0)) throw DomainError("dvo_delta_v: D must be non-negative");
  if (!(t_fix > 0.0)) throw DomainError("dvo_delta_v: t_fix must be positive");
  if (!(direction_e.norm() > 0.0)) throw DomainError("dvo_delta_v: direction must be non-zero");
  const Vec3 e = direction_e.normalized();
  const Eigen::Matrix3d phi = cw_phi12(n, t_fix);
  const Eigen::Matrix3d proj = Eigen::Matrix3d::Identity() - e * e.transpose();
  const Eigen::Matrix3d m = phi.transpose() * proj * phi;
  const Eigen::SelfAdjointEigenSolver<Eigen::Matrix3d> eig(0.5 * (m + m.transpose()));
  const double lambda = eig.eigenvalues()(2);
  // phi has entries ~1/n; compare against that scale.
  if (!(lambda > 1e-18 * phi.squaredNorm())) throw DomainError("dvo_delta_v: degenerate direction");

  DeltaV out;
  out.lambda_max = lambda;
  out.magnitude = std::sqrt(D * D / lambda);
  Vec3 dir = eig.eigenvectors().col(2);
  if ((phi * dir).dot(e) < 0.0) dir = -dir;
  out.vector = out.magnitude * dir;
  return out;
}

namespace {
// Two unit vectors completing e to a right-handed orthonormal basis.
std::pair<Vec3, Vec3> perpendicular_basis(const Vec3& e) {
  const Vec3 seed = std::abs(e.x()) < 0.9 ? Vec3::UnitX() : Vec3::UnitY();
  const Vec3 p = e.cross(seed).normalized();
  return {p, e.cross(p)};
}

Vec3 mean_of(const std::vector<Vec3>& v) {
  Vec3 m = Vec3::Zero();
  for (const auto& x : v) m += x;
  return m / static_cast<double>(v.size());
}
}  // namespace

DvoSelection dvo_select(const std::vector<Vec3>& cat_estimates, const Vec3& mouse, double D, double t_fix,
                        double n, double angle_tol, int rings, int per_ring) {
  if (cat_estimates.empty()) throw DomainError("dvo_select: need at least one estimate");
  const Vec3 toward_cat = mean_of(cat_estimates) - mouse;
  const Vec3 e0 = toward_cat.norm() > 0.0 ? Vec3(-toward_cat.normalized()) : Vec3(Vec3::UnitX());

  DvoSelection out;
  out.initial_direction = e0;
  out.direction = e0;
  out.burn = dvo_delta_v(e0, D, t_fix, n);
  out.initial_magnitude = out.burn.magnitude;
  out.candidates = 1;
  if (!(angle_tol > 0.0) || rings < 1 || per_ring < 1) return out;

  const auto [p, q] = perpendicular_basis(e0);
  for (int r = 1; r <= rings; ++r) {
    const double beta = angle_tol * r / rings;
    for (int k = 0; k < per_ring; ++k) {
      const double psi = constants::kTwoPi * k / per_ring;
      const Vec3 e = std::cos(beta) * e0 + std::sin(beta) * (std::cos(psi) * p + std::sin(psi) * q);
      ++out.candidates;
      DeltaV dv;
      try {
        dv = dvo_delta_v(e, D, t_fix, n);
      } catch (const DomainError&) {
        continue;
      }
      if (dv.magnitude < out.burn.magnitude) {
        out.burn = dv;
        out.direction = e;
      }
    }
  }
  return out;
}

TransferFuel::TransferFuel(const DiscreteModel& model, int horizon) : dt_(model.dt) {
  if (horizon < 2) throw ConfigError("transfer fuel needs a horizon of at least 2 steps");
  const Eigen::Matrix<double, 6, 3> bu = model.input();
  Mat6 power = Mat6::Identity();
  for (int k = 0; k < horizon - 1; ++k) power = model.A * power;
  Mat6 t;
  t.leftCols<3>() = power * bu;
  t.rightCols<3>() = bu;
  AM_ = model.A * power;
  pinv_ = t.completeOrthogonalDecomposition().pseudoInverse();
}

double TransferFuel::operator()(const HillState& s, const Vec3& goal) const {
  Vec6 target = Vec6::Zero();
  target.head<3>() = goal;
  const Vec6 u = pinv_ * (target - AM_ * s.stacked());
  return u.cwiseAbs().sum() * dt_;
}

void GrsConfig::validate() const {
  if (grid < 2) throw ConfigError("grs grid must have at least 2 points per angle");
  if (!(refinement > 2.0)) throw ConfigError("grs refinement a must exceed 2 for the ranges to shrink");
  if (!(tol > 0.0)) throw ConfigError("grs tolerance must be positive");
  if (!(d_m > 0.0)) throw ConfigError("grs d_m must be positive");
  if (!(d_far > 0.0)) throw ConfigError("grs d_far must be positive");
}

double grs_reward(const Vec3& g, const HillState& mouse, const TransferFuel& fuel, const GrsConfig& cfg) {
  return 1.0 - cfg.w_dev * g.norm() - cfg.w_fuel * fuel(mouse, g);
}

int grs_level_count(double width, double tol, double refinement) {
  int levels = 1;
  while (!(width < tol)) {
    width *= 2.0 / refinement;
    ++levels;
  }
  return levels;
}

GrsResult grs(const std::vector<Vec3>& cat_estimates, const HillState& mouse, const TransferFuel& fuel,
              const GrsConfig& cfg, double phi_min, double phi_max, double theta_min, double theta_max) {
  cfg.validate();
  if (cat_estimates.empty()) throw DomainError("grs: need at least one estimate");
  if (!(phi_max >= phi_min && theta_max >= theta_min)) throw DomainError("grs: invalid angle range");
  const Vec3 center = mean_of(cat_estimates);

  GrsResult out;
  if ((center - mouse.pos).norm() > cfg.d_far) {
    out.goal = GoalCommand{HillVector(0.0, 0.0, 0.0), GoalSource::ReturnToOrigin};
    out.reward = grs_reward(Vec3::Zero(), mouse, fuel, cfg);
    return out;
  }

  auto offset = [&](double phi, double theta) {
    return Vec3(cfg.d_m * std::cos(phi) * std::sin(theta), cfg.d_m * std::cos(phi) * std::cos(theta),
                cfg.d_m * std::sin(phi));
  };

  double best_r = -std::numeric_limits<double>::infinity();
  Vec3 best_g = center + offset(phi_min, theta_min);
  while (true) {
    ++out.levels;
    for (int i = 0; i < cfg.grid; ++i) {
      const double phi = phi_min + (phi_max - phi_min) * i / (cfg.grid - 1);
      for (int j = 0; j < cfg.grid; ++j) {
        const double theta = theta_min + (theta_max - theta_min) * j / (cfg.grid - 1);
        const Vec3 g = center + offset(phi, theta);
        const double r = grs_reward(g, mouse, fuel, cfg);
        ++out.evaluations;
        if (r > best_r) {
          best_r = r;
          best_g = g;
        }
      }
    }
    const double w_phi = phi_max - phi_min, w_theta = theta_max - theta_min;
    if (std::max(w_phi, w_theta) < cfg.tol) break;
    const Vec3 d = best_g - center;
    const double phi = std::atan2(d.z(), std::hypot(d.x(), d.y()));
    const double theta = std::atan2(d.x(), d.y());
    phi_min = phi - w_phi / cfg.refinement;
    phi_max = phi + w_phi / cfg.refinement;
    theta_min = theta - w_theta / cfg.refinement;
    theta_max = theta + w_theta / cfg.refinement;
  }
  out.goal = GoalCommand{HillVector(best_g), GoalSource::Grs};
  out.reward = best_r;
  return out;
}

}  // namespace catmouse
