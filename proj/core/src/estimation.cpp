#include "catmouse/estimation.hpp"

#include <array>
#include <cmath>

#include "catmouse/constants.hpp"
#include "catmouse/error.hpp"

namespace catmouse {

void EkfConfig::validate() const {
  if (q_pos < 0.0 || q_vel < 0.0) throw ConfigError("ekf process noise must be non-negative");
  if (!(max_substep > 0.0)) throw ConfigError("ekf max_substep must be positive");
  if (!(constant_sigma.minCoeff() > 0.0)) throw ConfigError("ekf constant sigma must be positive");
}

Vec3 two_body_accel(const Vec3& r) {
  const double rn = r.norm();
  if (!(rn > 1.0)) throw DomainError("two-body acceleration undefined at the origin");
  return -constants::kMu / (rn * rn * rn) * r;
}

Mat6 two_body_jacobian(const Vec6& x) {
  const Vec3 r = x.head<3>();
  const double rn = r.norm();
  if (!(rn > 1.0)) throw DomainError("two-body jacobian undefined at the origin");
  const double k = constants::kMu / (rn * rn * rn);
  Mat6 f = Mat6::Zero();
  f.topRightCorner<3, 3>().setIdentity();
  f.bottomLeftCorner<3, 3>() = k * (3.0 * r * r.transpose() / (rn * rn) - Eigen::Matrix3d::Identity());
  return f;
}

namespace {
Vec6 deriv(const Vec6& x) {
  Vec6 d;
  d.head<3>() = x.tail<3>();
  d.tail<3>() = two_body_accel(x.head<3>());
  return d;
}
}  // namespace

Vec6 rk4_two_body(const Vec6& x, double dt) {
  const Vec6 k1 = deriv(x);
  const Vec6 k2 = deriv(x + 0.5 * dt * k1);
  const Vec6 k3 = deriv(x + 0.5 * dt * k2);
  const Vec6 k4 = deriv(x + dt * k3);
  return x + dt / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
}

Mat6 transition_second_order(const Vec6& x, double dt) {
  const Mat6 f = two_body_jacobian(x);
  return Mat6::Identity() + f * dt + f * f * (0.5 * dt * dt);
}

EkfState ekf_predict(const EkfState& s, double dt, const EkfConfig& cfg) {
  if (!(dt > 0.0)) throw DomainError("ekf_predict: dt must be positive");
  const int steps = std::max(1, static_cast<int>(std::ceil(dt / cfg.max_substep - 1e-12)));
  const double h = dt / steps;
  EkfState out = s;
  Mat6 phi = Mat6::Identity();
  for (int k = 0; k < steps; ++k) {
    phi = transition_second_order(out.x, h) * phi;
    out.x = rk4_two_body(out.x, h);
  }
  out.P = phi * s.P * phi.transpose();
  out.P.diagonal().head<3>().array() += cfg.q_pos;
  out.P.diagonal().tail<3>().array() += cfg.q_vel;
  out.P = 0.5 * (out.P + out.P.transpose()).eval();
  out.t = s.t + dt;
  return out;
}

EkfState ekf_update(const EkfState& s, const Vec3& z, const Mat3& R) {
  const Eigen::Matrix3d r = R;
  Eigen::LLT<Eigen::Matrix3d> r_chol(r);
  if (!r.allFinite() || r_chol.info() != Eigen::Success) {
    throw ConfigError("ekf_update: measurement covariance must be positive definite");
  }
  // H = [I 0], so H P H^T and P H^T are blocks of P.
  const Eigen::Matrix<double, 6, 3> pht = s.P.leftCols<3>();
  const Eigen::Matrix3d innov_cov = s.P.topLeftCorner<3, 3>() + r;
  const Eigen::Matrix<double, 6, 3> gain = innov_cov.ldlt().solve(pht.transpose()).transpose();
  EkfState out = s;
  out.x = s.x + gain * (z - s.x.head<3>());
  Mat6 ikh = Mat6::Identity();
  ikh.leftCols<3>() -= gain;
  out.P = ikh * s.P;
  out.P = 0.5 * (out.P + out.P.transpose()).eval();
  return out;
}

EkfState ekf_update(const EkfState& s, const CatEstimate& z, const EkfConfig& cfg) {
  if (z.stale) return s;
  const Vec3 sig = cfg.use_estimate_sigma ? z.sigma : cfg.constant_sigma;
  // alpha = 0 yields exact estimates; keep R invertible.
  const Vec3 var = sig.cwiseProduct(sig).cwiseMax(1e-12);
  return ekf_update(s, z.z.v, Mat3(var.asDiagonal()));
}

HillVector ekf_to_hill(const EkfState& s, const OrbitalElements& origin) {
  return ecef_to_hill(EcefVector(Vec3(s.x.head<3>())), origin);
}

Vec3 reference_sigma_for_size(int num_sats) {
  struct Row {
    int size;
    double x, y, z;
  };
  static constexpr std::array<Row, 5> rows{{{30, 5542.0, 5173.0, 2045.0},
                                            {60, 4.703, 2.446, 37.90},
                                            {100, 0.239, 0.003, 0.147},
                                            {150, 0.193, 0.003, 0.117},
                                            {200, 0.165, 0.004, 0.099}}};
  const Row* best = &rows[0];
  for (const auto& r : rows) {
    if (std::abs(r.size - num_sats) < std::abs(best->size - num_sats)) best = &r;
  }
  return {best->x, best->y, best->z};
}

EkfState ekf_init(const Vec3& pos, const Vec3& vel, const Vec3& sigma_pos, double sigma_vel, double t) {
  EkfState s;
  s.x << pos, vel;
  s.P.setZero();
  s.P.diagonal().head<3>() = sigma_pos.cwiseProduct(sigma_pos);
  s.P.diagonal().tail<3>().setConstant(sigma_vel * sigma_vel);
  s.t = t;
  return s;
}

}  // namespace catmouse
