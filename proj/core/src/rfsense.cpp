#include "catmouse/rfsense.hpp"

#include <algorithm>
#include <cmath>

#include "catmouse/constants.hpp"
#include "catmouse/dynamics.hpp"
#include "catmouse/error.hpp"

namespace catmouse {

void ConstellationConfig::validate() const {
  if (num_sats <= 0 || num_planes <= 0) throw ConfigError("constellation needs positive sats and planes");
  if (num_sats % num_planes != 0) {
    throw ConfigError("constellation: num_sats (" + std::to_string(num_sats) +
                      ") must be divisible by num_planes (" + std::to_string(num_planes) + ")");
  }
  if (!(altitude > 0.0)) throw ConfigError("constellation altitude must be positive");
}

ConstellationConfig ConstellationConfig::with_size(int num_sats) {
  ConstellationConfig cfg;
  cfg.num_sats = num_sats;
  cfg.num_planes = num_sats >= 10 && num_sats % 10 == 0 ? num_sats / 10 : 1;
  return cfg;
}

std::vector<OrbitalElements> build_walker(const ConstellationConfig& cfg) {
  cfg.validate();
  const int per_plane = cfg.num_sats / cfg.num_planes;
  const double a = constants::kEarthRadius + cfg.altitude;
  const double n = mean_motion(a);
  const double d_raan = constants::kPi / cfg.num_planes;
  const double d_slot = constants::kTwoPi / per_plane;
  const double d_phase = constants::kTwoPi * cfg.phasing / cfg.num_sats;

  std::vector<OrbitalElements> sats;
  sats.reserve(static_cast<std::size_t>(cfg.num_sats));
  for (int p = 0; p < cfg.num_planes; ++p) {
    for (int s = 0; s < per_plane; ++s) {
      const double m = s * d_slot + p * d_phase + n * cfg.epoch_offset;
      sats.push_back(OrbitalElements::make(constants::kPi / 2.0, 0.0, p * d_raan, a, m));
    }
  }
  return sats;
}

void BeamSpec::validate() const {
  if (std::abs(center_dir.norm() - 1.0) > 1e-9) throw ConfigError("beam direction must be a unit vector");
  if (!(half_angle > 0.0 && half_angle < constants::kPi / 2.0)) {
    throw ConfigError("beam half-angle must lie in (0, pi/2)");
  }
}

BeamSpec BeamSpec::nadir(const EcefVector& source, double half_angle) {
  return BeamSpec{-source.v.normalized(), half_angle};
}

BeamSpec BeamSpec::toward(const EcefVector& source, const EcefVector& target, double half_angle) {
  return BeamSpec{(target.v - source.v).normalized(), half_angle};
}

BeamCheck in_beam(const EcefVector& source, const EcefVector& sensor, const BeamSpec& beam) {
  const Vec3 diff = source.v - sensor.v;
  const double range = diff.norm();
  if (!(range > 0.0)) throw GeometryError("in_beam: source and sensor coincide");
  const double ratio = std::min(1.0, diff.cross(beam.center_dir).norm() / range);
  BeamCheck out;
  out.off_axis = std::asin(ratio);
  // The cross-product form is symmetric fore/aft of the apex; only the forward cone counts.
  const bool forward = (sensor.v - source.v).dot(beam.center_dir) > 0.0;
  out.forward = forward;
  out.in_beam = forward && out.off_axis <= beam.half_angle;
  return out;
}

bool line_of_sight(const EcefVector& a, const EcefVector& b, double blocking_radius) {
  const Vec3 d = b.v - a.v;
  const double len2 = d.squaredNorm();
  double u = len2 > 0.0 ? -a.v.dot(d) / len2 : 0.0;
  u = std::clamp(u, 0.0, 1.0);
  return (a.v + u * d).norm() > blocking_radius;
}

std::vector<int> visible_sensors(const EcefVector& source, std::span<const EcefVector> sensors,
                                 const BeamSpec& beam, bool earth_occlusion) {
  std::vector<int> out;
  for (std::size_t i = 0; i < sensors.size(); ++i) {
    if (!in_beam(source, sensors[i], beam).in_beam) continue;
    if (earth_occlusion && !line_of_sight(source, sensors[i], constants::kEarthRadius)) continue;
    out.push_back(static_cast<int>(i));
  }
  return out;
}

TdoaSample tdoa_measure(const EcefVector& source, std::span<const EcefVector> sensors, double sigma_d,
                        Rng& rng) {
  if (sensors.size() < 2) throw GeometryError("tdoa_measure: at least two sensors are required");
  if (sigma_d < 0.0) throw DomainError("tdoa_measure: sigma_d must be non-negative");
  TdoaSample out;
  out.sigma_d = sigma_d;
  out.reference = 0;
  const double r_ref = (source.v - sensors[0].v).norm();
  std::normal_distribution<double> noise(0.0, 1.0);
  out.tau.reserve(sensors.size() - 1);
  for (std::size_t i = 1; i < sensors.size(); ++i) {
    const double delta_d = (source.v - sensors[i].v).norm() - r_ref;
    const double draw = sigma_d > 0.0 ? sigma_d * noise(rng) : 0.0;
    out.tau.push_back(delta_d / constants::kLightSpeed + draw);
  }
  return out;
}

Vec3 CrlbResult::sigma() const { return covariance.diagonal().cwiseMax(0.0).cwiseSqrt(); }

CrlbResult crlb(const EcefVector& source, std::span<const EcefVector> sensors, double sigma_d) {
  if (!(sigma_d > 0.0)) throw DomainError("crlb: sigma_d must be positive");
  CrlbResult out;
  out.sensors = static_cast<int>(sensors.size());
  if (sensors.size() < 4) return out;

  const int m = static_cast<int>(sensors.size()) - 1;
  const Vec3 ref_dir = (sensors[0].v - source.v) / (sensors[0].v - source.v).norm();
  Eigen::MatrixXd jac(m, 3);
  for (int i = 0; i < m; ++i) {
    const Vec3 diff = sensors[static_cast<std::size_t>(i) + 1].v - source.v;
    jac.row(i) = (diff / diff.norm() - ref_dir).transpose();
  }

  // Q_f = c^2 sigma_d^2 (I + 11^T) / 2, whose inverse is 2/(c sigma_d)^2 (I - 11^T/(m+1)).
  const double range_var = constants::kLightSpeed * constants::kLightSpeed * sigma_d * sigma_d;
  const Eigen::Vector3d col_sum = jac.colwise().sum().transpose();
  Eigen::Matrix3d info = jac.transpose() * jac - col_sum * col_sum.transpose() / (m + 1.0);
  info *= 2.0 / range_var;
  info = 0.5 * (info + info.transpose()).eval();

  const Eigen::SelfAdjointEigenSolver<Eigen::Matrix3d> eig(info);
  const Eigen::Vector3d lambda = eig.eigenvalues();
  if (eig.info() != Eigen::Success || !lambda.allFinite() || lambda(2) <= 0.0 ||
      lambda(0) <= lambda(2) * 1e-14) {
    return out;
  }
  const Eigen::Matrix3d cov =
      eig.eigenvectors() * lambda.cwiseInverse().asDiagonal() * eig.eigenvectors().transpose();
  out.covariance = 0.5 * (cov + cov.transpose());
  out.singular = false;
  return out;
}

CatEstimate sample_estimate(const EcefVector& truth, const CrlbResult& bound, double alpha, Rng& rng,
                            double t) {
  if (!(alpha >= 0.0)) throw DomainError("sample_estimate: alpha must be non-negative");
  CatEstimate est;
  est.t = t;
  est.n_sensors_visible = bound.sensors;
  est.sigma = alpha * bound.sigma();
  est.z = truth;
  if (alpha > 0.0) {
    std::normal_distribution<double> noise(0.0, 1.0);
    for (int k = 0; k < 3; ++k) est.z.v(k) += est.sigma(k) * noise(rng);
  }
  return est;
}

void SensingConfig::validate() const {
  constellation.validate();
  if (!(beam_half_angle > 0.0 && beam_half_angle < constants::kPi / 2.0)) {
    throw ConfigError("beam half-angle must lie in (0, pi/2)");
  }
  if (!(sigma_d > 0.0)) throw ConfigError("sigma_d must be positive");
}

SensingModel::SensingModel(SensingConfig cfg) : cfg_(std::move(cfg)) {
  cfg_.validate();
  sats_ = build_walker(cfg_.constellation);
}

std::vector<EcefVector> SensingModel::sensor_positions(double t) const {
  std::vector<EcefVector> out;
  out.reserve(sats_.size());
  for (const auto& sat : sats_) out.push_back(propagate_circular(sat, t).pos);
  return out;
}

BeamSpec SensingModel::beam_for(const EcefVector& source) const {
  if (cfg_.beam_target) return BeamSpec::toward(source, EcefVector(*cfg_.beam_target), cfg_.beam_half_angle);
  return BeamSpec::nadir(source, cfg_.beam_half_angle);
}

SensingModel::Snapshot SensingModel::snapshot(const EcefVector& source, double t) const {
  const auto all = sensor_positions(t);
  const auto idx = visible_sensors(source, all, beam_for(source), cfg_.earth_occlusion);
  Snapshot snap;
  snap.visible.reserve(idx.size());
  for (int i : idx) snap.visible.push_back(all[static_cast<std::size_t>(i)]);
  snap.bound = crlb(source, snap.visible, cfg_.sigma_d);
  return snap;
}

std::optional<CatEstimate> SensingModel::observe(const EcefVector& source, double t, double alpha,
                                                 Rng& rng) const {
  const Snapshot snap = snapshot(source, t);
  if (snap.bound.singular) return std::nullopt;
  return sample_estimate(source, snap.bound, alpha, rng, t);
}

}  // namespace catmouse
