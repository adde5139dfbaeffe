#pragma once

#include <optional>
#include <span>
#include <vector>

#include "catmouse/frames.hpp"
#include "catmouse/random.hpp"

namespace catmouse {

// Per-axis sigma reported for an unobservable geometry (km). Large enough that a
// filter consuming it treats the sample as carrying no information.
inline constexpr double kUnobservableSigma = 1.0e4;

// Polar Walker (star) constellation of circular orbits at one altitude.
struct ConstellationConfig {
  int num_sats = 60;
  int num_planes = 6;
  double altitude = 550.0;    // km above kEarthRadius
  int phasing = 0;            // Walker F: slot offset between adjacent planes, in units of 2*pi/num_sats
  double epoch_offset = 0.0;  // s, shifts every satellite along its orbit

  void validate() const;
  // num_sats satellites, ten per plane (one plane when fewer than ten).
  static ConstellationConfig with_size(int num_sats);
};

std::vector<OrbitalElements> build_walker(const ConstellationConfig& cfg);

// Conical transmit beam from the emitter.
struct BeamSpec {
  Vec3 center_dir = Vec3::UnitX();  // unit vector, ECEF
  double half_angle = 0.0;          // rad, in (0, pi/2)

  void validate() const;
  // Beam pointing from the source toward the Earth's centre.
  static BeamSpec nadir(const EcefVector& source, double half_angle);
  // Beam pointing from the source toward a fixed ECEF target.
  static BeamSpec toward(const EcefVector& source, const EcefVector& target, double half_angle);
};

struct BeamCheck {
  bool in_beam = false;
  bool forward = false;   // sensor lies ahead of the cone apex along the beam axis
  double off_axis = 0.0;  // rad, in [0, pi/2]; symmetric fore/aft of the apex
};

// Off-axis angle phi = asin(|(x_a - x_i) x b| / |x_a - x_i|); inside iff phi <= theta
// and the sensor lies in the forward half-space of the beam.
// Throws GeometryError when source and sensor coincide.
BeamCheck in_beam(const EcefVector& source, const EcefVector& sensor, const BeamSpec& beam);

// True when the segment between a and b clears a sphere of the given radius about the origin.
bool line_of_sight(const EcefVector& a, const EcefVector& b, double blocking_radius);

// Indices of sensors inside the beam with an unobstructed line of sight, ascending.
std::vector<int> visible_sensors(const EcefVector& source, std::span<const EcefVector> sensors,
                                 const BeamSpec& beam, bool earth_occlusion = true);

// Time differences of arrival against sensors[0] as the reference.
struct TdoaSample {
  std::vector<double> tau;  // s, one entry per non-reference sensor
  int reference = 0;
  double sigma_d = 0.0;     // s
};

TdoaSample tdoa_measure(const EcefVector& source, std::span<const EcefVector> sensors,
                        double sigma_d, Rng& rng);

struct CrlbResult {
  Mat3 covariance = Mat3::Identity() * (kUnobservableSigma * kUnobservableSigma);
  bool singular = true;
  int sensors = 0;

  // sqrt(diag(covariance)); the sentinel value when singular.
  Vec3 sigma() const;
};

// Cramer-Rao bound of 3D TDOA localization with sensors[0] as reference.
// Fewer than four sensors or a rank-deficient information matrix yields a
// result flagged singular with sentinel covariance; never throws for geometry.
CrlbResult crlb(const EcefVector& source, std::span<const EcefVector> sensors, double sigma_d);

// Noisy emitter position with its per-axis standard deviations.
struct CatEstimate {
  EcefVector z;
  Vec3 sigma = Vec3::Zero();  // km
  double t = 0.0;             // s
  int n_sensors_visible = 0;
  bool stale = false;         // true when repeated from an earlier step
};

// z = x + alpha * N(0, sqrt(diag(CRLB))), sigma = alpha * sqrt(diag(CRLB)).
CatEstimate sample_estimate(const EcefVector& truth, const CrlbResult& bound, double alpha,
                            Rng& rng, double t = 0.0);

// Everything needed to turn a true emitter position into an estimate at time t.
struct SensingConfig {
  ConstellationConfig constellation;
  // 8.9 deg just covers the Earth disk plus a thin LEO limb seen from GEO.
  double beam_half_angle = 8.9 * 3.14159265358979323846 / 180.0;  // rad
  double sigma_d = 4.3e-8;                                        // s
  bool earth_occlusion = true;
  // Fixed ECEF beam target; nadir pointing when empty.
  std::optional<Vec3> beam_target;

  void validate() const;
};

class SensingModel {
 public:
  explicit SensingModel(SensingConfig cfg);

  const SensingConfig& config() const { return cfg_; }
  const std::vector<OrbitalElements>& satellites() const { return sats_; }

  std::vector<EcefVector> sensor_positions(double t) const;
  BeamSpec beam_for(const EcefVector& source) const;

  struct Snapshot {
    std::vector<EcefVector> visible;
    CrlbResult bound;
  };
  // Visible sensors and the CRLB at the source position for time t.
  Snapshot snapshot(const EcefVector& source, double t) const;

  // Estimate at time t, or nullopt when the geometry is unobservable.
  std::optional<CatEstimate> observe(const EcefVector& source, double t, double alpha, Rng& rng) const;

 private:
  SensingConfig cfg_;
  std::vector<OrbitalElements> sats_;
};

}  // namespace catmouse
