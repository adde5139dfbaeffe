#pragma once

#include <Eigen/Dense>

namespace catmouse {

using Vec3 = Eigen::Vector3d;
// All 3x3 rotations are stored row-major so serialized matrices read in the
// same order they are written.
using Mat3 = Eigen::Matrix<double, 3, 3, Eigen::RowMajor>;

// Near-circular orbit: eccentricity is implicitly zero everywhere.
// Angles in radians, normalized to [0, 2*pi); semi-major axis in km.
struct OrbitalElements {
  double inclination = 0.0;
  double arg_periapsis = 0.0;
  double raan = 0.0;
  double semi_major_axis = 0.0;
  double mean_anomaly = 0.0;
  double epoch = 0.0;  // s, time at which mean_anomaly holds

  // Normalizes the angles and checks a > 0; throws DomainError otherwise.
  static OrbitalElements make(double inclination, double arg_periapsis, double raan,
                              double semi_major_axis, double mean_anomaly, double epoch = 0.0);

  // Same orbit with the mean anomaly replaced (and normalized).
  OrbitalElements with_mean_anomaly(double m) const;
};

// Wraps an angle into [0, 2*pi).
double wrap_two_pi(double angle);

// Position expressed in the Earth-centred frame (treated as inertial, no Earth rotation).
struct EcefVector {
  Vec3 v = Vec3::Zero();
  EcefVector() = default;
  explicit EcefVector(const Vec3& value) : v(value) {}
  EcefVector(double x, double y, double z) : v(x, y, z) {}
};

// Position expressed in the local Hill frame of a reference point:
// x radial (outward), y along-track (direction of motion), z orbit normal.
struct HillVector {
  Vec3 v = Vec3::Zero();
  HillVector() = default;
  explicit HillVector(const Vec3& value) : v(value) {}
  HillVector(double x, double y, double z) : v(x, y, z) {}
};

// Direction cosine matrix taking ECEF coordinates into the orbital (perifocal) frame.
Mat3 rotation_ecef_to_orbital(const OrbitalElements& elems);

// Planar rotation by the mean anomaly taking orbital-frame coordinates into
// the Hill frame of the point at that anomaly.
Mat3 rotation_orbital_to_hill(double mean_anomaly);

// Position of the reference point itself (the Hill origin) in ECEF.
EcefVector hill_origin(const OrbitalElements& origin_elems);

// p_H = R_OH * R_EO * (p_E - p_O)
HillVector ecef_to_hill(const EcefVector& p_ecef, const OrbitalElements& origin_elems);
EcefVector hill_to_ecef(const HillVector& p_hill, const OrbitalElements& origin_elems);

}  // namespace catmouse
