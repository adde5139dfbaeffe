#include "catmouse/frames.hpp"

#include <cmath>

#include "catmouse/constants.hpp"
#include "catmouse/error.hpp"

namespace catmouse {

double wrap_two_pi(double angle) {
  double wrapped = std::fmod(angle, constants::kTwoPi);
  if (wrapped < 0.0) wrapped += constants::kTwoPi;
  // fmod of a tiny negative number can round back up to exactly 2*pi
  if (wrapped >= constants::kTwoPi) wrapped = 0.0;
  return wrapped;
}

OrbitalElements OrbitalElements::make(double inclination, double arg_periapsis, double raan,
                                      double semi_major_axis, double mean_anomaly, double epoch) {
  if (!(semi_major_axis > 0.0) || !std::isfinite(semi_major_axis)) {
    throw DomainError("semi-major axis must be positive and finite");
  }
  OrbitalElements e;
  e.inclination = wrap_two_pi(inclination);
  e.arg_periapsis = wrap_two_pi(arg_periapsis);
  e.raan = wrap_two_pi(raan);
  e.semi_major_axis = semi_major_axis;
  e.mean_anomaly = wrap_two_pi(mean_anomaly);
  e.epoch = epoch;
  return e;
}

OrbitalElements OrbitalElements::with_mean_anomaly(double m) const {
  OrbitalElements e = *this;
  e.mean_anomaly = wrap_two_pi(m);
  return e;
}

Mat3 rotation_ecef_to_orbital(const OrbitalElements& elems) {
  const double ci = std::cos(elems.inclination), si = std::sin(elems.inclination);
  const double cw = std::cos(elems.arg_periapsis), sw = std::sin(elems.arg_periapsis);
  const double cO = std::cos(elems.raan), sO = std::sin(elems.raan);

  Mat3 r;
  r << cO * cw - sO * ci * sw, sO * cw + cO * ci * sw, si * sw,
      -cO * sw - sO * ci * cw, -sO * sw + cO * ci * cw, si * cw,
      sO * si, -cO * si, ci;
  return r;
}

Mat3 rotation_orbital_to_hill(double mean_anomaly) {
  // Frame rotation by +M about z_o: the point at anomaly M maps to +x (radial)
  // and its velocity to +y (along-track).
  const double c = std::cos(mean_anomaly), s = std::sin(mean_anomaly);
  Mat3 r;
  r << c, s, 0.0,
      -s, c, 0.0,
      0.0, 0.0, 1.0;
  return r;
}

EcefVector hill_origin(const OrbitalElements& origin_elems) {
  const double a = origin_elems.semi_major_axis;
  const Vec3 in_plane(a * std::cos(origin_elems.mean_anomaly), a * std::sin(origin_elems.mean_anomaly),
                      0.0);
  return EcefVector(rotation_ecef_to_orbital(origin_elems).transpose() * in_plane);
}

HillVector ecef_to_hill(const EcefVector& p_ecef, const OrbitalElements& origin_elems) {
  const Mat3 r = rotation_orbital_to_hill(origin_elems.mean_anomaly) *
                 rotation_ecef_to_orbital(origin_elems);
  return HillVector(r * (p_ecef.v - hill_origin(origin_elems).v));
}

EcefVector hill_to_ecef(const HillVector& p_hill, const OrbitalElements& origin_elems) {
  const Mat3 r = rotation_orbital_to_hill(origin_elems.mean_anomaly) *
                 rotation_ecef_to_orbital(origin_elems);
  return EcefVector(hill_origin(origin_elems).v + r.transpose() * p_hill.v);
}

}  // namespace catmouse
