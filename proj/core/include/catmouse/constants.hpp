#pragma once

namespace catmouse::constants {

// Earth gravitational parameter (km^3/s^2)
inline constexpr double kMu = 398600.4418;
// Speed of light (km/s)
inline constexpr double kLightSpeed = 299792.458;
// Equatorial Earth radius used for line-of-sight occlusion (km)
inline constexpr double kEarthRadius = 6378.137;
// Nominal geosynchronous semi-major axis (km)
inline constexpr double kGeoSemiMajorAxis = 42164.0;

inline constexpr double kPi = 3.14159265358979323846;
inline constexpr double kTwoPi = 2.0 * kPi;
inline constexpr double kDegToRad = kPi / 180.0;
inline constexpr double kSecondsPerDay = 86400.0;

}  // namespace catmouse::constants
