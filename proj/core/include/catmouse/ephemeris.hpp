#pragma once

#include <filesystem>
#include <iosfwd>
#include <memory>
#include <string>
#include <vector>

#include "catmouse/dynamics.hpp"

namespace catmouse {

inline constexpr double kEphemerisStep = 3.0;  // s

struct TleElements {
  double inclination = 0.0;  // rad
  double raan = 0.0;         // rad
  double eccentricity = 0.0;
  double arg_perigee = 0.0;  // rad
  double mean_anomaly = 0.0; // rad
  double mean_motion = 0.0;  // rev/day
  double bstar = 0.0;
};

struct TleRecord {
  std::string name;          // optional title line, empty when absent
  int satellite_id = 0;
  double epoch = 0.0;        // UTC seconds since 1970-01-01
  std::string line1, line2;
  TleElements elements;

  // Circular elements (e ignored) with a from the mean motion; epoch = this->epoch.
  OrbitalElements orbital_elements() const;
};

// Mod-10 checksum of the first 68 characters ('-' counts 1, digits their value).
int tle_checksum(const std::string& line);

// Parses two-line (optionally three-line) element sets. Blank lines are skipped.
// Throws ParseError with the 1-based line number on malformed input or bad checksum.
// Records of one satellite must have strictly increasing epochs.
std::vector<TleRecord> parse_tle(const std::string& text);
std::vector<TleRecord> load_tle(const std::filesystem::path& path);

// Unix seconds for a TLE epoch field (two-digit year, fractional day of year).
double tle_epoch_to_unix(int two_digit_year, double day_of_year);

// Time-indexed ECEF positions.
struct Trajectory {
  std::vector<double> t;
  std::vector<Vec3> pos;

  std::size_t size() const { return t.size(); }
};

struct PropagationSegment {
  double start = 0.0;          // s
  double step = kEphemerisStep;
  std::vector<Vec3> points;    // uniform spacing from start
  double time(std::size_t i) const { return start + step * static_cast<double>(i); }
};

class Propagator {
 public:
  virtual ~Propagator() = default;
  virtual Vec3 position(const TleRecord& rec, double t) const = 0;
};

// Circular Kepler motion from the parsed elements.
class CircularPropagator final : public Propagator {
 public:
  Vec3 position(const TleRecord& rec, double t) const override;
};

// Points at `step` spacing from rec.epoch through the last sample not after `until`.
// Throws DomainError unless until > rec.epoch.
PropagationSegment propagate_segment(const TleRecord& rec, double until, const Propagator& prop,
                                     double step = kEphemerisStep);

// Adds e * i / k to point i of the segment, k being its last index.
void ramp_adjust(PropagationSegment& seg, const Vec3& e);

// Ramps every non-final segment onto the first point of the next one and drops the
// duplicated junction sample. Throws DomainError for overlapping segments.
Trajectory stitch_segments(std::vector<PropagationSegment> segments);

// Propagates each record up to the next record's epoch (the last one up to `until`) and stitches.
Trajectory ephemeris_track(const std::vector<TleRecord>& records, double until, const Propagator& prop,
                           double step = kEphemerisStep);

// Natural cubic spline through (t_i, y_i) per axis.
class CubicSpline3 {
 public:
  CubicSpline3() = default;
  CubicSpline3(std::vector<double> t, std::vector<Vec3> y);
  // Throws DomainError outside [t_front, t_back].
  Vec3 operator()(double t) const;
  double t_min() const { return t_.front(); }
  double t_max() const { return t_.back(); }
  bool empty() const { return t_.empty(); }

 private:
  std::vector<double> t_;
  std::vector<Vec3> y_;
  std::vector<Vec3> m_;  // second derivatives
};

std::vector<Vec3> resample_spline(const Trajectory& traj, const std::vector<double>& timestamps);

// v_i = (x_{i+1} - x_i) / (t_{i+1} - t_i); the last point repeats the previous velocity.
std::vector<Vec3> finite_diff_velocity(const Trajectory& traj);

struct CircularFit {
  OrbitalElements elements;
  bool circular = true;  // false when speed or flight-path angle exceeds tolerance
};

// Circular elements through (r, v): a = |r|, omega = 0, node from r x v, M = argument of latitude.
CircularFit elements_from_state(const Vec3& r, const Vec3& v, double tolerance = 0.01);

struct HillTrack {
  std::vector<double> t;
  std::vector<Vec3> pos;
  std::vector<bool> non_circular;
};

// Cat positions in the Hill frame of the mouse at each common timestamp.
HillTrack relative_hill_track(const Trajectory& mouse, const Trajectory& cat, double tolerance = 0.01);

// Scenario CSV with header t_s,x_km,y_km,z_km.
void write_track_csv(std::ostream& out, const std::vector<double>& t, const std::vector<Vec3>& pos);
void save_track_csv(const std::filesystem::path& path, const std::vector<double>& t, const std::vector<Vec3>& pos);
Trajectory read_track_csv(std::istream& in);
Trajectory load_track_csv(const std::filesystem::path& path);

}  // namespace catmouse
