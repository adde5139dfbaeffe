#include "catmouse/ephemeris.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>

#include "catmouse/constants.hpp"
#include "catmouse/error.hpp"

namespace catmouse {

namespace {

std::string rstrip(std::string s) {
  while (!s.empty() && (s.back() == '\r' || s.back() == ' ' || s.back() == '\t' || s.back() == '\n')) {
    s.pop_back();
  }
  return s;
}

std::string field(const std::string& line, int first_col, int last_col) {
  return line.substr(static_cast<std::size_t>(first_col - 1), static_cast<std::size_t>(last_col - first_col + 1));
}

double parse_double(const std::string& text, int line_no, const std::string& what) {
  std::string s = text;
  s.erase(std::remove(s.begin(), s.end(), ' '), s.end());
  if (s.empty()) throw ParseError("empty " + what + " field", line_no);
  try {
    std::size_t used = 0;
    const double v = std::stod(s, &used);
    if (used != s.size()) throw ParseError("bad " + what + " field '" + text + "'", line_no);
    return v;
  } catch (const std::logic_error&) {
    throw ParseError("bad " + what + " field '" + text + "'", line_no);
  }
}

int parse_int(const std::string& text, int line_no, const std::string& what) {
  const double v = parse_double(text, line_no, what);
  if (v != std::floor(v)) throw ParseError("bad " + what + " field '" + text + "'", line_no);
  return static_cast<int>(v);
}

// Fields like " 12345-3" meaning 0.12345e-3.
double parse_implied_exponent(const std::string& text, int line_no, const std::string& what) {
  std::string s = text;
  s.erase(std::remove(s.begin(), s.end(), ' '), s.end());
  if (s.empty()) return 0.0;
  double sign = 1.0;
  if (s.front() == '-' || s.front() == '+') {
    if (s.front() == '-') sign = -1.0;
    s.erase(0, 1);
  }
  const auto pos = s.find_last_of("+-");
  if (pos == std::string::npos || pos == 0) {
    return sign * parse_double("0." + s, line_no, what);
  }
  const double mant = parse_double("0." + s.substr(0, pos), line_no, what);
  const int expo = parse_int(s.substr(pos), line_no, what);
  return sign * mant * std::pow(10.0, expo);
}

// Days from 1970-01-01 to the given civil date.
long days_from_civil(long y, unsigned m, unsigned d) {
  y -= m <= 2;
  const long era = (y >= 0 ? y : y - 399) / 400;
  const unsigned yoe = static_cast<unsigned>(y - era * 400);
  const unsigned doy = (153 * (m + (m > 2 ? -3 : 9)) + 2) / 5 + d - 1;
  const unsigned doe = yoe * 365 + yoe / 4 - yoe / 100 + doy;
  return era * 146097 + static_cast<long>(doe) - 719468;
}

void check_line(const std::string& line, char tag, int line_no) {
  if (line.size() != 69) {
    throw ParseError("TLE line must be 69 characters, got " + std::to_string(line.size()), line_no);
  }
  if (line[0] != tag || line[1] != ' ') throw ParseError(std::string("expected TLE line ") + tag, line_no);
  if (!std::isdigit(static_cast<unsigned char>(line[68]))) throw ParseError("missing checksum digit", line_no);
  const int expected = line[68] - '0';
  const int actual = tle_checksum(line);
  if (expected != actual) {
    throw ParseError("checksum mismatch: expected " + std::to_string(expected) + ", computed " +
                         std::to_string(actual),
                     line_no);
  }
}

bool looks_like(const std::string& line, char tag) { return line.size() >= 2 && line[0] == tag && line[1] == ' '; }

}  // namespace

int tle_checksum(const std::string& line) {
  int sum = 0;
  for (std::size_t i = 0; i < std::min<std::size_t>(68, line.size()); ++i) {
    const char c = line[i];
    if (std::isdigit(static_cast<unsigned char>(c))) sum += c - '0';
    else if (c == '-') sum += 1;
  }
  return sum % 10;
}

double tle_epoch_to_unix(int two_digit_year, double day_of_year) {
  const int year = two_digit_year < 57 ? 2000 + two_digit_year : 1900 + two_digit_year;
  return static_cast<double>(days_from_civil(year, 1, 1)) * 86400.0 + (day_of_year - 1.0) * 86400.0;
}

OrbitalElements TleRecord::orbital_elements() const {
  const double n = elements.mean_motion * constants::kTwoPi / 86400.0;
  const double a = std::cbrt(constants::kMu / (n * n));
  return OrbitalElements::make(elements.inclination, elements.arg_perigee, elements.raan, a,
                               elements.mean_anomaly, epoch);
}

std::vector<TleRecord> parse_tle(const std::string& text) {
  std::vector<std::pair<int, std::string>> lines;
  {
    std::istringstream in(text);
    std::string raw;
    int no = 0;
    while (std::getline(in, raw)) {
      ++no;
      std::string s = rstrip(raw);
      if (!s.empty()) lines.emplace_back(no, std::move(s));
    }
  }
  std::vector<TleRecord> out;
  std::map<int, double> last_epoch;
  std::size_t i = 0;
  while (i < lines.size()) {
    TleRecord rec;
    if (!looks_like(lines[i].second, '1')) {
      if (lines[i].second.size() > 24 && !(i + 1 < lines.size() && looks_like(lines[i + 1].second, '1'))) {
        throw ParseError("expected a TLE name or line 1", lines[i].first);
      }
      if (i + 1 >= lines.size()) throw ParseError("name line without element lines", lines[i].first);
      rec.name = lines[i].second;
      if (rec.name.rfind("0 ", 0) == 0) rec.name = rec.name.substr(2);
      ++i;
    }
    if (i + 1 >= lines.size()) throw ParseError("TLE line 1 without line 2", lines[i].first);
    const auto& [n1, l1] = lines[i];
    const auto& [n2, l2] = lines[i + 1];
    check_line(l1, '1', n1);
    check_line(l2, '2', n2);
    rec.line1 = l1;
    rec.line2 = l2;
    rec.satellite_id = parse_int(field(l1, 3, 7), n1, "satellite number");
    if (parse_int(field(l2, 3, 7), n2, "satellite number") != rec.satellite_id) {
      throw ParseError("satellite number differs between lines", n2);
    }
    const int yy = parse_int(field(l1, 19, 20), n1, "epoch year");
    const double doy = parse_double(field(l1, 21, 32), n1, "epoch day");
    if (!(doy >= 1.0 && doy < 367.0)) throw ParseError("epoch day out of range", n1);
    rec.epoch = tle_epoch_to_unix(yy, doy);
    rec.elements.bstar = parse_implied_exponent(field(l1, 54, 61), n1, "bstar");
    rec.elements.inclination = parse_double(field(l2, 9, 16), n2, "inclination") * constants::kDegToRad;
    rec.elements.raan = parse_double(field(l2, 18, 25), n2, "raan") * constants::kDegToRad;
    rec.elements.eccentricity = parse_double("0." + field(l2, 27, 33), n2, "eccentricity");
    rec.elements.arg_perigee = parse_double(field(l2, 35, 42), n2, "argument of perigee") * constants::kDegToRad;
    rec.elements.mean_anomaly = parse_double(field(l2, 44, 51), n2, "mean anomaly") * constants::kDegToRad;
    rec.elements.mean_motion = parse_double(field(l2, 53, 63), n2, "mean motion");
    if (!(rec.elements.mean_motion > 0.0)) throw ParseError("mean motion must be positive", n2);
    const auto it = last_epoch.find(rec.satellite_id);
    if (it != last_epoch.end() && !(rec.epoch > it->second)) {
      throw ParseError("epochs must increase for satellite " + std::to_string(rec.satellite_id), n1);
    }
    last_epoch[rec.satellite_id] = rec.epoch;
    out.push_back(std::move(rec));
    i += 2;
  }
  return out;
}

std::vector<TleRecord> load_tle(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open " + path.string(), 0);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_tle(ss.str());
}

Vec3 CircularPropagator::position(const TleRecord& rec, double t) const {
  return propagate_circular(rec.orbital_elements(), t).pos.v;
}

PropagationSegment propagate_segment(const TleRecord& rec, double until, const Propagator& prop, double step) {
  if (!(until > rec.epoch)) throw DomainError("propagate_segment: until must be after the record epoch");
  if (!(step > 0.0)) throw DomainError("propagate_segment: step must be positive");
  const auto k = static_cast<std::size_t>(std::floor((until - rec.epoch) / step + 1e-9));
  PropagationSegment seg;
  seg.start = rec.epoch;
  seg.step = step;
  seg.points.reserve(k + 1);
  for (std::size_t i = 0; i <= k; ++i) seg.points.push_back(prop.position(rec, seg.time(i)));
  return seg;
}

void ramp_adjust(PropagationSegment& seg, const Vec3& e) {
  if (seg.points.size() < 2) throw DomainError("ramp_adjust: segment needs at least two points");
  const double k = static_cast<double>(seg.points.size() - 1);
  for (std::size_t i = 0; i < seg.points.size(); ++i) {
    seg.points[i] += e * (static_cast<double>(i) * seg.step) / (k * seg.step);
  }
}

Trajectory stitch_segments(std::vector<PropagationSegment> segments) {
  Trajectory out;
  for (std::size_t j = 0; j < segments.size(); ++j) {
    auto& seg = segments[j];
    if (seg.points.size() < 2) throw DomainError("stitch_segments: each segment needs at least two points");
    const bool last = j + 1 == segments.size();
    if (!last) {
      const auto& next = segments[j + 1];
      if (next.start < seg.time(seg.points.size() - 1) - 1e-9) {
        throw DomainError("stitch_segments: segments overlap in time");
      }
      ramp_adjust(seg, next.points.front() - seg.points.back());
    }
    const std::size_t keep = last ? seg.points.size() : seg.points.size() - 1;
    for (std::size_t i = 0; i < keep; ++i) {
      out.t.push_back(seg.time(i));
      out.pos.push_back(seg.points[i]);
    }
  }
  return out;
}

Trajectory ephemeris_track(const std::vector<TleRecord>& records, double until, const Propagator& prop,
                           double step) {
  if (records.empty()) throw DomainError("ephemeris_track: no records");
  std::vector<PropagationSegment> segs;
  for (std::size_t j = 0; j < records.size(); ++j) {
    const double end = j + 1 < records.size() ? records[j + 1].epoch : until;
    segs.push_back(propagate_segment(records[j], end, prop, step));
  }
  return stitch_segments(std::move(segs));
}

CubicSpline3::CubicSpline3(std::vector<double> t, std::vector<Vec3> y) : t_(std::move(t)), y_(std::move(y)) {
  const std::size_t n = t_.size();
  if (n < 2 || y_.size() != n) throw DomainError("spline needs at least two matching knots");
  for (std::size_t i = 1; i < n; ++i) {
    if (!(t_[i] > t_[i - 1])) throw DomainError("spline knots must be strictly increasing");
  }
  m_.assign(n, Vec3::Zero());
  if (n == 2) return;
  // Tridiagonal system for interior second derivatives (natural ends).
  const std::size_t k = n - 2;
  std::vector<double> diag(k), upper(k);
  std::vector<Vec3> rhs(k);
  for (std::size_t i = 1; i + 1 < n; ++i) {
    const double h0 = t_[i] - t_[i - 1], h1 = t_[i + 1] - t_[i];
    diag[i - 1] = 2.0 * (h0 + h1);
    upper[i - 1] = h1;
    rhs[i - 1] = 6.0 * ((y_[i + 1] - y_[i]) / h1 - (y_[i] - y_[i - 1]) / h0);
  }
  for (std::size_t i = 1; i < k; ++i) {
    const double lower = t_[i + 1] - t_[i];  // h of row i, equals upper[i-1]
    const double w = lower / diag[i - 1];
    diag[i] -= w * upper[i - 1];
    rhs[i] -= w * rhs[i - 1];
  }
  m_[k] = rhs[k - 1] / diag[k - 1];
  for (std::size_t i = k - 1; i >= 1; --i) m_[i] = (rhs[i - 1] - upper[i - 1] * m_[i + 1]) / diag[i - 1];
}

Vec3 CubicSpline3::operator()(double t) const {
  if (t_.empty()) throw DomainError("spline is empty");
  if (t < t_.front() || t > t_.back()) throw DomainError("spline query outside the knot span");
  auto it = std::upper_bound(t_.begin(), t_.end(), t);
  std::size_t i = it == t_.begin() ? 0 : static_cast<std::size_t>(it - t_.begin()) - 1;
  if (i >= t_.size() - 1) i = t_.size() - 2;
  const double h = t_[i + 1] - t_[i];
  const double a = (t_[i + 1] - t) / h;
  const double b = (t - t_[i]) / h;
  return a * y_[i] + b * y_[i + 1] + ((a * a * a - a) * m_[i] + (b * b * b - b) * m_[i + 1]) * (h * h / 6.0);
}

std::vector<Vec3> resample_spline(const Trajectory& traj, const std::vector<double>& timestamps) {
  const CubicSpline3 spline(traj.t, traj.pos);
  std::vector<Vec3> out;
  out.reserve(timestamps.size());
  for (double t : timestamps) out.push_back(spline(t));
  return out;
}

std::vector<Vec3> finite_diff_velocity(const Trajectory& traj) {
  const std::size_t n = traj.size();
  if (n < 2 || traj.pos.size() != n) throw DomainError("finite_diff_velocity: need at least two points");
  std::vector<Vec3> v(n);
  for (std::size_t i = 0; i + 1 < n; ++i) {
    const double dt = traj.t[i + 1] - traj.t[i];
    if (!(dt > 0.0)) throw DomainError("finite_diff_velocity: timestamps must increase");
    v[i] = (traj.pos[i + 1] - traj.pos[i]) / dt;
  }
  v[n - 1] = v[n - 2];
  return v;
}

CircularFit elements_from_state(const Vec3& r, const Vec3& v, double tolerance) {
  const double rn = r.norm();
  const Vec3 h = r.cross(v);
  if (!(rn > 0.0) || !(h.norm() > 0.0)) throw DomainError("elements_from_state: degenerate state");
  const Vec3 hhat = h.normalized();
  const double inc = std::acos(std::clamp(hhat.z(), -1.0, 1.0));
  const Vec3 node = Vec3::UnitZ().cross(hhat);
  double raan = 0.0;
  if (node.norm() > 1e-12) raan = std::atan2(node.y(), node.x());
  const Vec3 x_axis(std::cos(raan), std::sin(raan), 0.0);
  const Vec3 y_axis = hhat.cross(x_axis);
  const double u = std::atan2(r.dot(y_axis), r.dot(x_axis));

  CircularFit fit;
  fit.elements = OrbitalElements::make(inc, 0.0, raan, rn, u);
  const double v_circ = std::sqrt(constants::kMu / rn);
  const double speed = v.norm();
  const double radial = speed > 0.0 ? std::abs(r.dot(v)) / (rn * speed) : 0.0;
  fit.circular = std::abs(speed - v_circ) <= tolerance * v_circ && radial <= tolerance;
  return fit;
}

HillTrack relative_hill_track(const Trajectory& mouse, const Trajectory& cat, double tolerance) {
  if (mouse.size() != cat.size() || mouse.size() < 2) {
    throw DomainError("relative_hill_track: trajectories need a common timebase of at least two points");
  }
  for (std::size_t i = 0; i < mouse.size(); ++i) {
    if (std::abs(mouse.t[i] - cat.t[i]) > 1e-6) throw DomainError("relative_hill_track: timestamps differ");
  }
  const auto vel = finite_diff_velocity(mouse);
  HillTrack out;
  out.t = mouse.t;
  out.pos.reserve(mouse.size());
  out.non_circular.reserve(mouse.size());
  for (std::size_t i = 0; i < mouse.size(); ++i) {
    const CircularFit fit = elements_from_state(mouse.pos[i], vel[i], tolerance);
    out.pos.push_back(ecef_to_hill(EcefVector(cat.pos[i]), fit.elements).v);
    out.non_circular.push_back(!fit.circular);
  }
  return out;
}

void write_track_csv(std::ostream& out, const std::vector<double>& t, const std::vector<Vec3>& pos) {
  if (t.size() != pos.size()) throw DomainError("write_track_csv: size mismatch");
  out << "t_s,x_km,y_km,z_km\n";
  char buf[160];
  for (std::size_t i = 0; i < t.size(); ++i) {
    std::snprintf(buf, sizeof(buf), "%.12g,%.12g,%.12g,%.12g\n", t[i], pos[i].x(), pos[i].y(), pos[i].z());
    out << buf;
  }
}

void save_track_csv(const std::filesystem::path& path, const std::vector<double>& t, const std::vector<Vec3>& pos) {
  std::ofstream out(path);
  if (!out) throw ParseError("cannot write " + path.string(), 0);
  write_track_csv(out, t, pos);
}

Trajectory read_track_csv(std::istream& in) {
  std::string line;
  int no = 0;
  if (!std::getline(in, line)) throw ParseError("empty track file", 1);
  ++no;
  if (rstrip(line) != "t_s,x_km,y_km,z_km") throw ParseError("header must be t_s,x_km,y_km,z_km", no);
  Trajectory tr;
  while (std::getline(in, line)) {
    ++no;
    line = rstrip(line);
    if (line.empty()) continue;
    std::array<double, 4> vals{};
    std::size_t start = 0;
    for (int k = 0; k < 4; ++k) {
      const std::size_t comma = line.find(',', start);
      if ((k < 3) == (comma == std::string::npos)) throw ParseError("expected 4 comma-separated values", no);
      const std::string cell = line.substr(start, k < 3 ? comma - start : std::string::npos);
      vals[static_cast<std::size_t>(k)] = parse_double(cell, no, "numeric");
      start = comma + 1;
    }
    if (!tr.t.empty() && !(vals[0] > tr.t.back())) throw ParseError("t_s must be strictly increasing", no);
    tr.t.push_back(vals[0]);
    tr.pos.emplace_back(vals[1], vals[2], vals[3]);
  }
  return tr;
}

Trajectory load_track_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open " + path.string(), 0);
  return read_track_csv(in);
}

}  // namespace catmouse
