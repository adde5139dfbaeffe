#include "catmouse/config.hpp"

#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include <nlohmann/json.hpp>

#include "catmouse/constants.hpp"
#include "catmouse/error.hpp"

namespace catmouse {

using nlohmann::json;

namespace {

// Reads keys from one JSON object and remembers which were consumed.
class Section {
 public:
  Section(const json& j, std::string path) : j_(j), path_(std::move(path)) {
    if (!j_.is_object()) throw ConfigError("'" + label() + "' must be an object");
  }

  bool has(const std::string& key) const { return j_.contains(key); }

  template <typename T>
  void get(const std::string& key, T& out) {
    if (!j_.contains(key)) return;
    used_.insert(key);
    try {
      out = j_.at(key).get<T>();
    } catch (const json::exception&) {
      throw ConfigError("bad value for '" + full(key) + "'");
    }
  }

  void get_vec3(const std::string& key, Vec3& out) {
    std::vector<double> v;
    if (!j_.contains(key)) return;
    get(key, v);
    if (v.size() != 3) throw ConfigError("'" + full(key) + "' must have 3 entries");
    out = Vec3(v[0], v[1], v[2]);
  }

  Section child(const std::string& key) {
    used_.insert(key);
    static const json empty = json::object();
    return Section(j_.contains(key) ? j_.at(key) : empty, full(key));
  }

  void finish() const {
    for (const auto& [key, value] : j_.items()) {
      if (!used_.count(key)) throw ConfigError("unknown config key '" + full(key) + "'");
    }
  }

 private:
  std::string label() const { return path_.empty() ? "<root>" : path_; }
  std::string full(const std::string& key) const { return path_.empty() ? key : path_ + "." + key; }

  const json& j_;
  std::string path_;
  std::set<std::string> used_;
};

void apply_override(json& doc, const std::string& assignment) {
  const auto eq = assignment.find('=');
  if (eq == std::string::npos || eq == 0) throw ConfigError("override must look like key.path=value: " + assignment);
  const std::string path = assignment.substr(0, eq);
  const std::string text = assignment.substr(eq + 1);
  json value;
  try {
    value = json::parse(text);
  } catch (const json::parse_error&) {
    value = text;
  }
  json* node = &doc;
  std::size_t start = 0;
  while (true) {
    const auto dot = path.find('.', start);
    const std::string key = path.substr(start, dot == std::string::npos ? std::string::npos : dot - start);
    if (key.empty()) throw ConfigError("empty key in override " + assignment);
    if (dot == std::string::npos) {
      (*node)[key] = value;
      break;
    }
    if (!node->contains(key)) (*node)[key] = json::object();
    node = &(*node)[key];
    if (!node->is_object()) throw ConfigError("override path crosses a non-object at '" + key + "'");
    start = dot + 1;
  }
}

std::vector<double> to_vec(const Vec3& v) { return {v.x(), v.y(), v.z()}; }

// Degrees rounded so defaults print as typed.
double deg(double rad) { return std::round(rad / constants::kDegToRad * 1e9) / 1e9; }

json to_json(const ExperimentConfig& c) {
  const auto& e = c.episode;
  json doc;
  doc["scenario"] = {{"source", c.scenario_source}, {"path", c.scenario_path.string()}};
  doc["controllers"] = c.controllers;
  doc["runs"] = c.runs;
  doc["seeds"] = c.seeds;
  doc["threads"] = c.threads;
  doc["output_dir"] = c.output_dir.string();
  doc["write_step_logs"] = c.write_step_logs;
  doc["episode"] = {{"dt", e.dt},
                    {"max_steps", e.max_steps},
                    {"d_tol", e.d_tol},
                    {"deviation_cutoff", e.deviation_cutoff},
                    {"w_dev", e.w_dev},
                    {"w_fuel", e.w_fuel},
                    {"alpha", e.alpha},
                    {"history_n", e.history_n},
                    {"history_decay", e.history_decay},
                    {"d_near", e.d_near},
                    {"d_far", e.d_far},
                    {"origin_semi_major_axis", e.origin_semi_major_axis},
                    {"randomize_sensor_epoch", e.randomize_sensor_epoch},
                    {"mouse_initial", {{"pos", to_vec(e.mouse_initial.pos)}, {"vel", to_vec(e.mouse_initial.vel)}}}};
  doc["craft"] = {{"mass", e.craft.mass}, {"thrust_limit", e.craft.thrust_limit}};
  doc["spawn"] = {{"ca_distance_max", e.spawn.ca_distance_max}, {"speed_min", e.spawn.speed_min},
                  {"speed_max", e.spawn.speed_max},             {"t_ca_min_frac", e.spawn.t_ca_min_frac},
                  {"t_ca_max_frac", e.spawn.t_ca_max_frac},     {"min_start_distance", e.spawn.min_start_distance}};
  const auto& s = e.sensing;
  doc["sensing"] = {{"num_sats", s.constellation.num_sats},
                    {"num_planes", s.constellation.num_planes},
                    {"altitude", s.constellation.altitude},
                    {"phasing", s.constellation.phasing},
                    {"beam_half_angle_deg", deg(s.beam_half_angle)},
                    {"sigma_d", s.sigma_d},
                    {"earth_occlusion", s.earth_occlusion},
                    {"beam_target", s.beam_target ? json(to_vec(*s.beam_target)) : json(nullptr)}};
  doc["ekf"] = {{"q_pos", e.ekf.q_pos},
                {"q_vel", e.ekf.q_vel},
                {"max_substep", e.ekf.max_substep},
                {"use_estimate_sigma", e.ekf.use_estimate_sigma},
                {"constant_sigma", to_vec(e.ekf.constant_sigma)}};
  doc["mpc"] = {{"horizon", e.mpc.horizon},
                {"q_pos", to_vec(e.mpc.Q.diagonal().head<3>())},
                {"q_vel", to_vec(e.mpc.Q.diagonal().tail<3>())},
                {"r", to_vec(e.mpc.R.diagonal())},
                {"u_lb", to_vec(e.mpc.u_lb)},
                {"u_ub", to_vec(e.mpc.u_ub)},
                {"max_iterations", e.mpc.max_iterations},
                {"tolerance", e.mpc.tolerance}};
  doc["grs"] = {{"grid", c.grs.grid},       {"refinement", c.grs.refinement},
                {"tol_deg", deg(c.grs.tol)}, {"d_m", c.grs.d_m},
                {"d_far", c.grs.d_far},     {"w_dev", c.grs.w_dev},
                {"w_fuel", c.grs.w_fuel}};
  doc["dvo"] = {{"miss_distance", c.dvo.miss_distance},
                {"t_fix", c.dvo.t_fix},
                {"angle_tol_deg", deg(c.dvo.angle_tol)},
                {"rings", c.dvo.rings},
                {"per_ring", c.dvo.per_ring},
                {"trigger_distance", c.dvo.trigger_distance}};
  doc["policy"] = {{"weights", c.policy_weights.string()}, {"deterministic", c.policy_deterministic}};
  doc["crlb"] = {{"sizes", c.crlb_sizes},
                 {"epochs", c.crlb_epochs},
                 {"longitude_deg", deg(c.crlb_longitude)}};
  return doc;
}

ExperimentConfig from_json(const json& doc) {
  ExperimentConfig c;
  Section root(doc, "");
  {
    Section s = root.child("scenario");
    s.get("source", c.scenario_source);
    std::string path;
    s.get("path", path);
    c.scenario_path = path;
    s.finish();
  }
  root.get("controllers", c.controllers);
  root.get("runs", c.runs);
  root.get("seeds", c.seeds);
  root.get("threads", c.threads);
  {
    std::string out = c.output_dir.string();
    root.get("output_dir", out);
    c.output_dir = out;
  }
  root.get("write_step_logs", c.write_step_logs);

  auto& e = c.episode;
  {
    Section s = root.child("episode");
    s.get("dt", e.dt);
    s.get("max_steps", e.max_steps);
    s.get("d_tol", e.d_tol);
    s.get("deviation_cutoff", e.deviation_cutoff);
    s.get("w_dev", e.w_dev);
    s.get("w_fuel", e.w_fuel);
    s.get("alpha", e.alpha);
    s.get("history_n", e.history_n);
    s.get("history_decay", e.history_decay);
    s.get("d_near", e.d_near);
    s.get("d_far", e.d_far);
    s.get("origin_semi_major_axis", e.origin_semi_major_axis);
    s.get("randomize_sensor_epoch", e.randomize_sensor_epoch);
    Section m = s.child("mouse_initial");
    m.get_vec3("pos", e.mouse_initial.pos);
    m.get_vec3("vel", e.mouse_initial.vel);
    m.finish();
    s.finish();
  }
  {
    Section s = root.child("craft");
    s.get("mass", e.craft.mass);
    s.get("thrust_limit", e.craft.thrust_limit);
    s.finish();
  }
  {
    Section s = root.child("spawn");
    s.get("ca_distance_max", e.spawn.ca_distance_max);
    s.get("speed_min", e.spawn.speed_min);
    s.get("speed_max", e.spawn.speed_max);
    s.get("t_ca_min_frac", e.spawn.t_ca_min_frac);
    s.get("t_ca_max_frac", e.spawn.t_ca_max_frac);
    s.get("min_start_distance", e.spawn.min_start_distance);
    s.finish();
  }
  {
    Section s = root.child("sensing");
    auto& k = e.sensing.constellation;
    s.get("num_sats", k.num_sats);
    if (s.has("num_sats") && !s.has("num_planes")) k.num_planes = ConstellationConfig::with_size(k.num_sats).num_planes;
    s.get("num_planes", k.num_planes);
    s.get("altitude", k.altitude);
    s.get("phasing", k.phasing);
    double deg = e.sensing.beam_half_angle / constants::kDegToRad;
    s.get("beam_half_angle_deg", deg);
    e.sensing.beam_half_angle = deg * constants::kDegToRad;
    s.get("sigma_d", e.sensing.sigma_d);
    s.get("earth_occlusion", e.sensing.earth_occlusion);
    if (s.has("beam_target")) {
      json raw;
      s.get("beam_target", raw);
      if (raw.is_null()) {
        e.sensing.beam_target.reset();
      } else {
        Vec3 target;
        s.get_vec3("beam_target", target);
        e.sensing.beam_target = target;
      }
    }
    s.finish();
  }
  {
    Section s = root.child("ekf");
    s.get("q_pos", e.ekf.q_pos);
    s.get("q_vel", e.ekf.q_vel);
    s.get("max_substep", e.ekf.max_substep);
    s.get("use_estimate_sigma", e.ekf.use_estimate_sigma);
    s.get_vec3("constant_sigma", e.ekf.constant_sigma);
    s.finish();
  }
  {
    Section s = root.child("mpc");
    s.get("horizon", e.mpc.horizon);
    Vec3 qp = e.mpc.Q.diagonal().head<3>(), qv = e.mpc.Q.diagonal().tail<3>(), r = e.mpc.R.diagonal();
    s.get_vec3("q_pos", qp);
    s.get_vec3("q_vel", qv);
    s.get_vec3("r", r);
    Vec6 qd;
    qd << qp, qv;
    e.mpc.Q = qd.asDiagonal();
    e.mpc.R = r.asDiagonal();
    s.get_vec3("u_lb", e.mpc.u_lb);
    s.get_vec3("u_ub", e.mpc.u_ub);
    s.get("max_iterations", e.mpc.max_iterations);
    s.get("tolerance", e.mpc.tolerance);
    s.finish();
  }
  {
    Section s = root.child("grs");
    s.get("grid", c.grs.grid);
    s.get("refinement", c.grs.refinement);
    double deg = c.grs.tol / constants::kDegToRad;
    s.get("tol_deg", deg);
    c.grs.tol = deg * constants::kDegToRad;
    s.get("d_m", c.grs.d_m);
    s.get("d_far", c.grs.d_far);
    s.get("w_dev", c.grs.w_dev);
    s.get("w_fuel", c.grs.w_fuel);
    s.finish();
  }
  {
    Section s = root.child("dvo");
    s.get("miss_distance", c.dvo.miss_distance);
    s.get("t_fix", c.dvo.t_fix);
    double deg = c.dvo.angle_tol / constants::kDegToRad;
    s.get("angle_tol_deg", deg);
    c.dvo.angle_tol = deg * constants::kDegToRad;
    s.get("rings", c.dvo.rings);
    s.get("per_ring", c.dvo.per_ring);
    s.get("trigger_distance", c.dvo.trigger_distance);
    s.finish();
  }
  {
    Section s = root.child("policy");
    std::string w;
    s.get("weights", w);
    c.policy_weights = w;
    s.get("deterministic", c.policy_deterministic);
    s.finish();
  }
  {
    Section s = root.child("crlb");
    s.get("sizes", c.crlb_sizes);
    s.get("epochs", c.crlb_epochs);
    double deg = c.crlb_longitude / constants::kDegToRad;
    s.get("longitude_deg", deg);
    c.crlb_longitude = deg * constants::kDegToRad;
    s.finish();
  }
  root.finish();
  c.validate();
  return c;
}

}  // namespace

void ExperimentConfig::validate() const {
  if (scenario_source != "synthetic" && scenario_source != "file") {
    throw ConfigError("scenario.source must be 'synthetic' or 'file'");
  }
  if (scenario_source == "file" && scenario_path.empty()) throw ConfigError("scenario.path required for file source");
  for (const auto& name : controllers) {
    if (name != "rl" && name != "grs" && name != "dvo" && name != "random") {
      throw ConfigError("unknown controller '" + name + "'");
    }
    if (name == "rl" && policy_weights.empty()) throw ConfigError("controller 'rl' needs policy.weights");
  }
  if (runs < 1) throw ConfigError("runs must be at least 1");
  if (seeds.empty()) throw ConfigError("seeds must not be empty");
  if (threads < 1) throw ConfigError("threads must be at least 1");
  if (crlb_epochs < 1) throw ConfigError("crlb.epochs must be at least 1");
  for (int s : crlb_sizes) {
    if (s < 1) throw ConfigError("crlb sizes must be positive");
  }
  episode.validate();
  dvo.validate();
}

ExperimentConfig parse_config(const std::string& text, const std::vector<std::string>& overrides) {
  json doc;
  try {
    doc = text.empty() ? json::object() : json::parse(text, nullptr, true, true);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("config is not valid JSON: ") + e.what());
  }
  if (!doc.is_object()) throw ConfigError("config must be a JSON object");
  for (const auto& o : overrides) apply_override(doc, o);
  return from_json(doc);
}

ExperimentConfig load_config(const std::filesystem::path& path, const std::vector<std::string>& overrides) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  ExperimentConfig c = parse_config(ss.str(), overrides);
  const auto base = path.parent_path();
  if (!c.scenario_path.empty() && c.scenario_path.is_relative()) c.scenario_path = base / c.scenario_path;
  if (!c.policy_weights.empty() && c.policy_weights.is_relative()) c.policy_weights = base / c.policy_weights;
  return c;
}

std::string default_config_json() { return to_json(ExperimentConfig{}).dump(2) + "\n"; }

}  // namespace catmouse
