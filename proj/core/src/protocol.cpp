#include "catmouse/protocol.hpp"

#include <cmath>

#include <nlohmann/json.hpp>

#include "catmouse/error.hpp"

namespace catmouse {

using nlohmann::json;

namespace {

json info_json(const StepInfo& info, double alpha) {
  return {{"cat_distance", info.cat_distance}, {"fuel_step", info.fuel_step},
          {"fuel_total", info.fuel_total},     {"deviation", info.deviation},
          {"stale", info.stale},               {"steps", info.steps},
          {"t", info.t},                       {"termination", info.termination},
          {"alpha", alpha}};
}

json step_json(const Observation& obs, double reward, bool done, const StepInfo& info, double alpha) {
  return {{"obs", obs.flatten()}, {"reward", reward}, {"done", done}, {"info", info_json(info, alpha)}};
}

Vec3 parse_action(const json& msg) {
  if (!msg.contains("action")) throw FormatError("step needs an 'action' array of 3 numbers");
  const json& a = msg.at("action");
  if (!a.is_array() || a.size() != 3) throw FormatError("'action' must be an array of 3 numbers");
  Vec3 out;
  for (int k = 0; k < 3; ++k) {
    if (!a[static_cast<std::size_t>(k)].is_number()) throw FormatError("'action' entries must be numbers");
    out(k) = a[static_cast<std::size_t>(k)].get<double>();
  }
  if (!out.allFinite()) throw FormatError("'action' entries must be finite");
  return out;
}

}  // namespace

std::string error_reply(const std::string& message) { return json{{"error", message}}.dump(); }

Session::Session(const EpisodeConfig& cfg) : env_(cfg) {}

std::string Session::handle_line(const std::string& line) {
  if (closed_) return error_reply("session closed");
  try {
    json msg;
    try {
      msg = json::parse(line);
    } catch (const json::parse_error&) {
      throw FormatError("message is not valid JSON");
    }
    if (!msg.is_object()) throw FormatError("message must be a JSON object");
    if (!msg.contains("cmd") || !msg.at("cmd").is_string()) throw FormatError("missing string field 'cmd'");
    const std::string cmd = msg.at("cmd").get<std::string>();

    if (cmd == "reset") {
      std::uint64_t seed = 0;
      std::optional<double> alpha;
      if (msg.contains("seed")) {
        const json& s = msg.at("seed");
        if (!s.is_number_unsigned()) {
          throw FormatError("'seed' must be a non-negative integer");
        }
        seed = s.get<std::uint64_t>();
      }
      if (msg.contains("alpha") && !msg.at("alpha").is_null()) {
        if (!msg.at("alpha").is_number()) throw FormatError("'alpha' must be a number");
        const double a = msg.at("alpha").get<double>();
        if (!std::isfinite(a) || a < 0.0) throw FormatError("'alpha' must be finite and non-negative");
        alpha = a;
      }
      const Observation obs = env_.reset(seed, alpha);
      StepInfo info;
      info.cat_distance = (env_.cat_true() - env_.mouse().pos).norm();
      info.deviation = env_.mouse().pos.norm();
      info.stale = !obs.stale.empty() && obs.stale.back();
      info.t = env_.time();
      return step_json(obs, 0.0, false, info, env_.alpha()).dump();
    }
    if (cmd == "step") {
      const Vec3 action = parse_action(msg);
      const StepResult r = env_.step(action);
      return step_json(r.obs, r.reward, r.done, r.info, env_.alpha()).dump();
    }
    if (cmd == "close") {
      closed_ = true;
      return json{{"closed", true}}.dump();
    }
    throw FormatError("unknown cmd '" + cmd + "'");
  } catch (const std::exception& e) {
    return error_reply(e.what());
  }
}

}  // namespace catmouse
