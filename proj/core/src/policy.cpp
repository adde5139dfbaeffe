#include "catmouse/policy.hpp"

#include <cmath>
#include <fstream>
#include <numeric>
#include <sstream>

#include <nlohmann/json.hpp>

#include "catmouse/constants.hpp"
#include "catmouse/error.hpp"

namespace catmouse {

using nlohmann::json;

std::vector<double> Observation::flatten() const {
  std::vector<double> out;
  out.reserve(9 + 3 * history.size());
  for (int k = 0; k < 3; ++k) out.push_back(mouse.pos(k));
  for (int k = 0; k < 3; ++k) out.push_back(mouse.vel(k));
  for (int k = 0; k < 3; ++k) out.push_back(goal(k));
  for (const auto& h : history) {
    for (int k = 0; k < 3; ++k) out.push_back(h(k));
  }
  return out;
}

void PolicyWeights::validate() const {
  if (version != kWeightFormatVersion) {
    throw FormatError("unsupported weight format version " + std::to_string(version));
  }
  if (arch.size() < 2) throw FormatError("arch needs at least input and output sizes");
  if (arch.back() != 6) throw FormatError("output layer must have 6 units (mean and log-std per axis)");
  if (history_n < 0) throw FormatError("history_n must be non-negative");
  if (static_cast<std::size_t>(arch.front()) != Observation::length(history_n)) {
    throw FormatError("input size " + std::to_string(arch.front()) + " does not match 9 + 3*history_n = " +
                      std::to_string(Observation::length(history_n)));
  }
  if (layers.size() + 1 != arch.size()) throw FormatError("layer count does not match arch");
  for (std::size_t i = 0; i < layers.size(); ++i) {
    const auto& l = layers[i];
    if (l.W.rows() != arch[i + 1] || l.W.cols() != arch[i] || l.b.size() != arch[i + 1]) {
      throw FormatError("layer " + std::to_string(i) + " dims do not chain with arch");
    }
    if (!l.W.allFinite() || !l.b.allFinite()) throw FormatError("non-finite weight in layer " + std::to_string(i));
  }
  if (!(action_scale > 0.0) || !std::isfinite(action_scale)) throw FormatError("action_scale must be positive");
  if (obs_mean.size() != arch.front() || obs_std.size() != arch.front()) {
    throw FormatError("obs_norm mean/std must match the input size");
  }
  if (!obs_mean.allFinite() || !obs_std.allFinite() || (obs_std.array() <= 0.0).any()) {
    throw FormatError("obs_norm std must be positive and finite");
  }
}

PolicyWeights PolicyWeights::zeros(int history_n, const std::vector<int>& hidden, double action_scale) {
  PolicyWeights w;
  w.history_n = history_n;
  w.action_scale = action_scale;
  w.arch.push_back(static_cast<int>(Observation::length(history_n)));
  for (int h : hidden) w.arch.push_back(h);
  w.arch.push_back(6);
  for (std::size_t i = 0; i + 1 < w.arch.size(); ++i) {
    w.layers.push_back(DenseLayer{Eigen::MatrixXd::Zero(w.arch[i + 1], w.arch[i]),
                                  Eigen::VectorXd::Zero(w.arch[i + 1])});
  }
  w.obs_mean = Eigen::VectorXd::Zero(w.arch.front());
  w.obs_std = Eigen::VectorXd::Ones(w.arch.front());
  return w;
}

namespace {

double as_number(const json& j, const std::string& what) {
  if (!j.is_number()) throw FormatError(what + " must be a number");
  return j.get<double>();
}

Eigen::VectorXd as_vector(const json& j, const std::string& what) {
  if (!j.is_array()) throw FormatError(what + " must be an array");
  Eigen::VectorXd v(static_cast<Eigen::Index>(j.size()));
  for (std::size_t i = 0; i < j.size(); ++i) v(static_cast<Eigen::Index>(i)) = as_number(j[i], what);
  return v;
}

// Either a list of rows or a flat row-major list.
Eigen::MatrixXd as_matrix(const json& j, int rows, int cols, const std::string& what) {
  if (!j.is_array()) throw FormatError(what + " must be an array");
  Eigen::MatrixXd m(rows, cols);
  if (!j.empty() && j.front().is_array()) {
    if (j.size() != static_cast<std::size_t>(rows)) throw FormatError(what + " has the wrong number of rows");
    for (int r = 0; r < rows; ++r) {
      const auto& row = j[static_cast<std::size_t>(r)];
      if (!row.is_array() || row.size() != static_cast<std::size_t>(cols)) {
        throw FormatError(what + " row " + std::to_string(r) + " has the wrong length");
      }
      for (int c = 0; c < cols; ++c) m(r, c) = as_number(row[static_cast<std::size_t>(c)], what);
    }
    return m;
  }
  if (j.size() != static_cast<std::size_t>(rows) * static_cast<std::size_t>(cols)) {
    throw FormatError(what + " has the wrong number of entries");
  }
  for (int r = 0; r < rows; ++r) {
    for (int c = 0; c < cols; ++c) {
      m(r, c) = as_number(j[static_cast<std::size_t>(r) * cols + c], what);
    }
  }
  return m;
}

}  // namespace

PolicyWeights parse_weights(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw FormatError(std::string("weight file is not valid JSON: ") + e.what());
  }
  if (!doc.is_object()) throw FormatError("weight file must be a JSON object");
  for (const char* key : {"version", "arch", "weights", "biases", "action_scale", "obs_norm", "history_n"}) {
    if (!doc.contains(key)) throw FormatError(std::string("weight file missing field '") + key + "'");
  }
  PolicyWeights w;
  if (!doc["version"].is_number_integer()) throw FormatError("version must be an integer");
  w.version = doc["version"].get<int>();
  if (w.version != kWeightFormatVersion) {
    throw FormatError("unsupported weight format version " + std::to_string(w.version));
  }
  if (!doc["arch"].is_array()) throw FormatError("arch must be an array");
  for (const auto& d : doc["arch"]) {
    if (!d.is_number_integer() || d.get<int>() <= 0) throw FormatError("arch entries must be positive integers");
    w.arch.push_back(d.get<int>());
  }
  if (w.arch.size() < 2) throw FormatError("arch needs at least input and output sizes");
  const auto& ws = doc["weights"];
  const auto& bs = doc["biases"];
  if (!ws.is_array() || !bs.is_array() || ws.size() != w.arch.size() - 1 || bs.size() != w.arch.size() - 1) {
    throw FormatError("weights and biases need one entry per layer");
  }
  for (std::size_t i = 0; i + 1 < w.arch.size(); ++i) {
    const std::string tag = "layer " + std::to_string(i);
    DenseLayer l;
    l.W = as_matrix(ws[i], w.arch[i + 1], w.arch[i], tag + " weights");
    l.b = as_vector(bs[i], tag + " biases");
    w.layers.push_back(std::move(l));
  }
  w.action_scale = as_number(doc["action_scale"], "action_scale");
  if (!doc["history_n"].is_number_integer()) throw FormatError("history_n must be an integer");
  w.history_n = doc["history_n"].get<int>();
  const auto& norm = doc["obs_norm"];
  if (!norm.is_object() || !norm.contains("mean") || !norm.contains("std")) {
    throw FormatError("obs_norm must be an object with mean and std");
  }
  w.obs_mean = as_vector(norm["mean"], "obs_norm.mean");
  w.obs_std = as_vector(norm["std"], "obs_norm.std");
  w.validate();
  return w;
}

PolicyWeights load_weights(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw FormatError("cannot open weight file " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_weights(ss.str());
}

std::string serialize_weights(const PolicyWeights& w) {
  w.validate();
  json doc;
  doc["version"] = w.version;
  doc["arch"] = w.arch;
  json ws = json::array(), bs = json::array();
  for (const auto& l : w.layers) {
    json rows = json::array();
    for (Eigen::Index r = 0; r < l.W.rows(); ++r) {
      json row = json::array();
      for (Eigen::Index c = 0; c < l.W.cols(); ++c) row.push_back(l.W(r, c));
      rows.push_back(std::move(row));
    }
    ws.push_back(std::move(rows));
    bs.push_back(std::vector<double>(l.b.data(), l.b.data() + l.b.size()));
  }
  doc["weights"] = std::move(ws);
  doc["biases"] = std::move(bs);
  doc["action_scale"] = w.action_scale;
  doc["obs_norm"] = {{"mean", std::vector<double>(w.obs_mean.data(), w.obs_mean.data() + w.obs_mean.size())},
                     {"std", std::vector<double>(w.obs_std.data(), w.obs_std.data() + w.obs_std.size())}};
  doc["history_n"] = w.history_n;
  return doc.dump() + "\n";
}

void save_weights(const PolicyWeights& w, const std::filesystem::path& path) {
  const std::string text = serialize_weights(w);
  std::ofstream out(path);
  if (!out) throw FormatError("cannot write weight file " + path.string());
  out << text;
}

PolicyOutput policy_head(const std::vector<double>& obs, const PolicyWeights& w) {
  if (static_cast<int>(obs.size()) != w.input_size()) {
    throw FormatError("observation length " + std::to_string(obs.size()) + " does not match policy input " +
                      std::to_string(w.input_size()));
  }
  Eigen::VectorXd h = Eigen::Map<const Eigen::VectorXd>(obs.data(), static_cast<Eigen::Index>(obs.size()));
  h = (h - w.obs_mean).cwiseQuotient(w.obs_std);
  for (std::size_t i = 0; i < w.layers.size(); ++i) {
    h = w.layers[i].W * h + w.layers[i].b;
    if (i + 1 < w.layers.size()) h = h.cwiseMax(0.0);
  }
  PolicyOutput out;
  out.mean = h.head<3>();
  out.log_std = h.segment<3>(3).cwiseMax(kLogStdMin).cwiseMin(kLogStdMax);
  return out;
}

Vec3 policy_forward(const std::vector<double>& obs, const PolicyWeights& w, Rng& rng, bool deterministic) {
  const PolicyOutput head = policy_head(obs, w);
  Vec3 pre = head.mean;
  if (!deterministic) {
    std::normal_distribution<double> noise(0.0, 1.0);
    for (int k = 0; k < 3; ++k) pre(k) += std::exp(head.log_std(k)) * noise(rng);
  }
  return w.action_scale * pre.array().tanh().matrix();
}

Vec3 policy_forward(const Observation& obs, const PolicyWeights& w, Rng& rng, bool deterministic) {
  if (static_cast<int>(obs.history.size()) != w.history_n) {
    throw FormatError("observation history depth does not match the weight file");
  }
  return policy_forward(obs.flatten(), w, rng, deterministic);
}

double gaussian_q(double x) { return 0.5 * std::erfc(x / std::sqrt(2.0)); }

double chi2_noncentral_cdf(double c, const Vec3& x, double sigma) {
  if (!(sigma > 0.0)) throw DomainError("chi2_noncentral_cdf: sigma must be positive");
  if (!(c >= 0.0)) throw DomainError("chi2_noncentral_cdf: threshold must be non-negative");
  if (std::isinf(c)) return 1.0;
  const double a = x.norm() / sigma;  // sqrt(lambda)
  const double b = c / sigma;         // sqrt(c_hat)
  const double inv_sqrt_2pi = 1.0 / std::sqrt(constants::kTwoPi);
  // (phi(b-a) - phi(b+a)) / a, written as phi(b) e^{-a^2/2} 2 sinh(ab)/a when a is small
  double density_term;
  const double ab = a * b;
  if (ab < 1e-3) {
    const double sinh_ratio = 2.0 * b * (1.0 + ab * ab / 6.0);
    density_term = inv_sqrt_2pi * std::exp(-0.5 * (b * b + a * a)) * sinh_ratio;
  } else {
    density_term = inv_sqrt_2pi * (std::exp(-0.5 * (b - a) * (b - a)) - std::exp(-0.5 * (b + a) * (b + a))) / a;
  }
  const double survival = gaussian_q(b - a) + gaussian_q(b + a) + density_term;
  return std::clamp(1.0 - survival, 0.0, 1.0);
}

ScenarioProbabilities estimate_probs(const Vec3& offset, double sigma, double d_near, double d_far) {
  if (!(d_near >= 0.0 && d_far >= d_near)) throw DomainError("estimate_probs: need 0 <= d_near <= d_far");
  const double f_near = chi2_noncentral_cdf(d_near, offset, sigma);
  const double f_far = std::max(f_near, chi2_noncentral_cdf(d_far, offset, sigma));
  ScenarioProbabilities p;
  p.p_near = f_near;
  p.p_far = 1.0 - f_far;
  p.p_mid = 1.0 - p.p_near - p.p_far;
  return p;
}

std::vector<double> recency_weights(int n, double decay) {
  if (n <= 0) throw DomainError("recency_weights: n must be positive");
  if (!(decay > 0.0)) throw DomainError("recency_weights: decay must be positive");
  std::vector<double> w(static_cast<std::size_t>(n));
  for (int j = 0; j < n; ++j) w[static_cast<std::size_t>(j)] = std::pow(decay, n - 1 - j);
  const double total = std::accumulate(w.begin(), w.end(), 0.0);
  for (auto& x : w) x /= total;
  return w;
}

double history_sigma(const std::vector<Vec3>& history, const Vec3& mouse, double sigma_floor) {
  if (history.size() < 2) return sigma_floor;
  Vec3 mean = Vec3::Zero();
  for (const auto& h : history) mean += h - mouse;
  mean /= static_cast<double>(history.size());
  Vec3 var = Vec3::Zero();
  for (const auto& h : history) var += (h - mouse - mean).cwiseAbs2();
  var /= static_cast<double>(history.size() - 1);
  return std::max(sigma_floor, var.cwiseSqrt().mean());
}

ScenarioProbabilities scenario_probs(const std::vector<Vec3>& history, const Vec3& mouse, double d_near,
                                     double d_far, const std::vector<double>& weights, double sigma_floor) {
  if (history.empty()) throw DomainError("scenario_probs: empty history");
  if (weights.size() != history.size()) throw DomainError("scenario_probs: one weight per estimate required");
  double total = 0.0;
  for (double w : weights) {
    if (!(w >= 0.0)) throw DomainError("scenario_probs: weights must be non-negative");
    total += w;
  }
  if (std::abs(total - 1.0) > 1e-9) throw DomainError("scenario_probs: weights must sum to 1");
  const double sigma = history_sigma(history, mouse, sigma_floor);
  ScenarioProbabilities out{0.0, 0.0, 0.0};
  for (std::size_t j = 0; j < history.size(); ++j) {
    const auto p = estimate_probs(history[j] - mouse, sigma, d_near, d_far);
    out.p_near += weights[j] * p.p_near;
    out.p_mid += weights[j] * p.p_mid;
    out.p_far += weights[j] * p.p_far;
  }
  return out;
}

std::string to_string(Scenario s) {
  switch (s) {
    case Scenario::Near: return "near";
    case Scenario::Mid: return "mid";
    case Scenario::Far: return "far";
  }
  return "far";
}

GatedAction constrained_select(const Observation& obs, const ScenarioProbabilities& probs,
                               const PolicyWeights& weights, Rng& rng, bool deterministic) {
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const double total = probs.p_near + probs.p_mid + probs.p_far;
  const double u = unit(rng) * total;
  GatedAction out;
  if (u < probs.p_near) {
    out.scenario = Scenario::Near;
    out.action = policy_forward(obs, weights, rng, deterministic);
  } else if (u < probs.p_near + probs.p_mid) {
    out.scenario = Scenario::Mid;
    out.action = Vec3::Zero();
  } else {
    out.scenario = Scenario::Far;
    out.action = -obs.mouse.pos;
  }
  return out;
}

}  // namespace catmouse
