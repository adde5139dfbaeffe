#pragma once

#include <array>
#include <filesystem>
#include <string>
#include <vector>

#include "catmouse/dynamics.hpp"
#include "catmouse/random.hpp"

namespace catmouse {

inline constexpr int kWeightFormatVersion = 1;
inline constexpr double kLogStdMin = -20.0;
inline constexpr double kLogStdMax = 2.0;

// Policy input: mouse state, current goal and the N most recent cat estimates (Hill, km).
struct Observation {
  HillState mouse;
  Vec3 goal = Vec3::Zero();
  std::vector<Vec3> history;     // oldest first
  std::vector<bool> stale;       // one flag per history entry

  // [mouse pos, mouse vel, goal, history...] of length 9 + 3N.
  std::vector<double> flatten() const;
  static std::size_t length(int history_n) { return 9 + 3 * static_cast<std::size_t>(history_n); }
};

struct DenseLayer {
  Eigen::MatrixXd W;  // out x in
  Eigen::VectorXd b;
};

// Gaussian MLP head: ReLU hidden layers, linear output of 6 (mean, log_std),
// actions squashed by tanh and scaled by action_scale.
struct PolicyWeights {
  int version = kWeightFormatVersion;
  std::vector<int> arch;  // input, hidden..., 6
  std::vector<DenseLayer> layers;
  double action_scale = 5.0;  // km
  Eigen::VectorXd obs_mean;
  Eigen::VectorXd obs_std;
  int history_n = 10;

  // Throws FormatError when dims, values or metadata are inconsistent.
  void validate() const;
  int input_size() const { return arch.empty() ? 0 : arch.front(); }

  // Zero-initialized network of the given hidden sizes.
  static PolicyWeights zeros(int history_n, const std::vector<int>& hidden, double action_scale = 5.0);
};

PolicyWeights parse_weights(const std::string& text);
PolicyWeights load_weights(const std::filesystem::path& path);
std::string serialize_weights(const PolicyWeights& w);
void save_weights(const PolicyWeights& w, const std::filesystem::path& path);

struct PolicyOutput {
  Vec3 mean = Vec3::Zero();
  Vec3 log_std = Vec3::Zero();  // clamped
};

// Raw network head for an observation vector. Throws FormatError on a layout mismatch.
PolicyOutput policy_head(const std::vector<double>& obs, const PolicyWeights& w);

// Deterministic: action_scale * tanh(mean). Stochastic: action_scale * tanh(mean + std * eps).
Vec3 policy_forward(const Observation& obs, const PolicyWeights& w, Rng& rng, bool deterministic);
Vec3 policy_forward(const std::vector<double>& obs, const PolicyWeights& w, Rng& rng, bool deterministic);

// Upper tail of the standard normal.
double gaussian_q(double x);

// P(|X| < c) for X ~ N(x, sigma^2 I_3). Throws DomainError for sigma <= 0 or c < 0.
double chi2_noncentral_cdf(double c, const Vec3& x, double sigma);

struct ScenarioProbabilities {
  double p_near = 0.0;
  double p_mid = 0.0;
  double p_far = 1.0;

  std::array<double, 3> as_array() const { return {p_near, p_mid, p_far}; }
};

// Near/mid/far probabilities for one estimate offset from the mouse.
ScenarioProbabilities estimate_probs(const Vec3& offset, double sigma, double d_near, double d_far);

// Normalized exponential weights, newest (last) heaviest: w_j ~ decay^(N-1-j).
std::vector<double> recency_weights(int n, double decay);

// Scalar sigma used by scenario_probs: mean over axes of the sample std of the
// estimate-mouse offsets across the history, floored at sigma_floor.
double history_sigma(const std::vector<Vec3>& history, const Vec3& mouse, double sigma_floor);

// Weighted sum over the history of the per-estimate probabilities.
// Throws DomainError for an empty history or weights that are negative or do not sum to 1.
ScenarioProbabilities scenario_probs(const std::vector<Vec3>& history, const Vec3& mouse, double d_near,
                                     double d_far, const std::vector<double>& weights,
                                     double sigma_floor = 0.01);

enum class Scenario { Near, Mid, Far };
std::string to_string(Scenario s);

struct GatedAction {
  Vec3 action = Vec3::Zero();  // km, change of goal relative to the mouse
  Scenario scenario = Scenario::Far;
};

// Samples the scenario from probs; near -> network action, mid -> zero, far -> -x_mouse.
GatedAction constrained_select(const Observation& obs, const ScenarioProbabilities& probs,
                               const PolicyWeights& weights, Rng& rng, bool deterministic = false);

}  // namespace catmouse
