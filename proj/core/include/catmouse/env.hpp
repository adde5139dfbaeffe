#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "catmouse/dynamics.hpp"
#include "catmouse/ephemeris.hpp"
#include "catmouse/estimation.hpp"
#include "catmouse/guidance.hpp"
#include "catmouse/policy.hpp"
#include "catmouse/rfsense.hpp"

namespace catmouse {

// (training step, alpha) pairs; alpha is 0 before the first, linear between, 1 after the last.
struct CurriculumSchedule {
  std::vector<std::pair<long long, double>> breakpoints;
  void validate() const;
};

double curriculum_alpha(long long train_step, const CurriculumSchedule& schedule);

struct SpawnBounds {
  double ca_distance_max = 10.0;   // km, closest-approach miss distance
  double speed_min = 0.3e-3;       // km/s, relative speed at closest approach
  double speed_max = 1.5e-3;       // km/s
  double t_ca_min_frac = 0.1;      // of the episode duration
  double t_ca_max_frac = 0.5;
  double min_start_distance = 35.0;  // km, resampled until the cat starts at least this far out

  void validate() const;
};

// Random closest-approach state propagated back to t = 0 under free CW drift.
HillState spawn_cat_drift(Rng& rng, const SpawnBounds& bounds, double n, double duration);

struct EpisodeConfig {
  double dt = 120.0;               // s per decision step
  int max_steps = 2000;
  double d_tol = 20.0;             // km
  double deviation_cutoff = 50.0;  // km
  double w_dev = 1.0 / 50.0;       // per km
  double w_fuel = 0.0;             // per N*s; <= 0 selects 0.2 / (3 thrust_limit dt)
  double alpha = 1.0;              // localization noise multiplier
  int history_n = 10;
  double history_decay = 0.7;
  double d_near = 20.0;            // km
  double d_far = 35.0;             // km
  double origin_semi_major_axis = 42164.0;
  bool randomize_sensor_epoch = true;
  CraftParams craft;
  HillState mouse_initial;
  SpawnBounds spawn;
  SensingConfig sensing;
  EkfConfig ekf;
  MpcConfig mpc;
  // Replayed cat Hill track; synthetic drift when empty.
  std::shared_ptr<const Trajectory> cat_track;

  void validate() const;
  double fuel_weight() const;
};

struct StepRecord {
  int step = 0;
  double t = 0.0;                  // s, after the step
  HillState mouse;
  Vec3 cat_true = Vec3::Zero();
  Vec3 cat_estimate = Vec3::Zero();
  Vec3 cat_filtered = Vec3::Zero();
  bool stale = false;
  Vec3 action = Vec3::Zero();
  Vec3 goal = Vec3::Zero();
  Vec3 thrust = Vec3::Zero();
  double fuel = 0.0;               // N*s used this step
  double reward = 0.0;
  ScenarioProbabilities probs;
  double alpha = 0.0;
  double cat_distance = 0.0;       // true, km
};

struct EpisodeMetrics {
  double total_reward = 0.0;
  int steps = 0;
  int steps_within_dtol = 0;
  double total_fuel = 0.0;
  double mean_deviation = 0.0;
};

struct EpisodeLog {
  std::vector<StepRecord> steps;
  std::string termination;  // "max_steps", "cutoff", "diverged" or empty while running
  double d_tol = 20.0;
};

// Throws DomainError for an empty log.
EpisodeMetrics metrics(const EpisodeLog& log);

struct StepInfo {
  double cat_distance = 0.0;
  double fuel_step = 0.0;
  double fuel_total = 0.0;
  double deviation = 0.0;
  bool stale = false;
  int steps = 0;
  double t = 0.0;
  std::string termination;
};

struct StepResult {
  Observation obs;
  double reward = 0.0;
  bool done = false;
  StepInfo info;
};

class Environment {
 public:
  explicit Environment(EpisodeConfig cfg);

  // Starts an episode. alpha overrides the configured noise multiplier.
  Observation reset(std::uint64_t seed, std::optional<double> alpha = std::nullopt);

  // goal = x_mouse + action, tracked by the MPC.
  StepResult step(const Vec3& action);
  StepResult step_goal(const Vec3& goal);
  // Raw thrust (N), clamped to the craft limit.
  StepResult step_thrust(const Vec3& thrust);

  // Records the probabilities a gated controller used for the next step.
  void annotate_probs(const ScenarioProbabilities& p) { pending_probs_ = p; }

  const EpisodeConfig& config() const { return cfg_; }
  // The plant and the MPC share this one model instance.
  const DiscreteModel& model() const { return mpc_.model(); }
  const MpcSolver& mpc() const { return mpc_; }
  const TransferFuel& transfer_fuel() const { return fuel_model_; }
  double mean_motion() const { return n_; }
  const HillState& mouse() const { return mouse_; }
  const CraftParams& craft() const { return craft_; }
  Vec3 cat_true() const;
  double time() const { return t_; }
  int steps() const { return steps_; }
  bool done() const { return done_; }
  bool active() const { return started_ && !done_; }
  double alpha() const { return alpha_; }
  const Observation& observation() const { return obs_; }
  // Hill positions of the last N estimates, oldest first.
  const std::vector<Vec3>& raw_history() const { return raw_history_; }
  const std::vector<Vec3>& filtered_history() const { return filtered_history_; }
  const std::vector<double>& history_weights() const { return weights_; }
  const EpisodeLog& log() const { return log_; }
  OrbitalElements origin_at(double t) const;

 private:
  StepResult advance(const Vec3& thrust, const Vec3& action, const Vec3& goal);
  void sense(bool first);
  void refresh_observation();
  Vec3 cat_hill_at(double t) const;

  EpisodeConfig cfg_;
  double n_;
  DiscreteModel model_;
  MpcSolver mpc_;
  TransferFuel fuel_model_;
  SensingModel sensing_;
  std::vector<double> weights_;
  std::optional<CubicSpline3> track_;

  Rng rng_;
  bool started_ = false;
  bool done_ = false;
  int steps_ = 0;
  int max_steps_ = 0;
  double t_ = 0.0;
  double alpha_ = 1.0;
  double sensor_offset_ = 0.0;
  HillState mouse_;
  HillState cat_;  // synthetic mode only
  CraftParams craft_;
  Vec3 goal_ = Vec3::Zero();
  Eigen::VectorXd plan_;
  std::optional<EkfState> ekf_;
  CatEstimate last_estimate_;
  std::vector<Vec3> raw_history_, filtered_history_;
  std::vector<bool> stale_history_;
  Observation obs_;
  std::optional<ScenarioProbabilities> pending_probs_;
  EpisodeLog log_;
};

}  // namespace catmouse
