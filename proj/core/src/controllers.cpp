#include "catmouse/controllers.hpp"

#include <cmath>

#include "catmouse/constants.hpp"
#include "catmouse/error.hpp"

namespace catmouse {

void GrsController::reset(const Environment& env, std::uint64_t) {
  cfg_ = base_;
  const auto& ec = env.config();
  if (!(cfg_.w_dev > 0.0)) cfg_.w_dev = ec.w_dev;
  if (!(cfg_.w_fuel > 0.0)) cfg_.w_fuel = ec.fuel_weight();
  if (!(cfg_.d_far > 0.0)) cfg_.d_far = ec.d_far;
  cfg_.validate();
}

StepResult GrsController::act(Environment& env) {
  const GrsResult r = grs(env.filtered_history(), env.mouse(), env.transfer_fuel(), cfg_);
  return env.step_goal(r.goal.target.v);
}

void DvoConfig::validate() const {
  if (!(miss_distance >= 0.0)) throw ConfigError("dvo miss distance must be non-negative");
  if (!(angle_tol >= 0.0)) throw ConfigError("dvo angle tolerance must be non-negative");
  if (rings < 0 || per_ring < 1) throw ConfigError("dvo sweep grid must be non-empty");
}

void DvoController::reset(const Environment& env, std::uint64_t) {
  t_fix_ = cfg_.t_fix > 0.0 ? cfg_.t_fix : 0.25 * constants::kTwoPi / env.mean_motion();
  trigger_ = cfg_.trigger_distance > 0.0 ? cfg_.trigger_distance : env.config().d_far;
  remaining_.setZero();
  cooldown_until_ = -1.0;
  burns_ = 0;
}

StepResult DvoController::act(Environment& env) {
  const auto& ec = env.config();
  // km/s delivered per newton held over one step
  const double dv_per_newton = ec.dt * 1e-3 / ec.craft.mass;

  if (remaining_.norm() == 0.0 && env.time() >= cooldown_until_) {
    const auto& hist = env.filtered_history();
    Vec3 mean = Vec3::Zero();
    for (const auto& h : hist) mean += h;
    mean /= static_cast<double>(hist.size());
    if ((mean - env.mouse().pos).norm() <= trigger_) {
      const DvoSelection sel = dvo_select(hist, env.mouse().pos, cfg_.miss_distance, t_fix_, env.mean_motion(),
                                          cfg_.angle_tol, cfg_.rings, cfg_.per_ring);
      remaining_ = sel.burn.vector;
      cooldown_until_ = env.time() + t_fix_;
      ++burns_;
    }
  }

  Vec3 thrust = Vec3::Zero();
  if (remaining_.norm() > 0.0) {
    thrust = env.craft().clamp(remaining_ / dv_per_newton);
    remaining_ -= thrust * dv_per_newton;
    // Sub-micro-newton residue is rounding, not an unfinished burn.
    for (int k = 0; k < 3; ++k) {
      if (std::abs(remaining_(k)) < 1e-6 * dv_per_newton) remaining_(k) = 0.0;
    }
  }
  return env.step_thrust(thrust);
}

PolicyController::PolicyController(std::shared_ptr<const PolicyWeights> weights, bool deterministic,
                                   std::optional<ScenarioProbabilities> forced)
    : weights_(std::move(weights)), deterministic_(deterministic), forced_(forced) {
  if (!weights_) throw ConfigError("policy controller needs weights");
  weights_->validate();
}

void PolicyController::reset(const Environment& env, std::uint64_t seed) {
  if (weights_->history_n != env.config().history_n) {
    throw ConfigError("policy history_n does not match the environment");
  }
  rng_ = make_rng(seed, 4);
}

StepResult PolicyController::act(Environment& env) {
  const auto& ec = env.config();
  const ScenarioProbabilities probs =
      forced_ ? *forced_
              : scenario_probs(env.raw_history(), env.mouse().pos, ec.d_near, ec.d_far, env.history_weights());
  const GatedAction gated = constrained_select(env.observation(), probs, *weights_, rng_, deterministic_);
  env.annotate_probs(probs);
  return env.step(gated.action);
}

void RandomController::reset(const Environment&, std::uint64_t seed) { rng_ = make_rng(seed, 5); }

StepResult RandomController::act(Environment& env) {
  std::uniform_real_distribution<double> u(-scale_, scale_);
  const Vec3 a(u(rng_), u(rng_), u(rng_));
  return env.step(a);
}

EpisodeLog run_episode(Environment& env, Controller& controller, std::uint64_t seed, std::optional<double> alpha) {
  env.reset(seed, alpha);
  controller.reset(env, seed);
  while (!env.done()) controller.act(env);
  return env.log();
}

}  // namespace catmouse
