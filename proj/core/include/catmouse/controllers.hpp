#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string>

#include "catmouse/env.hpp"
#include "catmouse/guidance.hpp"
#include "catmouse/policy.hpp"

namespace catmouse {

class Controller {
 public:
  virtual ~Controller() = default;
  virtual std::string name() const = 0;
  virtual void reset(const Environment& env, std::uint64_t seed) = 0;
  // Chooses a command and advances the environment one step.
  virtual StepResult act(Environment& env) = 0;
};

// Greedy recursive search on the filtered history, tracked by the MPC.
class GrsController final : public Controller {
 public:
  // Non-positive w_dev / w_fuel / d_far are taken from the environment at reset.
  explicit GrsController(GrsConfig cfg = {}) : base_(cfg), cfg_(cfg) {}
  std::string name() const override { return "grs"; }
  void reset(const Environment& env, std::uint64_t seed) override;
  StepResult act(Environment& env) override;

 private:
  GrsConfig base_, cfg_;
};

struct DvoConfig {
  double miss_distance = 25.0;           // km, D
  double t_fix = 0.0;                    // s; <= 0 selects a quarter orbital period
  double angle_tol = 15.0 * 3.14159265358979323846 / 180.0;
  int rings = 6;
  int per_ring = 16;
  double trigger_distance = 0.0;         // km; <= 0 selects the environment's d_far

  void validate() const;
};

// Single-burn avoidance: when the filtered cat comes within the trigger distance,
// executes the minimum |dV| burn at saturated thrust, then drifts for t_fix.
class DvoController final : public Controller {
 public:
  explicit DvoController(DvoConfig cfg = {}) : cfg_(cfg) { cfg_.validate(); }
  std::string name() const override { return "dvo"; }
  void reset(const Environment& env, std::uint64_t seed) override;
  StepResult act(Environment& env) override;

  int burns() const { return burns_; }

 private:
  DvoConfig cfg_;
  double t_fix_ = 0.0;
  double trigger_ = 0.0;
  Vec3 remaining_ = Vec3::Zero();  // km/s still to deliver
  double cooldown_until_ = -1.0;
  int burns_ = 0;
};

// Scenario-gated neural policy.
class PolicyController final : public Controller {
 public:
  PolicyController(std::shared_ptr<const PolicyWeights> weights, bool deterministic,
                   std::optional<ScenarioProbabilities> forced = std::nullopt);
  std::string name() const override { return "rl"; }
  void reset(const Environment& env, std::uint64_t seed) override;
  StepResult act(Environment& env) override;

 private:
  std::shared_ptr<const PolicyWeights> weights_;
  bool deterministic_;
  std::optional<ScenarioProbabilities> forced_;
  Rng rng_;
};

// Uniform random goal changes within +/- scale km per axis.
class RandomController final : public Controller {
 public:
  explicit RandomController(double scale = 5.0) : scale_(scale) {}
  std::string name() const override { return "random"; }
  void reset(const Environment& env, std::uint64_t seed) override;
  StepResult act(Environment& env) override;

 private:
  double scale_;
  Rng rng_;
};

// Resets env with seed and steps the controller until done.
EpisodeLog run_episode(Environment& env, Controller& controller, std::uint64_t seed,
                       std::optional<double> alpha = std::nullopt);

}  // namespace catmouse
