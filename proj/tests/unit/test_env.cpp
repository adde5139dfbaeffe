#include <gtest/gtest.h>

#include <cmath>
#include <memory>

#include "catmouse/constants.hpp"
#include "catmouse/env.hpp"
#include "catmouse/error.hpp"

using namespace catmouse;

namespace {

// Cat parked at a fixed Hill position for the whole episode.
EpisodeConfig parked_cat(const Vec3& where, int max_steps = 20) {
  EpisodeConfig cfg;
  cfg.max_steps = max_steps;
  auto track = std::make_shared<Trajectory>();
  track->t = {0.0, 1.0e6};
  track->pos = {where, where};
  cfg.cat_track = track;
  return cfg;
}

EpisodeConfig short_synthetic(int max_steps = 40) {
  EpisodeConfig cfg;
  cfg.max_steps = max_steps;
  return cfg;
}

}  // namespace

TEST(Curriculum, BeforeFirstBreakpointIsZero) {
  CurriculumSchedule s{{{100, 0.2}, {200, 0.6}, {400, 1.0}}};
  EXPECT_EQ(curriculum_alpha(0, s), 0.0);
  EXPECT_EQ(curriculum_alpha(99, s), 0.0);
}

TEST(Curriculum, AfterLastBreakpointIsOne) {
  CurriculumSchedule s{{{100, 0.2}, {200, 0.6}}};
  EXPECT_EQ(curriculum_alpha(200, s), 1.0);
  EXPECT_EQ(curriculum_alpha(1000000, s), 1.0);
}

TEST(Curriculum, MidpointOfRamp) {
  CurriculumSchedule s{{{100, 0.2}, {200, 0.6}, {400, 1.0}}};
  EXPECT_NEAR(curriculum_alpha(150, s), 0.4, 1e-15);
  EXPECT_NEAR(curriculum_alpha(300, s), 0.8, 1e-15);
  EXPECT_NEAR(curriculum_alpha(100, s), 0.2, 1e-15);
}

TEST(Curriculum, NonDecreasingAndRejectsBadSchedules) {
  CurriculumSchedule s{{{0, 0.0}, {50, 0.5}, {60, 0.5}, {100, 0.9}}};
  double prev = 0.0;
  for (long long k = -10; k < 200; ++k) {
    const double a = curriculum_alpha(k, s);
    EXPECT_GE(a, prev);
    prev = a;
  }
  EXPECT_THROW(curriculum_alpha(0, CurriculumSchedule{{{10, 0.5}, {5, 0.6}}}), ConfigError);
  EXPECT_THROW(curriculum_alpha(0, CurriculumSchedule{{{5, 0.5}, {10, 0.4}}}), ConfigError);
  EXPECT_THROW(curriculum_alpha(0, CurriculumSchedule{{{5, 1.5}}}), ConfigError);
}

TEST(Spawn, SeededSpawnIsReproducible) {
  const double n = mean_motion(42164.0);
  Rng a = make_rng(7, 1), b = make_rng(7, 1);
  const HillState sa = spawn_cat_drift(a, SpawnBounds{}, n, 2000 * 120.0);
  const HillState sb = spawn_cat_drift(b, SpawnBounds{}, n, 2000 * 120.0);
  EXPECT_EQ(sa.stacked(), sb.stacked());
}

TEST(Spawn, HundredSpawnsArePairwiseDistinct) {
  const double n = mean_motion(42164.0);
  const double duration = 200 * 120.0;
  std::vector<std::vector<Vec3>> paths;
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    Rng rng = make_rng(seed, 1);
    const HillState s0 = spawn_cat_drift(rng, SpawnBounds{}, n, duration);
    std::vector<Vec3> path;
    for (int k = 0; k <= 20; ++k) path.push_back(cw_free_drift(s0, n, duration * k / 20.0).pos);
    paths.push_back(path);
  }
  double min_sep = 1e300;
  for (std::size_t i = 0; i < paths.size(); ++i) {
    for (std::size_t j = i + 1; j < paths.size(); ++j) {
      double sep = 0.0;
      for (std::size_t k = 0; k < paths[i].size(); ++k) sep = std::max(sep, (paths[i][k] - paths[j][k]).norm());
      min_sep = std::min(min_sep, sep);
    }
  }
  EXPECT_GT(min_sep, 0.0);
}

TEST(Spawn, ClosestApproachWithinBounds) {
  const double n = mean_motion(42164.0);
  const double duration = 2000 * 120.0;
  SpawnBounds b;
  for (std::uint64_t seed = 0; seed < 30; ++seed) {
    Rng rng = make_rng(seed, 1);
    const HillState s0 = spawn_cat_drift(rng, b, n, duration);
    double best = 1e300;
    for (double t = 0.0; t <= duration * b.t_ca_max_frac + 1.0; t += 10.0) {
      best = std::min(best, cw_free_drift(s0, n, t).pos.norm());
    }
    EXPECT_LE(best, b.ca_distance_max + 0.01);
  }
}

TEST(Spawn, ZeroVelocityRadialOffsetFollowsCwDrift) {
  const double n = mean_motion(42164.0);
  HillState s;
  s.pos = Vec3(1.0, 0.0, 0.0);
  // Closed form: x = 4 - 3 cos(nt), y = 6 (sin(nt) - nt), z = 0.
  for (double t : {600.0, 3600.0, 40000.0}) {
    const double tau = n * t;
    const HillState d = cw_free_drift(s, n, t);
    EXPECT_NEAR(d.pos.x(), 4.0 - 3.0 * std::cos(tau), 1e-9);
    EXPECT_NEAR(d.pos.y(), 6.0 * (std::sin(tau) - tau), 1e-9);
    EXPECT_EQ(d.pos.z(), 0.0);
  }
}

TEST(Env, MouseAtOriginWithCatFarGetsFullReward) {
  Environment env(parked_cat(Vec3(0.0, 30.0, 0.0)));
  env.reset(1);
  const StepResult r = env.step_thrust(Vec3::Zero());
  EXPECT_EQ(r.info.fuel_step, 0.0);
  EXPECT_EQ(env.mouse().pos.norm(), 0.0);
  EXPECT_EQ(r.reward, 1.0);
}

TEST(Env, CatWithinTolGivesZeroReward) {
  Environment env(parked_cat(Vec3(0.0, 5.0, 0.0)));
  env.reset(1);
  EXPECT_EQ(env.step_thrust(Vec3::Zero()).reward, 0.0);
  EXPECT_EQ(env.step_thrust(Vec3(1.0, -1.0, 0.5)).reward, 0.0);
  EXPECT_EQ(env.step(Vec3(3.0, 0.0, 0.0)).reward, 0.0);
}

TEST(Env, RewardFollowsDeviationAndFuelPenalty) {
  EpisodeConfig cfg = parked_cat(Vec3(0.0, 45.0, 0.0));
  Environment env(cfg);
  env.reset(3);
  const StepResult r = env.step_thrust(Vec3(0.5, 0.0, -0.25));
  const double fuel = 0.75 * cfg.dt;
  EXPECT_DOUBLE_EQ(r.info.fuel_step, fuel);
  const double expected = 1.0 - cfg.w_dev * env.mouse().pos.norm() - cfg.fuel_weight() * fuel;
  EXPECT_NEAR(r.reward, std::clamp(expected, 0.0, 1.0), 1e-15);
  // A maximum-thrust step on all three axes costs about 0.2.
  EXPECT_NEAR(cfg.fuel_weight() * 3.0 * cfg.craft.thrust_limit * cfg.dt, 0.2, 1e-12);
}

TEST(Env, DeviationPastCutoffEndsEpisode) {
  EpisodeConfig cfg = parked_cat(Vec3(0.0, -30.0, 0.0));
  cfg.mouse_initial.pos = Vec3(0.0, 51.0, 0.0);
  Environment env(cfg);
  env.reset(1);
  const StepResult r = env.step_thrust(Vec3::Zero());
  EXPECT_TRUE(r.done);
  EXPECT_EQ(r.info.termination, "cutoff");
  EXPECT_EQ(env.log().termination, "cutoff");
  EXPECT_THROW(env.step(Vec3::Zero()), ProtocolError);
  EXPECT_THROW(env.step_thrust(Vec3::Zero()), ProtocolError);
}

TEST(Env, StepBeforeResetThrows) {
  Environment env(short_synthetic());
  EXPECT_THROW(env.step(Vec3::Zero()), ProtocolError);
}

TEST(Env, MaxStepsTerminates) {
  Environment env(short_synthetic(5));
  env.reset(2);
  StepResult r;
  for (int k = 0; k < 5; ++k) r = env.step(Vec3::Zero());
  EXPECT_TRUE(r.done);
  EXPECT_EQ(r.info.termination, "max_steps");
  EXPECT_EQ(env.log().steps.size(), 5u);
}

TEST(Env, ReplayLengthCapsEpisode) {
  EpisodeConfig cfg;
  auto track = std::make_shared<Trajectory>();
  track->t = {0.0, 600.0};
  track->pos = {Vec3(30.0, 0.0, 0.0), Vec3(30.0, 1.0, 0.0)};
  cfg.cat_track = track;
  Environment env(cfg);
  env.reset(0);
  int steps = 0;
  while (env.active()) {
    env.step(Vec3::Zero());
    ++steps;
  }
  EXPECT_EQ(steps, 5);
}

TEST(Env, RewardBoundedAndTotalBelowSteps) {
  Environment env(short_synthetic(120));
  for (std::uint64_t seed = 0; seed < 3; ++seed) {
    env.reset(seed);
    Rng rng = make_rng(seed, 99);
    std::uniform_real_distribution<double> u(-15.0, 15.0);
    while (env.active()) {
      const StepResult r = env.step(Vec3(u(rng), u(rng), u(rng)));
      EXPECT_GE(r.reward, 0.0);
      EXPECT_LE(r.reward, 1.0);
    }
    const EpisodeMetrics m = metrics(env.log());
    EXPECT_LE(m.total_reward, static_cast<double>(m.steps));
  }
}

TEST(Env, IdenticalSeedGivesIdenticalLog) {
  Environment a(short_synthetic(60)), b(short_synthetic(60));
  a.reset(11);
  b.reset(11);
  while (a.active()) {
    const Vec3 act(1.0, -2.0, 0.5);
    a.step(act);
    b.step(act);
  }
  ASSERT_EQ(a.log().steps.size(), b.log().steps.size());
  for (std::size_t i = 0; i < a.log().steps.size(); ++i) {
    const auto& x = a.log().steps[i];
    const auto& y = b.log().steps[i];
    EXPECT_EQ(x.mouse.stacked(), y.mouse.stacked());
    EXPECT_EQ(x.cat_true, y.cat_true);
    EXPECT_EQ(x.cat_estimate, y.cat_estimate);
    EXPECT_EQ(x.cat_filtered, y.cat_filtered);
    EXPECT_EQ(x.thrust, y.thrust);
    EXPECT_EQ(x.reward, y.reward);
  }
}

TEST(Env, ObservationCarriesEstimatesNotTruth) {
  Environment env(short_synthetic(30));
  env.reset(4, 1.0);
  for (int k = 0; k < 30 && env.active(); ++k) {
    const StepResult r = env.step(Vec3::Zero());
    const Vec3 truth = env.cat_true();
    ASSERT_EQ(r.obs.history.size(), 10u);
    for (const Vec3& h : r.obs.history) EXPECT_NE(h, truth);
    const auto flat = r.obs.flatten();
    ASSERT_EQ(flat.size(), Observation::length(10));
    for (std::size_t i = 9; i + 2 < flat.size(); i += 3) {
      EXPECT_FALSE(flat[i] == truth.x() && flat[i + 1] == truth.y() && flat[i + 2] == truth.z());
    }
  }
}

TEST(Env, ZeroAlphaObservationIsTruthUpToFrameRoundoff) {
  Environment env(short_synthetic(10));
  env.reset(4, 0.0);
  env.step(Vec3::Zero());
  EXPECT_LT((env.raw_history().back() - env.cat_true()).norm(), 1e-6);
}

TEST(Env, InfoFuelMatchesCraftAccounting) {
  Environment env(short_synthetic(50));
  env.reset(8);
  double sum = 0.0;
  while (env.active()) {
    const StepResult r = env.step(Vec3(5.0, 2.0, -1.0));
    sum += r.info.fuel_step;
    EXPECT_EQ(r.info.fuel_total, env.craft().fuel_used);
    EXPECT_EQ(r.info.fuel_step, env.log().steps.back().fuel);
  }
  EXPECT_NEAR(sum, env.craft().fuel_used, 1e-9 * std::max(1.0, sum));
}

TEST(Env, PlantAndMpcShareTheModel) {
  Environment env(short_synthetic());
  EXPECT_EQ(&env.model(), &env.mpc().model());
}

TEST(Env, ResetRestoresInitialState) {
  Environment env(short_synthetic(20));
  const Observation o1 = env.reset(5);
  env.step(Vec3(4.0, 0.0, 0.0));
  const Observation o2 = env.reset(5);
  EXPECT_EQ(env.steps(), 0);
  EXPECT_EQ(env.craft().fuel_used, 0.0);
  EXPECT_EQ(o1.flatten(), o2.flatten());
}

TEST(Env, HistoryStartsFilledAndShifts) {
  Environment env(short_synthetic(20));
  const Observation o = env.reset(6);
  ASSERT_EQ(o.history.size(), 10u);
  for (const Vec3& h : o.history) EXPECT_EQ(h, o.history.back());
  const Vec3 first = o.history.back();
  const StepResult r = env.step(Vec3::Zero());
  EXPECT_EQ(r.obs.history[8], first);
}

TEST(Env, InvalidConfigRejected) {
  EpisodeConfig cfg;
  cfg.d_tol = 0.0;
  EXPECT_THROW(Environment{cfg}, ConfigError);
  cfg = EpisodeConfig{};
  cfg.deviation_cutoff = 10.0;
  EXPECT_THROW(Environment{cfg}, ConfigError);
  cfg = EpisodeConfig{};
  EXPECT_THROW(Environment(cfg).reset(0, -1.0), DomainError);
}

TEST(Metrics, SingleFullRewardStep) {
  EpisodeLog log;
  StepRecord s;
  s.reward = 1.0;
  s.cat_distance = 100.0;
  log.steps.push_back(s);
  const EpisodeMetrics m = metrics(log);
  EXPECT_EQ(m.total_reward, 1.0);
  EXPECT_EQ(m.steps_within_dtol, 0);
}

TEST(Metrics, HandSummedLog) {
  EpisodeLog log;
  log.d_tol = 20.0;
  const double rewards[] = {0.5, 0.0, 0.25, 1.0};
  const double fuels[] = {1.0, 2.5, 0.0, 4.0};
  const double dists[] = {30.0, 20.0, 5.0, 40.0};
  const Vec3 pos[] = {Vec3(3, 4, 0), Vec3(0, 0, 2), Vec3(1, 0, 0), Vec3(0, 6, 8)};
  for (int i = 0; i < 4; ++i) {
    StepRecord s;
    s.reward = rewards[i];
    s.fuel = fuels[i];
    s.cat_distance = dists[i];
    s.mouse.pos = pos[i];
    log.steps.push_back(s);
  }
  const EpisodeMetrics m = metrics(log);
  EXPECT_EQ(m.steps, 4);
  EXPECT_DOUBLE_EQ(m.total_reward, 1.75);
  EXPECT_DOUBLE_EQ(m.total_fuel, 7.5);
  EXPECT_EQ(m.steps_within_dtol, 2);
  EXPECT_DOUBLE_EQ(m.mean_deviation, (5.0 + 2.0 + 1.0 + 10.0) / 4.0);
}

TEST(Metrics, RecomputableFromEpisodeRecords) {
  Environment env(short_synthetic(40));
  env.reset(9);
  double total = 0.0;
  while (env.active()) total += env.step(Vec3(0.0, 1.0, 0.0)).reward;
  EXPECT_DOUBLE_EQ(metrics(env.log()).total_reward, total);
  EXPECT_EQ(metrics(env.log()).steps, env.steps());
}

TEST(Metrics, EmptyLogThrows) { EXPECT_THROW(metrics(EpisodeLog{}), DomainError); }
