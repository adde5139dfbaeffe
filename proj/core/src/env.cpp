#include "catmouse/env.hpp"

#include <algorithm>
#include <cmath>

#include "catmouse/constants.hpp"
#include "catmouse/error.hpp"

namespace catmouse {

void CurriculumSchedule::validate() const {
  for (std::size_t i = 0; i < breakpoints.size(); ++i) {
    const auto& [step, a] = breakpoints[i];
    if (!(a >= 0.0 && a <= 1.0)) throw ConfigError("curriculum alpha must lie in [0, 1]");
    if (i > 0) {
      if (step <= breakpoints[i - 1].first) throw ConfigError("curriculum breakpoints must be sorted by step");
      if (a < breakpoints[i - 1].second) throw ConfigError("curriculum alpha must be non-decreasing");
    }
  }
}

double curriculum_alpha(long long train_step, const CurriculumSchedule& schedule) {
  schedule.validate();
  const auto& bp = schedule.breakpoints;
  if (bp.empty()) return 1.0;
  if (train_step < bp.front().first) return 0.0;
  if (train_step >= bp.back().first) return 1.0;
  for (std::size_t i = 0; i + 1 < bp.size(); ++i) {
    if (train_step < bp[i + 1].first) {
      const double u = static_cast<double>(train_step - bp[i].first) /
                       static_cast<double>(bp[i + 1].first - bp[i].first);
      return bp[i].second + u * (bp[i + 1].second - bp[i].second);
    }
  }
  return 1.0;
}

void SpawnBounds::validate() const {
  if (!(ca_distance_max >= 0.0)) throw ConfigError("spawn ca_distance_max must be non-negative");
  if (!(speed_min >= 0.0 && speed_max >= speed_min)) throw ConfigError("spawn speeds need 0 <= min <= max");
  if (!(t_ca_min_frac >= 0.0 && t_ca_max_frac >= t_ca_min_frac)) {
    throw ConfigError("spawn closest-approach window needs 0 <= min <= max");
  }
  if (!(min_start_distance >= 0.0)) throw ConfigError("spawn min_start_distance must be non-negative");
}

namespace {
Vec3 random_unit(Rng& rng) {
  std::normal_distribution<double> g(0.0, 1.0);
  Vec3 v;
  do {
    v = Vec3(g(rng), g(rng), g(rng));
  } while (v.norm() < 1e-9);
  return v.normalized();
}
}  // namespace

HillState spawn_cat_drift(Rng& rng, const SpawnBounds& bounds, double n, double duration) {
  bounds.validate();
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  HillState start;
  for (int attempt = 0; attempt < 64; ++attempt) {
    const double t_ca =
        duration * (bounds.t_ca_min_frac + (bounds.t_ca_max_frac - bounds.t_ca_min_frac) * unit(rng));
    HillState ca;
    ca.pos = random_unit(rng) * (bounds.ca_distance_max * std::cbrt(unit(rng)));
    ca.vel = random_unit(rng) * (bounds.speed_min + (bounds.speed_max - bounds.speed_min) * unit(rng));
    start = cw_free_drift(ca, n, -t_ca);
    if (start.pos.norm() >= bounds.min_start_distance) break;
  }
  return start;
}

void EpisodeConfig::validate() const {
  if (!(dt > 0.0)) throw ConfigError("episode dt must be positive");
  if (max_steps < 1) throw ConfigError("episode max_steps must be at least 1");
  if (!(d_tol > 0.0)) throw ConfigError("d_tol must be positive");
  if (!(deviation_cutoff > d_tol)) throw ConfigError("deviation cutoff must exceed d_tol");
  if (!(w_dev >= 0.0)) throw ConfigError("w_dev must be non-negative");
  if (!(alpha >= 0.0)) throw ConfigError("alpha must be non-negative");
  if (history_n < 1) throw ConfigError("history_n must be at least 1");
  if (!(history_decay > 0.0)) throw ConfigError("history_decay must be positive");
  if (!(d_near >= 0.0 && d_far >= d_near)) throw ConfigError("need 0 <= d_near <= d_far");
  if (!(origin_semi_major_axis > constants::kEarthRadius)) throw ConfigError("origin orbit below the surface");
  craft.validate();
  spawn.validate();
  sensing.validate();
  ekf.validate();
  mpc.validate();
  if (cat_track && cat_track->size() < 2) throw ConfigError("cat track needs at least two samples");
}

double EpisodeConfig::fuel_weight() const {
  if (w_fuel > 0.0) return w_fuel;
  return 0.2 / (3.0 * std::max(craft.thrust_limit, 1e-12) * dt);
}

EpisodeMetrics metrics(const EpisodeLog& log) {
  if (log.steps.empty()) throw DomainError("metrics: empty episode log");
  EpisodeMetrics m;
  double dev = 0.0;
  for (const auto& s : log.steps) {
    m.total_reward += s.reward;
    m.total_fuel += s.fuel;
    if (s.cat_distance <= log.d_tol) ++m.steps_within_dtol;
    dev += s.mouse.pos.norm();
  }
  m.steps = static_cast<int>(log.steps.size());
  m.mean_deviation = dev / m.steps;
  return m;
}

Environment::Environment(EpisodeConfig cfg)
    : cfg_((cfg.validate(), std::move(cfg))),
      n_(catmouse::mean_motion(cfg_.origin_semi_major_axis)),
      model_(discrete_matrices(n_, cfg_.dt, cfg_.craft.mass)),
      mpc_(model_, [&] {
        MpcConfig m = cfg_.mpc;
        m.u_lb = m.u_lb.cwiseMax(-cfg_.craft.thrust_limit);
        m.u_ub = m.u_ub.cwiseMin(cfg_.craft.thrust_limit);
        return m;
      }()),
      fuel_model_(model_, std::max(2, cfg_.mpc.horizon)),
      sensing_(cfg_.sensing),
      weights_(recency_weights(cfg_.history_n, cfg_.history_decay)) {
  if (cfg_.cat_track) track_.emplace(cfg_.cat_track->t, cfg_.cat_track->pos);
}

OrbitalElements Environment::origin_at(double t) const {
  return OrbitalElements::make(0.0, 0.0, 0.0, cfg_.origin_semi_major_axis, n_ * t);
}

Vec3 Environment::cat_hill_at(double t) const {
  if (track_) return (*track_)(std::min(track_->t_min() + t, track_->t_max()));
  return cat_.pos;
}

Vec3 Environment::cat_true() const { return cat_hill_at(t_); }

Observation Environment::reset(std::uint64_t seed, std::optional<double> alpha) {
  if (alpha && !(*alpha >= 0.0)) throw DomainError("reset: alpha must be non-negative");
  alpha_ = alpha.value_or(cfg_.alpha);
  rng_ = make_rng(seed, 2);
  Rng spawn_rng = make_rng(seed, 1);
  Rng epoch_rng = make_rng(seed, 3);

  if (track_) {
    const double span = track_->t_max() - track_->t_min();
    max_steps_ = std::min(cfg_.max_steps, static_cast<int>(std::floor(span / cfg_.dt + 1e-9)));
    if (max_steps_ < 1) throw ConfigError("cat track shorter than one step");
  } else {
    max_steps_ = cfg_.max_steps;
    cat_ = spawn_cat_drift(spawn_rng, cfg_.spawn, n_, max_steps_ * cfg_.dt);
  }

  started_ = true;
  done_ = false;
  steps_ = 0;
  t_ = 0.0;
  mouse_ = cfg_.mouse_initial;
  craft_ = cfg_.craft;
  craft_.fuel_used = 0.0;
  goal_ = mouse_.pos;
  plan_.resize(0);
  ekf_.reset();
  raw_history_.clear();
  filtered_history_.clear();
  stale_history_.clear();
  pending_probs_.reset();
  log_ = EpisodeLog{};
  log_.d_tol = cfg_.d_tol;

  std::uniform_real_distribution<double> day(0.0, 86400.0);
  sensor_offset_ = cfg_.randomize_sensor_epoch ? day(epoch_rng) : 0.0;
  const EcefVector cat0 = hill_to_ecef(HillVector(cat_hill_at(0.0)), origin_at(0.0));
  for (int attempt = 0; attempt < 256 && sensing_.snapshot(cat0, sensor_offset_).bound.singular; ++attempt) {
    sensor_offset_ = day(epoch_rng);
  }
  sense(true);
  refresh_observation();
  return obs_;
}

void Environment::sense(bool first) {
  const OrbitalElements origin = origin_at(t_);
  const EcefVector cat = hill_to_ecef(HillVector(cat_hill_at(t_)), origin);
  const auto snap = sensing_.snapshot(cat, t_ + sensor_offset_);
  CatEstimate est;
  if (!snap.bound.singular) {
    est = sample_estimate(cat, snap.bound, alpha_, rng_, t_);
  } else if (first) {
    // No geometry at all: fall back to the sentinel bound so the filter starts uninformed.
    est = sample_estimate(cat, snap.bound, std::max(alpha_, 1e-6), rng_, t_);
    est.stale = true;
  } else {
    est = last_estimate_;
    est.stale = true;
  }

  if (first) {
    const Vec3 r = est.z.v;
    const Vec3 v = std::sqrt(constants::kMu / r.norm()) * Vec3::UnitZ().cross(r).normalized();
    ekf_ = ekf_init(r, v, reference_sigma_for_size(cfg_.sensing.constellation.num_sats), 2e-3, t_);
  } else {
    EkfState s = ekf_predict(*ekf_, cfg_.dt, cfg_.ekf);
    ekf_ = ekf_update(s, est, cfg_.ekf);
  }
  last_estimate_ = est;

  const Vec3 raw = ecef_to_hill(est.z, origin).v;
  const Vec3 filt = ekf_to_hill(*ekf_, origin).v;
  const auto depth = static_cast<std::size_t>(cfg_.history_n);
  if (first) {
    raw_history_.assign(depth, raw);
    filtered_history_.assign(depth, filt);
    stale_history_.assign(depth, true);
    stale_history_.back() = est.stale;
  } else {
    raw_history_.erase(raw_history_.begin());
    raw_history_.push_back(raw);
    filtered_history_.erase(filtered_history_.begin());
    filtered_history_.push_back(filt);
    stale_history_.erase(stale_history_.begin());
    stale_history_.push_back(est.stale);
  }
}

void Environment::refresh_observation() {
  obs_.mouse = mouse_;
  obs_.goal = goal_;
  obs_.history = raw_history_;
  obs_.stale = stale_history_;
}

StepResult Environment::step(const Vec3& action) {
  if (!active()) throw ProtocolError(started_ ? "step after episode end" : "step before reset");
  if (!action.allFinite()) throw DomainError("step: action must be finite");
  const Vec3 goal = mouse_.pos + action;
  const MpcResult plan = mpc_.solve(mouse_, HillVector(goal), plan_.size() ? &plan_ : nullptr);
  plan_ = plan.plan;
  return advance(plan.command.thrust, action, goal);
}

StepResult Environment::step_goal(const Vec3& goal) { return step(goal - mouse_.pos); }

StepResult Environment::step_thrust(const Vec3& thrust) {
  if (!active()) throw ProtocolError(started_ ? "step after episode end" : "step before reset");
  if (!thrust.allFinite()) throw DomainError("step_thrust: thrust must be finite");
  plan_.resize(0);
  return advance(thrust, Vec3::Zero(), goal_);
}

StepResult Environment::advance(const Vec3& thrust_in, const Vec3& action, const Vec3& goal) {
  const Vec3 thrust = craft_.clamp(thrust_in);
  const double fuel = craft_.record(ThrustCommand{thrust, cfg_.dt});
  mouse_ = mpc_.model().apply(mouse_, thrust);
  if (!track_) cat_ = mpc_.model().apply(cat_, Vec3::Zero());
  t_ += cfg_.dt;
  ++steps_;
  goal_ = goal;
  sense(false);
  refresh_observation();

  const Vec3 cat = cat_hill_at(t_);
  const double dist = (cat - mouse_.pos).norm();
  const double dev = mouse_.pos.norm();
  double reward = 0.0;
  if (dist > cfg_.d_tol) reward = std::clamp(1.0 - cfg_.w_dev * dev - cfg_.fuel_weight() * fuel, 0.0, 1.0);

  std::string cause;
  if (!mouse_.finite()) {
    cause = "diverged";
    reward = 0.0;
  } else if (dev > cfg_.deviation_cutoff) {
    cause = "cutoff";
  } else if (steps_ >= max_steps_) {
    cause = "max_steps";
  }
  done_ = !cause.empty();

  StepRecord rec;
  rec.step = steps_;
  rec.t = t_;
  rec.mouse = mouse_;
  rec.cat_true = cat;
  rec.cat_estimate = raw_history_.back();
  rec.cat_filtered = filtered_history_.back();
  rec.stale = stale_history_.back();
  rec.action = action;
  rec.goal = goal;
  rec.thrust = thrust;
  rec.fuel = fuel;
  rec.reward = reward;
  rec.probs = pending_probs_.value_or(ScenarioProbabilities{0.0, 0.0, 0.0});
  rec.alpha = alpha_;
  rec.cat_distance = dist;
  pending_probs_.reset();
  log_.steps.push_back(rec);
  if (done_) log_.termination = cause;

  StepResult out;
  out.obs = obs_;
  out.reward = reward;
  out.done = done_;
  out.info.cat_distance = dist;
  out.info.fuel_step = fuel;
  out.info.fuel_total = craft_.fuel_used;
  out.info.deviation = dev;
  out.info.stale = rec.stale;
  out.info.steps = steps_;
  out.info.t = t_;
  out.info.termination = cause;
  return out;
}

}  // namespace catmouse
