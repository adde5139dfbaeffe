#include "catmouse/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <map>
#include <mutex>
#include <ostream>
#include <thread>

#include "catmouse/constants.hpp"
#include "catmouse/error.hpp"

namespace catmouse {

namespace {

std::string num(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.10g", v);
  return buf;
}

std::ofstream open_out(const std::filesystem::path& p) {
  std::ofstream out(p, std::ios::binary);
  if (!out) throw ConfigError("cannot write " + p.string());
  return out;
}

SummaryRow summarize_group(const std::string& controller, const std::string& seed,
                           const std::vector<const RunRecord*>& group) {
  SummaryRow row;
  row.controller = controller;
  row.seed = seed;
  row.runs = static_cast<int>(group.size());
  if (group.empty()) return row;
  const double count = static_cast<double>(group.size());
  int cutoffs = 0;
  for (const auto* r : group) {
    row.mean_reward += r->metrics.total_reward;
    row.mean_steps += r->metrics.steps;
    row.mean_within_dtol += r->metrics.steps_within_dtol;
    row.mean_fuel += r->metrics.total_fuel;
    row.mean_deviation += r->metrics.mean_deviation;
    if (r->termination == "cutoff") ++cutoffs;
  }
  row.mean_reward /= count;
  row.mean_steps /= count;
  row.mean_within_dtol /= count;
  row.mean_fuel /= count;
  row.mean_deviation /= count;
  row.cutoff_fraction = cutoffs / count;
  if (group.size() > 1) {
    double ss = 0.0;
    for (const auto* r : group) ss += (r->metrics.total_reward - row.mean_reward) * (r->metrics.total_reward - row.mean_reward);
    row.std_reward = std::sqrt(ss / (count - 1.0));
  }
  row.ci95 = 1.96 * row.std_reward / std::sqrt(count);
  return row;
}

}  // namespace

std::uint64_t episode_seed(std::uint64_t seed, int run) {
  return seed * 1000003ULL + static_cast<std::uint64_t>(run);
}

std::unique_ptr<Controller> make_controller(const std::string& name, const ExperimentConfig& cfg,
                                            std::shared_ptr<const PolicyWeights> weights) {
  if (name == "grs") return std::make_unique<GrsController>(cfg.grs);
  if (name == "dvo") return std::make_unique<DvoController>(cfg.dvo);
  if (name == "random") return std::make_unique<RandomController>();
  if (name == "rl") {
    if (!weights) throw ConfigError("controller 'rl' needs policy weights");
    return std::make_unique<PolicyController>(std::move(weights), cfg.policy_deterministic);
  }
  throw ConfigError("unknown controller '" + name + "'");
}

EpisodeConfig resolve_episode(const ExperimentConfig& cfg) {
  EpisodeConfig ep = cfg.episode;
  if (cfg.scenario_source == "file") {
    if (!std::filesystem::exists(cfg.scenario_path)) {
      throw ConfigError("scenario file not found: " + cfg.scenario_path.string());
    }
    ep.cat_track = std::make_shared<const Trajectory>(load_track_csv(cfg.scenario_path));
  }
  ep.validate();
  return ep;
}

std::vector<SummaryRow> summarize(const std::vector<RunRecord>& runs) {
  std::vector<std::string> order;
  std::map<std::string, std::vector<const RunRecord*>> by_controller;
  std::map<std::pair<std::string, std::uint64_t>, std::vector<const RunRecord*>> by_seed;
  std::map<std::string, std::vector<std::uint64_t>> seed_order;
  for (const auto& r : runs) {
    if (!by_controller.count(r.controller)) order.push_back(r.controller);
    by_controller[r.controller].push_back(&r);
    auto& group = by_seed[{r.controller, r.seed}];
    if (group.empty()) seed_order[r.controller].push_back(r.seed);
    group.push_back(&r);
  }
  std::vector<SummaryRow> rows;
  for (const auto& name : order) {
    for (auto s : seed_order[name]) rows.push_back(summarize_group(name, std::to_string(s), by_seed[{name, s}]));
    rows.push_back(summarize_group(name, "all", by_controller[name]));
  }
  return rows;
}

ExperimentResult run_experiment(const ExperimentConfig& cfg, const ProgressFn& progress) {
  cfg.validate();
  const EpisodeConfig ep = resolve_episode(cfg);
  std::shared_ptr<const PolicyWeights> weights;
  if (std::find(cfg.controllers.begin(), cfg.controllers.end(), "rl") != cfg.controllers.end()) {
    weights = std::make_shared<const PolicyWeights>(load_weights(cfg.policy_weights));
    if (weights->history_n != ep.history_n) {
      throw ConfigError("policy history_n " + std::to_string(weights->history_n) +
                        " does not match episode.history_n " + std::to_string(ep.history_n));
    }
  }

  ExperimentResult result;
  for (const auto& name : cfg.controllers) {
    for (auto seed : cfg.seeds) {
      for (int run = 0; run < cfg.runs; ++run) {
        RunRecord r;
        r.controller = name;
        r.seed = seed;
        r.run = run;
        r.episode_seed = episode_seed(seed, run);
        result.runs.push_back(std::move(r));
      }
    }
  }

  const int total = static_cast<int>(result.runs.size());
  std::atomic<int> next{0}, finished{0};
  std::mutex progress_mu, error_mu;
  std::exception_ptr error;

  auto worker = [&]() {
    std::map<std::string, std::unique_ptr<Controller>> controllers;
    std::unique_ptr<Environment> env;
    try {
      env = std::make_unique<Environment>(ep);
      while (true) {
        const int i = next.fetch_add(1);
        if (i >= total) break;
        {
          std::lock_guard lock(error_mu);
          if (error) break;
        }
        RunRecord& r = result.runs[static_cast<std::size_t>(i)];
        auto& ctrl = controllers[r.controller];
        if (!ctrl) ctrl = make_controller(r.controller, cfg, weights);
        EpisodeLog log = run_episode(*env, *ctrl, r.episode_seed);
        r.metrics = metrics(log);
        r.termination = log.termination;
        r.min_cat_distance = std::numeric_limits<double>::infinity();
        for (const auto& s : log.steps) r.min_cat_distance = std::min(r.min_cat_distance, s.cat_distance);
        if (cfg.write_step_logs) r.log = std::move(log);
        const int done = finished.fetch_add(1) + 1;
        if (progress) {
          std::lock_guard lock(progress_mu);
          progress(done, total);
        }
      }
    } catch (...) {
      std::lock_guard lock(error_mu);
      if (!error) error = std::current_exception();
    }
  };

  const int n_threads = std::max(1, std::min(cfg.threads, total));
  if (n_threads == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (int k = 0; k < n_threads; ++k) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }
  if (error) std::rethrow_exception(error);
  result.summary = summarize(result.runs);
  return result;
}

void write_summary_csv(std::ostream& out, const std::vector<SummaryRow>& rows) {
  out << "controller,seed,runs,mean_reward,std_reward,ci95,cutoff_fraction,mean_steps,mean_within_dtol,"
         "mean_fuel_Ns,mean_deviation_km\n";
  for (const auto& r : rows) {
    out << r.controller << ',' << r.seed << ',' << r.runs << ',' << num(r.mean_reward) << ','
        << num(r.std_reward) << ',' << num(r.ci95) << ',' << num(r.cutoff_fraction) << ','
        << num(r.mean_steps) << ',' << num(r.mean_within_dtol) << ',' << num(r.mean_fuel) << ','
        << num(r.mean_deviation) << '\n';
  }
}

void write_runs_csv(std::ostream& out, const std::vector<RunRecord>& runs) {
  out << "controller,seed,run,episode_seed,total_reward,steps,steps_within_dtol,total_fuel_Ns,"
         "mean_deviation_km,min_cat_distance_km,termination\n";
  for (const auto& r : runs) {
    out << r.controller << ',' << r.seed << ',' << r.run << ',' << r.episode_seed << ','
        << num(r.metrics.total_reward) << ',' << r.metrics.steps << ',' << r.metrics.steps_within_dtol << ','
        << num(r.metrics.total_fuel) << ',' << num(r.metrics.mean_deviation) << ','
        << num(r.min_cat_distance) << ',' << r.termination << '\n';
  }
}

void write_step_log_csv(std::ostream& out, const EpisodeLog& log) {
  out << "step,t_s,mouse_x,mouse_y,mouse_z,cat_x,cat_y,cat_z,est_x,est_y,est_z,filt_x,filt_y,filt_z,stale,"
         "goal_x,goal_y,goal_z,thrust_x,thrust_y,thrust_z,fuel_Ns,reward,p_near,p_mid,p_far,alpha,"
         "cat_distance_km\n";
  auto vec = [&](const Vec3& v) { out << num(v.x()) << ',' << num(v.y()) << ',' << num(v.z()) << ','; };
  for (const auto& s : log.steps) {
    out << s.step << ',' << num(s.t) << ',';
    vec(s.mouse.pos);
    vec(s.cat_true);
    vec(s.cat_estimate);
    vec(s.cat_filtered);
    out << (s.stale ? 1 : 0) << ',';
    vec(s.goal);
    vec(s.thrust);
    out << num(s.fuel) << ',' << num(s.reward) << ',' << num(s.probs.p_near) << ',' << num(s.probs.p_mid)
        << ',' << num(s.probs.p_far) << ',' << num(s.alpha) << ',' << num(s.cat_distance) << '\n';
  }
}

void write_experiment(const ExperimentResult& result, const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  {
    auto out = open_out(dir / "results.csv");
    write_summary_csv(out, result.summary);
  }
  {
    auto out = open_out(dir / "runs.csv");
    write_runs_csv(out, result.runs);
  }
  bool any_logs = false;
  for (const auto& r : result.runs) any_logs = any_logs || !r.log.steps.empty();
  if (!any_logs) return;
  std::filesystem::create_directories(dir / "steps");
  for (const auto& r : result.runs) {
    if (r.log.steps.empty()) continue;
    auto out = open_out(dir / "steps" /
                        (r.controller + "_" + std::to_string(r.seed) + "_" + std::to_string(r.run) + ".csv"));
    write_step_log_csv(out, r.log);
  }
}

std::vector<CrlbRow> crlb_sweep(const std::vector<int>& sizes, int epochs, const SensingConfig& base,
                                double longitude, double geo_radius) {
  if (epochs < 1) throw DomainError("crlb_sweep: epochs must be positive");
  const EcefVector emitter(Vec3(geo_radius * std::cos(longitude), geo_radius * std::sin(longitude), 0.0));
  std::vector<CrlbRow> rows;
  for (int size : sizes) {
    SensingConfig sc = base;
    const auto shape = ConstellationConfig::with_size(size);
    sc.constellation.num_sats = shape.num_sats;
    sc.constellation.num_planes = shape.num_planes;
    sc.constellation.epoch_offset = 0.0;
    const SensingModel model(sc);

    CrlbRow row;
    row.size = size;
    row.epochs = epochs;
    int observable = 0;
    double visible = 0.0;
    for (int k = 0; k < epochs; ++k) {
      const double t = constants::kSecondsPerDay * k / epochs;
      const auto snap = model.snapshot(emitter, t);
      const Vec3 sigma = snap.bound.sigma();
      row.mean_sigma += sigma;
      visible += static_cast<double>(snap.visible.size());
      if (!snap.bound.singular) {
        row.mean_sigma_observable += sigma;
        ++observable;
      }
    }
    row.mean_sigma /= epochs;
    if (observable > 0) row.mean_sigma_observable /= observable;
    row.singular_fraction = static_cast<double>(epochs - observable) / epochs;
    row.mean_visible = visible / epochs;
    rows.push_back(row);
  }
  return rows;
}

void write_crlb_csv(std::ostream& out, const std::vector<CrlbRow>& rows) {
  out << "num_sats,epochs,sigma_x_km,sigma_y_km,sigma_z_km,obs_sigma_x_km,obs_sigma_y_km,obs_sigma_z_km,"
         "singular_fraction,mean_visible\n";
  for (const auto& r : rows) {
    out << r.size << ',' << r.epochs << ',' << num(r.mean_sigma.x()) << ',' << num(r.mean_sigma.y()) << ','
        << num(r.mean_sigma.z()) << ',' << num(r.mean_sigma_observable.x()) << ','
        << num(r.mean_sigma_observable.y()) << ',' << num(r.mean_sigma_observable.z()) << ','
        << num(r.singular_fraction) << ',' << num(r.mean_visible) << '\n';
  }
}

}  // namespace catmouse
