#include <algorithm>
#include <cmath>
#include <csignal>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <map>
#include <memory>

#include "CLI11.hpp"
#include "catmouse/config.hpp"
#include "catmouse/constants.hpp"
#include "catmouse/ephemeris.hpp"
#include "catmouse/error.hpp"
#include "catmouse/experiment.hpp"
#include "catmouse/server.hpp"

using namespace catmouse;

namespace {

EnvServer* g_server = nullptr;

void on_signal(int) {
  if (g_server) g_server->stop();
}

ExperimentConfig config_or_default(const std::string& path, const std::vector<std::string>& sets) {
  return path.empty() ? parse_config("{}", sets) : load_config(path, sets);
}

// One satellite's records from a TLE file; id 0 accepts a file holding a single satellite.
std::vector<TleRecord> satellite_records(const std::string& path, int id) {
  auto all = load_tle(path);
  std::vector<TleRecord> out;
  for (auto& r : all) {
    if (id == 0 || r.satellite_id == id) out.push_back(std::move(r));
  }
  if (out.empty()) throw ConfigError("no TLE records for satellite " + std::to_string(id) + " in " + path);
  if (id == 0) {
    for (const auto& r : out) {
      if (r.satellite_id != out.front().satellite_id) {
        throw ConfigError(path + " holds several satellites; pick one with the matching --*-id option");
      }
    }
  }
  std::stable_sort(out.begin(), out.end(), [](const TleRecord& a, const TleRecord& b) { return a.epoch < b.epoch; });
  return out;
}

std::string fmt(double v, int prec = 4) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", prec, v);
  return buf;
}

std::string join_csv(const std::vector<std::string>& v) {
  std::string s;
  for (const auto& x : v) s += (s.empty() ? "" : ",") + x;
  return s;
}

template <typename T>
std::string json_list(const std::vector<T>& v) {
  std::string s = "[";
  for (std::size_t i = 0; i < v.size(); ++i) s += (i ? "," : "") + std::to_string(v[i]);
  return s + "]";
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"cat & mouse: GEO satellite evasion under RF localization noise"};
  app.require_subcommand(0, 1);
  bool print_default = false;
  app.add_flag("--print-default-config", print_default, "Print the full default configuration as JSON");

  // run
  auto* run = app.add_subcommand("run", "Monte-Carlo experiment over controllers and seeds");
  std::string run_config, run_out;
  std::vector<std::string> run_sets, run_controllers;
  std::vector<std::uint64_t> run_seeds;
  int run_runs = 0, run_threads = 0;
  bool run_steps = false, run_quiet = false;
  run->add_option("--config", run_config, "Experiment config (JSON)")->required()->check(CLI::ExistingFile);
  run->add_option("--set", run_sets, "Override a config key, e.g. --set episode.dt=60");
  run->add_option("--out", run_out, "Output directory (overrides output_dir)");
  run->add_option("--runs", run_runs, "Runs per seed")->check(CLI::PositiveNumber);
  run->add_option("--seeds", run_seeds, "Base seeds")->delimiter(',');
  run->add_option("--controllers", run_controllers, "Controllers: rl, grs, dvo, random")->delimiter(',');
  run->add_option("--threads", run_threads, "Worker threads")->check(CLI::PositiveNumber);
  run->add_flag("--step-logs", run_steps, "Write per-step CSV logs");
  run->add_flag("--quiet", run_quiet, "No progress output");

  // crlb-sweep
  auto* sweep = app.add_subcommand("crlb-sweep", "Mean CRLB sigmas per constellation size");
  std::string sweep_config, sweep_out;
  std::vector<std::string> sweep_sets;
  std::vector<int> sweep_sizes;
  int sweep_epochs = 0;
  double sweep_sigma_d = 0.0, sweep_beam = 0.0;
  sweep->add_option("--config", sweep_config, "Config supplying sensing and crlb defaults")->check(CLI::ExistingFile);
  sweep->add_option("--set", sweep_sets, "Override a config key");
  sweep->add_option("--sizes", sweep_sizes, "Constellation sizes")->delimiter(',');
  sweep->add_option("--epochs", sweep_epochs, "Epochs per size")->check(CLI::PositiveNumber);
  sweep->add_option("--sigma-d", sweep_sigma_d, "TDOA timing sigma (s)")->check(CLI::PositiveNumber);
  sweep->add_option("--beam-deg", sweep_beam, "Beam half-angle (deg)")->check(CLI::Range(0.0, 90.0));
  sweep->add_option("--out", sweep_out, "CSV output path (stdout when absent)");

  // ingest-tle
  auto* ingest = app.add_subcommand("ingest-tle", "Build a scenario CSV from TLEs or ECEF tracks");
  std::string mouse_tle, cat_tle, mouse_ecef, cat_ecef, ingest_out;
  int mouse_id = 0, cat_id = 0;
  double duration = 86400.0, step = kEphemerisStep, tolerance = 0.01;
  auto* g_mouse = ingest->add_option_group("mouse");
  g_mouse->add_option("--mouse", mouse_tle, "Mouse TLE file")->check(CLI::ExistingFile);
  g_mouse->add_option("--mouse-ecef", mouse_ecef, "Mouse ECEF track CSV")->check(CLI::ExistingFile);
  g_mouse->require_option(1);
  auto* g_cat = ingest->add_option_group("cat");
  g_cat->add_option("--cat", cat_tle, "Cat TLE file")->check(CLI::ExistingFile);
  g_cat->add_option("--cat-ecef", cat_ecef, "Cat ECEF track CSV")->check(CLI::ExistingFile);
  g_cat->require_option(1);
  ingest->add_option("--mouse-id", mouse_id, "Mouse satellite number when the file holds several");
  ingest->add_option("--cat-id", cat_id, "Cat satellite number when the file holds several");
  ingest->add_option("--duration", duration, "Seconds after the common start (TLE input)")->check(CLI::PositiveNumber);
  ingest->add_option("--step", step, "Output cadence (s)")->check(CLI::PositiveNumber);
  ingest->add_option("--circular-tol", tolerance, "Relative tolerance of the circular-orbit check");
  ingest->add_option("--out", ingest_out, "Scenario CSV path")->required();

  // serve
  auto* serve = app.add_subcommand("serve", "Environment server for the trainer (newline JSON over TCP)");
  std::string serve_config, host = "127.0.0.1";
  std::vector<std::string> serve_sets;
  int port = 5555;
  serve->add_option("--config", serve_config, "Config supplying episode settings")->check(CLI::ExistingFile);
  serve->add_option("--set", serve_sets, "Override a config key");
  serve->add_option("--host", host, "IPv4 bind address");
  serve->add_option("--port", port, "TCP port, 0 for any free port")->check(CLI::Range(0, 65535));

  // eval-policy
  auto* eval = app.add_subcommand("eval-policy", "Evaluate a policy weight file");
  std::string eval_weights, eval_config, eval_out;
  std::vector<std::string> eval_sets;
  int episodes = 20;
  std::uint64_t eval_seed = 1;
  double eval_alpha = -1.0;
  bool stochastic = false;
  eval->add_option("--weights", eval_weights, "Policy weight file (JSON)")->required()->check(CLI::ExistingFile);
  eval->add_option("--config", eval_config, "Config supplying episode settings")->check(CLI::ExistingFile);
  eval->add_option("--set", eval_sets, "Override a config key");
  eval->add_option("--episodes", episodes, "Episodes")->check(CLI::PositiveNumber);
  eval->add_option("--seed", eval_seed, "Base seed");
  eval->add_option("--alpha", eval_alpha, "Noise multiplier override")->check(CLI::NonNegativeNumber);
  eval->add_flag("--stochastic", stochastic, "Sample actions instead of using the mean");
  eval->add_option("--out", eval_out, "Per-episode CSV path");

  CLI11_PARSE(app, argc, argv);

  try {
    if (print_default) {
      std::cout << default_config_json();
      return 0;
    }
    if (*run) {
      auto cfg = load_config(run_config, run_sets);
      if (!run_out.empty()) cfg.output_dir = run_out;
      if (run_runs > 0) cfg.runs = run_runs;
      if (!run_seeds.empty()) cfg.seeds = run_seeds;
      if (!run_controllers.empty()) cfg.controllers = run_controllers;
      if (run_threads > 0) cfg.threads = run_threads;
      if (run_steps) cfg.write_step_logs = true;
      cfg.validate();
      ProgressFn progress;
      if (!run_quiet) {
        progress = [](int done, int total) {
          if (done == total || done % 10 == 0) std::cerr << "\r" << done << "/" << total << " episodes" << std::flush;
          if (done == total) std::cerr << "\n";
        };
      }
      const auto result = run_experiment(cfg, progress);
      write_experiment(result, cfg.output_dir);
      for (const auto& row : result.summary) {
        if (row.seed != "all") continue;
        std::cout << row.controller << ": reward " << fmt(row.mean_reward, 1) << " +/- " << fmt(row.std_reward, 1)
                  << " (95% CI +/- " << fmt(row.ci95, 1) << "), cutoff " << fmt(100 * row.cutoff_fraction, 1)
                  << "%, fuel " << fmt(row.mean_fuel, 1) << " N*s over " << row.runs << " runs\n";
      }
      std::cout << "wrote " << (cfg.output_dir / "results.csv").string() << "\n";
      return 0;
    }
    if (*sweep) {
      std::vector<std::string> sets = sweep_sets;
      if (!sweep_sizes.empty()) sets.push_back("crlb.sizes=" + json_list(sweep_sizes));
      if (sweep_epochs > 0) sets.push_back("crlb.epochs=" + std::to_string(sweep_epochs));
      if (sweep_sigma_d > 0.0) sets.push_back("sensing.sigma_d=" + std::to_string(sweep_sigma_d));
      if (sweep_beam > 0.0) sets.push_back("sensing.beam_half_angle_deg=" + std::to_string(sweep_beam));
      const auto cfg = config_or_default(sweep_config, sets);
      const auto rows = crlb_sweep(cfg.crlb_sizes, cfg.crlb_epochs, cfg.episode.sensing, cfg.crlb_longitude,
                                   cfg.episode.origin_semi_major_axis);
      if (sweep_out.empty()) {
        write_crlb_csv(std::cout, rows);
      } else {
        std::ofstream out(sweep_out, std::ios::binary);
        if (!out) throw ConfigError("cannot write " + sweep_out);
        write_crlb_csv(out, rows);
        std::cout << "wrote " << sweep_out << "\n";
      }
      return 0;
    }
    if (*ingest) {
      const CircularPropagator prop;
      Trajectory mouse, cat;
      if (!mouse_ecef.empty()) mouse = load_track_csv(mouse_ecef);
      if (!cat_ecef.empty()) cat = load_track_csv(cat_ecef);
      std::vector<TleRecord> mouse_rec, cat_rec;
      if (!mouse_tle.empty()) mouse_rec = satellite_records(mouse_tle, mouse_id);
      if (!cat_tle.empty()) cat_rec = satellite_records(cat_tle, cat_id);

      double start = -1e300;
      if (!mouse_rec.empty()) start = std::max(start, mouse_rec.front().epoch);
      if (!cat_rec.empty()) start = std::max(start, cat_rec.front().epoch);
      if (!mouse.t.empty()) start = std::max(start, mouse.t.front());
      if (!cat.t.empty()) start = std::max(start, cat.t.front());
      const double until = start + duration;
      // Propagated tracks use the output cadence so no resampling error is added.
      auto from_tle = [&](std::vector<TleRecord> recs) {
        return ephemeris_track(recs, until, prop, step);
      };
      if (!mouse_rec.empty()) mouse = from_tle(mouse_rec);
      if (!cat_rec.empty()) cat = from_tle(cat_rec);

      const double t0 = std::max(mouse.t.front(), cat.t.front());
      const double t1 = std::min({mouse.t.back(), cat.t.back(), mouse_ecef.empty() || cat_ecef.empty() ? until : 1e300});
      if (!(t1 > t0)) throw DomainError("mouse and cat tracks do not overlap in time");
      Trajectory m, c;
      for (double t = t0; t <= t1 + 1e-9; t += step) m.t.push_back(t);
      m.pos = resample_spline(mouse, m.t);
      c.t = m.t;
      c.pos = resample_spline(cat, c.t);
      const auto hill = relative_hill_track(m, c, tolerance);
      save_track_csv(ingest_out, hill.t, hill.pos);
      const auto flagged = std::count(hill.non_circular.begin(), hill.non_circular.end(), true);
      double closest = 1e300;
      for (const auto& p : hill.pos) closest = std::min(closest, p.norm());
      std::cout << "wrote " << hill.t.size() << " samples to " << ingest_out << "; closest approach "
                << fmt(closest, 3) << " km";
      if (flagged > 0) std::cout << "; " << flagged << " samples failed the circular-orbit check";
      std::cout << "\n";
      return 0;
    }
    if (*serve) {
      const auto cfg = config_or_default(serve_config, serve_sets);
      EnvServer server(resolve_episode(cfg), host, port);
      const int bound = server.bind();
      g_server = &server;
      std::signal(SIGINT, on_signal);
      std::signal(SIGTERM, on_signal);
      std::cout << "listening on " << host << ":" << bound << std::endl;
      server.serve();
      g_server = nullptr;
      return 0;
    }
    if (*eval) {
      auto cfg = config_or_default(eval_config, eval_sets);
      cfg.controllers = {"rl"};
      cfg.policy_weights = eval_weights;
      cfg.policy_deterministic = !stochastic;
      cfg.runs = episodes;
      cfg.seeds = {eval_seed};
      if (eval_alpha >= 0.0) cfg.episode.alpha = eval_alpha;
      const auto result = run_experiment(cfg);
      const auto& row = result.summary.back();
      std::cout << "rl: reward " << fmt(row.mean_reward, 2) << " +/- " << fmt(row.std_reward, 2) << " (95% CI +/- "
                << fmt(row.ci95, 2) << "), cutoff " << fmt(100 * row.cutoff_fraction, 1) << "% over " << row.runs
                << " episodes\n";
      if (!eval_out.empty()) {
        std::ofstream out(eval_out, std::ios::binary);
        if (!out) throw ConfigError("cannot write " + eval_out);
        write_runs_csv(out, result.runs);
      }
      return 0;
    }
    std::cout << app.help();
    return 0;
  } catch (const ParseError& e) {
    std::cerr << "parse error: " << e.what() << "\n";
    return 2;
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
