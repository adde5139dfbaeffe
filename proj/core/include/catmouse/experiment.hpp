#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <iosfwd>
#include <memory>
#include <string>
#include <vector>

#include "catmouse/config.hpp"
#include "catmouse/controllers.hpp"

namespace catmouse {

// Episode seed for run r under base seed s. Shared by every controller so comparisons are paired.
std::uint64_t episode_seed(std::uint64_t seed, int run);

struct RunRecord {
  std::string controller;
  std::uint64_t seed = 0;
  int run = 0;
  std::uint64_t episode_seed = 0;
  EpisodeMetrics metrics;
  std::string termination;
  double min_cat_distance = 0.0;
  EpisodeLog log;  // kept only when step logs are requested
};

struct SummaryRow {
  std::string controller;
  std::string seed;  // a seed, or "all"
  int runs = 0;
  double mean_reward = 0.0;
  double std_reward = 0.0;
  double ci95 = 0.0;  // half-width, 1.96 * std / sqrt(runs)
  double cutoff_fraction = 0.0;
  double mean_steps = 0.0;
  double mean_within_dtol = 0.0;
  double mean_fuel = 0.0;
  double mean_deviation = 0.0;
};

struct ExperimentResult {
  std::vector<RunRecord> runs;  // ordered by controller, seed, run
  std::vector<SummaryRow> summary;
};

std::unique_ptr<Controller> make_controller(const std::string& name, const ExperimentConfig& cfg,
                                            std::shared_ptr<const PolicyWeights> weights = nullptr);

// Loads the scenario file and policy weights named by cfg into a ready episode config.
// Missing files raise before any run starts.
EpisodeConfig resolve_episode(const ExperimentConfig& cfg);

std::vector<SummaryRow> summarize(const std::vector<RunRecord>& runs);

using ProgressFn = std::function<void(int done, int total)>;
ExperimentResult run_experiment(const ExperimentConfig& cfg, const ProgressFn& progress = {});

void write_summary_csv(std::ostream& out, const std::vector<SummaryRow>& rows);
void write_runs_csv(std::ostream& out, const std::vector<RunRecord>& runs);
void write_step_log_csv(std::ostream& out, const EpisodeLog& log);
// results.csv, runs.csv and, when logs were kept, steps/<controller>_<seed>_<run>.csv.
void write_experiment(const ExperimentResult& result, const std::filesystem::path& dir);

struct CrlbRow {
  int size = 0;
  int epochs = 0;
  Vec3 mean_sigma = Vec3::Zero();             // all epochs, singular ones at the sentinel
  Vec3 mean_sigma_observable = Vec3::Zero();  // observable epochs only; zero when none
  double singular_fraction = 0.0;
  double mean_visible = 0.0;
};

// Emitter on the GEO ring at the given longitude; sensor epochs spread evenly over one day.
std::vector<CrlbRow> crlb_sweep(const std::vector<int>& sizes, int epochs, const SensingConfig& base,
                                double longitude = 0.0, double geo_radius = 42164.0);
void write_crlb_csv(std::ostream& out, const std::vector<CrlbRow>& rows);

}  // namespace catmouse
