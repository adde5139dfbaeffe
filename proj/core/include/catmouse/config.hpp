#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "catmouse/controllers.hpp"
#include "catmouse/env.hpp"
#include "catmouse/guidance.hpp"

namespace catmouse {

struct ExperimentConfig {
  std::string scenario_source = "synthetic";  // synthetic | file
  std::filesystem::path scenario_path;        // cat Hill track CSV when source = file
  std::vector<std::string> controllers{"grs", "dvo"};  // any of rl, grs, dvo, random
  int runs = 100;
  std::vector<std::uint64_t> seeds{1, 2, 3};
  int threads = 1;
  std::filesystem::path output_dir = "results";
  bool write_step_logs = false;

  EpisodeConfig episode;
  GrsConfig grs;
  DvoConfig dvo;
  std::filesystem::path policy_weights;
  bool policy_deterministic = true;

  // crlb-sweep
  std::vector<int> crlb_sizes{30, 60, 100, 150, 200};
  int crlb_epochs = 2000;
  double crlb_longitude = 0.0;  // rad, emitter slot on the GEO ring

  void validate() const;
};

// Parses JSON text. Unknown keys anywhere in the document raise ConfigError naming the key path.
// overrides are "dotted.key=json-value" pairs applied to the document before parsing.
ExperimentConfig parse_config(const std::string& text, const std::vector<std::string>& overrides = {});
ExperimentConfig load_config(const std::filesystem::path& path, const std::vector<std::string>& overrides = {});

// The configuration with every default spelled out, as JSON text.
std::string default_config_json();

}  // namespace catmouse
