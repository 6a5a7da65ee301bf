#pragma once

// Run configuration for the hgamma command line tool: defaults, a key = value
// or JSON config file, and flag overrides.

#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

namespace hgamma::tools {

struct RunConfig {
  std::string command;
  std::string config_path;
  std::string out_dir = ".";
  std::uint64_t seed = 0;

  int n = 1;
  double radius = 1.5;
  double h = 0.05;
  double kappa = 3.141592653589793;
  std::vector<double> eps_ladder{0.2, 0.1, 0.05};
  double epsilon = 0.0;  // single-eps commands; 0 means the smallest ladder entry

  std::string geometry = "half-space";  // half-space | ball | empty
  int axis = 1;
  double offset = 0.0;
  double ball_radius = 0.6;
  double sigma = 0.5;
  double height = 0.25;
  int z_levels = 4;
  int perimeter_samples = 9;

  std::string method = "all";   // perimeter: surface_integral | smoothed_tv | minkowski | all
  std::string field = "eta1";   // coarea: eta1 | distance
  int levels = 16;
  std::string source = "origin";  // eikonal: origin | plane
  std::vector<double> radii{0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9, 1.0};
  std::vector<double> p{0.0, 0.0, 0.0};
  std::vector<double> q{0.3, 0.0, 0.05};
  int samples = 50;
  int grid = 33;

  bool minimize = false;
  int max_iters = 400;
  double step = 0.9;
  double tolerance = 1e-7;
  int angular_cells = 32;
  bool warm_start = true;
  double init_noise = 0.0;
  bool timing = false;
  std::string format = "pgm";  // field dumps: csv | pgm | both | none

  double single_epsilon() const;
  void validate() const;
};

const std::vector<std::string>& known_commands();
const std::vector<std::string>& known_keys();

// Sets one key from its textual value; throws ConfigError naming `where`.
void apply_setting(RunConfig& cfg, const std::string& key, const std::string& value, const std::string& where);

// key = value lines ('#' comments) or a JSON object when the text starts with '{'.
void apply_config_text(RunConfig& cfg, const std::string& text, const std::string& origin);
void apply_config_file(RunConfig& cfg, const std::string& path);

// Parses argv: a subcommand, --config, then flag overrides.  Throws ConfigError
// with the usage text for unknown subcommands or flags.
RunConfig parse_config(int argc, const char* const* argv);
std::string usage();

nlohmann::json to_json(const RunConfig& cfg);

}  // namespace hgamma::tools
