#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "sllg/integrator.hpp"

namespace sllg {

/// Experiment description read from an INI file. Every key is optional;
/// see README.md for the schema and defaults.
struct RunConfig {
  struct Grid {
    int dim = 2;
    int points = 64;
    double extent = SpectralGrid::kTwoPi;
  } grid;

  struct Model {
    double alpha = 1.0;
    double beta = 0.0;
    double h = 0.3;
    int lambda = -1;
    /// none | constant | shear
    std::string current = "none";
    double current_amplitude = 0.0;
    bool stable_background = false;
  } model;

  struct Noise {
    int modes = 0;
    double decay = 3.0;
    std::optional<double> trace;
    bool divergence_free = true;
  } noise;

  SchemeConfig scheme;

  struct Initial {
    /// uniform | single_mode | skyrmion | random | snapshot
    std::string type = "uniform";
    std::array<double, 3> direction{0, 0, 1};
    double k_squared = 0.5;
    double amplitude = 1e-3;
    double radius = 0.6;
    std::uint64_t seed = 1;
    int max_frequency = 2;
    std::filesystem::path path;
  } initial;

  struct Converge {
    std::vector<int> n_list{8, 16, 32};
    double R = 10.0;
  } converge;

  std::filesystem::path out = "out";
  int trajectories = 1;
  std::uint64_t seed = 0;
  int threads = 1;
  std::vector<int> moments{1, 2};

  /// Checks every block; messages start with "section.key:".
  void validate() const;
};

/// Reads and validates an INI config. Unknown sections or keys, malformed
/// values and invariant violations throw std::invalid_argument whose
/// message names the offending key.
RunConfig parse_config(const std::filesystem::path& path);
RunConfig parse_config_text(const std::string& text);

GridPtr build_grid(const RunConfig& cfg);
ModelParams build_model(const RunConfig& cfg, const GridPtr& grid);
/// Empty when noise.modes is 0.
std::optional<NoiseModel> build_noise(const RunConfig& cfg, const GridPtr& grid);
MagnetizationField build_initial(const RunConfig& cfg, const GridPtr& grid);

/// Creates the directory and checks that a file can be written there.
void ensure_writable(const std::filesystem::path& dir);

}  // namespace sllg
