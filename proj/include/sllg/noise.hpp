#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <vector>

#include "sllg/grid.hpp"

namespace sllg {

/// Truncated H^4-valued Wiener process W = sum_k q_k W_k f_k.
///
/// Stores g_k = q_k f_k with f_k unit vectors in H^4 of the torus.
class NoiseModel {
 public:
  /// Lattice wave vector and phase of one basis field.
  struct Mode {
    std::array<int, 3> wavevector{0, 0, 0};
    bool sine = false;
  };

  /// Basis built from lattice wave vectors kappa != 0 in a half space,
  /// ordered by |kappa|, each giving a cosine and a sine field. Directions
  /// are kappa-perp (divergence free) or kappa / |kappa| otherwise, and
  /// q_k = amplitude * (1 + |kappa|^2)^(-s/2). With `trace` set, the amplitude
  /// is chosen so that sum q_k^2 equals it; otherwise the amplitude is 1.
  static NoiseModel build_basis(const GridPtr& grid, int count, double decay_exponent,
                                bool divergence_free, std::optional<double> trace = std::nullopt);

  /// Arbitrary basis: `fields[k]` is g_k (already scaled by q[k]).
  static NoiseModel from_fields(std::vector<VectorField> fields, std::vector<double> q);

  const GridPtr& grid() const { return grid_; }
  int size() const { return static_cast<int>(fields_.size()); }
  const VectorField& field(int k) const { return fields_[static_cast<std::size_t>(k)]; }
  double q(int k) const { return q_[static_cast<std::size_t>(k)]; }
  std::span<const double> q() const { return q_; }
  const std::vector<Mode>& modes() const { return modes_; }
  bool divergence_free() const { return divergence_free_; }
  double decay_exponent() const { return decay_; }

  /// Relative growth of the partial sums sum_{k<=K} q_k^2 between K/2 and K.
  double tail_fraction() const;
  /// Summability surrogate: tail_fraction() < kTraceClassTail.
  bool trace_class() const { return tail_fraction() < kTraceClassTail; }
  static constexpr double kTraceClassTail = 0.05;

  /// xi = sum_k g_k dW_k, the spatial velocity of one noise increment.
  VectorField combine(std::span<const double> increments) const;

 private:
  GridPtr grid_;
  std::vector<VectorField> fields_;
  std::vector<double> q_;
  std::vector<Mode> modes_;
  bool divergence_free_ = false;
  double decay_ = 0.0;
};

/// Tr(Q) = sum_k q_k^2.
double trace(const NoiseModel& model);

/// Standard normal variate addressed by (seed, trajectory, step, k); a pure
/// function, so paths can be regenerated in any order on any thread.
double standard_normal(std::uint64_t seed, std::uint64_t trajectory, std::uint64_t step,
                       std::uint64_t k);

/// Brownian increments dW_k for every step of one trajectory.
class NoisePath {
 public:
  NoisePath(std::uint64_t seed, std::uint64_t trajectory, double dt, int steps, int modes,
            std::vector<double> increments);

  std::uint64_t seed() const { return seed_; }
  std::uint64_t trajectory() const { return trajectory_; }
  double dt() const { return dt_; }
  int steps() const { return steps_; }
  int modes() const { return modes_; }
  double increment(int step, int k) const {
    return increments_[static_cast<std::size_t>(step) * static_cast<std::size_t>(modes_) +
                       static_cast<std::size_t>(k)];
  }
  std::span<const double> step_increments(int step) const {
    return std::span<const double>(increments_).subspan(
        static_cast<std::size_t>(step) * static_cast<std::size_t>(modes_),
        static_cast<std::size_t>(modes_));
  }

  /// Same Brownian path sampled at `factor` times the step: consecutive
  /// increments are summed.
  NoisePath coarsen(int factor) const;
  /// Path truncated to its first `steps` increments.
  NoisePath prefix(int steps) const;

  /// CSV with columns step, k, dW.
  void write_csv(const std::filesystem::path& path) const;

 private:
  std::uint64_t seed_;
  std::uint64_t trajectory_;
  double dt_;
  int steps_;
  int modes_;
  std::vector<double> increments_;
};

NoisePath sample_path(const NoiseModel& model, int steps, double dt, std::uint64_t seed,
                      std::uint64_t trajectory = 0);
/// Increments for `modes` independent Brownian motions without a spatial model.
NoisePath sample_path(int modes, int steps, double dt, std::uint64_t seed,
                      std::uint64_t trajectory = 0);

}  // namespace sllg
