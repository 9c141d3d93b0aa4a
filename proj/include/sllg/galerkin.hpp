#pragma once

#include <filesystem>
#include <vector>

#include "sllg/integrator.hpp"

namespace sllg {

/// Truncated system: Pi_n applied to every term, psi_R(|u|_{L^inf}) on Fbar.
struct GalerkinConfig {
  int n = 16;
  double R = 10.0;
  SchemeConfig scheme = [] {
    SchemeConfig s;
    s.renormalize_every = 0;
    return s;
  }();

  /// Checks n against the grid and R > 1.
  void validate(const SpectralGrid& grid) const;
  SllgSystem system(const ModelParams& p, const NoiseModel* noise) const;
};

struct GalerkinRhs {
  /// Ito drift psi Pi_n Fbar(u) - Pi_n grad_v u + 1/2 sum_k Pi_n S_k(u).
  MagnetizationField drift;
  /// -Pi_n grad_{g_k} u, one per noise field.
  std::vector<MagnetizationField> diffusions;
};

/// Throws std::invalid_argument if u carries energy above mode n
/// (relative energy_above > 1e-12).
GalerkinRhs galerkin_rhs(const MagnetizationField& u, const ModelParams& p, const NoiseModel* noise,
                         const GalerkinConfig& cfg);

/// Integrates the truncated system from Pi_n m0 along `path`. Sphere
/// renormalization is not part of the scheme and is rejected when n is
/// below the grid Nyquist frequency.
TrajectoryRecord run_galerkin(const MagnetizationField& m0, const ModelParams& p, const NoiseModel* noise,
                              const NoisePath* path, const GalerkinConfig& cfg);

struct ConvergenceRow {
  int n = 0;
  double endpoint_error = 0.0;     // |M_n(T) - M_ref(T)|_{L2}
  double max_sphere_dev = 0.0;     // max_t int (1 - |M_n|^2)^2
  double max_h2 = 0.0;             // max_t |M_n - e3|_{H2}
};

/// Runs every n in `n_list` and the reference n = N/2 on the path sampled
/// from `seed`, reporting the endpoint errors against the reference.
std::vector<ConvergenceRow> convergence_study(const MagnetizationField& m0, const ModelParams& p,
                                              const NoiseModel* noise, std::uint64_t seed,
                                              const std::vector<int>& n_list, const GalerkinConfig& cfg);

void write_convergence_csv(const std::filesystem::path& path, const std::vector<ConvergenceRow>& rows);

}  // namespace sllg
