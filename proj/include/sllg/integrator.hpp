#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>

#include "sllg/diagnostics.hpp"
#include "sllg/dynamics.hpp"
#include "sllg/noise.hpp"

namespace sllg {

enum class Scheme { HeunStratonovich, EulerMaruyamaIto, SemiImplicitImex };

const char* to_string(Scheme s);
/// Parses "heun_stratonovich", "euler_maruyama_ito" or "semi_implicit_imex".
Scheme parse_scheme(const std::string& name);

struct SchemeConfig {
  Scheme scheme = Scheme::SemiImplicitImex;
  double dt = 1e-3;
  double t_end = 0.1;
  /// Project back onto the sphere every this many steps; 0 = never.
  int renormalize_every = 1;
  std::optional<CutoffSpec> cutoff;
  int record_every = 1;
  /// Keep a field snapshot every this many steps; 0 = only the endpoint.
  int snapshot_every = 0;

  int steps() const;
  void validate() const;
};

/// Largest r = dt * alpha * k^4 for which the explicit scheme damps a
/// transverse mode with rate -alpha w + i w (w ~ k^4). Necessary, not
/// sufficient, for a stable nonlinear run.
double stability_constant(Scheme scheme, double alpha);

/// Throws std::invalid_argument when an explicit scheme violates
/// dt * alpha * k_max^4 <= stability_constant, with k_max over all modes.
void check_stability(const SchemeConfig& cfg, const SpectralGrid& grid, const ModelParams& p);

/// Which parts of the equation are active. Disabling terms is used by
/// oracle tests (pure transport, linear bi-Laplacian decay).
struct TermMask {
  bool llg = true;        // precession, damping and spin-transfer parts of Fbar
  bool current = true;    // -grad_v u
  bool noise = true;
  /// Replace the whole drift by its stiff linear part -alpha D2u.
  bool linear_only = false;
};

/// The right-hand side of the (possibly truncated) equation
///   du = [psi F_bar(u) - grad_v u] dt - grad_{dW} u,
/// with every term composed with Pi_n when a projection is set.
class SllgSystem {
 public:
  SllgSystem(ModelParams params, const NoiseModel* noise = nullptr);

  const ModelParams& params() const { return params_; }
  const NoiseModel* noise() const { return noise_; }
  bool has_noise() const { return noise_ != nullptr && mask_.noise && noise_->size() > 0; }

  SllgSystem& set_projection(std::optional<int> n) {
    projection_ = n;
    return *this;
  }
  SllgSystem& set_cutoff(std::optional<CutoffSpec> c) {
    cutoff_ = c;
    return *this;
  }
  SllgSystem& set_mask(TermMask m) {
    mask_ = m;
    return *this;
  }
  std::optional<int> projection() const { return projection_; }
  const std::optional<CutoffSpec>& cutoff() const { return cutoff_; }
  const TermMask& mask() const { return mask_; }

  /// psi_R(y) for the current state, 1 without a cutoff.
  double psi(const MagnetizationField& u) const;

  /// Stratonovich drift psi Pi Fbar(u) - Pi grad_v u.
  MagnetizationField drift(const MagnetizationField& u) const;
  /// drift(u) + alpha D2u: the part left explicit by the IMEX scheme.
  MagnetizationField imex_remainder(const MagnetizationField& u) const;
  /// 1/2 sum_k Pi S_k(u).
  MagnetizationField ito_correction(const MagnetizationField& u) const;
  /// -Pi grad_xi u for xi = sum_k g_k dW_k.
  MagnetizationField diffusion(const MagnetizationField& u, std::span<const double> dw) const;

  MagnetizationField project(MagnetizationField u) const;

  /// Coefficient of the bi-Laplacian treated implicitly by the IMEX scheme.
  double implicit_alpha() const { return mask_.llg || mask_.linear_only ? params_.alpha : 0.0; }

 private:
  ModelParams params_;
  const NoiseModel* noise_;
  std::optional<VectorField> current_;  // dealiased copy of params_.current
  std::optional<int> projection_;
  std::optional<CutoffSpec> cutoff_;
  TermMask mask_;
};

MagnetizationField step_heun(const MagnetizationField& u, const SllgSystem& sys, double dt,
                             std::span<const double> dw);
MagnetizationField step_em_ito(const MagnetizationField& u, const SllgSystem& sys, double dt,
                               std::span<const double> dw);
MagnetizationField step_semi_implicit(const MagnetizationField& u, const SllgSystem& sys, double dt,
                                      std::span<const double> dw);
MagnetizationField step(Scheme scheme, const MagnetizationField& u, const SllgSystem& sys, double dt,
                        std::span<const double> dw);

/// Pointwise M / |M|. Throws std::domain_error if some |M(x)| < 0.1.
MagnetizationField renormalize(const MagnetizationField& m);

/// Time loop with diagnostics. The noise path must have at least
/// cfg.steps() steps and one column per noise field; it may be null when
/// the system has no noise. A non-finite state aborts the run and keeps the
/// last finite one.
TrajectoryRecord run_trajectory(const MagnetizationField& m0, const SllgSystem& sys,
                                const SchemeConfig& cfg, const NoisePath* path);

namespace detail {
/// Shared loop of run_trajectory and run_galerkin; the sphere check on m0
/// is skipped for truncated systems.
TrajectoryRecord integrate(const MagnetizationField& m0, const SllgSystem& sys,
                           const SchemeConfig& cfg, const NoisePath* path, bool require_sphere);
}  // namespace detail

/// Convenience form sampling the path of trajectory `trajectory` from `seed`.
TrajectoryRecord run_trajectory(const MagnetizationField& m0, const ModelParams& p,
                                const NoiseModel* noise, const SchemeConfig& cfg, std::uint64_t seed,
                                std::uint64_t trajectory = 0);

}  // namespace sllg
