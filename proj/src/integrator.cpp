#include "sllg/integrator.hpp"

#include <cmath>
#include <complex>
#include <stdexcept>
#include <string>

#include "sllg/snapshot.hpp"

namespace sllg {

namespace {

// (1 + alpha dt |k|^4)^{-1} applied to every Fourier mode.
MagnetizationField implicit_solve(const MagnetizationField& u, double alpha, double dt) {
  const auto& g = *u.grid();
  auto spec = to_spectrum(u);
  for (auto& comp : spec)
    for (std::size_t s = 0; s < g.spectral_size(); ++s) {
      const double k2 = g.k_squared(s);
      comp[s] /= 1.0 + alpha * dt * k2 * k2;
    }
  return from_spectrum(u.grid(), spec);
}

double amplification(Scheme scheme, std::complex<double> z) {
  switch (scheme) {
    case Scheme::HeunStratonovich: return std::abs(1.0 + z + 0.5 * z * z);
    case Scheme::EulerMaruyamaIto: return std::abs(1.0 + z);
    case Scheme::SemiImplicitImex: return 0.0;
  }
  return 0.0;
}

}  // namespace

const char* to_string(Scheme s) {
  switch (s) {
    case Scheme::HeunStratonovich: return "heun_stratonovich";
    case Scheme::EulerMaruyamaIto: return "euler_maruyama_ito";
    case Scheme::SemiImplicitImex: return "semi_implicit_imex";
  }
  return "unknown";
}

Scheme parse_scheme(const std::string& name) {
  if (name == "heun_stratonovich") return Scheme::HeunStratonovich;
  if (name == "euler_maruyama_ito") return Scheme::EulerMaruyamaIto;
  if (name == "semi_implicit_imex") return Scheme::SemiImplicitImex;
  throw std::invalid_argument("scheme.scheme: unknown scheme '" + name +
                              "' (expected heun_stratonovich, euler_maruyama_ito or semi_implicit_imex)");
}

int SchemeConfig::steps() const { return static_cast<int>(std::llround(t_end / dt)); }

void SchemeConfig::validate() const {
  if (!(dt > 0.0) || !std::isfinite(dt)) throw std::invalid_argument("scheme.dt: must satisfy dt > 0");
  if (!(t_end >= 0.0) || !std::isfinite(t_end))
    throw std::invalid_argument("scheme.t_end: must satisfy t_end >= 0");
  if (std::abs(steps() * dt - t_end) > 1e-9 * std::max(1.0, t_end))
    throw std::invalid_argument("scheme.t_end: must be an integer multiple of dt");
  if (renormalize_every < 0) throw std::invalid_argument("scheme.renormalize_every: must be >= 0");
  if (record_every < 1) throw std::invalid_argument("scheme.record_every: must be >= 1");
  if (snapshot_every < 0) throw std::invalid_argument("scheme.snapshot_every: must be >= 0");
  if (cutoff) cutoff->validate();
}

double stability_constant(Scheme scheme, double alpha) {
  if (scheme == Scheme::SemiImplicitImex) return std::numeric_limits<double>::infinity();
  if (!(alpha > 0.0)) return 0.0;
  // z(r) = -r + i r / alpha; find the first r where |R(z)| exceeds 1.
  auto unstable = [&](double r) {
    return amplification(scheme, {-r, r / alpha}) > 1.0 + 1e-14;
  };
  double lo = 0.0, hi = 1e-3;
  while (!unstable(hi) && hi < 1e3) {
    lo = hi;
    hi *= 1.1;
  }
  for (int i = 0; i < 100; ++i) {
    const double mid = 0.5 * (lo + hi);
    (unstable(mid) ? hi : lo) = mid;
  }
  return lo;
}

void check_stability(const SchemeConfig& cfg, const SpectralGrid& grid, const ModelParams& p) {
  if (cfg.scheme == Scheme::SemiImplicitImex) return;
  const double k2 = grid.max_k_squared();
  const double r = cfg.dt * p.alpha * k2 * k2;
  const double limit = stability_constant(cfg.scheme, p.alpha);
  if (r > limit)
    throw std::invalid_argument("scheme.dt: explicit " + std::string(to_string(cfg.scheme)) +
                                " needs dt * alpha * k_max^4 <= " + format_double(limit) + ", got " +
                                format_double(r) + " (reduce dt or use semi_implicit_imex)");
}

SllgSystem::SllgSystem(ModelParams params, const NoiseModel* noise)
    : params_(std::move(params)), noise_(noise) {
  if (params_.current) current_ = dealias(*params_.current);
}

MagnetizationField SllgSystem::project(MagnetizationField u) const {
  if (!projection_) return u;
  return fourier_project(u, *projection_);
}

double SllgSystem::psi(const MagnetizationField& u) const {
  if (!cutoff_ || cutoff_->argument != CutoffSpec::Argument::SupNorm) return 1.0;
  return cutoff_psi(norm(u, NormKind::Linf), *cutoff_);
}

MagnetizationField SllgSystem::drift(const MagnetizationField& u) const {
  if (mask_.linear_only) {
    auto out = bilaplacian(u);
    out *= -params_.alpha;
    return out;
  }
  MagnetizationField out(u.grid());
  std::optional<Gradient> grad;
  if (mask_.llg) {
    auto d = field_derivatives(u, params_);
    auto fbar = drift_bar(u, params_, d, current_ ? &*current_ : nullptr);
    if (cutoff_ && cutoff_->argument == CutoffSpec::Argument::Pointwise) {
      for (std::size_t i = 0; i < u.grid()->size(); ++i) {
        const auto v = u.at(i);
        const double w = cutoff_psi(v[0] * v[0] + v[1] * v[1] + v[2] * v[2], *cutoff_);
        if (w != 1.0) {
          auto f = fbar.at(i);
          for (auto& c : f) c *= w;
          fbar.set(i, f);
        }
      }
    } else {
      const double w = psi(u);
      if (w != 1.0) fbar *= w;
    }
    out = project(std::move(fbar));
    grad = std::move(d.grad);
  }
  if (mask_.current && current_) {
    if (!grad) grad = gradient(u, true);
    out -= project(directional_derivative(*grad, *current_));
  }
  return out;
}

MagnetizationField SllgSystem::imex_remainder(const MagnetizationField& u) const {
  if (mask_.linear_only) return MagnetizationField(u.grid());
  auto out = drift(u);
  if (mask_.llg) out.axpy(params_.alpha, bilaplacian(project(u)));
  return out;
}

MagnetizationField SllgSystem::ito_correction(const MagnetizationField& u) const {
  if (!has_noise()) return MagnetizationField(u.grid());
  return project(stratonovich_correction(u, *noise_));
}

MagnetizationField SllgSystem::diffusion(const MagnetizationField& u, std::span<const double> dw) const {
  if (!has_noise()) return MagnetizationField(u.grid());
  auto out = directional_derivative(u, noise_->combine(dw));
  out *= -1.0;
  return project(std::move(out));
}

MagnetizationField step_heun(const MagnetizationField& u, const SllgSystem& sys, double dt,
                             std::span<const double> dw) {
  const auto a = sys.drift(u);
  const auto b = sys.diffusion(u, dw);
  auto pred = u;
  pred.axpy(dt, a);
  pred += b;
  const auto a2 = sys.drift(pred);
  const auto b2 = sys.diffusion(pred, dw);
  auto out = u;
  out.axpy(0.5 * dt, a);
  out.axpy(0.5 * dt, a2);
  out.axpy(0.5, b);
  out.axpy(0.5, b2);
  return out;
}

MagnetizationField step_em_ito(const MagnetizationField& u, const SllgSystem& sys, double dt,
                               std::span<const double> dw) {
  auto out = u;
  out.axpy(dt, sys.drift(u));
  if (sys.has_noise()) {
    out.axpy(dt, sys.ito_correction(u));
    out += sys.diffusion(u, dw);
  }
  return out;
}

MagnetizationField step_semi_implicit(const MagnetizationField& u, const SllgSystem& sys, double dt,
                                      std::span<const double> dw) {
  const double alpha = sys.implicit_alpha();
  const auto a = sys.imex_remainder(u);
  const auto b = sys.diffusion(u, dw);
  auto pred = u;
  pred.axpy(dt, a);
  pred += b;
  pred = implicit_solve(pred, alpha, dt);
  const auto a2 = sys.imex_remainder(pred);
  const auto b2 = sys.diffusion(pred, dw);
  auto out = u;
  out.axpy(0.5 * dt, a);
  out.axpy(0.5 * dt, a2);
  out.axpy(0.5, b);
  out.axpy(0.5, b2);
  return implicit_solve(out, alpha, dt);
}

MagnetizationField step(Scheme scheme, const MagnetizationField& u, const SllgSystem& sys, double dt,
                        std::span<const double> dw) {
  switch (scheme) {
    case Scheme::HeunStratonovich: return step_heun(u, sys, dt, dw);
    case Scheme::EulerMaruyamaIto: return step_em_ito(u, sys, dt, dw);
    case Scheme::SemiImplicitImex: return step_semi_implicit(u, sys, dt, dw);
  }
  throw std::invalid_argument("step: unknown scheme");
}

MagnetizationField renormalize(const MagnetizationField& m) {
  MagnetizationField out(m.grid());
  for (std::size_t i = 0; i < m.grid()->size(); ++i) {
    auto v = m.at(i);
    const double n = std::sqrt(v[0] * v[0] + v[1] * v[1] + v[2] * v[2]);
    if (!(n >= 0.1))
      throw std::domain_error("renormalize: |M| = " + format_double(n) + " at grid point " +
                              std::to_string(i) + " (collapse of the magnetization)");
    for (auto& c : v) c /= n;
    out.set(i, v);
  }
  return out;
}

namespace detail {

TrajectoryRecord integrate(const MagnetizationField& m0, const SllgSystem& sys,
                           const SchemeConfig& cfg, const NoisePath* path, bool require_sphere) {
  cfg.validate();
  check_stability(cfg, *m0.grid(), sys.params());
  if (!m0.all_finite()) throw std::invalid_argument("initial data: non-finite values");
  if (require_sphere) {
    const double dev = max_sphere_deviation(m0);
    if (dev > 1e-8)
      throw std::invalid_argument("initial data: deviates from the unit sphere by " + format_double(dev));
  }
  const int steps = cfg.steps();
  if (sys.has_noise()) {
    if (path == nullptr) throw std::invalid_argument("run: a noise path is required");
    if (path->modes() != sys.noise()->size())
      throw std::invalid_argument("run: noise path has " + std::to_string(path->modes()) +
                                  " columns for " + std::to_string(sys.noise()->size()) + " noise fields");
    if (path->steps() < steps) throw std::invalid_argument("run: noise path is shorter than the run");
    if (std::abs(path->dt() - cfg.dt) > 1e-12 * cfg.dt)
      throw std::invalid_argument("run: noise path step differs from scheme.dt");
  }

  const auto& p = sys.params();
  TrajectoryRecord rec;
  rec.dt = cfg.dt;
  auto u = m0;
  rec.append(0.0, u, p);
  if (cfg.snapshot_every > 0) {
    rec.snapshot_times.push_back(0.0);
    rec.snapshots.push_back(u);
  }
  const std::vector<double> zeros(sys.noise() ? static_cast<std::size_t>(sys.noise()->size()) : 0, 0.0);
  for (int n = 1; n <= steps; ++n) {
    const auto dw = sys.has_noise() ? path->step_increments(n - 1) : std::span<const double>(zeros);
    auto next = step(cfg.scheme, u, sys, cfg.dt, dw);
    const double t = n * cfg.dt;
    if (!next.all_finite()) {
      rec.status = TrajectoryRecord::Status::Aborted;
      rec.message = "non-finite state at t = " + format_double(t) + " (step " + std::to_string(n) +
                    "); last finite state kept from t = " + format_double(t - cfg.dt);
      break;
    }
    if (cfg.renormalize_every > 0 && n % cfg.renormalize_every == 0) {
      try {
        next = renormalize(next);
      } catch (const std::domain_error& e) {
        rec.status = TrajectoryRecord::Status::Aborted;
        rec.message = std::string(e.what()) + " at t = " + format_double(t);
        break;
      }
    }
    u = std::move(next);
    if (n % cfg.record_every == 0 || n == steps) rec.append(t, u, p);
    if (cfg.snapshot_every > 0 && n % cfg.snapshot_every == 0) {
      rec.snapshot_times.push_back(t);
      rec.snapshots.push_back(u);
    }
  }
  rec.final_state = std::move(u);
  return rec;
}

}  // namespace detail

TrajectoryRecord run_trajectory(const MagnetizationField& m0, const SllgSystem& sys,
                                const SchemeConfig& cfg, const NoisePath* path) {
  if (cfg.cutoff && !sys.cutoff()) {
    auto with_cutoff = sys;
    with_cutoff.set_cutoff(cfg.cutoff);
    return detail::integrate(m0, with_cutoff, cfg, path, true);
  }
  return detail::integrate(m0, sys, cfg, path, true);
}

TrajectoryRecord run_trajectory(const MagnetizationField& m0, const ModelParams& p,
                                const NoiseModel* noise, const SchemeConfig& cfg, std::uint64_t seed,
                                std::uint64_t trajectory) {
  SllgSystem sys(p, noise);
  std::optional<NoisePath> path;
  if (sys.has_noise()) path = sample_path(*noise, cfg.steps(), cfg.dt, seed, trajectory);
  return run_trajectory(m0, sys, cfg, path ? &*path : nullptr);
}

}  // namespace sllg
