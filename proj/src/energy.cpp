#include "sllg/energy.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include "sllg/operators.hpp"

namespace sllg {

ModelParams ModelParams::make(double alpha, double beta, double h, int lambda,
                              std::optional<VectorField> raw_current) {
  ModelParams p;
  p.alpha = alpha;
  p.beta = beta;
  p.h = h;
  p.lambda = lambda;
  const double scale = 1.0 + alpha * beta;
  p.gamma = (alpha - beta) / scale;
  if (raw_current) {
    *raw_current *= scale;
    p.current = std::move(raw_current);
  }
  return p;
}

void ModelParams::validate(bool require_stable_background) const {
  if (!(alpha > 0.0)) throw std::invalid_argument("model.alpha: must satisfy alpha > 0");
  if (!(beta >= 0.0)) throw std::invalid_argument("model.beta: must satisfy beta >= 0");
  if (!(h >= 0.0)) throw std::invalid_argument("model.h: must satisfy h >= 0");
  if (lambda != -1 && lambda != 1) throw std::invalid_argument("model.lambda: must be -1 or +1");
  if (require_stable_background && lambda == -1 && !(h > 0.25))
    throw std::invalid_argument("model.h: stable background requires h > 1/4");
  if (current) {
    const auto div = divergence(*current);
    for (double v : div.values())
      if (std::abs(v) > 1e-10)
        throw std::invalid_argument("model.current: spin velocity must be divergence free");
  }
}

double energy(const MagnetizationField& m, const ModelParams& p) {
  const auto& g = *m.grid();
  const auto spec = to_spectrum(m);
  // Quadratic terms in Fourier space; the Zeeman-like term pointwise.
  double quad = 0.0;
  for (int c = 0; c < 3; ++c)
    for (std::size_t s = 0; s < g.spectral_size(); ++s) {
      const double k2 = g.k_squared(s);
      quad += g.hermitian_weight(s) * (k2 * k2 + p.lambda * k2) * std::norm(spec[c][s]);
    }
  const double n = static_cast<double>(g.size());
  quad *= g.volume() / (n * n);
  double zeeman = 0.0;
  for (std::size_t i = 0; i < g.size(); ++i) {
    const auto v = m.at(i);
    const double dz = v[2] - 1.0;
    zeeman += v[0] * v[0] + v[1] * v[1] + dz * dz;
  }
  zeeman *= g.cell_volume();
  return 0.5 * (quad + p.h * zeeman);
}

MagnetizationField effective_field(const MagnetizationField& m, const ModelParams& p) {
  const auto& g = *m.grid();
  auto spec = to_spectrum(m);
  for (auto& comp : spec)
    for (std::size_t s = 0; s < g.spectral_size(); ++s) {
      const double k2 = g.k_squared(s);
      comp[s] *= -(k2 * k2 + p.lambda * k2);
    }
  auto out = from_spectrum(m.grid(), spec);
  auto z = out.component(2);
  for (auto& v : z) v += p.h;
  return out;
}

std::complex<double> dispersion_rate(double k_sq, const ModelParams& p) {
  if (k_sq < 0.0) throw std::invalid_argument("dispersion_rate: k_sq must be >= 0");
  const double w = k_sq * k_sq + p.lambda * k_sq + p.h;
  return {-p.alpha * w, w};
}

CoercivityReport coercivity_check(const MagnetizationField& m, const ModelParams& p) {
  CoercivityReport r;
  r.applicable = p.lambda == -1 && p.h > 0.25;
  if (!r.applicable) return r;
  r.energy = energy(m, p);
  auto offset = m;
  for (auto& v : offset.component(2)) v -= 1.0;
  const auto hess = sobolev_norm(offset, 2);
  const auto first = sobolev_norm(offset, 1);
  // |D^2 m|^2 = |m|_{H2}^2 - |m|_{H1}^2, and grad M = grad m.
  const double l2 = norm(offset, NormKind::L2);
  r.control = hess * hess - first * first + l2 * l2;
  r.ratio = r.control > 0.0 ? r.energy / r.control : std::numeric_limits<double>::infinity();
  r.violated = r.control > 0.0 && !(r.ratio > 0.0);
  return r;
}

double coercivity_lower_bound(const SpectralGrid& grid, const ModelParams& p) {
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t s = 0; s < grid.spectral_size(); ++s) {
    const double k2 = grid.k_squared(s);
    best = std::min(best, (k2 * k2 + p.lambda * k2 + p.h) / (2.0 * (k2 * k2 + 1.0)));
  }
  return best;
}

}  // namespace sllg
