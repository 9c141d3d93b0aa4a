#pragma once

#include <cmath>
#include <random>
#include <vector>

#include "sllg/grid.hpp"

namespace sllg::test {

/// One Fourier mode of an analytic test field.
struct Wave {
  std::array<int, 3> k{0, 0, 0};
  std::array<double, 3> cos_amp{0, 0, 0};
  std::array<double, 3> sin_amp{0, 0, 0};
};

/// Random trigonometric polynomial with every integer frequency in [-kmax, kmax].
inline std::vector<Wave> random_waves(std::mt19937_64& rng, int dim, int kmax, int count, double amp = 1.0) {
  std::uniform_int_distribution<int> freq(-kmax, kmax);
  std::normal_distribution<double> coef(0.0, amp);
  std::vector<Wave> waves;
  for (int i = 0; i < count; ++i) {
    Wave w;
    for (int a = 0; a < dim; ++a) w.k[a] = freq(rng);
    for (int c = 0; c < 3; ++c) {
      w.cos_amp[c] = coef(rng);
      w.sin_amp[c] = coef(rng);
    }
    waves.push_back(w);
  }
  return waves;
}

/// Evaluates the waves at physical point x (base wavenumber k0).
inline std::array<double, 3> eval_waves(const std::vector<Wave>& waves, const std::array<double, 3>& x,
                                        double k0) {
  std::array<double, 3> out{0, 0, 0};
  for (const auto& w : waves) {
    const double ph = k0 * (w.k[0] * x[0] + w.k[1] * x[1] + w.k[2] * x[2]);
    const double c = std::cos(ph), s = std::sin(ph);
    for (int i = 0; i < 3; ++i) out[i] += w.cos_amp[i] * c + w.sin_amp[i] * s;
  }
  return out;
}

inline MagnetizationField sample_waves(const GridPtr& g, const std::vector<Wave>& waves,
                                       std::array<double, 3> offset = {0, 0, 0}) {
  MagnetizationField f(g);
  for (std::size_t i = 0; i < g->size(); ++i) {
    std::array<double, 3> x{0, 0, 0};
    for (int a = 0; a < g->dim(); ++a) x[a] = g->coordinate(i, a);
    auto v = eval_waves(waves, x, g->base_wavenumber());
    for (int c = 0; c < 3; ++c) v[c] += offset[c];
    f.set(i, v);
  }
  return f;
}

/// Band-limited random field with frequencies up to kmax.
inline MagnetizationField random_field(const GridPtr& g, std::mt19937_64& rng, int kmax = 3, int count = 6,
                                       double amp = 1.0) {
  return sample_waves(g, random_waves(rng, g->dim(), kmax, count, amp));
}

inline VectorField random_vector_field(const GridPtr& g, std::mt19937_64& rng, int kmax = 3, int count = 6) {
  const auto m = random_field(g, rng, kmax, count);
  VectorField v(g);
  for (int a = 0; a < g->dim(); ++a)
    for (std::size_t i = 0; i < g->size(); ++i) v.component(a)[i] = m.component(a)[i];
  return v;
}

/// Divergence-free 2D field from a random stream function.
inline VectorField random_solenoidal_2d(const GridPtr& g, std::mt19937_64& rng, int kmax = 3) {
  const auto waves = random_waves(rng, 2, kmax, 6);
  VectorField v(g);
  const double k0 = g->base_wavenumber();
  for (std::size_t i = 0; i < g->size(); ++i) {
    const double x = g->coordinate(i, 0), y = g->coordinate(i, 1);
    double vx = 0, vy = 0;
    for (const auto& w : waves) {
      const double ph = k0 * (w.k[0] * x + w.k[1] * y);
      // psi = a cos + b sin; v = (d_y psi, -d_x psi)
      const double dpsi = -w.cos_amp[0] * std::sin(ph) + w.sin_amp[0] * std::cos(ph);
      vx += k0 * w.k[1] * dpsi;
      vy -= k0 * w.k[0] * dpsi;
    }
    v.component(0)[i] = vx;
    v.component(1)[i] = vy;
  }
  return v;
}

/// Smooth sphere-valued field M = (sin t cos p, sin t sin p, cos t) with
/// band-limited polar angle t of size ~amp and azimuth p. The composition
/// with sin/cos is entire, so the spectrum decays faster than geometrically.
inline MagnetizationField random_sphere_field(const GridPtr& g, std::mt19937_64& rng, double amp = 0.3,
                                              int kmax = 2) {
  const auto theta = sample_waves(g, random_waves(rng, g->dim(), kmax, 3, amp / std::sqrt(6.0)));
  const auto phi = sample_waves(g, random_waves(rng, g->dim(), kmax, 3, 0.4));
  MagnetizationField m(g);
  for (std::size_t i = 0; i < g->size(); ++i) {
    const double t = theta.component(0)[i], p = phi.component(0)[i];
    m.set(i, {std::sin(t) * std::cos(p), std::sin(t) * std::sin(p), std::cos(t)});
  }
  return m;
}

inline double max_abs_diff(const MagnetizationField& a, const MagnetizationField& b) {
  double d = 0;
  for (int c = 0; c < 3; ++c)
    for (std::size_t i = 0; i < a.grid()->size(); ++i)
      d = std::max(d, std::abs(a.component(c)[i] - b.component(c)[i]));
  return d;
}

inline double max_abs(const MagnetizationField& a) {
  double d = 0;
  for (int c = 0; c < 3; ++c)
    for (double v : a.component(c)) d = std::max(d, std::abs(v));
  return d;
}

}  // namespace sllg::test
