#include "sllg/initial.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <random>
#include <stdexcept>

#include "sllg/snapshot.hpp"

namespace sllg {

namespace {

// C-infinity step: 0 for s <= 0, 1 for s >= 1.
double smooth_step(double s) {
  if (s <= 0.0) return 0.0;
  if (s >= 1.0) return 1.0;
  const double a = std::exp(-1.0 / s), b = std::exp(-1.0 / (1.0 - s));
  return a / (a + b);
}

// Random trigonometric polynomial with RMS `rms`, sampled on the grid.
ScalarField random_trig(const GridPtr& g, std::mt19937_64& rng, int kmax, double rms) {
  std::uniform_int_distribution<int> freq(-kmax, kmax);
  std::normal_distribution<double> coef(0.0, 1.0);
  constexpr int kTerms = 6;
  const double amp = rms / std::sqrt(static_cast<double>(kTerms));
  ScalarField f(g);
  for (int t = 0; t < kTerms; ++t) {
    std::array<int, 3> k{0, 0, 0};
    for (int a = 0; a < g->dim(); ++a) k[a] = freq(rng);
    const double c = amp * coef(rng), s = amp * coef(rng);
    for (std::size_t i = 0; i < g->size(); ++i) {
      double ph = 0.0;
      for (int a = 0; a < g->dim(); ++a) ph += k[a] * g->base_wavenumber() * g->coordinate(i, a);
      f[i] += c * std::cos(ph) + s * std::sin(ph);
    }
  }
  return f;
}

}  // namespace

MagnetizationField uniform_field(const GridPtr& grid, std::array<double, 3> d) {
  const double n = std::sqrt(d[0] * d[0] + d[1] * d[1] + d[2] * d[2]);
  if (!(n > 0.0)) throw std::invalid_argument("initial.direction: must be nonzero");
  for (auto& c : d) c /= n;
  MagnetizationField m(grid);
  for (std::size_t i = 0; i < grid->size(); ++i) m.set(i, d);
  return m;
}

MagnetizationField single_mode_perturbation(const GridPtr& grid, std::array<int, 3> mode, double amplitude) {
  if (!(std::abs(amplitude) < 1.0)) throw std::invalid_argument("initial.amplitude: must satisfy |amplitude| < 1");
  MagnetizationField m(grid);
  const double k0 = grid->base_wavenumber();
  for (std::size_t i = 0; i < grid->size(); ++i) {
    double ph = 0.0;
    for (int a = 0; a < grid->dim(); ++a) ph += mode[a] * k0 * grid->coordinate(i, a);
    const double x = amplitude * std::cos(ph);
    m.set(i, {x, 0.0, std::sqrt(1.0 - x * x)});
  }
  return m;
}

std::array<int, 3> nearest_lattice_mode(const SpectralGrid& grid, double k_squared) {
  const double k0 = grid.base_wavenumber();
  const int kmax = grid.dealias_max();
  std::array<int, 3> best{0, 0, 0};
  double best_gap = std::numeric_limits<double>::infinity();
  // Search the non-negative octant; ties keep the earliest candidate.
  for (int c = 0; c <= (grid.dim() == 3 ? kmax : 0); ++c)
    for (int b = 0; b <= (grid.dim() >= 2 ? kmax : 0); ++b)
      for (int a = 0; a <= kmax; ++a) {
        if (a == 0 && b == 0 && c == 0) continue;
        const double k2 = k0 * k0 * (a * a + b * b + c * c);
        const double gap = std::abs(k2 - k_squared);
        if (gap < best_gap - 1e-12) {
          best_gap = gap;
          best = {a, b, c};
        }
      }
  return best;
}

MagnetizationField skyrmion_field(const GridPtr& grid, double radius) {
  if (grid->dim() != 2) throw std::invalid_argument("initial.type: skyrmion requires grid.dim = 2");
  if (!(radius > 0.0)) throw std::invalid_argument("initial.radius: must satisfy radius > 0");
  const double L = grid->extent(), c = 0.5 * L;
  const double r_in = 0.3 * L, r_out = 0.45 * L;
  MagnetizationField m(grid);
  for (std::size_t i = 0; i < grid->size(); ++i) {
    const double x = grid->coordinate(i, 0) - c, y = grid->coordinate(i, 1) - c;
    const double r = std::hypot(x, y);
    const double window = 1.0 - smooth_step((r - r_in) / (r_out - r_in));
    // theta = 2 atan(radius / r) = pi - 2 atan(r / radius), smooth through r = 0.
    const double theta = (std::numbers::pi - 2.0 * std::atan(r / radius)) * window;
    // Azimuth -atan2(y, x) orients the map so that the degree formula gives +1.
    const double phi = -std::atan2(y, x);
    m.set(i, {std::sin(theta) * std::cos(phi), std::sin(theta) * std::sin(phi), std::cos(theta)});
  }
  return m;
}

MagnetizationField random_sphere_field(const GridPtr& grid, std::uint64_t seed, double amplitude, int kmax) {
  std::mt19937_64 rng(seed);
  const auto theta = random_trig(grid, rng, kmax, amplitude);
  const auto phi = random_trig(grid, rng, kmax, 1.0);
  MagnetizationField m(grid);
  for (std::size_t i = 0; i < grid->size(); ++i) {
    const double t = theta[i], p = phi[i];
    m.set(i, {std::sin(t) * std::cos(p), std::sin(t) * std::sin(p), std::cos(t)});
  }
  return m;
}

MagnetizationField field_from_snapshot(const std::filesystem::path& path, const GridPtr& grid) {
  return snapshot_field(read_snapshot(path), grid);
}

}  // namespace sllg
