#pragma once

#include <complex>
#include <optional>

#include "sllg/grid.hpp"

namespace sllg {

/// Physical constants of the model.
///
/// `current` is the spin velocity already multiplied by (1 + alpha*beta), and
/// `gamma` is (alpha - beta) / (1 + alpha*beta); use make() to build both from
/// the raw current.
struct ModelParams {
  double alpha = 1.0;
  double beta = 0.0;
  double h = 0.3;
  int lambda = -1;
  double gamma = 1.0;
  std::optional<VectorField> current;  // absent means v = 0

  static ModelParams make(double alpha, double beta, double h, int lambda,
                          std::optional<VectorField> raw_current = std::nullopt);

  /// Throws std::invalid_argument naming the offending field.
  void validate(bool require_stable_background = false) const;
};

/// E(M) = 1/2 int |Delta M|^2 + lambda |grad M|^2 + h |M - e3|^2 dx.
double energy(const MagnetizationField& m, const ModelParams& p);

/// H(M) = -[Delta^2 M - lambda Delta M - h e3]; the h M part of the L2
/// gradient is dropped since it is normal to the sphere.
MagnetizationField effective_field(const MagnetizationField& m, const ModelParams& p);

/// Linearised rate of a transverse plane wave around e3 with |k|^2 = k_sq:
/// -alpha w + i w with w = k^4 + lambda k^2 + h.
std::complex<double> dispersion_rate(double k_sq, const ModelParams& p);

struct CoercivityReport {
  bool applicable = false;
  double energy = 0.0;
  /// |D^2 M|^2_{L2} + |M - e3|^2_{L2}
  double control = 0.0;
  /// energy / control, or +inf when control vanishes.
  double ratio = 0.0;
  bool violated = false;
};

/// Compares E(M) with the H^2-type control quantity. Only meaningful for the
/// frustrated case lambda = -1 with h > 1/4; otherwise `applicable` is false.
CoercivityReport coercivity_check(const MagnetizationField& m, const ModelParams& p);

/// Sharp lower bound of energy/control over all Fourier modes of the grid,
/// min over k of (k^4 - k^2 + h) / (2 (k^4 + 1)).
double coercivity_lower_bound(const SpectralGrid& grid, const ModelParams& p);

}  // namespace sllg
