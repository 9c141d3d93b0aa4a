#pragma once

#include <array>
#include <vector>

#include "sllg/grid.hpp"

namespace sllg {

/// Spatial gradient of a magnetization field: entry i holds d/dx_i of all
/// three components.
using Gradient = std::vector<MagnetizationField>;

enum class NormKind { L2, H1, H2, Linf, L2Weighted };

// ---- spectral transforms of whole fields --------------------------------

std::array<Spectrum, 3> to_spectrum(const MagnetizationField& f);
MagnetizationField from_spectrum(const GridPtr& grid, const std::array<Spectrum, 3>& s);
Spectrum to_spectrum(const ScalarField& f);

// ---- linear differential operators (exact on every resolved mode) --------

MagnetizationField laplacian(const MagnetizationField& f);
MagnetizationField bilaplacian(const MagnetizationField& f);
ScalarField laplacian(const ScalarField& f);

/// d/dx_i f for every axis. With `dealias` the input is first truncated to
/// the 2/3 band.
Gradient gradient(const MagnetizationField& f, bool dealias = false);
std::vector<ScalarField> gradient(const ScalarField& f);

ScalarField divergence(const VectorField& g);

/// (g . grad) f as a physical-space product of 2/3-truncated factors.
MagnetizationField directional_derivative(const MagnetizationField& f, const VectorField& g);
/// Same product from a precomputed gradient; `g` is used as given.
MagnetizationField directional_derivative(const Gradient& grad_f, const VectorField& g);
/// (g . grad) g for a vector field, used by the second-order transport formulas.
VectorField directional_derivative(const VectorField& f, const VectorField& g);

// ---- projections -----------------------------------------------------------

/// Zero every Fourier coefficient with some axis frequency above `n`.
/// n >= N/2 is the identity and returns the input unchanged.
MagnetizationField fourier_project(const MagnetizationField& f, int n);
VectorField fourier_project(const VectorField& f, int n);
ScalarField fourier_project(const ScalarField& f, int n);

/// Truncation to the 2/3 band.
MagnetizationField dealias(const MagnetizationField& f);
VectorField dealias(const VectorField& f);

/// Fraction of L2 energy carried by modes with some axis frequency above n.
double energy_above(const MagnetizationField& f, int n);

/// Spectral interpolation of `f` onto a finer grid with the same extent.
MagnetizationField inject(const MagnetizationField& f, const GridPtr& fine);

// ---- pointwise algebra -----------------------------------------------------

MagnetizationField cross(const MagnetizationField& a, const MagnetizationField& b);
ScalarField dot(const MagnetizationField& a, const MagnetizationField& b);
/// s(x) * f(x)
MagnetizationField scale(const ScalarField& s, const MagnetizationField& f);
MagnetizationField constant_vector(const GridPtr& grid, const std::array<double, 3>& v);

// ---- quadrature and norms ----------------------------------------------------

/// Grid-point average times volume.
double integrate(const ScalarField& f);
double inner(const MagnetizationField& a, const MagnetizationField& b);
double inner(const ScalarField& a, const ScalarField& b);
/// Sum over i of <a_i, b_i> for two gradients.
double inner(const Gradient& a, const Gradient& b);

/// Integer-order Sobolev norm: sqrt(sum_{j <= order} |D^j f|^2_{L2}).
double sobolev_norm(const MagnetizationField& f, int order);
double sobolev_norm(const VectorField& f, int order);
double norm(const MagnetizationField& f, NormKind kind);

/// The whole-space weight (1 + |x|^2)^-2 sampled on the fundamental domain
/// centred at the origin.
ScalarField weight_rho(const GridPtr& grid);

/// Periodic representative of a grid point's position in [-L/2, L/2)^d.
std::array<double, 3> centered_coordinate(const SpectralGrid& grid, std::size_t idx);

}  // namespace sllg
