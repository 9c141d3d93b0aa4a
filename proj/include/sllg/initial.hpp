#pragma once

#include <array>
#include <cstdint>
#include <filesystem>

#include "sllg/grid.hpp"

namespace sllg {

/// Constant unit field along `direction` (normalized here).
MagnetizationField uniform_field(const GridPtr& grid, std::array<double, 3> direction = {0, 0, 1});

/// e3 tilted by amplitude * cos(k . x) along e1, renormalized pointwise.
/// `mode` holds integer frequencies.
MagnetizationField single_mode_perturbation(const GridPtr& grid, std::array<int, 3> mode, double amplitude);

/// Integer frequency (per axis) of the lattice mode whose |k|^2 is nearest
/// to `k_squared`, preferring the first axis.
std::array<int, 3> nearest_lattice_mode(const SpectralGrid& grid, double k_squared);

/// 2D charge +1 skyrmion centred in the cell: polar angle
/// theta(r) = 2 atan(radius / r), blended smoothly to zero between 0.3 L and
/// 0.45 L so that M = e3 near the cell boundary.
MagnetizationField skyrmion_field(const GridPtr& grid, double radius);

/// Smooth sphere-valued field M = (sin t cos p, sin t sin p, cos t) with t and p
/// random trigonometric polynomials of degree `kmax`; t has RMS `amplitude`.
MagnetizationField random_sphere_field(const GridPtr& grid, std::uint64_t seed, double amplitude = 0.3,
                                       int kmax = 2);

/// Field stored in a snapshot file, checked against `grid`.
MagnetizationField field_from_snapshot(const std::filesystem::path& path, const GridPtr& grid);

}  // namespace sllg
