#include "sllg/grid.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <mutex>
#include <stdexcept>
#include <string>

namespace sllg {

namespace {

// Planner calls are not thread-safe in FFTW.
std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

int signed_mode(int i, int n) { return i <= n / 2 ? (i == n / 2 ? -n / 2 : i) : i - n; }

}  // namespace

SpectralGrid::SpectralGrid(int dim, int points_per_axis, double extent_per_axis)
    : dim_(dim), n_(points_per_axis), extent_(extent_per_axis) {
  if (dim != 2 && dim != 3)
    throw std::invalid_argument("grid.dim must be 2 or 3, got " + std::to_string(dim));
  if (points_per_axis < 8 || points_per_axis % 2 != 0)
    throw std::invalid_argument("grid.points must be an even integer >= 8, got " +
                                std::to_string(points_per_axis));
  if (!(extent_per_axis > 0.0) || !std::isfinite(extent_per_axis))
    throw std::invalid_argument("grid.extent must be positive");

  size_ = 1;
  for (int a = 0; a < dim_; ++a) size_ *= static_cast<std::size_t>(n_);
  const std::size_t half = static_cast<std::size_t>(n_ / 2 + 1);
  spec_size_ = size_ / static_cast<std::size_t>(n_) * half;

  for (int a = 0; a < 3; ++a) {
    modes_[a].assign(spec_size_, 0);
    k_odd_[a].assign(spec_size_, 0.0);
  }
  k2_.assign(spec_size_, 0.0);
  dealias_.assign(spec_size_, 0);
  herm_.assign(spec_size_, 2.0);

  const double k0 = base_wavenumber();
  const int keep = dealias_max();
  for (std::size_t s = 0; s < spec_size_; ++s) {
    std::array<int, 3> idx{0, 0, 0};
    std::size_t rem = s;
    idx[dim_ - 1] = static_cast<int>(rem % half);
    rem /= half;
    for (int a = dim_ - 2; a >= 0; --a) {
      idx[a] = static_cast<int>(rem % static_cast<std::size_t>(n_));
      rem /= static_cast<std::size_t>(n_);
    }
    bool kept = true;
    double k2 = 0.0;
    for (int a = 0; a < dim_; ++a) {
      int m = a == dim_ - 1 ? idx[a] : signed_mode(idx[a], n_);
      modes_[a][s] = m;
      const bool nyquist = std::abs(m) == n_ / 2;
      k_odd_[a][s] = nyquist ? 0.0 : k0 * m;
      k2 += (k0 * m) * (k0 * m);
      if (std::abs(m) > keep) kept = false;
    }
    k2_[s] = k2;
    dealias_[s] = kept ? 1 : 0;
    const int last = idx[dim_ - 1];
    if (last == 0 || last == n_ / 2) herm_[s] = 1.0;
  }

  std::vector<int> shape(static_cast<std::size_t>(dim_), n_);
  std::vector<double> real(size_);
  std::vector<Complex> spec(spec_size_);
  std::lock_guard<std::mutex> lock(planner_mutex());
  forward_plan_ = fftw_plan_dft_r2c(dim_, shape.data(), real.data(),
                                    reinterpret_cast<fftw_complex*>(spec.data()),
                                    FFTW_ESTIMATE | FFTW_UNALIGNED);
  inverse_plan_ = fftw_plan_dft_c2r(dim_, shape.data(),
                                    reinterpret_cast<fftw_complex*>(spec.data()), real.data(),
                                    FFTW_ESTIMATE | FFTW_UNALIGNED);
  if (!forward_plan_ || !inverse_plan_) throw std::runtime_error("FFTW planning failed");
}

SpectralGrid::~SpectralGrid() {
  std::lock_guard<std::mutex> lock(planner_mutex());
  if (forward_plan_) fftw_destroy_plan(static_cast<fftw_plan>(forward_plan_));
  if (inverse_plan_) fftw_destroy_plan(static_cast<fftw_plan>(inverse_plan_));
}

double SpectralGrid::volume() const { return std::pow(extent_, dim_); }

double SpectralGrid::coordinate(std::size_t idx, int axis) const {
  return spacing() * point_index(idx)[axis];
}

std::array<int, 3> SpectralGrid::point_index(std::size_t idx) const {
  std::array<int, 3> out{0, 0, 0};
  for (int a = dim_ - 1; a >= 0; --a) {
    out[a] = static_cast<int>(idx % static_cast<std::size_t>(n_));
    idx /= static_cast<std::size_t>(n_);
  }
  return out;
}

double SpectralGrid::max_dealiased_k_squared() const {
  const double k = base_wavenumber() * dealias_max();
  return dim_ * k * k;
}

double SpectralGrid::max_k_squared() const {
  const double k = base_wavenumber() * (n_ / 2);
  return dim_ * k * k;
}

int SpectralGrid::max_abs_mode(std::size_t s) const {
  int m = 0;
  for (int a = 0; a < dim_; ++a) m = std::max(m, std::abs(modes_[a][s]));
  return m;
}

void SpectralGrid::forward(std::span<const double> real, std::span<Complex> spec) const {
  // r2c out-of-place preserves its input.
  fftw_execute_dft_r2c(static_cast<fftw_plan>(forward_plan_), const_cast<double*>(real.data()),
                       reinterpret_cast<fftw_complex*>(spec.data()));
}

void SpectralGrid::inverse(std::span<const Complex> spec, std::span<double> real) const {
  // Multi-dimensional c2r destroys its input, so work on a copy.
  Spectrum scratch(spec.begin(), spec.end());
  fftw_execute_dft_c2r(static_cast<fftw_plan>(inverse_plan_),
                       reinterpret_cast<fftw_complex*>(scratch.data()), real.data());
  const double scale = 1.0 / static_cast<double>(size_);
  for (auto& v : real) v *= scale;
}

GridPtr make_grid(int dim, int points_per_axis, double extent_per_axis) {
  return std::make_shared<const SpectralGrid>(dim, points_per_axis, extent_per_axis);
}

ScalarField::ScalarField(GridPtr grid) : ScalarField(std::move(grid), 0.0) {}

ScalarField::ScalarField(GridPtr grid, double value) : grid_(std::move(grid)) {
  if (!grid_) throw std::invalid_argument("field requires a grid");
  values_.assign(grid_->size(), value);
}

template <class Derived>
ComponentField<Derived>::ComponentField(GridPtr grid, int components) : grid_(std::move(grid)) {
  if (!grid_) throw std::invalid_argument("field requires a grid");
  data_.assign(static_cast<std::size_t>(components), std::vector<double>(grid_->size(), 0.0));
}

template <class Derived>
bool ComponentField<Derived>::all_finite() const {
  for (const auto& comp : data_)
    for (double v : comp)
      if (!std::isfinite(v)) return false;
  return true;
}

template class ComponentField<MagnetizationField>;
template class ComponentField<VectorField>;

MagnetizationField::MagnetizationField(GridPtr grid) : ComponentField(std::move(grid), 3) {}

MagnetizationField::MagnetizationField(GridPtr grid, const std::array<double, 3>& value)
    : ComponentField(std::move(grid), 3) {
  for (int c = 0; c < 3; ++c) std::fill(data_[c].begin(), data_[c].end(), value[c]);
}

VectorField::VectorField(GridPtr grid) : ComponentField(grid, grid ? grid->dim() : 0) {}

}  // namespace sllg
