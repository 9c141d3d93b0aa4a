#pragma once

#include <algorithm>
#include <array>
#include <complex>
#include <cstddef>
#include <memory>
#include <span>
#include <vector>

namespace sllg {

using Complex = std::complex<double>;
using Spectrum = std::vector<Complex>;

/// Periodic grid on the flat torus [0, L)^d with N points per axis.
///
/// Owns the FFTW plans and the wavenumber tables. Immutable after
/// construction; transforms use the new-array FFTW interface so one grid can
/// be shared across threads.
class SpectralGrid {
 public:
  static constexpr double kTwoPi = 6.283185307179586476925286766559;

  SpectralGrid(int dim, int points_per_axis, double extent_per_axis = kTwoPi);
  ~SpectralGrid();
  SpectralGrid(const SpectralGrid&) = delete;
  SpectralGrid& operator=(const SpectralGrid&) = delete;

  int dim() const { return dim_; }
  int points() const { return n_; }
  double extent() const { return extent_; }
  double spacing() const { return extent_ / n_; }
  double volume() const;
  double cell_volume() const { return volume() / static_cast<double>(size_); }
  /// 2*pi / L, the physical wavenumber of integer frequency 1.
  double base_wavenumber() const { return kTwoPi / extent_; }

  std::size_t size() const { return size_; }
  std::size_t spectral_size() const { return spec_size_; }

  /// Physical coordinate of grid point `idx` along `axis`, in [0, L).
  double coordinate(std::size_t idx, int axis) const;
  /// Integer multi-index of grid point `idx` (axis 0 slowest).
  std::array<int, 3> point_index(std::size_t idx) const;

  /// Largest integer frequency kept by the 2/3 rule, i.e. |k| < N/3.
  int dealias_max() const { return (n_ - 1) / 3; }
  /// Largest |k|^2 over the dealiased band, in physical units.
  double max_dealiased_k_squared() const;
  /// Largest |k|^2 over all modes (the Nyquist corner).
  double max_k_squared() const;

  // Per spectral index tables.
  int mode(std::size_t s, int axis) const { return modes_[axis][s]; }
  /// Physical wavenumber used by odd derivatives (zero on Nyquist planes).
  double k_odd(std::size_t s, int axis) const { return k_odd_[axis][s]; }
  double k_squared(std::size_t s) const { return k2_[s]; }
  bool dealiased(std::size_t s) const { return dealias_[s] != 0; }
  /// Multiplicity of a half-spectrum coefficient in the full spectrum (1 or 2).
  double hermitian_weight(std::size_t s) const { return herm_[s]; }
  int max_abs_mode(std::size_t s) const;

  /// Unnormalized forward transform of one real scalar array.
  void forward(std::span<const double> real, std::span<Complex> spec) const;
  /// Inverse transform including the 1/size normalization. `spec` is untouched.
  void inverse(std::span<const Complex> spec, std::span<double> real) const;

  bool same_shape(const SpectralGrid& other) const {
    return dim_ == other.dim_ && n_ == other.n_ && extent_ == other.extent_;
  }

 private:
  int dim_;
  int n_;
  double extent_;
  std::size_t size_;
  std::size_t spec_size_;
  std::array<std::vector<int>, 3> modes_;
  std::array<std::vector<double>, 3> k_odd_;
  std::vector<double> k2_;
  std::vector<unsigned char> dealias_;
  std::vector<double> herm_;
  void* forward_plan_ = nullptr;
  void* inverse_plan_ = nullptr;
};

using GridPtr = std::shared_ptr<const SpectralGrid>;

GridPtr make_grid(int dim, int points_per_axis,
                  double extent_per_axis = SpectralGrid::kTwoPi);

/// One real value per grid point.
class ScalarField {
 public:
  explicit ScalarField(GridPtr grid);
  ScalarField(GridPtr grid, double value);

  const GridPtr& grid() const { return grid_; }
  std::span<double> values() { return values_; }
  std::span<const double> values() const { return values_; }
  double& operator[](std::size_t i) { return values_[i]; }
  double operator[](std::size_t i) const { return values_[i]; }

 private:
  GridPtr grid_;
  std::vector<double> values_;
};

/// Fixed-component field stored as one contiguous array per component.
template <class Derived>
class ComponentField {
 public:
  const GridPtr& grid() const { return grid_; }
  int components() const { return static_cast<int>(data_.size()); }
  std::span<double> component(int c) { return data_[c]; }
  std::span<const double> component(int c) const { return data_[c]; }

  Derived& operator+=(const Derived& o) {
    for (std::size_t c = 0; c < data_.size(); ++c)
      for (std::size_t i = 0; i < data_[c].size(); ++i) data_[c][i] += o.data_[c][i];
    return self();
  }
  Derived& operator-=(const Derived& o) {
    for (std::size_t c = 0; c < data_.size(); ++c)
      for (std::size_t i = 0; i < data_[c].size(); ++i) data_[c][i] -= o.data_[c][i];
    return self();
  }
  Derived& operator*=(double s) {
    for (auto& comp : data_)
      for (auto& v : comp) v *= s;
    return self();
  }
  /// this += s * o
  Derived& axpy(double s, const Derived& o) {
    for (std::size_t c = 0; c < data_.size(); ++c)
      for (std::size_t i = 0; i < data_[c].size(); ++i) data_[c][i] += s * o.data_[c][i];
    return self();
  }
  void fill(double v) {
    for (auto& comp : data_) std::fill(comp.begin(), comp.end(), v);
  }
  bool all_finite() const;

  friend bool operator==(const ComponentField& a, const ComponentField& b) {
    return a.data_ == b.data_;
  }

 protected:
  ComponentField(GridPtr grid, int components);

  GridPtr grid_;
  std::vector<std::vector<double>> data_;

 private:
  Derived& self() { return static_cast<Derived&>(*this); }
};

/// R^3-valued field: the magnetization M, its offset m = M - e3, or any
/// intermediate such as an effective field.
class MagnetizationField : public ComponentField<MagnetizationField> {
 public:
  explicit MagnetizationField(GridPtr grid);
  /// Uniform field equal to `value` everywhere.
  MagnetizationField(GridPtr grid, const std::array<double, 3>& value);

  std::array<double, 3> at(std::size_t i) const {
    return {data_[0][i], data_[1][i], data_[2][i]};
  }
  void set(std::size_t i, const std::array<double, 3>& v) {
    data_[0][i] = v[0];
    data_[1][i] = v[1];
    data_[2][i] = v[2];
  }
};

/// R^d-valued field on the torus: spin velocity v and noise fields g_k.
class VectorField : public ComponentField<VectorField> {
 public:
  explicit VectorField(GridPtr grid);
};

}  // namespace sllg
