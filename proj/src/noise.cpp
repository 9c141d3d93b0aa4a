#include "sllg/noise.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numbers>
#include <stdexcept>
#include <string>

#include "sllg/operators.hpp"
#include "sllg/snapshot.hpp"

namespace sllg {

namespace {

std::uint64_t mix64(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

bool in_half_space(const std::array<int, 3>& k) {
  if (k[0] != 0) return k[0] > 0;
  if (k[1] != 0) return k[1] > 0;
  return k[2] > 0;
}

std::array<double, 3> basis_direction(const std::array<int, 3>& k, int dim, bool div_free) {
  std::array<double, 3> a{0.0, 0.0, 0.0};
  const double kn = std::sqrt(double(k[0]) * k[0] + double(k[1]) * k[1] + double(k[2]) * k[2]);
  if (!div_free) {
    for (int i = 0; i < 3; ++i) a[i] = k[i] / kn;
    return a;
  }
  if (dim == 2) return {-k[1] / kn, k[0] / kn, 0.0};
  // kappa x e, with e = e3 unless kappa is parallel to it.
  std::array<double, 3> e = (k[0] == 0 && k[1] == 0) ? std::array<double, 3>{1.0, 0.0, 0.0}
                                                       : std::array<double, 3>{0.0, 0.0, 1.0};
  a = {k[1] * e[2] - k[2] * e[1], k[2] * e[0] - k[0] * e[2], k[0] * e[1] - k[1] * e[0]};
  const double an = std::sqrt(a[0] * a[0] + a[1] * a[1] + a[2] * a[2]);
  for (auto& v : a) v /= an;
  return a;
}

}  // namespace

NoiseModel NoiseModel::build_basis(const GridPtr& grid, int count, double decay_exponent,
                                   bool divergence_free, std::optional<double> trace_target) {
  if (count < 0) throw std::invalid_argument("noise.modes: must be >= 0");
  if (trace_target && !(*trace_target >= 0.0))
    throw std::invalid_argument("noise.trace: must be >= 0");
  const int dim = grid->dim();
  const int kmax = grid->dealias_max();

  std::vector<std::array<int, 3>> lattice;
  const int zmax = dim == 3 ? kmax : 0;
  for (int a = -kmax; a <= kmax; ++a)
    for (int b = -kmax; b <= kmax; ++b)
      for (int c = -zmax; c <= zmax; ++c) {
        std::array<int, 3> k{a, b, c};
        if (in_half_space(k)) lattice.push_back(k);
      }
  std::stable_sort(lattice.begin(), lattice.end(), [](const auto& x, const auto& y) {
    const int nx = x[0] * x[0] + x[1] * x[1] + x[2] * x[2];
    const int ny = y[0] * y[0] + y[1] * y[1] + y[2] * y[2];
    if (nx != ny) return nx < ny;
    return x < y;
  });
  if (static_cast<std::size_t>(count) > 2 * lattice.size())
    throw std::invalid_argument("noise.modes: K=" + std::to_string(count) + " exceeds the " +
                                std::to_string(2 * lattice.size()) +
                                " basis fields resolved by the grid");

  NoiseModel model;
  model.grid_ = grid;
  model.divergence_free_ = divergence_free;
  model.decay_ = decay_exponent;

  const double k0 = grid->base_wavenumber();
  std::vector<double> weights;
  for (int idx = 0; idx < count; ++idx) {
    const auto& kv = lattice[static_cast<std::size_t>(idx / 2)];
    const bool sine = idx % 2 == 1;
    const auto dir = basis_direction(kv, dim, divergence_free);
    VectorField f(grid);
    for (std::size_t i = 0; i < grid->size(); ++i) {
      double phase = 0.0;
      for (int a = 0; a < dim; ++a) phase += k0 * kv[a] * grid->coordinate(i, a);
      const double t = sine ? std::sin(phase) : std::cos(phase);
      for (int a = 0; a < dim; ++a) f.component(a)[i] = dir[a] * t;
    }
    f *= 1.0 / sobolev_norm(f, 4);
    double kk = 0.0;
    for (int a = 0; a < dim; ++a) kk += (k0 * kv[a]) * (k0 * kv[a]);
    weights.push_back(std::pow(1.0 + kk, -0.5 * decay_exponent));
    model.fields_.push_back(std::move(f));
    model.modes_.push_back({kv, sine});
  }
  double amp = 1.0;
  if (trace_target) {
    double sum = 0.0;
    for (double w : weights) sum += w * w;
    amp = sum > 0.0 ? std::sqrt(*trace_target / sum) : 0.0;
  }
  for (std::size_t k = 0; k < weights.size(); ++k) {
    const double q = amp * weights[k];
    model.q_.push_back(q);
    model.fields_[k] *= q;
  }
  return model;
}

NoiseModel NoiseModel::from_fields(std::vector<VectorField> fields, std::vector<double> q) {
  if (fields.empty()) throw std::invalid_argument("noise: at least one field is required");
  if (fields.size() != q.size()) throw std::invalid_argument("noise: fields and q differ in length");
  NoiseModel model;
  model.grid_ = fields.front().grid();
  model.divergence_free_ = true;
  for (const auto& f : fields) {
    for (double v : divergence(f).values())
      if (std::abs(v) > 1e-10) model.divergence_free_ = false;
  }
  model.fields_ = std::move(fields);
  model.q_ = std::move(q);
  model.modes_.resize(model.fields_.size());
  return model;
}

double NoiseModel::tail_fraction() const {
  double total = 0.0, head = 0.0;
  const std::size_t half = q_.size() / 2;
  for (std::size_t k = 0; k < q_.size(); ++k) {
    total += q_[k] * q_[k];
    if (k < half) head += q_[k] * q_[k];
  }
  return total > 0.0 ? (total - head) / total : 0.0;
}

VectorField NoiseModel::combine(std::span<const double> increments) const {
  if (increments.size() != fields_.size())
    throw std::invalid_argument("noise: increment count does not match the basis size");
  VectorField xi(grid_);
  for (std::size_t k = 0; k < fields_.size(); ++k)
    if (increments[k] != 0.0) xi.axpy(increments[k], fields_[k]);
  return xi;
}

double trace(const NoiseModel& model) {
  double sum = 0.0;
  for (double q : model.q()) sum += q * q;
  return sum;
}

double standard_normal(std::uint64_t seed, std::uint64_t trajectory, std::uint64_t step,
                       std::uint64_t k) {
  std::uint64_t key = mix64(seed);
  key = mix64(key ^ trajectory);
  key = mix64(key ^ step);
  key = mix64(key ^ k);
  constexpr double kUnit = 1.0 / 9007199254740992.0;  // 2^-53
  const double u1 = static_cast<double>((mix64(key ^ 0x1ULL) >> 11) + 1) * kUnit;
  const double u2 = static_cast<double>(mix64(key ^ 0x2ULL) >> 11) * kUnit;
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

NoisePath::NoisePath(std::uint64_t seed, std::uint64_t trajectory, double dt, int steps,
                     int modes, std::vector<double> increments)
    : seed_(seed),
      trajectory_(trajectory),
      dt_(dt),
      steps_(steps),
      modes_(modes),
      increments_(std::move(increments)) {
  if (increments_.size() != static_cast<std::size_t>(steps) * static_cast<std::size_t>(modes))
    throw std::invalid_argument("noise path: increment table has the wrong size");
}

NoisePath NoisePath::coarsen(int factor) const {
  if (factor < 1 || steps_ % factor != 0)
    throw std::invalid_argument("noise path: coarsening factor must divide the step count");
  const int steps = steps_ / factor;
  std::vector<double> inc(static_cast<std::size_t>(steps) * static_cast<std::size_t>(modes_), 0.0);
  for (int s = 0; s < steps; ++s)
    for (int k = 0; k < modes_; ++k) {
      double sum = 0.0;
      for (int j = 0; j < factor; ++j) sum += increment(s * factor + j, k);
      inc[static_cast<std::size_t>(s) * static_cast<std::size_t>(modes_) + static_cast<std::size_t>(k)] = sum;
    }
  return NoisePath(seed_, trajectory_, dt_ * factor, steps, modes_, std::move(inc));
}

NoisePath NoisePath::prefix(int steps) const {
  if (steps < 0 || steps > steps_) throw std::invalid_argument("noise path: prefix out of range");
  std::vector<double> inc(increments_.begin(),
                          increments_.begin() + static_cast<std::ptrdiff_t>(steps) * modes_);
  return NoisePath(seed_, trajectory_, dt_, steps, modes_, std::move(inc));
}

void NoisePath::write_csv(const std::filesystem::path& path) const {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw std::runtime_error("cannot open " + path.string());
  out << "step,k,dW\n";
  for (int s = 0; s < steps_; ++s)
    for (int k = 0; k < modes_; ++k) out << s << ',' << k << ',' << format_double(increment(s, k)) << '\n';
}

NoisePath sample_path(int modes, int steps, double dt, std::uint64_t seed, std::uint64_t trajectory) {
  if (steps < 0) throw std::invalid_argument("noise path: steps must be >= 0");
  if (!(dt >= 0.0)) throw std::invalid_argument("noise path: dt must be >= 0");
  const double sd = std::sqrt(dt);
  std::vector<double> inc(static_cast<std::size_t>(steps) * static_cast<std::size_t>(modes));
  for (int s = 0; s < steps; ++s)
    for (int k = 0; k < modes; ++k)
      inc[static_cast<std::size_t>(s) * static_cast<std::size_t>(modes) + static_cast<std::size_t>(k)] =
          sd * standard_normal(seed, trajectory, static_cast<std::uint64_t>(s), static_cast<std::uint64_t>(k));
  return NoisePath(seed, trajectory, dt, steps, modes, std::move(inc));
}

NoisePath sample_path(const NoiseModel& model, int steps, double dt, std::uint64_t seed,
                      std::uint64_t trajectory) {
  return sample_path(model.size(), steps, dt, seed, trajectory);
}

}  // namespace sllg
