#include "sllg/operators.hpp"

#include <cmath>
#include <stdexcept>

namespace sllg {

namespace {

void require_same_grid(const GridPtr& a, const GridPtr& b, const char* what) {
  if (a.get() != b.get() && !a->same_shape(*b))
    throw std::invalid_argument(std::string(what) + ": grid mismatch");
}

template <class Symbol>
MagnetizationField apply_symbol(const MagnetizationField& f, Symbol symbol) {
  const auto& g = *f.grid();
  MagnetizationField out(f.grid());
  Spectrum spec(g.spectral_size());
  for (int c = 0; c < 3; ++c) {
    g.forward(f.component(c), spec);
    for (std::size_t s = 0; s < spec.size(); ++s) spec[s] *= symbol(s);
    g.inverse(spec, out.component(c));
  }
  return out;
}

template <class Field>
Field project_components(const Field& f, int n) {
  const auto& g = *f.grid();
  if (n >= g.points() / 2) return f;
  Field out(f.grid());
  Spectrum spec(g.spectral_size());
  for (int c = 0; c < f.components(); ++c) {
    g.forward(f.component(c), spec);
    for (std::size_t s = 0; s < spec.size(); ++s)
      if (g.max_abs_mode(s) > n) spec[s] = 0.0;
    g.inverse(spec, out.component(c));
  }
  return out;
}

template <class Field>
Field dealias_components(const Field& f) {
  const auto& g = *f.grid();
  Field out(f.grid());
  Spectrum spec(g.spectral_size());
  for (int c = 0; c < f.components(); ++c) {
    g.forward(f.component(c), spec);
    for (std::size_t s = 0; s < spec.size(); ++s)
      if (!g.dealiased(s)) spec[s] = 0.0;
    g.inverse(spec, out.component(c));
  }
  return out;
}

template <class Field>
double sobolev_norm_impl(const Field& f, int order) {
  const auto& g = *f.grid();
  Spectrum spec(g.spectral_size());
  double sum = 0.0;
  for (int c = 0; c < f.components(); ++c) {
    g.forward(f.component(c), spec);
    for (std::size_t s = 0; s < spec.size(); ++s) {
      const double k2 = g.k_squared(s);
      double w = 0.0, kp = 1.0;
      for (int j = 0; j <= order; ++j) {
        w += kp;
        kp *= k2;
      }
      sum += g.hermitian_weight(s) * w * std::norm(spec[s]);
    }
  }
  const double n = static_cast<double>(g.size());
  return std::sqrt(sum * g.volume() / (n * n));
}

}  // namespace

std::array<Spectrum, 3> to_spectrum(const MagnetizationField& f) {
  const auto& g = *f.grid();
  std::array<Spectrum, 3> out;
  for (int c = 0; c < 3; ++c) {
    out[c].resize(g.spectral_size());
    g.forward(f.component(c), out[c]);
  }
  return out;
}

MagnetizationField from_spectrum(const GridPtr& grid, const std::array<Spectrum, 3>& s) {
  MagnetizationField out(grid);
  for (int c = 0; c < 3; ++c) grid->inverse(s[c], out.component(c));
  return out;
}

Spectrum to_spectrum(const ScalarField& f) {
  Spectrum out(f.grid()->spectral_size());
  f.grid()->forward(f.values(), out);
  return out;
}

MagnetizationField laplacian(const MagnetizationField& f) {
  const auto& g = *f.grid();
  return apply_symbol(f, [&](std::size_t s) { return -g.k_squared(s); });
}

MagnetizationField bilaplacian(const MagnetizationField& f) {
  const auto& g = *f.grid();
  return apply_symbol(f, [&](std::size_t s) { return g.k_squared(s) * g.k_squared(s); });
}

ScalarField laplacian(const ScalarField& f) {
  const auto& g = *f.grid();
  Spectrum spec = to_spectrum(f);
  for (std::size_t s = 0; s < spec.size(); ++s) spec[s] *= -g.k_squared(s);
  ScalarField out(f.grid());
  g.inverse(spec, out.values());
  return out;
}

Gradient gradient(const MagnetizationField& f, bool dealias_input) {
  const auto& g = *f.grid();
  const auto spec = to_spectrum(f);
  Gradient out(static_cast<std::size_t>(g.dim()), MagnetizationField(f.grid()));
  Spectrum work(g.spectral_size());
  for (int a = 0; a < g.dim(); ++a) {
    for (int c = 0; c < 3; ++c) {
      for (std::size_t s = 0; s < work.size(); ++s) {
        const bool keep = !dealias_input || g.dealiased(s);
        work[s] = keep ? Complex(0.0, g.k_odd(s, a)) * spec[c][s] : Complex(0.0);
      }
      g.inverse(work, out[a].component(c));
    }
  }
  return out;
}

std::vector<ScalarField> gradient(const ScalarField& f) {
  const auto& g = *f.grid();
  const Spectrum spec = to_spectrum(f);
  std::vector<ScalarField> out;
  Spectrum work(g.spectral_size());
  for (int a = 0; a < g.dim(); ++a) {
    for (std::size_t s = 0; s < work.size(); ++s) work[s] = Complex(0.0, g.k_odd(s, a)) * spec[s];
    out.emplace_back(f.grid());
    g.inverse(work, out.back().values());
  }
  return out;
}

ScalarField divergence(const VectorField& v) {
  const auto& g = *v.grid();
  Spectrum acc(g.spectral_size(), 0.0), spec(g.spectral_size());
  for (int a = 0; a < g.dim(); ++a) {
    g.forward(v.component(a), spec);
    for (std::size_t s = 0; s < spec.size(); ++s) acc[s] += Complex(0.0, g.k_odd(s, a)) * spec[s];
  }
  ScalarField out(v.grid());
  g.inverse(acc, out.values());
  return out;
}

MagnetizationField directional_derivative(const Gradient& grad_f, const VectorField& v) {
  if (grad_f.empty()) throw std::invalid_argument("directional_derivative: empty gradient");
  require_same_grid(grad_f.front().grid(), v.grid(), "directional_derivative");
  const auto& g = *v.grid();
  MagnetizationField out(v.grid());
  for (int a = 0; a < g.dim(); ++a) {
    const auto va = v.component(a);
    for (int c = 0; c < 3; ++c) {
      auto o = out.component(c);
      const auto d = grad_f[a].component(c);
      for (std::size_t i = 0; i < o.size(); ++i) o[i] += va[i] * d[i];
    }
  }
  return out;
}

MagnetizationField directional_derivative(const MagnetizationField& f, const VectorField& v) {
  require_same_grid(f.grid(), v.grid(), "directional_derivative");
  return directional_derivative(gradient(f, true), dealias(v));
}

VectorField directional_derivative(const VectorField& f, const VectorField& v) {
  require_same_grid(f.grid(), v.grid(), "directional_derivative");
  const auto& g = *f.grid();
  VectorField out(f.grid());
  for (int c = 0; c < g.dim(); ++c) {
    ScalarField comp(f.grid());
    std::copy(f.component(c).begin(), f.component(c).end(), comp.values().begin());
    const auto grads = gradient(comp);
    auto o = out.component(c);
    for (int a = 0; a < g.dim(); ++a) {
      const auto va = v.component(a);
      const auto d = grads[a].values();
      for (std::size_t i = 0; i < o.size(); ++i) o[i] += va[i] * d[i];
    }
  }
  return out;
}

MagnetizationField fourier_project(const MagnetizationField& f, int n) {
  return project_components(f, n);
}
VectorField fourier_project(const VectorField& f, int n) { return project_components(f, n); }

ScalarField fourier_project(const ScalarField& f, int n) {
  const auto& g = *f.grid();
  if (n >= g.points() / 2) return f;
  Spectrum spec = to_spectrum(f);
  for (std::size_t s = 0; s < spec.size(); ++s)
    if (g.max_abs_mode(s) > n) spec[s] = 0.0;
  ScalarField out(f.grid());
  g.inverse(spec, out.values());
  return out;
}

MagnetizationField dealias(const MagnetizationField& f) { return dealias_components(f); }
VectorField dealias(const VectorField& f) { return dealias_components(f); }

double energy_above(const MagnetizationField& f, int n) {
  const auto& g = *f.grid();
  const auto spec = to_spectrum(f);
  double above = 0.0, total = 0.0;
  for (int c = 0; c < 3; ++c)
    for (std::size_t s = 0; s < g.spectral_size(); ++s) {
      const double e = g.hermitian_weight(s) * std::norm(spec[c][s]);
      total += e;
      if (g.max_abs_mode(s) > n) above += e;
    }
  return total > 0.0 ? above / total : 0.0;
}

MagnetizationField inject(const MagnetizationField& f, const GridPtr& fine) {
  const auto& cg = *f.grid();
  const auto& fg = *fine;
  if (cg.dim() != fg.dim() || cg.extent() != fg.extent())
    throw std::invalid_argument("inject: grids must share dimension and extent");
  if (fg.points() < cg.points()) throw std::invalid_argument("inject: target grid is coarser");
  if (fg.points() == cg.points()) {
    MagnetizationField copy(fine);
    for (int c = 0; c < 3; ++c)
      std::copy(f.component(c).begin(), f.component(c).end(), copy.component(c).begin());
    return copy;
  }
  const auto cs = to_spectrum(f);
  // Index the fine spectrum by integer mode tuple; coarse Nyquist modes are dropped.
  const int nf = fg.points();
  const int half_f = nf / 2 + 1;
  const double scale = static_cast<double>(fg.size()) / static_cast<double>(cg.size());
  std::array<Spectrum, 3> fs;
  for (auto& s : fs) s.assign(fg.spectral_size(), 0.0);
  for (std::size_t s = 0; s < cg.spectral_size(); ++s) {
    if (cg.max_abs_mode(s) >= cg.points() / 2) continue;
    std::size_t idx = 0;
    for (int a = 0; a < cg.dim(); ++a) {
      const int m = cg.mode(s, a);
      if (a == cg.dim() - 1) {
        idx = idx * static_cast<std::size_t>(half_f) + static_cast<std::size_t>(m);
      } else {
        const int wrapped = m < 0 ? m + nf : m;
        idx = idx * static_cast<std::size_t>(nf) + static_cast<std::size_t>(wrapped);
      }
    }
    for (int c = 0; c < 3; ++c) fs[c][idx] = cs[c][s] * scale;
  }
  return from_spectrum(fine, fs);
}

MagnetizationField cross(const MagnetizationField& a, const MagnetizationField& b) {
  require_same_grid(a.grid(), b.grid(), "cross");
  MagnetizationField out(a.grid());
  const std::size_t n = a.grid()->size();
  for (std::size_t i = 0; i < n; ++i) {
    const auto x = a.at(i);
    const auto y = b.at(i);
    out.set(i, {x[1] * y[2] - x[2] * y[1], x[2] * y[0] - x[0] * y[2], x[0] * y[1] - x[1] * y[0]});
  }
  return out;
}

ScalarField dot(const MagnetizationField& a, const MagnetizationField& b) {
  require_same_grid(a.grid(), b.grid(), "dot");
  ScalarField out(a.grid());
  for (int c = 0; c < 3; ++c) {
    const auto x = a.component(c);
    const auto y = b.component(c);
    for (std::size_t i = 0; i < x.size(); ++i) out[i] += x[i] * y[i];
  }
  return out;
}

MagnetizationField scale(const ScalarField& s, const MagnetizationField& f) {
  require_same_grid(s.grid(), f.grid(), "scale");
  MagnetizationField out(f.grid());
  for (int c = 0; c < 3; ++c) {
    const auto x = f.component(c);
    auto o = out.component(c);
    for (std::size_t i = 0; i < x.size(); ++i) o[i] = s[i] * x[i];
  }
  return out;
}

MagnetizationField constant_vector(const GridPtr& grid, const std::array<double, 3>& v) {
  return MagnetizationField(grid, v);
}

double integrate(const ScalarField& f) {
  double sum = 0.0;
  for (double v : f.values()) sum += v;
  return sum * f.grid()->cell_volume();
}

double inner(const MagnetizationField& a, const MagnetizationField& b) {
  require_same_grid(a.grid(), b.grid(), "inner");
  double sum = 0.0;
  for (int c = 0; c < 3; ++c) {
    const auto x = a.component(c);
    const auto y = b.component(c);
    for (std::size_t i = 0; i < x.size(); ++i) sum += x[i] * y[i];
  }
  return sum * a.grid()->cell_volume();
}

double inner(const ScalarField& a, const ScalarField& b) {
  require_same_grid(a.grid(), b.grid(), "inner");
  double sum = 0.0;
  for (std::size_t i = 0; i < a.values().size(); ++i) sum += a[i] * b[i];
  return sum * a.grid()->cell_volume();
}

double inner(const Gradient& a, const Gradient& b) {
  double sum = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) sum += inner(a[i], b[i]);
  return sum;
}

double sobolev_norm(const MagnetizationField& f, int order) { return sobolev_norm_impl(f, order); }
double sobolev_norm(const VectorField& f, int order) { return sobolev_norm_impl(f, order); }

double norm(const MagnetizationField& f, NormKind kind) {
  switch (kind) {
    case NormKind::L2:
      return std::sqrt(inner(f, f));
    case NormKind::H1:
      return sobolev_norm(f, 1);
    case NormKind::H2:
      return sobolev_norm(f, 2);
    case NormKind::Linf: {
      double m = 0.0;
      for (std::size_t i = 0; i < f.grid()->size(); ++i) {
        const auto v = f.at(i);
        m = std::max(m, std::sqrt(v[0] * v[0] + v[1] * v[1] + v[2] * v[2]));
      }
      return m;
    }
    case NormKind::L2Weighted: {
      const auto rho = weight_rho(f.grid());
      return std::sqrt(inner(rho, dot(f, f)));
    }
  }
  throw std::invalid_argument("norm: unknown kind");
}

std::array<double, 3> centered_coordinate(const SpectralGrid& grid, std::size_t idx) {
  std::array<double, 3> x{0.0, 0.0, 0.0};
  const auto p = grid.point_index(idx);
  for (int a = 0; a < grid.dim(); ++a) {
    const int j = p[a] < grid.points() / 2 ? p[a] : p[a] - grid.points();
    x[a] = j * grid.spacing();
  }
  return x;
}

ScalarField weight_rho(const GridPtr& grid) {
  ScalarField rho(grid);
  for (std::size_t i = 0; i < grid->size(); ++i) {
    const auto x = centered_coordinate(*grid, i);
    const double r2 = x[0] * x[0] + x[1] * x[1] + x[2] * x[2];
    rho[i] = 1.0 / ((1.0 + r2) * (1.0 + r2));
  }
  return rho;
}

}  // namespace sllg
