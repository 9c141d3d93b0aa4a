#include "sllg/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "sllg/diagnostics.hpp"

namespace sllg {

namespace {

// exp(-1/t) for t > 0, the building block of the C-infinity bridge.
double bump(double t) { return t > 0.0 ? std::exp(-1.0 / t) : 0.0; }
double bump_derivative(double t) { return t > 0.0 ? std::exp(-1.0 / t) / (t * t) : 0.0; }

void cross_into(const std::array<double, 3>& a, const std::array<double, 3>& b,
                std::array<double, 3>& out) {
  out = {a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]};
}

// sum_i a_i x b_i over the spatial index of two gradients.
MagnetizationField gradient_cross(const Gradient& a, const Gradient& b) {
  MagnetizationField out(a.front().grid());
  for (std::size_t i = 0; i < a.size(); ++i) out += cross(a[i], b[i]);
  return out;
}

}  // namespace

void CutoffSpec::validate() const {
  if (!(R > 1.0)) throw std::invalid_argument("scheme.cutoff_R: must satisfy R > 1");
}

double cutoff_psi(double y, const CutoffSpec& spec) {
  if (y <= spec.R) return 1.0;
  if (y >= spec.R + 1.0) return 0.0;
  const double t = y - spec.R;
  const double a = bump(1.0 - t);
  return a / (a + bump(t));
}

double cutoff_psi_derivative(double y, const CutoffSpec& spec) {
  if (y <= spec.R || y >= spec.R + 1.0) return 0.0;
  const double t = y - spec.R;
  const double a = bump(1.0 - t), b = bump(t);
  const double da = -bump_derivative(1.0 - t), db = bump_derivative(t);
  const double den = a + b;
  return (da * den - a * (da + db)) / (den * den);
}

FieldDerivatives field_derivatives(const MagnetizationField& u, const ModelParams& p) {
  const auto& g = *u.grid();
  auto spec = to_spectrum(u);
  Gradient grad(static_cast<std::size_t>(g.dim()), MagnetizationField(u.grid()));
  MagnetizationField unresolved(u.grid());
  Spectrum work(g.spectral_size());
  for (int c = 0; c < 3; ++c) {
    bool any = false;
    for (std::size_t s = 0; s < g.spectral_size(); ++s) {
      const double k2 = g.k_squared(s);
      work[s] = g.dealiased(s) ? Complex(0.0) : k2 * k2 * spec[c][s];
      any |= work[s] != Complex(0.0);
      if (!g.dealiased(s)) spec[c][s] = 0.0;
    }
    if (any) g.inverse(work, unresolved.component(c));
  }
  for (int a = 0; a < g.dim(); ++a)
    for (int c = 0; c < 3; ++c) {
      for (std::size_t s = 0; s < work.size(); ++s) work[s] = Complex(0.0, g.k_odd(s, a)) * spec[c][s];
      g.inverse(work, grad[static_cast<std::size_t>(a)].component(c));
    }
  MagnetizationField minus_field(u.grid());
  for (int c = 0; c < 3; ++c) {
    for (std::size_t s = 0; s < work.size(); ++s) {
      const double k2 = g.k_squared(s);
      work[s] = (k2 * k2 + p.lambda * k2) * spec[c][s];
    }
    g.inverse(work, minus_field.component(c));
  }
  for (auto& v : minus_field.component(2)) v -= p.h;
  return {std::move(minus_field), std::move(grad), std::move(unresolved)};
}

MagnetizationField drift_bar(const MagnetizationField& u, const ModelParams& p,
                             const FieldDerivatives& d, const VectorField* current) {
  const auto& g = *u.grid();
  MagnetizationField out(u.grid());
  MagnetizationField transport(u.grid());
  const bool with_current = current != nullptr && p.gamma != 0.0;
  if (with_current) transport = directional_derivative(d.grad, *current);
  std::array<double, 3> ux, uux, tv, utv;
  for (std::size_t i = 0; i < g.size(); ++i) {
    const auto ui = u.at(i);
    const auto x = d.minus_field.at(i);  // -H
    const auto hi = d.unresolved.at(i);
    cross_into(ui, x, ux);
    cross_into(ui, ux, uux);
    std::array<double, 3> r{ux[0] + p.alpha * (uux[0] - hi[0]), ux[1] + p.alpha * (uux[1] - hi[1]),
                            ux[2] + p.alpha * (uux[2] - hi[2])};
    if (with_current) {
      tv = transport.at(i);
      cross_into(ui, tv, utv);
      for (int c = 0; c < 3; ++c) r[c] -= p.gamma * utv[c];
    }
    out.set(i, r);
  }
  return out;
}

MagnetizationField drift_bar(const MagnetizationField& u, const ModelParams& p) {
  const auto d = field_derivatives(u, p);
  if (p.current) {
    const auto v = dealias(*p.current);
    return drift_bar(u, p, d, &v);
  }
  return drift_bar(u, p, d, nullptr);
}

MagnetizationField drift_full(const MagnetizationField& u, const ModelParams& p) {
  const auto d = field_derivatives(u, p);
  if (!p.current) return drift_bar(u, p, d, nullptr);
  const auto v = dealias(*p.current);
  auto out = drift_bar(u, p, d, &v);
  out -= directional_derivative(d.grad, v);
  return out;
}

MagnetizationField torque_form_rhs(const MagnetizationField& m, const TorqueParams& p,
                                   double sphere_tolerance) {
  const double dev = max_sphere_deviation(m);
  if (dev > sphere_tolerance)
    throw std::domain_error("torque_form_rhs: input deviates from the unit sphere by " +
                            std::to_string(dev));
  ModelParams field_params;
  field_params.alpha = p.alpha;
  field_params.h = p.h;
  field_params.lambda = p.lambda;
  const auto d = field_derivatives(m, field_params);
  const auto& g = *m.grid();
  MagnetizationField transport(m.grid());
  if (p.raw_current) transport = directional_derivative(d.grad, dealias(*p.raw_current));
  MagnetizationField out(m.grid());
  std::array<double, 3> tau, mt;
  for (std::size_t i = 0; i < g.size(); ++i) {
    const auto mi = m.at(i);
    const auto x = d.minus_field.at(i);
    const auto t = transport.at(i);
    const auto hi = d.unresolved.at(i);
    // H - beta grad_v M = -(x) - beta t
    const std::array<double, 3> inner_field{-x[0] - p.beta * t[0], -x[1] - p.beta * t[1],
                                            -x[2] - p.beta * t[2]};
    cross_into(mi, inner_field, tau);
    for (int c = 0; c < 3; ++c) tau[c] += t[c];
    cross_into(mi, tau, mt);
    out.set(i, {-tau[0] - p.alpha * (mt[0] + hi[0]), -tau[1] - p.alpha * (mt[1] + hi[1]),
                -tau[2] - p.alpha * (mt[2] + hi[2])});
  }
  return out;
}

MagnetizationField transport_second_order(const MagnetizationField& u, const VectorField& g) {
  const auto first = directional_derivative(u, g);
  return directional_derivative(first, g);
}

MagnetizationField stratonovich_correction(const MagnetizationField& u, const NoiseModel& noise) {
  MagnetizationField out(u.grid());
  const auto grad = gradient(u, true);
  for (int k = 0; k < noise.size(); ++k) {
    const auto& gk = noise.field(k);
    const auto first = directional_derivative(grad, gk);
    out += directional_derivative(gradient(first, true), gk);
  }
  out *= 0.5;
  return out;
}

MagnetizationField diffusion_apply(const MagnetizationField& u, int k, const NoiseModel& noise) {
  if (k < 0 || k >= noise.size()) throw std::out_of_range("diffusion_apply: noise index out of range");
  auto out = directional_derivative(u, noise.field(k));
  out *= -1.0;
  return out;
}

std::pair<IdentityResidual, IdentityResidual> weak_form_check(const MagnetizationField& u,
                                                              const MagnetizationField& w,
                                                              const MagnetizationField& phi) {
  const auto lap_u = laplacian(u);
  const auto bilap_u = bilaplacian(u);
  const auto lap_w = laplacian(w);
  const auto lap_phi = laplacian(phi);
  const auto grad_w = gradient(w);
  const auto grad_phi = gradient(phi);

  IdentityResidual first;
  first.lhs = inner(cross(w, bilap_u), phi);
  const double t1 = inner(lap_u, cross(lap_phi, w));
  const double t2 = inner(lap_u, cross(phi, lap_w));
  const double t3 = 2.0 * inner(lap_u, gradient_cross(grad_phi, grad_w));
  first.rhs = t1 + t2 + t3;
  first.residual = std::abs(first.lhs - first.rhs);
  // |<w x D2u, phi>| <= |w|_inf |D2u| |phi|
  const double w_inf = norm(w, NormKind::Linf);
  const double bound1 = w_inf * norm(bilap_u, NormKind::L2) * norm(phi, NormKind::L2);
  const double scale1 = std::max({bound1, std::abs(t1), std::abs(t2), std::abs(t3)});
  first.scale = scale1;
  first.relative = scale1 > 0.0 ? first.residual / scale1 : 0.0;

  IdentityResidual second;
  second.lhs = inner(cross(w, cross(w, bilap_u)), phi);
  const auto w_lap_u = cross(w, lap_u);
  auto bracket = cross(phi, lap_w);
  bracket += cross(lap_phi, w);
  auto grad_term = gradient_cross(grad_phi, grad_w);
  grad_term *= 2.0;
  bracket += grad_term;
  const double s1 = inner(w_lap_u, bracket);
  const double s2 = inner(lap_u, cross(cross(phi, w), lap_w));
  double s3 = 0.0;
  for (std::size_t i = 0; i < grad_w.size(); ++i) {
    auto rhs_i = cross(grad_phi[i], w);
    rhs_i += cross(phi, grad_w[i]);
    s3 += inner(cross(grad_w[i], lap_u), rhs_i);
  }
  s3 *= 2.0;
  second.rhs = s1 + s2 + s3;
  second.residual = std::abs(second.lhs - second.rhs);
  const double bound2 = w_inf * bound1;
  const double scale2 = std::max({bound2, std::abs(s1), std::abs(s2), std::abs(s3)});
  second.scale = scale2;
  second.relative = scale2 > 0.0 ? second.residual / scale2 : 0.0;
  return {first, second};
}

double double_cross_residual(const MagnetizationField& m, double alpha) {
  const auto b = bilaplacian(m);
  const auto& g = *m.grid();
  double worst = 0.0, scale = 0.0;
  std::array<double, 3> mb, mmb;
  for (std::size_t i = 0; i < g.size(); ++i) {
    const auto mi = m.at(i);
    const auto bi = b.at(i);
    cross_into(mi, bi, mb);
    cross_into(mi, mb, mmb);
    const double proj = mi[0] * bi[0] + mi[1] * bi[1] + mi[2] * bi[2];
    for (int c = 0; c < 3; ++c) {
      const double lhs = alpha * mmb[c];
      const double rhs = -alpha * bi[c] + alpha * proj * mi[c];
      worst = std::max(worst, std::abs(lhs - rhs));
      scale = std::max(scale, std::abs(alpha * bi[c]));
    }
  }
  return scale > 0.0 ? worst / scale : worst;
}

}  // namespace sllg
