#include "sllg/identities.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <random>
#include <stdexcept>

#include "sllg/dynamics.hpp"
#include "sllg/initial.hpp"
#include "sllg/operators.hpp"

namespace sllg {

namespace {

// Sum of `count` random plane waves with integer frequencies in [-kmax, kmax].
MagnetizationField random_polynomial(const GridPtr& g, std::mt19937_64& rng, int kmax, int count = 6) {
  std::uniform_int_distribution<int> freq(-kmax, kmax);
  std::normal_distribution<double> coef;
  MagnetizationField f(g);
  const double k0 = g->base_wavenumber();
  for (int w = 0; w < count; ++w) {
    const int a = freq(rng), b = freq(rng);
    std::array<double, 3> ca, sa;
    for (int c = 0; c < 3; ++c) {
      ca[c] = coef(rng);
      sa[c] = coef(rng);
    }
    for (std::size_t i = 0; i < g->size(); ++i) {
      const double ph = k0 * (a * g->coordinate(i, 0) + b * g->coordinate(i, 1));
      const double cs = std::cos(ph), sn = std::sin(ph);
      for (int c = 0; c < 3; ++c) f.component(c)[i] += ca[c] * cs + sa[c] * sn;
    }
  }
  return f;
}

VectorField planar(const MagnetizationField& m) {
  VectorField v(m.grid());
  for (int a = 0; a < 2; ++a)
    std::copy(m.component(a).begin(), m.component(a).end(), v.component(a).begin());
  return v;
}

struct Trial {
  MagnetizationField u, w, phi, sphere;
  VectorField g;
};

// One evaluation: |lhs - sign * rhs| / scale.
using Identity = std::function<double(const Trial&, double sign)>;

double relative(double lhs, double rhs, double scale) {
  const double r = std::abs(lhs - rhs);
  return scale > 0.0 ? r / scale : r;
}

const std::vector<std::pair<std::string, Identity>>& identities() {
  static const std::vector<std::pair<std::string, Identity>> list = {
      {"laplacian_by_parts",
       [](const Trial& t, double sign) {
         // <D u, w> = -<grad u, grad w>
         const auto lap = laplacian(t.u);
         const double lhs = inner(lap, t.w);
         const double rhs = -inner(gradient(t.u), gradient(t.w));
         return relative(lhs, sign * rhs, norm(lap, NormKind::L2) * norm(t.w, NormKind::L2));
       }},
      {"bilaplacian_by_parts",
       [](const Trial& t, double sign) {
         // <D2 u, w> = <D u, D w>
         const auto bilap = bilaplacian(t.u);
         const double lhs = inner(bilap, t.w);
         const double rhs = inner(laplacian(t.u), laplacian(t.w));
         return relative(lhs, sign * rhs, norm(bilap, NormKind::L2) * norm(t.w, NormKind::L2));
       }},
      {"transport_energy",
       [](const Trial& t, double sign) {
         // <u, grad_g u> = -1/2 <(div g) u, u>
         const auto tr = directional_derivative(t.u, t.g);
         const double lhs = inner(t.u, tr);
         const double rhs = -0.5 * inner(scale(divergence(t.g), t.u), t.u);
         return relative(lhs, sign * rhs, norm(t.u, NormKind::L2) * norm(tr, NormKind::L2));
       }},
      {"weak_form_cross",
       [](const Trial& t, double sign) {
         const auto r = weak_form_check(t.u, t.w, t.phi).first;
         return relative(r.lhs, sign * r.rhs, r.scale);
       }},
      {"weak_form_double_cross",
       [](const Trial& t, double sign) {
         const auto r = weak_form_check(t.u, t.w, t.phi).second;
         return relative(r.lhs, sign * r.rhs, r.scale);
       }},
      {"double_cross_expansion",
       [](const Trial& t, double sign) {
         // M x (M x D2M) = -D2M + <M, D2M> M for |M| = 1
         const auto& m = t.sphere;
         const auto b = bilaplacian(m);
         auto lhs = cross(m, cross(m, b));
         auto rhs = scale(dot(m, b), m);
         rhs -= b;
         rhs *= sign;
         lhs -= rhs;
         return norm(lhs, NormKind::Linf) / norm(b, NormKind::Linf);
       }},
  };
  return list;
}

}  // namespace

bool IdentityReport::passed() const {
  return !outcomes.empty() &&
         std::all_of(outcomes.begin(), outcomes.end(), [](const IdentityOutcome& o) { return o.passed; });
}

const std::vector<std::string>& identity_names() {
  static const std::vector<std::string> names = [] {
    std::vector<std::string> out;
    for (const auto& [name, fn] : identities()) out.push_back(name);
    return out;
  }();
  return names;
}

IdentityReport run_identity_suite(const IdentitySuiteConfig& cfg) {
  if (cfg.fault) {
    const auto& names = identity_names();
    if (std::find(names.begin(), names.end(), *cfg.fault) == names.end())
      throw std::invalid_argument("check.fault: unknown identity '" + *cfg.fault + "'");
  }
  if (cfg.trials < 1) throw std::invalid_argument("check.trials: must be >= 1");
  auto g = make_grid(2, cfg.points, cfg.extent);
  // Products of up to four fields must stay below the grid Nyquist frequency.
  if (4 * cfg.max_frequency >= cfg.points / 2)
    throw std::invalid_argument("check.max_frequency: too high for the grid");

  IdentityReport report;
  report.tolerance = cfg.tolerance;
  for (const auto& [name, fn] : identities()) report.outcomes.push_back({name, 0.0, 0, false});

  std::mt19937_64 rng(cfg.seed);
  for (int trial = 0; trial < cfg.trials; ++trial) {
    Trial t{random_polynomial(g, rng, cfg.max_frequency), random_polynomial(g, rng, cfg.max_frequency),
            random_polynomial(g, rng, cfg.max_frequency),
            random_sphere_field(g, cfg.seed * 1000 + static_cast<std::uint64_t>(trial), 0.6,
                                std::max(1, cfg.max_frequency / 2)),
            planar(random_polynomial(g, rng, cfg.max_frequency))};
    for (std::size_t k = 0; k < identities().size(); ++k) {
      const auto& [name, fn] = identities()[k];
      const double sign = cfg.fault && *cfg.fault == name ? -1.0 : 1.0;
      auto& out = report.outcomes[k];
      out.worst = std::max(out.worst, fn(t, sign));
      ++out.trials;
    }
  }
  for (auto& o : report.outcomes) o.passed = o.worst <= cfg.tolerance;
  return report;
}

}  // namespace sllg
