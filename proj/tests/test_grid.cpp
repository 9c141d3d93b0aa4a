#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <random>

#include "doctest.h"
#include "sllg/operators.hpp"
#include "sllg/snapshot.hpp"
#include "support.hpp"

using namespace sllg;
using sllg::test::max_abs;
using sllg::test::max_abs_diff;

namespace {

constexpr double kPi = std::numbers::pi;

MagnetizationField sin_x1_e1(const GridPtr& g) {
  MagnetizationField f(g);
  for (std::size_t i = 0; i < g->size(); ++i) f.component(0)[i] = std::sin(g->coordinate(i, 0));
  return f;
}

// 4th-order central Laplacian of analytic values on a grid refined `r` times,
// read back at the coarse points.
MagnetizationField fd_laplacian(const std::vector<test::Wave>& waves, const GridPtr& coarse, int r,
                                int applications) {
  const int n = coarse->points() * r;
  const double h = coarse->extent() / n;
  const double k0 = coarse->base_wavenumber();
  std::vector<std::array<double, 3>> v(static_cast<std::size_t>(n) * n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) v[static_cast<std::size_t>(i) * n + j] = test::eval_waves(waves, {i * h, j * h, 0}, k0);
  auto wrap = [n](int i) { return ((i % n) + n) % n; };
  for (int app = 0; app < applications; ++app) {
    std::vector<std::array<double, 3>> out(v.size());
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        auto at = [&](int a, int b) { return v[static_cast<std::size_t>(wrap(a)) * n + wrap(b)]; };
        for (int c = 0; c < 3; ++c) {
          const double dxx = (-at(i + 2, j)[c] + 16 * at(i + 1, j)[c] - 30 * at(i, j)[c] +
                              16 * at(i - 1, j)[c] - at(i - 2, j)[c]) / (12 * h * h);
          const double dyy = (-at(i, j + 2)[c] + 16 * at(i, j + 1)[c] - 30 * at(i, j)[c] +
                              16 * at(i, j - 1)[c] - at(i, j - 2)[c]) / (12 * h * h);
          out[static_cast<std::size_t>(i) * n + j][c] = dxx + dyy;
        }
      }
    v = std::move(out);
  }
  MagnetizationField f(coarse);
  const int nc = coarse->points();
  for (int i = 0; i < nc; ++i)
    for (int j = 0; j < nc; ++j) f.set(static_cast<std::size_t>(i) * nc + j, v[static_cast<std::size_t>(i * r) * n + j * r]);
  return f;
}

}  // namespace

TEST_CASE("grid construction validates its arguments") {
  CHECK_THROWS_AS(SpectralGrid(1, 16), std::invalid_argument);
  CHECK_THROWS_AS(SpectralGrid(2, 6), std::invalid_argument);
  CHECK_THROWS_AS(SpectralGrid(2, 15), std::invalid_argument);
  CHECK_THROWS_AS(SpectralGrid(2, 16, -1.0), std::invalid_argument);
  SpectralGrid g(2, 16);
  CHECK(g.size() == 256);
  CHECK(g.spectral_size() == 16 * 9);
  CHECK(g.dealias_max() == 5);
}

TEST_CASE("wavenumber tables are symmetric and the dealias mask is monotone") {
  SpectralGrid g(2, 16);
  std::vector<int> first_axis;
  for (std::size_t s = 0; s < g.spectral_size(); ++s) {
    if (g.mode(s, 1) == 0) first_axis.push_back(g.mode(s, 0));
    if (g.dealiased(s)) {
      for (int a = 0; a < 2; ++a) CHECK(std::abs(g.mode(s, a)) <= g.dealias_max());
    } else {
      CHECK(g.max_abs_mode(s) > g.dealias_max());
    }
  }
  // Every non-Nyquist frequency appears together with its negative.
  for (int m : first_axis)
    if (std::abs(m) < 8) CHECK(std::count(first_axis.begin(), first_axis.end(), -m) == 1);
  CHECK(first_axis.size() == 16);
}

TEST_CASE("transforms round trip") {
  auto g = make_grid(2, 32);
  std::mt19937_64 rng(1);
  std::normal_distribution<double> nd;
  ScalarField f(g);
  for (auto& v : f.values()) v = nd(rng);
  Spectrum spec(g->spectral_size());
  ScalarField back(g);
  g->forward(f.values(), spec);
  g->inverse(spec, back.values());
  for (std::size_t i = 0; i < g->size(); ++i) CHECK(back[i] == doctest::Approx(f[i]).epsilon(1e-13));
}

TEST_CASE("laplacian examples") {
  auto g = make_grid(2, 32);
  CHECK(max_abs(laplacian(constant_vector(g, {0.3, -1.0, 2.0}))) < 1e-13);
  auto f = sin_x1_e1(g);
  auto expect = f;
  expect *= -1.0;
  CHECK(max_abs_diff(laplacian(f), expect) < 1e-12);
}

TEST_CASE("laplacian and bilaplacian match a finite-difference oracle") {
  auto g = make_grid(2, 64);
  std::mt19937_64 rng(7);
  const auto waves = test::random_waves(rng, 2, 3, 6);
  const auto f = test::sample_waves(g, waves);
  const auto lap = laplacian(f);
  const auto oracle = fd_laplacian(waves, g, 4, 1);
  CHECK(max_abs_diff(lap, oracle) / max_abs(oracle) < 1e-6);
  const auto bilap = bilaplacian(f);
  const auto oracle2 = fd_laplacian(waves, g, 4, 2);
  CHECK(max_abs_diff(bilap, oracle2) / max_abs(oracle2) < 1e-6);
}

TEST_CASE("bilaplacian examples") {
  auto g = make_grid(2, 32);
  auto f = sin_x1_e1(g);
  // Roundoff in the unresolved modes is amplified by up to k_max^4.
  CHECK(max_abs_diff(bilaplacian(f), f) < 1e-11);
  std::mt19937_64 rng(3);
  auto r = test::random_field(g, rng, 5, 8);
  const auto b = bilaplacian(r);
  CHECK(max_abs_diff(b, laplacian(laplacian(r))) / max_abs(b) < 1e-12);
}

TEST_CASE("spectral derivatives are exact on single modes") {
  auto g = make_grid(2, 32);
  for (int kx = 0; kx <= g->dealias_max(); kx += 3)
    for (int ky = -g->dealias_max(); ky <= g->dealias_max(); ky += 4) {
      MagnetizationField f(g), expect(g);
      const double k2 = kx * kx + ky * ky;
      for (std::size_t i = 0; i < g->size(); ++i) {
        const double ph = kx * g->coordinate(i, 0) + ky * g->coordinate(i, 1);
        f.component(1)[i] = std::cos(ph);
        expect.component(1)[i] = k2 * k2 * std::cos(ph);
      }
      const double scale = std::max(1.0, k2 * k2);
      CHECK(max_abs_diff(bilaplacian(f), expect) / scale < 1e-12);
    }
}

TEST_CASE("directional derivative examples") {
  auto g = make_grid(2, 32);
  VectorField e1(g);
  for (auto& v : e1.component(0)) v = 1.0;
  CHECK(max_abs(directional_derivative(constant_vector(g, {1, 2, 3}), e1)) < 1e-13);
  MagnetizationField expect(g);
  for (std::size_t i = 0; i < g->size(); ++i) expect.component(0)[i] = std::cos(g->coordinate(i, 0));
  CHECK(max_abs_diff(directional_derivative(sin_x1_e1(g), e1), expect) < 1e-12);
}

TEST_CASE("transport identity <f, grad_g f> = -1/2 <(div g) f, f>") {
  auto g = make_grid(2, 48);
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 10; ++trial) {
    const auto f = test::random_field(g, rng, 3, 6);
    const auto v = test::random_vector_field(g, rng, 3, 6);
    const double lhs = inner(f, directional_derivative(f, v));
    const double rhs = -0.5 * inner(scale(divergence(v), f), f);
    CHECK(std::abs(lhs - rhs) <= 1e-10 * std::max(1.0, std::abs(rhs)));
  }
}

TEST_CASE("product rule for grad_g of a cross product") {
  auto g = make_grid(2, 48);
  std::mt19937_64 rng(5);
  const auto u = test::random_field(g, rng, 3, 4);
  const auto w = test::random_field(g, rng, 3, 4);
  const auto v = test::random_vector_field(g, rng, 3, 4);
  const auto lhs = directional_derivative(cross(u, w), v);
  auto rhs = cross(directional_derivative(u, v), w);
  rhs += cross(u, directional_derivative(w, v));
  CHECK(max_abs_diff(lhs, rhs) / max_abs(lhs) < 1e-10);
}

TEST_CASE("divergence examples") {
  auto g = make_grid(2, 32);
  VectorField c(g);
  c.fill(0.7);
  for (double v : divergence(c).values()) CHECK(std::abs(v) < 1e-13);
  VectorField shear(g), stretch(g);
  for (std::size_t i = 0; i < g->size(); ++i) {
    shear.component(0)[i] = std::sin(g->coordinate(i, 1));
    stretch.component(0)[i] = std::sin(g->coordinate(i, 0));
  }
  for (double v : divergence(shear).values()) CHECK(std::abs(v) < 1e-13);
  const auto d = divergence(stretch);
  for (std::size_t i = 0; i < g->size(); ++i) CHECK(d[i] == doctest::Approx(std::cos(g->coordinate(i, 0))).epsilon(1e-12));
}

TEST_CASE("fourier projection") {
  auto g = make_grid(2, 32);
  std::mt19937_64 rng(2);
  const auto u = test::random_field(g, rng, 8, 12);
  const auto w = test::random_field(g, rng, 8, 12);
  CHECK(fourier_project(u, 16) == u);
  // n = 0 keeps the spatial mean only.
  const auto mean = fourier_project(u, 0);
  for (int c = 0; c < 3; ++c) {
    double avg = 0;
    for (double v : u.component(c)) avg += v;
    avg /= static_cast<double>(g->size());
    for (double v : mean.component(c)) CHECK(v == doctest::Approx(avg).epsilon(1e-12));
  }
  for (int n : {1, 3, 6}) {
    const auto pu = fourier_project(u, n);
    CHECK(std::abs(inner(pu, w) - inner(u, fourier_project(w, n))) < 1e-12 * std::abs(inner(u, w)) + 1e-12);
    CHECK(max_abs_diff(fourier_project(pu, n), pu) < 1e-13);
    for (auto kind : {NormKind::L2, NormKind::H1, NormKind::H2})
      CHECK(norm(pu, kind) <= norm(u, kind) * (1 + 1e-14));
    CHECK(energy_above(pu, n) < 1e-25);
  }
}

TEST_CASE("norms") {
  auto g = make_grid(2, 32);
  CHECK(norm(MagnetizationField(g), NormKind::L2) == 0.0);
  CHECK(norm(sin_x1_e1(g), NormKind::L2) == doctest::Approx(std::sqrt(2 * kPi * kPi)).epsilon(1e-13));
  // |sin x e1|_{H1}^2 = |.|^2 + |cos x|^2 = 4 pi^2.
  CHECK(norm(sin_x1_e1(g), NormKind::H1) == doctest::Approx(2 * kPi).epsilon(1e-13));
  std::mt19937_64 rng(9);
  for (int i = 0; i < 5; ++i) {
    const auto f = test::random_field(g, rng, 6, 6);
    CHECK(norm(f, NormKind::H2) >= norm(f, NormKind::H1));
    CHECK(norm(f, NormKind::H1) >= norm(f, NormKind::L2));
  }
  CHECK(norm(constant_vector(g, {0, 0, 2}), NormKind::Linf) == doctest::Approx(2.0));
  const double w = norm(constant_vector(g, {0, 0, 1}), NormKind::L2Weighted);
  CHECK(w > 0.0);
  CHECK(w < norm(constant_vector(g, {0, 0, 1}), NormKind::L2));
}

TEST_CASE("integration by parts") {
  auto g = make_grid(2, 32);
  std::mt19937_64 rng(4);
  for (int i = 0; i < 10; ++i) {
    const auto u = test::random_field(g, rng, 5, 6);
    const auto w = test::random_field(g, rng, 5, 6);
    const double a = inner(laplacian(u), w), b = inner(u, laplacian(w));
    CHECK(std::abs(a - b) <= 1e-10 * std::max(1.0, std::abs(a)));
    const double c = inner(bilaplacian(u), w), d = inner(laplacian(u), laplacian(w));
    CHECK(std::abs(c - d) <= 1e-10 * std::max(1.0, std::abs(c)));
  }
}

TEST_CASE("weight rho is centred at the origin") {
  auto g = make_grid(2, 16);
  const auto rho = weight_rho(g);
  CHECK(rho[0] == doctest::Approx(1.0));
  for (double v : rho.values()) CHECK(v <= 1.0);
}

TEST_CASE("spectral injection preserves band-limited fields") {
  auto coarse = make_grid(2, 16);
  auto fine = make_grid(2, 32);
  std::mt19937_64 rng(13);
  const auto waves = test::random_waves(rng, 2, 5, 6);
  const auto up = inject(test::sample_waves(coarse, waves), fine);
  CHECK(max_abs_diff(up, test::sample_waves(fine, waves)) < 1e-12);
}

TEST_CASE("3D operators") {
  auto g = make_grid(3, 16);
  MagnetizationField f(g);
  for (std::size_t i = 0; i < g->size(); ++i) f.component(2)[i] = std::sin(g->coordinate(i, 2));
  auto expect = f;
  expect *= -1.0;
  CHECK(max_abs_diff(laplacian(f), expect) < 1e-12);
}

TEST_CASE("snapshot round trip is bit exact") {
  auto g = make_grid(2, 16);
  std::mt19937_64 rng(21);
  const auto f = test::random_field(g, rng, 5, 5);
  const auto dir = std::filesystem::temp_directory_path() / "sllg_snapshot_test";
  std::filesystem::create_directories(dir);
  write_snapshot(dir / "a.snap", f, 0.125);
  const auto snap = read_snapshot(dir / "a.snap");
  CHECK(snap.time == 0.125);
  CHECK(snap.dim == 2);
  CHECK(snap.points[0] == 16);
  CHECK(snap.points[2] == 1);
  CHECK(snapshot_field(snap, g) == f);
  CHECK(std::filesystem::file_size(dir / "a.snap") == Snapshot::kHeaderBytes + 3 * 8 * g->size());
  CHECK_THROWS(snapshot_field(snap, make_grid(2, 32)));
  {
    std::ofstream bad(dir / "bad.snap", std::ios::binary);
    bad << "NOPE";
  }
  CHECK_THROWS(read_snapshot(dir / "bad.snap"));
  write_component_csv(dir, "f", f);
  CHECK(std::filesystem::exists(dir / "f_Mz.csv"));
  std::filesystem::remove_all(dir);
}
