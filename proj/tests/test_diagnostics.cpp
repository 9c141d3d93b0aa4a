#include <cmath>
#include <fstream>
#include <numbers>
#include <random>

#include "doctest.h"
#include "sllg/diagnostics.hpp"
#include "sllg/initial.hpp"
#include "sllg/integrator.hpp"
#include "support.hpp"

using namespace sllg;

namespace {

constexpr double kPi = std::numbers::pi;

// Record whose snapshot k is e3 + f(t_k) c, for a fixed field c.
TrajectoryRecord path_record(const GridPtr& g, int count, double dt, double (*f)(double)) {
  TrajectoryRecord rec;
  rec.dt = dt;
  auto c = constant_vector(g, {0, 0, 0});
  for (std::size_t i = 0; i < g->size(); ++i) c.component(0)[i] = std::sin(g->coordinate(i, 1));
  for (int k = 0; k < count; ++k) {
    auto m = constant_vector(g, {0, 0, 1});
    m.axpy(f(k * dt), c);
    rec.snapshot_times.push_back(k * dt);
    rec.snapshots.push_back(m);
  }
  return rec;
}

}  // namespace

TEST_CASE("topological charge") {
  auto g = make_grid(2, 128);
  CHECK(std::abs(topological_charge(constant_vector(g, {0, 0, 1}))) < 1e-14);

  // Stereographic profile w = z / r0, windowed to e3 at the cell boundary.
  const auto sk = skyrmion_field(g, 0.6);
  const double q = topological_charge(sk);
  CHECK(std::abs(q - 1.0) <= 0.05);

  // A reflection of the target or of the domain reverses the orientation;
  // doing both restores it.
  auto target = sk, domain = sk, both = sk;
  const int n = g->points();
  for (std::size_t i = 0; i < g->size(); ++i) {
    const auto idx = g->point_index(i);
    const std::size_t j = static_cast<std::size_t>(idx[0]) * n + static_cast<std::size_t>((n - idx[1]) % n);
    const auto v = sk.at(i), r = sk.at(j);
    target.set(i, {v[0], -v[1], v[2]});
    domain.set(i, r);
    both.set(i, {r[0], -r[1], r[2]});
  }
  CHECK(topological_charge(target) == doctest::Approx(-q).epsilon(1e-10));
  CHECK(topological_charge(domain) == doctest::Approx(-q).epsilon(1e-10));
  CHECK(topological_charge(both) == doctest::Approx(q).epsilon(1e-10));

  CHECK_THROWS_AS(topological_charge(constant_vector(g, {0, 0, 1.1})), std::domain_error);
  CHECK_THROWS(topological_charge(constant_vector(make_grid(3, 8), {0, 0, 1})));
}

TEST_CASE("sphere deviation") {
  auto g = make_grid(2, 16);
  CHECK(sphere_deviation(uniform_field(g, {1, 2, 3})) < 1e-14);
  CHECK(sphere_deviation(constant_vector(g, {0, 0, 2})) == doctest::Approx(9 * 4 * kPi * kPi));
  CHECK(max_sphere_deviation(constant_vector(g, {0, 0, 2})) == doctest::Approx(1.0));
  const double weighted = sphere_deviation(constant_vector(g, {0, 0, 2}), true);
  CHECK(weighted == doctest::Approx(9 * integrate(weight_rho(g))));
}

TEST_CASE("trajectory record") {
  auto g = make_grid(2, 16);
  TrajectoryRecord rec;
  const auto p = ModelParams::make(1, 0, 0.3, -1);
  rec.append(0.0, uniform_field(g), p);
  rec.append(0.1, single_mode_perturbation(g, {1, 0, 0}, 0.1), p);
  CHECK(rec.size() == 2);
  CHECK(rec.energy[0] == doctest::Approx(0.0));
  CHECK(rec.energy[1] > 0.0);
  CHECK(rec.charge[0] == doctest::Approx(0.0));
  CHECK(rec.sphere_dev[1] < 1e-15);
  CHECK(rec.m_h2[1] >= rec.m_h1[1]);
  CHECK(rec.m_h1[1] >= rec.m_l2[1]);
  CHECK(std::string(to_string(rec.status)) == "ok");

  const auto file = std::filesystem::temp_directory_path() / "sllg_record_test.csv";
  rec.write_csv(file);
  std::ifstream in(file);
  std::string header, row;
  std::getline(in, header);
  std::getline(in, row);
  CHECK(header == "t,energy,m_l2,m_h1,m_h2,grad_m_h1,linf,sphere_dev,sphere_l2,charge,cross_bilap_sq");
  CHECK(row.rfind("0,", 0) == 0);
  std::filesystem::remove(file);
}

TEST_CASE("Hoelder exponent estimates") {
  auto g = make_grid(2, 8);
  const auto frozen = holder_estimate(path_record(g, 64, 0.01, [](double) { return 0.0; }));
  CHECK(frozen.degenerate);
  CHECK(std::isinf(frozen.exponent));

  const auto linear = holder_estimate(path_record(g, 128, 0.01, [](double t) { return t; }));
  CHECK_FALSE(linear.degenerate);
  CHECK(linear.exponent == doctest::Approx(1.0).epsilon(0.1));
  CHECK(linear.lags.front() == doctest::Approx(0.04));

  // A Brownian amplitude: RMS increments scale like lag^(1/2).
  const auto w = sample_path(1, 1024, 1e-3, 5);
  TrajectoryRecord brownian;
  double acc = 0.0;
  for (int k = 0; k < 1024; ++k) {
    auto m = constant_vector(g, {0, 0, 1});
    for (double& v : m.component(0)) v = acc;
    brownian.snapshot_times.push_back(k * 1e-3);
    brownian.snapshots.push_back(m);
    acc += w.increment(k, 0);
  }
  const auto bm = holder_estimate(brownian);
  CHECK(bm.exponent >= 0.35);
  CHECK(bm.exponent <= 0.65);

  CHECK_THROWS(holder_estimate(path_record(g, 63, 0.01, [](double t) { return t; })));
}

TEST_CASE("moment report") {
  TrajectoryRecord a;
  a.times = {0.0, 0.5, 1.0};
  a.grad_h1 = {1.0, 2.0, 1.5};
  a.cross_bilap = {4.0, 4.0, 4.0};
  TrajectoryRecord b = a;
  b.grad_h1 = {3.0, 1.0, 1.0};

  const auto single = moment_report({a}, {7}, {1, 2});
  CHECK(single.sup_grad_h1[0] == 2.0);
  CHECK(single.cross_bilap_l2t[0] == doctest::Approx(2.0));
  CHECK(single.moments[0].grad_h1 == doctest::Approx(4.0));
  CHECK(single.moments[1].grad_h1 == doctest::Approx(16.0));
  CHECK(single.moments[1].cross_bilap == doctest::Approx(16.0));

  const auto both = moment_report({a, b}, {7, 8}, {1, 2});
  CHECK(both.moments[0].grad_h1 == doctest::Approx((4.0 + 9.0) / 2));
  CHECK(both.moments[1].grad_h1 >= both.moments[0].grad_h1);
  CHECK(both.all_finite());
  CHECK_THROWS(moment_report({a}, {1, 2}, {1}));
  CHECK_THROWS(moment_report({a}, {1}, {0}));
}

TEST_CASE("coupling distance and constraint series") {
  auto g = make_grid(2, 16);
  const auto m0 = random_sphere_field(g, 3);
  const auto p = ModelParams::make(1.0, 0.0, 0.3, -1);
  const auto noise = NoiseModel::build_basis(g, 4, 3.0, true, 0.05);
  SchemeConfig cfg;
  cfg.dt = 1e-3;
  cfg.t_end = 0.01;
  cfg.snapshot_every = 2;
  const auto a = run_trajectory(m0, p, &noise, cfg, 1);
  const auto b = run_trajectory(m0, p, &noise, cfg, 1);
  for (double d : coupling_distance(a, b)) CHECK(d == 0.0);
  CHECK(endpoint_distance(a, b) == 0.0);
  for (double d : constraint_series(a)) CHECK(d <= 1e-14);

  auto shorter = cfg;
  shorter.t_end = 0.008;
  CHECK_THROWS(coupling_distance(a, run_trajectory(m0, p, &noise, shorter, 1)));

  // The same run on a finer grid, compared after spectral injection.
  auto fine = make_grid(2, 32);
  const auto c = run_trajectory(random_sphere_field(fine, 3), p, nullptr, cfg, 1);
  const auto d = run_trajectory(m0, p, nullptr, cfg, 1);
  const auto dist = coupling_distance(d, c);
  auto gap = inject(m0, fine);
  gap -= random_sphere_field(fine, 3);
  CHECK(dist[0] == doctest::Approx(norm(gap, NormKind::L2)).epsilon(1e-12));
  for (double x : dist) CHECK(std::isfinite(x));
}

TEST_CASE("initial data") {
  auto g = make_grid(2, 16);
  CHECK(max_sphere_deviation(uniform_field(g, {0, 3, 4})) < 1e-15);
  CHECK(uniform_field(g, {0, 3, 4}).at(5)[1] == doctest::Approx(0.6));
  CHECK_THROWS(uniform_field(g, {0, 0, 0}));
  const auto m = single_mode_perturbation(g, {1, 0, 0}, 1e-3);
  CHECK(max_sphere_deviation(m) < 1e-15);
  CHECK(m.at(0)[0] == doctest::Approx(1e-3));
  // Extent 2 sqrt(2) pi: base wavenumber 1 / sqrt(2), so (1, 0) sits at k^2 = 1/2.
  SpectralGrid wide(2, 16, 2 * std::sqrt(2.0) * kPi);
  CHECK(nearest_lattice_mode(wide, 0.5) == std::array<int, 3>{1, 0, 0});
  CHECK(nearest_lattice_mode(*g, 0.5) == std::array<int, 3>{1, 0, 0});
  CHECK(nearest_lattice_mode(*g, 2.1) == std::array<int, 3>{1, 1, 0});
  CHECK(max_sphere_deviation(random_sphere_field(g, 1)) < 1e-15);
  CHECK(random_sphere_field(g, 1) == random_sphere_field(g, 1));
}
