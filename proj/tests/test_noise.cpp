#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <numeric>
#include <string>

#include "doctest.h"
#include "sllg/noise.hpp"
#include "sllg/operators.hpp"

using namespace sllg;

TEST_CASE("divergence-free basis") {
  auto g = make_grid(2, 64);
  const auto model = NoiseModel::build_basis(g, 64, 3.0, true);
  CHECK(model.size() == 64);
  CHECK(model.divergence_free());
  for (int k = 0; k < model.size(); ++k) {
    double worst = 0;
    for (double v : divergence(model.field(k)).values()) worst = std::max(worst, std::abs(v));
    CHECK(worst <= 1e-10);
    // g_k = q_k f_k with |f_k|_{H4} = 1.
    CHECK(sobolev_norm(model.field(k), 4) == doctest::Approx(model.q(k)).epsilon(1e-12));
  }
  // Ordered by |kappa|: first the four unit wave vectors' cos/sin pairs.
  const auto& m0 = model.modes()[0];
  CHECK(m0.wavevector[0] * m0.wavevector[0] + m0.wavevector[1] * m0.wavevector[1] == 1);
  CHECK_FALSE(m0.sine);
  CHECK(model.modes()[1].sine);
}

TEST_CASE("non-solenoidal basis is detected as such") {
  auto g = make_grid(2, 32);
  const auto model = NoiseModel::build_basis(g, 8, 3.0, false);
  CHECK_FALSE(model.divergence_free());
  double worst = 0;
  for (double v : divergence(model.field(0)).values()) worst = std::max(worst, std::abs(v));
  CHECK(worst > 1e-3);
  const auto again = NoiseModel::from_fields({model.field(0)}, {model.q(0)});
  CHECK_FALSE(again.divergence_free());
}

TEST_CASE("trace summability") {
  auto g = make_grid(2, 64);
  const auto s3 = NoiseModel::build_basis(g, 64, 3.0, true);
  // Direct summation of (1 + |kappa|^2)^-3 over the same modes.
  double total = 0, head = 0;
  for (int k = 0; k < 64; ++k) {
    const auto& kv = s3.modes()[static_cast<std::size_t>(k)].wavevector;
    const double w = std::pow(1.0 + kv[0] * kv[0] + kv[1] * kv[1], -3.0);
    total += w;
    if (k < 32) head += w;
  }
  CHECK(trace(s3) == doctest::Approx(total).epsilon(1e-12));
  CHECK(s3.tail_fraction() == doctest::Approx((total - head) / total).epsilon(1e-12));
  CHECK(s3.tail_fraction() < 0.05);
  CHECK(s3.trace_class());

  // s = 0: every q_k = 1, the trace equals K and keeps growing.
  for (int K : {8, 16, 32}) CHECK(trace(NoiseModel::build_basis(g, K, 0.0, true)) == doctest::Approx(K));
  CHECK_FALSE(NoiseModel::build_basis(g, 64, 0.0, true).trace_class());
}

TEST_CASE("trace normalization and monotonicity") {
  auto g = make_grid(2, 32);
  CHECK(trace(NoiseModel::build_basis(g, 16, 3.0, true, 0.05)) == doctest::Approx(0.05));
  double prev = 0;
  for (int K = 1; K <= 20; ++K) {
    const double t = trace(NoiseModel::build_basis(g, K, 2.0, true));
    CHECK(t >= prev);
    prev = t;
  }
  VectorField f(g);
  CHECK(trace(NoiseModel::from_fields({f}, {0.5})) == doctest::Approx(0.25));
}

TEST_CASE("basis size is limited by the grid") {
  auto g = make_grid(2, 8);
  // dealias_max = 2: 12 wave vectors in the half space, 24 fields.
  CHECK_NOTHROW(NoiseModel::build_basis(g, 24, 3.0, true));
  try {
    NoiseModel::build_basis(g, 25, 3.0, true);
    FAIL("expected an exception");
  } catch (const std::invalid_argument& e) {
    CHECK(std::string(e.what()).find("noise.modes") != std::string::npos);
  }
}

TEST_CASE("combine forms the noise velocity") {
  auto g = make_grid(2, 16);
  const auto model = NoiseModel::build_basis(g, 4, 3.0, true);
  const std::vector<double> dw{0.5, -1.0, 0.0, 2.0};
  const auto xi = model.combine(dw);
  for (std::size_t i = 0; i < g->size(); i += 17) {
    double expect = 0;
    for (int k = 0; k < 4; ++k) expect += dw[static_cast<std::size_t>(k)] * model.field(k).component(0)[i];
    CHECK(xi.component(0)[i] == doctest::Approx(expect));
  }
  CHECK_THROWS(model.combine(std::vector<double>{1.0}));
}

TEST_CASE("sample paths") {
  SUBCASE("dt = 0 gives zero increments") {
    const auto p = sample_path(3, 10, 0.0, 1);
    for (int s = 0; s < 10; ++s)
      for (int k = 0; k < 3; ++k) CHECK(p.increment(s, k) == 0.0);
  }
  SUBCASE("same seed gives the same path bit for bit") {
    const auto a = sample_path(4, 100, 1e-3, 42, 3);
    const auto b = sample_path(4, 100, 1e-3, 42, 3);
    const auto c = sample_path(4, 100, 1e-3, 42, 4);
    bool same = true, differs = false;
    for (int s = 0; s < 100; ++s)
      for (int k = 0; k < 4; ++k) {
        same &= a.increment(s, k) == b.increment(s, k);
        differs |= a.increment(s, k) != c.increment(s, k);
      }
    CHECK(same);
    CHECK(differs);
  }
  SUBCASE("mean, variance and independence") {
    const int n = 100000;
    const double dt = 1e-2;
    const auto p = sample_path(2, n, dt, 7);
    double m0 = 0, v0 = 0, c01 = 0, v1 = 0;
    for (int s = 0; s < n; ++s) {
      const double a = p.increment(s, 0), b = p.increment(s, 1);
      m0 += a;
      v0 += a * a;
      v1 += b * b;
      c01 += a * b;
    }
    m0 /= n;
    // CLT: the sample mean has standard deviation sqrt(dt / n).
    CHECK(std::abs(m0) < 4 * std::sqrt(dt / n));
    const double var = v0 / n / dt;
    CHECK(var >= 0.95);
    CHECK(var <= 1.05);
    CHECK(std::abs(c01 / std::sqrt(v0 * v1)) < 0.02);
  }
  SUBCASE("two steps of dt have the law of one step of 2 dt") {
    const int n = 10000;
    const double dt = 1e-3;
    const auto p = sample_path(1, 2 * n, dt, 99).coarsen(2);
    std::vector<double> x;
    for (int s = 0; s < n; ++s) x.push_back(p.increment(s, 0));
    std::sort(x.begin(), x.end());
    // Kolmogorov-Smirnov distance to the N(0, 2 dt) distribution function.
    double ks = 0;
    for (int i = 0; i < n; ++i) {
      const double cdf = 0.5 * std::erfc(-x[static_cast<std::size_t>(i)] / std::sqrt(2 * 2 * dt));
      ks = std::max({ks, std::abs(cdf - double(i) / n), std::abs(cdf - double(i + 1) / n)});
    }
    CHECK(ks < 0.02);
  }
}

TEST_CASE("coarsening and prefixes") {
  const auto p = sample_path(2, 8, 0.1, 5);
  const auto c = p.coarsen(4);
  CHECK(c.steps() == 2);
  CHECK(c.dt() == doctest::Approx(0.4));
  CHECK(c.increment(1, 1) ==
        doctest::Approx(p.increment(4, 1) + p.increment(5, 1) + p.increment(6, 1) + p.increment(7, 1)));
  CHECK_THROWS(p.coarsen(3));
  const auto q = p.prefix(3);
  CHECK(q.steps() == 3);
  CHECK(q.increment(2, 0) == p.increment(2, 0));
}

TEST_CASE("path export") {
  const auto p = sample_path(2, 3, 0.01, 1);
  const auto file = std::filesystem::temp_directory_path() / "sllg_path_test.csv";
  p.write_csv(file);
  std::ifstream in(file);
  std::string header;
  std::getline(in, header);
  CHECK(header == "step,k,dW");
  int rows = 0;
  for (std::string line; std::getline(in, line);) ++rows;
  CHECK(rows == 6);
  std::filesystem::remove(file);
}
