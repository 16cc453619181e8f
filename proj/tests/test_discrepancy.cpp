#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

#include "doctest.h"
#include "korodisc/discrepancy.hpp"
#include "korodisc/errors.hpp"
#include "korodisc/lattice.hpp"
#include "oracles.hpp"

using namespace korodisc;

namespace {

PointSet equidistant(std::int64_t m) { return korobov_pointset(Generator::from_vector(m, {1}), 1); }

SearchConfig quick_cfg() {
  SearchConfig c;
  c.z_grid = 16;
  c.u_grid = 5;
  return c;
}

}  // namespace

TEST_CASE("error of the two point rule with half windows vanishes") {
  const auto ps = equidistant(2);
  const SmoothBox b(1, {0.0}, {0.5});
  for (int i = 0; i < 100; ++i) CHECK(error_direct(ps, b, std::vector<double>{i / 100.0}) == 0.0);
}

TEST_CASE("grid mean of the error vanishes when the grid integrates the kernel exactly") {
  // scales that are multiples of 1/64 make the 64-point shift grid exact
  const auto ps = fibonacci_pointset(10);
  for (int r : {1, 2}) {
    const SmoothBox b(r, {0.3, 0.7}, {8.0 / 64, 16.0 / 64 / r});
    double mean = 0.0;
    for (int i = 0; i < 64; ++i) {
      for (int j = 0; j < 64; ++j) mean += error_direct(ps, b, std::vector<double>{i / 64.0, j / 64.0});
    }
    CHECK(std::abs(mean / 4096.0) < 1e-12);
  }
}

TEST_CASE("exact integral of the error over the shift is zero") {
  const auto ps = equidistant(13);
  for (int r = 1; r <= 3; ++r) {
    const SmoothBox b(r, {0.0}, {0.17});
    std::vector<double> breaks;
    for (std::size_t mu = 0; mu < ps.size(); ++mu) {
      for (int i = 0; i <= r; ++i) {
        double x = ps.coord(mu, 0) - (i - 0.5 * r) * 0.17;
        breaks.push_back(x - std::floor(x));
      }
    }
    const double integral = oracle::integrate(
        [&](double z) { return error_direct(ps, b, std::vector<double>{z}); }, 0.0, 1.0, breaks, 8);
    CHECK(std::abs(integral) < 1e-13);
  }
}

TEST_CASE("direct and Fourier evaluations agree") {
  const auto ps = fibonacci_pointset(10);
  const auto g = *ps.generator();
  const SmoothBox b(2, {0.0, 0.0}, {0.1, 0.1});
  const std::vector<double> zero{0.0, 0.0};
  const auto f = error_fourier(g, b, zero, 512);
  CHECK(std::abs(error_direct(ps, b, zero) - f.value) <= f.truncation_bound + 1e-10);
  CHECK(std::abs(f.imaginary) < 1e-10);

  std::mt19937_64 rng(21);
  std::uniform_real_distribution<double> U(0.0, 1.0);
  for (int trial = 0; trial < 12; ++trial) {
    const std::size_t d = 1 + trial % 3;
    const int r = 2 + trial % 2;
    const std::int64_t m = d == 3 ? 61 : 233;
    std::vector<std::int64_t> a(d);
    for (std::size_t j = 0; j < d; ++j) a[j] = j == 0 ? 1 : static_cast<std::int64_t>(U(rng) * m);
    const auto gen = Generator::from_vector(m, a);
    const auto set = korobov_pointset(gen, d);
    std::vector<double> z(d), u(d), shift(d);
    for (std::size_t j = 0; j < d; ++j) {
      z[j] = U(rng);
      u[j] = (0.05 + 0.95 * U(rng)) / r;
      shift[j] = U(rng);
    }
    const SmoothBox box(r, z, u);
    const auto fe = error_fourier(gen, box, shift, d == 3 ? 96 : 512);
    CHECK(std::abs(error_direct(set, box, shift) - fe.value) <= fe.truncation_bound + 1e-9);
  }
}

TEST_CASE("truncated Fourier sum matches explicit summation over the cube") {
  // small m takes the character route, larger m the lattice walk
  for (std::int64_t m : {2, 3, 97, 233}) {
    for (std::size_t d : {1u, 2u}) {
      std::vector<std::int64_t> a{1, 3};
      a.resize(d);
      const auto g = Generator::from_vector(m, a);
      const SmoothBox box(2, std::vector<double>(d, 0.3), std::vector<double>(d, 0.2));
      const std::vector<double> shift(d, 0.17);
      const std::int64_t cap = 40;
      const auto f = error_fourier(g, box, shift, cap);
      const auto b = box.shifted(shift);
      double want = 0.0;
      std::size_t terms = 0;
      std::vector<std::int64_t> k(d, -cap);
      while (true) {
        bool zero = true;
        std::int64_t dot = 0;
        double t = 0.0;
        for (std::size_t j = 0; j < d; ++j) {
          zero = zero && k[j] == 0;
          dot += k[j] * a[j];
          t += k[j] * b.z()[j];
        }
        if (!zero && dot % m == 0) {
          want += box_fourier(b, k) * std::cos(2.0 * std::numbers::pi * t);
          ++terms;
        }
        std::size_t j = 0;
        while (j < d && k[j] == cap) k[j++] = -cap;
        if (j == d) break;
        ++k[j];
      }
      CHECK(f.value == doctest::Approx(want).epsilon(1e-10).scale(1e-6));
      CHECK(f.terms == terms);
    }
  }
}

TEST_CASE("single point rule through the full dual lattice") {
  const auto ps = korobov_pointset(Generator::from_vector(1, {1}), 1);
  const auto g = *ps.generator();
  for (double z : {0.0, 0.1, 0.37}) {
    const SmoothBox b(3, {z}, {0.2});
    const std::vector<double> zero{0.0};
    const auto f = error_fourier(g, b, zero, 2000);
    const double want = periodized_hat_eval(3, 0.2, -z) - box_integral(b);
    CHECK(std::abs(error_direct(ps, b, zero) - want) < 1e-15);
    CHECK(std::abs(f.value - want) <= f.truncation_bound + 1e-12);
  }
}

TEST_CASE("truncation bound is infinite for r = 1 and shrinks with the cap") {
  const SmoothBox b1(1, {0.0, 0.0}, {0.3, 0.3});
  CHECK(std::isinf(fourier_tail_bound(b1, 100)));
  const SmoothBox b2(2, {0.0, 0.0}, {0.3, 0.3});
  CHECK(fourier_tail_bound(b2, 512) < fourier_tail_bound(b2, 64));
  CHECK(fourier_tail_bound(b2, 512) > 0.0);
}

TEST_CASE("evaluation on grids matches pointwise evaluation") {
  const auto ps = fibonacci_pointset(9);
  const std::vector<double> u{0.2, 0.15};
  const std::vector<std::vector<double>> axes{{0.0, 0.013, 0.5, 0.92}, {0.1, 0.99}};
  for (int r : {1, 2, 3}) {
    std::vector<double> uu{u[0] / r * 2, u[1] / r * 2};
    const auto vals = error_on_grid(ps, r, uu, axes);
    const SmoothBox b(r, {0.0, 0.0}, uu);
    for (std::size_t i = 0; i < axes[0].size(); ++i) {
      for (std::size_t j = 0; j < axes[1].size(); ++j) {
        const double direct = error_direct(ps, b, std::vector<double>{axes[0][i], axes[1][j]});
        CHECK(vals[i * axes[1].size() + j] == doctest::Approx(direct).epsilon(1e-13));
      }
    }
  }
}

TEST_CASE("block projections") {
  const auto g = Generator::fibonacci(12);
  const SmoothBox b(2, {0.2, 0.6}, {0.1, 0.3});
  const auto empty = block_projection_norms(g, b, std::vector<int>{1, 0});
  CHECK(empty.count == 0);
  CHECK(empty.l2 == 0.0);
  CHECK(empty.linf_bound == 0.0);

  const auto ex = max_exactness(g, 4096);
  REQUIRE(ex.n_max.has_value());
  const std::int64_t L = *ex.n_max;
  for (int s0 = 0; s0 <= 12; ++s0) {
    for (int s1 = 0; s1 <= 12; ++s1) {
      const std::vector<int> s{s0, s1};
      const auto n = block_projection_norms(g, b, s);
      if ((std::int64_t{1} << (s0 + s1)) <= L && (s0 + s1) > 0) {
        CHECK(n.count == 0);
        CHECK(n.l2 == 0.0);
      }
      CHECK(n.l2 <= std::sqrt(static_cast<double>(n.count)) * block_coefficient_bound(b, s) * (1 + 1e-12));
      CHECK(n.l2 <= n.linf_bound * (1 + 1e-12));
    }
  }
}

TEST_CASE("block projection obeys the L2/Linf interpolation inequality") {
  const auto g = Generator::fibonacci(11);
  const SmoothBox b(2, {0.0, 0.0}, {0.2, 0.25});
  int tested = 0;
  // s_j <= 5 keeps every frequency of v^2 below the 96-point grid's Nyquist bound
  for (int s0 = 0; s0 <= 5; ++s0)
  for (int s1 = 0; s1 <= 5; ++s1) {
    const std::vector<int> s{s0, s1};
    const auto n = block_projection_norms(g, b, s);
    if (n.count == 0) continue;
    ++tested;
    const int G = 96;
    double p4 = 0.0, sq = 0.0, sup = 0.0;
    for (int i = 0; i < G; ++i) {
      for (int j = 0; j < G; ++j) {
        const double v = block_projection_eval(g, b, s, std::vector<double>{(i + 0.5) / G, (j + 0.5) / G});
        p4 += std::pow(v, 4);
        sq += v * v;
        sup = std::max(sup, std::abs(v));
      }
    }
    p4 = std::pow(p4 / (G * G), 0.25);
    // Parseval on the grid (the block is band limited below the grid Nyquist)
    CHECK(std::sqrt(sq / (G * G)) == doctest::Approx(n.l2).epsilon(1e-9));
    CHECK(p4 <= std::sqrt(n.l2) * std::sqrt(sup) + 1e-12);
    CHECK(sup <= n.linf_bound * (1 + 1e-12));
  }
  CHECK(tested >= 2);
}

TEST_CASE("scale candidates lie on the volume surface") {
  for (std::size_t d = 1; d <= 3; ++d) {
    for (int r = 1; r <= 3; ++r) {
      const double v = 0.25;
      const auto c = scale_candidates(v, r, d, 9);
      REQUIRE_FALSE(c.empty());
      for (const auto& u : c) {
        double vol = 1.0;
        for (double x : u) {
          CHECK(x <= 1.0 / r + 1e-15);
          vol *= r * x;
        }
        CHECK(vol == doctest::Approx(v).epsilon(1e-12));
      }
      CHECK(std::is_sorted(c.begin(), c.end()));
    }
  }
  // v = 1 degenerates to the single cube-filling box
  const auto full = scale_candidates(1.0, 2, 2, 7);
  REQUIRE(full.size() == 1);
  CHECK(full[0][0] == doctest::Approx(0.5));
}

TEST_CASE("equidistant windows of integer length are exact") {
  const auto ps = equidistant(16);
  for (int q = 1; q <= 8; ++q) {
    SearchConfig c = quick_cfg();
    auto est = periodic_discrepancy(ps, q / 16.0, 1, c);
    CHECK(est.estimate < 1e-15);
    c.p = 2.0;
    est = periodic_discrepancy(ps, q / 16.0, 1, c);
    CHECK(est.estimate < 1e-15);
  }
}

TEST_CASE("first order scale law on equidistant sets") {
  SearchConfig c = quick_cfg();
  double prev = 0.0;
  for (int k = 4; k <= 9; ++k) {
    const auto est = periodic_discrepancy(equidistant(std::int64_t{1} << k), 1.0 / 3, 1, c);
    if (prev > 0.0) CHECK(prev / est.estimate == doctest::Approx(2.0).epsilon(0.2));
    prev = est.estimate;
  }
}

TEST_CASE("norm monotonicity in p") {
  const auto ps = fibonacci_pointset(9);
  for (int r : {1, 2}) {
    SearchConfig c = quick_cfg();
    const auto sup = periodic_discrepancy(ps, 0.25, r, c);
    c.p = 2.0;
    const auto l2 = periodic_discrepancy(ps, 0.25, r, c);
    c.p = 1.0;
    const auto l1 = periodic_discrepancy(ps, 0.25, r, c);
    CHECK(l1.estimate <= l2.estimate + 1e-15);
    CHECK(l2.estimate <= sup.estimate + 1e-15);
  }
}

TEST_CASE("estimates do not decrease under grid refinement") {
  const auto ps = fibonacci_pointset(8);
  for (bool knots : {false, true}) {
    SearchConfig c = quick_cfg();
    c.breakpoints = knots;
    const auto base = periodic_discrepancy(ps, 0.3, 2, c);
    c.z_grid *= 3;
    const auto finer_z = periodic_discrepancy(ps, 0.3, 2, c);
    c.u_grid = 2 * c.u_grid - 1;
    const auto finer_u = periodic_discrepancy(ps, 0.3, 2, c);
    CHECK(finer_z.estimate >= base.estimate);
    CHECK(finer_u.estimate >= finer_z.estimate);
  }
  // L_p estimates share the quadrature grid, so refining u alone is monotone
  SearchConfig c = quick_cfg();
  c.p = 2.0;
  const auto a = periodic_discrepancy(ps, 0.3, 2, c);
  c.u_grid = 2 * c.u_grid - 1;
  CHECK(periodic_discrepancy(ps, 0.3, 2, c).estimate >= a.estimate);
}

TEST_CASE("search results do not depend on the thread count") {
  const auto ps = fibonacci_pointset(10);
  SearchConfig c = quick_cfg();
  c.trace = true;
  const auto one = periodic_discrepancy(ps, 0.25, 2, c);
  c.threads = 5;
  const auto five = periodic_discrepancy(ps, 0.25, 2, c);
  CHECK(one.estimate == five.estimate);
  CHECK(one.argmax_u == five.argmax_u);
  CHECK(one.argmax_z == five.argmax_z);
  REQUIRE(one.trace.size() == five.trace.size());
  for (std::size_t i = 0; i < one.trace.size(); ++i) CHECK(one.trace[i].value == five.trace[i].value);
}

TEST_CASE("periodic estimate is attained at its argmax and cross-checked") {
  const auto ps = fibonacci_pointset(11);
  const auto est = periodic_discrepancy(ps, 0.25, 2, quick_cfg());
  const auto box = est.box();
  CHECK(std::abs(error_direct(ps, box, std::vector<double>{0.0, 0.0})) == doctest::Approx(est.estimate));
  REQUIRE(est.cross_check.has_value());
  CHECK(est.cross_check->consistent);
  CHECK(est.lattice_reduced);
}

TEST_CASE("non-periodic search") {
  const auto ps = fibonacci_pointset(9);
  const auto est = nonperiodic_discrepancy(ps, 0.2, 2, quick_cfg());
  const auto box = est.box();
  CHECK(box.is_interior());
  CHECK(std::abs(error_direct(ps, box, std::vector<double>{0.0, 0.0})) == doctest::Approx(est.estimate).epsilon(1e-12));
  CHECK(std::abs(nonperiodic_error(ps, box)) == est.estimate);

  // v = 1 leaves the single cube-filling box centred in the cube
  const auto full = nonperiodic_discrepancy(ps, 1.0, 2, quick_cfg());
  CHECK(full.u_candidates == 1);
  CHECK(full.argmax_z[0] == doctest::Approx(0.5));
  CHECK(full.argmax_z[1] == doctest::Approx(0.5));
}

TEST_CASE("empty interior box integrand is the kernel integral") {
  const PointSet ps(2, {0.05, 0.05, 0.95, 0.95});
  const SmoothBox b(2, {0.5, 0.5}, {0.2, 0.1});
  CHECK(nonperiodic_error(ps, b) == doctest::Approx(std::pow(0.02, 2)));
  CHECK(box_integral(b) == doctest::Approx(std::pow(0.02, 2)));
}

TEST_CASE("search preconditions") {
  const auto ps = fibonacci_pointset(6);
  SearchConfig c = quick_cfg();
  CHECK_THROWS_AS(periodic_discrepancy(ps, 0.0, 2, c), PreconditionError);
  CHECK_THROWS_AS(periodic_discrepancy(ps, 1.5, 2, c), PreconditionError);
  CHECK_THROWS_AS(periodic_discrepancy(ps, 0.5, 0, c), PreconditionError);
  c.z_grid = 1;
  CHECK_THROWS_AS(periodic_discrepancy(ps, 0.5, 2, c), PreconditionError);
  c = quick_cfg();
  c.p = 0.5;
  CHECK_THROWS_AS(periodic_discrepancy(ps, 0.5, 2, c), PreconditionError);
  c = quick_cfg();
  c.breakpoints = false;
  c.z_grid = 4;
  CHECK_FALSE(periodic_discrepancy(ps, 0.5, 2, c).warnings.empty());
}
