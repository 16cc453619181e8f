#include <cmath>
#include <random>

#include "doctest.h"
#include "korodisc/dispersion.hpp"
#include "korodisc/errors.hpp"
#include "korodisc/lattice.hpp"

using namespace korodisc;

namespace {

PointSet random_set(std::mt19937_64& rng, std::size_t n, std::size_t d, bool grid) {
  std::vector<double> c(n * d);
  if (grid) {
    // coarse coordinates force shared values and duplicates
    std::uniform_int_distribution<int> U(0, 9);
    for (auto& x : c) x = U(rng) / 10.0;
  } else {
    std::uniform_real_distribution<double> U(0.0, 1.0);
    for (auto& x : c) x = U(rng);
  }
  return PointSet(d, std::move(c));
}

bool witness_is_empty(const PointSet& ps, const AxisBox& b) {
  for (std::size_t i = 0; i < ps.size(); ++i) {
    bool inside = true;
    for (std::size_t j = 0; j < ps.dim(); ++j) inside = inside && b.lo[j] < ps.coord(i, j) && ps.coord(i, j) < b.hi[j];
    if (inside) return false;
  }
  return true;
}

void check_same(const DispersionResult& a, const DispersionResult& b) {
  CHECK(a.volume == b.volume);
  CHECK(a.volume_numerator == b.volume_numerator);
  CHECK(a.witness.lo == b.witness.lo);
  CHECK(a.witness.hi == b.witness.hi);
  CHECK(a.witness.open_at_lo == b.witness.open_at_lo);
}

}  // namespace

TEST_CASE("empty set") {
  const PointSet ps(2, {});
  const auto r = dispersion(ps);
  CHECK(r.volume == 1.0);
  CHECK(r.witness.lo == std::vector<double>{0.0, 0.0});
  CHECK(r.witness.hi == std::vector<double>{1.0, 1.0});
}

TEST_CASE("single centred point") {
  const PointSet ps(2, {0.5, 0.5});
  const auto r = dispersion(ps);
  CHECK(r.volume == 0.5);
  // lexicographically smallest (lo, hi) among the four half cubes
  CHECK(r.witness.lo == std::vector<double>{0.0, 0.0});
  CHECK(r.witness.hi == std::vector<double>{0.5, 1.0});
  CHECK_FALSE(r.witness.open_at_lo);
  check_same(r, dispersion_bruteforce(ps));
}

TEST_CASE("Fibonacci F_4") {
  const auto ps = fibonacci_pointset(4);
  const auto r = dispersion(ps);
  CHECK(r.volume_numerator == 9);
  CHECK(r.volume == 0.36);
  CHECK(r.witness.lo == std::vector<double>{0.2, 0.2});
  CHECK(r.witness.hi == std::vector<double>{0.8, 0.8});
  CHECK(r.witness.open_at_lo);
  CHECK(5 * r.volume == doctest::Approx(1.8));
  check_same(r, dispersion_bruteforce(ps));
}

TEST_CASE("one dimension is the largest gap") {
  const PointSet ps(1, {0.1, 0.7, 0.3});
  const auto r = dispersion(ps);
  CHECK(r.volume == doctest::Approx(0.4));
  CHECK(r.witness.lo[0] == 0.3);
  CHECK(r.witness.hi[0] == 0.7);
  check_same(r, dispersion_bruteforce(ps));
}

TEST_CASE("sweep equals brute force on random sets") {
  std::mt19937_64 rng(2024);
  for (int trial = 0; trial < 120; ++trial) {
    const std::size_t d = 2 + trial % 2;
    const std::size_t n = 1 + trial % 30;
    const auto ps = random_set(rng, n, d, trial % 3 == 0);
    const auto fast = dispersion(ps);
    const auto slow = dispersion_bruteforce(ps);
    check_same(fast, slow);
    CHECK(witness_is_empty(ps, fast.witness));
    CHECK(fast.witness.volume() == fast.volume);
  }
}

TEST_CASE("sweep equals brute force in four dimensions on small sets") {
  // brute force stops at d = 3; compare against an inline enumeration instead
  std::mt19937_64 rng(77);
  for (int trial = 0; trial < 10; ++trial) {
    const auto ps = random_set(rng, 1 + trial, 4, trial % 2 == 0);
    const auto fast = dispersion(ps);
    CHECK(witness_is_empty(ps, fast.witness));
    std::vector<std::vector<double>> faces(4);
    for (std::size_t j = 0; j < 4; ++j) {
      faces[j] = {0.0, 1.0};
      for (std::size_t i = 0; i < ps.size(); ++i) faces[j].push_back(ps.coord(i, j));
      std::sort(faces[j].begin(), faces[j].end());
      faces[j].erase(std::unique(faces[j].begin(), faces[j].end()), faces[j].end());
    }
    double best = 0.0;
    AxisBox b;
    b.lo.resize(4);
    b.hi.resize(4);
    auto rec = [&](auto& self, std::size_t j) -> void {
      if (j == 4) {
        if (witness_is_empty(ps, b)) best = std::max(best, b.volume());
        return;
      }
      for (std::size_t x = 0; x < faces[j].size(); ++x) {
        for (std::size_t y = x + 1; y < faces[j].size(); ++y) {
          b.lo[j] = faces[j][x];
          b.hi[j] = faces[j][y];
          self(self, j + 1);
        }
      }
    };
    rec(rec, 0);
    CHECK(fast.volume == best);
  }
}

TEST_CASE("lattice sets use exact arithmetic and agree with brute force") {
  for (int n = 2; n <= 12; ++n) {
    const auto ps = fibonacci_pointset(n);
    const auto fast = dispersion(ps);
    check_same(fast, dispersion_bruteforce(ps));
    const double m = static_cast<double>(ps.denominator());
    CHECK(fast.volume == static_cast<double>(fast.volume_numerator) / (m * m));
  }
  const auto k = korobov_pointset(Generator::special(53, 10, 3), 3);
  check_same(dispersion(k), dispersion_bruteforce(k));
}

TEST_CASE("dispersion does not depend on the thread count") {
  const auto ps = fibonacci_pointset(14);
  DispersionOptions one, many;
  many.threads = 6;
  check_same(dispersion(ps, one), dispersion(ps, many));
  const auto k = korobov_pointset(Generator::special(211, 15, 3), 3);
  check_same(dispersion(k, one), dispersion(k, many));
}

TEST_CASE("adding points never increases dispersion") {
  std::mt19937_64 rng(8);
  std::uniform_real_distribution<double> U(0.0, 1.0);
  std::vector<double> c;
  double prev = 1.0;
  for (int i = 0; i < 40; ++i) {
    c.push_back(U(rng));
    c.push_back(U(rng));
    const double v = dispersion(PointSet(2, c)).volume;
    CHECK(v <= prev);
    prev = v;
  }
}

TEST_CASE("duplicated points are legal") {
  const auto base = fibonacci_pointset(7);
  std::vector<double> c(base.coords().begin(), base.coords().end());
  c.push_back(base.coord(3, 0));
  c.push_back(base.coord(3, 1));
  const PointSet dup(2, c);
  check_same(dispersion(dup), dispersion_bruteforce(dup));
  CHECK(dispersion(dup).volume == doctest::Approx(dispersion(base).volume).epsilon(1e-15));
}

TEST_CASE("limits and the approximate mode") {
  const PointSet five(5, {0.5, 0.5, 0.5, 0.5, 0.5});
  CHECK_THROWS_AS(dispersion(five), ResourceError);
  DispersionOptions approx;
  approx.approximate = true;
  const auto a = dispersion(five, approx);
  CHECK_FALSE(a.exact);
  CHECK(a.volume == doctest::Approx(0.5));
  DispersionOptions tight;
  tight.max_points_d2 = 10;
  CHECK_THROWS_AS(dispersion(fibonacci_pointset(7), tight), ResourceError);
  CHECK_THROWS_AS(dispersion_bruteforce(PointSet(4, {0.1, 0.2, 0.3, 0.4})), ResourceError);

  // the greedy estimate is a lower bound
  const auto ps = fibonacci_pointset(10);
  CHECK(dispersion(ps, approx).volume <= dispersion(ps).volume);
}

TEST_CASE("congruence systems") {
  CHECK(solve_congruence_system({5, 3, {{1, 5}, {1, 5}}}) == 1);
  CHECK(solve_congruence_system({5, 3, {{1, 2}, {1, 2}}}) == 2);
  CHECK_FALSE(solve_congruence_system({5, 3, {{1, 1}, {4, 5}}}).has_value());
  CHECK(solve_congruence_system({5, 3, {{5, 5}, {5, 5}}}) == 5);
  CHECK_THROWS_AS(solve_congruence_system({6, 1, {{1, 2}}}), PreconditionError);
  CHECK_THROWS_AS(solve_congruence_system({5, 0, {{1, 2}}}), PreconditionError);
  CHECK_THROWS_AS(solve_congruence_system({5, 2, {{3, 2}}}), PreconditionError);
}

TEST_CASE("congruence solver equals the box test") {
  const std::int64_t p = 13;
  for (std::int64_t a = 1; a < p; ++a) {
    const auto ps = korobov_pointset(Generator::special(p, a, 2), 2);
    for (std::int64_t x1 = 1; x1 <= p; ++x1)
      for (std::int64_t y1 = x1; y1 <= p; ++y1)
        for (std::int64_t x2 = 1; x2 <= p; ++x2)
          for (std::int64_t y2 = x2; y2 <= p; ++y2) {
            const IntervalSystem sys{p, a, {{x1, y1}, {x2, y2}}};
            REQUIRE(solve_congruence_system(sys).has_value() == congruence_box_intersects(sys, ps));
          }
  }
}

TEST_CASE("threshold sweep") {
  CHECK(congruence_threshold(64, 2) == doctest::Approx(64.0 * 6.0));
  const auto r = search_generator(101, 4, 2);
  const auto sweep = congruence_threshold_sweep(101, r.a);
  CHECK(sweep.max_unsolvable_product > 0);
  CHECK(static_cast<double>(sweep.min_guaranteed_product) <= congruence_threshold(101, 2));
  // spot check the claim against the solver
  const auto bad = congruence_threshold_sweep(13, 5);
  for (std::int64_t x1 = 1; x1 <= 13; ++x1)
    for (std::int64_t y1 = x1; y1 <= 13; ++y1)
      for (std::int64_t x2 = 1; x2 <= 13; ++x2)
        for (std::int64_t y2 = x2; y2 <= 13; ++y2) {
          if ((y1 - x1 + 1) * (y2 - x2 + 1) < bad.min_guaranteed_product) continue;
          CHECK(solve_congruence_system({13, 5, {{x1, y1}, {x2, y2}}}).has_value());
        }
}
