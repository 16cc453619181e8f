#include <algorithm>
#include <cmath>
#include <random>

#include "doctest.h"
#include "korodisc/errors.hpp"
#include "korodisc/lattice.hpp"
#include "korodisc/number_theory.hpp"
#include "oracles.hpp"

using namespace korodisc;

namespace {

std::uint64_t brute_cross_size(std::int64_t N, std::size_t d) {
  std::uint64_t count = 0;
  std::vector<std::int64_t> k(d, -N);
  while (true) {
    if (hyperbolic_product(k) <= static_cast<std::uint64_t>(N)) ++count;
    std::size_t j = d;
    while (j > 0) {
      --j;
      if (k[j] < N) {
        ++k[j];
        break;
      }
      k[j] = -N;
      if (j == 0) return count;
    }
  }
}

const Generator f4 = Generator::from_vector(5, {1, 3});

}  // namespace

TEST_CASE("number theory helpers") {
  CHECK(mod_floor(-7, 5) == 3);
  CHECK(pow_mod(3, 4, 7) == 4);
  CHECK(is_prime(2));
  CHECK(is_prime(1009));
  CHECK_FALSE(is_prime(1));
  CHECK_FALSE(is_prime(561));
  CHECK(is_prime(1'000'000'007));
  CHECK(is_prime(18446744073709551557ull));
  CHECK_FALSE(is_prime(3215031751ull));
  const auto s = solve_linear_congruence(6, 4, 10);
  REQUIRE(s.has_value());
  CHECK(mod_floor(6 * s->first - 4, 10) == 0);
  CHECK(s->step == 5);
  CHECK_FALSE(solve_linear_congruence(6, 3, 10).has_value());
}

TEST_CASE("hyperbolic cross examples") {
  const auto c11 = hyperbolic_cross(1, 1);
  CHECK(c11 == std::vector<FreqVector>{{-1}, {0}, {1}});
  const auto c12 = hyperbolic_cross(1, 2);
  CHECK(c12.size() == 9);
  CHECK(hyperbolic_cross(2, 2).size() == 21);
  CHECK(std::is_sorted(c12.begin(), c12.end()));
  CHECK(std::find(c12.begin(), c12.end(), FreqVector{0, 0}) != c12.end());
  CHECK_THROWS_AS(hyperbolic_cross(1000, 3, 100), ResourceError);
}

TEST_CASE("hyperbolic cross cardinality against nested loops") {
  for (std::size_t d = 1; d <= 3; ++d) {
    for (std::int64_t N = 1; N <= 32; ++N) {
      const auto brute = brute_cross_size(N, d);
      CHECK(hyperbolic_cross(N, d).size() == brute);
      CHECK(hyperbolic_cross_size(N, d) == brute);
    }
  }
}

TEST_CASE("hyperbolic cross is nested") {
  for (std::int64_t N = 1; N < 12; ++N) {
    const auto small = hyperbolic_cross(N, 3);
    const auto big = hyperbolic_cross(N + 1, 3);
    CHECK(std::includes(big.begin(), big.end(), small.begin(), small.end()));
  }
}

TEST_CASE("exponential sum examples") {
  CHECK(exponential_sum(std::vector<std::int64_t>{2, 1}, f4) == 1);
  CHECK(exponential_sum(std::vector<std::int64_t>{1, 0}, f4) == 0);
  CHECK(exponential_sum(std::vector<std::int64_t>{0, 0}, f4) == 1);
  CHECK(exponential_sum(std::vector<std::int64_t>{0, 0}, Generator::from_vector(97, {1, 5})) == 1);
}

TEST_CASE("exponential sum modular and root of unity paths agree") {
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 200; ++trial) {
    const std::int64_t m = std::uniform_int_distribution<std::int64_t>(1, 2000)(rng);
    const std::size_t d = std::uniform_int_distribution<std::size_t>(1, 3)(rng);
    std::vector<std::int64_t> a(d), k(d);
    for (auto& c : a) c = std::uniform_int_distribution<std::int64_t>(0, m - 1)(rng);
    for (auto& c : k) c = std::uniform_int_distribution<std::int64_t>(-60, 60)(rng);
    if (trial % 4 == 0) {
      // force a lattice vector: adjust the first coordinate when a_1 is a unit
      a[0] = 1 % m;
      std::int64_t rest = 0;
      for (std::size_t j = 1; j < d; ++j) rest = mod_floor(rest + mul_mod(mod_floor(k[j], m), a[j], m), m);
      k[0] = -rest;
    }
    const auto g = Generator::from_vector(m, a);
    const int modular = exponential_sum(k, g);
    const auto direct = exponential_sum_direct(k, g);
    CHECK(std::lround(direct.real()) == modular);
    CHECK(std::abs(direct.real() - modular) < 1e-10);
    CHECK(std::abs(direct.imag()) < 1e-10);
    CHECK(std::abs(oracle::exponential_sum_roots(k, g) - modular) < 1e-10);
  }
}

TEST_CASE("is_exact examples") {
  CHECK(is_exact(f4, 1));
  CHECK_FALSE(is_exact(f4, 2));
  CHECK_FALSE(is_exact(Generator::from_vector(7, {1, 0, 3}), 1));
  CHECK_FALSE(is_exact(Generator::from_vector(1, {1, 0}), 1));
}

TEST_CASE("max_exactness examples") {
  const auto r = max_exactness(f4, 10);
  REQUIRE(r.n_max.has_value());
  CHECK(*r.n_max == 1);
  CHECK(hyperbolic_product(r.witness) == 2);
  CHECK(exponential_sum(r.witness, f4) == 1);
  CHECK(max_exactness(Generator::from_vector(2, {1, 1}), 4).n_max == 0);
  CHECK(max_exactness(Generator::from_vector(1, {1}), 3).n_max == 0);
  // a rule without short dual vectors reports the sentinel
  CHECK_FALSE(max_exactness(Generator::from_vector(1009, {1, 390}), 2).n_max.has_value());
}

TEST_CASE("max_exactness agrees with cube brute force and is_exact") {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 40; ++trial) {
    const std::size_t d = trial < 25 ? 2 : 3;
    const std::int64_t m = std::uniform_int_distribution<std::int64_t>(2, d == 2 ? 400 : 60)(rng);
    std::vector<std::int64_t> a(d);
    a[0] = 1;
    for (std::size_t j = 1; j < d; ++j) a[j] = std::uniform_int_distribution<std::int64_t>(0, m - 1)(rng);
    const auto g = Generator::from_vector(m, a);
    const std::int64_t cap = d == 2 ? 64 : 20;
    const auto fast = max_exactness(g, cap);
    const auto brute = oracle::min_hyperbolic_product_cube(g, cap);
    if (brute && brute->product <= static_cast<std::uint64_t>(cap)) {
      REQUIRE(fast.n_max.has_value());
      CHECK(static_cast<std::uint64_t>(*fast.n_max + 1) == brute->product);
      CHECK(hyperbolic_product(fast.witness) == brute->product);
      if (*fast.n_max >= 1) CHECK(is_exact(g, *fast.n_max));
      CHECK_FALSE(is_exact(g, *fast.n_max + 1));
    } else {
      CHECK_FALSE(fast.n_max.has_value());
    }
  }
}

TEST_CASE("is_exact is monotone in L") {
  const auto g = Generator::fibonacci(12);
  const auto r = max_exactness(g, 4096);
  REQUIRE(r.n_max.has_value());
  for (std::int64_t L = 1; L <= *r.n_max; ++L) CHECK(is_exact(g, L));
  CHECK_FALSE(is_exact(g, *r.n_max + 1));
}

TEST_CASE("generator search examples") {
  CHECK(search_precondition_holds(47, 2, 2));
  CHECK_FALSE(search_precondition_holds(5, 2, 2));
  const auto r = search_generator(47, 2, 2);
  CHECK(r.verified);
  CHECK(r.cross_size == 21);
  CHECK(is_exact(Generator::special(47, r.a, 2), 2));
  CHECK(r.max_violations_per_vector >= 0);
  CHECK(r.max_violations_per_vector <= 1);

  // the small examples violate the size condition and need the override
  SearchOptions force;
  force.force = true;
  CHECK_THROWS_AS(search_generator(5, 1, 2), PreconditionError);
  CHECK(search_generator(5, 1, 2, force).a == 2);
  CHECK(search_generator(2, 1, 1, force).a == 1);
  CHECK_THROWS_AS(search_generator(5, 2, 2), PreconditionError);
  CHECK_THROWS_AS(search_generator(6, 1, 2, force), PreconditionError);
  CHECK_THROWS_AS(search_generator(5, 2, 2, force), NotFoundError);
}

TEST_CASE("generator search is the smallest valid scalar and thread independent") {
  for (auto [m, L, d] : {std::tuple<std::int64_t, std::int64_t, std::size_t>{101, 4, 2}, {211, 7, 2}, {1009, 5, 3}}) {
    SearchOptions one, many;
    many.threads = 4;
    const auto r1 = search_generator(m, L, d, one);
    const auto r4 = search_generator(m, L, d, many);
    CHECK(r1.a == r4.a);
    for (std::int64_t a = 1; a < r1.a; ++a) CHECK_FALSE(is_exact(Generator::special(m, a, d), L));
    CHECK(r1.max_violations_per_vector <= static_cast<int>(d) - 1);
  }
}

TEST_CASE("dual lattice blocks") {
  CHECK(detail::block_axis_values(0) == std::vector<std::int64_t>{0});
  CHECK(detail::block_axis_values(2) == std::vector<std::int64_t>{-3, -2, 2, 3});
  CHECK(dyadic_block_size(std::vector<int>{2, 1}) == 8);
  CHECK(dual_in_block(f4, std::vector<int>{0, 0}) == std::vector<FreqVector>{{0, 0}});
  CHECK(dual_in_block(f4, std::vector<int>{1, 0}).empty());
  const auto b = dual_in_block(f4, std::vector<int>{2, 1});
  CHECK(std::find(b.begin(), b.end(), FreqVector{2, 1}) != b.end());
}

TEST_CASE("dual blocks match filtered brute force") {
  const auto g = Generator::from_vector(89, {1, 55});
  for (int s0 = 0; s0 <= 7; ++s0) {
    for (int s1 = 0; s1 <= 7; ++s1) {
      std::vector<int> s{s0, s1};
      std::vector<FreqVector> want;
      for (auto k0 : detail::block_axis_values(s0)) {
        for (auto k1 : detail::block_axis_values(s1)) {
          if (mod_floor(k0 + 55 * k1, 89) == 0) want.push_back({k0, k1});
        }
      }
      CHECK(dual_in_block(g, s) == want);
    }
  }
}

TEST_CASE("exact rules have no dual vectors in low blocks") {
  const auto g = Generator::fibonacci(14);
  const auto r = max_exactness(g, 4096);
  REQUIRE(r.n_max.has_value());
  const std::int64_t L = *r.n_max;
  for (int s0 = 0; (std::int64_t{1} << s0) <= L; ++s0) {
    for (int s1 = 0; (std::int64_t{1} << (s0 + s1)) <= L; ++s1) {
      const auto b = dual_in_block(g, std::vector<int>{s0, s1});
      if (s0 == 0 && s1 == 0) {
        CHECK(b.size() == 1);
      } else {
        CHECK(b.empty());
      }
    }
  }
}

TEST_CASE("dual block counts scale like 2^(t - t0) for Fibonacci rules") {
  // C_n = max over t in [t0, t0 + 6] of max_{|s|_1 = t} |rho(s) ∩ L| / 2^{t - t0};
  // the bound claims one C for all n, so the fitted C_n must be stable.
  double lo = 1e300, hi = 0.0;
  for (int n = 8; n <= 18; ++n) {
    const auto g = Generator::fibonacci(n);
    const auto r = max_exactness(g, 4096);
    REQUIRE(r.n_max.has_value());
    const int t0 = static_cast<int>(std::ceil(std::log2(static_cast<double>(*r.n_max + 1))));
    double c_n = 0.0;
    for (int t = t0; t <= t0 + 6; ++t) {
      std::size_t best = 0;
      for (int s0 = 0; s0 <= t; ++s0) {
        best = std::max(best, dual_in_block(g, std::vector<int>{s0, t - s0}).size());
      }
      c_n = std::max(c_n, static_cast<double>(best) / std::ldexp(1.0, t - t0));
    }
    lo = std::min(lo, c_n);
    hi = std::max(hi, c_n);
  }
  MESSAGE("fitted block constants range: " << lo << " .. " << hi);
  CHECK(lo > 0.0);
  CHECK(hi / lo <= 4.0);
}
