#include "korodisc/number_theory.hpp"

#include <array>
#include <numeric>

namespace korodisc {

std::int64_t pow_mod(std::int64_t base, std::uint64_t exponent, std::int64_t m) {
  if (m == 1) return 0;
  std::int64_t result = 1;
  base = mod_floor(base, m);
  while (exponent != 0) {
    if (exponent & 1u) result = mul_mod(result, base, m);
    base = mul_mod(base, base, m);
    exponent >>= 1;
  }
  return result;
}

namespace {

using u128 = unsigned __int128;

std::uint64_t mul_mod_u(std::uint64_t a, std::uint64_t b, std::uint64_t m) {
  return static_cast<std::uint64_t>(static_cast<u128>(a) * b % m);
}

std::uint64_t pow_mod_u(std::uint64_t base, std::uint64_t e, std::uint64_t m) {
  std::uint64_t result = 1 % m;
  base %= m;
  while (e != 0) {
    if (e & 1u) result = mul_mod_u(result, base, m);
    base = mul_mod_u(base, base, m);
    e >>= 1;
  }
  return result;
}

bool miller_rabin_round(std::uint64_t n, std::uint64_t witness, std::uint64_t d, int s) {
  std::uint64_t x = pow_mod_u(witness % n, d, n);
  if (x == 1 || x == n - 1) return true;
  for (int i = 1; i < s; ++i) {
    x = mul_mod_u(x, x, n);
    if (x == n - 1) return true;
  }
  return false;
}

}  // namespace

bool is_prime(std::uint64_t n) {
  constexpr std::uint64_t kTrialLimit = std::uint64_t{1} << 20;
  if (n < 2) return false;
  if (n < kTrialLimit) {
    if (n % 2 == 0) return n == 2;
    for (std::uint64_t f = 3; f * f <= n; f += 2) {
      if (n % f == 0) return false;
    }
    return true;
  }
  if (n % 2 == 0) return false;
  std::uint64_t d = n - 1;
  int s = 0;
  while ((d & 1u) == 0) {
    d >>= 1;
    ++s;
  }
  // The first twelve primes are a deterministic witness set for n < 3.3e24.
  constexpr std::array<std::uint64_t, 12> kWitnesses{2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37};
  for (std::uint64_t w : kWitnesses) {
    if (!miller_rabin_round(n, w, d, s)) return false;
  }
  return true;
}

std::optional<CongruenceSolution> solve_linear_congruence(std::int64_t a, std::int64_t c,
                                                         std::int64_t m) {
  a = mod_floor(a, m);
  c = mod_floor(c, m);
  // Extended Euclid on (a, m).
  std::int64_t old_r = a, r = m;
  std::int64_t old_s = 1, s = 0;
  while (r != 0) {
    const std::int64_t q = old_r / r;
    std::int64_t tmp = old_r - q * r;
    old_r = r;
    r = tmp;
    tmp = old_s - q * s;
    old_s = s;
    s = tmp;
  }
  const std::int64_t g = old_r;  // gcd(a, m); g == m when a == 0
  if (c % g != 0) return std::nullopt;
  const std::int64_t step = m / g;
  if (step == 1) return CongruenceSolution{0, 1};
  const std::int64_t inv = mod_floor(old_s, step);
  const std::int64_t first = mul_mod(c / g, inv, step);
  return CongruenceSolution{first, step};
}

}  // namespace korodisc
