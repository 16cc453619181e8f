#pragma once

#include <cstdint>
#include <optional>

namespace korodisc {

// Least non-negative residue of x modulo m (m > 0).
constexpr std::int64_t mod_floor(std::int64_t x, std::int64_t m) {
  const std::int64_t r = x % m;
  return r < 0 ? r + m : r;
}

constexpr std::int64_t mul_mod(std::int64_t a, std::int64_t b, std::int64_t m) {
  return static_cast<std::int64_t>(
      mod_floor(static_cast<std::int64_t>((static_cast<__int128>(a) * b) % m), m));
}

std::int64_t pow_mod(std::int64_t base, std::uint64_t exponent, std::int64_t m);

// Deterministic for every 64-bit input: trial division below 2^20, a fixed
// Miller-Rabin witness set above.
bool is_prime(std::uint64_t n);

// Solutions of a*x = c (mod m) form the progression x = first + k*step, with
// first in [0, step). Returns nullopt when gcd(a, m) does not divide c.
struct CongruenceSolution {
  std::int64_t first;
  std::int64_t step;
};
std::optional<CongruenceSolution> solve_linear_congruence(std::int64_t a, std::int64_t c,
                                                         std::int64_t m);

}  // namespace korodisc
