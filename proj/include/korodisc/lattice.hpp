#pragma once

#include <complex>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "korodisc/point_sets.hpp"

namespace korodisc {

using FreqVector = std::vector<std::int64_t>;
using DyadicLevel = std::vector<int>;

inline constexpr std::size_t kDefaultEnumerationLimit = std::size_t{1} << 24;

/// prod_j max(|k_j|, 1), saturating at UINT64_MAX.
std::uint64_t hyperbolic_product(std::span<const std::int64_t> k);

/// {k in Z^d : hyperbolic_product(k) <= N} in lexicographic order, zero
/// vector included. Throws ResourceError above `limit` vectors.
std::vector<FreqVector> hyperbolic_cross(std::int64_t N, std::size_t d,
                                         std::size_t limit = kDefaultEnumerationLimit);

/// |hyperbolic_cross(N, d)| without materialising the set.
std::uint64_t hyperbolic_cross_size(std::int64_t N, std::size_t d);

namespace detail {
template <class Visit>
bool visit_cross(std::int64_t budget, std::size_t j, std::vector<std::int64_t>& k, Visit& visit) {
  if (j == k.size()) return visit(std::span<const std::int64_t>(k));
  for (std::int64_t c = -budget; c <= budget; ++c) {
    k[j] = c;
    const std::int64_t w = c < 0 ? -c : (c == 0 ? 1 : c);
    if (!visit_cross(budget / w, j + 1, k, visit)) return false;
  }
  return true;
}
}  // namespace detail

/// Calls visit(span<const int64_t>) for each element of the hyperbolic cross
/// in lexicographic order; a `false` return stops the walk.
template <class Visit>
void for_each_in_hyperbolic_cross(std::int64_t N, std::size_t d, Visit&& visit) {
  std::vector<std::int64_t> k(d, 0);
  detail::visit_cross(N, 0, k, visit);
}

/// (a, k) mod m, exact.
std::int64_t lattice_residue(std::span<const std::int64_t> k, const Generator& g);

/// S(k, a) by the modular test: 1 if (a, k) = 0 (mod m), else 0.
int exponential_sum(std::span<const std::int64_t> k, const Generator& g);

/// S(k, a) as the average of e^{2 pi i (k, y^mu)} over the Korobov points,
/// evaluated in floating point. Diagnostic cross-check of exponential_sum.
std::complex<double> exponential_sum_direct(std::span<const std::int64_t> k, const Generator& g);

/// True iff no nonzero k with hyperbolic product <= L satisfies (a, k) = 0 (mod m).
bool is_exact(const Generator& g, std::int64_t L);

/// Exactness cap defaults: 4096 in d = 2, 256 in d = 3, 64 otherwise.
std::int64_t default_exactness_cap(std::size_t d);

struct ExactnessResult {
  /// (minimal hyperbolic product over L(m,a) \ {0}) - 1; nullopt when that
  /// minimum exceeds the cap.
  std::optional<std::int64_t> n_max;
  /// Lexicographically first lattice vector attaining the minimum.
  FreqVector witness;
  std::int64_t cap = 0;
};

/// Largest N for which the rule is exact on the hyperbolic cross of order N.
/// Every k with hyperbolic product <= cap has ||k||_inf <= cap, so scanning
/// the cross of order `cap` is complete.
ExactnessResult max_exactness(const Generator& g, std::int64_t cap);

struct SearchOptions {
  /// Attempt the search even when |Gamma(L,d)| >= (m-1)/d.
  bool force = false;
  /// Count, for every nonzero k, the scalars a that violate the test
  /// (bounded by d-1 over a prime field). Skipped when m * |Gamma| exceeds
  /// `diagnostics_budget`.
  bool diagnostics = true;
  std::uint64_t diagnostics_budget = 200'000'000;
  unsigned threads = 1;
};

struct SearchResult {
  std::int64_t m = 0;
  std::int64_t L = 0;
  std::size_t d = 0;
  std::int64_t a = 0;
  std::uint64_t cross_size = 0;
  bool verified = false;
  /// Max over nonzero k of #{a : k_1 + a k_2 + ... = 0 mod m}; -1 if skipped.
  int max_violations_per_vector = -1;
};

/// True iff d * |Gamma(L,d)| < m - 1.
bool search_precondition_holds(std::int64_t m, std::int64_t L, std::size_t d);

/// Smallest a in [1, m) with k_1 + a k_2 + ... + a^{d-1} k_d != 0 (mod m) for
/// every nonzero k in Gamma(L, d). m must be prime; the precondition above
/// must hold unless options.force is set. Throws NotFoundError when no
/// scalar qualifies.
SearchResult search_generator(std::int64_t m, std::int64_t L, std::size_t d,
                              const SearchOptions& options = {});

/// rho(s) = {k : floor(2^{s_j - 1}) <= |k_j| < 2^{s_j}}.
std::uint64_t dyadic_block_size(std::span<const int> s);

/// rho(s) intersected with L(m, a), in lexicographic order.
std::vector<FreqVector> dual_in_block(const Generator& g, std::span<const int> s,
                                      std::size_t limit = kDefaultEnumerationLimit);

namespace detail {
/// Values of k_j allowed by block level s_j, ascending.
std::vector<std::int64_t> block_axis_values(int s);
}  // namespace detail

}  // namespace korodisc
