#include "korodisc/lattice.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numbers>
#include <string>

#include "korodisc/errors.hpp"
#include "korodisc/number_theory.hpp"
#include "korodisc/parallel.hpp"

namespace korodisc {

namespace {

std::int64_t abs_weight(std::int64_t c) { return c < 0 ? -c : (c == 0 ? 1 : c); }

std::int64_t floor_div(std::int64_t a, std::int64_t b) {
  std::int64_t q = a / b;
  if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
  return q;
}

std::int64_t ceil_div(std::int64_t a, std::int64_t b) { return -floor_div(-a, b); }

// Appends the members of first + k*step inside [lo, hi], ascending.
void progression_in_range(std::int64_t first, std::int64_t step, std::int64_t lo, std::int64_t hi,
                          std::vector<std::int64_t>& out) {
  if (lo > hi) return;
  for (std::int64_t x = first + ceil_div(lo - first, step) * step; x <= hi; x += step) {
    out.push_back(x);
  }
}

std::uint64_t cross_size_memo(std::int64_t budget, std::size_t d,
                              std::map<std::pair<std::int64_t, std::size_t>, std::uint64_t>& memo) {
  if (d == 0) return 1;
  const auto key = std::make_pair(budget, d);
  if (auto it = memo.find(key); it != memo.end()) return it->second;
  std::uint64_t total = cross_size_memo(budget, d - 1, memo);  // c = 0
  for (std::int64_t c = 1; c <= budget; ++c) {
    total += 2 * cross_size_memo(budget / c, d - 1, memo);
  }
  memo.emplace(key, total);
  return total;
}

void require_dim_match(std::span<const std::int64_t> k, const Generator& g) {
  if (k.size() != g.a.size()) {
    throw PreconditionError("frequency vector length " + std::to_string(k.size()) +
                            " does not match generator length " + std::to_string(g.a.size()));
  }
}

}  // namespace

std::uint64_t hyperbolic_product(std::span<const std::int64_t> k) {
  std::uint64_t p = 1;
  for (std::int64_t c : k) {
    const auto w = static_cast<std::uint64_t>(abs_weight(c));
    if (p > std::numeric_limits<std::uint64_t>::max() / w) {
      return std::numeric_limits<std::uint64_t>::max();
    }
    p *= w;
  }
  return p;
}

std::uint64_t hyperbolic_cross_size(std::int64_t N, std::size_t d) {
  if (N < 1 || d < 1) throw PreconditionError("hyperbolic cross requires N >= 1 and d >= 1");
  std::map<std::pair<std::int64_t, std::size_t>, std::uint64_t> memo;
  return cross_size_memo(N, d, memo);
}

std::vector<FreqVector> hyperbolic_cross(std::int64_t N, std::size_t d, std::size_t limit) {
  const std::uint64_t size = hyperbolic_cross_size(N, d);
  if (size > limit) {
    throw ResourceError("hyperbolic cross of order " + std::to_string(N) + " in dimension " +
                        std::to_string(d) + " has " + std::to_string(size) +
                        " vectors, above the limit " + std::to_string(limit));
  }
  std::vector<FreqVector> out;
  out.reserve(static_cast<std::size_t>(size));
  for_each_in_hyperbolic_cross(N, d, [&](std::span<const std::int64_t> k) {
    out.emplace_back(k.begin(), k.end());
    return true;
  });
  return out;
}

std::int64_t lattice_residue(std::span<const std::int64_t> k, const Generator& g) {
  require_dim_match(k, g);
  __int128 acc = 0;
  for (std::size_t j = 0; j < k.size(); ++j) {
    acc += static_cast<__int128>(mod_floor(k[j], g.m)) * g.a[j];
    acc %= g.m;
  }
  return static_cast<std::int64_t>(acc);
}

int exponential_sum(std::span<const std::int64_t> k, const Generator& g) {
  return lattice_residue(k, g) == 0 ? 1 : 0;
}

std::complex<double> exponential_sum_direct(std::span<const std::int64_t> k, const Generator& g) {
  require_dim_match(k, g);
  const double m = static_cast<double>(g.m);
  std::complex<double> sum{0.0, 0.0};
  for (std::int64_t mu = 1; mu <= g.m; ++mu) {
    double phase = 0.0;
    for (std::size_t j = 0; j < k.size(); ++j) {
      const double y = static_cast<double>(mul_mod(mu, g.a[j], g.m)) / m;
      phase += static_cast<double>(k[j]) * y;
      phase -= std::floor(phase);
    }
    sum += std::polar(1.0, 2.0 * std::numbers::pi * phase);
  }
  return sum / m;
}

bool is_exact(const Generator& g, std::int64_t L) {
  if (L < 1) throw PreconditionError("exactness order must be >= 1");
  bool exact = true;
  for_each_in_hyperbolic_cross(L, g.dim(), [&](std::span<const std::int64_t> k) {
    const bool zero = std::all_of(k.begin(), k.end(), [](std::int64_t c) { return c == 0; });
    if (!zero && lattice_residue(k, g) == 0) {
      exact = false;
      return false;
    }
    return true;
  });
  return exact;
}

std::int64_t default_exactness_cap(std::size_t d) {
  if (d <= 2) return 4096;
  if (d == 3) return 256;
  return 64;
}

ExactnessResult max_exactness(const Generator& g, std::int64_t cap) {
  if (cap < 1) throw PreconditionError("exactness cap must be >= 1");
  const std::size_t d = g.dim();
  if (d == 0) throw PreconditionError("generator has no components");
  ExactnessResult result;
  result.cap = cap;
  std::uint64_t best = static_cast<std::uint64_t>(cap) + 1;
  std::vector<std::int64_t> full(d, 0);

  // Walk prefixes (k_1..k_{d-1}) of the cross of order `cap`; the last
  // component is the smallest solution of a_d k_d = -(prefix residue).
  auto visit = [&](std::span<const std::int64_t> prefix) {
    std::int64_t w = 1;
    bool zero_prefix = true;
    __int128 acc = 0;
    for (std::size_t j = 0; j < prefix.size(); ++j) {
      w *= abs_weight(prefix[j]);
      zero_prefix = zero_prefix && prefix[j] == 0;
      acc += static_cast<__int128>(mod_floor(prefix[j], g.m)) * g.a[j];
      acc %= g.m;
    }
    const std::int64_t target = mod_floor(-static_cast<std::int64_t>(acc), g.m);
    const auto sol = solve_linear_congruence(g.a[d - 1], target, g.m);
    if (!sol) return true;
    std::int64_t x;
    if (sol->first == 0) {
      x = zero_prefix ? -sol->step : 0;
    } else {
      const std::int64_t neg = sol->first - sol->step;
      x = (-neg <= sol->first) ? neg : sol->first;
    }
    const std::int64_t budget = cap / w;
    if ((x < 0 ? -x : x) > budget) return true;
    const std::uint64_t hp = static_cast<std::uint64_t>(w) * static_cast<std::uint64_t>(abs_weight(x));
    if (hp < best) {
      best = hp;
      std::copy(prefix.begin(), prefix.end(), full.begin());
      full[d - 1] = x;
      result.witness = full;
    }
    return true;
  };
  if (d == 1) {
    visit(std::span<const std::int64_t>{});
  } else {
    for_each_in_hyperbolic_cross(cap, d - 1, visit);
  }
  if (best <= static_cast<std::uint64_t>(cap)) {
    result.n_max = static_cast<std::int64_t>(best) - 1;
  } else {
    result.witness.clear();
  }
  return result;
}

bool search_precondition_holds(std::int64_t m, std::int64_t L, std::size_t d) {
  const std::uint64_t size = hyperbolic_cross_size(L, d);
  return static_cast<unsigned __int128>(size) * d < static_cast<unsigned __int128>(m - 1);
}

SearchResult search_generator(std::int64_t m, std::int64_t L, std::size_t d,
                              const SearchOptions& options) {
  if (d < 1) throw PreconditionError("dimension must be >= 1");
  if (L < 1) throw PreconditionError("exactness order L must be >= 1");
  if (m < 2 || !is_prime(static_cast<std::uint64_t>(m))) {
    throw PreconditionError("m = " + std::to_string(m) + " is not prime");
  }
  SearchResult result;
  result.m = m;
  result.L = L;
  result.d = d;
  result.cross_size = hyperbolic_cross_size(L, d);
  if (!options.force && !search_precondition_holds(m, L, d)) {
    throw PreconditionError("precondition |Gamma(L,d)| < (m-1)/d violated: |Gamma(" +
                            std::to_string(L) + "," + std::to_string(d) +
                            ")| = " + std::to_string(result.cross_size) + ", (m-1)/d = " +
                            std::to_string(static_cast<double>(m - 1) / static_cast<double>(d)));
  }

  std::vector<FreqVector> vectors = hyperbolic_cross(L, d);
  std::erase_if(vectors, [](const FreqVector& k) {
    return std::all_of(k.begin(), k.end(), [](std::int64_t c) { return c == 0; });
  });

  auto passes = [&](std::int64_t a) {
    std::vector<std::int64_t> powers(d);
    powers[0] = 1;
    for (std::size_t j = 1; j < d; ++j) powers[j] = mul_mod(powers[j - 1], a, m);
    for (const auto& k : vectors) {
      __int128 acc = 0;
      for (std::size_t j = 0; j < d; ++j) acc += static_cast<__int128>(k[j]) * powers[j];
      if (acc % m == 0) return false;
    }
    return true;
  };

  // Batches of candidates in increasing order; the first passing index of the
  // first batch with any pass is the answer regardless of thread count.
  constexpr std::int64_t kBatch = 256;
  std::int64_t found = 0;
  std::vector<char> ok(kBatch);
  for (std::int64_t start = 1; start < m && found == 0; start += kBatch) {
    const std::int64_t count = std::min<std::int64_t>(kBatch, m - start);
    parallel_for(static_cast<std::size_t>(count), options.threads,
                 [&](std::size_t i) { ok[i] = passes(start + static_cast<std::int64_t>(i)) ? 1 : 0; });
    for (std::int64_t i = 0; i < count; ++i) {
      if (ok[static_cast<std::size_t>(i)]) {
        found = start + i;
        break;
      }
    }
  }
  if (found == 0) {
    throw NotFoundError("no scalar a in [1," + std::to_string(m) + ") is exact on Gamma(" +
                        std::to_string(L) + "," + std::to_string(d) + ")");
  }
  result.a = found;

  if (options.diagnostics &&
      static_cast<unsigned __int128>(m) * vectors.size() * d <= options.diagnostics_budget) {
    std::vector<int> violations(vectors.size(), 0);
    std::vector<std::int64_t> powers(d);
    for (std::int64_t a = 1; a < m; ++a) {
      powers[0] = 1;
      for (std::size_t j = 1; j < d; ++j) powers[j] = mul_mod(powers[j - 1], a, m);
      for (std::size_t v = 0; v < vectors.size(); ++v) {
        __int128 acc = 0;
        for (std::size_t j = 0; j < d; ++j) acc += static_cast<__int128>(vectors[v][j]) * powers[j];
        if (acc % m == 0) ++violations[v];
      }
    }
    int worst = 0;
    for (std::size_t v = 0; v < vectors.size(); ++v) {
      const bool vanishes = std::all_of(vectors[v].begin(), vectors[v].end(),
                                        [&](std::int64_t c) { return mod_floor(c, m) == 0; });
      if (vanishes) continue;
      worst = std::max(worst, violations[v]);
    }
    if (worst > static_cast<int>(d) - 1) {
      throw InconsistencyError("a nonzero polynomial of degree <= " + std::to_string(d - 1) +
                               " has " + std::to_string(worst) + " roots modulo prime " +
                               std::to_string(m));
    }
    result.max_violations_per_vector = worst;
  }

  result.verified = is_exact(Generator::special(m, found, d), L);
  if (!result.verified) {
    throw InconsistencyError("generator a = " + std::to_string(found) +
                             " failed exactness re-verification");
  }
  return result;
}

namespace detail {
std::vector<std::int64_t> block_axis_values(int s) {
  if (s < 0) throw PreconditionError("dyadic level must be >= 0");
  if (s > 62) throw RangeError("dyadic level too large");
  if (s == 0) return {0};
  const std::int64_t lo = std::int64_t{1} << (s - 1);
  const std::int64_t hi = (std::int64_t{1} << s) - 1;
  std::vector<std::int64_t> out;
  out.reserve(static_cast<std::size_t>(2 * (hi - lo + 1)));
  for (std::int64_t x = -hi; x <= -lo; ++x) out.push_back(x);
  for (std::int64_t x = lo; x <= hi; ++x) out.push_back(x);
  return out;
}
}  // namespace detail

std::uint64_t dyadic_block_size(std::span<const int> s) {
  std::uint64_t size = 1;
  for (int sj : s) {
    if (sj < 0) throw PreconditionError("dyadic level must be >= 0");
    if (sj > 0) {
      if (sj >= 63) throw RangeError("dyadic block too large");
      const std::uint64_t f = std::uint64_t{1} << sj;
      if (size > std::numeric_limits<std::uint64_t>::max() / f) {
        return std::numeric_limits<std::uint64_t>::max();
      }
      size *= f;
    }
  }
  return size;
}

std::vector<FreqVector> dual_in_block(const Generator& g, std::span<const int> s,
                                      std::size_t limit) {
  const std::size_t d = g.dim();
  if (s.size() != d) throw PreconditionError("dyadic level length does not match generator");
  std::vector<std::vector<std::int64_t>> axes(d);
  std::uint64_t prefixes = 1;
  for (std::size_t j = 0; j + 1 < d; ++j) {
    axes[j] = detail::block_axis_values(s[j]);
    prefixes *= axes[j].size();
    if (prefixes > limit) throw ResourceError("dyadic block enumeration exceeds the limit");
  }
  const int last = s[d - 1];
  if (last < 0) throw PreconditionError("dyadic level must be >= 0");

  std::vector<FreqVector> out;
  std::vector<std::int64_t> k(d, 0);
  std::vector<std::size_t> idx(d > 0 ? d - 1 : 0, 0);
  std::vector<std::int64_t> solutions;
  while (true) {
    __int128 acc = 0;
    for (std::size_t j = 0; j + 1 < d; ++j) {
      k[j] = axes[j][idx[j]];
      acc += static_cast<__int128>(mod_floor(k[j], g.m)) * g.a[j];
      acc %= g.m;
    }
    const std::int64_t target = mod_floor(-static_cast<std::int64_t>(acc), g.m);
    if (auto sol = solve_linear_congruence(g.a[d - 1], target, g.m)) {
      solutions.clear();
      if (last == 0) {
        if (sol->first == 0) solutions.push_back(0);
      } else {
        const std::int64_t lo = std::int64_t{1} << (last - 1);
        const std::int64_t hi = (std::int64_t{1} << last) - 1;
        progression_in_range(sol->first, sol->step, -hi, -lo, solutions);
        progression_in_range(sol->first, sol->step, lo, hi, solutions);
      }
      for (std::int64_t x : solutions) {
        k[d - 1] = x;
        out.push_back(k);
        if (out.size() > limit) throw ResourceError("dyadic block intersection exceeds the limit");
      }
    }
    // Odometer over the prefix axes (last prefix axis fastest).
    std::size_t j = d - 1;
    while (j > 0) {
      --j;
      if (++idx[j] < axes[j].size()) break;
      idx[j] = 0;
      if (j == 0) return out;
    }
    if (d == 1) return out;
  }
}

}  // namespace korodisc
