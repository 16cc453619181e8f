#pragma once

// Reference computations that share no code path with the library
// implementations they are checked against. Slow by design.

#include <cstdint>
#include <optional>
#include <vector>

#include "korodisc/point_sets.hpp"
#include "korodisc/smooth_kernels.hpp"

namespace korodisc::oracle {

/// Gauss-Legendre nodes and weights on [-1, 1].
struct Rule {
  std::vector<double> x, w;
};
const Rule& gauss_legendre(int n);

/// Integral of f over [a, b] split at sorted breakpoints, n-point rule per piece
/// after cutting each piece into `sub` equal parts.
template <class F>
double integrate(F&& f, double a, double b, std::vector<double> breaks, int n = 16, int sub = 1);

/// h^r_u(x) by literal repeated convolution with the indicator of [-u/2, u/2),
/// each convolution integral split at the knots of the previous factor.
double convolution_hat(int r, double u, double x);

/// int_0^1 h~^r_u(x) e^{-2 pi i k x} dx of the periodised library kernel.
double fourier_by_quadrature(int r, double u, std::int64_t k);

/// ||Delta^r_t h^r_u||_1 with Delta_t f = f(. + t) - f.
double l1_difference_norm(int r, double u, double t);

/// Tensor quadrature of periodized_box_eval over [0,1)^d.
double box_integral_by_quadrature(const SmoothBox& box);

struct MinProduct {
  std::uint64_t product = 0;
  std::vector<std::int64_t> witness;
};

/// Minimal hyperbolic product over nonzero lattice vectors in the cube
/// [-cap, cap]^d by exhaustive scan; the lexicographically first minimiser.
std::optional<MinProduct> min_hyperbolic_product_cube(const Generator& g, std::int64_t cap);

/// Sum over mu = 1..m of e^{2 pi i (k, mu a) / m} / m, phase built from the
/// integer residue of mu (k, a) mod m.
double exponential_sum_roots(const std::vector<std::int64_t>& k, const Generator& g);

}  // namespace korodisc::oracle

#include "oracles_impl.hpp"
