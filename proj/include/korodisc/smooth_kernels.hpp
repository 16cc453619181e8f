#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace korodisc {

inline constexpr int kMaxSmoothness = 16;

/// h^r_u(x): the r-fold convolution of the indicator of [-u/2, u/2), evaluated
/// as u^{r-1} N_r(x/u + r/2) with N_r the cardinal B-spline of order r on
/// [0, r]. Support (-ru/2, ru/2); for r = 1 the left endpoint is included.
double hat_eval(int r, double u, double x);

/// Integral of h^r_u over the line: u^r.
double hat_integral(int r, double u);

/// k-th Fourier coefficient of the 1-periodisation of h^r_u:
/// (sin(pi k u) / (pi k))^r, and u^r at k = 0.
double hat_fourier(int r, double u, std::int64_t k);

/// Periodisation sum_n h^r_u(w + n). Requires r*u <= 1, so at most one shift
/// contributes after reducing w to [-1/2, 1/2).
double periodized_hat_eval(int r, double u, double w);

/// Kernel h^r_B(x) = prod_j h^r_{u_j}(x_j - z_j) of the box
/// B = prod_j [z_j - r u_j/2, z_j + r u_j/2).
class SmoothBox {
 public:
  /// Throws PreconditionError unless r in [1, kMaxSmoothness], every
  /// u_j in (0, 1/r] and every z_j in [0, 1).
  SmoothBox(int r, std::vector<double> z, std::vector<double> u);

  int r() const { return r_; }
  std::size_t dim() const { return u_.size(); }
  std::span<const double> z() const { return z_; }
  std::span<const double> u() const { return u_; }

  /// prod_j u_j
  double pr() const;
  /// prod_j r u_j
  double volume() const;
  /// Support lies inside [0,1]^d, so the periodisation is inactive.
  bool is_interior() const;

  /// Same kernel with centre (z + shift) mod 1.
  SmoothBox shifted(std::span<const double> shift) const;

 private:
  int r_;
  std::vector<double> z_;
  std::vector<double> u_;
};

double box_eval(const SmoothBox& b, std::span<const double> x);
double periodized_box_eval(const SmoothBox& b, std::span<const double> x);

/// pr(u)^r = (v / r^d)^r.
double box_integral(const SmoothBox& b);

/// prod_j hat_fourier(r, u_j, k_j): the Fourier coefficient of the
/// periodised kernel centred at the origin.
double box_fourier(const SmoothBox& b, std::span<const std::int64_t> k);

/// Upper bound for |box_fourier| over the dyadic block rho(s):
/// (pr(u) / 2^{|s|_1})^{r/2} prod_j min((2^{s_j} u_j)^{r/2}, (2^{s_j} u_j)^{-r/2}).
double block_coefficient_bound(const SmoothBox& b, std::span<const int> s);

/// sum over s with |s|_1 = t of prod_j min((2^{s_j} u_j)^{r/2}, (2^{s_j} u_j)^{-r/2}).
double sigma(int r, std::span<const double> u, int t);

namespace detail {
template <class Visit>
void compositions_rec(int remaining, std::size_t j, std::vector<int>& s, Visit& visit) {
  if (j == 0) {
    s[0] = remaining;
    visit(std::span<const int>(s));
    return;
  }
  for (int c = 0; c <= remaining; ++c) {
    s[j] = c;
    compositions_rec(remaining - c, j - 1, s, visit);
  }
}
}  // namespace detail

/// Every s in N_0^d with |s|_1 = t, in colexicographic order (last component
/// slowest).
template <class Visit>
void for_each_composition(int t, std::size_t d, Visit&& visit) {
  if (d == 0 || t < 0) return;
  std::vector<int> s(d, 0);
  detail::compositions_rec(t, d - 1, s, visit);
}

}  // namespace korodisc
