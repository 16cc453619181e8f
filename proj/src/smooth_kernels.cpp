#include "korodisc/smooth_kernels.hpp"

#include <array>
#include <cmath>
#include <numbers>
#include <string>

#include "korodisc/errors.hpp"

namespace korodisc {

namespace {

void check_order(int r) {
  if (r < 1 || r > kMaxSmoothness) {
    throw PreconditionError("smoothness order must be in [1, " + std::to_string(kMaxSmoothness) + "]");
  }
}

// Cardinal B-spline of order r (degree r-1) on [0, r], unit integral,
// via the Cox-de Boor recursion on integer knots.
double cardinal_bspline(int r, double t) {
  if (!(t >= 0.0) || t >= static_cast<double>(r)) return 0.0;
  const int span = static_cast<int>(std::floor(t));
  std::array<double, kMaxSmoothness + 1> b{};
  b[static_cast<std::size_t>(span)] = 1.0;
  for (int k = 2; k <= r; ++k) {
    const double inv = 1.0 / static_cast<double>(k - 1);
    for (int i = 0; i <= r - k; ++i) {
      const double ti = t - i;
      b[i] = (ti * b[i] + (k - ti) * b[i + 1]) * inv;
    }
  }
  return b[0];
}

double half_power_min(double x, int r) {
  // min(x^{r/2}, x^{-r/2})
  const double p = std::pow(x, 0.5 * r);
  return std::min(p, 1.0 / p);
}

}  // namespace

double hat_eval(int r, double u, double x) {
  check_order(r);
  if (!(u > 0.0)) throw PreconditionError("kernel scale u must be positive");
  const double t = x / u + 0.5 * r;
  const double value = cardinal_bspline(r, t);
  if (value == 0.0) return 0.0;
  return r == 1 ? value : std::pow(u, r - 1) * value;
}

double hat_integral(int r, double u) {
  check_order(r);
  if (!(u > 0.0)) throw PreconditionError("kernel scale u must be positive");
  return std::pow(u, r);
}

double hat_fourier(int r, double u, std::int64_t k) {
  check_order(r);
  if (!(u > 0.0)) throw PreconditionError("kernel scale u must be positive");
  if (k == 0) return std::pow(u, r);
  const double y = std::numbers::pi * static_cast<double>(k);
  return std::pow(std::sin(y * u) / y, r);
}

double periodized_hat_eval(int r, double u, double w) {
  if (r * u > 1.0 + 1e-12) throw PreconditionError("periodisation requires r*u <= 1");
  w -= std::floor(w + 0.5);
  double value = hat_eval(r, u, w);
  const double half = 0.5 * r * u;
  if (w + 1.0 < half) value += hat_eval(r, u, w + 1.0);
  if (w - 1.0 >= -half) value += hat_eval(r, u, w - 1.0);
  return value;
}

SmoothBox::SmoothBox(int r, std::vector<double> z, std::vector<double> u)
    : r_(r), z_(std::move(z)), u_(std::move(u)) {
  check_order(r_);
  if (u_.empty()) throw PreconditionError("box dimension must be >= 1");
  if (z_.size() != u_.size()) throw PreconditionError("box centre and scale lengths differ");
  for (double& uj : u_) {
    if (!(uj > 0.0) || uj * r_ > 1.0 + 1e-12) {
      throw PreconditionError("box scale u_j must lie in (0, 1/r]");
    }
    uj = std::min(uj, 1.0 / r_);
  }
  for (double zj : z_) {
    if (!(zj >= 0.0 && zj < 1.0)) throw PreconditionError("box centre must lie in [0,1)^d");
  }
}

double SmoothBox::pr() const {
  double p = 1.0;
  for (double uj : u_) p *= uj;
  return p;
}

double SmoothBox::volume() const {
  double v = 1.0;
  for (double uj : u_) v *= r_ * uj;
  return v;
}

bool SmoothBox::is_interior() const {
  for (std::size_t j = 0; j < u_.size(); ++j) {
    const double half = 0.5 * r_ * u_[j];
    if (z_[j] - half < 0.0 || z_[j] + half > 1.0) return false;
  }
  return true;
}

SmoothBox SmoothBox::shifted(std::span<const double> shift) const {
  if (shift.size() != z_.size()) throw PreconditionError("shift length does not match box");
  std::vector<double> z(z_.size());
  for (std::size_t j = 0; j < z.size(); ++j) {
    double c = z_[j] + shift[j];
    c -= std::floor(c);
    if (c >= 1.0) c = 0.0;
    z[j] = c;
  }
  return SmoothBox(r_, std::move(z), u_);
}

double box_eval(const SmoothBox& b, std::span<const double> x) {
  if (x.size() != b.dim()) throw PreconditionError("point dimension does not match box");
  double v = 1.0;
  for (std::size_t j = 0; j < x.size() && v != 0.0; ++j) {
    v *= hat_eval(b.r(), b.u()[j], x[j] - b.z()[j]);
  }
  return v;
}

double periodized_box_eval(const SmoothBox& b, std::span<const double> x) {
  if (x.size() != b.dim()) throw PreconditionError("point dimension does not match box");
  double v = 1.0;
  for (std::size_t j = 0; j < x.size() && v != 0.0; ++j) {
    v *= periodized_hat_eval(b.r(), b.u()[j], x[j] - b.z()[j]);
  }
  return v;
}

double box_integral(const SmoothBox& b) { return std::pow(b.pr(), b.r()); }

double box_fourier(const SmoothBox& b, std::span<const std::int64_t> k) {
  if (k.size() != b.dim()) throw PreconditionError("frequency dimension does not match box");
  double c = 1.0;
  for (std::size_t j = 0; j < k.size(); ++j) c *= hat_fourier(b.r(), b.u()[j], k[j]);
  return c;
}

double block_coefficient_bound(const SmoothBox& b, std::span<const int> s) {
  if (s.size() != b.dim()) throw PreconditionError("dyadic level dimension does not match box");
  int t = 0;
  double prod = 1.0;
  for (std::size_t j = 0; j < s.size(); ++j) {
    if (s[j] < 0) throw PreconditionError("dyadic level must be >= 0");
    t += s[j];
    prod *= half_power_min(std::ldexp(b.u()[j], s[j]), b.r());
  }
  return std::pow(std::ldexp(b.pr(), -t), 0.5 * b.r()) * prod;
}

double sigma(int r, std::span<const double> u, int t) {
  check_order(r);
  if (t < 0) throw PreconditionError("sigma requires t >= 0");
  for (double uj : u) {
    if (!(uj > 0.0)) throw PreconditionError("sigma requires positive scales");
  }
  double sum = 0.0;
  for_each_composition(t, u.size(), [&](std::span<const int> s) {
    double p = 1.0;
    for (std::size_t j = 0; j < s.size(); ++j) p *= half_power_min(std::ldexp(u[j], s[j]), r);
    sum += p;
  });
  return sum;
}

}  // namespace korodisc
