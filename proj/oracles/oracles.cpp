#include "oracles.hpp"

#include <cmath>
#include <limits>
#include <map>
#include <mutex>
#include <numbers>

namespace korodisc::oracle {

const Rule& gauss_legendre(int n) {
  static std::mutex mu;
  static std::map<int, Rule> cache;
  std::lock_guard lock(mu);
  auto it = cache.find(n);
  if (it != cache.end()) return it->second;
  Rule r;
  r.x.resize(n);
  r.w.resize(n);
  for (int i = 0; i < n; ++i) {
    // Newton iteration on P_n from the Chebyshev guess
    double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      double p0 = 1.0, p1 = x;
      for (int k = 2; k <= n; ++k) {
        const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      dp = n * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    r.x[i] = x;
    r.w[i] = 2.0 / ((1.0 - x * x) * dp * dp);
  }
  return cache.emplace(n, std::move(r)).first->second;
}

double convolution_hat(int r, double u, double x) {
  if (r == 1) return (x >= -0.5 * u && x < 0.5 * u) ? 1.0 : 0.0;
  // knots of h^{r-1}: -(r-1)u/2 + i u
  std::vector<double> knots;
  for (int i = 0; i < r; ++i) knots.push_back(-0.5 * (r - 1) * u + i * u);
  return integrate([&](double t) { return convolution_hat(r - 1, u, t); }, x - 0.5 * u, x + 0.5 * u, knots, 8);
}

double fourier_by_quadrature(int r, double u, std::int64_t k) {
  std::vector<double> breaks;
  for (int i = 0; i <= r; ++i) {
    double b = -0.5 * r * u + i * u;
    b -= std::floor(b);
    breaks.push_back(b);
  }
  const double w = 2.0 * std::numbers::pi * static_cast<double>(k);
  return integrate([&](double x) { return periodized_hat_eval(r, u, x) * std::cos(w * x); }, 0.0, 1.0, breaks, 16,
                   16);
}

double l1_difference_norm(int r, double u, double t) {
  auto diff = [&](double x) {
    double s = 0.0;
    double binom = 1.0;
    for (int i = 0; i <= r; ++i) {
      const double sign = ((r - i) % 2 == 0) ? 1.0 : -1.0;
      s += sign * binom * hat_eval(r, u, x + i * t);
      binom = binom * (r - i) / (i + 1);
    }
    return std::abs(s);
  };
  std::vector<double> breaks;
  for (int i = 0; i <= r; ++i) {
    for (int j = 0; j <= r; ++j) breaks.push_back(-0.5 * r * u + i * u - j * t);
  }
  const double a = -0.5 * r * u - r * t;
  const double b = 0.5 * r * u;
  return integrate(diff, a, b, breaks, 16, 4);
}

double box_integral_by_quadrature(const SmoothBox& box) {
  const std::size_t d = box.dim();
  const int r = box.r();
  // per-axis nodes: Gauss points on each piece between periodised knots
  std::vector<std::vector<std::pair<double, double>>> axes(d);
  const Rule& rule = gauss_legendre(8);
  for (std::size_t j = 0; j < d; ++j) {
    std::vector<double> br{0.0, 1.0};
    for (int i = 0; i <= r; ++i) {
      double b = box.z()[j] - 0.5 * r * box.u()[j] + i * box.u()[j];
      br.push_back(b - std::floor(b));
    }
    std::sort(br.begin(), br.end());
    for (std::size_t i = 0; i + 1 < br.size(); ++i) {
      const double c = 0.5 * (br[i] + br[i + 1]), h = 0.5 * (br[i + 1] - br[i]);
      if (h <= 0.0) continue;
      for (std::size_t q = 0; q < rule.x.size(); ++q) axes[j].emplace_back(c + h * rule.x[q], h * rule.w[q]);
    }
  }
  double total = 0.0;
  std::vector<std::size_t> it(d, 0);
  std::vector<double> x(d);
  while (true) {
    double w = 1.0;
    for (std::size_t j = 0; j < d; ++j) {
      x[j] = axes[j][it[j]].first;
      w *= axes[j][it[j]].second;
    }
    total += w * periodized_box_eval(box, x);
    std::size_t j = d;
    while (j > 0) {
      --j;
      if (++it[j] < axes[j].size()) break;
      it[j] = 0;
      if (j == 0) return total;
    }
  }
}

std::optional<MinProduct> min_hyperbolic_product_cube(const Generator& g, std::int64_t cap) {
  const std::size_t d = g.a.size();
  std::vector<std::int64_t> k(d, -cap);
  std::optional<MinProduct> best;
  while (true) {
    __int128 dot = 0;
    bool zero = true;
    std::uint64_t hp = 1;
    for (std::size_t j = 0; j < d; ++j) {
      dot += static_cast<__int128>(k[j]) * g.a[j];
      zero = zero && k[j] == 0;
      hp *= static_cast<std::uint64_t>(std::max<std::int64_t>(std::abs(k[j]), 1));
    }
    if (!zero && dot % g.m == 0 && (!best || hp < best->product)) best = MinProduct{hp, k};
    std::size_t j = d;
    while (j > 0) {
      --j;
      if (k[j] < cap) {
        ++k[j];
        break;
      }
      k[j] = -cap;
      if (j == 0) return best;
    }
  }
}

double exponential_sum_roots(const std::vector<std::int64_t>& k, const Generator& g) {
  const std::int64_t m = g.m;
  __int128 dot = 0;
  for (std::size_t j = 0; j < k.size(); ++j) dot += static_cast<__int128>(k[j]) * g.a[j];
  std::int64_t base = static_cast<std::int64_t>(dot % m);
  if (base < 0) base += m;
  double re = 0.0;
  for (std::int64_t mu = 1; mu <= m; ++mu) {
    const std::int64_t res = static_cast<std::int64_t>((static_cast<__int128>(mu) * base) % m);
    re += std::cos(2.0 * std::numbers::pi * static_cast<double>(res) / static_cast<double>(m));
  }
  return re / static_cast<double>(m);
}

}  // namespace korodisc::oracle
