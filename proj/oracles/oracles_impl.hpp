#pragma once

#include <algorithm>

namespace korodisc::oracle {

template <class F>
double integrate(F&& f, double a, double b, std::vector<double> breaks, int n, int sub) {
  const Rule& rule = gauss_legendre(n);
  breaks.push_back(a);
  breaks.push_back(b);
  std::sort(breaks.begin(), breaks.end());
  double total = 0.0;
  for (std::size_t i = 0; i + 1 < breaks.size(); ++i) {
    const double lo = std::max(a, breaks[i]);
    const double hi = std::min(b, breaks[i + 1]);
    if (!(hi > lo)) continue;
    const double step = (hi - lo) / sub;
    for (int s = 0; s < sub; ++s) {
      const double c = lo + (s + 0.5) * step;
      const double h = 0.5 * step;
      double piece = 0.0;
      for (std::size_t q = 0; q < rule.x.size(); ++q) piece += rule.w[q] * f(c + h * rule.x[q]);
      total += h * piece;
    }
  }
  return total;
}

}  // namespace korodisc::oracle
