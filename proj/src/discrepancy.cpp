#include "korodisc/discrepancy.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <string>

#include "korodisc/errors.hpp"
#include "korodisc/number_theory.hpp"
#include "korodisc/parallel.hpp"

namespace korodisc {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double frac(double x) {
  double f = x - std::floor(x);
  return f >= 1.0 ? 0.0 : f;
}

// Phase 2 pi (k, z) reduced mod 2 pi before the trig call.
double phase(std::span<const std::int64_t> k, std::span<const double> z) {
  double t = 0.0;
  for (std::size_t j = 0; j < k.size(); ++j) t += frac(static_cast<double>(k[j]) * z[j]);
  return 2.0 * std::numbers::pi * frac(t);
}

// Enumerates every nonzero k in L(m, a) with ||k||_inf <= cap: the first d-1
// coordinates run over the cube, the last is solved from the congruence.
template <class Visit>
void for_each_dual_in_cube(const Generator& g, std::int64_t cap, Visit&& visit) {
  const std::size_t d = g.dim();
  const std::int64_t m = g.m;
  std::vector<std::int64_t> k(d, 0);
  for (std::size_t j = 0; j + 1 < d; ++j) k[j] = -cap;
  while (true) {
    __int128 acc = 0;
    for (std::size_t j = 0; j + 1 < d; ++j) acc += static_cast<__int128>(g.a[j]) * k[j];
    const std::int64_t rhs = mod_floor(static_cast<std::int64_t>(-(acc % m)), m);
    if (auto sol = solve_linear_congruence(g.a[d - 1], rhs, m)) {
      const std::int64_t step = sol->step;
      // smallest solution >= -cap
      const std::int64_t first = mod_floor(sol->first, step);
      for (std::int64_t x = first - ((first + cap) / step) * step; x <= cap; x += step) {
        k[d - 1] = x;
        bool zero = true;
        for (auto c : k) zero = zero && c == 0;
        if (!zero) visit(std::span<const std::int64_t>(k));
      }
    }
    bool done = true;
    for (std::size_t j = d - 1; j-- > 0;) {
      if (k[j] < cap) {
        ++k[j];
        done = false;
        break;
      }
      k[j] = -cap;
    }
    if (done) return;
  }
}

// Node indices of a sorted axis in [a, b] taken mod 1, b - a < 1.
void support_indices(const std::vector<double>& nodes, double a, double b, std::vector<std::size_t>& out) {
  out.clear();
  if (b - a >= 1.0) {
    for (std::size_t i = 0; i < nodes.size(); ++i) out.push_back(i);
    return;
  }
  const double a0 = a - std::floor(a);
  const double b0 = a0 + (b - a);
  auto push_range = [&](double lo, double hi) {
    auto first = std::lower_bound(nodes.begin(), nodes.end(), lo);
    auto last = std::upper_bound(nodes.begin(), nodes.end(), hi);
    for (auto it = first; it < last; ++it) out.push_back(static_cast<std::size_t>(it - nodes.begin()));
  };
  if (b0 < 1.0) {
    push_range(a0, b0);
  } else {
    push_range(0.0, b0 - 1.0);
    push_range(a0, 1.0);
  }
}

struct NonZero {
  std::size_t index;
  double value;
};

void accumulate(const std::vector<std::vector<NonZero>>& nz, const std::vector<std::size_t>& stride,
                std::size_t j, std::size_t offset, double prod, std::vector<double>& acc) {
  if (j + 1 == nz.size()) {
    for (const auto& e : nz[j]) acc[offset + e.index * stride[j]] += prod * e.value;
    return;
  }
  for (const auto& e : nz[j]) accumulate(nz, stride, j + 1, offset + e.index * stride[j], prod * e.value, acc);
}

void sort_unique(std::vector<double>& v) {
  std::sort(v.begin(), v.end());
  std::vector<double> out;
  out.reserve(v.size());
  for (double x : v) {
    if (out.empty() || x - out.back() > 1e-14) out.push_back(x);
  }
  v.swap(out);
}

std::vector<double> midpoints(std::size_t count, double lo, double hi) {
  std::vector<double> v(count);
  for (std::size_t i = 0; i < count; ++i) {
    v[i] = lo + (hi - lo) * ((static_cast<double>(i) + 0.5) / static_cast<double>(count));
  }
  return v;
}

std::size_t grid_size(const std::vector<std::vector<double>>& axes) {
  std::size_t n = 1;
  for (const auto& a : axes) {
    if (a.empty()) return 0;
    if (n > std::numeric_limits<std::size_t>::max() / a.size()) return std::numeric_limits<std::size_t>::max();
    n *= a.size();
  }
  return n;
}

std::vector<double> node_at(const std::vector<std::vector<double>>& axes, std::size_t flat) {
  std::vector<double> z(axes.size());
  for (std::size_t j = axes.size(); j-- > 0;) {
    z[j] = axes[j][flat % axes[j].size()];
    flat /= axes[j].size();
  }
  return z;
}

// Kernel breakpoints on axis j: y_j + (i - r/2) u_j for i = 0..r and the
// point coordinates; optionally reduced mod 1/m.
std::vector<double> axis_knots(const PointSet& ps, std::size_t j, int r, double u, std::int64_t reduce_m) {
  std::vector<double> k;
  k.reserve(ps.size() * static_cast<std::size_t>(r + 2));
  const double cell = reduce_m > 0 ? 1.0 / static_cast<double>(reduce_m) : 1.0;
  auto add = [&](double x) {
    x = frac(x);
    if (reduce_m > 0) {
      x -= std::floor(x * static_cast<double>(reduce_m)) * cell;
      if (x < 0.0 || x >= cell) x = 0.0;
    }
    k.push_back(x);
  };
  for (std::size_t mu = 0; mu < ps.size(); ++mu) {
    const double y = ps.coord(mu, j);
    for (int i = 0; i <= r; ++i) add(y + (i - 0.5 * r) * u);
    add(y);
  }
  sort_unique(k);
  return k;
}

// Lattice sets invariant under their own translations with a_1 a unit mod m:
// every shift is equivalent to one with z_0 in [0, 1/m).
std::int64_t reduction_modulus(const PointSet& ps) {
  auto g = ps.generator();
  if (!g || g->m < 2 || static_cast<std::int64_t>(ps.size()) != g->m) return 0;
  return std::gcd(g->a[0], g->m) == 1 ? g->m : 0;
}

void validate_search(const PointSet& ps, double v, int r, const SearchConfig& cfg) {
  if (ps.empty()) throw PreconditionError("point set is empty");
  if (r < 1 || r > kMaxSmoothness) throw PreconditionError("smoothness order out of range");
  if (!(v > 0.0 && v <= 1.0)) throw PreconditionError("volume v must lie in (0, 1]");
  const double P = v / std::pow(static_cast<double>(r), static_cast<double>(ps.dim()));
  if (!(std::pow(P, r) > 1e-280)) throw PreconditionError("volume too small for double precision");
  if (cfg.z_grid < 2 || cfg.u_grid < 2 || cfg.quadrature_refinement < 2) {
    throw PreconditionError("search grid counts must be >= 2");
  }
  if (!(cfg.p >= 1.0)) throw PreconditionError("norm exponent p must be >= 1");
}

struct CandidateResult {
  double value = -1.0;
  std::vector<double> z;
};

bool lex_less(const std::vector<double>& a, const std::vector<double>& b) {
  return std::lexicographical_compare(a.begin(), a.end(), b.begin(), b.end());
}

// Larger value wins; ties go to the lexicographically smaller shift.
void offer(CandidateResult& best, double value, std::vector<double> z) {
  if (value > best.value || (value == best.value && lex_less(z, best.z))) {
    best.value = value;
    best.z = std::move(z);
  }
}

void offer_grid_max(CandidateResult& best, const std::vector<std::vector<double>>& axes,
                    const std::vector<double>& values) {
  std::size_t arg = 0;
  double top = -1.0;
  for (std::size_t i = 0; i < values.size(); ++i) {
    const double a = std::abs(values[i]);
    if (a > top) {
      top = a;
      arg = i;
    }
  }
  if (top >= 0.0) offer(best, top, node_at(axes, arg));
}

std::optional<CrossCheck> cross_check_at(const PointSet& ps, const SmoothBox& box) {
  auto g = ps.generator();
  if (!g || box.r() < 2 || static_cast<std::int64_t>(ps.size()) != g->m) return std::nullopt;
  const std::int64_t cap = box.dim() <= 2 ? 512 : 128;
  const std::vector<double> zero(box.dim(), 0.0);
  CrossCheck c;
  c.direct = error_direct(ps, box, zero);
  const auto f = error_fourier(*g, box, zero, cap);
  c.fourier = f.value;
  c.residual = std::abs(c.direct - c.fourier);
  c.bound = f.truncation_bound + 1e-9;
  c.consistent = c.residual <= c.bound;
  return c;
}

DiscrepancyEstimate finish(std::vector<std::vector<double>> const& cands, std::vector<CandidateResult>& results,
                           int r, double v, double p, bool with_trace) {
  DiscrepancyEstimate est;
  est.r = r;
  est.v = v;
  est.p = p;
  est.u_candidates = cands.size();
  std::size_t best = 0;
  for (std::size_t i = 1; i < results.size(); ++i) {
    // Candidates are in lexicographic u order, so strict improvement keeps
    // the smaller u on ties; equal values at equal u cannot occur.
    if (results[i].value > results[best].value) best = i;
  }
  est.estimate = results[best].value;
  est.argmax_u = cands[best];
  est.argmax_z = results[best].z;
  if (with_trace) {
    for (std::size_t i = 0; i < cands.size(); ++i) {
      est.trace.push_back(CandidateTrace{cands[i], results[i].z, results[i].value});
    }
  }
  return est;
}

}  // namespace

double error_direct(const PointSet& ps, const SmoothBox& box, std::span<const double> z_shift) {
  if (ps.dim() != box.dim()) throw PreconditionError("point set and box dimensions differ");
  if (ps.empty()) throw PreconditionError("point set is empty");
  const SmoothBox b = box.shifted(z_shift);
  double sum = 0.0;
  for (std::size_t mu = 0; mu < ps.size(); ++mu) sum += periodized_box_eval(b, ps.point(mu));
  return sum / static_cast<double>(ps.size()) - box_integral(b);
}

double nonperiodic_error(const PointSet& ps, const SmoothBox& box) {
  if (ps.dim() != box.dim()) throw PreconditionError("point set and box dimensions differ");
  if (ps.empty()) throw PreconditionError("point set is empty");
  double sum = 0.0;
  for (std::size_t mu = 0; mu < ps.size(); ++mu) sum += box_eval(box, ps.point(mu));
  return box_integral(box) - sum / static_cast<double>(ps.size());
}

double fourier_tail_bound(const SmoothBox& box, std::int64_t cap) {
  const int r = box.r();
  if (r == 1) return kInf;
  if (cap < 1) throw PreconditionError("Fourier cap must be >= 1");
  const double pi_r = std::pow(std::numbers::pi, -r);
  // |hat_fourier(k)| <= min(u^r, (pi |k|)^{-r}); the tail over |k| > cap is at
  // most 2 pi^{-r} cap^{1-r} / (r - 1) by the integral test.
  const double tail = 2.0 * pi_r * std::pow(static_cast<double>(cap), 1.0 - r) / (r - 1);
  double inside = 1.0;
  double all = 1.0;
  for (double u : box.u()) {
    double a = std::pow(u, r);
    for (std::int64_t k = 1; k <= cap; ++k) {
      a += 2.0 * std::min(std::pow(u, r), pi_r * std::pow(static_cast<double>(k), -r));
    }
    inside *= a;
    all *= a + tail;
  }
  return all - inside;
}

FourierError error_fourier(const Generator& g, const SmoothBox& box, std::span<const double> z_shift,
                           std::int64_t cap) {
  if (g.dim() != box.dim()) throw PreconditionError("generator and box dimensions differ");
  if (cap < 1) throw PreconditionError("Fourier cap must be >= 1");
  const SmoothBox b = box.shifted(z_shift);
  const std::size_t d = g.dim();
  const double m = static_cast<double>(g.m);
  const double side = static_cast<double>(2 * cap + 1);
  FourierError out;
  out.truncation_bound = fourier_tail_bound(b, cap);
  // Walking the dual lattice costs about side^d / m terms. For dense lattices
  // the same truncated sum is cheaper through the character identity
  // [k in L] = (1/m) sum_mu e(mu (k, a) / m), which factorises over axes.
  if (std::pow(side, static_cast<double>(d)) / m > 4.0 * m * static_cast<double>(d) * side) {
    std::vector<std::vector<double>> axis(d, std::vector<double>(static_cast<std::size_t>(g.m)));
    for (std::size_t j = 0; j < d; ++j) {
      const double c0 = hat_fourier(b.r(), b.u()[j], 0);
      std::vector<double> c(static_cast<std::size_t>(cap) + 1);
      for (std::int64_t k = 1; k <= cap; ++k) c[static_cast<std::size_t>(k)] = hat_fourier(b.r(), b.u()[j], k);
      for (std::int64_t res = 0; res < g.m; ++res) {
        const double w = static_cast<double>(res) / m - b.z()[j];
        double s = c0;
        for (std::int64_t k = 1; k <= cap; ++k) s += 2.0 * c[static_cast<std::size_t>(k)] * std::cos(2.0 * std::numbers::pi * static_cast<double>(k) * w);
        axis[j][static_cast<std::size_t>(res)] = s;
      }
    }
    double sum = 0.0;
    for (std::int64_t mu = 0; mu < g.m; ++mu) {
      double prod = 1.0;
      for (std::size_t j = 0; j < d; ++j) {
        const auto res = static_cast<std::size_t>((static_cast<__int128>(mu) * g.a[j]) % g.m);
        prod *= axis[j][res];
      }
      sum += prod;
    }
    double c0 = 1.0;
    for (std::size_t j = 0; j < d; ++j) c0 *= hat_fourier(b.r(), b.u()[j], 0);
    out.value = sum / m - c0;
    // number of nonzero dual vectors in the cube, by convolving residue counts
    std::vector<double> count(static_cast<std::size_t>(g.m), 0.0);
    count[0] = 1.0;
    for (std::size_t j = 0; j < d; ++j) {
      std::vector<double> per(static_cast<std::size_t>(g.m), 0.0), next(per.size(), 0.0);
      for (std::int64_t k = -cap; k <= cap; ++k) per[static_cast<std::size_t>(mod_floor(k * (g.a[j] % g.m), g.m))] += 1.0;
      for (std::size_t x = 0; x < per.size(); ++x) {
        if (count[x] == 0.0) continue;
        for (std::size_t y = 0; y < per.size(); ++y) next[(x + y) % per.size()] += count[x] * per[y];
      }
      count = std::move(next);
    }
    out.terms = static_cast<std::size_t>(count[0]) - 1;
  } else {
    for_each_dual_in_cube(g, cap, [&](std::span<const std::int64_t> k) {
      ++out.terms;
      const double c = box_fourier(b, k);
      if (c == 0.0) return;
      const double t = phase(k, b.z());
      out.value += c * std::cos(t);
      out.imaginary -= c * std::sin(t);
    });
  }
  out.certified = out.truncation_bound < std::abs(out.value);
  return out;
}

BlockNorms block_projection_norms(const Generator& g, const SmoothBox& box, std::span<const int> s) {
  if (g.dim() != box.dim() || s.size() != box.dim()) throw PreconditionError("dimension mismatch");
  BlockNorms n;
  double sq = 0.0;
  for (const auto& k : dual_in_block(g, s)) {
    const double c = box_fourier(box, k);
    sq += c * c;
    n.linf_bound += std::abs(c);
    ++n.count;
  }
  n.l2 = std::sqrt(sq);
  return n;
}

double block_projection_eval(const Generator& g, const SmoothBox& box, std::span<const int> s,
                             std::span<const double> z) {
  if (g.dim() != box.dim() || s.size() != box.dim() || z.size() != box.dim()) {
    throw PreconditionError("dimension mismatch");
  }
  const SmoothBox b = box.shifted(z);
  double sum = 0.0;
  for (const auto& k : dual_in_block(g, s)) sum += box_fourier(b, k) * std::cos(phase(k, b.z()));
  return sum;
}

std::vector<double> error_on_grid(const PointSet& ps, int r, std::span<const double> u,
                                  const std::vector<std::vector<double>>& axes) {
  const std::size_t d = ps.dim();
  if (u.size() != d || axes.size() != d) throw PreconditionError("grid dimension mismatch");
  const std::size_t total = grid_size(axes);
  if (total == std::numeric_limits<std::size_t>::max()) throw ResourceError("shift grid too large");
  std::vector<std::size_t> stride(d, 1);
  for (std::size_t j = d - 1; j-- > 0;) stride[j] = stride[j + 1] * axes[j + 1].size();
  std::vector<double> acc(total, 0.0);
  if (total == 0) return acc;

  std::vector<std::vector<NonZero>> nz(d);
  std::vector<std::size_t> idx;
  for (std::size_t mu = 0; mu < ps.size(); ++mu) {
    bool any = true;
    for (std::size_t j = 0; j < d && any; ++j) {
      nz[j].clear();
      const double y = ps.coord(mu, j);
      const double h = 0.5 * r * u[j] + 1e-12;
      support_indices(axes[j], y - h, y + h, idx);
      for (std::size_t i : idx) {
        const double val = periodized_hat_eval(r, u[j], y - axes[j][i]);
        if (val != 0.0) nz[j].push_back({i, val});
      }
      // keep each axis in index order so node sums are independent of wrap
      std::sort(nz[j].begin(), nz[j].end(), [](const NonZero& a, const NonZero& b) { return a.index < b.index; });
      any = !nz[j].empty();
    }
    if (any) accumulate(nz, stride, 0, 0, 1.0, acc);
  }
  double pr = 1.0;
  for (double uj : u) pr *= uj;
  const double integral = std::pow(pr, r);
  const double m = static_cast<double>(ps.size());
  for (double& a : acc) a = a / m - integral;
  return acc;
}

std::vector<std::vector<double>> scale_candidates(double v, int r, std::size_t d, std::size_t u_grid) {
  if (d == 0) throw PreconditionError("dimension must be >= 1");
  if (u_grid < 1) throw PreconditionError("u_grid must be >= 1");
  const double rd = static_cast<double>(r);
  const double P = v / std::pow(rd, static_cast<double>(d));
  const double hi = 1.0 / rd;
  const double lo = std::min(hi, P * std::pow(rd, static_cast<double>(d - 1)));
  if (d == 1) return {{std::min(P, hi)}};

  std::vector<double> axis;
  if (u_grid == 1 || lo >= hi) {
    axis.push_back(lo >= hi ? hi : std::sqrt(lo * hi));
  } else {
    const double ratio = hi / lo;
    for (std::size_t i = 0; i < u_grid; ++i) {
      const double t = static_cast<double>(i) / static_cast<double>(u_grid - 1);
      axis.push_back(i + 1 == u_grid ? hi : lo * std::pow(ratio, t));
    }
  }
  std::vector<std::vector<double>> out;
  std::vector<std::size_t> it(d - 1, 0);
  while (true) {
    std::vector<double> u(d);
    double prod = 1.0;
    for (std::size_t j = 0; j + 1 < d; ++j) {
      u[j] = axis[it[j]];
      prod *= u[j];
    }
    double last = P / prod;
    if (last <= hi * (1.0 + 1e-12) && last >= lo * (1.0 - 1e-12)) {
      u[d - 1] = std::clamp(last, lo, hi);
      out.push_back(std::move(u));
    }
    std::size_t j = d - 1;
    while (j > 0) {
      --j;
      if (++it[j] < axis.size()) break;
      it[j] = 0;
      if (j == 0) return out;
    }
  }
}

DiscrepancyEstimate periodic_discrepancy(const PointSet& ps, double v, int r, const SearchConfig& cfg) {
  validate_search(ps, v, r, cfg);
  const std::size_t d = ps.dim();
  const auto cands = scale_candidates(v, r, d, cfg.u_grid);
  const std::int64_t reduce = reduction_modulus(ps);
  const std::size_t m = ps.size();
  const bool sup = std::isinf(cfg.p);

  std::vector<std::string> warnings;
  std::size_t refine = cfg.quadrature_refinement;
  bool relaxed = false;
  if (!sup && d >= 3) {
    refine = std::max<std::size_t>(1, refine / 2);
    relaxed = true;
  }
  if (sup && !cfg.breakpoints && cfg.z_grid < m) {
    warnings.push_back("z_grid coarser than the point spacing; estimate may be loose");
  }

  // p < infinity: fixed midpoint quadrature grid, shared by all candidates.
  std::vector<std::vector<double>> quad_axes;
  if (!sup) {
    const std::size_t per_axis = refine * m;
    for (std::size_t j = 0; j < d; ++j) {
      if (j == 0 && reduce > 0) {
        quad_axes.push_back(midpoints(refine, 0.0, 1.0 / static_cast<double>(reduce)));
      } else {
        quad_axes.push_back(midpoints(per_axis, 0.0, 1.0));
      }
    }
    if (grid_size(quad_axes) > cfg.max_grid_nodes) {
      throw ResourceError("L_p quadrature grid exceeds max_grid_nodes");
    }
  }

  std::vector<std::vector<double>> mid_axes(d, midpoints(cfg.z_grid, 0.0, 1.0));
  if (reduce > 0) {
    // keep the midpoint nodes that fall in the first lattice cell
    std::vector<double> cell;
    for (double x : mid_axes[0]) {
      if (x * static_cast<double>(reduce) < 1.0) cell.push_back(x);
    }
    if (cell.empty()) cell.push_back(mid_axes[0].front());
    mid_axes[0] = cell;
  }

  std::vector<CandidateResult> results(cands.size());
  std::vector<std::uint8_t> knots_skipped(cands.size(), 0);
  parallel_for(cands.size(), cfg.threads, [&](std::size_t ci) {
    const auto& u = cands[ci];
    CandidateResult best;
    if (sup) {
      offer_grid_max(best, mid_axes, error_on_grid(ps, r, u, mid_axes));
      if (cfg.breakpoints) {
        std::vector<std::vector<double>> knots(d);
        for (std::size_t j = 0; j < d; ++j) knots[j] = axis_knots(ps, j, r, u[j], j == 0 ? reduce : 0);
        if (grid_size(knots) <= cfg.max_grid_nodes) {
          offer_grid_max(best, knots, error_on_grid(ps, r, u, knots));
        } else {
          knots_skipped[ci] = 1;
        }
      }
    } else {
      const auto values = error_on_grid(ps, r, u, quad_axes);
      double s = 0.0;
      for (double e : values) s += std::pow(std::abs(e), cfg.p);
      best.value = std::pow(s / static_cast<double>(values.size()), 1.0 / cfg.p);
      best.z.assign(d, 0.0);
    }
    results[ci] = std::move(best);
  });

  auto est = finish(cands, results, r, v, cfg.p, cfg.trace);
  est.lattice_reduced = reduce > 0;
  est.relaxed_quadrature = relaxed;
  est.breakpoints_used = sup && cfg.breakpoints;
  est.nodes_per_candidate = sup ? grid_size(mid_axes) : grid_size(quad_axes);
  est.quadrature_step = sup ? 0.0 : 1.0 / static_cast<double>(refine * m);
  if (std::count(knots_skipped.begin(), knots_skipped.end(), 1) > 0) {
    warnings.push_back("breakpoint grid exceeded max_grid_nodes for some scales; midpoint grid only");
  }
  est.warnings = std::move(warnings);
  est.cross_check = cross_check_at(ps, est.box());
  return est;
}

DiscrepancyEstimate nonperiodic_discrepancy(const PointSet& ps, double v, int r, const SearchConfig& cfg) {
  validate_search(ps, v, r, cfg);
  const std::size_t d = ps.dim();
  const auto cands = scale_candidates(v, r, d, cfg.u_grid);

  std::vector<CandidateResult> results(cands.size());
  std::vector<std::uint8_t> knots_skipped(cands.size(), 0);
  parallel_for(cands.size(), cfg.threads, [&](std::size_t ci) {
    const auto& u = cands[ci];
    // admissible centres keep the support inside the cube
    std::vector<std::vector<double>> axes(d);
    std::vector<std::vector<double>> knots(d);
    for (std::size_t j = 0; j < d; ++j) {
      const double h = 0.5 * r * u[j];
      const double lo = h;
      const double hi = std::min(1.0 - h, std::nextafter(1.0, 0.0));
      auto& ax = axes[j];
      if (hi <= lo) {
        ax.push_back(0.5);
        knots[j] = ax;
        continue;
      }
      ax = midpoints(cfg.z_grid, lo, hi);
      ax.push_back(lo);
      ax.push_back(hi);
      knots[j] = ax;
      if (cfg.breakpoints) {
        for (std::size_t mu = 0; mu < ps.size(); ++mu) {
          const double y = ps.coord(mu, j);
          for (int i = 0; i <= r; ++i) {
            const double x = y + (i - 0.5 * r) * u[j];
            if (x >= lo && x <= hi) knots[j].push_back(x);
          }
          if (y >= lo && y <= hi) knots[j].push_back(y);
        }
      }
      sort_unique(ax);
      sort_unique(knots[j]);
    }
    if (cfg.breakpoints && grid_size(knots) <= cfg.max_grid_nodes) {
      axes = std::move(knots);
    } else if (cfg.breakpoints) {
      knots_skipped[ci] = 1;
    }
    CandidateResult best;
    offer_grid_max(best, axes, error_on_grid(ps, r, u, axes));
    results[ci] = std::move(best);
  });

  auto est = finish(cands, results, r, v, kInf, cfg.trace);
  est.breakpoints_used = cfg.breakpoints;
  if (std::count(knots_skipped.begin(), knots_skipped.end(), 1) > 0) {
    est.warnings.push_back("breakpoint grid exceeded max_grid_nodes for some scales; midpoint grid only");
  }
  // the reported centre is the box itself; recompute the exact integrand there
  const SmoothBox box = est.box();
  est.estimate = std::abs(nonperiodic_error(ps, box));
  est.cross_check = cross_check_at(ps, box);
  return est;
}

}  // namespace korodisc
