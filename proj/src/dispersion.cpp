#include "korodisc/dispersion.hpp"

#include <algorithm>
#include <array>
#include <atomic>
#include <cmath>
#include <limits>
#include <mutex>
#include <numeric>
#include <random>
#include <string>

#include "korodisc/errors.hpp"
#include "korodisc/number_theory.hpp"
#include "korodisc/parallel.hpp"

namespace korodisc {

double AxisBox::volume() const {
  double v = 1.0;
  for (std::size_t j = 0; j < lo.size(); ++j) v *= hi[j] - lo[j];
  return v;
}

namespace {

constexpr std::size_t kMaxExactDim = 4;

// Coordinates either as integer numerators over m (one = m) or as doubles
// (one = 1). Volumes are products of side lengths in that unit.
template <class T>
struct Coords {
  std::size_t d = 0;
  std::size_t n = 0;
  std::vector<T> x;
  T one{};
  T at(std::size_t i, std::size_t j) const { return x[i * d + j]; }
};

template <class T>
using Vol = std::conditional_t<std::is_integral_v<T>, std::int64_t, double>;

template <class T>
struct Candidate {
  Vol<T> vol{};
  std::vector<T> lo, hi;
  bool valid = false;
};

template <class T>
Vol<T> box_volume(const std::vector<T>& lo, const std::vector<T>& hi) {
  Vol<T> v = 1;
  for (std::size_t j = 0; j < lo.size(); ++j) v *= static_cast<Vol<T>>(hi[j] - lo[j]);
  return v;
}

// Larger volume first, then lexicographically smaller (lo, hi).
template <class T>
bool better(const Candidate<T>& a, const Candidate<T>& b) {
  if (!b.valid) return a.valid;
  if (!a.valid) return false;
  if (a.vol != b.vol) return a.vol > b.vol;
  if (a.lo != b.lo) return a.lo < b.lo;
  return a.hi < b.hi;
}

template <class T>
void offer(Candidate<T>& best, Vol<T> vol, const std::vector<T>& lo, const std::vector<T>& hi) {
  if (best.valid && vol < best.vol) return;
  Candidate<T> c{vol, lo, hi, true};
  if (better(c, best)) best = std::move(c);
}

template <class T>
bool strictly_inside(const Coords<T>& c, std::size_t i, const std::vector<T>& lo, const std::vector<T>& hi) {
  for (std::size_t j = 0; j < c.d; ++j) {
    const T v = c.at(i, j);
    if (!(lo[j] < v && v < hi[j])) return false;
  }
  return true;
}

template <class T>
bool in_half_open(const Coords<T>& c, std::size_t i, const std::vector<T>& lo, const std::vector<T>& hi) {
  for (std::size_t j = 0; j < c.d; ++j) {
    const T v = c.at(i, j);
    if (!(lo[j] <= v && v < hi[j])) return false;
  }
  return true;
}

// Largest gap between consecutive values of {0, coordinates, one}, the
// smallest such gap start on ties.
template <class T>
std::pair<T, T> max_gap(std::vector<T> v, T one) {
  v.push_back(T{});
  v.push_back(one);
  std::sort(v.begin(), v.end());
  std::pair<T, T> best{T{}, T{}};
  for (std::size_t i = 0; i + 1 < v.size(); ++i) {
    if (v[i + 1] - v[i] > best.second - best.first) best = {v[i], v[i + 1]};
  }
  return best;
}

// ---------------------------------------------------------------------------
// Exact sweep. The lower face on axis 0 is either 0 or an anchor point p with
// its projection strictly inside the cross-section; the upper face walks
// through the axis-0 levels above. Between levels the solver holds every
// maximal empty cross-section box that contains the anchor projection
// (all of them without an anchor). Inserting a point splits each box
// containing it into one child per side, keeping maximal children only.

template <class T>
struct Rect {
  std::array<T, kMaxExactDim - 1> lo{};
  std::array<T, kMaxExactDim - 1> hi{};
};

template <class T>
class Sweep {
 public:
  Sweep(const Coords<T>& c, unsigned threads) : c_(c), threads_(threads), cd_(c.d - 1) {
    order_.resize(c.n);
    std::iota(order_.begin(), order_.end(), std::size_t{0});
    std::stable_sort(order_.begin(), order_.end(),
                     [&](std::size_t a, std::size_t b) { return c_.at(a, 0) < c_.at(b, 0); });
    // per cross axis: (value, point) sorted, for face-blocker lookups
    by_value_.resize(cd_);
    for (std::size_t k = 0; k < cd_; ++k) {
      auto& bv = by_value_[k];
      bv.reserve(c.n);
      for (std::size_t i = 0; i < c.n; ++i) bv.emplace_back(c_.at(i, k + 1), i);
      std::sort(bv.begin(), bv.end());
    }
  }

  Candidate<T> run() {
    seed_lower_bound();
    // anchor index n means "lower face at 0"
    const std::size_t anchors = c_.n + 1;
    std::vector<Candidate<T>> local(anchors);
    parallel_for(anchors, threads_, [&](std::size_t a) { local[a] = solve_anchor(a); });
    Candidate<T> best = seed_;
    for (auto& cand : local) {
      if (better(cand, best)) best = std::move(cand);
    }
    return best;
  }

 private:
  void seed_lower_bound() {
    // full slabs [0,1)^{d-1} x gap along each axis
    for (std::size_t j = 0; j < c_.d; ++j) {
      std::vector<T> v(c_.n);
      for (std::size_t i = 0; i < c_.n; ++i) v[i] = c_.at(i, j);
      auto [g0, g1] = max_gap(std::move(v), c_.one);
      std::vector<T> lo(c_.d, T{}), hi(c_.d, c_.one);
      lo[j] = g0;
      hi[j] = g1;
      offer(seed_, box_volume(lo, hi), lo, hi);
    }
    publish(seed_.vol);
  }

  void publish(Vol<T> v) {
    Vol<T> cur = best_vol_.load(std::memory_order_relaxed);
    while (v > cur && !best_vol_.compare_exchange_weak(cur, v, std::memory_order_relaxed)) {
    }
  }

  Vol<T> area(const Rect<T>& r) const {
    Vol<T> a = 1;
    for (std::size_t k = 0; k < cd_; ++k) a *= static_cast<Vol<T>>(r.hi[k] - r.lo[k]);
    return a;
  }

  // Is the face of r on cross axis k at value `at` touched, strictly within
  // the other ranges, by an inserted point (x_0 in (lo0, top])?
  bool blocked(const Rect<T>& r, std::size_t k, T at, T lo0, T top, std::size_t anchor) const {
    if (at == T{} || at == c_.one) return true;
    const auto& bv = by_value_[k];
    auto it = std::lower_bound(bv.begin(), bv.end(), std::pair<T, std::size_t>{at, 0});
    for (; it != bv.end() && it->first == at; ++it) {
      const std::size_t i = it->second;
      if (i == anchor) continue;
      const T x0 = c_.at(i, 0);
      if (!(lo0 < x0 && x0 <= top)) continue;
      bool inside = true;
      for (std::size_t o = 0; o < cd_ && inside; ++o) {
        if (o == k) continue;
        const T v = c_.at(i, o + 1);
        inside = r.lo[o] < v && v < r.hi[o];
      }
      if (inside) return true;
    }
    return false;
  }

  bool maximal(const Rect<T>& r, std::size_t skip_axis, bool skip_hi, T lo0, T top, std::size_t anchor) const {
    for (std::size_t k = 0; k < cd_; ++k) {
      if (!(k == skip_axis && !skip_hi) && !blocked(r, k, r.lo[k], lo0, top, anchor)) return false;
      if (!(k == skip_axis && skip_hi) && !blocked(r, k, r.hi[k], lo0, top, anchor)) return false;
    }
    return true;
  }

  Candidate<T> solve_anchor(std::size_t anchor) {
    Candidate<T> best;
    const bool anchored = anchor < c_.n;
    const T lo0 = anchored ? c_.at(anchor, 0) : T{};
    const Vol<T> depth = static_cast<Vol<T>>(c_.one - lo0);
    if (depth <= 0) return best;
    Rect<T> unit;
    for (std::size_t k = 0; k < cd_; ++k) {
      unit.lo[k] = T{};
      unit.hi[k] = c_.one;
      if (anchored) {
        const T pk = c_.at(anchor, k + 1);
        if (!(T{} < pk && pk < c_.one)) return best;
      }
    }
    auto hopeless = [&](const Rect<T>& r) {
      return depth * area(r) < best_vol_.load(std::memory_order_relaxed);
    };
    if (hopeless(unit)) return best;

    std::vector<Rect<T>> rects{unit}, next;
    std::vector<T> lo(c_.d), hi(c_.d);
    auto emit = [&](T top) {
      for (const auto& r : rects) {
        lo[0] = lo0;
        hi[0] = top;
        for (std::size_t k = 0; k < cd_; ++k) {
          lo[k + 1] = r.lo[k];
          hi[k + 1] = r.hi[k];
        }
        const Vol<T> v = box_volume(lo, hi);
        if (v >= best_vol_.load(std::memory_order_relaxed)) {
          offer(best, v, lo, hi);
          publish(v);
        }
      }
    };

    std::size_t pos = static_cast<std::size_t>(
        std::upper_bound(order_.begin(), order_.end(), lo0,
                         [&](T v, std::size_t i) { return v < c_.at(i, 0); }) -
        order_.begin());
    while (pos < order_.size() && !rects.empty()) {
      const T top = c_.at(order_[pos], 0);
      emit(top);
      for (; pos < order_.size() && c_.at(order_[pos], 0) == top; ++pos) {
        const std::size_t q = order_[pos];
        next.clear();
        for (const auto& r : rects) {
          bool inside = true;
          for (std::size_t k = 0; k < cd_ && inside; ++k) {
            const T v = c_.at(q, k + 1);
            inside = r.lo[k] < v && v < r.hi[k];
          }
          if (!inside) {
            next.push_back(r);
            continue;
          }
          for (std::size_t k = 0; k < cd_; ++k) {
            const T qk = c_.at(q, k + 1);
            const T pk = anchored ? c_.at(anchor, k + 1) : T{};
            if (!anchored || pk < qk) {
              Rect<T> ch = r;
              ch.hi[k] = qk;
              if (!hopeless(ch) && maximal(ch, k, true, lo0, top, anchor)) next.push_back(ch);
            }
            if (!anchored || pk > qk) {
              Rect<T> ch = r;
              ch.lo[k] = qk;
              if (!hopeless(ch) && maximal(ch, k, false, lo0, top, anchor)) next.push_back(ch);
            }
          }
        }
        dedupe(next);
        rects.swap(next);
      }
      std::erase_if(rects, hopeless);
    }
    if (!rects.empty()) emit(c_.one);
    return best;
  }

  void dedupe(std::vector<Rect<T>>& v) const {
    if (v.size() < 2) return;
    auto key = [](const Rect<T>& r) { return std::make_pair(r.lo, r.hi); };
    std::sort(v.begin(), v.end(), [&](const Rect<T>& a, const Rect<T>& b) { return key(a) < key(b); });
    v.erase(std::unique(v.begin(), v.end(), [&](const Rect<T>& a, const Rect<T>& b) { return key(a) == key(b); }),
            v.end());
  }

  const Coords<T>& c_;
  unsigned threads_;
  std::size_t cd_;
  std::vector<std::size_t> order_;
  std::vector<std::vector<std::pair<T, std::size_t>>> by_value_;
  Candidate<T> seed_;
  std::atomic<Vol<T>> best_vol_{0};
};

template <class T>
Candidate<T> sweep_exact(const Coords<T>& c, unsigned threads) {
  if (c.d == 1) {
    std::vector<T> v(c.x.begin(), c.x.end());
    auto [g0, g1] = max_gap(std::move(v), c.one);
    Candidate<T> best;
    offer(best, static_cast<Vol<T>>(g1 - g0), std::vector<T>{g0}, std::vector<T>{g1});
    return best;
  }
  return Sweep<T>(c, threads).run();
}

template <class T>
Candidate<T> brute_force(const Coords<T>& c) {
  const std::size_t d = c.d;
  std::vector<std::vector<T>> faces(d);
  for (std::size_t j = 0; j < d; ++j) {
    auto& f = faces[j];
    f.push_back(T{});
    f.push_back(c.one);
    for (std::size_t i = 0; i < c.n; ++i) f.push_back(c.at(i, j));
    std::sort(f.begin(), f.end());
    f.erase(std::unique(f.begin(), f.end()), f.end());
  }
  Candidate<T> best;
  std::vector<T> lo(d), hi(d);
  std::vector<std::size_t> live(c.n);
  // Axes 0..d-2 take every (lo, hi) face pair; on the last axis the best box
  // spans the largest gap between points inside the prefix ranges.
  auto rec = [&](auto& self, std::size_t j, const std::vector<std::size_t>& pts) -> void {
    if (j + 1 == d) {
      std::vector<T> v;
      v.reserve(pts.size());
      for (std::size_t i : pts) v.push_back(c.at(i, j));
      auto [g0, g1] = max_gap(std::move(v), c.one);
      lo[j] = g0;
      hi[j] = g1;
      offer(best, box_volume(lo, hi), lo, hi);
      return;
    }
    const auto& f = faces[j];
    for (std::size_t a = 0; a < f.size(); ++a) {
      for (std::size_t b = a + 1; b < f.size(); ++b) {
        lo[j] = f[a];
        hi[j] = f[b];
        std::vector<std::size_t> sub;
        for (std::size_t i : pts) {
          const T v = c.at(i, j);
          if (f[a] < v && v < f[b]) sub.push_back(i);
        }
        self(self, j + 1, sub);
      }
    }
  };
  std::iota(live.begin(), live.end(), std::size_t{0});
  rec(rec, 0, live);
  return best;
}

Coords<std::int64_t> lattice_coords(const PointSet& ps) {
  Coords<std::int64_t> c;
  c.d = ps.dim();
  c.n = ps.size();
  c.one = ps.denominator();
  c.x.assign(ps.numerators().begin(), ps.numerators().end());
  return c;
}

Coords<double> float_coords(const PointSet& ps) {
  Coords<double> c;
  c.d = ps.dim();
  c.n = ps.size();
  c.one = 1.0;
  c.x.assign(ps.coords().begin(), ps.coords().end());
  return c;
}

template <class T>
DispersionResult to_result(const Coords<T>& c, const Candidate<T>& best, const char* method) {
  DispersionResult r;
  r.method = method;
  r.witness.lo.resize(c.d);
  r.witness.hi.resize(c.d);
  const double scale = static_cast<double>(c.one);
  for (std::size_t j = 0; j < c.d; ++j) {
    r.witness.lo[j] = static_cast<double>(best.lo[j]) / scale;
    r.witness.hi[j] = static_cast<double>(best.hi[j]) / scale;
  }
  if constexpr (std::is_integral_v<T>) {
    r.volume_numerator = best.vol;
    r.volume = static_cast<double>(best.vol) / std::pow(scale, static_cast<double>(c.d));
  } else {
    r.volume = best.vol;
  }
  for (std::size_t i = 0; i < c.n && !r.witness.open_at_lo; ++i) {
    r.witness.open_at_lo = in_half_open(c, i, best.lo, best.hi);
  }
  return r;
}

DispersionResult empty_cube(std::size_t d, const PointSet& ps, const char* method) {
  DispersionResult r;
  r.method = method;
  r.volume = 1.0;
  r.witness.lo.assign(d, 0.0);
  r.witness.hi.assign(d, 1.0);
  if (ps.is_lattice()) {
    std::int64_t num = 1;
    for (std::size_t j = 0; j < d; ++j) num *= ps.denominator();
    r.volume_numerator = num;
  }
  return r;
}

bool lattice_fits(const PointSet& ps) {
  if (!ps.is_lattice()) return false;
  // volumes are products of d side numerators
  const double bits = static_cast<double>(ps.dim()) * std::log2(static_cast<double>(ps.denominator()));
  return bits < 62.0;
}

template <class T>
Candidate<T> greedy(const Coords<T>& c, std::size_t seeds, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  Candidate<T> best;
  const std::size_t d = c.d;
  std::vector<std::size_t> axes(d);
  std::vector<T> lo(d), hi(d), s(d);
  for (std::size_t t = 0; t < seeds; ++t) {
    for (std::size_t j = 0; j < d; ++j) {
      if constexpr (std::is_integral_v<T>) {
        s[j] = std::min<T>(c.one - 1, static_cast<T>(unif(rng) * static_cast<double>(c.one)));
      } else {
        s[j] = unif(rng);
      }
      lo[j] = s[j];
      hi[j] = s[j];
    }
    std::iota(axes.begin(), axes.end(), std::size_t{0});
    std::shuffle(axes.begin(), axes.end(), rng);
    std::vector<bool> grown(d, false);
    for (std::size_t j : axes) {
      // widest range on axis j around s_j given the ranges fixed so far; an
      // ungrown axis still blocks by the single coordinate s_j
      T new_lo = T{}, new_hi = c.one;
      for (std::size_t i = 0; i < c.n; ++i) {
        bool blocks = true;
        for (std::size_t o = 0; o < d && blocks; ++o) {
          if (o == j) continue;
          const T v = c.at(i, o);
          blocks = grown[o] ? (lo[o] < v && v < hi[o]) : v == s[o];
        }
        if (!blocks) continue;
        const T v = c.at(i, j);
        if (v <= s[j]) new_lo = std::max(new_lo, v);
        if (v > s[j]) new_hi = std::min(new_hi, v);
      }
      lo[j] = new_lo;
      hi[j] = new_hi;
      grown[j] = true;
    }
    bool ok = true;
    for (std::size_t j = 0; j < d; ++j) ok = ok && lo[j] < hi[j];
    if (ok) offer(best, box_volume(lo, hi), lo, hi);
  }
  return best;
}

std::size_t limit_for(std::size_t d, const DispersionOptions& opt) {
  switch (d) {
    case 1:
      return std::numeric_limits<std::size_t>::max();
    case 2:
      return opt.max_points_d2;
    case 3:
      return opt.max_points_d3;
    case 4:
      return opt.max_points_d4;
    default:
      return 0;
  }
}

}  // namespace

DispersionResult dispersion(const PointSet& ps, const DispersionOptions& opt) {
  const std::size_t d = ps.dim();
  if (opt.approximate) {
    if (ps.empty()) return empty_cube(d, ps, "approximate");
    auto c = float_coords(ps);
    auto r = to_result(c, greedy(c, opt.approx_seeds, opt.seed), "approximate");
    r.exact = false;
    return r;
  }
  if (d > kMaxExactDim) {
    throw ResourceError("exact dispersion supports d <= 4; use the approximate mode");
  }
  if (ps.size() > limit_for(d, opt)) {
    throw ResourceError("exact dispersion limit exceeded: n = " + std::to_string(ps.size()) + " in d = " +
                        std::to_string(d));
  }
  if (ps.empty()) return empty_cube(d, ps, "sweep");
  if (lattice_fits(ps)) {
    auto c = lattice_coords(ps);
    return to_result(c, sweep_exact(c, opt.threads), "sweep");
  }
  auto c = float_coords(ps);
  return to_result(c, sweep_exact(c, opt.threads), "sweep");
}

DispersionResult dispersion_bruteforce(const PointSet& ps) {
  if (ps.dim() > 3 || ps.size() > (ps.dim() <= 2 ? 400u : 200u))
    throw ResourceError("brute-force dispersion requires d <= 3 and n <= 400 (d <= 2) or n <= 200 (d = 3)");
  if (ps.empty()) return empty_cube(ps.dim(), ps, "bruteforce");
  if (lattice_fits(ps)) {
    auto c = lattice_coords(ps);
    return to_result(c, brute_force(c), "bruteforce");
  }
  auto c = float_coords(ps);
  return to_result(c, brute_force(c), "bruteforce");
}

namespace {

void validate_system(const IntervalSystem& sys) {
  if (!is_prime(static_cast<std::uint64_t>(std::max<std::int64_t>(sys.p, 0)))) {
    throw PreconditionError("congruence modulus p must be prime");
  }
  if (sys.a < 1 || sys.a >= sys.p) throw PreconditionError("congruence scalar a must lie in [1, p)");
  if (sys.intervals.empty()) throw PreconditionError("interval system needs at least one interval");
  for (const auto& [x, y] : sys.intervals) {
    if (!(1 <= x && x <= y && y <= sys.p)) throw PreconditionError("intervals must satisfy 1 <= x <= y <= p");
  }
}

}  // namespace

std::optional<std::int64_t> solve_congruence_system(const IntervalSystem& sys) {
  validate_system(sys);
  const std::int64_t p = sys.p;
  for (std::int64_t mu = 1; mu <= p; ++mu) {
    std::int64_t res = mu % p;
    bool ok = true;
    for (const auto& [x, y] : sys.intervals) {
      const std::int64_t r = res == 0 ? p : res;
      if (r < x || r > y) {
        ok = false;
        break;
      }
      res = mul_mod(res, sys.a, p);
    }
    if (ok) return mu;
  }
  return std::nullopt;
}

bool congruence_box_intersects(const IntervalSystem& sys, const PointSet& ps) {
  validate_system(sys);
  if (ps.dim() != sys.intervals.size()) throw PreconditionError("point set dimension differs from system");
  const double p = static_cast<double>(sys.p);
  for (std::size_t i = 0; i < ps.size(); ++i) {
    bool inside = true;
    for (std::size_t j = 0; j < ps.dim() && inside; ++j) {
      const double c = ps.coord(i, j);
      const auto [x, y] = sys.intervals[j];
      const double lo = static_cast<double>(x) / p;
      if (y == sys.p) {
        inside = c >= lo || c < 1.0 / p;
      } else {
        inside = c >= lo && c < static_cast<double>(y + 1) / p;
      }
    }
    if (inside) return true;
  }
  return false;
}

double congruence_threshold(std::int64_t p, std::size_t d, double C) {
  if (p < 2) throw PreconditionError("threshold needs p >= 2");
  const double e = static_cast<double>(d) - 1.0;
  return C * std::pow(static_cast<double>(p), e) * std::pow(std::log2(static_cast<double>(p)), e);
}

ThresholdSweep congruence_threshold_sweep(std::int64_t p, std::int64_t a) {
  validate_system(IntervalSystem{p, a, {{1, p}}});
  ThresholdSweep out;
  // residue of mu a for each residue mu of the first coordinate, both in [1, p]
  std::vector<std::int64_t> second(static_cast<std::size_t>(p + 1));
  for (std::int64_t r1 = 1; r1 <= p; ++r1) {
    const std::int64_t r2 = mul_mod(r1 % p, a, p);
    second[static_cast<std::size_t>(r1)] = r2 == 0 ? p : r2;
  }
  std::vector<std::int64_t> vals;
  for (std::int64_t x1 = 1; x1 <= p; ++x1) {
    vals.clear();
    vals.push_back(0);
    vals.push_back(p + 1);
    for (std::int64_t y1 = x1; y1 <= p; ++y1) {
      // keep vals sorted while I_1 grows
      vals.insert(std::upper_bound(vals.begin(), vals.end(), second[static_cast<std::size_t>(y1)]),
                  second[static_cast<std::size_t>(y1)]);
      std::int64_t gap = 0;
      for (std::size_t i = 0; i + 1 < vals.size(); ++i) gap = std::max(gap, vals[i + 1] - vals[i] - 1);
      out.systems_checked += static_cast<std::size_t>(p * (p + 1) / 2);
      if (gap > 0) out.max_unsolvable_product = std::max(out.max_unsolvable_product, (y1 - x1 + 1) * gap);
    }
  }
  out.min_guaranteed_product = out.max_unsolvable_product + 1;
  return out;
}

}  // namespace korodisc
