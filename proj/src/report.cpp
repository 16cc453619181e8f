#include "korodisc/report.hpp"

#include <cmath>
#include <numeric>
#include <sstream>

namespace korodisc {

namespace {

std::string int128_string(__int128 v) {
  if (v == 0) return "0";
  const bool neg = v < 0;
  std::string s;
  unsigned __int128 x = neg ? -static_cast<unsigned __int128>(v) : static_cast<unsigned __int128>(v);
  while (x > 0) {
    s.insert(s.begin(), static_cast<char>('0' + static_cast<int>(x % 10)));
    x /= 10;
  }
  return neg ? "-" + s : s;
}

__int128 gcd128(__int128 a, __int128 b) {
  if (a < 0) a = -a;
  if (b < 0) b = -b;
  while (b != 0) {
    const __int128 t = a % b;
    a = b;
    b = t;
  }
  return a;
}

// JSON has no infinity; the norm index is written as a string then.
Json p_json(double p) {
  if (std::isinf(p)) return "inf";
  return p;
}

Json vec(std::span<const double> v) { return Json(std::vector<double>(v.begin(), v.end())); }

}  // namespace

std::string rational_string(__int128 numerator, __int128 denominator) {
  const __int128 g = gcd128(numerator, denominator);
  if (g > 1) {
    numerator /= g;
    denominator /= g;
  }
  return int128_string(numerator) + "/" + int128_string(denominator);
}

Json pointset_json(const PointSet& ps) {
  Json j;
  j["source"] = ps.source_tag();
  j["n"] = ps.size();
  j["d"] = ps.dim();
  if (ps.is_lattice()) j["denominator"] = ps.denominator();
  if (const auto g = ps.generator()) j["generator"] = generator_json(*g);
  return j;
}

Json generator_json(const Generator& g) {
  Json j;
  j["m"] = g.m;
  j["a"] = g.a;
  if (const auto s = g.scalar(); s && g.special_form) j["scalar"] = *s;
  return j;
}

Json search_json(const SearchResult& r) {
  Json j;
  j["schema_version"] = kSchemaVersion;
  j["m"] = r.m;
  j["L"] = r.L;
  j["d"] = r.d;
  j["a"] = r.a;
  j["generator"] = generator_json(Generator::special(r.m, r.a, r.d));
  j["cross_size"] = r.cross_size;
  j["verified"] = r.verified;
  return j;
}

Json exactness_json(const Generator& g, const ExactnessResult& r) {
  Json j;
  j["schema_version"] = kSchemaVersion;
  j["m"] = g.m;
  j["a"] = g.a;
  j["d"] = g.dim();
  j["cap"] = r.cap;
  if (r.n_max) {
    j["N_max"] = *r.n_max;
    j["witness"] = r.witness;
    j["witness_product"] = hyperbolic_product(r.witness);
  } else {
    // no nonzero dual vector with product <= cap
    j["N_max"] = nullptr;
    j["lower_bound"] = r.cap;
  }
  return j;
}

Json discrepancy_json(const PointSet& ps, const SearchConfig& cfg, const DiscrepancyEstimate& e,
                      bool periodic) {
  Json j;
  j["schema_version"] = kSchemaVersion;
  j["kind"] = periodic ? "periodic" : "nonperiodic";
  j["pointset"] = pointset_json(ps);
  j["v"] = e.v;
  j["r"] = e.r;
  j["p"] = p_json(e.p);
  Json grid;
  grid["z_grid"] = cfg.z_grid;
  grid["u_grid"] = cfg.u_grid;
  grid["u_candidates"] = e.u_candidates;
  grid["nodes_per_candidate"] = e.nodes_per_candidate;
  grid["breakpoints"] = e.breakpoints_used;
  grid["lattice_reduced"] = e.lattice_reduced;
  if (!std::isinf(e.p) && periodic) {
    grid["quadrature_refinement"] = cfg.quadrature_refinement;
    grid["quadrature_step"] = e.quadrature_step;
    grid["relaxed_quadrature"] = e.relaxed_quadrature;
  }
  j["grid"] = grid;
  j["estimate"] = e.estimate;
  j["semantics"] = "grid lower bound";
  Json box;
  box["r"] = e.r;
  box["z"] = e.argmax_z;
  box["u"] = e.argmax_u;
  j["argmax"] = box;
  if (e.cross_check) {
    Json c;
    c["direct"] = e.cross_check->direct;
    c["fourier"] = e.cross_check->fourier;
    c["residual"] = e.cross_check->residual;
    c["certificate"] = e.cross_check->bound;
    c["consistent"] = e.cross_check->consistent;
    j["cross_check"] = c;
  } else {
    j["cross_check"] = nullptr;
  }
  j["warnings"] = e.warnings;
  return j;
}

std::string trace_csv(const DiscrepancyEstimate& e) {
  std::ostringstream out;
  out.precision(17);
  const std::size_t d = e.argmax_u.size();
  for (std::size_t j = 0; j < d; ++j) out << "u" << j + 1 << ',';
  for (std::size_t j = 0; j < d; ++j) out << "z" << j + 1 << ',';
  out << "value\n";
  for (const auto& t : e.trace) {
    for (double x : t.u) out << x << ',';
    for (double x : t.z) out << x << ',';
    out << t.value << '\n';
  }
  return out.str();
}

Json dispersion_json(const PointSet& ps, const DispersionResult& r) {
  Json j;
  j["schema_version"] = kSchemaVersion;
  j["pointset"] = pointset_json(ps);
  j["n"] = ps.size();
  j["d"] = ps.dim();
  j["dispersion"] = r.volume;
  if (ps.is_lattice() && r.exact) {
    __int128 den = 1;
    for (std::size_t k = 0; k < ps.dim(); ++k) den *= ps.denominator();
    j["dispersion_exact"] = rational_string(r.volume_numerator, den);
  }
  Json w;
  w["lo"] = vec(r.witness.lo);
  w["hi"] = vec(r.witness.hi);
  Json flags = Json::array();
  if (r.witness.open_at_lo) flags.push_back("open-at-lo");
  w["flags"] = flags;
  j["witness"] = w;
  j["method"] = r.method;
  j["exact"] = r.exact;
  return j;
}

Json congruence_json(const IntervalSystem& sys, const std::optional<std::int64_t>& mu) {
  Json j;
  j["schema_version"] = kSchemaVersion;
  j["p"] = sys.p;
  j["a"] = sys.a;
  Json iv = Json::array();
  std::int64_t product = 1;
  for (auto [x, y] : sys.intervals) {
    iv.push_back({x, y});
    product *= y - x + 1;
  }
  j["intervals"] = iv;
  j["product"] = product;
  j["threshold"] = congruence_threshold(sys.p, sys.intervals.size());
  if (mu) {
    j["solvable"] = true;
    j["mu"] = *mu;
  } else {
    j["solvable"] = false;
    j["mu"] = nullptr;
  }
  return j;
}

Json threshold_json(std::int64_t p, std::int64_t a, const ThresholdSweep& s, double threshold) {
  Json j;
  j["schema_version"] = kSchemaVersion;
  j["p"] = p;
  j["a"] = a;
  j["systems_checked"] = s.systems_checked;
  j["max_unsolvable_product"] = s.max_unsolvable_product;
  j["min_guaranteed_product"] = s.min_guaranteed_product;
  j["threshold"] = threshold;
  j["threshold_sufficient"] = static_cast<double>(s.min_guaranteed_product) <= threshold;
  return j;
}

std::string dump(const Json& j) { return j.dump(2) + "\n"; }

}  // namespace korodisc
