#include "korodisc/cli.hpp"

#include <chrono>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <limits>
#include <optional>
#include <sstream>

#include "CLI11.hpp"
#include "korodisc/discrepancy.hpp"
#include "korodisc/dispersion.hpp"
#include "korodisc/errors.hpp"
#include "korodisc/lattice.hpp"
#include "korodisc/report.hpp"
#include "korodisc/verify.hpp"

namespace korodisc {

namespace {

struct Global {
  std::optional<unsigned> threads;
  std::string out;
  std::uint64_t seed = 1;
  bool timing = false;
};

// Point set named on the command line: a Fibonacci index, Korobov
// parameters, or a CSV file.
struct Source {
  int fib = -1;
  std::int64_t m = 0;
  std::int64_t gen = -1;
  std::size_t d = 0;
  std::vector<std::int64_t> vector;
  std::string in;

  void add_to(CLI::App* app) {
    app->add_option("--fib", fib, "Fibonacci index n");
    app->add_option("--m", m, "modulus");
    app->add_option("--gen", gen, "scalar generator a, vector (1, a, ..., a^{d-1})");
    app->add_option("--d", d, "dimension");
    app->add_option("--vector", vector, "full generator vector")->delimiter(',');
    app->add_option("--in", in, "point set CSV");
  }

  int given() const { return (fib >= 0) + (m != 0 || gen >= 0 || !vector.empty()) + !in.empty(); }

  Generator generator() const {
    if (!vector.empty()) {
      if (d != 0 && d != vector.size()) throw PreconditionError("--d disagrees with the length of --vector");
      if (gen >= 0) throw PreconditionError("give either --gen or --vector");
      return Generator::from_vector(m, vector);
    }
    if (gen < 0) throw PreconditionError("Korobov sets need --gen or --vector");
    if (d == 0) throw PreconditionError("Korobov sets need --d");
    return Generator::special(m, gen, d);
  }

  PointSet load() const {
    if (given() != 1) throw PreconditionError("give exactly one of --fib, Korobov parameters (--m ...) or --in");
    if (fib >= 0) return fibonacci_pointset(fib);
    if (!in.empty()) {
      std::ifstream f(in);
      if (!f) throw PreconditionError("cannot read " + in);
      return read_csv(f);
    }
    const auto g = generator();
    return korobov_pointset(g, g.dim());
  }
};

unsigned thread_count(const Global& g) {
  if (g.threads) return *g.threads;
  if (const char* env = std::getenv("KORODISC_THREADS"); env && *env) {
    char* end = nullptr;
    const unsigned long v = std::strtoul(env, &end, 10);
    if (*end != '\0') throw PreconditionError("KORODISC_THREADS must be a non-negative integer");
    return static_cast<unsigned>(v);
  }
  return 1;
}

class Output {
 public:
  Output(const Global& g, std::ostream& out) : g_(g), out_(out) {}

  void write(const std::string& text) {
    if (g_.out.empty()) {
      out_ << text;
      return;
    }
    std::ofstream f(g_.out);
    if (!f) throw PreconditionError("cannot write " + g_.out);
    f << text;
  }

  void json(Json j, std::chrono::steady_clock::time_point start) {
    if (g_.timing) {
      j["elapsed_ms"] = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
    }
    write(dump(j));
  }

 private:
  const Global& g_;
  std::ostream& out_;
};

double parse_p(const std::string& s) {
  if (s == "inf" || s == "infinity") return std::numeric_limits<double>::infinity();
  char* end = nullptr;
  const double p = std::strtod(s.c_str(), &end);
  if (end == s.c_str() || *end != '\0') throw PreconditionError("--p must be a number or 'inf'");
  return p;
}

std::pair<std::int64_t, std::int64_t> parse_interval(const std::string& s) {
  const auto colon = s.find(':');
  if (colon == std::string::npos) throw PreconditionError("intervals are written x:y");
  try {
    return {std::stoll(s.substr(0, colon)), std::stoll(s.substr(colon + 1))};
  } catch (const std::exception&) {
    throw PreconditionError("bad interval '" + s + "'");
  }
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Korobov and Fibonacci lattices: exactness, smooth discrepancy, dispersion", "korodisc"};
  app.require_subcommand(1);
  Global g;
  app.add_option("--threads", g.threads, "worker threads, 0 = hardware (default: KORODISC_THREADS or 1)");
  app.add_option("--out", g.out, "write the result to this file instead of stdout");
  app.add_option("--seed", g.seed, "seed for randomized samples in verify");
  app.add_flag("--timing", g.timing, "add elapsed_ms to JSON output");
  app.fallthrough();

  // pointset
  auto* pointset = app.add_subcommand("pointset", "write a point set as CSV");
  pointset->require_subcommand(1)->fallthrough();
  int fib_n = 0;
  auto* pfib = pointset->add_subcommand("fib", "Fibonacci set F_n")->fallthrough();
  pfib->add_option("--n", fib_n, "index n >= 2")->required();
  Source pk;
  auto* pkor = pointset->add_subcommand("korobov", "Korobov set K_m(a)")->fallthrough();
  pkor->add_option("--m", pk.m, "modulus")->required();
  pkor->add_option("--gen", pk.gen, "scalar generator");
  pkor->add_option("--d", pk.d, "dimension");
  pkor->add_option("--vector", pk.vector, "full generator vector")->delimiter(',');

  // lattice
  auto* lattice = app.add_subcommand("lattice", "generator search and exactness");
  lattice->require_subcommand(1)->fallthrough();
  std::int64_t sm = 0, sL = 0;
  std::size_t sd = 0;
  bool force = false;
  auto* lsearch = lattice->add_subcommand("search", "smallest a exact on Gamma(L,d)")->fallthrough();
  lsearch->add_option("--m", sm, "prime modulus")->required();
  lsearch->add_option("--L", sL, "cross order")->required();
  lsearch->add_option("--d", sd, "dimension")->required();
  lsearch->add_flag("--force", force, "run even when d |Gamma(L,d)| >= m - 1");
  Source ls;
  std::int64_t cap = 0;
  auto* lexact = lattice->add_subcommand("exactness", "largest N with exactness on Gamma(N,d)")->fallthrough();
  ls.add_to(lexact);
  lexact->add_option("--cap", cap, "scan bound (default m)");

  // disc
  auto* disc = app.add_subcommand("disc", "smooth fixed-volume discrepancy grid estimate");
  disc->require_subcommand(1)->fallthrough();
  Source ds;
  double v = 0.25;
  int r = 2;
  std::string p_text = "inf";
  SearchConfig cfg;
  bool no_breakpoints = false;
  std::string trace_file;
  auto* dper = disc->add_subcommand("periodic", "periodic L_p discrepancy")->fallthrough();
  auto* dnon = disc->add_subcommand("nonperiodic", "sup over boxes inside the cube")->fallthrough();
  for (auto* sub : {dper, dnon}) {
    ds.add_to(sub);
    sub->add_option("--v", v, "box volume in (0, 1]");
    sub->add_option("--r", r, "smoothness order");
    sub->add_option("--z-grid", cfg.z_grid, "midpoint shifts per axis");
    sub->add_option("--u-grid", cfg.u_grid, "scales per free axis");
    sub->add_option("--trace", trace_file, "CSV file with one row per candidate box");
  }
  dper->add_option("--p", p_text, "norm index, number or inf");
  dper->add_option("--refine", cfg.quadrature_refinement, "quadrature nodes per 1/m");
  dper->add_option("--max-nodes", cfg.max_grid_nodes, "largest quadrature grid");
  dper->add_flag("--no-breakpoints", no_breakpoints, "skip the knot grid for p = inf");

  // disp
  auto* disp = app.add_subcommand("disp", "dispersion: largest empty box")->fallthrough();
  Source ps_src;
  ps_src.add_to(disp);
  DispersionOptions dopt;
  disp->add_flag("--approximate", dopt.approximate, "greedy lower estimate, any d");
  disp->add_option("--limit", dopt.max_points_d2, "largest n in exact mode for d = 2");

  // congruence
  auto* cong = app.add_subcommand("congruence", "interval congruence systems")->fallthrough();
  IntervalSystem sys;
  std::vector<std::string> interval_text;
  bool sweep = false;
  double C = 1.0;
  cong->add_option("--p", sys.p, "prime modulus")->required();
  cong->add_option("--a", sys.a, "generator scalar")->required();
  cong->add_option("--interval", interval_text, "x:y, once per dimension");
  cong->add_flag("--sweep", sweep, "exhaustive two-dimensional threshold sweep");
  cong->add_option("--C", C, "threshold constant");

  // verify
  auto* verify = app.add_subcommand("verify", "acceptance suite");
  verify->require_subcommand(1)->fallthrough();
  VerifyOptions vopt;
  auto* vall = verify->add_subcommand("all", "run every check")->fallthrough();
  vall->add_flag("--quick", vopt.quick, "shrink the n and m ranges");
  vall->add_option("--check", vopt.only, "run only the named checks");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return 0;
  } catch (const CLI::CallForAllHelp& e) {
    out << app.help("", CLI::AppFormatMode::All);
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    return 2;
  }

  const auto start = std::chrono::steady_clock::now();
  Output o(g, out);
  try {
    const unsigned threads = thread_count(g);
    if (*pfib) {
      const auto ps = fibonacci_pointset(fib_n);
      o.write(to_csv(ps));
      err << ps.size() << " points\n";
    } else if (*pkor) {
      const auto gen = pk.generator();
      const auto ps = korobov_pointset(gen, gen.dim());
      o.write(to_csv(ps));
      err << ps.size() << " points\n";
    } else if (*lsearch) {
      SearchOptions so;
      so.force = force;
      so.threads = threads;
      o.json(search_json(search_generator(sm, sL, sd, so)), start);
    } else if (*lexact) {
      Generator gen;
      if (ls.fib >= 0) {
        if (ls.given() != 1) throw PreconditionError("give either --fib or Korobov parameters");
        gen = Generator::fibonacci(ls.fib);
      } else {
        if (!ls.in.empty()) throw PreconditionError("exactness needs a generator, not a CSV file");
        gen = ls.generator();
      }
      o.json(exactness_json(gen, max_exactness(gen, cap > 0 ? cap : gen.m)), start);
    } else if (*dper || *dnon) {
      const bool periodic = dper->parsed();
      const auto ps = ds.load();
      cfg.threads = threads;
      cfg.breakpoints = !no_breakpoints;
      cfg.trace = !trace_file.empty();
      if (periodic) cfg.p = parse_p(p_text);
      const auto e = periodic ? periodic_discrepancy(ps, v, r, cfg) : nonperiodic_discrepancy(ps, v, r, cfg);
      if (cfg.trace) {
        std::ofstream f(trace_file);
        if (!f) throw PreconditionError("cannot write " + trace_file);
        f << trace_csv(e);
      }
      o.json(discrepancy_json(ps, cfg, e, periodic), start);
      if (e.cross_check && !e.cross_check->consistent) {
        err << "error: direct and Fourier evaluations disagree beyond the truncation certificate\n";
        return 4;
      }
    } else if (*disp) {
      const auto ps = ps_src.load();
      dopt.threads = threads;
      dopt.seed = g.seed;
      o.json(dispersion_json(ps, dispersion(ps, dopt)), start);
    } else if (*cong) {
      if (sweep) {
        if (!interval_text.empty()) throw PreconditionError("--sweep takes no --interval");
        const auto s = congruence_threshold_sweep(sys.p, sys.a);
        o.json(threshold_json(sys.p, sys.a, s, congruence_threshold(sys.p, 2, C)), start);
      } else {
        if (interval_text.empty()) throw PreconditionError("give one --interval per dimension");
        for (const auto& t : interval_text) sys.intervals.push_back(parse_interval(t));
        Json j = congruence_json(sys, solve_congruence_system(sys));
        j["threshold"] = congruence_threshold(sys.p, sys.intervals.size(), C);
        o.json(j, start);
      }
    } else if (*vall) {
      vopt.seed = g.seed;
      vopt.threads = threads;
      const auto report = run_verification(vopt);
      o.write(dump(report.to_json(g.timing)));
      err << report.summary();
      return report.all_pass() ? 0 : 1;
    }
  } catch (const PreconditionError& e) {
    err << "error: " << e.what() << '\n';
    return 2;
  } catch (const ResourceError& e) {
    err << "error: " << e.what() << '\n';
    return 3;
  } catch (const InconsistencyError& e) {
    err << "error: " << e.what() << '\n';
    return 4;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}

}  // namespace korodisc
