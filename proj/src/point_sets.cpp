#include "korodisc/point_sets.hpp"

#include <cmath>
#include <cstdio>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>

#include "korodisc/errors.hpp"
#include "korodisc/number_theory.hpp"

namespace korodisc {

Generator Generator::from_vector(std::int64_t m, std::vector<std::int64_t> a) {
  if (m < 1) throw PreconditionError("generator modulus must be >= 1");
  if (a.empty()) throw PreconditionError("generator vector must be non-empty");
  for (auto& c : a) c = mod_floor(c, m);
  return Generator{m, std::move(a), false};
}

Generator Generator::special(std::int64_t m, std::int64_t scalar, std::size_t d) {
  if (m < 1) throw PreconditionError("generator modulus must be >= 1");
  if (d == 0) throw PreconditionError("dimension must be >= 1");
  std::vector<std::int64_t> a(d);
  const std::int64_t s = mod_floor(scalar, m);
  a[0] = 1 % m;
  for (std::size_t j = 1; j < d; ++j) a[j] = mul_mod(a[j - 1], s, m);
  return Generator{m, std::move(a), true};
}

Generator Generator::fibonacci(int n) {
  if (n < 2) throw PreconditionError("Fibonacci rule requires n >= 2");
  const std::int64_t m = fibonacci_number(n);
  return Generator{m, {1 % m, mod_floor(fibonacci_number(n - 1), m)}, false};
}

std::optional<std::int64_t> Generator::scalar() const {
  if (!special_form) return std::nullopt;
  return a.size() > 1 ? a[1] : 0;
}

PointSet::PointSet(std::size_t dim, std::vector<double> coords) : dim_(dim), coords_(std::move(coords)) {
  if (dim_ == 0) throw PreconditionError("point set dimension must be >= 1");
  if (coords_.size() % dim_ != 0) throw PreconditionError("coordinate count is not a multiple of dim");
  for (double c : coords_) {
    if (!(c >= 0.0 && c < 1.0)) throw PreconditionError("point coordinate outside [0,1)");
  }
}

PointSet PointSet::from_numerators(std::size_t dim, std::vector<std::int64_t> numerators,
                                   std::int64_t denominator, PointSource source) {
  if (dim == 0) throw PreconditionError("point set dimension must be >= 1");
  if (denominator < 1) throw PreconditionError("denominator must be >= 1");
  if (numerators.size() % dim != 0) throw PreconditionError("numerator count is not a multiple of dim");
  PointSet ps;
  ps.dim_ = dim;
  ps.denominator_ = denominator;
  ps.coords_.resize(numerators.size());
  const double den = static_cast<double>(denominator);
  for (std::size_t i = 0; i < numerators.size(); ++i) {
    if (numerators[i] < 0 || numerators[i] >= denominator) {
      throw PreconditionError("lattice numerator outside [0, denominator)");
    }
    ps.coords_[i] = static_cast<double>(numerators[i]) / den;
  }
  ps.numerators_ = std::move(numerators);
  ps.source_ = std::move(source);
  return ps;
}

std::optional<Generator> PointSet::generator() const {
  if (const auto* f = std::get_if<FibonacciSource>(&source_)) return Generator::fibonacci(f->n);
  if (const auto* k = std::get_if<KorobovSource>(&source_)) return k->g;
  return std::nullopt;
}

std::string PointSet::source_tag() const {
  if (const auto* f = std::get_if<FibonacciSource>(&source_)) {
    return "fibonacci(" + std::to_string(f->n) + ")";
  }
  if (const auto* k = std::get_if<KorobovSource>(&source_)) {
    std::string tag = "korobov(m=" + std::to_string(k->g.m) + ",a=";
    for (std::size_t j = 0; j < k->g.a.size(); ++j) {
      if (j) tag += ':';
      tag += std::to_string(k->g.a[j]);
    }
    return tag + ")";
  }
  return "external";
}

std::int64_t fibonacci_number(int n) {
  if (n < 0) throw PreconditionError("Fibonacci index must be >= 0");
  std::int64_t prev = 1, cur = 1;
  for (int i = 2; i <= n; ++i) {
    if (cur > std::numeric_limits<std::int64_t>::max() - prev) {
      throw RangeError("Fibonacci number b_" + std::to_string(n) + " exceeds 64-bit range");
    }
    const std::int64_t next = cur + prev;
    prev = cur;
    cur = next;
  }
  return cur;
}

PointSet fibonacci_pointset(int n) {
  if (n < 2) throw PreconditionError("Fibonacci point set requires n >= 2");
  const std::int64_t m = fibonacci_number(n);
  const std::int64_t b = fibonacci_number(n - 1);
  std::vector<std::int64_t> nums(static_cast<std::size_t>(2 * m));
  for (std::int64_t mu = 1; mu <= m; ++mu) {
    nums[2 * (mu - 1)] = mu % m;
    nums[2 * (mu - 1) + 1] = mul_mod(mu, b, m);
  }
  return PointSet::from_numerators(2, std::move(nums), m, FibonacciSource{n});
}

PointSet korobov_pointset(const Generator& g, std::size_t d) {
  if (g.a.size() != d) {
    throw PreconditionError("generator length " + std::to_string(g.a.size()) +
                            " does not match dimension " + std::to_string(d));
  }
  if (g.m < 1) throw PreconditionError("generator modulus must be >= 1");
  const std::int64_t m = g.m;
  std::vector<std::int64_t> nums(static_cast<std::size_t>(m) * d);
  for (std::int64_t mu = 1; mu <= m; ++mu) {
    for (std::size_t j = 0; j < d; ++j) {
      nums[static_cast<std::size_t>(mu - 1) * d + j] = mul_mod(mu, g.a[j], m);
    }
  }
  return PointSet::from_numerators(d, std::move(nums), m, KorobovSource{g});
}

void write_csv(std::ostream& out, const PointSet& ps) {
  out << "# dim=" << ps.dim() << " source=" << ps.source_tag() << '\n';
  char buf[40];
  for (std::size_t i = 0; i < ps.size(); ++i) {
    for (std::size_t j = 0; j < ps.dim(); ++j) {
      std::snprintf(buf, sizeof buf, "%.17g", ps.coord(i, j));
      if (j) out << ',';
      out << buf;
    }
    out << '\n';
  }
}

std::string to_csv(const PointSet& ps) {
  std::ostringstream os;
  write_csv(os, ps);
  return os.str();
}

namespace {

std::optional<PointSet> lattice_from_tag(const std::string& tag, std::size_t dim) {
  int n = 0;
  if (std::sscanf(tag.c_str(), "fibonacci(%d)", &n) == 1 && dim == 2) {
    if (n < 2 || n > 91) return std::nullopt;
    return fibonacci_pointset(n);
  }
  const std::string prefix = "korobov(m=";
  if (tag.rfind(prefix, 0) == 0 && tag.back() == ')') {
    const auto comma = tag.find(",a=");
    if (comma == std::string::npos) return std::nullopt;
    try {
      const std::int64_t m = std::stoll(tag.substr(prefix.size(), comma - prefix.size()));
      std::vector<std::int64_t> a;
      std::stringstream ss(tag.substr(comma + 3, tag.size() - comma - 4));
      for (std::string part; std::getline(ss, part, ':');) a.push_back(std::stoll(part));
      if (a.size() != dim || m < 1) return std::nullopt;
      return korobov_pointset(Generator::from_vector(m, std::move(a)), dim);
    } catch (const std::exception&) {
      return std::nullopt;
    }
  }
  return std::nullopt;
}

}  // namespace

PointSet read_csv(std::istream& in) {
  std::string line;
  std::size_t dim = 0;
  std::string tag = "external";
  std::vector<double> coords;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (line[0] == '#') {
      const auto dpos = line.find("dim=");
      if (dpos != std::string::npos) dim = std::stoul(line.substr(dpos + 4));
      const auto spos = line.find("source=");
      if (spos != std::string::npos) {
        tag = line.substr(spos + 7);
        const auto end = tag.find_first_of(" \t");
        if (end != std::string::npos) tag.resize(end);
      }
      continue;
    }
    std::stringstream ss(line);
    std::size_t fields = 0;
    for (std::string field; std::getline(ss, field, ',');) {
      char* end = nullptr;
      const double v = std::strtod(field.c_str(), &end);
      if (end == field.c_str()) {
        throw PreconditionError("CSV line " + std::to_string(line_no) + ": not a number");
      }
      coords.push_back(v);
      ++fields;
    }
    if (dim == 0) dim = fields;
    if (fields != dim) {
      throw PreconditionError("CSV line " + std::to_string(line_no) + ": expected " +
                              std::to_string(dim) + " fields");
    }
  }
  if (dim == 0) throw PreconditionError("CSV input has no header and no points");
  if (auto lattice = lattice_from_tag(tag, dim)) {
    bool consistent = lattice->coords().size() == coords.size();
    for (std::size_t i = 0; consistent && i < coords.size(); ++i) {
      consistent = std::abs(lattice->coords()[i] - coords[i]) <= 1e-15;
    }
    if (consistent) return std::move(*lattice);
  }
  return PointSet(dim, std::move(coords));
}

}  // namespace korodisc
