#pragma once

#include <complex>
#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <type_traits>
#include <variant>
#include <vector>

namespace korodisc {

/// Modulus m and integer direction vector a of a Korobov rule. Components of
/// `a` are kept reduced to [0, m).
struct Generator {
  std::int64_t m = 1;
  std::vector<std::int64_t> a;
  /// a = (1, s, s^2, ..., s^{d-1}) mod m for a scalar s.
  bool special_form = false;

  static Generator from_vector(std::int64_t m, std::vector<std::int64_t> a);
  static Generator special(std::int64_t m, std::int64_t scalar, std::size_t d);
  /// The Fibonacci rule (b_n, (1, b_{n-1})).
  static Generator fibonacci(int n);

  std::size_t dim() const { return a.size(); }
  /// Second component for special-form generators, otherwise nullopt.
  std::optional<std::int64_t> scalar() const;

  bool operator==(const Generator&) const = default;
};

struct FibonacciSource {
  int n;
  bool operator==(const FibonacciSource&) const = default;
};
struct KorobovSource {
  Generator g;
  bool operator==(const KorobovSource&) const = default;
};
struct ExternalSource {
  bool operator==(const ExternalSource&) const = default;
};
using PointSource = std::variant<FibonacciSource, KorobovSource, ExternalSource>;

/// Ordered d-dimensional points in [0,1)^d. Lattice sets additionally keep the
/// integer numerators of their coordinates over the common denominator m, so
/// that downstream exactness and emptiness tests run in integer arithmetic.
class PointSet {
 public:
  /// External point set; throws PreconditionError if a coordinate is outside [0,1).
  PointSet(std::size_t dim, std::vector<double> coords);

  /// Lattice point set from numerators in [0, denominator).
  static PointSet from_numerators(std::size_t dim, std::vector<std::int64_t> numerators,
                                  std::int64_t denominator, PointSource source);

  std::size_t dim() const { return dim_; }
  std::size_t size() const { return dim_ == 0 ? 0 : coords_.size() / dim_; }
  bool empty() const { return coords_.empty(); }

  std::span<const double> point(std::size_t i) const {
    return {coords_.data() + i * dim_, dim_};
  }
  double coord(std::size_t i, std::size_t j) const { return coords_[i * dim_ + j]; }
  std::span<const double> coords() const { return coords_; }

  bool is_lattice() const { return denominator_ > 0; }
  std::int64_t denominator() const { return denominator_; }
  std::span<const std::int64_t> numerators() const { return numerators_; }
  std::int64_t numerator(std::size_t i, std::size_t j) const { return numerators_[i * dim_ + j]; }

  const PointSource& source() const { return source_; }
  /// Generator behind a Fibonacci or Korobov set.
  std::optional<Generator> generator() const;
  /// "fibonacci(n)", "korobov(m=M,a=a1:a2:...)" or "external".
  std::string source_tag() const;

 private:
  PointSet() = default;

  std::size_t dim_ = 0;
  std::vector<double> coords_;
  std::vector<std::int64_t> numerators_;
  std::int64_t denominator_ = 0;
  PointSource source_ = ExternalSource{};
};

/// b_0 = b_1 = 1, b_n = b_{n-1} + b_{n-2}. Throws RangeError once b_n leaves
/// the signed 64-bit range (n > 91).
std::int64_t fibonacci_number(int n);

/// The b_n points (mu/b_n, {mu b_{n-1}/b_n}), mu = 1..b_n, both coordinates
/// reduced mod 1. Requires n >= 2.
PointSet fibonacci_pointset(int n);

/// y^mu = ({mu a_1/m}, ..., {mu a_d/m}), mu = 1..m, from exact residues.
PointSet korobov_pointset(const Generator& g, std::size_t d);

/// Equal-weight average of f over the points, summed in point order.
template <class F>
auto cubature(F&& f, const PointSet& ps) {
  using R = std::decay_t<std::invoke_result_t<F&, std::span<const double>>>;
  R sum{};
  for (std::size_t i = 0; i < ps.size(); ++i) sum += f(ps.point(i));
  return ps.empty() ? sum : sum / static_cast<double>(ps.size());
}

// Shared CSV format: "# dim=<d> source=<tag>", then one point per line,
// comma-separated, 17 significant digits.
void write_csv(std::ostream& out, const PointSet& ps);
std::string to_csv(const PointSet& ps);
/// Parses the shared CSV format. Lattice tags are restored to exact lattice
/// sets when every coordinate is consistent with the tag.
PointSet read_csv(std::istream& in);

}  // namespace korodisc
