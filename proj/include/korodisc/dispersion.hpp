#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

#include "korodisc/point_sets.hpp"

namespace korodisc {

/// Half-open box prod_j [lo_j, hi_j).
struct AxisBox {
  std::vector<double> lo;
  std::vector<double> hi;

  std::size_t dim() const { return lo.size(); }
  double volume() const;
  /// The half-open box holds a point of ps on one of its lower faces, so the
  /// volume is a supremum over slightly shrunken boxes, not attained.
  bool open_at_lo = false;
};

struct DispersionResult {
  double volume = 0.0;
  /// Exact volume numerator over denominator^d for lattice sets, 0 otherwise.
  __int128 volume_numerator = 0;
  AxisBox witness;
  bool exact = true;
  /// "sweep", "bruteforce" or "approximate".
  const char* method = "sweep";
};

struct DispersionOptions {
  /// Largest n accepted in exact mode per dimension (index d; 0 = d >= 5 disabled).
  std::size_t max_points_d2 = 50000;
  std::size_t max_points_d3 = 5000;
  std::size_t max_points_d4 = 600;
  /// Greedy lower estimate instead of the exact sweep.
  bool approximate = false;
  std::size_t approx_seeds = 4096;
  std::uint64_t seed = 1;
  unsigned threads = 1;
};

/// Largest volume of a box in [0,1)^d containing no point of ps, together
/// with the lexicographically smallest (lo, hi) attaining it. Faces lie at 0,
/// 1 or point coordinates; a point on a lower face does not block (supremum
/// semantics, flagged with open_at_lo). Exact for d <= 4, integer arithmetic
/// for lattice sets.
DispersionResult dispersion(const PointSet& ps, const DispersionOptions& opt = {});

/// Exhaustive oracle over the coordinate grid; d <= 3, n <= 400 for d <= 2 and n <= 200 for d = 3.
DispersionResult dispersion_bruteforce(const PointSet& ps);

/// The d intervals I_j = [x_j, y_j] in [1, p] of the system
/// mu a^{j-1} in I_j (mod p); residue 0 is read as p.
struct IntervalSystem {
  std::int64_t p = 0;
  std::int64_t a = 0;
  std::vector<std::pair<std::int64_t, std::int64_t>> intervals;
};

/// Smallest mu in [1, p] solving the system, if any. Requires p prime and
/// a in [1, p).
std::optional<std::int64_t> solve_congruence_system(const IntervalSystem& sys);

/// Geometric form of the same question: does K_p(a') with a' = (1, a, ..., a^{d-1})
/// meet prod_j [x_j/p, (y_j+1)/p), where the interval at y_j = p wraps to
/// [x_j/p, 1) u [0, 1/p)? Evaluated on the coordinates of ps, which must be
/// that point set.
bool congruence_box_intersects(const IntervalSystem& sys, const PointSet& ps);

/// C p^{d-1} (log2 p)^{d-1}.
double congruence_threshold(std::int64_t p, std::size_t d, double C = 1.0);

struct ThresholdSweep {
  /// Largest |I_1| |I_2| over unsolvable two-dimensional systems.
  std::int64_t max_unsolvable_product = 0;
  /// Every system with a larger product has a solution.
  std::int64_t min_guaranteed_product = 1;
  std::size_t systems_checked = 0;
};

/// Exhaustive over all placements I_1 x I_2 in [1, p]^2.
ThresholdSweep congruence_threshold_sweep(std::int64_t p, std::int64_t a);

}  // namespace korodisc
