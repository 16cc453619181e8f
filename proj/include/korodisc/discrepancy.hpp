#pragma once

#include <cstddef>
#include <cstdint>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "korodisc/lattice.hpp"
#include "korodisc/point_sets.hpp"
#include "korodisc/smooth_kernels.hpp"

namespace korodisc {

/// Cubature error of the periodised kernel, average minus integral:
/// (1/m) sum_mu h~_{B'}(y^mu) - int h~_B, where B' is B with centre moved by
/// z_shift. Summed in point order.
double error_direct(const PointSet& ps, const SmoothBox& box, std::span<const double> z_shift);

/// Non-periodic integrand: int h_B - (1/m) sum_mu h_B(xi^mu), signed.
double nonperiodic_error(const PointSet& ps, const SmoothBox& box);

struct FourierError {
  double value = 0.0;
  /// Imaginary part of the truncated sum; vanishes by the k <-> -k symmetry.
  double imaginary = 0.0;
  /// Upper bound for sum_{||k||_inf > cap} prod_j min(u_j^r, |k_j|^{-r})
  /// over all of Z^d; infinite for r = 1.
  double truncation_bound = 0.0;
  /// truncation_bound < |value|.
  bool certified = false;
  /// Nonzero dual vectors with ||k||_inf <= cap.
  std::size_t terms = 0;
};

/// The same error through the dual lattice: the sum of
/// box_fourier(k) e^{-2 pi i (k, z)} over nonzero k in L(m, a) with
/// ||k||_inf <= cap, z the shifted box centre.
FourierError error_fourier(const Generator& g, const SmoothBox& box,
                           std::span<const double> z_shift, std::int64_t cap = 512);

double fourier_tail_bound(const SmoothBox& box, std::int64_t cap);

struct BlockNorms {
  /// L2 norm of the block projection of the error (Parseval).
  double l2 = 0.0;
  /// Sum of the coefficient moduli; bounds the sup norm.
  double linf_bound = 0.0;
  std::size_t count = 0;
};

BlockNorms block_projection_norms(const Generator& g, const SmoothBox& box, std::span<const int> s);

/// Value at shift z of the projection of the error onto the frequencies
/// rho(s) intersected with L(m, a).
double block_projection_eval(const Generator& g, const SmoothBox& box, std::span<const int> s,
                             std::span<const double> z);

struct SearchConfig {
  /// Midpoint shift grid (j + 0.5)/z_grid per axis, used for p = infinity.
  std::size_t z_grid = 64;
  /// Geometric samples per free scale axis on prod_j u_j = v / r^d.
  std::size_t u_grid = 16;
  /// Norm exponent in [1, inf].
  double p = std::numeric_limits<double>::infinity();
  /// L_p quadrature uses quadrature_refinement * m midpoints per axis
  /// (halved, at least 1, in d >= 3).
  std::size_t quadrature_refinement = 4;
  /// For p = infinity also evaluate on the product grid of kernel
  /// breakpoints y_j^mu + (i - r/2) u_j and point coordinates.
  bool breakpoints = true;
  /// Largest shift grid evaluated per scale candidate.
  std::size_t max_grid_nodes = std::size_t{1} << 24;
  unsigned threads = 1;
  bool trace = false;
};

struct CandidateTrace {
  std::vector<double> u;
  std::vector<double> z;
  double value = 0.0;
};

struct CrossCheck {
  double direct = 0.0;
  double fourier = 0.0;
  double residual = 0.0;
  double bound = 0.0;
  bool consistent = true;
};

struct DiscrepancyEstimate {
  SmoothBox box() const { return SmoothBox(r, argmax_z, argmax_u); }

  double estimate = 0.0;
  int r = 1;
  /// Maximising box. For p = infinity its centre is the maximising shift;
  /// for p < infinity the shift is integrated out and the centre is 0.
  /// The non-periodic search reports the interior centre itself.
  std::vector<double> argmax_u;
  std::vector<double> argmax_z;
  double v = 0.0;
  double p = 0.0;
  std::size_t u_candidates = 0;
  std::size_t nodes_per_candidate = 0;
  /// Shift grid restricted to one lattice cell along axis 0.
  bool lattice_reduced = false;
  bool breakpoints_used = false;
  /// Quadrature step per axis for p < infinity.
  double quadrature_step = 0.0;
  bool relaxed_quadrature = false;
  std::vector<std::string> warnings;
  std::vector<CandidateTrace> trace;
  std::optional<CrossCheck> cross_check;
};

/// Scale vectors with prod_j r u_j = v and every u_j in [P r^{d-1}, 1/r],
/// P = v / r^d. The first d-1 axes run over a geometric grid with u_grid
/// samples including both ends; the last axis is eliminated through the
/// volume and combinations leaving the range are dropped. Lexicographic order.
std::vector<std::vector<double>> scale_candidates(double v, int r, std::size_t d, std::size_t u_grid);

/// Grid lower estimate of the periodic r-smooth fixed-volume L_p discrepancy.
DiscrepancyEstimate periodic_discrepancy(const PointSet& ps, double v, int r, const SearchConfig& cfg);

/// Grid lower estimate of the non-periodic r-smooth fixed-volume discrepancy
/// over boxes inside the unit cube.
DiscrepancyEstimate nonperiodic_discrepancy(const PointSet& ps, double v, int r,
                                            const SearchConfig& cfg);

/// E on the product grid axes[0] x ... x axes[d-1] (row-major, last axis
/// fastest) for a box of scales u: (1/m) sum_mu prod_j h~(y_j^mu - z_j) -
/// pr(u)^r. Each node's sum runs over mu in point order.
std::vector<double> error_on_grid(const PointSet& ps, int r, std::span<const double> u,
                                  const std::vector<std::vector<double>>& axes);

}  // namespace korodisc
