#pragma once

#include <string>

#include "json.hpp"
#include "korodisc/discrepancy.hpp"
#include "korodisc/dispersion.hpp"
#include "korodisc/lattice.hpp"
#include "korodisc/point_sets.hpp"

namespace korodisc {

// Insertion-ordered, so dumps are byte-stable.
using Json = nlohmann::ordered_json;

inline constexpr const char* kSchemaVersion = "1";
inline constexpr const char* kVersion = "0.1.0";

/// Rational p/q as "p/q", reduced.
std::string rational_string(__int128 numerator, __int128 denominator);

Json pointset_json(const PointSet& ps);
Json generator_json(const Generator& g);
Json search_json(const SearchResult& r);
Json exactness_json(const Generator& g, const ExactnessResult& r);
Json discrepancy_json(const PointSet& ps, const SearchConfig& cfg, const DiscrepancyEstimate& e,
                      bool periodic);
/// CSV dump of the candidate trace: u_1..u_d, z_1..z_d, value.
std::string trace_csv(const DiscrepancyEstimate& e);
Json dispersion_json(const PointSet& ps, const DispersionResult& r);
Json congruence_json(const IntervalSystem& sys, const std::optional<std::int64_t>& mu);
Json threshold_json(std::int64_t p, std::int64_t a, const ThresholdSweep& s, double threshold);

/// Dump with two-space indent and a trailing newline.
std::string dump(const Json& j);

}  // namespace korodisc
