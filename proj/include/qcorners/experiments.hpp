#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "qcorners/corners.hpp"
#include "qcorners/grid.hpp"
#include "qcorners/group.hpp"

namespace qcorners {

/**
 * Subset generator description. Text forms (as accepted on the command line):
 *   random                 exactly round(delta |G|^k) points, without replacement
 *   interval               [0, m)^k with m = round(delta^(1/k) |G|)
 *   interval:lo:hi         [lo, hi)^k in element ids
 *   product:S1/S2/...      S1 x S2 x ...; each S is a comma list of ids, a
 *                          single S is used for every coordinate
 *   planted:m              m distinct corners C(g,a), g != identity, on top of
 *                          a random background of density delta (default 0)
 */
struct SubsetSpec {
  enum class Kind { random_density, interval, product, planted_corners };
  Kind kind = Kind::random_density;
  double delta = 0.0;
  bool explicit_interval = false;
  std::size_t lo = 0, hi = 0;
  std::vector<std::vector<ElementId>> sets;
  std::size_t planted = 0;

  /// Canonical text form (round-trips through parse_subset_spec).
  std::string to_string() const;
};

SubsetSpec parse_subset_spec(std::string_view text, double delta);

/// Deterministic for a given seed.
SubsetK generate_subset(const Group& g, std::size_t k, const SubsetSpec& spec, std::uint64_t seed);

/// Threshold rule for good_fraction: either a fixed theta or a multiple of the mean.
struct ThetaRule {
  bool relative_to_mean = true;
  double value = 0.5;

  double resolve(double mean) const { return relative_to_mean ? value * mean : value; }
  std::string to_string() const;
};

/// "mean/2", "mean*0.3", "mean" or a plain number.
ThetaRule parse_theta_rule(std::string_view text);

struct ExperimentReport {
  std::string group;
  std::size_t order = 0;
  int D = 0;
  std::size_t k = 0;
  std::string subset;
  std::uint64_t seed = 0;
  std::uint64_t subset_seed = 0;
  double density = 0.0;
  double mean = 0.0;
  double tv = 0.0;
  double theta = 0.0;
  double good_fraction = 0.0;
  std::uint64_t count = 0;
  double wall_seconds = 0.0;
  std::string error;  ///< non-empty when this row failed
};

struct CornerRun {
  ExperimentReport report;
  CornerStats stats;
};

/// One group: build, compute D, generate the subset with seed
/// derive_seed(seed, label), count corners.
CornerRun run_corners(const Group& g, std::size_t k, const SubsetSpec& spec, const ThetaRule& theta,
                      std::uint64_t seed, unsigned workers = 1);

/// One report per descriptor, in input order. Failures are recorded in the
/// row's error field and the scan continues.
std::vector<ExperimentReport> tv_scan(const std::vector<std::string>& family, std::size_t k,
                                      const SubsetSpec& spec, const ThetaRule& theta, std::uint64_t seed,
                                      unsigned workers = 1);

std::string series_csv(const CorrelationSeries& s);
std::string reports_csv(const std::vector<ExperimentReport>& rows, bool with_timing = false);
std::string report_json(const ExperimentReport& r, bool with_timing = false);

/// Fixed-precision text for doubles (%.17g) so outputs are byte-stable.
std::string format_double(double v);

}  // namespace qcorners
