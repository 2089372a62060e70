#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "qcorners/grid.hpp"
#include "qcorners/group.hpp"
#include "qcorners/parallel.hpp"

namespace qcorners {

/// Largest |G| accepted for exhaustive enumeration over G^{k+1}.
std::size_t enumeration_cap(std::size_t k);
/// Throws CapError when |G| is above enumeration_cap(k), InputError for k = 0.
void check_enumeration_cap(const Group& g, std::size_t k);

// Coordinates for the actions are 1-based, as in T_1, ..., T_k.

/// T_i^g: left-multiplies coordinate i (1-based) by g.
PointK apply_T(const Group& g, std::size_t i, ElementId h, const PointK& p);

/// T_{[j,i]}^g: left-multiplies coordinates j..i (1-based) by g. j > i is the
/// empty composition; otherwise both must lie in [1, k].
PointK apply_T_range(const Group& g, std::size_t j, std::size_t i, ElementId h, const PointK& p);

/// C(g, a): point i (0-based, i in [0, k]) is T_{[1,i]}^g a. Duplicates kept.
std::vector<PointK> corner_config(const Group& g, ElementId h, const PointK& a);

/// Change of variables x_0 = g a_1, x_j = a_j^-1 a_{j+1}, x_k = a_k^-1.
std::vector<ElementId> cov_forward(const Group& g, ElementId h, const PointK& a);

struct CornerCoordinates {
  ElementId g;
  PointK a;
};
CornerCoordinates cov_inverse(const Group& g, std::span<const ElementId> x);

/// Point i of the corner written in the new variables:
///   (x_0, x_0 x_1, ..., x_0...x_{i-1}, (x_{i+1}...x_k)^-1, ..., x_k^-1).
/// Never reads x[i].
PointK corner_point_from_cov(const Group& g, std::span<const ElementId> x, std::size_t i);

struct CorrelationSeries {
  std::vector<double> values;  ///< c_g indexed by element id
  double mean = 0.0;
  double tv = 0.0;             ///< average over g of |c_g - mean|
  std::size_t k = 0;
  std::string group_label;
};

/// Fills mean (compensated) and tv from values.
void finalize_series(CorrelationSeries& s);

/**
 * c_g = average over a in G^k of prod_{i=0}^{k} f_i(T_{[1,i]}^g a).
 *
 * Summation order is fixed: each row over the last coordinate is summed
 * directly, rows are combined with compensated summation in row-major order.
 * Per-g values are independent and may be computed on several workers.
 */
CorrelationSeries multicorrelation(const Group& g, std::span<const FunctionGk> f,
                                   unsigned workers = 1);

struct CornerStats {
  CorrelationSeries series;
  std::vector<std::uint64_t> counts;  ///< |{a : C(g,a) in A}| per g
  std::uint64_t total = 0;            ///< sum of counts
};

/// Exact corner counts by bitset intersection; c_g = counts[g] / |G|^k and
/// mean = total / |G|^{k+1}.
CornerStats corner_stats(const Group& g, const SubsetK& a, unsigned workers = 1);

/// Fraction of g with c_g > theta.
double good_fraction(const CorrelationSeries& s, double theta);

/// Edge sets of the (k+1)-partite k-uniform hypergraph: edges[i] is indexed by
/// x_(i) (the x coordinates other than x_i, in order) and contains it iff the
/// i-th corner point is in A.
std::vector<SubsetK> hypergraph_edges(const Group& g, const SubsetK& a);

/// Number of x in G^{k+1} all of whose coordinate-deleted subtuples are edges.
std::uint64_t count_simplices(const std::vector<SubsetK>& edges);

}  // namespace qcorners
