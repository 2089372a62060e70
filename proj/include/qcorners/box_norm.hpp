#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "qcorners/grid.hpp"
#include "qcorners/group.hpp"

namespace qcorners {

/// N_i f: a function of the k coordinates x_(i) = (x_0..x_{i-1}, x_{i+1}..x_k),
/// stored as a k-dimensional grid in that coordinate order.
struct LiftedFunction {
  std::size_t omitted = 0;
  GridFunction values;
};

/**
 * (N_i f)(x) = f(x_0, x_0 x_1, ..., x_0...x_{i-1}, (x_{i+1}...x_k)^-1, ..., x_k^-1),
 * the value of f at the i-th corner point after the change of variables.
 */
LiftedFunction lift(const Group& g, std::size_t k, std::size_t i, const FunctionGk& f);

struct BoxNormReport {
  double norm = 0.0;       ///< raw_power^(1/2^k)
  double raw_power = 0.0;  ///< ||F||^{2^k}
  std::size_t k = 0;
  bool clipped = false;    ///< a tiny negative power was clipped to zero
};

/// Largest side^(2k-1) accepted by box_norm.
inline constexpr std::size_t kBoxNormWorkCap = 11'000'000'000ULL;
/// Largest side^(2k) accepted by box_norm_naive.
inline constexpr std::size_t kNaiveBoxNormCap = 100'000'000ULL;

/**
 * Gowers box norm over `f.dims` coordinates, by squaring one coordinate at a
 * time from the highest index down:
 *   ||F||^{2^m} = E_{t,t'} ||F(.,t) F(.,t')||^{2^{m-1}},
 * ending in a Gram-matrix evaluation for two coordinates and |E F|^2 for one.
 * Cost O(side^(2k-1)); only one level of slices is alive at a time.
 */
BoxNormReport box_norm(const GridFunction& f);
BoxNormReport box_norm(const LiftedFunction& f);

/// Literal 2k-fold sum over all doubled coordinates (test oracle).
BoxNormReport box_norm_naive(const GridFunction& f, std::size_t cap = kNaiveBoxNormCap);

struct BoxControlReport {
  double lhs = 0.0;               ///< average over g of |c_g|
  std::vector<double> boxnorms;   ///< ||N_i f_i|| for i = 0..k
  double min_boxnorm = 0.0;
  double residual = 0.0;          ///< max(0, lhs - min_boxnorm)
};

/// Compares the average of |c_g| with min_i ||N_i f_i||. No verdict: the
/// additive constant of the bound is unknown, residuals are reported as is.
BoxControlReport verify_box_control(const Group& g, std::span<const FunctionGk> f,
                                    unsigned workers = 1);

}  // namespace qcorners
