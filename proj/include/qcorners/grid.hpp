#pragma once

#include <bit>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "qcorners/group.hpp"

namespace qcorners {

/// An ordered k-tuple of element ids.
using PointK = std::vector<ElementId>;

/// side^dims, throwing CapError when it exceeds `cap`.
std::size_t checked_power(std::size_t side, std::size_t dims, std::size_t cap = SIZE_MAX);

/// Row-major linear index (last coordinate fastest) and its inverse.
std::size_t linear_index(std::span<const ElementId> coords, std::size_t side);
PointK unravel(std::size_t index, std::size_t side, std::size_t dims);

/**
 * A real function on a `dims`-fold grid of `side` values per coordinate,
 * stored densely in row-major order. Used both for functions on G^k and for
 * functions of k of the k+1 change-of-variables coordinates.
 */
struct GridFunction {
  std::size_t side = 0;
  std::size_t dims = 0;
  std::vector<double> values;
  double bound = 1.0;  ///< declared pointwise bound |values| <= bound

  GridFunction() = default;
  GridFunction(std::size_t side, std::size_t dims, double fill = 0.0, double bound = 1.0);
  GridFunction(std::size_t side, std::size_t dims, std::vector<double> values, double bound = 1.0);

  std::size_t size() const { return values.size(); }
  double operator[](std::size_t i) const { return values[i]; }
  double& operator[](std::size_t i) { return values[i]; }
  double at(std::span<const ElementId> coords) const { return values[linear_index(coords, side)]; }

  /// Throws InputError if some value exceeds the declared bound (with slack).
  void check_bound(double slack = 1e-12) const;
  double max_abs() const;
  double mean() const;
};

/// Functions on G^k share the grid representation.
using FunctionGk = GridFunction;

/**
 * Indicator of A subset of G^k, stored as one bitset row per prefix
 * (a_1..a_{k-1}) over the last coordinate a_k.
 */
class SubsetK {
 public:
  SubsetK(std::size_t side, std::size_t dims);

  std::size_t side() const { return side_; }
  std::size_t dims() const { return dims_; }
  std::size_t rows() const { return rows_; }
  std::size_t words_per_row() const { return words_; }
  std::size_t universe() const { return rows_ * side_; }

  bool contains(std::size_t index) const {
    const std::size_t r = index / side_, c = index % side_;
    return (bits_[r * words_ + c / 64] >> (c % 64)) & 1U;
  }
  bool contains(std::span<const ElementId> coords) const { return contains(linear_index(coords, side_)); }
  void insert(std::size_t index) {
    const std::size_t r = index / side_, c = index % side_;
    bits_[r * words_ + c / 64] |= std::uint64_t{1} << (c % 64);
  }
  void insert(std::span<const ElementId> coords) { insert(linear_index(coords, side_)); }

  std::span<const std::uint64_t> row(std::size_t r) const { return {bits_.data() + r * words_, words_}; }

  std::uint64_t count() const;
  /// Exact density count() / side^dims as a rational.
  std::uint64_t density_numerator() const { return count(); }
  std::uint64_t density_denominator() const { return universe(); }
  double density() const { return static_cast<double>(count()) / static_cast<double>(universe()); }

  FunctionGk indicator() const;

 private:
  std::size_t side_, dims_, rows_, words_;
  std::vector<std::uint64_t> bits_;
};

/// Neumaier-compensated running sum.
class CompensatedSum {
 public:
  void add(double x) {
    const double t = sum_ + x;
    if (std::abs(sum_) >= std::abs(x))
      comp_ += (sum_ - t) + x;
    else
      comp_ += (x - t) + sum_;
    sum_ = t;
  }
  double value() const { return sum_ + comp_; }

 private:
  double sum_ = 0.0, comp_ = 0.0;
};

}  // namespace qcorners
