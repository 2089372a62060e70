#include "qcorners/grid.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "qcorners/errors.hpp"

namespace qcorners {

std::size_t checked_power(std::size_t side, std::size_t dims, std::size_t cap) {
  std::size_t r = 1;
  for (std::size_t i = 0; i < dims; ++i) {
    if (side != 0 && r > cap / side)
      throw CapError(std::to_string(side) + "^" + std::to_string(dims) + " exceeds cap " +
                     std::to_string(cap));
    r *= side;
  }
  if (r > cap) throw CapError(std::to_string(side) + "^" + std::to_string(dims) + " exceeds cap");
  return r;
}

std::size_t linear_index(std::span<const ElementId> coords, std::size_t side) {
  std::size_t idx = 0;
  for (ElementId c : coords) idx = idx * side + c;
  return idx;
}

PointK unravel(std::size_t index, std::size_t side, std::size_t dims) {
  PointK p(dims);
  for (std::size_t d = dims; d-- > 0;) {
    p[d] = static_cast<ElementId>(index % side);
    index /= side;
  }
  return p;
}

GridFunction::GridFunction(std::size_t side_, std::size_t dims_, double fill, double bound_)
    : side(side_), dims(dims_), values(checked_power(side_, dims_), fill), bound(bound_) {}

GridFunction::GridFunction(std::size_t side_, std::size_t dims_, std::vector<double> values_,
                           double bound_)
    : side(side_), dims(dims_), values(std::move(values_)), bound(bound_) {
  if (values.size() != checked_power(side, dims))
    throw InputError("grid function has " + std::to_string(values.size()) + " values, expected " +
                     std::to_string(checked_power(side, dims)));
}

void GridFunction::check_bound(double slack) const {
  if (max_abs() > bound + slack)
    throw InputError("function exceeds its declared bound " + std::to_string(bound));
}

double GridFunction::max_abs() const {
  double m = 0.0;
  for (double v : values) m = std::max(m, std::abs(v));
  return m;
}

double GridFunction::mean() const {
  CompensatedSum s;
  for (double v : values) s.add(v);
  return values.empty() ? 0.0 : s.value() / static_cast<double>(values.size());
}

SubsetK::SubsetK(std::size_t side, std::size_t dims)
    : side_(side), dims_(dims), rows_(dims == 0 ? 1 : checked_power(side, dims - 1)),
      words_((side + 63) / 64), bits_(rows_ * words_, 0) {
  if (dims == 0) throw InputError("subset dimension must be at least 1");
  if (side == 0) throw InputError("subset side must be positive");
}

std::uint64_t SubsetK::count() const {
  std::uint64_t c = 0;
  for (auto w : bits_) c += static_cast<std::uint64_t>(std::popcount(w));
  return c;
}

FunctionGk SubsetK::indicator() const {
  FunctionGk f(side_, dims_, 0.0, 1.0);
  for (std::size_t i = 0; i < universe(); ++i)
    if (contains(i)) f.values[i] = 1.0;
  return f;
}

}  // namespace qcorners
