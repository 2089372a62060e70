#include "qcorners/box_norm.hpp"

#include <Eigen/Core>
#include <cmath>
#include <iostream>
#include <string>

#include "qcorners/corners.hpp"
#include "qcorners/errors.hpp"

namespace qcorners {

LiftedFunction lift(const Group& g, std::size_t k, std::size_t i, const FunctionGk& f) {
  if (k == 0) throw InputError("lift needs k >= 1");
  if (i > k) throw InputError("lift index " + std::to_string(i) + " outside [0," + std::to_string(k) + "]");
  if (f.dims != k || f.side != g.order()) throw InputError("lift: function is not defined on G^k");
  const std::size_t n = g.order();

  LiftedFunction out{i, GridFunction(n, k, 0.0, f.bound)};
  std::vector<ElementId> x(k + 1);
  for (std::size_t y = 0; y < out.values.size(); ++y) {
    const PointK rest = unravel(y, n, k);
    for (std::size_t m = 0, src = 0; m <= k; ++m) x[m] = (m == i) ? g.identity() : rest[src++];
    out.values[y] = f.at(corner_point_from_cov(g, x, i));
  }
  return out;
}

namespace {

BoxNormReport finish(double raw, std::size_t k) {
  BoxNormReport r;
  r.k = k;
  if (raw < -1e-9)
    throw NumericalError("box-norm power " + std::to_string(raw) + " is negative beyond rounding noise");
  if (raw < 0) {
    std::clog << "warning: clipping box-norm power " << raw << " to 0\n";
    raw = 0;
    r.clipped = true;
  }
  r.raw_power = raw;
  r.norm = std::pow(raw, 1.0 / std::ldexp(1.0, static_cast<int>(k)));
  return r;
}

double power_recursive(const std::vector<double>& f, std::size_t n, std::size_t m) {
  const auto nd = static_cast<double>(n);
  if (m == 1) {
    CompensatedSum s;
    for (double v : f) s.add(v);
    const double mean = s.value() / nd;
    return mean * mean;
  }
  if (m == 2) {
    using RowMajor = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
    const Eigen::Map<const RowMajor> mat(f.data(), static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
    const Eigen::MatrixXd gram = mat.transpose() * mat;  // gram(t,t') = sum_x F(x,t) F(x,t')
    return gram.squaredNorm() / (nd * nd * nd * nd);
  }
  // Square the last coordinate: slices H_{t,t'} = F(., t) F(., t').
  const std::size_t rest = f.size() / n;
  std::vector<double> slice(rest);
  CompensatedSum total;
  for (std::size_t t = 0; t < n; ++t)
    for (std::size_t u = t; u < n; ++u) {
      for (std::size_t r = 0; r < rest; ++r) slice[r] = f[r * n + t] * f[r * n + u];
      const double p = power_recursive(slice, n, m - 1);
      total.add(t == u ? p : 2.0 * p);
    }
  return total.value() / (nd * nd);
}

}  // namespace

BoxNormReport box_norm(const GridFunction& f) {
  if (f.dims == 0) throw InputError("box norm needs at least one coordinate");
  if (f.values.size() != checked_power(f.side, f.dims)) throw InputError("box norm: malformed grid");
  checked_power(f.side, 2 * f.dims - 1, kBoxNormWorkCap);
  return finish(power_recursive(f.values, f.side, f.dims), f.dims);
}

BoxNormReport box_norm(const LiftedFunction& f) { return box_norm(f.values); }

BoxNormReport box_norm_naive(const GridFunction& f, std::size_t cap) {
  if (f.dims == 0) throw InputError("box norm needs at least one coordinate");
  if (f.values.size() != checked_power(f.side, f.dims)) throw InputError("box norm: malformed grid");
  const std::size_t k = f.dims;
  const std::size_t n = f.side;
  const std::size_t total = checked_power(n, 2 * k, cap);
  const std::size_t corners = std::size_t{1} << k;

  // doubled[2*j + e] is x_{j,e}
  std::vector<std::size_t> doubled(2 * k, 0);
  CompensatedSum sum;
  for (std::size_t idx = 0; idx < total; ++idx) {
    std::size_t rem = idx;
    for (std::size_t d = 2 * k; d-- > 0;) {
      doubled[d] = rem % n;
      rem /= n;
    }
    double prod = 1.0;
    for (std::size_t eps = 0; eps < corners; ++eps) {
      std::size_t lin = 0;
      for (std::size_t j = 0; j < k; ++j) lin = lin * n + doubled[2 * j + ((eps >> j) & 1U)];
      prod *= f.values[lin];
    }
    sum.add(prod);
  }
  return finish(sum.value() / static_cast<double>(total), k);
}

BoxControlReport verify_box_control(const Group& g, std::span<const FunctionGk> f, unsigned workers) {
  for (const auto& fi : f)
    if (fi.max_abs() > 1.0 + 1e-12) throw InputError("box control needs |f_i| <= 1");
  const auto series = multicorrelation(g, f, workers);
  const std::size_t k = f.size() - 1;

  BoxControlReport r;
  CompensatedSum abs_sum;
  for (double c : series.values) abs_sum.add(std::abs(c));
  r.lhs = abs_sum.value() / static_cast<double>(series.values.size());
  for (std::size_t i = 0; i <= k; ++i) r.boxnorms.push_back(box_norm(lift(g, k, i, f[i])).norm);
  r.min_boxnorm = *std::min_element(r.boxnorms.begin(), r.boxnorms.end());
  r.residual = std::max(0.0, r.lhs - r.min_boxnorm);
  return r;
}

}  // namespace qcorners
