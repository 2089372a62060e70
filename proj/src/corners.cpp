#include "qcorners/corners.hpp"

#include <bit>
#include <cmath>
#include <string>

#include "qcorners/errors.hpp"

namespace qcorners {

std::size_t enumeration_cap(std::size_t k) {
  switch (k) {
    case 0: return 0;
    case 1: return kMaxGroupOrder;
    case 2: return 2200;  // covers sl2:13 (order 2184)
    case 3: return 60;
    default: {
      // |G|^{k+1} <= 2e7
      std::size_t n = 1;
      while (true) {
        std::size_t p = 1;
        bool over = false;
        for (std::size_t i = 0; i <= k && !over; ++i) {
          p *= n + 1;
          over = p > 20'000'000;
        }
        if (over) return n;
        ++n;
      }
    }
  }
}

void check_enumeration_cap(const Group& g, std::size_t k) {
  if (k == 0) throw InputError("dimension k must be at least 1");
  if (g.order() > enumeration_cap(k))
    throw CapError("|G| = " + std::to_string(g.order()) + " exceeds the enumeration cap " +
                   std::to_string(enumeration_cap(k)) + " for k = " + std::to_string(k));
}

namespace {

void check_point(const Group& g, const PointK& p) {
  for (ElementId c : p)
    if (c >= g.order()) throw InputError("point coordinate is not an element id");
}

}  // namespace

PointK apply_T(const Group& g, std::size_t i, ElementId h, const PointK& p) {
  if (i < 1 || i > p.size())
    throw InputError("action index " + std::to_string(i) + " outside [1," + std::to_string(p.size()) + "]");
  check_point(g, p);
  PointK q = p;
  q[i - 1] = g.mul(h, q[i - 1]);
  return q;
}

PointK apply_T_range(const Group& g, std::size_t j, std::size_t i, ElementId h, const PointK& p) {
  check_point(g, p);
  if (j > i) {
    if (j < 1 || j > p.size() + 1) throw InputError("empty action range start out of range");
    return p;
  }
  if (j < 1 || i > p.size())
    throw InputError("action range [" + std::to_string(j) + "," + std::to_string(i) + "] outside [1," +
                     std::to_string(p.size()) + "]");
  PointK q = p;
  for (std::size_t m = j; m <= i; ++m) q[m - 1] = g.mul(h, q[m - 1]);
  return q;
}

std::vector<PointK> corner_config(const Group& g, ElementId h, const PointK& a) {
  check_point(g, a);
  std::vector<PointK> pts;
  pts.reserve(a.size() + 1);
  PointK cur = a;
  pts.push_back(cur);
  for (std::size_t i = 0; i < a.size(); ++i) {
    cur[i] = g.mul(h, cur[i]);
    pts.push_back(cur);
  }
  return pts;
}

std::vector<ElementId> cov_forward(const Group& g, ElementId h, const PointK& a) {
  if (a.empty()) throw InputError("corner base point must have k >= 1 coordinates");
  check_point(g, a);
  const std::size_t k = a.size();
  std::vector<ElementId> x(k + 1);
  x[0] = g.mul(h, a[0]);
  for (std::size_t j = 1; j < k; ++j) x[j] = g.mul(g.inv(a[j - 1]), a[j]);
  x[k] = g.inv(a[k - 1]);
  return x;
}

CornerCoordinates cov_inverse(const Group& g, std::span<const ElementId> x) {
  if (x.size() < 2) throw InputError("change of variables needs k+1 >= 2 coordinates");
  const std::size_t k = x.size() - 1;
  CornerCoordinates out{0, PointK(k)};
  out.a[k - 1] = g.inv(x[k]);
  for (std::size_t j = k - 1; j >= 1; --j) out.a[j - 1] = g.mul(out.a[j], g.inv(x[j]));
  out.g = g.mul(x[0], g.inv(out.a[0]));
  return out;
}

PointK corner_point_from_cov(const Group& g, std::span<const ElementId> x, std::size_t i) {
  if (x.size() < 2) throw InputError("change of variables needs k+1 >= 2 coordinates");
  const std::size_t k = x.size() - 1;
  if (i > k) throw InputError("corner point index out of [0,k]");
  PointK p(k);
  ElementId prefix = g.identity();
  for (std::size_t m = 0; m < i; ++m) {
    prefix = g.mul(prefix, x[m]);
    p[m] = prefix;
  }
  ElementId suffix = g.identity();
  for (std::size_t m = k; m > i; --m) {
    suffix = g.mul(x[m], suffix);
    p[m - 1] = g.inv(suffix);
  }
  return p;
}

void finalize_series(CorrelationSeries& s) {
  const auto n = static_cast<double>(s.values.size());
  CompensatedSum sum;
  for (double v : s.values) sum.add(v);
  s.mean = s.values.empty() ? 0.0 : sum.value() / n;
  CompensatedSum dev;
  for (double v : s.values) dev.add(std::abs(v - s.mean));
  s.tv = s.values.empty() ? 0.0 : dev.value() / n;
}

namespace {

// Row indices, per corner point i in [0, k-1], of the prefix
// (g p_1, ..., g p_i, p_{i+1}, ..., p_{k-1}); point k shares row k-1.
void corner_rows(std::span<const std::uint16_t> left, std::span<const ElementId> prefix,
                 std::size_t n, std::vector<std::size_t>& rows) {
  const std::size_t km1 = prefix.size();
  for (std::size_t i = 0; i <= km1; ++i) {
    std::size_t r = 0;
    for (std::size_t m = 0; m < km1; ++m) r = r * n + (m < i ? left[prefix[m]] : prefix[m]);
    rows[i] = r;
  }
}

bool advance(std::vector<ElementId>& odo, std::size_t n) {
  for (std::size_t m = odo.size(); m-- > 0;) {
    if (++odo[m] < n) return true;
    odo[m] = 0;
  }
  return false;
}

void check_functions(const Group& g, std::span<const FunctionGk> f) {
  if (f.size() < 2) throw InputError("need k+1 >= 2 functions");
  const std::size_t k = f.size() - 1;
  for (const auto& fi : f) {
    if (fi.dims != k)
      throw InputError("function dimension " + std::to_string(fi.dims) + " != k = " + std::to_string(k));
    if (fi.side != g.order()) throw InputError("function grid side does not match group order");
    if (fi.values.size() != checked_power(fi.side, fi.dims))
      throw InputError("function value count does not match its grid");
  }
}

}  // namespace

CorrelationSeries multicorrelation(const Group& g, std::span<const FunctionGk> f, unsigned workers) {
  check_functions(g, f);
  const std::size_t k = f.size() - 1;
  check_enumeration_cap(g, k);
  const std::size_t n = g.order();
  const std::size_t rows = checked_power(n, k - 1);
  const double denom = static_cast<double>(rows * n);

  CorrelationSeries s;
  s.k = k;
  s.group_label = g.label();
  s.values.assign(n, 0.0);

  parallel_for(n, workers, [&](std::size_t gid) {
    const auto left = g.left_row(static_cast<ElementId>(gid));
    std::vector<ElementId> prefix(k - 1, 0);
    std::vector<std::size_t> r(k);
    std::vector<double> tmp(n);
    CompensatedSum total;
    do {
      corner_rows(left, prefix, n, r);
      const double* f0 = f[0].values.data() + r[0] * n;
      for (std::size_t c = 0; c < n; ++c) tmp[c] = f0[c];
      for (std::size_t i = 1; i < k; ++i) {
        const double* fi = f[i].values.data() + r[i] * n;
        for (std::size_t c = 0; c < n; ++c) tmp[c] *= fi[c];
      }
      const double* fk = f[k].values.data() + r[k - 1] * n;
      double row_sum = 0.0;
      for (std::size_t c = 0; c < n; ++c) row_sum += tmp[c] * fk[left[c]];
      total.add(row_sum);
    } while (advance(prefix, n));
    s.values[gid] = total.value() / denom;
  });
  finalize_series(s);
  return s;
}

CornerStats corner_stats(const Group& g, const SubsetK& a, unsigned workers) {
  const std::size_t k = a.dims();
  if (a.side() != g.order()) throw InputError("subset grid side does not match group order");
  check_enumeration_cap(g, k);
  const std::size_t n = g.order();
  const std::size_t rows = a.rows();
  const std::size_t words = a.words_per_row();

  CornerStats out;
  out.counts.assign(n, 0);
  parallel_for(n, workers, [&](std::size_t gid) {
    const auto left = g.left_row(static_cast<ElementId>(gid));
    const auto left_inv = g.left_row(g.inv(static_cast<ElementId>(gid)));
    // shifted row r = {c : (r, g c) in A}
    std::vector<std::uint64_t> shifted(rows * words, 0);
    for (std::size_t row = 0; row < rows; ++row) {
      const auto src = a.row(row);
      std::uint64_t* dst = shifted.data() + row * words;
      for (std::size_t w = 0; w < words; ++w) {
        std::uint64_t bits = src[w];
        while (bits) {
          const std::size_t c = w * 64 + static_cast<std::size_t>(std::countr_zero(bits));
          bits &= bits - 1;
          const std::size_t pre = left_inv[c];
          dst[pre / 64] |= std::uint64_t{1} << (pre % 64);
        }
      }
    }
    std::vector<ElementId> prefix(k - 1, 0);
    std::vector<std::size_t> r(k);
    std::uint64_t count = 0;
    do {
      corner_rows(left, prefix, n, r);
      const std::uint64_t* last = shifted.data() + r[k - 1] * words;
      for (std::size_t w = 0; w < words; ++w) {
        std::uint64_t acc = last[w];
        for (std::size_t i = 0; i < k; ++i) acc &= a.row(r[i])[w];
        count += static_cast<std::uint64_t>(std::popcount(acc));
      }
    } while (advance(prefix, n));
    out.counts[gid] = count;
  });

  const double per_g = static_cast<double>(a.universe());
  out.series.k = k;
  out.series.group_label = g.label();
  out.series.values.resize(n);
  for (std::size_t gid = 0; gid < n; ++gid) {
    out.series.values[gid] = static_cast<double>(out.counts[gid]) / per_g;
    out.total += out.counts[gid];
  }
  out.series.mean = static_cast<double>(out.total) / (per_g * static_cast<double>(n));
  CompensatedSum dev;
  for (double v : out.series.values) dev.add(std::abs(v - out.series.mean));
  out.series.tv = dev.value() / static_cast<double>(n);
  return out;
}

double good_fraction(const CorrelationSeries& s, double theta) {
  if (theta < 0) throw InputError("threshold must be nonnegative");
  if (s.values.empty()) return 0.0;
  std::size_t good = 0;
  for (double v : s.values) good += v > theta;
  return static_cast<double>(good) / static_cast<double>(s.values.size());
}

std::vector<SubsetK> hypergraph_edges(const Group& g, const SubsetK& a) {
  const std::size_t k = a.dims();
  const std::size_t n = g.order();
  if (a.side() != n) throw InputError("subset grid side does not match group order");
  check_enumeration_cap(g, k);
  std::vector<SubsetK> edges;
  edges.reserve(k + 1);
  std::vector<ElementId> x(k + 1);
  for (std::size_t i = 0; i <= k; ++i) {
    SubsetK e(n, k);
    for (std::size_t y = 0; y < a.universe(); ++y) {
      const PointK rest = unravel(y, n, k);
      for (std::size_t m = 0, src = 0; m <= k; ++m) x[m] = (m == i) ? g.identity() : rest[src++];
      if (a.contains(corner_point_from_cov(g, x, i))) e.insert(y);
    }
    edges.push_back(std::move(e));
  }
  return edges;
}

std::uint64_t count_simplices(const std::vector<SubsetK>& edges) {
  if (edges.size() < 2) throw InputError("need k+1 >= 2 edge sets");
  const std::size_t k = edges.size() - 1;
  const std::size_t n = edges.front().side();
  for (const auto& e : edges)
    if (e.dims() != k || e.side() != n) throw InputError("edge sets must share side and dimension k");
  const std::size_t words = edges.front().words_per_row();

  // Fix (x_0..x_{k-1}); edge k is then a single bit and edges i < k are rows over x_k.
  std::uint64_t count = 0;
  std::vector<ElementId> head(k, 0);
  std::vector<std::size_t> rows(k);
  do {
    if (!edges[k].contains(head)) continue;
    for (std::size_t i = 0; i < k; ++i) {
      std::size_t r = 0;
      for (std::size_t m = 0; m < k; ++m)
        if (m != i) r = r * n + head[m];
      rows[i] = r;
    }
    for (std::size_t w = 0; w < words; ++w) {
      std::uint64_t acc = ~std::uint64_t{0};
      for (std::size_t i = 0; i < k; ++i) acc &= edges[i].row(rows[i])[w];
      count += static_cast<std::uint64_t>(std::popcount(acc));
    }
  } while (advance(head, n));
  return count;
}

}  // namespace qcorners
