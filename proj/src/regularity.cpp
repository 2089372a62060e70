#include "qcorners/regularity.hpp"

#include <cmath>
#include <limits>
#include <string>
#include <unordered_map>

#include "qcorners/box_norm.hpp"
#include "qcorners/errors.hpp"
#include "qcorners/rng.hpp"

namespace qcorners {

std::size_t default_max_iter(double eps) { return static_cast<std::size_t>(std::ceil(16.0 / (eps * eps))); }

std::vector<std::uint32_t> join_atoms(const std::vector<CoordinatePartition>& parts, std::size_t points) {
  std::vector<std::uint32_t> ids(points, 0);
  for (const auto& p : parts) {
    std::unordered_map<std::uint64_t, std::uint32_t> dense;
    for (std::size_t x = 0; x < points; ++x) {
      const std::uint64_t key = (std::uint64_t{ids[x]} << 32) | p.labels[x];
      const auto [it, fresh] = dense.emplace(key, static_cast<std::uint32_t>(dense.size()));
      ids[x] = it->second;
    }
  }
  return ids;
}

namespace {

// F_s = atom-wise mean of F, F_u = F - F_s; returns ||F_s||_2^2.
double condition(Decomposition& d) {
  const std::size_t points = d.function.size();
  const auto atoms = join_atoms(d.partitions, points);
  std::uint32_t count = 0;
  for (auto a : atoms) count = std::max(count, a + 1);
  std::vector<CompensatedSum> sums(count);
  std::vector<std::size_t> sizes(count, 0);
  for (std::size_t x = 0; x < points; ++x) {
    sums[atoms[x]].add(d.function[x]);
    ++sizes[atoms[x]];
  }
  CompensatedSum energy;
  for (std::size_t x = 0; x < points; ++x) {
    const double v = sums[atoms[x]].value() / static_cast<double>(sizes[atoms[x]]);
    d.structured[x] = v;
    d.uniform[x] = d.function[x] - v;
    energy.add(v * v);
  }
  return energy.value() / static_cast<double>(points);
}

struct Witness {
  double correlation = -std::numeric_limits<double>::infinity();
  std::vector<std::vector<double>> u;  // per coordinate, over the whole grid
};

Witness sample_witness(const GridFunction& fu, Rng& rng) {
  const std::size_t n = fu.side, k = fu.dims, points = fu.size();
  std::vector<std::size_t> fixed(k);
  for (auto& c : fixed) c = static_cast<std::size_t>(rng.below(n));

  Witness w;
  w.u.assign(k, std::vector<double>(points, 1.0));
  std::vector<std::size_t> base(k);
  CompensatedSum corr;
  for (std::size_t x = 0; x < points; ++x) {
    std::size_t rem = x;
    for (std::size_t m = k; m-- > 0;) {
      base[m] = rem % n;
      rem /= n;
    }
    for (std::size_t eps = 1; eps < (std::size_t{1} << k); ++eps) {
      std::size_t lin = 0;
      for (std::size_t m = 0; m < k; ++m) lin = lin * n + (((eps >> m) & 1U) ? fixed[m] : base[m]);
      w.u[static_cast<std::size_t>(std::countr_zero(eps))][x] *= fu[lin];
    }
    double prod = fu[x];
    for (std::size_t j = 0; j < k; ++j) prod *= w.u[j][x];
    corr.add(prod);
  }
  w.correlation = corr.value() / static_cast<double>(points);
  return w;
}

// Refines partition labels by 4 level sets of u scaled to [-1,1]; false if u == 0.
bool refine(CoordinatePartition& part, const std::vector<double>& u) {
  double scale = 0.0;
  for (double v : u) scale = std::max(scale, std::abs(v));
  if (scale == 0.0) return false;
  std::unordered_map<std::uint64_t, std::uint32_t> dense;
  for (std::size_t x = 0; x < u.size(); ++x) {
    const double v = u[x] / scale;
    const std::uint32_t level = v < -0.5 ? 0 : v < 0.0 ? 1 : v < 0.5 ? 2 : 3;
    const std::uint64_t key = (std::uint64_t{part.labels[x]} << 2) | level;
    const auto [it, fresh] = dense.emplace(key, static_cast<std::uint32_t>(dense.size()));
    part.labels[x] = it->second;
  }
  part.atom_count = static_cast<std::uint32_t>(dense.size());
  return true;
}

}  // namespace

Decomposition weak_regularity(const GridFunction& f, double eps, std::size_t max_iter, std::uint64_t seed) {
  if (!(eps > 0.0 && eps < 1.0)) throw InputError("eps must lie in (0,1)");
  if (f.dims == 0) throw InputError("regularity needs at least one coordinate");
  if (f.values.size() != checked_power(f.side, f.dims)) throw InputError("regularity: malformed grid");
  if (f.max_abs() > 1.0 + 1e-12) throw InputError("regularity needs |F| <= 1");
  checked_power(f.side, 2 * f.dims - 1, kBoxNormWorkCap);
  if (max_iter == 0) max_iter = default_max_iter(eps);

  const std::size_t k = f.dims;
  const std::size_t points = f.size();
  Decomposition d;
  d.function = f;
  d.function.bound = 1.0;
  d.structured = GridFunction(f.side, k, 0.0, 1.0);
  d.uniform = GridFunction(f.side, k, 0.0, 2.0);
  for (std::size_t j = 0; j < k; ++j) d.partitions.push_back({j, std::vector<std::uint32_t>(points, 0), 1});
  double energy = condition(d);
  d.energy_history.push_back(energy);

  const double threshold = std::pow(eps, std::ldexp(1.0, static_cast<int>(k))) / 2.0;
  Rng rng(seed);
  std::optional<Decomposition> best;
  while (true) {
    d.achieved_eps = box_norm(d.uniform).norm;
    if (!best || d.achieved_eps < best->achieved_eps) best = d;
    if (d.achieved_eps <= eps) return d;
    if (d.iterations >= max_iter)
      throw RegularityNotConverged("weak regularity did not reach eps=" + std::to_string(eps) + " within " +
                                       std::to_string(max_iter) + " rounds (best " +
                                       std::to_string(best->achieved_eps) + ")",
                                   *best);
    ++d.iterations;

    Witness chosen;
    for (int s = 0; s < kWitnessSamples; ++s) {
      Witness w = sample_witness(d.uniform, rng);
      if (w.correlation > chosen.correlation) chosen = std::move(w);
    }
    if (chosen.correlation < threshold) {
      ++d.rejected_rounds;
      continue;
    }
    auto saved = d.partitions;
    for (std::size_t j = 0; j < k; ++j) refine(d.partitions[j], chosen.u[j]);
    const double next = condition(d);
    if (next <= energy) {
      // No new atoms: quantisation merged everything the witness separated.
      d.partitions = std::move(saved);
      condition(d);
      ++d.rejected_rounds;
      continue;
    }
    energy = next;
    d.energy_history.push_back(energy);
  }
}

GridFunction RankExpansion::evaluate() const {
  if (terms.empty()) return {};
  const auto& first = terms.front().factors.front();
  GridFunction out(first.side, first.dims, 0.0, 1.0);
  for (const auto& t : terms)
    for (std::size_t x = 0; x < out.size(); ++x) {
      double p = t.coefficient;
      for (const auto& fac : t.factors) p *= fac[x];
      out[x] += p;
    }
  return out;
}

RankExpansion rank_expansion(const Decomposition& d) {
  const std::size_t points = d.function.size();
  const std::size_t k = d.partitions.size();
  const auto atoms = join_atoms(d.partitions, points);
  RankExpansion e;
  std::vector<bool> seen;
  for (std::size_t x = 0; x < points; ++x) {
    if (atoms[x] >= seen.size()) seen.resize(atoms[x] + 1, false);
    if (seen[atoms[x]]) continue;
    seen[atoms[x]] = true;
    RankTerm t;
    t.coefficient = d.structured[x];
    for (std::size_t j = 0; j < k; ++j) {
      const std::uint32_t label = d.partitions[j].labels[x];
      t.atom.push_back(label);
      GridFunction fac(d.function.side, d.function.dims, 0.0, 1.0);
      for (std::size_t y = 0; y < points; ++y) fac[y] = d.partitions[j].labels[y] == label ? 1.0 : 0.0;
      t.factors.push_back(std::move(fac));
    }
    e.terms.push_back(std::move(t));
  }
  return e;
}

FunctionGk inverse_lift_k(const Group& g, const GridFunction& f) {
  const std::size_t n = g.order(), k = f.dims;
  if (f.side != n || k == 0) throw InputError("inverse lift: function must live on k >= 1 coordinates of size |G|");
  FunctionGk out(n, k, 0.0, f.bound);
  std::vector<ElementId> x(k);
  for (std::size_t idx = 0; idx < out.size(); ++idx) {
    const PointK y = unravel(idx, n, k);
    x[0] = y[0];
    for (std::size_t m = 1; m < k; ++m) x[m] = g.mul(g.inv(y[m - 1]), y[m]);
    out[idx] = f.at(x);
  }
  return out;
}

InvarianceReport check_T_range_invariance(const Group& g, const FunctionGk& f, std::size_t j, std::uint64_t seed) {
  const std::size_t n = g.order(), k = f.dims;
  if (f.side != n) throw InputError("invariance check: function is not defined on G^k");
  if (k == 0 || j >= k) throw InputError("invariance check needs 0 <= j <= k-1");

  std::vector<ElementId> hs;
  InvarianceReport r;
  if (n <= 12) {
    for (ElementId h = 0; h < n; ++h) hs.push_back(h);
  } else {
    r.exhaustive = false;
    Rng rng(seed);
    for (int s = 0; s < 16; ++s) hs.push_back(static_cast<ElementId>(rng.below(n)));
  }
  for (ElementId h : hs) {
    ++r.elements_checked;
    for (std::size_t idx = 0; idx < f.size(); ++idx) {
      const PointK p = unravel(idx, n, k);
      const PointK q = apply_T_range(g, j + 1, k, h, p);
      if (std::abs(f.at(q) - f[idx]) > 1e-12) {
        r.invariant = false;
        r.violating = h;
        return r;
      }
    }
  }
  return r;
}

ReductionReport structured_reduction(const Group& g, std::span<const FunctionGk> f, const Decomposition& d,
                                     std::uint64_t seed) {
  if (f.size() < 3) throw InputError("structured reduction needs k >= 2 (k+1 >= 3 functions)");
  const std::size_t k = f.size() - 1;
  const std::size_t n = g.order();
  if (d.function.dims != k || d.function.side != n)
    throw InputError("decomposition does not live on the k lifted coordinates");
  const auto lifted = lift(g, k, k, f[k]);
  for (std::size_t x = 0; x < lifted.values.size(); ++x)
    if (std::abs(lifted.values[x] - d.function[x]) > 1e-12)
      throw InputError("decomposition is not a decomposition of N_k f_k");

  ReductionReport r;
  r.full = multicorrelation(g, f);

  const auto expansion = rank_expansion(d);
  const std::size_t slice_rows = f[0].size() / n;
  for (const auto& term : expansion.terms) {
    std::vector<FunctionGk> modified(f.begin(), f.begin() + static_cast<std::ptrdiff_t>(k));
    for (std::size_t i = 0; i < k; ++i) {
      const FunctionGk factor = inverse_lift_k(g, term.factors[i]);
      if (!check_T_range_invariance(g, factor, i, seed).invariant) r.factors_invariant = false;
      for (std::size_t x = 0; x < factor.size(); ++x) modified[i][x] *= factor[x];
    }
    for (auto& v : modified[0].values) v *= term.coefficient;

    // Average over the last coordinate of k-term multicorrelations on G^{k-1}.
    CorrelationSeries c;
    c.k = k - 1;
    c.group_label = g.label();
    c.values.assign(n, 0.0);
    std::vector<FunctionGk> slices(k, FunctionGk(n, k - 1, 0.0, 1.0));
    for (std::size_t last = 0; last < n; ++last) {
      for (std::size_t i = 0; i < k; ++i) {
        slices[i].bound = std::max(1.0, std::abs(term.coefficient));
        for (std::size_t row = 0; row < slice_rows; ++row) slices[i][row] = modified[i][row * n + last];
      }
      const auto part = multicorrelation(g, slices);
      for (std::size_t gid = 0; gid < n; ++gid) c.values[gid] += part.values[gid] / static_cast<double>(n);
    }
    finalize_series(c);
    r.terms.push_back(std::move(c));
  }

  std::vector<FunctionGk> with_uniform(f.begin(), f.end());
  with_uniform[k] = inverse_lift_k(g, d.uniform);
  r.remainder = multicorrelation(g, with_uniform);

  for (std::size_t gid = 0; gid < n; ++gid) {
    double s = r.remainder.values[gid];
    for (const auto& t : r.terms) s += t.values[gid];
    r.max_reconstruction_error = std::max(r.max_reconstruction_error, std::abs(s - r.full.values[gid]));
  }
  return r;
}

}  // namespace qcorners
