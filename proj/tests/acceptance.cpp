// Acceptance checks: one PASS/FAIL line per criterion, nonzero exit on failure.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <string>
#include <vector>

#include "oracles.hpp"
#include "qcorners/box_norm.hpp"
#include "qcorners/corners.hpp"
#include "qcorners/experiments.hpp"
#include "qcorners/parallel.hpp"
#include "qcorners/regularity.hpp"
#include "qcorners/rng.hpp"
#include "qcorners/spectral.hpp"

using namespace qcorners;

namespace {

// Frozen fixed-seed fixtures (seed 2024).
constexpr std::uint64_t kSeed = 2024;
constexpr double kTvSl2_5 = 0.0038826678240740748;
constexpr double kTvSl2_7 = 0.0013966182951355157;
constexpr double kTvSl2_13 = 0.00021512892743581931;
constexpr double kTvCyclic336Interval = 0.064150073575230351;
constexpr double kResidualSl2[3] = {0.0, 0.0, 0.0};
constexpr double kLhsSl2[3] = {0.0071828703703703698, 0.002377556925547997, 0.00036125909171133178};
constexpr double kFixtureTol = 1e-12;

struct Outcome {
  bool ok = true;
  std::string detail;
  void require(bool cond, const std::string& what) {
    if (!cond && ok) detail = what;
    ok = ok && cond;
  }
};

std::string fmt(double v) { return format_double(v); }

Outcome group_axioms() {
  Outcome o;
  std::vector<std::string> small;
  for (int n = 1; n <= 128; ++n) small.push_back("cyclic:" + std::to_string(n));
  for (int m = 1; m <= 5; ++m) {
    small.push_back("sym:" + std::to_string(m));
    small.push_back("alt:" + std::to_string(m));
  }
  for (int p : {2, 3, 5}) small.push_back("sl2:" + std::to_string(p));
  for (const char* d : {"prod:(sym:3,cyclic:4)", "prod:(sl2:3,cyclic:5)", "prod:(alt:4,sym:3)",
                        "prod:(cyclic:2,prod:(cyclic:2,sym:4))"})
    small.push_back(d);
  for (const auto& d : small) {
    const auto g = parse_group(d);
    if (g.order() > 128) continue;
    const auto r = check_axioms(g);
    o.require(r.ok() && r.exhaustive, "axioms failed for " + d);
  }
  for (int p : {7, 11, 13}) {
    const auto g = make_sl2(p);
    const auto r = check_axioms(g, 10000, kSeed);
    o.require(r.ok() && r.triples_checked >= 10000, "sampled axioms failed for sl2:" + std::to_string(p));
  }
  if (o.ok) o.detail = std::to_string(small.size()) + " small groups exhaustive, sl2:7..13 sampled";
  return o;
}

Outcome quasirandomness() {
  Outcome o;
  std::vector<std::string> all;
  for (int n : {1, 2, 7, 12, 60, 336, 1000, 5040}) all.push_back("cyclic:" + std::to_string(n));
  for (int m = 1; m <= 7; ++m) {
    all.push_back("sym:" + std::to_string(m));
    all.push_back("alt:" + std::to_string(m));
  }
  for (int p : {2, 3, 5, 7, 11, 13, 17}) all.push_back("sl2:" + std::to_string(p));
  all.push_back("prod:(alt:5,alt:5)");
  all.push_back("prod:(cyclic:3,sym:4)");
  for (const auto& d : all) {
    const auto g = parse_group(d);
    const auto r = character_degrees(g);
    long long sum = 0;
    for (int x : r.degrees) sum += static_cast<long long>(x) * x;
    o.require(sum == static_cast<long long>(g.order()), "sum of squared degrees != |G| for " + d);
    if (r.catalog_D) o.require(*r.catalog_D == r.D, "catalog mismatch for " + d);
  }
  for (int n : {5, 12, 336}) o.require(quasirandomness_degree(make_cyclic(n)) == 1, "D(cyclic) != 1");
  o.require(quasirandomness_degree(make_alternating(5)) == 3, "D(alt:5) != 3");
  o.require(quasirandomness_degree(make_sl2(5)) == 2, "D(sl2:5) != 2");
  o.require(quasirandomness_degree(make_sl2(7)) == 3, "D(sl2:7) != 3");
  if (o.ok) o.detail = std::to_string(all.size()) + " groups; D(alt:5)=3 D(sl2:5)=2 D(sl2:7)=3";
  return o;
}

Outcome mean_ergodic() {
  Outcome o;
  double worst = 0;
  for (int p : {5, 7}) {
    const auto g = make_sl2(p);
    const int d = quasirandomness_degree(g);
    const auto r = verify_mean_ergodic(g, d, 100, kSeed);
    o.require(r.trials == 100, "trial count");
    o.require(r.max_ratio <= 1.0 + 1e-9, "LHS exceeds bound for sl2:" + std::to_string(p));
    worst = std::max(worst, r.max_ratio);
  }
  o.detail = "max LHS/bound " + fmt(worst);
  return o;
}

Outcome corner_bijection() {
  Outcome o;
  std::size_t runs = 0;
  auto check = [&](std::size_t n, std::size_t k) {
    const auto g = make_cyclic(n);
    Rng rng(derive_seed(kSeed, g.label() + "/k" + std::to_string(k)));
    for (int t = 0; t < 20; ++t) {
      const double delta = 0.1 + 0.8 * rng.uniform();
      const auto a = generate_subset(g, k, parse_subset_spec("random", delta), rng.next());
      const auto fast = corner_stats(g, a).total;
      const auto naive = oracle::corner_count(g, oracle::membership(a), k);
      const auto simplices = count_simplices(hypergraph_edges(g, a));
      o.require(fast == naive && naive == simplices, "count mismatch on " + g.label());
      ++runs;
    }
  };
  for (std::size_t n = 5; n <= 12; ++n) check(n, 2);
  for (std::size_t n : {5, 6}) check(n, 3);
  if (o.ok) o.detail = std::to_string(runs) + " subsets, counts identical";
  return o;
}

Outcome box_norms() {
  Outcome o;
  double worst = 0;
  Rng rng(kSeed);
  for (std::size_t n = 1; n <= 6; ++n)
    for (std::size_t k = 1; k <= 3; ++k)
      for (int t = 0; t < 50; ++t) {
        const auto f = oracle::random_function(n, k, rng, t % 2 == 0);
        const auto a = box_norm(f), b = box_norm_naive(f);
        worst = std::max(worst, std::abs(a.norm - b.norm));
        if (k == 1) o.require(a.norm == std::abs(f.mean()), "k=1 norm is not |mean|");
      }
  o.require(worst <= 1e-9, "recursive vs naive gap " + fmt(worst));
  o.detail = "max |recursive - naive| " + fmt(worst);
  return o;
}

Outcome weak_regularity_contract() {
  Outcome o;
  Rng rng(kSeed);
  std::size_t max_iters = 0;
  for (int t = 0; t < 10; ++t) {
    const auto f = oracle::random_function(8, 2, rng, true);
    Decomposition d;
    try {
      d = weak_regularity(f, 0.25, 0, rng.next());
    } catch (const RegularityNotConverged& e) {
      o.require(false, e.what());
      continue;
    }
    max_iters = std::max(max_iters, d.iterations);
    o.require(box_norm_naive(d.uniform).norm <= 0.25 + 1e-12, "independent box norm of F_u above eps");
    for (std::size_t x = 0; x < f.size(); ++x) {
      o.require(std::abs(d.structured[x]) <= 1.0 + 1e-12, "|F_s| > 1");
      o.require(std::abs(d.uniform[x]) <= 2.0 + 1e-12, "|F_u| > 2");
      o.require(std::abs(d.structured[x] + d.uniform[x] - f[x]) <= 1e-12, "F != F_s + F_u");
    }
    for (const auto& p : d.partitions) {
      const std::size_t stride = p.j == 0 ? 8 : 1;
      for (std::size_t x = 0; x < f.size(); ++x)
        for (std::size_t v = 0; v < 8; ++v) {
          const std::size_t digit = (x / stride) % 8;
          const std::size_t y = x - digit * stride + v * stride;
          o.require(p.labels[x] == p.labels[y], "partition depends on its omitted coordinate");
        }
    }
  }
  if (o.ok) o.detail = "10 functions converged, max rounds " + std::to_string(max_iters);
  return o;
}

Outcome reduction_mechanics() {
  Outcome o;
  const auto g = make_cyclic(6);
  Rng rng(kSeed);
  std::vector<FunctionGk> f;
  for (int i = 0; i < 3; ++i) f.push_back(oracle::random_function(6, 2, rng, true));
  const auto d = weak_regularity(lift(g, 2, 2, f[2]).values, 0.25, 0, rng.next());
  const auto r = structured_reduction(g, f, d);
  o.require(r.max_reconstruction_error <= 1e-9, "reconstruction error " + fmt(r.max_reconstruction_error));
  o.require(r.factors_invariant, "an inverse-lifted factor is not T-range invariant");
  // Independent re-check of every factor.
  for (const auto& term : rank_expansion(d).terms)
    for (std::size_t i = 0; i < 2; ++i)
      o.require(check_T_range_invariance(g, inverse_lift_k(g, term.factors[i]), i).invariant,
                "factor invariance");
  o.detail = std::to_string(r.terms.size()) + " terms, reconstruction error " + fmt(r.max_reconstruction_error);
  return o;
}

Outcome tv_trend() {
  Outcome o;
  const auto spec = parse_subset_spec("random", 0.25);
  const auto theta = parse_theta_rule("mean/2");
  const unsigned workers = default_workers();
  const auto rows = tv_scan({"sl2:5", "sl2:7", "sl2:13"}, 2, spec, theta, kSeed, workers);
  for (const auto& r : rows) o.require(r.error.empty(), r.group + ": " + r.error);
  if (!o.ok) return o;
  const double fixtures[3] = {kTvSl2_5, kTvSl2_7, kTvSl2_13};
  for (int i = 0; i < 3; ++i)
    o.require(std::abs(rows[i].tv - fixtures[i]) <= kFixtureTol, "tv fixture drift for " + rows[i].group);
  for (int i = 0; i + 1 < 3; ++i) o.require(rows[i + 1].tv <= rows[i].tv + 0.02, "tv increases");
  o.require(rows[2].good_fraction >= 0.95, "good fraction for sl2:13 below 0.95");

  const auto contrast =
      run_corners(make_cyclic(336), 2, parse_subset_spec("interval", 0.25), theta, kSeed, workers).report;
  o.require(std::abs(contrast.tv - kTvCyclic336Interval) <= kFixtureTol, "contrast fixture drift");
  o.require(contrast.density == 0.25, "contrast density differs");
  o.require(contrast.tv >= 5.0 * rows[1].tv, "contrast tv below 5x sl2:7");
  o.detail = "tv " + fmt(rows[0].tv) + " " + fmt(rows[1].tv) + " " + fmt(rows[2].tv) + ", good_fraction(sl2:13) " +
             fmt(rows[2].good_fraction) + ", contrast ratio " + fmt(contrast.tv / rows[1].tv);
  return o;
}

Outcome residual_trend() {
  Outcome o;
  double prev = INFINITY;
  std::string line;
  int idx = 0;
  for (int p : {5, 7, 13}) {
    const auto g = make_sl2(p);
    Rng rng(derive_seed(kSeed, g.label()));
    std::vector<FunctionGk> f;
    for (int i = 0; i < 3; ++i) f.push_back(oracle::random_function(g.order(), 2, rng, true));
    const auto r = verify_box_control(g, f, default_workers());
    line += g.label() + " lhs=" + fmt(r.lhs) + " min_box=" + fmt(r.min_boxnorm) + " residual=" + fmt(r.residual) + "; ";
    o.require(std::abs(r.residual - kResidualSl2[idx]) <= kFixtureTol, "residual fixture drift for " + g.label());
    o.require(std::abs(r.lhs - kLhsSl2[idx]) <= 1e-9 * kLhsSl2[idx], "lhs fixture drift for " + g.label());
    o.require(r.residual <= prev + 0.02, "residual increases at " + g.label());
    prev = r.residual;
    ++idx;
  }
  o.detail = line;
  return o;
}

}  // namespace

int main() {
  struct Criterion {
    const char* name;
    std::function<Outcome()> run;
  };
  const std::vector<Criterion> criteria = {
      {"1 group axioms", group_axioms},
      {"2 quasirandomness degrees", quasirandomness},
      {"3 mean-ergodic inequality", mean_ergodic},
      {"4 corner/simplex counts", corner_bijection},
      {"5 box norm oracle", box_norms},
      {"6 weak regularity contract", weak_regularity_contract},
      {"7 structured reduction", reduction_mechanics},
      {"8 tv trend", tv_trend},
      {"9 box control residual trend", residual_trend},
  };
  int failed = 0;
  for (const auto& c : criteria) {
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o.ok = false;
      o.detail = std::string("exception: ") + e.what();
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    std::printf("%s criterion %s (%.2fs): %s\n", o.ok ? "PASS" : "FAIL", c.name, secs, o.detail.c_str());
    std::fflush(stdout);
    failed += !o.ok;
  }
  std::printf("%d/%zu criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
  return failed == 0 ? 0 : 1;
}
