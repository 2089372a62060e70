#include <doctest.h>

#include <algorithm>
#include <set>

#include "oracles.hpp"
#include "qcorners/corners.hpp"
#include "qcorners/errors.hpp"
#include "qcorners/experiments.hpp"
#include "qcorners/rng.hpp"

using namespace qcorners;

namespace {

SubsetK random_subset(const Group& g, std::size_t k, double delta, std::uint64_t seed) {
  return generate_subset(g, k, parse_subset_spec("random", delta), seed);
}

}  // namespace

TEST_CASE("actions T_i and T_[j,i]") {
  const auto z4 = make_cyclic(4);
  CHECK(apply_T(z4, 1, 1, {2, 3}) == PointK{3, 3});
  CHECK(apply_T(z4, 2, z4.identity(), {2, 3}) == PointK{2, 3});
  CHECK_THROWS_AS(apply_T(z4, 0, 1, {2, 3}), InputError);
  CHECK_THROWS_AS(apply_T(z4, 3, 1, {2, 3}), InputError);

  const auto z5 = make_cyclic(5);
  CHECK(apply_T_range(z5, 2, 3, 2, {1, 1, 1}) == PointK{1, 3, 3});
  CHECK(apply_T_range(z5, 1, 0, 2, {1, 1, 1}) == PointK{1, 1, 1});
  CHECK(apply_T_range(z5, 1, 3, 2, {1, 1, 1}) == PointK{3, 3, 3});
  CHECK_THROWS_AS(apply_T_range(z5, 1, 4, 2, {1, 1, 1}), InputError);
  CHECK_THROWS_AS(apply_T_range(z5, 0, 2, 2, {1, 1, 1}), InputError);

  // Disjoint coordinates commute.
  const auto g = make_sl2(3);
  Rng rng(8);
  for (int t = 0; t < 200; ++t) {
    PointK p(3);
    for (auto& c : p) c = static_cast<ElementId>(rng.below(g.order()));
    const auto a = static_cast<ElementId>(rng.below(g.order()));
    const auto b = static_cast<ElementId>(rng.below(g.order()));
    CHECK(apply_T(g, 1, a, apply_T(g, 2, b, p)) == apply_T(g, 2, b, apply_T(g, 1, a, p)));
  }
}

TEST_CASE("corner configurations") {
  const auto z3 = make_cyclic(3);
  CHECK(corner_config(z3, 1, {0, 0}) == std::vector<PointK>{{0, 0}, {1, 0}, {1, 1}});
  CHECK(corner_config(z3, 0, {2, 1}) == std::vector<PointK>{{2, 1}, {2, 1}, {2, 1}});
  CHECK(corner_config(z3, 2, {1}) == std::vector<PointK>{{1}, {0}});
}

TEST_CASE("change of variables") {
  const auto z4 = make_cyclic(4);
  CHECK(cov_forward(z4, 1, {1, 2}) == std::vector<ElementId>{2, 1, 2});
  CHECK(cov_forward(z4, 0, {0, 0}) == std::vector<ElementId>{0, 0, 0});

  // Exhaustive roundtrip and corner-point formula for small groups.
  for (const char* d : {"cyclic:5", "sym:3", "prod:(cyclic:2,cyclic:4)"}) {
    CAPTURE(d);
    const auto g = parse_group(d);
    const std::size_t n = g.order();
    for (std::size_t k = 1; k <= 3; ++k) {
      std::set<std::vector<ElementId>> images;
      for (std::size_t idx = 0; idx < oracle::ipow(n, k + 1); ++idx) {
        const auto all = oracle::digits(idx, n, k + 1);
        const ElementId h = all[0];
        const PointK a(all.begin() + 1, all.end());
        const auto x = cov_forward(g, h, a);
        images.insert(x);
        const auto back = cov_inverse(g, x);
        CHECK(back.g == h);
        CHECK(back.a == a);
        const auto pts = corner_config(g, h, a);
        for (std::size_t i = 0; i <= k; ++i) {
          CHECK(corner_point_from_cov(g, x, i) == pts[i]);
          // The i-th point never depends on x_i.
          auto y = x;
          y[i] = g.mul(y[i], static_cast<ElementId>((idx * 7 + i) % n));
          CHECK(corner_point_from_cov(g, y, i) == pts[i]);
        }
      }
      CHECK(images.size() == oracle::ipow(n, k + 1));
    }
  }
}

TEST_CASE("measure preservation of T_[1,i]^g") {
  const auto g = make_symmetric(3);
  const std::size_t k = 2, n = g.order();
  for (ElementId h = 0; h < n; ++h)
    for (std::size_t i = 0; i <= k; ++i) {
      std::set<std::size_t> image;
      for (std::size_t idx = 0; idx < n * n; ++idx)
        image.insert(linear_index(apply_T_range(g, 1, i, h, unravel(idx, n, k)), n));
      CHECK(image.size() == n * n);
    }
}

TEST_CASE("multicorrelation") {
  const auto g = make_symmetric(3);
  const std::size_t n = g.order();
  SUBCASE("constants") {
    std::vector<FunctionGk> f{FunctionGk(n, 2, 0.5), FunctionGk(n, 2, -1.0), FunctionGk(n, 2, 0.25)};
    const auto s = multicorrelation(g, f);
    for (double v : s.values) CHECK(v == doctest::Approx(-0.125).epsilon(1e-15));
    CHECK(s.tv == doctest::Approx(0.0).epsilon(1e-15));
  }
  SUBCASE("random functions vs direct sum") {
    Rng rng(31);
    for (std::size_t k = 1; k <= 3; ++k) {
      std::vector<FunctionGk> f;
      for (std::size_t i = 0; i <= k; ++i) f.push_back(oracle::random_function(n, k, rng));
      const auto want = oracle::multicorrelation(g, f);
      const auto got = multicorrelation(g, f, 2);
      REQUIRE(got.values.size() == n);
      for (std::size_t h = 0; h < n; ++h) CHECK(std::abs(got.values[h] - want[h]) < 1e-12);
      double tv = 0, mean = 0;
      for (double v : want) mean += v / n;
      for (double v : want) tv += std::abs(v - mean) / n;
      CHECK(std::abs(got.mean - mean) < 1e-12);
      CHECK(std::abs(got.tv - tv) < 1e-12);
    }
  }
  SUBCASE("k = 1 on Z3") {
    const auto z3 = make_cyclic(3);
    std::vector<FunctionGk> f{FunctionGk(3, 1, std::vector<double>{1, 0, 0}),
                              FunctionGk(3, 1, std::vector<double>{0, 1, 0})};
    // c_g = (1/3) sum_a f0(a) f1(g a): only a = 0, g = 1 contributes.
    const auto s = multicorrelation(z3, f);
    CHECK(s.values == std::vector<double>{0.0, 1.0 / 3.0, 0.0});
  }
  SUBCASE("worker count does not change bits") {
    Rng rng(5);
    std::vector<FunctionGk> f;
    for (int i = 0; i < 3; ++i) f.push_back(oracle::random_function(n, 2, rng));
    CHECK(multicorrelation(g, f, 1).values == multicorrelation(g, f, 3).values);
  }
  SUBCASE("bad input") {
    std::vector<FunctionGk> f{FunctionGk(n, 2), FunctionGk(n, 2)};
    CHECK_THROWS_AS(multicorrelation(g, f), InputError);
    std::vector<FunctionGk> h{FunctionGk(n, 1), FunctionGk(n + 1, 1)};
    CHECK_THROWS_AS(multicorrelation(g, h), InputError);
  }
}

TEST_CASE("corner counting") {
  SUBCASE("full and empty") {
    const auto g = make_cyclic(7);
    SubsetK full(7, 2), empty(7, 2);
    for (std::size_t i = 0; i < full.universe(); ++i) full.insert(i);
    const auto s = corner_stats(g, full);
    CHECK(s.total == 7 * 49);
    CHECK(s.series.mean == 1.0);
    CHECK(s.series.tv == 0.0);
    const auto e = corner_stats(g, empty);
    CHECK(e.total == 0);
    CHECK(e.series.mean == 0.0);
  }
  SUBCASE("random subsets vs brute force") {
    for (const char* d : {"cyclic:4", "sym:3", "alt:4", "prod:(cyclic:2,cyclic:3)"}) {
      CAPTURE(d);
      const auto g = parse_group(d);
      const std::size_t n = g.order();
      for (std::size_t k = 1; k <= 3; ++k) {
        if (oracle::ipow(n, k + 1) > 300000) continue;
        for (double delta : {0.3, 0.7}) {
          const auto a = random_subset(g, k, delta, 100 + k);
          const auto in_a = oracle::membership(a);
          const auto s = corner_stats(g, a, 2);
          CHECK(s.total == oracle::corner_count(g, in_a, k));
          // Per-g counts against the direct multicorrelation of the indicator.
          std::vector<FunctionGk> f(k + 1, a.indicator());
          const auto c = oracle::multicorrelation(g, f);
          for (std::size_t h = 0; h < n; ++h)
            CHECK(std::abs(s.series.values[h] - c[h]) < 1e-12);
          CHECK(s.series.mean ==
                doctest::Approx(static_cast<double>(s.total) / oracle::ipow(n, k + 1)).epsilon(1e-15));
        }
      }
    }
  }
  SUBCASE("identity counts every point") {
    const auto g = make_sl2(3);
    const auto a = random_subset(g, 2, 0.4, 9);
    const auto s = corner_stats(g, a);
    CHECK(s.counts[g.identity()] == a.count());
  }
  SUBCASE("bitset counts equal hypergraph simplices") {
    for (const char* d : {"cyclic:6", "sym:3", "alt:4"}) {
      const auto g = parse_group(d);
      for (std::size_t k = 1; k <= 3; ++k) {
        if (oracle::ipow(g.order(), k + 1) > 300000) continue;
        const auto a = random_subset(g, k, 0.5, 77);
        CHECK(count_simplices(hypergraph_edges(g, a)) == corner_stats(g, a).total);
      }
    }
  }
}

TEST_CASE("conjugation invariance of the correlation series") {
  // A closed under simultaneous conjugation gives c_{h g h^-1} = c_g.
  const auto g = make_symmetric(4);
  const std::size_t n = g.order(), k = 2;
  Rng rng(12);
  SubsetK a(n, k);
  // Build A as a union of orbits of simultaneous conjugation.
  std::vector<bool> seen(n * n, false);
  for (std::size_t idx = 0; idx < n * n; ++idx) {
    if (seen[idx]) continue;
    const bool take = rng.uniform() < 0.4;
    const auto p = unravel(idx, n, k);
    for (ElementId h = 0; h < n; ++h) {
      const PointK q{g.conj(h, p[0]), g.conj(h, p[1])};
      const auto j = linear_index(q, n);
      seen[j] = true;
      if (take) a.insert(j);
    }
  }
  const auto s = corner_stats(g, a);
  for (ElementId h = 0; h < n; ++h)
    for (ElementId x = 0; x < n; ++x) CHECK(s.counts[g.conj(h, x)] == s.counts[x]);
}

TEST_CASE("good fraction") {
  CorrelationSeries s;
  s.values = {0.0, 0.1, 0.2, 0.3};
  finalize_series(s);
  CHECK(s.mean == doctest::Approx(0.15));
  CHECK(s.tv == doctest::Approx(0.1));
  CHECK(good_fraction(s, 0.0) == 0.75);
  CHECK(good_fraction(s, 0.15) == 0.5);
  CHECK(good_fraction(s, 0.3) == 0.0);
  CHECK_THROWS_AS(good_fraction(s, -0.1), InputError);
}

TEST_CASE("enumeration caps") {
  CHECK(enumeration_cap(1) == 5040);
  CHECK(enumeration_cap(2) >= 2184);
  CHECK(enumeration_cap(3) == 60);
  CHECK_THROWS_AS(check_enumeration_cap(make_cyclic(61), 3), CapError);
  CHECK_NOTHROW(check_enumeration_cap(make_cyclic(60), 3));
  CHECK_THROWS_AS(check_enumeration_cap(make_cyclic(5), 0), InputError);
  SubsetK a(61, 3);
  CHECK_THROWS_AS(corner_stats(make_cyclic(61), a), CapError);
}
