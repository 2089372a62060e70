#include <doctest.h>

#include <cmath>

#include "oracles.hpp"
#include "qcorners/box_norm.hpp"
#include "qcorners/corners.hpp"
#include "qcorners/errors.hpp"
#include "qcorners/rng.hpp"

using namespace qcorners;

TEST_CASE("box norm small cases") {
  GridFunction f(5, 1, std::vector<double>{0.2, -0.4, 1.0, 0.0, 0.7});
  CHECK(box_norm(f).norm == doctest::Approx(0.3).epsilon(1e-14));
  CHECK(box_norm(GridFunction(4, 3, -0.6)).norm == doctest::Approx(0.6).epsilon(1e-14));
  CHECK(box_norm(GridFunction(3, 2, 0.0)).norm == 0.0);

  GridFunction z(3, 1, std::vector<double>{1, -1, 0});
  CHECK(box_norm_naive(z).norm == 0.0);
  CHECK(box_norm(z).norm == 0.0);

  // 2x2 Hadamard matrix: E_{x,x'} (E_y H(x,y) H(x',y))^2 = 1/2.
  GridFunction r(2, 2, std::vector<double>{1, 1, 1, -1});
  CHECK(box_norm_naive(r).raw_power == doctest::Approx(0.5));
  CHECK(box_norm(r).raw_power == doctest::Approx(0.5));
}

TEST_CASE("recursive box norm matches the literal sum") {
  Rng rng(3);
  for (std::size_t n = 2; n <= 6; ++n)
    for (std::size_t k = 1; k <= 3; ++k) {
      if (oracle::ipow(n, 2 * k) > 2'000'000) continue;
      for (int t = 0; t < 3; ++t) {
        const auto f = oracle::random_function(n, k, rng, t == 0);
        const auto a = box_norm(f), b = box_norm_naive(f);
        CAPTURE(n);
        CAPTURE(k);
        CHECK(std::abs(a.norm - b.norm) < 1e-9);
        CHECK(std::abs(a.raw_power - b.raw_power) < 1e-12);
        CHECK(a.norm <= f.max_abs() + 1e-12);
      }
    }
  CHECK_THROWS_AS(box_norm_naive(GridFunction(11, 4), 1000), CapError);
  CHECK_THROWS_AS(box_norm(GridFunction(3, 0)), InputError);
}

TEST_CASE("box norm is bounded by the sup norm and by the 2-norm of |F|") {
  Rng rng(17);
  for (int t = 0; t < 20; ++t) {
    const auto f = oracle::random_function(5, 2, rng);
    GridFunction a = f;
    for (auto& v : a.values) v = std::abs(v);
    CHECK(box_norm(f).norm <= box_norm(a).norm + 1e-12);
    double l2 = 0;
    for (double v : f.values) l2 += v * v / f.size();
    CHECK(box_norm(f).norm <= std::sqrt(l2) + 1e-12);
  }
}

TEST_CASE("product set indicators") {
  // The box norm of 1_{S1 x S2} is sqrt(|S1| |S2|) / n.
  const std::size_t n = 6;
  GridFunction f(n, 2);
  for (std::size_t x : {0, 2, 3})
    for (std::size_t y : {1, 5}) f[x * n + y] = 1.0;
  const double want = std::sqrt(0.5 / 3.0);
  CHECK(box_norm(f).norm == doctest::Approx(want).epsilon(1e-12));
  CHECK(box_norm_naive(f).norm == doctest::Approx(want).epsilon(1e-12));
}

TEST_CASE("lifting") {
  const auto g = make_symmetric(3);
  const std::size_t n = g.order();
  Rng rng(4);
  const auto f1 = oracle::random_function(n, 1, rng);
  const auto top = lift(g, 1, 1, f1);
  const auto bottom = lift(g, 1, 0, f1);
  CHECK(top.omitted == 1);
  CHECK(bottom.omitted == 0);
  for (ElementId x = 0; x < n; ++x) {
    CHECK(top.values[x] == f1[x]);
    CHECK(bottom.values[x] == f1[g.inv(x)]);
  }

  // The lift reads f at the i-th corner point of the inverse change of variables.
  const std::size_t k = 2;
  const auto f = oracle::random_function(n, k, rng);
  for (std::size_t i = 0; i <= k; ++i) {
    const auto l = lift(g, k, i, f);
    for (std::size_t idx = 0; idx < oracle::ipow(n, k + 1); ++idx) {
      const auto x = oracle::digits(idx, n, k + 1);
      std::vector<ElementId> rest;
      for (std::size_t m = 0; m <= k; ++m)
        if (m != i) rest.push_back(x[m]);
      CHECK(l.values[oracle::index_of(rest, n)] == f.at(corner_point_from_cov(g, x, i)));
    }
  }
  CHECK(box_norm(lift(g, k, k, f)).norm == doctest::Approx(box_norm_naive(lift(g, k, k, f).values).norm));
  CHECK_THROWS_AS(lift(g, 2, 3, f), InputError);
  CHECK_THROWS_AS(lift(g, 1, 0, f), InputError);
}

TEST_CASE("box control report") {
  SUBCASE("all ones") {
    const auto g = make_sl2(3);
    const std::size_t n = g.order();
    std::vector<FunctionGk> f(3, FunctionGk(n, 2, 1.0));
    const auto r = verify_box_control(g, f);
    CHECK(r.lhs == doctest::Approx(1.0));
    REQUIRE(r.boxnorms.size() == 3);
    for (double b : r.boxnorms) CHECK(b == doctest::Approx(1.0));
    CHECK(r.residual == doctest::Approx(0.0));
  }
  SUBCASE("k = 1 brute force") {
    const auto g = make_cyclic(6);
    Rng rng(21);
    std::vector<FunctionGk> f{oracle::random_function(6, 1, rng), oracle::random_function(6, 1, rng)};
    const auto c = oracle::multicorrelation(g, f);
    double lhs = 0;
    for (double v : c) lhs += std::abs(v) / 6.0;
    const auto r = verify_box_control(g, f);
    CHECK(r.lhs == doctest::Approx(lhs).epsilon(1e-12));
    CHECK(r.boxnorms[0] == doctest::Approx(std::abs(f[0].mean())).epsilon(1e-12));
    CHECK(r.boxnorms[1] == doctest::Approx(std::abs(f[1].mean())).epsilon(1e-12));
    CHECK(r.min_boxnorm == std::min(r.boxnorms[0], r.boxnorms[1]));
    CHECK(r.residual == std::max(0.0, r.lhs - r.min_boxnorm));
  }
  SUBCASE("bound violations are rejected") {
    const auto g = make_cyclic(3);
    std::vector<FunctionGk> f(2, FunctionGk(3, 1, 2.0, 2.0));
    CHECK_THROWS_AS(verify_box_control(g, f), InputError);
  }
}
