#include "qcorners/verify.hpp"

#include <chrono>
#include <cmath>
#include <functional>
#include <sstream>

#include "qcorners/box_norm.hpp"
#include "qcorners/corners.hpp"
#include "qcorners/experiments.hpp"
#include "qcorners/regularity.hpp"
#include "qcorners/rng.hpp"
#include "qcorners/spectral.hpp"

namespace qcorners {

bool VerifySummary::passed() const {
  for (const auto& s : suites)
    if (!s.passed) return false;
  return true;
}

namespace {

// Direct loop over (g, a) testing every corner point for membership.
std::uint64_t naive_corner_count(const Group& g, const SubsetK& a) {
  const std::size_t k = a.dims();
  std::uint64_t count = 0;
  for (ElementId h = 0; h < g.order(); ++h)
    for (std::size_t idx = 0; idx < a.universe(); ++idx) {
      bool inside = true;
      for (const auto& p : corner_config(g, h, unravel(idx, g.order(), k))) inside = inside && a.contains(p);
      count += inside;
    }
  return count;
}

GridFunction random_grid(std::size_t n, std::size_t k, Rng& rng) {
  GridFunction f(n, k);
  for (auto& v : f.values) v = rng.uniform(-1.0, 1.0);
  return f;
}

using Check = std::function<std::string()>;  // empty string on success

SuiteResult run(const std::string& name, const Check& check) {
  SuiteResult r{name, false, 0.0, {}};
  const auto start = std::chrono::steady_clock::now();
  try {
    r.detail = check();
    r.passed = r.detail.empty();
  } catch (const std::exception& e) {
    r.detail = std::string("exception: ") + e.what();
  }
  r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return r;
}

std::string group_axioms() {
  for (const char* d : {"cyclic:1", "cyclic:6", "cyclic:12", "sym:3", "sym:4", "alt:4", "alt:5", "sl2:3", "sl2:5",
                        "prod:(cyclic:2,cyclic:3)", "prod:(sl2:3,cyclic:2)"}) {
    const auto g = parse_group(d);
    if (!check_axioms(g).ok()) return std::string("axioms fail for ") + d;
  }
  for (const char* d : {"sl2:7", "sl2:11", "sl2:13"}) {
    const auto g = parse_group(d);
    if (!check_axioms(g, 10000, 3).ok()) return std::string("sampled axioms fail for ") + d;
  }
  return {};
}

std::string degree_sums() {
  for (const char* d : {"cyclic:7", "sym:3", "sym:4", "alt:4", "alt:5", "sl2:3", "sl2:5", "prod:(sl2:3,cyclic:2)"}) {
    const auto g = parse_group(d);
    const auto rep = character_degrees(g);
    long long s = 0;
    for (int x : rep.degrees) s += static_cast<long long>(x) * x;
    if (s != static_cast<long long>(g.order()) || rep.degrees.size() != conjugacy_classes(g).count())
      return std::string("degree multiset inconsistent for ") + d;
    if (rep.catalog_D && *rep.catalog_D != rep.D) return std::string("catalog disagrees for ") + d;
  }
  if (quasirandomness_degree(make_alternating(5)) != 3) return "D(alt:5) != 3";
  return {};
}

std::string corner_counts(int subsets) {
  Rng rng(11);
  for (const char* d : {"cyclic:5", "cyclic:6", "sym:3", "cyclic:8"}) {
    const auto g = parse_group(d);
    for (std::size_t k : {1, 2, 3}) {
      for (int t = 0; t < subsets; ++t) {
        const auto spec = parse_subset_spec("random", rng.uniform(0.2, 0.8));
        const auto a = generate_subset(g, k, spec, rng.next());
        const auto fast = corner_stats(g, a).total;
        if (fast != naive_corner_count(g, a) || fast != count_simplices(hypergraph_edges(g, a)))
          return std::string("corner count mismatch on ") + d + " k=" + std::to_string(k);
      }
    }
  }
  return {};
}

std::string box_norms(std::size_t max_n) {
  Rng rng(5);
  for (std::size_t k = 1; k <= 3; ++k)
    for (std::size_t n = 1; n <= max_n; ++n) {
      const auto f = random_grid(n, k, rng);
      const double a = box_norm(f).raw_power, b = box_norm_naive(f).raw_power;
      if (std::abs(a - b) > 1e-9) {
        std::ostringstream os;
        os << "box norm mismatch n=" << n << " k=" << k << ": " << a << " vs " << b;
        return os.str();
      }
    }
  return {};
}

std::string lift_roundtrip() {
  Rng rng(9);
  const auto g = make_symmetric(3);
  for (std::size_t k : {1, 2, 3}) {
    const auto big = random_grid(g.order(), k, rng);
    const auto back = lift(g, k, k, inverse_lift_k(g, big));
    if (back.values.values != big.values) return "lift(inverse_lift) is not the identity at k=" + std::to_string(k);
  }
  return {};
}

std::string mean_ergodic(const char* desc, int trials) {
  const auto g = parse_group(desc);
  const int D = quasirandomness_degree(g);
  const auto rep = verify_mean_ergodic(g, D, trials, 2024);
  if (rep.max_ratio > 1.0 + 1e-9) return std::string("mean-ergodic ratio exceeds 1 on ") + desc;
  return {};
}

std::string regularity_run() {
  Rng rng(21);
  GridFunction f(8, 2);
  for (auto& v : f.values) v = rng.sign();
  const auto d = weak_regularity(f, 0.25, 0, 3);
  if (box_norm(d.uniform).norm > 0.25) return "uniform part above eps";
  if (d.structured.max_abs() > 1 + 1e-12 || d.uniform.max_abs() > 2 + 1e-12) return "decomposition bounds violated";
  return {};
}

}  // namespace

VerifySummary verify_suite(VerifyLevel level) {
  const bool full = level == VerifyLevel::full;
  VerifySummary s;
  s.suites.push_back(run("group-axioms", group_axioms));
  s.suites.push_back(run("character-degree-sums", degree_sums));
  s.suites.push_back(run("corner-simplex-naive-equality", [full] { return corner_counts(full ? 5 : 2); }));
  s.suites.push_back(run("box-norm-recursive-vs-naive", [full] { return box_norms(full ? 6 : 4); }));
  s.suites.push_back(run("lift-roundtrip", lift_roundtrip));
  s.suites.push_back(run("mean-ergodic-sl2:5", [full] { return mean_ergodic("sl2:5", full ? 100 : 10); }));
  if (full) {
    s.suites.push_back(run("mean-ergodic-sl2:7", [] { return mean_ergodic("sl2:7", 100); }));
    s.suites.push_back(run("weak-regularity", regularity_run));
  }
  return s;
}

}  // namespace qcorners
