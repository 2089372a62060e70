#include "qcorners/spectral.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <complex>
#include <sstream>
#include <string_view>

#include "qcorners/errors.hpp"
#include "qcorners/rng.hpp"

namespace qcorners {

ConjugacyClasses conjugacy_classes(const Group& g) {
  const std::size_t n = g.order();
  constexpr auto unassigned = static_cast<std::uint32_t>(-1);
  ConjugacyClasses cc;
  cc.class_of.assign(n, unassigned);

  auto add_orbit = [&](ElementId x) {
    const auto idx = static_cast<std::uint32_t>(cc.classes.size());
    std::vector<ElementId> orbit;
    for (ElementId h = 0; h < n; ++h) {
      const ElementId y = g.conj(h, x);
      if (cc.class_of[y] == unassigned) {
        cc.class_of[y] = idx;
        orbit.push_back(y);
      }
    }
    std::sort(orbit.begin(), orbit.end());
    cc.sizes.push_back(orbit.size());
    cc.classes.push_back(std::move(orbit));
  };

  add_orbit(g.identity());
  for (ElementId x = 0; x < n; ++x)
    if (cc.class_of[x] == unassigned) add_orbit(x);
  return cc;
}

namespace {

// Structure constants of the class algebra: K_j K_s = sum_t a_{jst} K_t, where
// a_{jst} = #{x in C_j : x^-1 z_t in C_s} for a representative z_t of C_t.
// Stored sparsely, one entry per nonzero (j, s, t).
struct ClassAlgebra {
  struct Entry {
    std::uint32_t j, s, t;
    double count;
  };
  std::size_t r = 0;
  std::vector<Entry> entries;
};

ClassAlgebra class_algebra(const Group& g, const ConjugacyClasses& cc) {
  ClassAlgebra alg;
  alg.r = cc.count();
  std::vector<double> column(alg.r);
  std::vector<std::uint32_t> touched;
  for (std::uint32_t t = 0; t < alg.r; ++t) {
    const ElementId z = cc.classes[t].front();
    for (std::uint32_t j = 0; j < alg.r; ++j) {
      touched.clear();
      for (ElementId x : cc.classes[j]) {
        const std::uint32_t s = cc.class_of[g.mul(g.inv(x), z)];
        if (column[s] == 0.0) touched.push_back(s);
        column[s] += 1.0;
      }
      for (auto s : touched) {
        alg.entries.push_back({j, s, t, column[s]});
        column[s] = 0.0;
      }
    }
  }
  return alg;
}

}  // namespace

QuasirandomnessReport character_degrees(const Group& g, std::uint64_t seed, int max_retries) {
  const auto cc = conjugacy_classes(g);
  const std::size_t r = cc.count();
  const double order = static_cast<double>(g.order());

  QuasirandomnessReport report;
  report.method = "character-degrees";
  report.catalog_D = catalog_degree(g);

  // As many irreducibles as elements: sum d^2 = |G| forces every degree to be 1.
  if (r == g.order()) {
    report.degrees.assign(r, 1);
    report.D = r > 1 ? 1 : static_cast<int>(g.order());
    return report;
  }
  if (r > kMaxClassesForEigen)
    throw CapError("character_degrees: " + std::to_string(r) + " classes exceed the eigen-decomposition cap");

  const auto alg = class_algebra(g, cc);
  Rng rng(seed);
  std::string last_failure;
  for (int attempt = 0; attempt <= max_retries; ++attempt) {
    report.attempts = attempt + 1;
    std::vector<double> coeff(r);
    for (auto& c : coeff) c = rng.uniform(-1.0, 1.0);
    Eigen::MatrixXd m = Eigen::MatrixXd::Zero(r, r);
    for (const auto& e : alg.entries) m(e.s, e.t) += coeff[e.j] * e.count;

    Eigen::EigenSolver<Eigen::MatrixXd> solver(m, true);
    if (solver.info() != Eigen::Success) {
      last_failure = "eigen-decomposition did not converge";
      continue;
    }
    const Eigen::MatrixXcd vecs = solver.eigenvectors();

    std::vector<int> degrees;
    bool ok = true;
    Eigen::MatrixXcd applied(r, r);  // column j: a_j w
    for (std::size_t c = 0; c < r && ok; ++c) {
      Eigen::VectorXcd w = vecs.col(static_cast<Eigen::Index>(c));
      if (std::abs(w(0)) < 1e-8) {
        ok = false;
        last_failure = "eigenvector vanishes on the identity class";
        break;
      }
      w /= w(0);
      // w must be a simultaneous eigenvector: a_j w = w_j w for every class j.
      applied.setZero();
      for (const auto& e : alg.entries) applied(e.s, e.j) += e.count * w(e.t);
      for (std::size_t j = 0; j < r && ok; ++j) {
        const double resid = (applied.col(static_cast<Eigen::Index>(j)) - w(j) * w).norm();
        if (resid > 1e-6 * (1.0 + static_cast<double>(cc.sizes[j])) * (1.0 + w.norm())) {
          ok = false;
          last_failure = "eigenvector is not a central character (degenerate eigenvalues)";
        }
      }
      if (!ok) break;
      double s = 0.0;
      for (std::size_t j = 0; j < r; ++j) s += std::norm(w(j)) / static_cast<double>(cc.sizes[j]);
      const double d = std::sqrt(order / s);
      const double rounded = std::round(d);
      if (std::abs(d - rounded) > 1e-4 || rounded < 1) {
        ok = false;
        std::ostringstream os;
        os << "degree " << d << " is not close to an integer";
        last_failure = os.str();
        break;
      }
      degrees.push_back(static_cast<int>(rounded));
    }
    if (!ok) continue;

    long long sum_sq = 0;
    for (int d : degrees) sum_sq += static_cast<long long>(d) * d;
    if (sum_sq != static_cast<long long>(g.order())) {
      last_failure = "sum of squared degrees " + std::to_string(sum_sq) + " != order";
      continue;
    }
    std::sort(degrees.begin(), degrees.end());
    if (degrees.front() != 1) {
      last_failure = "trivial character missing";
      continue;
    }
    report.degrees = std::move(degrees);
    report.D = report.degrees.size() > 1 ? report.degrees[1] : static_cast<int>(g.order());
    return report;
  }
  throw NumericalError("character_degrees(" + g.label() + ") failed after " +
                       std::to_string(max_retries + 1) + " attempts: " + last_failure);
}

namespace {

// 0 marks a trivial factor, which adds no nontrivial irreducibles.
std::optional<int> catalog_from_label(std::string_view label) {
  if (label == "cyclic:1" || label == "sym:1" || label == "alt:1" || label == "alt:2") return 0;
  if (label.starts_with("cyclic:")) return 1;
  if (label.starts_with("sl2:")) {
    const int p = std::stoi(std::string(label.substr(4)));
    if (p % 2 == 1) return (p - 1) / 2;
    return std::nullopt;
  }
  if (label.starts_with("prod:(") && label.ends_with(")")) {
    const auto inner = label.substr(6, label.size() - 7);
    int depth = 0;
    for (std::size_t i = 0; i < inner.size(); ++i) {
      if (inner[i] == '(') ++depth;
      if (inner[i] == ')') --depth;
      if (inner[i] == ',' && depth == 0) {
        const auto lhs = catalog_from_label(inner.substr(0, i));
        const auto rhs = catalog_from_label(inner.substr(i + 1));
        if (!lhs || !rhs) return std::nullopt;
        if (*lhs == 0 || *rhs == 0) return std::max(*lhs, *rhs);
        return std::min(*lhs, *rhs);
      }
    }
  }
  return std::nullopt;
}

}  // namespace

std::optional<int> catalog_degree(const Group& g) {
  if (g.order() == 1) return 1;
  if (auto d = catalog_from_label(g.label())) return *d == 0 ? 1 : *d;
  if (g.is_abelian()) return 1;
  return std::nullopt;
}

int quasirandomness_degree(const Group& g) {
  const auto report = character_degrees(g);
  if (report.catalog_D && *report.catalog_D != report.D)
    throw VerificationError("computed D=" + std::to_string(report.D) + " for " + g.label() +
                            " disagrees with catalog D=" + std::to_string(*report.catalog_D));
  return report.D;
}

double mean_ergodic_lhs(const Group& g, const std::vector<double>& u, const std::vector<double>& v) {
  const std::size_t n = g.order();
  if (u.size() != n || v.size() != n) throw InputError("vector length must equal group order");
  double mu = 0.0, mv = 0.0;
  for (std::size_t x = 0; x < n; ++x) {
    mu += u[x];
    mv += v[x];
  }
  mu /= static_cast<double>(n);
  mv /= static_cast<double>(n);
  // <Pu, Pv> with P the projection onto constants and the counting inner product.
  const double projected = static_cast<double>(n) * mu * mv;

  double total = 0.0;
  for (ElementId g_id = 0; g_id < n; ++g_id) {
    // (g v)(x) = v(g^-1 x)
    const auto row = g.left_row(g.inv(g_id));
    double ip = 0.0;
    for (std::size_t x = 0; x < n; ++x) ip += u[x] * v[row[x]];
    const double diff = ip - projected;
    total += diff * diff;
  }
  return total / static_cast<double>(n);
}

MeanErgodicReport verify_mean_ergodic(const Group& g, int D, int trials, std::uint64_t seed) {
  if (D < 1) throw InputError("D must be positive");
  const std::size_t n = g.order();
  MeanErgodicReport report;
  report.trials = trials;
  Rng rng(seed);
  std::vector<double> u(n), v(n);
  for (int t = 0; t < trials; ++t) {
    // A random constant offset keeps the invariant component nonzero.
    const double cu = rng.uniform(-1.0, 1.0), cv = rng.uniform(-1.0, 1.0);
    double nu = 0.0, nv = 0.0;
    for (std::size_t x = 0; x < n; ++x) {
      u[x] = cu + rng.uniform(-1.0, 1.0);
      v[x] = cv + rng.uniform(-1.0, 1.0);
      nu += u[x] * u[x];
      nv += v[x] * v[x];
    }
    const double lhs = mean_ergodic_lhs(g, u, v);
    const double bound = nu * nv / static_cast<double>(D);
    report.max_lhs = std::max(report.max_lhs, lhs);
    report.max_ratio = std::max(report.max_ratio, lhs / bound);
  }
  return report;
}

}  // namespace qcorners
