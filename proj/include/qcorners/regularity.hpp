#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <vector>

#include "qcorners/corners.hpp"
#include "qcorners/grid.hpp"
#include "qcorners/group.hpp"

namespace qcorners {

/// A partition of the k-coordinate grid whose labels ignore coordinate j.
struct CoordinatePartition {
  std::size_t j = 0;
  std::vector<std::uint32_t> labels;  ///< one label per grid point
  std::uint32_t atom_count = 1;
};

struct Decomposition {
  GridFunction function;    ///< F
  GridFunction structured;  ///< F_s, the atom-wise mean of F on the join
  GridFunction uniform;     ///< F_u = F - F_s
  std::vector<CoordinatePartition> partitions;  ///< one per coordinate j
  std::size_t iterations = 0;
  std::size_t rejected_rounds = 0;
  double achieved_eps = 0.0;            ///< box_norm(F_u)
  std::vector<double> energy_history;  ///< ||F_s||_2^2 after each accepted round (entry 0: start)
};

/// The refinement budget ran out; carries the decomposition with the smallest
/// box norm of F_u seen.
class RegularityNotConverged : public std::runtime_error {
 public:
  RegularityNotConverged(const std::string& what, Decomposition best)
      : std::runtime_error(what), best_(std::move(best)) {}
  const Decomposition& best() const { return best_; }

 private:
  Decomposition best_;
};

/// Default budget ceil(16 / eps^2).
std::size_t default_max_iter(double eps);

/// Witness samples drawn per refinement round.
inline constexpr int kWitnessSamples = 32;

/**
 * Energy-increment weak regularity for |F| <= 1 on a k-coordinate grid.
 *
 * Starts from trivial partitions (F_s = mean F). While ||F_u|| > eps, draws
 * up to kWitnessSamples random fixings x^1 of the doubled coordinates. For a
 * fixing, the box-norm product over nonzero corners e splits as
 * prod_j u_j(x^0), where u_j collects the corners whose lowest set bit is j
 * and so ignores coordinate j. The fixing maximising <F_u, prod_j u_j> is
 * accepted if that correlation is at least eps^{2^k} / 2; each u_j is then
 * scaled to [-1,1], cut at -1/2, 0, 1/2, and used to refine partition j.
 *
 * Throws RegularityNotConverged after max_iter rounds (0 selects the default).
 */
Decomposition weak_regularity(const GridFunction& f, double eps, std::size_t max_iter = 0,
                              std::uint64_t seed = 1);

/// Join of the partitions: dense atom id per grid point.
std::vector<std::uint32_t> join_atoms(const std::vector<CoordinatePartition>& parts, std::size_t points);

struct RankTerm {
  double coefficient = 0.0;
  std::vector<std::uint32_t> atom;     ///< label per coordinate partition
  std::vector<GridFunction> factors;  ///< factor j: indicator of partition j's atom
};

struct RankExpansion {
  std::vector<RankTerm> terms;
  std::size_t size() const { return terms.size(); }
  /// sum_l coefficient_l prod_j factor_{j,l}
  GridFunction evaluate() const;
};

/// One term per nonempty atom of the join: F_s = sum_l c_l prod_j 1[label_j = l_j].
RankExpansion rank_expansion(const Decomposition& d);

/// Inverse of N_k: f(y_1..y_k) = F(y_1, y_1^-1 y_2, ..., y_{k-1}^-1 y_k).
FunctionGk inverse_lift_k(const Group& g, const GridFunction& f);

struct InvarianceReport {
  bool invariant = true;
  bool exhaustive = true;
  std::size_t elements_checked = 0;
  std::optional<ElementId> violating;
};

/// Whether f o T_{[j+1,k]}^h = f for every h (exhaustive when |G| <= 12,
/// otherwise 16 seeded samples). 0 <= j <= k-1.
InvarianceReport check_T_range_invariance(const Group& g, const FunctionGk& f, std::size_t j,
                                          std::uint64_t seed = 7);

struct ReductionReport {
  CorrelationSeries full;                 ///< c_g
  std::vector<CorrelationSeries> terms;   ///< c_{l,g}
  CorrelationSeries remainder;            ///< c_{u,g}
  double max_reconstruction_error = 0.0;  ///< max_g |sum_l c_{l,g} + c_{u,g} - c_g|
  bool factors_invariant = true;          ///< every inverse-lifted factor passed its check
};

/**
 * Splits c_g along a decomposition of N_k f_k. Structured terms are computed
 * as averages over the last coordinate of k-term multicorrelations on G^{k-1}
 * with f_i multiplied by the inverse-lifted factor i; the remainder uses
 * inverse_lift_k(F_u) in place of f_k. Requires k >= 2.
 */
ReductionReport structured_reduction(const Group& g, std::span<const FunctionGk> f,
                                     const Decomposition& d, std::uint64_t seed = 7);

}  // namespace qcorners
