#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "qcorners/group.hpp"

namespace qcorners {

struct ConjugacyClasses {
  std::vector<std::vector<ElementId>> classes;  ///< class 0 is {identity}
  std::vector<std::size_t> sizes;
  std::vector<std::uint32_t> class_of;          ///< element id -> class index

  std::size_t count() const { return classes.size(); }
};

ConjugacyClasses conjugacy_classes(const Group& g);

/// Largest class count handed to the dense eigen-solver.
inline constexpr std::size_t kMaxClassesForEigen = 1200;

struct QuasirandomnessReport {
  std::vector<int> degrees;  ///< sorted ascending, one per irreducible character
  int D = 1;
  std::string method;        ///< "character-degrees" or "catalog"
  std::optional<int> catalog_D;
  int attempts = 0;          ///< eigen-decompositions tried
};

/**
 * Degrees of the irreducible complex characters of `g`.
 *
 * The class-sum structure constants give one matrix per class; a seeded random
 * real combination of them is diagonalised, and every eigenvector, normalised
 * to 1 on the identity class, is a central character w. Each w is checked
 * against every class matrix, and the degree is recovered from
 *   d^2 = |G| / sum_j |w_j|^2 / |C_j|.
 * Rounded degrees must satisfy sum d^2 = |G|. On failure a fresh combination is
 * tried, at most `max_retries` further times, then NumericalError is thrown.
 */
QuasirandomnessReport character_degrees(const Group& g, std::uint64_t seed = 0x5eed,
                                        int max_retries = 8);

/// Known D for abelian groups (1) and sl2:p for odd p ((p-1)/2), products by
/// minimum; empty when the label is not covered.
std::optional<int> catalog_degree(const Group& g);

/// D = minimal degree of a nontrivial irreducible (the order itself for the
/// trivial group). Throws VerificationError if the catalog disagrees.
int quasirandomness_degree(const Group& g);

struct MeanErgodicReport {
  double max_ratio = 0.0;  ///< max over trials of LHS / (||u||^2 ||v||^2 / D)
  double max_lhs = 0.0;
  int trials = 0;
};

/// Mean-ergodic bound on the left-regular representation: for seeded random
/// real u, v computes
///   (1/|G|) sum_g |<u, g v> - <Pu, Pv>|^2
/// with P the projection onto constants, and reports its ratio to
/// ||u||^2 ||v||^2 / D.
MeanErgodicReport verify_mean_ergodic(const Group& g, int D, int trials, std::uint64_t seed);

/// LHS of the mean-ergodic bound for given vectors (exposed for tests).
double mean_ergodic_lhs(const Group& g, const std::vector<double>& u, const std::vector<double>& v);

}  // namespace qcorners
