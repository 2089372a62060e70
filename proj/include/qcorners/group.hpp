#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace qcorners {

/// Dense index of a group element, valid only relative to its Group.
using ElementId = std::uint32_t;

/// Largest group order any constructor will build.
inline constexpr std::size_t kMaxGroupOrder = 5040;

/**
 * A finite group stored as a full multiplication table over dense element ids.
 *
 * Immutable after construction. Element indexing per family:
 *  - cyclic:n   id a is the residue a mod n.
 *  - sym:m      permutations of {0..m-1} in lexicographic order of their
 *               one-line notation; (s*t)(x) = s(t(x)).
 *  - alt:m      the even permutations, same order and convention.
 *  - sl2:p      matrices [[a,b],[c,d]] with ad-bc = 1 mod p, ordered
 *               lexicographically by (a,b,c,d).
 *  - prod:(G,H) id = g * |H| + h.
 */
class Group {
 public:
  /// Builds a group from a Cayley table (row-major, table[a*n+b] = ab).
  /// Identity and inverses are recovered from the table; throws InputError if
  /// the table has no identity or some element has no two-sided inverse.
  Group(std::string label, std::size_t order, std::vector<std::uint16_t> table,
        std::vector<std::string> element_names = {});

  std::size_t order() const { return order_; }
  const std::string& label() const { return label_; }
  ElementId identity() const { return identity_; }

  ElementId mul(ElementId a, ElementId b) const { return table_[a * order_ + b]; }
  ElementId inv(ElementId a) const { return inverse_[a]; }
  ElementId conj(ElementId h, ElementId g) const { return mul(mul(h, g), inv(h)); }

  /// Row of left multiplication by g: row[x] = g x.
  std::span<const std::uint16_t> left_row(ElementId g) const {
    return {table_.data() + g * order_, order_};
  }
  std::span<const std::uint16_t> inverses() const { return inverse_; }

  /// Human-readable element name ("3", "(0 2 1)", "[[1,0],[2,1]]", ...).
  std::string element_name(ElementId a) const;

  bool is_abelian() const;

 private:
  std::string label_;
  std::size_t order_;
  std::vector<std::uint16_t> table_;
  std::vector<std::uint16_t> inverse_;
  ElementId identity_ = 0;
  std::vector<std::string> names_;
};

Group make_cyclic(std::size_t n);
Group make_symmetric(int m);
Group make_alternating(int m);
Group make_sl2(int p);
Group make_product(const Group& g, const Group& h);

/// Parses `cyclic:n`, `sym:m`, `alt:m`, `sl2:p`, `prod:(desc,desc)`.
Group parse_group(std::string_view descriptor);

/// Left-to-right product; the empty product is the identity.
ElementId mul_chain(const Group& g, std::span<const ElementId> elems);

struct AxiomReport {
  bool associative = true;
  bool identity_ok = true;
  bool inverse_ok = true;
  bool latin_square = true;
  bool exhaustive = true;      ///< false when associativity was sampled
  std::size_t triples_checked = 0;

  bool ok() const { return associative && identity_ok && inverse_ok && latin_square; }
};

/// Exhaustive associativity for order <= exhaustive_limit, otherwise
/// `samples` seeded random triples. Identity, inverse and Latin-square checks
/// are always exhaustive.
AxiomReport check_axioms(const Group& g, std::size_t samples = 10000, std::uint64_t seed = 1,
                         std::size_t exhaustive_limit = 128);

}  // namespace qcorners
