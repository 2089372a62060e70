#include "qcorners/group.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <numeric>
#include <sstream>

#include "qcorners/errors.hpp"
#include "qcorners/rng.hpp"

namespace qcorners {

Group::Group(std::string label, std::size_t order, std::vector<std::uint16_t> table,
             std::vector<std::string> element_names)
    : label_(std::move(label)), order_(order), table_(std::move(table)),
      names_(std::move(element_names)) {
  if (order_ == 0) throw InputError("group order must be positive");
  if (order_ > kMaxGroupOrder)
    throw CapError("group order " + std::to_string(order_) + " exceeds cap " +
                   std::to_string(kMaxGroupOrder));
  if (table_.size() != order_ * order_) throw InputError("multiplication table has wrong size");
  if (!names_.empty() && names_.size() != order_) throw InputError("element name count mismatch");

  bool found = false;
  for (ElementId e = 0; e < order_ && !found; ++e) {
    bool ok = true;
    for (ElementId a = 0; a < order_ && ok; ++a) ok = mul(e, a) == a && mul(a, e) == a;
    if (ok) {
      identity_ = e;
      found = true;
    }
  }
  if (!found) throw InputError("multiplication table has no identity");

  inverse_.assign(order_, 0);
  for (ElementId a = 0; a < order_; ++a) {
    const auto row = left_row(a);
    const auto it = std::find(row.begin(), row.end(), identity_);
    if (it == row.end()) throw InputError("element without inverse");
    const auto b = static_cast<ElementId>(it - row.begin());
    if (mul(b, a) != identity_) throw InputError("inverse is not two-sided");
    inverse_[a] = static_cast<std::uint16_t>(b);
  }
}

std::string Group::element_name(ElementId a) const {
  if (a >= order_) throw InputError("element id out of range");
  return names_.empty() ? std::to_string(a) : names_[a];
}

bool Group::is_abelian() const {
  for (ElementId a = 0; a < order_; ++a)
    for (ElementId b = a + 1; b < order_; ++b)
      if (mul(a, b) != mul(b, a)) return false;
  return true;
}

Group make_cyclic(std::size_t n) {
  if (n == 0) throw InputError("cyclic group needs n >= 1");
  if (n > kMaxGroupOrder) throw CapError("cyclic:" + std::to_string(n) + " exceeds order cap");
  std::vector<std::uint16_t> table(n * n);
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = 0; b < n; ++b) table[a * n + b] = static_cast<std::uint16_t>((a + b) % n);
  return Group("cyclic:" + std::to_string(n), n, std::move(table));
}

namespace {

using Perm = std::vector<int>;

std::string perm_name(const Perm& p) {
  std::string s = "[";
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (i) s += ' ';
    s += std::to_string(p[i]);
  }
  return s + "]";
}

bool is_even(const Perm& p) {
  int inversions = 0;
  for (std::size_t i = 0; i < p.size(); ++i)
    for (std::size_t j = i + 1; j < p.size(); ++j) inversions += p[i] > p[j];
  return inversions % 2 == 0;
}

Group permutation_group(int m, bool even_only) {
  if (m < 1 || m > 7) throw InputError("permutation degree must be in [1,7]");
  std::vector<Perm> elems;
  Perm p(m);
  std::iota(p.begin(), p.end(), 0);
  do {
    if (!even_only || is_even(p)) elems.push_back(p);
  } while (std::next_permutation(p.begin(), p.end()));

  // Lexicographic rank of a permutation of {0..m-1} (Lehmer code) -> element id.
  auto rank = [m](const Perm& q) {
    std::size_t r = 0;
    for (int i = 0; i < m; ++i) {
      int smaller = 0;
      for (int j = i + 1; j < m; ++j) smaller += q[j] < q[i];
      r = r * static_cast<std::size_t>(m - i) + static_cast<std::size_t>(smaller);
    }
    return r;
  };
  std::size_t factorial = 1;
  for (int i = 2; i <= m; ++i) factorial *= static_cast<std::size_t>(i);
  std::vector<std::uint16_t> index(factorial, 0);
  for (std::size_t i = 0; i < elems.size(); ++i) index[rank(elems[i])] = static_cast<std::uint16_t>(i);

  const std::size_t n = elems.size();
  std::vector<std::uint16_t> table(n * n);
  Perm prod(m);
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = 0; b < n; ++b) {
      for (int x = 0; x < m; ++x) prod[x] = elems[a][elems[b][x]];
      table[a * n + b] = index[rank(prod)];
    }
  std::vector<std::string> names;
  names.reserve(n);
  for (const auto& e : elems) names.push_back(perm_name(e));
  return Group((even_only ? "alt:" : "sym:") + std::to_string(m), n, std::move(table), std::move(names));
}

bool is_prime(int p) {
  if (p < 2) return false;
  for (int d = 2; d * d <= p; ++d)
    if (p % d == 0) return false;
  return true;
}

}  // namespace

Group make_symmetric(int m) { return permutation_group(m, false); }
Group make_alternating(int m) { return permutation_group(m, true); }

Group make_sl2(int p) {
  if (!is_prime(p)) throw InputError("sl2:" + std::to_string(p) + ": p must be prime");
  if (p > 17) throw CapError("sl2:" + std::to_string(p) + " exceeds order cap (p <= 17)");

  using Mat = std::array<int, 4>;  // a b c d
  std::vector<Mat> elems;
  for (int a = 0; a < p; ++a)
    for (int b = 0; b < p; ++b)
      for (int c = 0; c < p; ++c)
        for (int d = 0; d < p; ++d)
          if (((a * d - b * c) % p + p) % p == 1) elems.push_back({a, b, c, d});

  const std::size_t n = elems.size();
  auto encode = [p](const Mat& m) { return ((m[0] * p + m[1]) * p + m[2]) * p + m[3]; };
  std::vector<int> index(static_cast<std::size_t>(p) * p * p * p, -1);
  for (std::size_t i = 0; i < n; ++i) index[encode(elems[i])] = static_cast<int>(i);

  std::vector<std::uint16_t> table(n * n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      const Mat& x = elems[i];
      const Mat& y = elems[j];
      const Mat z = {(x[0] * y[0] + x[1] * y[2]) % p, (x[0] * y[1] + x[1] * y[3]) % p,
                     (x[2] * y[0] + x[3] * y[2]) % p, (x[2] * y[1] + x[3] * y[3]) % p};
      table[i * n + j] = static_cast<std::uint16_t>(index[encode(z)]);
    }
  std::vector<std::string> names;
  names.reserve(n);
  for (const auto& m : elems) {
    std::ostringstream os;
    os << "[[" << m[0] << ',' << m[1] << "],[" << m[2] << ',' << m[3] << "]]";
    names.push_back(os.str());
  }
  return Group("sl2:" + std::to_string(p), n, std::move(table), std::move(names));
}

Group make_product(const Group& g, const Group& h) {
  const std::size_t ng = g.order();
  const std::size_t nh = h.order();
  if (ng * nh > kMaxGroupOrder)
    throw CapError("product order " + std::to_string(ng * nh) + " exceeds cap " +
                   std::to_string(kMaxGroupOrder));
  const std::size_t n = ng * nh;
  std::vector<std::uint16_t> table(n * n);
  std::vector<std::string> names(n);
  for (std::size_t a = 0; a < n; ++a) {
    const auto ga = static_cast<ElementId>(a / nh), ha = static_cast<ElementId>(a % nh);
    names[a] = "(" + g.element_name(ga) + "," + h.element_name(ha) + ")";
    for (std::size_t b = 0; b < n; ++b) {
      const auto gb = static_cast<ElementId>(b / nh), hb = static_cast<ElementId>(b % nh);
      table[a * n + b] = static_cast<std::uint16_t>(g.mul(ga, gb) * nh + h.mul(ha, hb));
    }
  }
  return Group("prod:(" + g.label() + "," + h.label() + ")", n, std::move(table), std::move(names));
}

namespace {

int parse_int(std::string_view text, std::string_view descriptor) {
  int value = 0;
  const auto* end = text.data() + text.size();
  auto [ptr, ec] = std::from_chars(text.data(), end, value);
  if (text.empty() || ec != std::errc() || ptr != end)
    throw InputError("bad integer in group descriptor '" + std::string(descriptor) + "'");
  return value;
}

}  // namespace

Group parse_group(std::string_view descriptor) {
  const auto colon = descriptor.find(':');
  if (colon == std::string_view::npos)
    throw InputError("group descriptor '" + std::string(descriptor) + "' lacks ':'");
  const auto family = descriptor.substr(0, colon);
  const auto arg = descriptor.substr(colon + 1);

  if (family == "prod") {
    if (arg.size() < 2 || arg.front() != '(' || arg.back() != ')')
      throw InputError("prod descriptor must look like prod:(desc,desc)");
    const auto inner = arg.substr(1, arg.size() - 2);
    int depth = 0;
    for (std::size_t i = 0; i < inner.size(); ++i) {
      if (inner[i] == '(') ++depth;
      if (inner[i] == ')') --depth;
      if (inner[i] == ',' && depth == 0)
        return make_product(parse_group(inner.substr(0, i)), parse_group(inner.substr(i + 1)));
    }
    throw InputError("prod descriptor needs two comma-separated factors");
  }

  const int value = parse_int(arg, descriptor);
  if (family == "cyclic") {
    if (value < 1) throw InputError("cyclic group needs n >= 1");
    return make_cyclic(static_cast<std::size_t>(value));
  }
  if (family == "sym") return make_symmetric(value);
  if (family == "alt") return make_alternating(value);
  if (family == "sl2") return make_sl2(value);
  throw InputError("unknown group family '" + std::string(family) + "'");
}

ElementId mul_chain(const Group& g, std::span<const ElementId> elems) {
  ElementId acc = g.identity();
  for (ElementId e : elems) acc = g.mul(acc, e);
  return acc;
}

AxiomReport check_axioms(const Group& g, std::size_t samples, std::uint64_t seed,
                         std::size_t exhaustive_limit) {
  AxiomReport r;
  const std::size_t n = g.order();
  const ElementId e = g.identity();
  for (ElementId a = 0; a < n; ++a) {
    r.identity_ok = r.identity_ok && g.mul(e, a) == a && g.mul(a, e) == a;
    r.inverse_ok = r.inverse_ok && g.mul(a, g.inv(a)) == e && g.mul(g.inv(a), a) == e;
  }

  std::vector<char> seen_row(n), seen_col(n);
  for (ElementId a = 0; a < n && r.latin_square; ++a) {
    std::fill(seen_row.begin(), seen_row.end(), 0);
    std::fill(seen_col.begin(), seen_col.end(), 0);
    for (ElementId b = 0; b < n; ++b) {
      seen_row[g.mul(a, b)] = 1;
      seen_col[g.mul(b, a)] = 1;
    }
    r.latin_square = std::all_of(seen_row.begin(), seen_row.end(), [](char c) { return c; }) &&
                     std::all_of(seen_col.begin(), seen_col.end(), [](char c) { return c; });
  }

  if (n <= exhaustive_limit) {
    for (ElementId a = 0; a < n; ++a)
      for (ElementId b = 0; b < n; ++b) {
        const ElementId ab = g.mul(a, b);
        for (ElementId c = 0; c < n; ++c)
          if (g.mul(ab, c) != g.mul(a, g.mul(b, c))) r.associative = false;
      }
    r.triples_checked = n * n * n;
  } else {
    r.exhaustive = false;
    Rng rng(seed);
    for (std::size_t s = 0; s < samples; ++s) {
      const auto a = static_cast<ElementId>(rng.below(n));
      const auto b = static_cast<ElementId>(rng.below(n));
      const auto c = static_cast<ElementId>(rng.below(n));
      if (g.mul(g.mul(a, b), c) != g.mul(a, g.mul(b, c))) r.associative = false;
    }
    r.triples_checked = samples;
  }
  return r;
}

}  // namespace qcorners
