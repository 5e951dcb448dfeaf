#pragma once

#include <algorithm>
#include <bit>
#include <compare>
#include <cstdint>
#include <fstream>
#include <functional>
#include <istream>
#include <numeric>
#include <span>
#include <sstream>
#include <string>
#include <vector>

#include "zariski/error.hpp"

namespace zariski {

/// Index of an element inside its parent group. The identity is always id 0.
/// For elementary abelian groups the id is the element's bit-vector over F_2.
struct Element {
  std::uint32_t id = 0;

  friend auto operator<=>(const Element&, const Element&) = default;
};

enum class GroupKind { elementary_abelian, table };

/// A finite group given either as (Z/2Z)^k with XOR product or by an explicit
/// multiplication table. Immutable after construction.
class FiniteGroup {
 public:
  static constexpr std::uint32_t max_table_order = 64;
  static constexpr unsigned max_rank = 30;

  static FiniteGroup elementary_abelian(unsigned rank) {
    require(rank >= 1 && rank <= max_rank, ErrorCode::usage,
            "elementary abelian rank must lie in [1, " + std::to_string(max_rank) + "]");
    FiniteGroup group;
    group.kind_ = GroupKind::elementary_abelian;
    group.rank_ = rank;
    group.order_ = std::uint32_t{1} << rank;
    group.abelian_ = true;
    return group;
  }

  /// Builds a table group. rows[i][j] is the id of g_i * g_j; element 0 must be the identity.
  static FiniteGroup from_table(const std::vector<std::vector<std::uint32_t>>& rows) {
    const auto n = static_cast<std::uint32_t>(rows.size());
    require(n >= 1, ErrorCode::parse, "group table is empty");
    require(n <= max_table_order, ErrorCode::capacity,
            "table groups are limited to order " + std::to_string(max_table_order));
    FiniteGroup group;
    group.kind_ = GroupKind::table;
    group.order_ = n;
    group.table_.reserve(std::size_t{n} * n);
    for (std::uint32_t i = 0; i < n; ++i) {
      require(rows[i].size() == n, ErrorCode::parse,
              "row " + std::to_string(i + 1) + " has " + std::to_string(rows[i].size()) +
                  " entries, expected " + std::to_string(n));
      for (auto entry : rows[i]) {
        require(entry < n, ErrorCode::parse,
                "entry " + std::to_string(entry) + " in row " + std::to_string(i + 1) +
                    " is out of range");
        group.table_.push_back(entry);
      }
    }
    group.validate_table();
    group.build_caches();
    return group;
  }

  /// Group file format: first token n, then n*n ids (row-major multiplication table).
  static FiniteGroup read_table(std::istream& in) {
    long long n = 0;
    require(static_cast<bool>(in >> n), ErrorCode::parse, "group file: missing order on line 1");
    require(n >= 1, ErrorCode::parse, "group file: order must be positive");
    require(n <= max_table_order, ErrorCode::capacity,
            "group file: table groups are limited to order " + std::to_string(max_table_order));
    std::vector<std::vector<std::uint32_t>> rows(static_cast<std::size_t>(n));
    for (auto& row : rows) {
      row.resize(static_cast<std::size_t>(n));
      for (auto& entry : row) {
        long long value = -1;
        require(static_cast<bool>(in >> value), ErrorCode::parse,
                "group file: expected " + std::to_string(n * n) + " table entries");
        require(value >= 0 && value < n, ErrorCode::parse,
                "group file: entry " + std::to_string(value) + " out of range");
        entry = static_cast<std::uint32_t>(value);
      }
    }
    std::string extra;
    require(!(in >> extra), ErrorCode::parse, "group file: trailing data '" + extra + "'");
    return from_table(rows);
  }

  GroupKind kind() const noexcept { return kind_; }
  bool is_elementary_abelian() const noexcept { return kind_ == GroupKind::elementary_abelian; }
  std::uint32_t order() const noexcept { return order_; }
  /// Rank k for (Z/2Z)^k; 0 for table groups.
  unsigned rank() const noexcept { return rank_; }
  bool is_abelian() const noexcept { return abelian_; }
  Element identity() const noexcept { return Element{0}; }

  bool contains(Element g) const noexcept { return g.id < order_; }

  Element mul(Element g, Element h) const {
    check(g);
    check(h);
    return mul_unchecked(g, h);
  }

  Element mul_unchecked(Element g, Element h) const noexcept {
    if (kind_ == GroupKind::elementary_abelian) return Element{g.id ^ h.id};
    return Element{table_[std::size_t{g.id} * order_ + h.id]};
  }

  Element inverse(Element g) const {
    check(g);
    if (kind_ == GroupKind::elementary_abelian) return g;
    return Element{inverse_[g.id]};
  }

  Element power(Element g, long long exponent) const {
    check(g);
    if (exponent < 0) {
      g = inverse(g);
      exponent = -exponent;
    }
    Element result = identity();
    Element base = g;
    while (exponent > 0) {
      if (exponent & 1) result = mul_unchecked(result, base);
      base = mul_unchecked(base, base);
      exponent >>= 1;
    }
    return result;
  }

  /// Least n >= 1 with g^n = 1.
  std::uint32_t element_order(Element g) const {
    check(g);
    if (kind_ == GroupKind::elementary_abelian) return g.id == 0 ? 1 : 2;
    return orders_[g.id];
  }

  /// by * g * by^-1
  Element conjugate(Element g, Element by) const {
    return mul(mul(by, g), inverse(by));
  }

  /// Index of the conjugacy class containing g (stable per group instance).
  std::uint32_t conjugacy_class(Element g) const {
    check(g);
    if (kind_ == GroupKind::elementary_abelian) return g.id;
    return class_id_[g.id];
  }

  std::vector<Element> elements() const {
    std::vector<Element> out(order_);
    for (std::uint32_t i = 0; i < order_; ++i) out[i] = Element{i};
    return out;
  }

  /// Membership mask of the subgroup generated by the given elements.
  std::vector<bool> subgroup_closure(std::span<const Element> generators) const {
    std::vector<bool> member(order_, false);
    std::vector<Element> frontier{identity()};
    member[0] = true;
    while (!frontier.empty()) {
      Element x = frontier.back();
      frontier.pop_back();
      for (Element gen : generators) {
        Element y = mul(x, gen);
        if (!member[y.id]) {
          member[y.id] = true;
          frontier.push_back(y);
        }
      }
    }
    return member;
  }

  /// True iff the subset generates the whole group. For (Z/2Z)^k this is an F_2 rank test.
  bool generates(std::span<const Element> subset) const {
    for (Element g : subset) check(g);
    if (kind_ == GroupKind::elementary_abelian) return f2_rank(subset) == rank_;
    auto member = subgroup_closure(subset);
    return std::all_of(member.begin(), member.end(), [](bool b) { return b; });
  }

  /// Rank over F_2 of bit-vectors (Gaussian elimination on an xor basis).
  static unsigned f2_rank(std::span<const Element> vectors) {
    std::uint32_t basis[32] = {};
    unsigned rank = 0;
    for (Element v : vectors) {
      std::uint32_t x = v.id;
      while (x != 0) {
        unsigned top = static_cast<unsigned>(std::bit_width(x)) - 1;
        if (basis[top] == 0) {
          basis[top] = x;
          ++rank;
          break;
        }
        x ^= basis[top];
      }
    }
    return rank;
  }

  /// Short human-readable description, e.g. "Z2^3" or "table(8)".
  std::string describe() const {
    if (kind_ == GroupKind::elementary_abelian) return "Z2^" + std::to_string(rank_);
    return "table(" + std::to_string(order_) + ")";
  }

  /// Renders an element: bit-vector with the lowest bit first for (Z/2Z)^k, else "g<id>".
  std::string element_name(Element g) const {
    check(g);
    if (kind_ == GroupKind::elementary_abelian) {
      std::string bits(rank_, '0');
      for (unsigned i = 0; i < rank_; ++i)
        if ((g.id >> i) & 1u) bits[i] = '1';
      return bits;
    }
    return "g" + std::to_string(g.id);
  }

  friend bool operator==(const FiniteGroup& a, const FiniteGroup& b) {
    return a.kind_ == b.kind_ && a.order_ == b.order_ && a.rank_ == b.rank_ && a.table_ == b.table_;
  }

 private:
  FiniteGroup() = default;

  void check(Element g) const {
    if (g.id >= order_)
      fail(ErrorCode::usage, "element id " + std::to_string(g.id) + " does not belong to " +
                                 describe());
  }

  std::uint32_t at(std::uint32_t i, std::uint32_t j) const {
    return table_[std::size_t{i} * order_ + j];
  }

  void validate_table() const {
    const std::uint32_t n = order_;
    for (std::uint32_t i = 0; i < n; ++i) {
      require(at(0, i) == i && at(i, 0) == i, ErrorCode::parse,
              "element 0 is not the identity (row/column " + std::to_string(i) + ")");
    }
    for (std::uint32_t i = 0; i < n; ++i) {
      std::vector<bool> row_seen(n, false), col_seen(n, false);
      for (std::uint32_t j = 0; j < n; ++j) {
        require(!row_seen[at(i, j)], ErrorCode::parse,
                "row " + std::to_string(i) + " repeats an entry; not a group table");
        require(!col_seen[at(j, i)], ErrorCode::parse,
                "column " + std::to_string(i) + " repeats an entry; not a group table");
        row_seen[at(i, j)] = true;
        col_seen[at(j, i)] = true;
      }
    }
    for (std::uint32_t a = 0; a < n; ++a)
      for (std::uint32_t b = 0; b < n; ++b)
        for (std::uint32_t c = 0; c < n; ++c)
          require(at(at(a, b), c) == at(a, at(b, c)), ErrorCode::parse,
                  "table is not associative at (" + std::to_string(a) + "," + std::to_string(b) +
                      "," + std::to_string(c) + ")");
  }

  void build_caches() {
    const std::uint32_t n = order_;
    inverse_.assign(n, 0);
    for (std::uint32_t a = 0; a < n; ++a)
      for (std::uint32_t b = 0; b < n; ++b)
        if (at(a, b) == 0) inverse_[a] = b;

    orders_.assign(n, 0);
    for (std::uint32_t a = 0; a < n; ++a) {
      std::uint32_t x = a, k = 1;
      while (x != 0) {
        x = at(x, a);
        ++k;
      }
      orders_[a] = k;
    }

    abelian_ = true;
    for (std::uint32_t a = 0; a < n && abelian_; ++a)
      for (std::uint32_t b = 0; b < n; ++b)
        if (at(a, b) != at(b, a)) {
          abelian_ = false;
          break;
        }

    constexpr std::uint32_t unset = ~std::uint32_t{0};
    class_id_.assign(n, unset);
    std::uint32_t next = 0;
    for (std::uint32_t a = 0; a < n; ++a) {
      if (class_id_[a] != unset) continue;
      for (std::uint32_t g = 0; g < n; ++g) class_id_[at(at(g, a), inverse_[g])] = next;
      ++next;
    }
  }

  GroupKind kind_ = GroupKind::elementary_abelian;
  std::uint32_t order_ = 1;
  unsigned rank_ = 0;
  bool abelian_ = true;
  std::vector<std::uint32_t> table_;
  std::vector<std::uint32_t> inverse_;
  std::vector<std::uint32_t> orders_;
  std::vector<std::uint32_t> class_id_;
};

// Free-function spellings of the basic operations.
inline Element mul(const FiniteGroup& group, Element g, Element h) { return group.mul(g, h); }
inline bool generates(const FiniteGroup& group, std::span<const Element> subset) {
  require(!subset.empty(), ErrorCode::usage, "generates: subset must be nonempty");
  return group.generates(subset);
}
inline std::uint32_t element_order(const FiniteGroup& group, Element g) {
  return group.element_order(g);
}

namespace groups {

/// Table group of a permutation group given by generators acting on {0..degree-1}.
/// Element 0 is the identity; other elements are numbered in BFS order from the generators.
inline FiniteGroup from_permutations(const std::vector<std::vector<unsigned>>& generators) {
  require(!generators.empty(), ErrorCode::usage, "need at least one generator");
  const std::size_t degree = generators.front().size();
  using Perm = std::vector<unsigned>;
  Perm identity(degree);
  std::iota(identity.begin(), identity.end(), 0u);
  // (p*q)(x) = p(q(x)): product acts right-to-left, matching composition of maps.
  auto compose = [](const Perm& p, const Perm& q) {
    Perm r(p.size());
    for (std::size_t x = 0; x < p.size(); ++x) r[x] = p[q[x]];
    return r;
  };
  std::vector<Perm> elements{identity};
  for (std::size_t head = 0; head < elements.size(); ++head) {
    for (const auto& gen : generators) {
      Perm next = compose(elements[head], gen);
      if (std::find(elements.begin(), elements.end(), next) == elements.end())
        elements.push_back(std::move(next));
      require(elements.size() <= FiniteGroup::max_table_order, ErrorCode::capacity,
              "permutation group too large for a table");
    }
  }
  const std::size_t n = elements.size();
  std::vector<std::vector<std::uint32_t>> rows(n, std::vector<std::uint32_t>(n));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      Perm prod = compose(elements[i], elements[j]);
      rows[i][j] = static_cast<std::uint32_t>(
          std::find(elements.begin(), elements.end(), prod) - elements.begin());
    }
  return FiniteGroup::from_table(rows);
}

inline FiniteGroup cyclic(unsigned n) {
  require(n >= 1 && n <= FiniteGroup::max_table_order, ErrorCode::usage, "cyclic order out of range");
  std::vector<std::vector<std::uint32_t>> rows(n, std::vector<std::uint32_t>(n));
  for (unsigned i = 0; i < n; ++i)
    for (unsigned j = 0; j < n; ++j) rows[i][j] = (i + j) % n;
  return FiniteGroup::from_table(rows);
}

/// S_3 on {0,1,2}; generators (0 1) and (0 1 2).
inline FiniteGroup symmetric3() { return from_permutations({{1, 0, 2}, {1, 2, 0}}); }

/// Dihedral group of order 2n, acting on the n-gon.
inline FiniteGroup dihedral(unsigned n) {
  std::vector<unsigned> rotation(n), reflection(n);
  for (unsigned i = 0; i < n; ++i) {
    rotation[i] = (i + 1) % n;
    reflection[i] = (n - i) % n;
  }
  return from_permutations({rotation, reflection});
}

/// Quaternion group Q_8 via its regular representation on 8 points.
inline FiniteGroup quaternion8() {
  // Points 0..7 = {1,i,j,k,-1,-i,-j,-k}; right multiplication by i and j.
  return from_permutations({{1, 4, 7, 2, 5, 0, 3, 6}, {2, 3, 4, 5, 6, 7, 0, 1}});
}

/// (Z/2Z)^k as a table group (ids are bit-vectors), used to cross-check the XOR fast path.
inline FiniteGroup elementary_abelian_table(unsigned rank) {
  require(rank >= 1 && rank <= 6, ErrorCode::usage, "table rank out of range");
  const std::uint32_t n = 1u << rank;
  std::vector<std::vector<std::uint32_t>> rows(n, std::vector<std::uint32_t>(n));
  for (std::uint32_t i = 0; i < n; ++i)
    for (std::uint32_t j = 0; j < n; ++j) rows[i][j] = i ^ j;
  return FiniteGroup::from_table(rows);
}

}  // namespace groups

/// Parses a group spec: "Z2^k", one of the built-in names (S3, D4, Q8, Z<n>), or a group file path.
inline FiniteGroup parse_group_spec(const std::string& spec) {
  if (spec.rfind("Z2^", 0) == 0) {
    const std::string digits = spec.substr(3);
    require(!digits.empty() && digits.size() <= 3 &&
                std::all_of(digits.begin(), digits.end(), [](char c) { return c >= '0' && c <= '9'; }),
            ErrorCode::parse, "bad group token '" + spec + "': expected Z2^k with k a positive integer");
    const int k = std::stoi(digits);
    require(k >= 1 && k <= static_cast<int>(FiniteGroup::max_rank), ErrorCode::parse,
            "bad group token '" + spec + "': k must lie in [1, 30]");
    return FiniteGroup::elementary_abelian(static_cast<unsigned>(k));
  }
  if (spec == "S3") return groups::symmetric3();
  if (spec == "D4") return groups::dihedral(4);
  if (spec == "Q8") return groups::quaternion8();
  if (spec.size() >= 2 && spec[0] == 'Z' &&
      std::all_of(spec.begin() + 1, spec.end(), [](char c) { return c >= '0' && c <= '9'; }) &&
      spec.size() <= 4) {
    return groups::cyclic(static_cast<unsigned>(std::stoi(spec.substr(1))));
  }
  std::ifstream file(spec);
  require(file.good(), ErrorCode::parse,
          "cannot open group file '" + spec + "' (expected Z2^k, S3, D4, Q8, Z<n> or a file path)");
  return FiniteGroup::read_table(file);
}

}  // namespace zariski
