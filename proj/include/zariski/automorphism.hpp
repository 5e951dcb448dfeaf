#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "zariski/error.hpp"
#include "zariski/group.hpp"

namespace zariski {

/// An automorphism stored as the permutation of element ids it induces.
class Automorphism {
 public:
  explicit Automorphism(std::vector<std::uint32_t> mapping) : mapping_(std::move(mapping)) {}

  Element operator()(Element g) const { return Element{mapping_.at(g.id)}; }
  Element apply_unchecked(Element g) const noexcept { return Element{mapping_[g.id]}; }

  const std::vector<std::uint32_t>& mapping() const noexcept { return mapping_; }
  std::size_t size() const noexcept { return mapping_.size(); }

  friend auto operator<=>(const Automorphism&, const Automorphism&) = default;

 private:
  std::vector<std::uint32_t> mapping_;
};

struct AutomorphismCaps {
  std::uint32_t max_table_order = FiniteGroup::max_table_order;
  // |GL(4,2)| = 20160 stored mappings; |GL(5,2)| ~ 10^7 is reachable by raising this.
  unsigned max_rank = 4;
};

namespace detail {

/// Visits every invertible k x k matrix over F_2, given by its column images of the basis.
/// Columns are chosen outside the span of the previous ones, so no candidate is wasted.
inline void for_each_invertible_f2_matrix(unsigned k,
                                          const std::function<void(const std::vector<std::uint32_t>&)>& visit) {
  const std::uint32_t n = 1u << k;
  std::vector<std::uint32_t> columns;
  std::vector<std::vector<bool>> spans;  // spans[j] = span of first j columns
  spans.reserve(k + 1);                  // keeps references to spans.back() valid
  spans.push_back(std::vector<bool>(n, false));
  spans[0][0] = true;
  std::function<void()> recurse = [&]() {
    if (columns.size() == k) {
      visit(columns);
      return;
    }
    const auto& span = spans.back();
    for (std::uint32_t v = 1; v < n; ++v) {
      if (span[v]) continue;
      std::vector<bool> next = span;
      for (std::uint32_t x = 0; x < n; ++x)
        if (span[x]) next[x ^ v] = true;
      columns.push_back(v);
      spans.push_back(std::move(next));
      recurse();
      spans.pop_back();
      columns.pop_back();
    }
  };
  recurse();
}

inline std::vector<std::uint32_t> linear_map_table(unsigned k, const std::vector<std::uint32_t>& columns) {
  const std::uint32_t n = 1u << k;
  std::vector<std::uint32_t> map(n, 0);
  for (std::uint32_t x = 1; x < n; ++x) {
    unsigned low = static_cast<unsigned>(std::countr_zero(x));
    map[x] = map[x & (x - 1)] ^ columns[low];
  }
  return map;
}

/// Greedy generating set: repeatedly add the smallest element outside the current subgroup.
inline std::vector<Element> greedy_generators(const FiniteGroup& group) {
  std::vector<Element> gens;
  auto member = group.subgroup_closure(gens);
  for (std::uint32_t id = 1; id < group.order(); ++id) {
    if (member[id]) continue;
    gens.push_back(Element{id});
    member = group.subgroup_closure(gens);
  }
  return gens;
}

}  // namespace detail

/// All automorphisms of the group, without duplicates. For (Z/2Z)^k these are GL(k, F_2).
inline std::vector<Automorphism> automorphisms(const FiniteGroup& group, AutomorphismCaps caps = {}) {
  std::vector<Automorphism> out;
  if (group.is_elementary_abelian()) {
    require(group.rank() <= caps.max_rank, ErrorCode::capacity,
            "Aut(" + group.describe() + ") has " + "more elements than the enumeration cap (rank " +
                std::to_string(caps.max_rank) +
                "); use a generator-based action (elementary transvections) instead");
    detail::for_each_invertible_f2_matrix(group.rank(), [&](const std::vector<std::uint32_t>& columns) {
      out.emplace_back(detail::linear_map_table(group.rank(), columns));
    });
    return out;
  }

  require(group.order() <= caps.max_table_order, ErrorCode::capacity,
          "automorphism enumeration capped at order " + std::to_string(caps.max_table_order) +
              "; use a generator-based action instead");
  const std::uint32_t n = group.order();
  const auto gens = detail::greedy_generators(group);
  if (gens.empty()) {
    out.emplace_back(std::vector<std::uint32_t>{0});
    return out;
  }

  // Backtrack over generator images; extend each partial assignment to the generated
  // subgroup by closure, pruning as soon as the map is inconsistent or non-injective.
  constexpr std::uint32_t unset = ~std::uint32_t{0};
  std::vector<std::uint32_t> images(gens.size(), 0);
  std::function<void(std::size_t, const std::vector<std::uint32_t>&)> recurse =
      [&](std::size_t depth, const std::vector<std::uint32_t>& partial) {
        if (depth == gens.size()) {
          for (std::uint32_t a = 0; a < n; ++a)
            for (std::uint32_t b = 0; b < n; ++b) {
              Element ab = group.mul(Element{a}, Element{b});
              if (partial[ab.id] != group.mul(Element{partial[a]}, Element{partial[b]}).id) return;
            }
          out.emplace_back(partial);
          return;
        }
        const std::uint32_t want = group.element_order(gens[depth]);
        for (std::uint32_t h = 1; h < n; ++h) {
          if (group.element_order(Element{h}) != want) continue;
          images[depth] = h;
          std::vector<std::uint32_t> map(n, unset);
          std::vector<bool> used(n, false);
          map[0] = 0;
          used[0] = true;
          std::vector<std::uint32_t> queue{0};
          bool ok = true;
          for (std::size_t head = 0; head < queue.size() && ok; ++head) {
            const std::uint32_t x = queue[head];
            for (std::size_t i = 0; i <= depth; ++i) {
              const std::uint32_t y = group.mul(Element{x}, gens[i]).id;
              const std::uint32_t img = group.mul(Element{map[x]}, Element{images[i]}).id;
              if (map[y] == unset) {
                if (used[img]) {
                  ok = false;
                  break;
                }
                map[y] = img;
                used[img] = true;
                queue.push_back(y);
              } else if (map[y] != img) {
                ok = false;
                break;
              }
            }
          }
          if (ok) recurse(depth + 1, map);
        }
      };
  recurse(0, {});
  std::sort(out.begin(), out.end());
  return out;
}

/// |GL(k, F_2)| = prod_{i<k} (2^k - 2^i).
inline std::uint64_t gl2_order(unsigned k) {
  std::uint64_t result = 1;
  for (unsigned i = 0; i < k; ++i) result *= (std::uint64_t{1} << k) - (std::uint64_t{1} << i);
  return result;
}

}  // namespace zariski
