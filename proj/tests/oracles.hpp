#pragma once

// Deliberately naive reference implementations used to check the library. They share only
// the multiplication (the group's definition) with the code under test.

#include <algorithm>
#include <cstdint>
#include <map>
#include <numeric>
#include <set>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "zariski/group.hpp"

namespace oracle {

using zariski::Element;
using zariski::FiniteGroup;
using Tuple = std::vector<std::uint32_t>;

inline std::uint32_t order_of(const FiniteGroup& g, std::uint32_t x) {
  std::uint32_t n = 1;
  for (std::uint32_t p = x; p != 0; p = g.mul(Element{p}, Element{x}).id) ++n;
  return n;
}

inline std::uint32_t inverse_of(const FiniteGroup& g, std::uint32_t x) {
  for (std::uint32_t y = 0; y < g.order(); ++y)
    if (g.mul(Element{x}, Element{y}).id == 0) return y;
  return 0;
}

inline std::set<std::uint32_t> closure(const FiniteGroup& g, const Tuple& gens) {
  std::set<std::uint32_t> members{0};
  bool grew = true;
  while (grew) {
    grew = false;
    const std::vector<std::uint32_t> current(members.begin(), members.end());
    for (auto a : current)
      for (auto b : gens)
        if (members.insert(g.mul(Element{a}, Element{b}).id).second) grew = true;
  }
  return members;
}

/// All tuples of G^r with the given sorted order list, product 1, generating G.
inline std::vector<Tuple> systems(const FiniteGroup& g, const std::vector<std::uint32_t>& sorted_orders) {
  const std::size_t r = sorted_orders.size();
  std::vector<std::uint32_t> orders_by_id(g.order());
  for (std::uint32_t x = 0; x < g.order(); ++x) orders_by_id[x] = order_of(g, x);
  std::map<std::uint32_t, std::size_t> needed;
  for (auto m : sorted_orders) ++needed[m];
  std::vector<Tuple> out;
  Tuple t;
  // entries with a still-needed order; the last entry is forced by the product
  auto extend = [&](auto&& self, std::uint32_t prod) -> void {
    if (t.size() + 1 == r) {
      const auto last = inverse_of(g, prod);
      const auto it = needed.find(orders_by_id[last]);
      if (it == needed.end() || it->second == 0) return;
      t.push_back(last);
      if (closure(g, t).size() == g.order()) out.push_back(t);
      t.pop_back();
      return;
    }
    for (std::uint32_t x = 0; x < g.order(); ++x) {
      auto& left = needed[orders_by_id[x]];
      if (left == 0) continue;
      --left;
      t.push_back(x);
      self(self, g.mul(Element{prod}, Element{x}).id);
      t.pop_back();
      ++left;
    }
  };
  extend(extend, 0);
  std::sort(out.begin(), out.end());
  return out;
}

/// Conjugates of powers of the entries, by direct computation.
inline std::set<std::uint32_t> sigma(const FiniteGroup& g, const Tuple& t) {
  std::set<std::uint32_t> out{0};
  for (auto x : t) {
    std::uint32_t p = x;
    while (p != 0) {
      for (std::uint32_t h = 0; h < g.order(); ++h)
        out.insert(g.mul(g.mul(Element{h}, Element{p}), Element{inverse_of(g, h)}).id);
      p = g.mul(Element{p}, Element{x}).id;
    }
  }
  return out;
}

/// Automorphisms by trying every bijection fixing the identity (order <= 9).
inline std::vector<std::vector<std::uint32_t>> automorphisms(const FiniteGroup& g) {
  std::vector<std::uint32_t> perm(g.order());
  std::iota(perm.begin(), perm.end(), 0u);
  std::vector<std::vector<std::uint32_t>> out;
  do {
    bool hom = true;
    for (std::uint32_t a = 0; a < g.order() && hom; ++a)
      for (std::uint32_t b = 0; b < g.order() && hom; ++b)
        hom = perm[g.mul(Element{a}, Element{b}).id] == g.mul(Element{perm[a]}, Element{perm[b]}).id;
    if (hom) out.push_back(perm);
  } while (std::next_permutation(perm.begin() + 1, perm.end()));
  return out;
}

/// GL(k, 2) as permutations of F_2^k, from all k x k matrices of full rank.
inline std::vector<std::vector<std::uint32_t>> gl2(unsigned k) {
  const std::uint32_t n = 1u << k;
  std::vector<std::vector<std::uint32_t>> out;
  for (std::uint64_t bits = 0; bits < (std::uint64_t{1} << (k * k)); ++bits) {
    std::vector<std::uint32_t> cols(k);
    for (unsigned c = 0; c < k; ++c) cols[c] = static_cast<std::uint32_t>((bits >> (c * k)) & (n - 1));
    std::vector<std::uint32_t> map(n, 0);
    for (std::uint32_t x = 0; x < n; ++x)
      for (unsigned c = 0; c < k; ++c)
        if (x >> c & 1) map[x] ^= cols[c];
    if (std::set<std::uint32_t>(map.begin(), map.end()).size() == n) out.push_back(map);
  }
  return out;
}

/// Automorphisms from every assignment of images to a generating set: extend along words in
/// the generators and keep the assignments that give a well-defined bijective homomorphism.
inline std::vector<std::vector<std::uint32_t>> automorphisms_by_generators(const FiniteGroup& g) {
  Tuple gens;
  while (closure(g, gens).size() < g.order()) {
    const auto have = closure(g, gens);
    for (std::uint32_t x = 1; x < g.order(); ++x)
      if (!have.count(x)) {
        gens.push_back(x);
        break;
      }
  }
  const std::uint32_t n = g.order();
  std::vector<std::vector<std::uint32_t>> out;
  Tuple images(gens.size(), 0);
  while (true) {
    std::vector<std::int64_t> map(n, -1);
    map[0] = 0;
    std::vector<std::uint32_t> queue{0};
    bool ok = true;
    for (std::size_t head = 0; head < queue.size() && ok; ++head)
      for (std::size_t i = 0; i < gens.size() && ok; ++i) {
        const auto x = queue[head];
        const auto y = g.mul(Element{x}, Element{gens[i]}).id;
        const auto img = g.mul(Element{static_cast<std::uint32_t>(map[x])}, Element{images[i]}).id;
        if (map[y] < 0) {
          map[y] = img;
          queue.push_back(y);
        } else if (map[y] != img) {
          ok = false;
        }
      }
    if (ok) {
      std::vector<std::uint32_t> perm(map.begin(), map.end());
      ok = std::set<std::uint32_t>(perm.begin(), perm.end()).size() == n;
      for (std::uint32_t a = 0; a < n && ok; ++a)
        for (std::uint32_t b = 0; b < n && ok; ++b)
          ok = perm[g.mul(Element{a}, Element{b}).id] == g.mul(Element{perm[a]}, Element{perm[b]}).id;
      if (ok) out.push_back(perm);
    }
    std::size_t pos = 0;
    while (pos < images.size() && ++images[pos] == n) images[pos++] = 0;
    if (pos == images.size()) break;
  }
  return out;
}

/// Direct product table; (a, b) has id a * |H| + b.
inline FiniteGroup direct_product(const FiniteGroup& a, const FiniteGroup& b) {
  const std::uint32_t n = a.order() * b.order();
  std::vector<std::vector<std::uint32_t>> rows(n, std::vector<std::uint32_t>(n));
  for (std::uint32_t x = 0; x < n; ++x)
    for (std::uint32_t y = 0; y < n; ++y)
      rows[x][y] = a.mul(Element{x / b.order()}, Element{y / b.order()}).id * b.order() +
                   b.mul(Element{x % b.order()}, Element{y % b.order()}).id;
  return FiniteGroup::from_table(rows);
}

struct UnionFind {
  std::vector<std::size_t> parent;
  explicit UnionFind(std::size_t n) : parent(n) { std::iota(parent.begin(), parent.end(), std::size_t{0}); }
  std::size_t find(std::size_t x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  }
  void unite(std::size_t a, std::size_t b) { parent[find(a)] = find(b); }
  std::size_t classes() {
    std::size_t n = 0;
    for (std::size_t i = 0; i < parent.size(); ++i) n += find(i) == i;
    return n;
  }
};

/// A subset of a permutation group (as image tables) that generates the same group; the
/// equivalence generated by a group action only needs the generators.
inline std::vector<std::vector<std::uint32_t>> generating_subset(const std::vector<std::vector<std::uint32_t>>& perms) {
  std::vector<std::vector<std::uint32_t>> gens;
  std::set<std::vector<std::uint32_t>> reached;
  if (perms.empty()) return gens;
  std::vector<std::uint32_t> id(perms.front().size());
  std::iota(id.begin(), id.end(), 0u);
  reached.insert(id);
  for (const auto& p : perms) {
    if (reached.count(p)) continue;
    gens.push_back(p);
    std::vector<std::vector<std::uint32_t>> frontier(reached.begin(), reached.end());
    while (!frontier.empty()) {
      std::vector<std::vector<std::uint32_t>> next;
      for (const auto& q : frontier)
        for (const auto& s : gens) {
          std::vector<std::uint32_t> qs(q.size());
          for (std::size_t i = 0; i < q.size(); ++i) qs[i] = s[q[i]];
          if (reached.insert(qs).second) next.push_back(std::move(qs));
        }
      frontier = std::move(next);
    }
  }
  return gens;
}

struct PairCountOptions {
  bool identify_swap = false;
  bool identify_inner = false;
};

/// Classes of disjoint ordered-tuple pairs under the equivalence generated by braid moves on
/// either side, simultaneous automorphisms, optionally the swap and conjugation of one side.
inline std::size_t pair_count(const FiniteGroup& g, const std::vector<std::uint32_t>& orders1,
                              const std::vector<std::uint32_t>& orders2,
                              const std::vector<std::vector<std::uint32_t>>& auts, PairCountOptions options = {}) {
  const auto a = systems(g, orders1);
  const auto b = orders1 == orders2 ? a : systems(g, orders2);
  auto code = [&](const Tuple& t) {
    std::uint64_t c = 0;
    for (auto x : t) c = c * g.order() + x;
    return c;
  };
  auto mask = [&](const Tuple& t) {
    std::uint64_t m = 0;
    for (auto x : sigma(g, t)) m |= std::uint64_t{1} << x;
    return m;
  };
  // systems come sorted, so their codes are sorted and positions come from binary search
  std::vector<std::uint64_t> codes_a, codes_b, mask_a, mask_b;
  for (const auto& t : a) {
    codes_a.push_back(code(t));
    mask_a.push_back(mask(t));
  }
  for (const auto& t : b) {
    codes_b.push_back(code(t));
    mask_b.push_back(mask(t));
  }
  auto position = [](const std::vector<std::uint64_t>& sorted, std::uint64_t c) {
    const auto it = std::lower_bound(sorted.begin(), sorted.end(), c);
    if (it == sorted.end() || *it != c) throw std::logic_error("oracle: tuple is not a system");
    return static_cast<std::size_t>(it - sorted.begin());
  };
  std::map<std::uint64_t, std::vector<std::size_t>> by_mask;
  for (std::size_t j = 0; j < b.size(); ++j) by_mask[mask_b[j]].push_back(j);
  // pairs grouped by first index, partners sorted; pair id = offset[i] + rank of j
  std::vector<std::pair<std::size_t, std::size_t>> pairs;
  std::vector<std::size_t> offset(a.size() + 1, 0);
  for (std::size_t i = 0; i < a.size(); ++i) {
    const auto begin = pairs.size();
    for (const auto& [m, members] : by_mask)
      if ((mask_a[i] & m) == 1)
        for (auto j : members) pairs.emplace_back(i, j);
    std::sort(pairs.begin() + begin, pairs.end());
    offset[i + 1] = pairs.size();
  }
  auto lookup = [&](const Tuple& x, const Tuple& y) {
    const auto i = position(codes_a, code(x));
    const auto j = position(codes_b, code(y));
    const auto first = pairs.begin() + offset[i], last = pairs.begin() + offset[i + 1];
    const auto it = std::lower_bound(first, last, std::pair{i, j});
    if (it == last || it->second != j) throw std::logic_error("oracle: pair is not disjoint");
    return static_cast<std::size_t>(it - pairs.begin());
  };
  UnionFind uf(pairs.size());
  const auto aut_gens = generating_subset(auts);
  Tuple conjugators;
  while (closure(g, conjugators).size() < g.order())
    for (std::uint32_t h = 1; h < g.order(); ++h)
      if (!closure(g, conjugators).count(h)) {
        conjugators.push_back(h);
        break;
      }
  auto braid = [&](Tuple t, std::size_t i) {
    const auto x = t[i], y = t[i + 1];
    t[i] = y;
    t[i + 1] = g.mul(g.mul(Element{inverse_of(g, y)}, Element{x}), Element{y}).id;
    return t;
  };
  auto conj = [&](Tuple t, std::uint32_t h) {
    for (auto& x : t) x = g.mul(g.mul(Element{h}, Element{x}), Element{inverse_of(g, h)}).id;
    return t;
  };
  for (std::size_t p = 0; p < pairs.size(); ++p) {
    const auto& x = a[pairs[p].first];
    const auto& y = b[pairs[p].second];
    for (std::size_t j = 0; j + 1 < x.size(); ++j) uf.unite(p, lookup(braid(x, j), y));
    for (std::size_t j = 0; j + 1 < y.size(); ++j) uf.unite(p, lookup(x, braid(y, j)));
    for (const auto& phi : aut_gens) {
      Tuple px = x, py = y;
      for (auto& e : px) e = phi[e];
      for (auto& e : py) e = phi[e];
      uf.unite(p, lookup(px, py));
    }
    if (options.identify_swap) uf.unite(p, lookup(y, x));
    if (options.identify_inner)
      for (auto h : conjugators) {
        uf.unite(p, lookup(conj(x, h), y));
        uf.unite(p, lookup(x, conj(y, h)));
      }
  }
  return uf.classes();
}

/// Multisets of r nonzero vectors of F_2^k with XOR zero spanning F_2^k, as multiplicity
/// vectors indexed by the vector (entry 0 unused).
inline std::vector<Tuple> f2_multisets(unsigned k, unsigned r) {
  const std::uint32_t n = 1u << k;
  std::vector<Tuple> out;
  Tuple counts(n, 0);
  auto finish = [&] {
    std::uint32_t x = 0;
    std::vector<std::uint32_t> basis;
    for (std::uint32_t v = 1; v < n; ++v) {
      if (counts[v] == 0) continue;
      if (counts[v] % 2) x ^= v;
      auto w = v;
      for (auto b : basis) w = std::min(w, w ^ b);
      if (w) basis.push_back(w);
    }
    if (x == 0 && basis.size() == k) out.push_back(counts);
  };
  // distribute the remaining entries over vectors v, v+1, ...
  auto place = [&](auto&& self, std::uint32_t v, std::uint32_t left) -> void {
    if (v == n - 1) {
      counts[v] = left;
      finish();
      counts[v] = 0;
      return;
    }
    for (std::uint32_t c = 0; c <= left; ++c) {
      counts[v] = c;
      self(self, v + 1, left - c);
    }
    counts[v] = 0;
  };
  place(place, 1, r);
  return out;
}

/// Classes of disjoint multiset pairs over (Z/2Z)^k under simultaneous GL(k, 2), counting
/// each orbit once by marking all of its images.
inline std::size_t f2_multiset_pair_count(unsigned k, unsigned r1, unsigned r2, bool identify_swap) {
  const std::uint32_t n = 1u << k;
  const auto auts = gl2(k);
  const auto a = f2_multisets(k, r1);
  const auto b = r1 == r2 ? a : f2_multisets(k, r2);
  auto key = [](const Tuple& x, const Tuple& y) {
    std::string s;
    for (auto c : x) s.push_back(static_cast<char>(c));
    for (auto c : y) s.push_back(static_cast<char>(c));
    return s;
  };
  std::unordered_set<std::string> seen;
  std::size_t classes = 0;
  Tuple px(n), py(n);
  for (const auto& x : a)
    for (const auto& y : b) {
      bool overlap = false;
      for (std::uint32_t v = 1; v < n && !overlap; ++v) overlap = x[v] && y[v];
      if (overlap || seen.count(key(x, y))) continue;
      ++classes;
      for (const auto& phi : auts) {
        for (std::uint32_t v = 0; v < n; ++v) {
          px[phi[v]] = x[v];
          py[phi[v]] = y[v];
        }
        seen.insert(key(px, py));
        if (identify_swap) seen.insert(key(py, px));
      }
    }
  return classes;
}

}  // namespace oracle
