#pragma once

#include <algorithm>
#include <cstdint>
#include <deque>
#include <memory>
#include <mutex>
#include <set>
#include <span>
#include <string>
#include <thread>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "zariski/automorphism.hpp"
#include "zariski/error.hpp"
#include "zariski/group.hpp"
#include "zariski/spherical.hpp"

namespace zariski {

enum class MoveDirection { forward, inverse };

/// Applies the braid move sigma_i in place:
///   forward: (.., a, b, ..) -> (.., b, b^-1 a b, ..)
///   inverse: (.., a, b, ..) -> (.., a b a^-1, a, ..)
inline void apply_hurwitz_move(const FiniteGroup& group, std::vector<Element>& entries, std::size_t i,
                               MoveDirection direction) {
  require(entries.size() >= 2 && i + 1 < entries.size(), ErrorCode::usage,
          "hurwitz move index " + std::to_string(i) + " out of range for length " + std::to_string(entries.size()));
  const Element a = entries[i];
  const Element b = entries[i + 1];
  if (direction == MoveDirection::forward) {
    entries[i] = b;
    entries[i + 1] = group.mul(group.mul(group.inverse(b), a), b);
  } else {
    entries[i] = group.mul(group.mul(a, b), group.inverse(a));
    entries[i + 1] = a;
  }
}

inline SphericalSystem hurwitz_move(const SphericalSystem& system, std::size_t i, MoveDirection direction) {
  auto entries = system.entries();
  apply_hurwitz_move(system.group(), entries, i, direction);
  return SphericalSystem(system.group_ptr(), std::move(entries));
}

namespace detail {

struct TupleHash {
  std::size_t operator()(const std::vector<Element>& tuple) const noexcept {
    std::uint64_t h = 0xcbf29ce484222325ull;
    for (Element e : tuple) {
      h ^= e.id;
      h *= 0x100000001b3ull;
    }
    return static_cast<std::size_t>(h);
  }
};

}  // namespace detail

struct HurwitzOrbit {
  /// Members in lexicographic order; the first is the canonical representative.
  std::vector<std::vector<Element>> members;
  bool complete = true;
};

/// Closure of a tuple under forward/inverse moves (and, with identify_inner, simultaneous
/// conjugation of the whole tuple), by breadth-first search. Stops at `max_nodes` members
/// and flags the result incomplete.
inline HurwitzOrbit hurwitz_orbit_of(const FiniteGroup& group, const std::vector<Element>& start,
                                     std::uint64_t max_nodes = 1'000'000, bool identify_inner = false) {
  HurwitzOrbit orbit;
  std::unordered_set<std::vector<Element>, detail::TupleHash> visited;
  std::deque<std::vector<Element>> queue;
  visited.insert(start);
  queue.push_back(start);
  auto offer = [&](std::vector<Element>&& next) {
    if (visited.count(next)) return true;
    if (visited.size() >= max_nodes) {
      orbit.complete = false;
      return false;
    }
    visited.insert(next);
    queue.push_back(std::move(next));
    return true;
  };
  while (!queue.empty() && orbit.complete) {
    const std::vector<Element> current = std::move(queue.front());
    queue.pop_front();
    for (std::size_t i = 0; i + 1 < current.size() && orbit.complete; ++i) {
      for (auto direction : {MoveDirection::forward, MoveDirection::inverse}) {
        auto next = current;
        apply_hurwitz_move(group, next, i, direction);
        if (!offer(std::move(next))) break;
      }
    }
    if (identify_inner && !group.is_abelian()) {
      for (std::uint32_t g = 1; g < group.order() && orbit.complete; ++g) {
        auto next = current;
        for (auto& e : next) e = group.conjugate(e, Element{g});
        offer(std::move(next));
      }
    }
  }
  orbit.members.assign(visited.begin(), visited.end());
  std::sort(orbit.members.begin(), orbit.members.end());
  return orbit;
}

inline HurwitzOrbit hurwitz_orbit(const SphericalSystem& system, std::uint64_t max_nodes = 1'000'000,
                                  bool identify_inner = false) {
  return hurwitz_orbit_of(system.group(), system.entries(), max_nodes, identify_inner);
}

/// Canonical encoding of an equivalence class of ramification structures: the concatenated
/// ids of the two Aut(G)-minimized orbit representatives, with the side lengths in front.
struct PairClassKey {
  std::vector<std::uint32_t> words;

  /// Little-endian 32-bit words, the byte encoding used for hashing and serialization.
  std::string bytes() const {
    std::string out;
    out.reserve(words.size() * 4);
    for (auto w : words)
      for (int shift = 0; shift < 32; shift += 8) out.push_back(static_cast<char>((w >> shift) & 0xff));
    return out;
  }

  std::string hex() const {
    static constexpr char digits[] = "0123456789abcdef";
    std::string out;
    for (unsigned char c : bytes()) {
      out.push_back(digits[c >> 4]);
      out.push_back(digits[c & 15]);
    }
    return out;
  }

  friend auto operator<=>(const PairClassKey&, const PairClassKey&) = default;
};

struct KeyOptions {
  /// Identify (T1, T2) with (T2, T1); only meaningful when the two types agree.
  bool identify_swap = false;
  /// Include simultaneous conjugation in the per-side Hurwitz equivalence.
  bool identify_inner = false;
  std::uint64_t max_orbit_nodes = 1'000'000;
};

namespace detail {

inline PairClassKey make_key(std::span<const Element> a, std::span<const Element> b) {
  PairClassKey key;
  key.words.reserve(a.size() + b.size() + 2);
  key.words.push_back(static_cast<std::uint32_t>(a.size()));
  key.words.push_back(static_cast<std::uint32_t>(b.size()));
  for (auto e : a) key.words.push_back(e.id);
  for (auto e : b) key.words.push_back(e.id);
  return key;
}

/// Image of a multiplicity vector under an automorphism.
inline void map_multiplicities(const Automorphism& phi, const std::vector<std::uint64_t>& in,
                               std::vector<std::uint64_t>& out) {
  out.assign(in.size(), 0);
  for (std::uint32_t id = 0; id < in.size(); ++id)
    if (in[id]) out[phi.apply_unchecked(Element{id}).id] += in[id];
}

/// Compares two multisets of equal size exactly as their sorted entry lists compare
/// lexicographically: at the first differing id, the larger multiplicity sorts first.
inline int compare_multisets(const std::vector<std::uint64_t>& a, const std::vector<std::uint64_t>& b) {
  for (std::size_t id = 0; id < a.size(); ++id) {
    if (a[id] == b[id]) continue;
    return a[id] > b[id] ? -1 : 1;
  }
  return 0;
}

inline std::vector<std::uint64_t> multiplicities(std::span<const Element> entries, std::uint32_t order) {
  std::vector<std::uint64_t> mult(order, 0);
  for (auto e : entries) ++mult[e.id];
  return mult;
}

/// Key for abelian groups: Hurwitz orbits are the permutation classes, so each side is its
/// sorted multiset; minimize the pair over all simultaneous automorphism images.
inline PairClassKey abelian_pair_key(const std::vector<std::uint64_t>& m1, const std::vector<std::uint64_t>& m2,
                                     std::span<const Automorphism> auts, bool identify_swap) {
  std::vector<std::uint64_t> best1, best2, img1, img2;
  bool have = false;
  auto consider = [&](const std::vector<std::uint64_t>& a, const std::vector<std::uint64_t>& b) {
    if (!have) {
      best1 = a;
      best2 = b;
      have = true;
      return;
    }
    const int c = compare_multisets(a, best1);
    if (c < 0 || (c == 0 && compare_multisets(b, best2) < 0)) {
      best1 = a;
      best2 = b;
    }
  };
  for (const auto& phi : auts) {
    map_multiplicities(phi, m1, img1);
    map_multiplicities(phi, m2, img2);
    consider(img1, img2);
    if (identify_swap) consider(img2, img1);
  }
  const auto e1 = expand_multiplicities(best1);
  const auto e2 = expand_multiplicities(best2);
  return make_key(e1, e2);
}

inline std::vector<Element> apply_automorphism(const Automorphism& phi, std::span<const Element> entries) {
  std::vector<Element> out(entries.size());
  for (std::size_t i = 0; i < entries.size(); ++i) out[i] = phi.apply_unchecked(entries[i]);
  return out;
}

}  // namespace detail

/// Canonical key of a ramification structure under simultaneous Aut(G) and separate Hurwitz
/// equivalence. `auts` must be the full automorphism list of the group.
inline PairClassKey pair_class_key(const RamificationStructure& structure, std::span<const Automorphism> auts,
                                   KeyOptions options = {}) {
  const auto& group = structure.group();
  require(!auts.empty(), ErrorCode::usage, "pair_class_key needs the automorphism list");
  const bool swap = options.identify_swap && structure.t1().type() == structure.t2().type();
  if (group.is_abelian()) {
    return detail::abelian_pair_key(detail::multiplicities(structure.t1().entries(), group.order()),
                                    detail::multiplicities(structure.t2().entries(), group.order()), auts, swap);
  }
  const auto o1 = hurwitz_orbit(structure.t1(), options.max_orbit_nodes, options.identify_inner);
  const auto o2 = hurwitz_orbit(structure.t2(), options.max_orbit_nodes, options.identify_inner);
  require(o1.complete && o2.complete, ErrorCode::budget, "Hurwitz orbit exceeded the node budget");
  // phi maps orbits to orbits, so the representative of phi(O) is the least phi-image of a member.
  auto image_rep = [&](const Automorphism& phi, const HurwitzOrbit& orbit) {
    std::vector<Element> best;
    for (const auto& member : orbit.members) {
      auto img = detail::apply_automorphism(phi, member);
      if (best.empty() || img < best) best = std::move(img);
    }
    return best;
  };
  std::vector<Element> best1, best2;
  for (const auto& phi : auts) {
    auto a = image_rep(phi, o1);
    auto b = image_rep(phi, o2);
    if (best1.empty() || std::tie(a, b) < std::tie(best1, best2)) {
      best1 = a;
      best2 = b;
    }
    if (swap && std::tie(b, a) < std::tie(best1, best2)) {
      best1 = std::move(b);
      best2 = std::move(a);
    }
  }
  return detail::make_key(best1, best2);
}

// ---------------------------------------------------------------------------
// Component counting

enum class Completeness { exact, budget_limited, formula_only };

inline std::string to_string(Completeness c) {
  switch (c) {
    case Completeness::exact: return "exact";
    case Completeness::budget_limited: return "budget-limited";
    case Completeness::formula_only: return "formula-only";
  }
  return "unknown";
}

struct CountOptions {
  /// Keep (T1, T2) and (T2, T1) apart even when tau1 == tau2.
  bool count_ordered_pairs = false;
  bool identify_inner = false;
  unsigned workers = 1;
  /// Upper bound on Hurwitz-orbit nodes / enumerated tuples (nonabelian path).
  std::uint64_t max_orbit_nodes = 1'000'000;
  /// Upper bound on candidate pairs examined (abelian paths).
  std::uint64_t max_pairs = 50'000'000;
  AutomorphismCaps caps{};
  /// Use the ordered-tuple/BFS path even for abelian groups (cross-checking).
  bool force_orbit_path = false;
  /// Retain the key set in the result.
  bool keep_keys = true;
};

struct ComponentCount {
  /// Number of classes found; a lower bound unless completeness is exact.
  std::uint64_t h = 0;
  std::set<PairClassKey> keys;
  Completeness completeness = Completeness::exact;
  std::string method;
  std::string note;
  bool swap_identified = false;
  bool inner_identified = false;
  std::uint64_t pairs_examined = 0;
};

namespace detail {

template <class Body>
void run_sharded(unsigned workers, Body body) {
  workers = std::max(1u, workers);
  if (workers == 1) {
    body(0u, 1u);
    return;
  }
  std::vector<std::thread> threads;
  threads.reserve(workers);
  for (unsigned w = 0; w < workers; ++w) threads.emplace_back([&, w] { body(w, workers); });
  for (auto& t : threads) t.join();
}

struct ShardResult {
  std::set<PairClassKey> keys;
  std::uint64_t pairs = 0;
  bool exhausted = false;
};

inline ComponentCount merge_shards(std::vector<ShardResult>& shards, ComponentCount result, bool keep_keys) {
  for (auto& shard : shards) {
    result.pairs_examined += shard.pairs;
    if (shard.exhausted) result.completeness = Completeness::budget_limited;
    result.keys.merge(shard.keys);
  }
  result.h = result.keys.size();
  if (!keep_keys) result.keys.clear();
  return result;
}

/// (Z/2Z)^k fast path. Classes are pairs of multisets with disjoint supports. M1 runs over
/// Aut-canonical multisets only; for those, the full key min_phi (phi M1, phi M2) equals
/// (M1, min over Stab(M1) of phi M2), so only the stabilizer acts on the second side.
inline ComponentCount count_elementary_abelian(const FiniteGroup& group, const Type& tau1, const Type& tau2,
                                               const CountOptions& options, bool swap) {
  ComponentCount result;
  result.method = "elementary-abelian multiset pairs";
  if (!tau1.all_orders_are(2) || !tau2.all_orders_are(2)) {
    result.note = "type contains an order other than 2; (Z/2Z)^k has only involutions";
    return result;
  }
  const auto auts = automorphisms(group, options.caps);
  const unsigned k = group.rank();
  const std::uint32_t n = group.order();
  const std::uint64_t r1 = tau1.length(), r2 = tau2.length();

  // Canonical first sides, in enumeration order.
  std::vector<std::vector<std::uint64_t>> firsts;
  std::uint64_t work = 0;
  std::vector<bool> all(n, true);
  bool complete = for_each_f2_multiset(
      k, r1, all,
      [&](const std::vector<std::uint64_t>& mult) {
        std::vector<std::uint64_t> img;
        for (const auto& phi : auts) {
          map_multiplicities(phi, mult, img);
          if (compare_multisets(img, mult) < 0) return true;
        }
        firsts.push_back(mult);
        return true;
      },
      work, options.max_pairs);

  auto complement = [&](const std::vector<std::uint64_t>& m1) {
    std::vector<bool> allowed(n, true);
    for (std::uint32_t id = 0; id < n; ++id)
      if (m1[id]) allowed[id] = false;
    return allowed;
  };

  // Sequential pre-pass fixes how many first sides fit the pair budget, so the processed
  // prefix (and therefore the key set) does not depend on the worker count.
  std::size_t cutoff = firsts.size();
  if (complete) {
    std::uint64_t used = work;
    for (std::size_t i = 0; i < firsts.size(); ++i) {
      if (!for_each_f2_multiset(k, r2, complement(firsts[i]), [](const std::vector<std::uint64_t>&) { return true; },
                                used, options.max_pairs)) {
        cutoff = i;
        complete = false;
        break;
      }
    }
  } else {
    cutoff = 0;
  }

  std::vector<ShardResult> shards(std::max(1u, options.workers));
  run_sharded(options.workers, [&](unsigned w, unsigned stride) {
    auto& shard = shards[w];
    std::uint64_t unlimited = 0;
    for (std::size_t i = w; i < cutoff; i += stride) {
      const auto& m1 = firsts[i];
      std::vector<const Automorphism*> stabilizer;
      std::vector<std::uint64_t> img;
      for (const auto& phi : auts) {
        map_multiplicities(phi, m1, img);
        if (img == m1) stabilizer.push_back(&phi);
      }
      const auto e1 = expand_multiplicities(m1);
      for_each_f2_multiset(
          k, r2, complement(m1),
          [&](const std::vector<std::uint64_t>& m2) {
            ++shard.pairs;
            if (swap) {
              shard.keys.insert(abelian_pair_key(m1, m2, auts, true));
              return true;
            }
            std::vector<std::uint64_t> best = m2, cand;
            for (const Automorphism* phi : stabilizer) {
              map_multiplicities(*phi, m2, cand);
              if (compare_multisets(cand, best) < 0) best = cand;
            }
            shard.keys.insert(make_key(e1, expand_multiplicities(best)));
            return true;
          },
          unlimited, ~std::uint64_t{0});
    }
  });
  result = merge_shards(shards, std::move(result), options.keep_keys);
  if (!complete) result.completeness = Completeness::budget_limited;
  return result;
}

/// Abelian table groups: Hurwitz classes are entry multisets.
inline ComponentCount count_abelian_table(const FiniteGroup& group, const Type& tau1, const Type& tau2,
                                          const CountOptions& options, bool swap) {
  ComponentCount result;
  result.method = "abelian multiset pairs";
  const auto auts = automorphisms(group, options.caps);
  struct Side {
    std::vector<std::vector<Element>> systems;
    std::vector<std::vector<Element>> sigmas;
  };
  auto collect = [&](const Type& tau) {
    Side side;
    EnumerationBudget budget;
    budget.max_nodes = options.max_pairs;
    for_each_spherical_system(
        group, tau, EnumerationMode::multiset,
        [&](std::span<const Element> entries) {
          side.systems.emplace_back(entries.begin(), entries.end());
          side.sigmas.push_back(SphericalSystem::compute_sigma(group, entries));
          return true;
        },
        budget);
    return side;
  };
  const Side a = collect(tau1);
  const Side b = collect(tau2);
  std::vector<ShardResult> shards(std::max(1u, options.workers));
  run_sharded(options.workers, [&](unsigned w, unsigned stride) {
    auto& shard = shards[w];
    for (std::size_t i = w; i < a.systems.size(); i += stride) {
      const auto m1 = multiplicities(a.systems[i], group.order());
      for (std::size_t j = 0; j < b.systems.size(); ++j) {
        std::vector<Element> common;
        std::set_intersection(a.sigmas[i].begin(), a.sigmas[i].end(), b.sigmas[j].begin(), b.sigmas[j].end(),
                              std::back_inserter(common));
        if (common.size() != 1) continue;
        ++shard.pairs;
        shard.keys.insert(abelian_pair_key(m1, multiplicities(b.systems[j], group.order()), auts, swap));
      }
    }
  });
  return merge_shards(shards, std::move(result), options.keep_keys);
}

/// General path: partition all ordered systems of each type into Hurwitz orbits, then
/// minimize pairs of orbit representatives over Aut(G).
inline ComponentCount count_by_orbits(const FiniteGroup& group, const Type& tau1, const Type& tau2,
                                      const CountOptions& options, bool swap) {
  ComponentCount result;
  result.method = "hurwitz orbits of ordered tuples";
  const auto auts = automorphisms(group, options.caps);

  struct Side {
    std::unordered_map<std::vector<Element>, std::uint32_t, TupleHash> orbit_of;
    std::vector<std::vector<Element>> reps;
    std::vector<std::vector<Element>> sigmas;
  };
  auto collect = [&](const Type& tau, Side& side) {
    EnumerationBudget budget;
    budget.max_nodes = options.max_orbit_nodes * 64;
    std::vector<std::vector<Element>> tuples;
    for_each_spherical_system(
        group, tau, EnumerationMode::ordered,
        [&](std::span<const Element> entries) {
          tuples.emplace_back(entries.begin(), entries.end());
          return tuples.size() <= options.max_orbit_nodes;
        },
        budget);
    require(tuples.size() <= options.max_orbit_nodes, ErrorCode::budget,
            "more than " + std::to_string(options.max_orbit_nodes) + " ordered systems of type (" + tau.render() + ")");
    for (const auto& tuple : tuples) {
      if (side.orbit_of.count(tuple)) continue;
      const auto orbit = hurwitz_orbit_of(group, tuple, options.max_orbit_nodes, options.identify_inner);
      require(orbit.complete, ErrorCode::budget, "Hurwitz orbit exceeded the node budget");
      const auto id = static_cast<std::uint32_t>(side.reps.size());
      for (const auto& member : orbit.members) side.orbit_of.emplace(member, id);
      side.reps.push_back(orbit.members.front());
      side.sigmas.push_back(SphericalSystem::compute_sigma(group, orbit.members.front()));
    }
  };
  Side a, b;
  collect(tau1, a);
  collect(tau2, b);

  std::vector<ShardResult> shards(std::max(1u, options.workers));
  run_sharded(options.workers, [&](unsigned w, unsigned stride) {
    auto& shard = shards[w];
    for (std::size_t i = w; i < a.reps.size(); i += stride) {
      for (std::size_t j = 0; j < b.reps.size(); ++j) {
        std::vector<Element> common;
        std::set_intersection(a.sigmas[i].begin(), a.sigmas[i].end(), b.sigmas[j].begin(), b.sigmas[j].end(),
                              std::back_inserter(common));
        if (common.size() != 1) continue;
        ++shard.pairs;
        std::vector<Element> best1, best2;
        auto consider = [&](std::vector<Element> x, std::vector<Element> y) {
          if (best1.empty() || std::tie(x, y) < std::tie(best1, best2)) {
            best1 = std::move(x);
            best2 = std::move(y);
          }
        };
        for (const auto& phi : auts) {
          // Both types are stable under automorphisms, so images stay inside each side's index.
          const auto& x = a.reps[a.orbit_of.at(apply_automorphism(phi, a.reps[i]))];
          const auto& y = b.reps[b.orbit_of.at(apply_automorphism(phi, b.reps[j]))];
          consider(x, y);
          if (swap) consider(y, x);
        }
        shard.keys.insert(make_key(best1, best2));
      }
    }
  });
  return merge_shards(shards, std::move(result), options.keep_keys);
}

}  // namespace detail

/// Number of classes of ramification structures of type (tau1, tau2) on G under simultaneous
/// Aut(G) and separate Hurwitz equivalence. When tau1 == tau2 the factor swap is identified
/// unless count_ordered_pairs is set.
inline ComponentCount count_components(const FiniteGroup& group, const Type& tau1, const Type& tau2,
                                       const CountOptions& options = {}) {
  const bool swap = !options.count_ordered_pairs && tau1 == tau2;
  ComponentCount result;
  auto finish = [&](ComponentCount r) {
    r.swap_identified = swap;
    r.inner_identified = options.identify_inner && !group.is_abelian();
    return r;
  };
  try {
    check_ramification_types(BigInt(group.order()), tau1, tau2);
  } catch (const Error& e) {
    result.method = "type check";
    result.note = e.what();
    return finish(result);
  }
  if (!detail::type_realizable_orders(group, tau1) || !detail::type_realizable_orders(group, tau2)) {
    result.method = "type check";
    result.note = "the group has no elements of some order in the type";
    return finish(result);
  }
  if (options.force_orbit_path || !group.is_abelian())
    return finish(detail::count_by_orbits(group, tau1, tau2, options, swap));
  if (group.is_elementary_abelian())
    return finish(detail::count_elementary_abelian(group, tau1, tau2, options, swap));
  return finish(detail::count_abelian_table(group, tau1, tau2, options, swap));
}

}  // namespace zariski
