#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "zariski/error.hpp"
#include "zariski/group.hpp"
#include "zariski/numeric.hpp"

namespace zariski {

/// Unordered type tau = (m_1, ..., m_r), stored run-length encoded as (order, count) pairs
/// sorted by order. Run-length storage lets the family types (2^{4+2^{l-k+1}}) exist
/// without materializing their entries.
class Type {
 public:
  struct Run {
    std::uint32_t order = 2;
    std::uint64_t count = 0;
    friend auto operator<=>(const Run&, const Run&) = default;
  };

  Type() = default;

  explicit Type(std::vector<Run> runs) {
    for (const auto& run : runs) add(run.order, run.count);
  }

  static Type from_orders(std::span<const std::uint32_t> orders) {
    Type type;
    for (auto m : orders) type.add(m, 1);
    return type;
  }

  /// The power type (m^count).
  static Type power(std::uint32_t order, std::uint64_t count) {
    Type type;
    type.add(order, count);
    return type;
  }

  /// Parses "2^6", "2^4,3^2", "2,2,3" or "(2^4,3^2)".
  static Type parse(const std::string& text) {
    std::string body;
    for (char c : text)
      if (c != ' ' && c != '(' && c != ')') body.push_back(c);
    require(!body.empty(), ErrorCode::parse, "empty type string");
    Type type;
    std::size_t start = 0;
    while (start <= body.size()) {
      const std::size_t comma = body.find(',', start);
      const std::string factor =
          body.substr(start, comma == std::string::npos ? std::string::npos : comma - start);
      const std::size_t caret = factor.find('^');
      const std::string base = factor.substr(0, caret);
      const std::string exponent = caret == std::string::npos ? "1" : factor.substr(caret + 1);
      const auto m = parse_unsigned(base, text);
      const auto e = parse_unsigned(exponent, text);
      require(m >= 2, ErrorCode::parse, "type '" + text + "': orders must be at least 2");
      require(m <= 0xffffffffull, ErrorCode::parse, "type '" + text + "': order too large");
      require(e >= 1, ErrorCode::parse, "type '" + text + "': exponents must be positive");
      type.add(static_cast<std::uint32_t>(m), e);
      if (comma == std::string::npos) break;
      start = comma + 1;
    }
    return type;
  }

  const std::vector<Run>& runs() const noexcept { return runs_; }
  bool empty() const noexcept { return runs_.empty(); }

  /// Number of entries r.
  std::uint64_t length() const noexcept {
    std::uint64_t total = 0;
    for (const auto& run : runs_) total += run.count;
    return total;
  }

  /// Non-decreasing sequence of orders; refuses to materialize beyond `cap` entries.
  std::vector<std::uint32_t> expand(std::uint64_t cap = 1u << 24) const {
    require(length() <= cap, ErrorCode::capacity,
            "type of length " + std::to_string(length()) + " is too long to materialize");
    std::vector<std::uint32_t> out;
    out.reserve(length());
    for (const auto& run : runs_) out.insert(out.end(), run.count, run.order);
    return out;
  }

  /// Shorthand with exponents, e.g. "2^4,3^2"; parse(render()) round-trips.
  std::string render() const {
    std::string out;
    for (const auto& run : runs_) {
      if (!out.empty()) out += ",";
      out += std::to_string(run.order);
      if (run.count != 1) out += "^" + std::to_string(run.count);
    }
    return out;
  }

  bool all_orders_are(std::uint32_t order) const {
    return std::all_of(runs_.begin(), runs_.end(), [&](const Run& run) { return run.order == order; });
  }

  std::uint64_t count_of(std::uint32_t order) const {
    for (const auto& run : runs_)
      if (run.order == order) return run.count;
    return 0;
  }

  friend bool operator==(const Type&, const Type&) = default;

 private:
  static unsigned long long parse_unsigned(const std::string& digits, const std::string& whole) {
    require(!digits.empty() && digits.size() <= 19 &&
                std::all_of(digits.begin(), digits.end(), [](char c) { return c >= '0' && c <= '9'; }),
            ErrorCode::parse, "cannot parse type '" + whole + "' (expected e.g. 2^6 or 2^4,3^2)");
    return std::stoull(digits);
  }

  void add(std::uint32_t order, std::uint64_t count) {
    if (count == 0) return;
    auto it = std::lower_bound(runs_.begin(), runs_.end(), order,
                               [](const Run& run, std::uint32_t m) { return run.order < m; });
    if (it != runs_.end() && it->order == order)
      it->count += count;
    else
      runs_.insert(it, Run{order, count});
  }

  std::vector<Run> runs_;
};

/// Exact genus g with 2g - 2 = order * (-2 + sum (1 - 1/m_i)). Non-integral results are
/// returned as-is; they signal that no such action exists.
inline Rational genus_from_type(const BigInt& order, const Type& tau) {
  require(order >= 1, ErrorCode::usage, "group order must be positive");
  Rational sum = -2;
  for (const auto& run : tau.runs()) {
    require(run.order >= 2, ErrorCode::usage, "type orders must be at least 2");
    sum += Rational(BigInt(run.count)) * (Rational(1) - Rational(1, BigInt(run.order)));
  }
  return Rational(1) + Rational(order) * sum / 2;
}

/// An ordered generating tuple of G with product one, with its cached type and Sigma-set.
class SphericalSystem {
 public:
  SphericalSystem(std::shared_ptr<const FiniteGroup> group, std::vector<Element> entries)
      : group_(std::move(group)), entries_(std::move(entries)) {
    require(group_ != nullptr, ErrorCode::usage, "spherical system needs a group");
    require(entries_.size() >= 2, ErrorCode::usage, "spherical system needs at least 2 entries");
    Element product = group_->identity();
    for (Element v : entries_) product = group_->mul(product, v);
    require(product == group_->identity(), ErrorCode::product_not_identity,
            "entries multiply to " + group_->element_name(product) + ", not the identity");
    require(group_->generates(entries_), ErrorCode::not_generating,
            "entries do not generate " + group_->describe());
    std::vector<std::uint32_t> orders;
    orders.reserve(entries_.size());
    for (Element v : entries_) orders.push_back(group_->element_order(v));
    type_ = Type::from_orders(orders);
    sigma_ = compute_sigma(*group_, entries_);
  }

  const FiniteGroup& group() const noexcept { return *group_; }
  const std::shared_ptr<const FiniteGroup>& group_ptr() const noexcept { return group_; }
  const std::vector<Element>& entries() const noexcept { return entries_; }
  std::size_t size() const noexcept { return entries_.size(); }
  const Type& type() const noexcept { return type_; }
  /// Sorted Sigma-set (always contains the identity).
  const std::vector<Element>& sigma() const noexcept { return sigma_; }

  bool sigma_contains(Element g) const {
    return std::binary_search(sigma_.begin(), sigma_.end(), g);
  }

  bool same_group(const SphericalSystem& other) const {
    return group_ == other.group_ || *group_ == *other.group_;
  }

  /// Union over entries of all conjugates of all powers, identity included.
  static std::vector<Element> compute_sigma(const FiniteGroup& group, std::span<const Element> entries) {
    if (group.is_elementary_abelian()) {
      std::vector<Element> out(entries.begin(), entries.end());
      out.push_back(group.identity());
      std::sort(out.begin(), out.end());
      out.erase(std::unique(out.begin(), out.end()), out.end());
      return out;
    }
    std::vector<bool> member(group.order(), false);
    member[0] = true;
    for (Element v : entries) {
      Element power = v;
      while (power != group.identity()) {
        if (!member[power.id]) {
          if (group.is_abelian()) {
            member[power.id] = true;
          } else {
            for (std::uint32_t g = 0; g < group.order(); ++g)
              member[group.conjugate(power, Element{g}).id] = true;
          }
        }
        power = group.mul(power, v);
      }
    }
    std::vector<Element> out;
    for (std::uint32_t id = 0; id < group.order(); ++id)
      if (member[id]) out.push_back(Element{id});
    return out;
  }

  friend bool operator==(const SphericalSystem& a, const SphericalSystem& b) {
    return a.same_group(b) && a.entries_ == b.entries_;
  }

 private:
  std::shared_ptr<const FiniteGroup> group_;
  std::vector<Element> entries_;
  Type type_;
  std::vector<Element> sigma_;
};

inline SphericalSystem make_spherical_system(std::shared_ptr<const FiniteGroup> group,
                                             std::vector<Element> entries) {
  return SphericalSystem(std::move(group), std::move(entries));
}

inline SphericalSystem make_spherical_system(const FiniteGroup& group, std::vector<Element> entries) {
  return SphericalSystem(std::make_shared<const FiniteGroup>(group), std::move(entries));
}

inline const Type& unordered_type(const SphericalSystem& system) { return system.type(); }
inline const std::vector<Element>& sigma_set(const SphericalSystem& system) { return system.sigma(); }

/// Sigma(T1) and Sigma(T2) meet only in the identity.
inline bool disjoint(const SphericalSystem& t1, const SphericalSystem& t2) {
  require(t1.same_group(t2), ErrorCode::usage, "disjoint: systems live in different groups");
  const auto& a = t1.sigma();
  const auto& b = t2.sigma();
  std::size_t i = 0, j = 0, common = 0;
  while (i < a.size() && j < b.size()) {
    if (a[i] < b[j]) {
      ++i;
    } else if (b[j] < a[i]) {
      ++j;
    } else {
      ++common;
      ++i;
      ++j;
    }
  }
  return common == 1;
}

struct Genera {
  BigInt g1;
  BigInt g2;
};

/// Type-level conditions of a ramification structure: r_i >= 3 and integral genera >= 2.
inline Genera check_ramification_types(const BigInt& order, const Type& tau1, const Type& tau2) {
  BigInt genera[2];
  const Type* types[2] = {&tau1, &tau2};
  for (int side = 0; side < 2; ++side) {
    const auto& tau = *types[side];
    const std::string label = "tau" + std::to_string(side + 1) + " = (" + tau.render() + ")";
    require(tau.length() >= 3, ErrorCode::too_few_branch_points,
            label + " has fewer than 3 entries; ramification structures need r >= 3");
    const Rational g = genus_from_type(order, tau);
    require(is_integer(g), ErrorCode::genus_not_integral,
            label + " gives non-integral genus " + rational_string(g));
    require(g >= 2, ErrorCode::genus_below_two, label + " gives genus " + rational_string(g) + " < 2");
    genera[side] = to_integer(g);
  }
  return Genera{genera[0], genera[1]};
}

/// A validated pair of disjoint spherical systems with both covering genera >= 2.
class RamificationStructure {
 public:
  RamificationStructure(SphericalSystem t1, SphericalSystem t2) : t1_(std::move(t1)), t2_(std::move(t2)) {
    require(t1_.same_group(t2_), ErrorCode::usage, "ramification structure: systems live in different groups");
    require(t1_.size() >= 3 && t2_.size() >= 3, ErrorCode::too_few_branch_points,
            "ramification structures need at least 3 entries on each side");
    require(disjoint(t1_, t2_), ErrorCode::not_disjoint, "Sigma(T1) and Sigma(T2) share a non-identity element");
    genera_ = check_ramification_types(BigInt(t1_.group().order()), t1_.type(), t2_.type());
  }

  const SphericalSystem& t1() const noexcept { return t1_; }
  const SphericalSystem& t2() const noexcept { return t2_; }
  const FiniteGroup& group() const noexcept { return t1_.group(); }
  const BigInt& g1() const noexcept { return genera_.g1; }
  const BigInt& g2() const noexcept { return genera_.g2; }

 private:
  SphericalSystem t1_;
  SphericalSystem t2_;
  Genera genera_;
};

inline RamificationStructure make_ramification_structure(SphericalSystem t1, SphericalSystem t2) {
  return RamificationStructure(std::move(t1), std::move(t2));
}

// ---------------------------------------------------------------------------
// Enumeration

enum class EnumerationMode { ordered, multiset };

struct EnumerationBudget {
  /// Refuse unpruned ordered search when r * log2|G| exceeds this many bits.
  double max_search_bits = 40.0;
  /// Upper bound on backtracking nodes / emitted candidates.
  std::uint64_t max_nodes = 50'000'000;
};

/// Receives the entries of each system; return false to stop the stream.
using SystemVisitor = std::function<bool(std::span<const Element>)>;

namespace detail {

/// Visits every multiset of r nonzero vectors of F_2^k drawn from `allowed`, with XOR-sum
/// zero and spanning F_2^k. The visitor gets the multiplicity vector (indexed by element id).
/// Construction: choose the support S, the subset P of S carrying odd multiplicities
/// (XOR(P) = 0, |P| = r mod 2), then spread the remaining pairs over S.
/// Returns false if the visitor stopped the stream or the work budget ran out.
inline bool for_each_f2_multiset(unsigned rank, std::uint64_t r, const std::vector<bool>& allowed,
                                 const std::function<bool(const std::vector<std::uint64_t>&)>& visit,
                                 std::uint64_t& work, std::uint64_t max_work) {
  const std::uint32_t n = 1u << rank;
  std::vector<std::uint32_t> pool;
  for (std::uint32_t v = 1; v < n; ++v)
    if (allowed[v]) pool.push_back(v);
  std::vector<std::uint64_t> mult(n, 0);
  std::vector<std::uint32_t> support;
  bool running = true;

  // Spread `pairs` extra pairs over support[index..].
  std::function<void(std::size_t, std::uint64_t)> spread = [&](std::size_t index, std::uint64_t pairs) {
    if (!running) return;
    if (index + 1 == support.size()) {
      mult[support[index]] += 2 * pairs;
      if (++work > max_work)
        running = false;
      else if (!visit(mult))
        running = false;
      mult[support[index]] -= 2 * pairs;
      return;
    }
    for (std::uint64_t take = 0; take <= pairs && running; ++take) {
      mult[support[index]] += 2 * take;
      spread(index + 1, pairs - take);
      mult[support[index]] -= 2 * take;
    }
  };

  auto with_support = [&]() {
    const std::size_t s = support.size();
    const std::vector<Element> as_elements = [&] {
      std::vector<Element> out;
      for (auto v : support) out.push_back(Element{v});
      return out;
    }();
    if (FiniteGroup::f2_rank(as_elements) != rank) return;
    for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << s) && running; ++mask) {
      if ((mask & 0xff) == 0 && ++work > max_work) {
        running = false;
        break;
      }
      std::uint32_t xor_sum = 0;
      std::uint64_t odd = 0;
      for (std::size_t i = 0; i < s; ++i)
        if ((mask >> i) & 1u) {
          xor_sum ^= support[i];
          ++odd;
        }
      if (xor_sum != 0 || odd % 2 != r % 2) continue;
      const std::uint64_t base = odd + 2 * (s - odd);
      if (base > r) continue;
      for (std::size_t i = 0; i < s; ++i) mult[support[i]] = ((mask >> i) & 1u) ? 1 : 2;
      spread(0, (r - base) / 2);
      for (std::size_t i = 0; i < s; ++i) mult[support[i]] = 0;
    }
  };

  std::function<void(std::size_t)> choose = [&](std::size_t from) {
    if (!running) return;
    if (++work > max_work) {
      running = false;
      return;
    }
    if (support.size() >= rank) with_support();
    if (support.size() >= r) return;
    for (std::size_t i = from; i < pool.size() && running; ++i) {
      support.push_back(pool[i]);
      choose(i + 1);
      support.pop_back();
    }
  };
  if (rank >= 1 && r >= rank) choose(0);
  return running;
}

inline std::vector<Element> expand_multiplicities(const std::vector<std::uint64_t>& mult) {
  std::vector<Element> out;
  for (std::uint32_t id = 0; id < mult.size(); ++id) out.insert(out.end(), mult[id], Element{id});
  return out;
}

/// Non-decreasing tuples over an abelian group realizing the type, product one, generating.
inline bool for_each_abelian_multiset(const FiniteGroup& group, const Type& tau, const SystemVisitor& visit,
                                      std::uint64_t& work, std::uint64_t max_work) {
  const auto orders = tau.expand();
  const std::size_t r = orders.size();
  std::map<std::uint32_t, std::uint64_t> remaining;
  for (auto m : orders) ++remaining[m];
  std::vector<Element> tuple;
  Element product = group.identity();
  bool running = true;
  std::function<void(std::uint32_t)> recurse = [&](std::uint32_t min_id) {
    if (!running) return;
    if (++work > max_work) {
      running = false;
      return;
    }
    if (tuple.size() == r) {
      if (product == group.identity() && group.generates(tuple)) running = visit(tuple);
      return;
    }
    for (std::uint32_t id = min_id; id < group.order() && running; ++id) {
      const auto m = group.element_order(Element{id});
      auto it = remaining.find(m);
      if (it == remaining.end() || it->second == 0) continue;
      --it->second;
      const Element saved = product;
      tuple.push_back(Element{id});
      product = group.mul(product, Element{id});
      recurse(id);
      product = saved;
      tuple.pop_back();
      ++it->second;
    }
  };
  recurse(0);
  return running;
}

/// Ordered tuples in lexicographic order of element ids, by backtracking; the last entry is
/// forced to be the inverse of the prefix product.
inline bool for_each_ordered_system(const FiniteGroup& group, const Type& tau, const SystemVisitor& visit,
                                    std::uint64_t& work, std::uint64_t max_work) {
  const auto orders = tau.expand();
  const std::size_t r = orders.size();
  std::map<std::uint32_t, std::uint64_t> remaining;
  for (auto m : orders) ++remaining[m];
  std::vector<Element> tuple(r);
  bool running = true;
  std::function<void(std::size_t, Element)> recurse = [&](std::size_t pos, Element product) {
    if (!running) return;
    if (++work > max_work) {
      running = false;
      return;
    }
    if (pos + 1 == r) {
      const Element last = group.inverse(product);
      auto it = remaining.find(group.element_order(last));
      if (it == remaining.end() || it->second == 0) return;
      tuple[pos] = last;
      if (group.generates(tuple)) running = visit(tuple);
      return;
    }
    for (std::uint32_t id = 0; id < group.order() && running; ++id) {
      auto it = remaining.find(group.element_order(Element{id}));
      if (it == remaining.end() || it->second == 0) continue;
      --it->second;
      tuple[pos] = Element{id};
      recurse(pos + 1, group.mul(product, Element{id}));
      ++it->second;
    }
  };
  if (r >= 1) recurse(0, group.identity());
  return running;
}

inline bool type_realizable_orders(const FiniteGroup& group, const Type& tau) {
  for (const auto& run : tau.runs()) {
    bool found = false;
    for (std::uint32_t id = 1; id < group.order() && !found; ++id)
      found = group.element_order(Element{id}) == run.order;
    if (!found) return false;
  }
  return true;
}

}  // namespace detail

/// Streams every spherical system of the given unordered type. Ordered mode emits each
/// ordered tuple once; multiset mode emits one representative per entry multiset (entries
/// sorted by id for abelian groups, the lexicographically least valid ordering otherwise).
/// Returns the number of systems emitted.
inline std::uint64_t for_each_spherical_system(const FiniteGroup& group, const Type& tau, EnumerationMode mode,
                                               const SystemVisitor& visit, EnumerationBudget budget = {}) {
  require(tau.length() >= 2, ErrorCode::usage, "types need at least 2 entries");
  if (!detail::type_realizable_orders(group, tau)) return 0;
  const std::uint64_t r = tau.length();
  const bool abelian_path = group.is_abelian();
  if (!abelian_path) {
    const double bits = static_cast<double>(r) * std::log2(static_cast<double>(group.order()));
    require(bits <= budget.max_search_bits, ErrorCode::budget,
            "raw search space of " + std::to_string(static_cast<int>(bits)) + " bits exceeds the budget of " +
                std::to_string(static_cast<int>(budget.max_search_bits)) + " bits");
  }

  std::uint64_t emitted = 0;
  std::uint64_t work = 0;
  bool stopped = false;
  auto emit = [&](std::span<const Element> entries) {
    ++emitted;
    if (!visit(entries)) {
      stopped = true;
      return false;
    }
    return true;
  };
  // Abelian multiset streams; ordered mode expands each multiset into its distinct orderings.
  auto emit_multiset = [&](std::span<const Element> sorted) {
    if (mode == EnumerationMode::multiset) return emit(sorted);
    std::vector<Element> perm(sorted.begin(), sorted.end());
    do {
      if (!emit(perm)) return false;
    } while (std::next_permutation(perm.begin(), perm.end()));
    return true;
  };

  bool complete = true;
  if (abelian_path && group.is_elementary_abelian()) {
    if (!tau.all_orders_are(2)) return 0;
    std::vector<bool> allowed(group.order(), true);
    complete = detail::for_each_f2_multiset(
        group.rank(), r, allowed,
        [&](const std::vector<std::uint64_t>& mult) { return emit_multiset(detail::expand_multiplicities(mult)); },
        work, budget.max_nodes);
  } else if (abelian_path) {
    complete = detail::for_each_abelian_multiset(group, tau, emit_multiset, work, budget.max_nodes);
  } else if (mode == EnumerationMode::ordered) {
    complete = detail::for_each_ordered_system(group, tau, emit, work, budget.max_nodes);
  } else {
    std::vector<std::vector<Element>> seen;
    complete = detail::for_each_ordered_system(
        group, tau,
        [&](std::span<const Element> entries) {
          std::vector<Element> key(entries.begin(), entries.end());
          std::sort(key.begin(), key.end());
          auto it = std::lower_bound(seen.begin(), seen.end(), key);
          if (it != seen.end() && *it == key) return true;
          seen.insert(it, key);
          return emit(entries);
        },
        work, budget.max_nodes);
  }
  if (!complete && !stopped)
    fail(ErrorCode::budget, "enumeration budget of " + std::to_string(budget.max_nodes) + " nodes exhausted");
  return emitted;
}

inline std::vector<SphericalSystem> enumerate_spherical_systems(std::shared_ptr<const FiniteGroup> group,
                                                                const Type& tau, EnumerationMode mode,
                                                                EnumerationBudget budget = {}) {
  std::vector<SphericalSystem> out;
  for_each_spherical_system(
      *group, tau, mode,
      [&](std::span<const Element> entries) {
        out.emplace_back(group, std::vector<Element>(entries.begin(), entries.end()));
        return true;
      },
      budget);
  return out;
}

}  // namespace zariski
