#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "zariski/error.hpp"
#include "zariski/group.hpp"
#include "zariski/hurwitz.hpp"
#include "zariski/invariants.hpp"
#include "zariski/numeric.hpp"
#include "zariski/spherical.hpp"

namespace zariski {

/// Parameters of the (Z/2Z)^k family with types (2^{k(k+1)}, 2^{4+2^{l-k+1}}).
struct FamilyParams {
  unsigned k = 0;
  unsigned l = 0;
  Type tau1;
  Type tau2;
  BigInt order;  // 2^k
  BigInt chi;    // 2^{l-3} (k^2 + k - 4)
  BigInt g1;
  BigInt g2;
  Rational epsilon;  // l = (2 + epsilon) k unless overridden

  friend bool operator==(const FamilyParams&, const FamilyParams&) = default;
};

inline FamilyParams family_params(unsigned k, unsigned l, std::optional<Rational> epsilon_override = std::nullopt) {
  require(k >= 2, ErrorCode::constraint, "k must be at least 2 (got " + std::to_string(k) + ")");
  require(l > 2 * k, ErrorCode::constraint,
          "l must exceed 2k (got k = " + std::to_string(k) + ", l = " + std::to_string(l) + ")");
  require(k <= FiniteGroup::max_rank, ErrorCode::constraint, "k must be at most 30");
  require(l - k + 1 <= 62, ErrorCode::constraint, "l - k + 1 must be at most 62 so that tau2 has a 64-bit length");

  FamilyParams p;
  p.k = k;
  p.l = l;
  p.tau1 = Type::power(2, std::uint64_t{k} * (k + 1));
  p.tau2 = Type::power(2, 4 + (std::uint64_t{1} << (l - k + 1)));
  p.order = pow2(k);
  const BigInt kk = BigInt(k) * k + k - 4;
  p.chi = pow2(l - 3) * kk;
  if (epsilon_override) {
    require(*epsilon_override > 0, ErrorCode::constraint, "epsilon must be positive");
    p.epsilon = *epsilon_override;
  } else {
    p.epsilon = Rational(BigInt(l), BigInt(k)) - 2;
  }

  const Genera genera = check_ramification_types(p.order, p.tau1, p.tau2);
  p.g1 = genera.g1;
  p.g2 = genera.g2;
  require(p.g1 - 1 == pow2(k - 2) * kk, ErrorCode::internal, "g1 - 1 != 2^{k-2}(k^2+k-4)");
  require(p.g2 - 1 == pow2(l - 1), ErrorCode::internal, "g2 - 1 != 2^{l-1}");
  require((p.g1 - 1) * (p.g2 - 1) == p.chi * p.order, ErrorCode::internal, "(g1-1)(g2-1)/2^k != chi");
  return p;
}

struct FamilyCount {
  std::optional<std::uint64_t> h;  // exact count, or a lower bound when budget-limited
  Completeness completeness = Completeness::formula_only;
  std::string note;
};

/// Exact class count at desk scale through the multiset-pair counter; degrades to a
/// formula-only answer when Aut(G) is beyond the enumeration cap.
inline FamilyCount family_component_count(const FamilyParams& params, const CountOptions& options = {}) {
  FamilyCount out;
  if (params.k > options.caps.max_rank) {
    out.note = "Aut((Z/2Z)^" + std::to_string(params.k) + ") exceeds the enumeration cap; only the asymptotic lower "
               "bound applies";
    return out;
  }
  const auto group = FiniteGroup::elementary_abelian(params.k);
  CountOptions local = options;
  local.keep_keys = false;
  const auto count = count_components(group, params.tau1, params.tau2, local);
  out.h = count.h;
  out.completeness = count.completeness;
  if (count.completeness == Completeness::budget_limited)
    out.note = "pair budget exhausted; h is a lower bound";
  else if (!count.note.empty())
    out.note = count.note;
  return out;
}

enum class WitnessStatus { found, not_found, skipped };

inline std::string to_string(WitnessStatus s) {
  switch (s) {
    case WitnessStatus::found: return "found";
    case WitnessStatus::not_found: return "not found";
    case WitnessStatus::skipped: return "not searched (budget)";
  }
  return "unknown";
}

struct FamilyWitness {
  WitnessStatus status = WitnessStatus::not_found;
  std::optional<RamificationStructure> structure;
};

/// Looks for one explicit structure of the family type: T1 supported on the standard basis,
/// T2 on a second basis avoiding it, every multiplicity even (so both products vanish).
inline FamilyWitness find_family_witness(const FamilyParams& params, std::uint64_t max_entries = 1u << 20) {
  FamilyWitness out;
  const std::uint64_t r1 = params.tau1.length(), r2 = params.tau2.length();
  if (params.k > 20 || r1 + r2 > max_entries) {
    out.status = WitnessStatus::skipped;
    return out;
  }
  const unsigned k = params.k;
  const std::uint32_t n = 1u << k;
  std::vector<Element> first, second;
  for (unsigned i = 0; i < k; ++i) first.push_back(Element{1u << i});

  std::function<bool(std::uint32_t)> search = [&](std::uint32_t from) {
    if (second.size() == k) return FiniteGroup::f2_rank(second) == k;
    for (std::uint32_t v = from; v < n; ++v) {
      if (std::popcount(v) < 2) continue;
      second.push_back(Element{v});
      if (FiniteGroup::f2_rank(second) == second.size() && search(v + 1)) return true;
      second.pop_back();
    }
    return false;
  };
  if (!search(1)) return out;

  auto spread = [](const std::vector<Element>& support, std::uint64_t r) {
    std::vector<Element> entries;
    entries.reserve(r);
    entries.insert(entries.end(), r - 2 * (support.size() - 1), support.front());
    for (std::size_t i = 1; i < support.size(); ++i) entries.insert(entries.end(), 2, support[i]);
    return entries;
  };
  auto group = std::make_shared<const FiniteGroup>(FiniteGroup::elementary_abelian(k));
  out.structure.emplace(SphericalSystem(group, spread(first, r1)), SphericalSystem(group, spread(second, r2)));
  out.status = WitnessStatus::found;
  return out;
}

struct MultipletReport {
  FamilyParams params;
  FamilyCount count;
  SurfaceInvariants invariants;
  BranchCurveInvariants curve;  // m = 2
  Rational chisini_threshold;
  bool chisini_ok = false;
  Plurigenus plurigenus;
  BoundReport bounds;
  WitnessStatus witness = WitnessStatus::not_found;
  bool very_ampleness_assumed = true;
};

inline MultipletReport multiplet_report(unsigned k, unsigned l, std::optional<Rational> epsilon_override = std::nullopt,
                                        const CountOptions& options = {}) {
  MultipletReport report;
  report.params = family_params(k, l, epsilon_override);
  const auto& p = report.params;
  report.invariants = surface_invariants(p.order, p.tau1, p.tau2);
  require(report.invariants.chi == p.chi, ErrorCode::internal, "family chi disagrees with the surface invariants");
  report.curve = branch_curve_invariants(report.invariants.ksq, report.invariants.e, 2);
  require(report.curve.d == 14 * report.invariants.ksq, ErrorCode::internal, "d != 14 K^2");
  report.chisini_threshold = chisini_threshold(report.curve.d, report.curve.g, report.curve.c);
  report.chisini_ok = chisini_ok(report.curve.nu, report.curve.d, report.curve.g, report.curve.c);
  report.plurigenus = plurigenus_dimension(report.invariants.chi, report.invariants.ksq, 2);
  report.bounds = multiplet_bounds(report.invariants.ksq, report.invariants.chi, p.epsilon);
  require(report.bounds.n_d == report.curve.n && report.bounds.c_d == report.curve.c, ErrorCode::internal,
          "degree-only node/cusp counts disagree with the Chern computation");
  report.count = family_component_count(p, options);
  report.witness = find_family_witness(p, std::max<std::uint64_t>(options.max_orbit_nodes, 1)).status;
  return report;
}

}  // namespace zariski
