#pragma once

#include <cmath>
#include <optional>
#include <string>

#include "zariski/error.hpp"
#include "zariski/numeric.hpp"
#include "zariski/spherical.hpp"

namespace zariski {

/// Chern data of a regular surface isogenous to a product (C1 x C2)/G of unmixed type.
struct SurfaceInvariants {
  BigInt chi;    // holomorphic Euler characteristic
  BigInt e;      // topological Euler number, = c2
  BigInt ksq;    // K^2 = c1^2
  BigInt g1, g2;
  BigInt q = 0;  // irregularity; always 0 here
  BigInt order;  // |G|

  friend bool operator==(const SurfaceInvariants&, const SurfaceInvariants&) = default;
};

/// Invariants from the group order and the two types. chi is computed twice, from the genera
/// ((g1-1)(g2-1)/|G|) and directly from the types (4 chi = |G| A1 A2 with
/// A_i = -2 + sum (1 - 1/m)); any disagreement is a hard failure.
inline SurfaceInvariants surface_invariants(const BigInt& order, const Type& tau1, const Type& tau2) {
  const Genera genera = check_ramification_types(order, tau1, tau2);
  const Rational via_genera = Rational((genera.g1 - 1) * (genera.g2 - 1)) / Rational(order);

  auto orbifold_term = [](const Type& tau) {
    Rational sum = -2;
    for (const auto& run : tau.runs())
      sum += Rational(BigInt(run.count)) * (Rational(1) - Rational(1, BigInt(run.order)));
    return sum;
  };
  const Rational via_types = Rational(order) * orbifold_term(tau1) * orbifold_term(tau2) / 4;

  require(via_genera == via_types, ErrorCode::internal,
          "chi mismatch: " + rational_string(via_genera) + " via genera vs " + rational_string(via_types) +
              " via types");
  require(is_integer(via_genera) && via_genera > 0, ErrorCode::internal,
          "chi = " + rational_string(via_genera) + " is not a positive integer");

  SurfaceInvariants inv;
  inv.chi = to_integer(via_genera);
  inv.e = 4 * inv.chi;
  inv.ksq = 8 * inv.chi;
  inv.g1 = genera.g1;
  inv.g2 = genera.g2;
  inv.q = 0;
  inv.order = order;
  return inv;
}

inline SurfaceInvariants surface_invariants(const RamificationStructure& structure) {
  return surface_invariants(BigInt(structure.group().order()), structure.t1().type(), structure.t2().type());
}

/// Degree, singularities and genus of the branch curve of a generic projection of the
/// m-canonical image of a surface to the plane.
struct BranchCurveInvariants {
  BigInt m;
  BigInt nu;       // degree of the covering S -> P^2
  BigInt d;        // degree of the branch curve B
  BigInt n;        // nodes
  BigInt c;        // cusps
  BigInt g;        // geometric genus of B (= genus of the ramification curve R)
  BigInt euler_r;  // topological Euler number of R

  friend bool operator==(const BranchCurveInvariants&, const BranchCurveInvariants&) = default;
};

/// With L in |mK| the preimage of a generic line and R the ramification curve:
///   nu = L^2 = m^2 K^2
///   e(L) = -L(L+K) = -m(m+1) K^2 and Riemann-Hurwitz on L -> line gives e(L) = 2 nu - d,
///     so d = (3m^2 + m) K^2
///   K = -3L + R, so R = (3m+1) K and e(R) = -R(R+K) = -(3m+1)(3m+2) K^2
///   counting fibres of S -> P^2 against R -> B: c2 + e(R) = 3 nu - c,
///     so c = (12m^2 + 9m + 2) K^2 - c2
///   normalization R -> B: e(R) = d(3-d) + 2n + 2c
/// At m = 2 this is d = 14K^2, c = 68K^2 - c2, n = 98(K^2)^2 - 117K^2 + c2, e(R) = -56K^2.
inline BranchCurveInvariants branch_curve_invariants(const BigInt& ksq, const BigInt& c2, const BigInt& m) {
  require(ksq > 0, ErrorCode::invalid_chern_input, "K^2 must be positive");
  require(m >= 2, ErrorCode::invalid_chern_input, "m must be at least 2");
  BranchCurveInvariants out;
  out.m = m;
  out.nu = m * m * ksq;
  out.d = (3 * m * m + m) * ksq;
  out.euler_r = -(3 * m + 1) * (3 * m + 2) * ksq;
  out.c = (12 * m * m + 9 * m + 2) * ksq - c2;
  const BigInt twice_n = out.euler_r + out.d * out.d - 3 * out.d - 2 * out.c;
  require(twice_n % 2 == 0, ErrorCode::invalid_chern_input,
          "Chern numbers K^2 = " + ksq.str() + ", c2 = " + c2.str() + " give a non-integral node count");
  out.n = twice_n / 2;
  require(out.c >= 0 && out.n >= 0, ErrorCode::invalid_chern_input,
          "Chern numbers give a negative node or cusp count");
  out.g = 1 - out.euler_r / 2;
  return out;
}

/// Degree-only node/cusp counts n_d = d^2/2 - (233/28) d, c_d = (135/28) d; d must be a multiple of 28.
struct NodeCuspCounts {
  BigInt nodes;
  BigInt cusps;
  friend bool operator==(const NodeCuspCounts&, const NodeCuspCounts&) = default;
};

inline NodeCuspCounts main_theorem_counts(const BigInt& d) {
  require(d > 0 && d % 28 == 0, ErrorCode::non_admissible_degree,
          "degree " + d.str() + " is not a positive multiple of 28");
  const BigInt j = d / 28;
  // d^2/2 - 233 d/28 = 392 j^2 - 233 j; 135 d/28 = 135 j
  return NodeCuspCounts{392 * j * j - 233 * j, 135 * j};
}

/// Threshold 4(3d+g-1) / (2(3d+g-1) - c) that the covering degree has to exceed.
inline Rational chisini_threshold(const BigInt& d, const BigInt& g, const BigInt& c) {
  const BigInt base = 3 * d + g - 1;
  const BigInt denominator = 2 * base - c;
  require(denominator > 0, ErrorCode::threshold_undefined,
          "2(3d+g-1) - c = " + denominator.str() + " is not positive");
  return Rational(4 * base, denominator);
}

inline bool chisini_ok(const BigInt& nu, const BigInt& d, const BigInt& g, const BigInt& c) {
  return Rational(nu) > chisini_threshold(d, g, c);
}

/// Log-scale bounds on the multiplet cardinality. Real values carry 12 significant digits.
struct BoundReport {
  BigInt d;
  std::optional<BigInt> n_d;  // empty when d is not a multiple of 28
  std::optional<BigInt> c_d;
  Rational epsilon;
  double log2_lower_thm_main = 0;   // ((8/14) d)^{1/(2+eps)}
  double log2_lower_eq15 = 0;       // chi^{1/(2+eps)}
  double log2_upper_catanese = 0;   // 77 K^4 log2(K^2)

  friend bool operator==(const BoundReport&, const BoundReport&) = default;
};

inline BoundReport multiplet_bounds(const BigInt& ksq, const BigInt& chi, const Rational& epsilon) {
  require(epsilon > 0, ErrorCode::usage, "epsilon must be positive");
  require(ksq > 0 && chi > 0, ErrorCode::usage, "K^2 and chi must be positive");
  BoundReport out;
  out.d = 14 * ksq;
  out.epsilon = epsilon;
  if (out.d % 28 == 0) {
    const auto counts = main_theorem_counts(out.d);
    out.n_d = counts.nodes;
    out.c_d = counts.cusps;
  }
  const long double exponent = 1.0L / (2.0L + to_long_double(epsilon));
  // (8/14) d = 8 K^2; exponentiate in log space
  const BigInt scaled = 8 * ksq;
  out.log2_lower_thm_main = round_significant(std::exp2(log2_big(scaled) * exponent));
  out.log2_lower_eq15 = round_significant(std::exp2(log2_big(chi) * exponent));
  const long double ksq_ld = ksq.convert_to<long double>();
  out.log2_upper_catanese = round_significant(77.0L * ksq_ld * ksq_ld * log2_big(ksq));
  return out;
}

/// P_m = chi + m(m-1)/2 K^2; the m-canonical map lands in P^{P_m - 1}.
struct Plurigenus {
  BigInt p_m;
  BigInt ambient_dimension;
};

inline Plurigenus plurigenus_dimension(const BigInt& chi, const BigInt& ksq, const BigInt& m) {
  require(m >= 2, ErrorCode::usage, "plurigenus formula needs m >= 2");
  Plurigenus out;
  out.p_m = chi + m * (m - 1) / 2 * ksq;
  out.ambient_dimension = out.p_m - 1;
  return out;
}

}  // namespace zariski
