#include <optional>
#include <random>
#include <set>

#include <gtest/gtest.h>

#include "oracles.hpp"
#include "zariski/automorphism.hpp"
#include "zariski/hurwitz.hpp"

using namespace zariski;

namespace {

std::vector<std::uint32_t> orders_of(const char* tau) { return Type::parse(tau).expand(); }

std::vector<Element> random_system(const FiniteGroup& g, const Type& tau, std::mt19937& rng) {
  std::vector<std::vector<Element>> all;
  for_each_spherical_system(g, tau, EnumerationMode::ordered, [&](std::span<const Element> e) {
    all.emplace_back(e.begin(), e.end());
    return all.size() < 5000;
  });
  return all.at(rng() % all.size());
}

std::multiset<std::uint32_t> class_multiset(const FiniteGroup& g, const std::vector<Element>& t) {
  std::multiset<std::uint32_t> out;
  for (auto e : t) out.insert(g.conjugacy_class(e));
  return out;
}

std::uint64_t count(const FiniteGroup& g, const char* t1, const char* t2, CountOptions options = {}) {
  const auto result = count_components(g, Type::parse(t1), Type::parse(t2), options);
  EXPECT_EQ(result.completeness, Completeness::exact);
  return result.h;
}

}  // namespace

TEST(HurwitzMove, ForwardAndInverseAreMutuallyInverse) {
  std::mt19937 rng(3);
  for (const auto& g : {groups::symmetric3(), groups::dihedral(4), groups::quaternion8()}) {
    for (int trial = 0; trial < 500; ++trial) {
      std::vector<Element> t(4);
      for (auto& e : t) e = Element{static_cast<std::uint32_t>(rng() % g.order())};
      const auto original = t;
      const std::size_t i = rng() % 3;
      apply_hurwitz_move(g, t, i, MoveDirection::forward);
      apply_hurwitz_move(g, t, i, MoveDirection::inverse);
      EXPECT_EQ(t, original);
      apply_hurwitz_move(g, t, i, MoveDirection::inverse);
      apply_hurwitz_move(g, t, i, MoveDirection::forward);
      EXPECT_EQ(t, original);
    }
  }
}

TEST(HurwitzMove, ExplicitFormula) {
  const auto s3 = groups::symmetric3();
  for (auto a : s3.elements())
    for (auto b : s3.elements()) {
      std::vector<Element> t{a, b};
      apply_hurwitz_move(s3, t, 0, MoveDirection::forward);
      EXPECT_EQ(t[0], b);
      EXPECT_EQ(t[1], s3.mul(s3.mul(s3.inverse(b), a), b));
    }
}

TEST(HurwitzMove, ConservesSystemData) {
  std::mt19937 rng(5);
  struct Case {
    FiniteGroup group;
    const char* tau;
  };
  const std::vector<Case> cases{{FiniteGroup::elementary_abelian(3), "2^6"},
                                {groups::symmetric3(), "2^4"},
                                {groups::dihedral(4), "2^5"},
                                {groups::quaternion8(), "4^4"}};
  for (const auto& c : cases) {
    auto group = std::make_shared<const FiniteGroup>(c.group);
    SphericalSystem system(group, random_system(c.group, Type::parse(c.tau), rng));
    const auto classes = class_multiset(c.group, system.entries());
    const auto sigma = system.sigma();
    for (int step = 0; step < 500; ++step) {
      const auto dir = rng() % 2 ? MoveDirection::forward : MoveDirection::inverse;
      system = hurwitz_move(system, rng() % (system.size() - 1), dir);  // revalidates product and generation
      EXPECT_EQ(class_multiset(c.group, system.entries()), classes);
      EXPECT_EQ(system.sigma(), sigma);
      EXPECT_EQ(system.type(), Type::parse(c.tau));
    }
  }
}

TEST(HurwitzMove, IndexOutOfRange) {
  const auto g = FiniteGroup::elementary_abelian(2);
  std::vector<Element> t{Element{1}, Element{1}};
  EXPECT_THROW(apply_hurwitz_move(g, t, 1, MoveDirection::forward), Error);
}

TEST(HurwitzOrbit, AbelianOrbitsArePermutationClasses) {
  for (unsigned k : {2u, 3u}) {
    const auto g = FiniteGroup::elementary_abelian(k);
    for (std::uint64_t r = 2; r <= 5; ++r) {
      for_each_spherical_system(g, Type::power(2, r), EnumerationMode::ordered, [&](std::span<const Element> e) {
        std::vector<Element> start(e.begin(), e.end());
        const auto orbit = hurwitz_orbit_of(g, start);
        std::vector<Element> perm = start;
        std::sort(perm.begin(), perm.end());
        std::vector<std::vector<Element>> perms;
        do perms.push_back(perm);
        while (std::next_permutation(perm.begin(), perm.end()));
        EXPECT_TRUE(orbit.complete);
        EXPECT_EQ(orbit.members, perms);
        return true;
      });
    }
  }
}

TEST(HurwitzOrbit, NonabelianOrbitIsClosedAndSorted) {
  const auto d4 = groups::dihedral(4);
  std::mt19937 rng(9);
  const auto start = random_system(d4, Type::parse("2^4"), rng);
  const auto orbit = hurwitz_orbit_of(d4, start);
  ASSERT_TRUE(orbit.complete);
  EXPECT_TRUE(std::is_sorted(orbit.members.begin(), orbit.members.end()));
  const std::set<std::vector<Element>> members(orbit.members.begin(), orbit.members.end());
  EXPECT_TRUE(members.count(start));
  for (const auto& m : orbit.members)
    for (std::size_t i = 0; i + 1 < m.size(); ++i)
      for (auto dir : {MoveDirection::forward, MoveDirection::inverse}) {
        auto next = m;
        apply_hurwitz_move(d4, next, i, dir);
        EXPECT_TRUE(members.count(next));
      }
}

TEST(HurwitzOrbit, NodeBudgetFlagsIncomplete) {
  const auto g = FiniteGroup::elementary_abelian(3);
  const std::vector<Element> start{Element{1}, Element{1}, Element{2}, Element{2}, Element{4}, Element{4}};
  const auto orbit = hurwitz_orbit_of(g, start, 10);
  EXPECT_FALSE(orbit.complete);
  EXPECT_LE(orbit.members.size(), 10u);
}

TEST(PairClassKey, InvariantUnderAutomorphismsMovesAndSwap) {
  auto g = std::make_shared<const FiniteGroup>(FiniteGroup::elementary_abelian(3));
  const auto auts = automorphisms(*g);
  SphericalSystem t1(g, {Element{1}, Element{1}, Element{2}, Element{2}, Element{4}, Element{4}});
  SphericalSystem t2(g, {Element{3}, Element{5}, Element{3}, Element{7}, Element{5}, Element{7}});
  const RamificationStructure base(t1, t2);
  const KeyOptions swap{true, false};
  const auto key = pair_class_key(base, auts, swap);
  EXPECT_EQ(key, pair_class_key(RamificationStructure(t2, t1), auts, swap));
  EXPECT_EQ(key, pair_class_key(RamificationStructure(hurwitz_move(t1, 2, MoveDirection::forward), t2), auts, swap));
  for (const auto& phi : auts) {
    SphericalSystem p1(g, detail::apply_automorphism(phi, t1.entries()));
    SphericalSystem p2(g, detail::apply_automorphism(phi, t2.entries()));
    EXPECT_EQ(pair_class_key(RamificationStructure(p1, p2), auts, swap), key);
  }
  EXPECT_EQ(key.bytes().size(), 4 * key.words.size());
  EXPECT_EQ(key.hex().size(), 8 * key.words.size());
}

TEST(PairClassKey, NonabelianKeyInvariance) {
  auto g = std::make_shared<const FiniteGroup>(oracle::direct_product(groups::dihedral(4), groups::cyclic(2)));
  const auto auts = automorphisms(*g);
  std::mt19937 rng(11);
  std::vector<std::vector<Element>> side2;
  for_each_spherical_system(*g, Type::parse("2^3,4^2"), EnumerationMode::ordered, [&](std::span<const Element> e) {
    side2.emplace_back(e.begin(), e.end());
    return side2.size() < 2000;
  });
  // first disjoint pair, then a random walk through moves and automorphisms
  std::optional<RamificationStructure> base;
  for_each_spherical_system(*g, Type::parse("2^5"), EnumerationMode::ordered, [&](std::span<const Element> e) {
    SphericalSystem s1(g, std::vector<Element>(e.begin(), e.end()));
    for (const auto& b : side2) {
      SphericalSystem s2(g, b);
      if (disjoint(s1, s2)) {
        base.emplace(s1, s2);
        return false;
      }
    }
    return true;
  });
  ASSERT_TRUE(base.has_value());
  const auto key = pair_class_key(*base, auts);
  SphericalSystem t1 = base->t1(), t2 = base->t2();
  for (int step = 0; step < 60; ++step) {
    const auto dir = rng() % 2 ? MoveDirection::forward : MoveDirection::inverse;
    switch (rng() % 3) {
      case 0: t1 = hurwitz_move(t1, rng() % (t1.size() - 1), dir); break;
      case 1: t2 = hurwitz_move(t2, rng() % (t2.size() - 1), dir); break;
      default: {
        const auto& phi = auts[rng() % auts.size()];
        t1 = SphericalSystem(g, detail::apply_automorphism(phi, t1.entries()));
        t2 = SphericalSystem(g, detail::apply_automorphism(phi, t2.entries()));
      }
    }
    EXPECT_EQ(pair_class_key(RamificationStructure(t1, t2), auts), key) << "step " << step;
  }
}

TEST(CountComponents, KleinFourHasNoStructures) {
  const auto g = FiniteGroup::elementary_abelian(2);
  const auto result = count_components(g, Type::parse("2^4"), Type::parse("2^4"));
  EXPECT_EQ(result.h, 0u);
  EXPECT_EQ(result.completeness, Completeness::exact);
  // the type alone already fails (genus 1); with a valid genus there is still no disjoint pair
  EXPECT_EQ(count(g, "2^6", "2^6"), 0u);
  EXPECT_EQ(oracle::pair_count(g, orders_of("2^6"), orders_of("2^6"), oracle::gl2(2), {true, false}), 0u);
}

TEST(CountComponents, ElementaryAbelianMatchesNaiveOracle) {
  const auto g = FiniteGroup::elementary_abelian(3);
  const auto gl = oracle::gl2(3);
  const auto naive_swap = oracle::pair_count(g, orders_of("2^6"), orders_of("2^6"), gl, {true, false});
  const auto naive_ordered = oracle::pair_count(g, orders_of("2^6"), orders_of("2^6"), gl, {false, false});
  EXPECT_EQ(naive_swap, oracle::f2_multiset_pair_count(3, 6, 6, true));
  EXPECT_EQ(naive_ordered, oracle::f2_multiset_pair_count(3, 6, 6, false));
  EXPECT_EQ(count(g, "2^6", "2^6"), naive_swap);
  CountOptions ordered;
  ordered.count_ordered_pairs = true;
  EXPECT_EQ(count(g, "2^6", "2^6", ordered), naive_ordered);
  // table representation and the generic orbit path agree with the fast path
  EXPECT_EQ(count(groups::elementary_abelian_table(3), "2^6", "2^6"), naive_swap);
  CountOptions forced;
  forced.force_orbit_path = true;
  EXPECT_EQ(count(g, "2^6", "2^6", forced), naive_swap);
}

TEST(CountComponents, ElementaryAbelianLongerTypesMatchMultisetOracle) {
  const auto g = FiniteGroup::elementary_abelian(3);
  for (auto [r1, r2] : {std::pair{6u, 8u}, {8u, 8u}, {7u, 9u}, {6u, 10u}}) {
    const auto t1 = Type::power(2, r1), t2 = Type::power(2, r2);
    const bool swap = r1 == r2;
    const auto result = count_components(g, t1, t2);
    EXPECT_EQ(result.h, oracle::f2_multiset_pair_count(3, r1, r2, swap)) << r1 << "," << r2;
    CountOptions ordered;
    ordered.count_ordered_pairs = true;
    EXPECT_EQ(count_components(g, t1, t2, ordered).h, oracle::f2_multiset_pair_count(3, r1, r2, false));
  }
}

TEST(CountComponents, AbelianTableGroupMatchesNaiveOracle) {
  const auto g = oracle::direct_product(groups::cyclic(3), groups::cyclic(3));
  const auto auts = oracle::automorphisms(g);
  EXPECT_EQ(auts.size(), 48u);
  const auto naive = oracle::pair_count(g, orders_of("3^4"), orders_of("3^4"), auts, {true, false});
  EXPECT_EQ(count(g, "3^4", "3^4"), naive);
  CountOptions ordered;
  ordered.count_ordered_pairs = true;
  EXPECT_EQ(count(g, "3^4", "3^4", ordered),
            oracle::pair_count(g, orders_of("3^4"), orders_of("3^4"), auts, {false, false}));
}

TEST(CountComponents, NonabelianMatchesNaiveOracle) {
  const auto g = oracle::direct_product(groups::dihedral(4), groups::cyclic(2));
  const auto auts = oracle::automorphisms_by_generators(g);
  EXPECT_EQ(auts.size(), automorphisms(g).size());
  struct Case {
    const char* t1;
    const char* t2;
  };
  for (const auto& c : {Case{"2^5", "2^3,4^2"}, Case{"2^6", "2^4,4"}, Case{"2^6", "2^6"}}) {
    const bool same = std::string(c.t1) == c.t2;
    for (bool inner : {false, true}) {
      CountOptions options;
      options.identify_inner = inner;
      const auto naive = oracle::pair_count(g, orders_of(c.t1), orders_of(c.t2), auts, {same, inner});
      EXPECT_EQ(count(g, c.t1, c.t2, options), naive) << c.t1 << " | " << c.t2 << " inner " << inner;
    }
  }
}

TEST(CountComponents, SmallNonabelianGroupsHaveNoDisjointPairs) {
  // every generating system of S3 contains a transposition class; D4 and Q8 similarly overlap
  const auto s3 = groups::symmetric3();
  EXPECT_EQ(count(s3, "2^6", "2^6"), oracle::pair_count(s3, orders_of("2^6"), orders_of("2^6"), oracle::automorphisms(s3), {true, false}));
  const auto d4 = groups::dihedral(4);
  EXPECT_EQ(count(d4, "2^5", "2^5"), 0u);
  EXPECT_EQ(count(groups::quaternion8(), "4^4", "4^4"), 0u);
}

TEST(CountComponents, SwapSymmetry) {
  const auto g = oracle::direct_product(groups::dihedral(4), groups::cyclic(2));
  EXPECT_EQ(count(g, "2^6", "2^3,4^2"), count(g, "2^3,4^2", "2^6"));
  const auto e = FiniteGroup::elementary_abelian(3);
  EXPECT_EQ(count(e, "2^6", "2^8"), count(e, "2^8", "2^6"));
}

TEST(CountComponents, DeterministicAcrossWorkers) {
  const auto g = FiniteGroup::elementary_abelian(3);
  CountOptions one;
  const auto reference = count_components(g, Type::power(2, 12), Type::power(2, 20), one);
  for (unsigned workers : {2u, 4u, 8u}) {
    CountOptions many;
    many.workers = workers;
    const auto result = count_components(g, Type::power(2, 12), Type::power(2, 20), many);
    EXPECT_EQ(result.h, reference.h);
    EXPECT_EQ(result.keys, reference.keys);
    EXPECT_EQ(result.pairs_examined, reference.pairs_examined);
  }
}

TEST(CountComponents, BudgetLimitedIsALowerBound) {
  const auto g = FiniteGroup::elementary_abelian(3);
  const auto exact = count_components(g, Type::power(2, 12), Type::power(2, 20));
  for (unsigned workers : {1u, 4u}) {
    CountOptions tight;
    tight.max_pairs = 50;
    tight.workers = workers;
    const auto partial = count_components(g, Type::power(2, 12), Type::power(2, 20), tight);
    EXPECT_EQ(partial.completeness, Completeness::budget_limited);
    EXPECT_LE(partial.h, exact.h);
    EXPECT_TRUE(std::includes(exact.keys.begin(), exact.keys.end(), partial.keys.begin(), partial.keys.end()));
  }
}

TEST(CountComponents, TypeFailuresGiveZero) {
  const auto g = FiniteGroup::elementary_abelian(3);
  const auto result = count_components(g, Type::parse("2^2"), Type::parse("2^6"));
  EXPECT_EQ(result.h, 0u);
  EXPECT_NE(result.note.find("too-few-branch-points"), std::string::npos);
  EXPECT_EQ(count(g, "3^6", "2^6"), 0u);  // no elements of order 3
}
