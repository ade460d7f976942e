#include <cmath>
#include <numbers>
#include <random>
#include <sstream>

#include <gtest/gtest.h>

#include "support.hpp"
#include "upb/certificate.hpp"
#include "upb/constructions.hpp"
#include "upb/fixtures.hpp"
#include "upb/states.hpp"

using namespace upb;
using upb::oracles::layout;

TEST(BasisFamily, Angles) {
  const BasisFamily one(1);
  EXPECT_NEAR(one.angle(0), std::numbers::pi / 8, 1e-15);
  EXPECT_NEAR(std::abs(inner(one.plus(0), one.perp(0))), 0.0, 1e-15);

  const BasisFamily two(2);
  EXPECT_NEAR(std::abs(inner(two.plus(0), two.plus(1))), std::cos(std::numbers::pi / 12), 1e-12);

  const BasisFamily six = make_basis_family(6);
  int cross = 0;
  for (int i = 0; i < 6; ++i)
    for (int j = i + 1; j < 6; ++j) {
      for (Qubit a : {six.plus(i), six.perp(i)})
        for (Qubit b : {six.plus(j), six.perp(j)}) {
          const double ov = std::abs(inner(a, b));
          EXPECT_GT(ov, 1e-6);
          EXPECT_LT(ov, 1 - 1e-6);
        }
      ++cross;
    }
  EXPECT_EQ(cross, 15);
  EXPECT_THROW(BasisFamily(0), std::invalid_argument);
}

TEST(Realize, SevenStatePattern) {
  const auto cert = seven_state_example();
  const BasisFamily f(required_basis_count(cert.assignment));
  const auto states = realize_configuration(cert.config, cert.assignment, f);
  ASSERT_EQ(states.size(), 7u);
  // v0 carries the plus vector of basis 0 on every party.
  for (int j = 0; j < 3; ++j) EXPECT_NEAR(std::abs(inner(states[0].factors[j], f.plus(0))), 1.0, 1e-15);
  // v5 and v6 differ only on the third party, where they are orthogonal.
  EXPECT_NEAR(std::abs(inner(states[5].factors[2], states[6].factors[2])), 0.0, 1e-15);
  EXPECT_TRUE(pairwise_orthogonality_check(states).orthonormal);

  const auto back = recover_orthogonality_graph(states);
  const auto& p0 = back.party(0);
  ASSERT_EQ(p0.region_count(), 2);
  EXPECT_EQ(p0.region(0).size(), 3u);
  EXPECT_EQ(p0.region(1).size(), 4u);
  EXPECT_EQ(p0.partner(0), 1);
  EXPECT_EQ(back.canonical(), cert.config.canonical());
}

TEST(Realize, ConstructionAndTrivialCases) {
  const auto cert = construct_upb_4k4(2);
  const auto states = realize_configuration(cert.config, cert.assignment, BasisFamily(required_basis_count(cert.assignment)));
  ASSERT_EQ(states.size(), 12u);
  for (const auto& st : states) EXPECT_EQ(st.factors.size(), 8u);

  const Configuration one(1, {layout(1, {{0}})});
  SymbolicAssignment a{{{{0, Side::perp}}}};
  const BasisFamily f(1);
  const auto single = realize_configuration(one, a, f);
  EXPECT_NEAR(std::abs(inner(single[0].factors[0], f.perp(0))), 1.0, 1e-15);
}

TEST(Realize, RejectsInconsistentAssignments) {
  const Configuration c(2, {layout(2, {{0}, {1}}, {{0, 1}})});
  const BasisFamily f(3);
  EXPECT_THROW(realize_configuration(c, {{{{0, Side::plus}, {1, Side::perp}}}}, f), AssignmentError);
  EXPECT_THROW(realize_configuration(c, {{{{0, Side::plus}, {0, Side::plus}}}}, f), AssignmentError);
  EXPECT_THROW(realize_configuration(c, {{{{0, Side::plus}}}}, f), AssignmentError);
  EXPECT_THROW(realize_configuration(c, {{{{5, Side::plus}, {5, Side::perp}}}}, f), AssignmentError);
  const Configuration unpaired(2, {layout(2, {{0}, {1}})});
  EXPECT_THROW(realize_configuration(unpaired, {{{{0, Side::plus}, {0, Side::perp}}}}, f), AssignmentError);
}

TEST(Orthogonality, DuplicateStateReported) {
  const BasisFamily f(1);
  const ProductState s{{f.plus(0), f.perp(0)}};
  const auto v = pairwise_orthogonality_check({s, s});
  EXPECT_FALSE(v.orthonormal);
  ASSERT_EQ(v.offending.size(), 1u);
  EXPECT_EQ(v.offending[0], Edge(0, 1));
}

TEST(Orthogonality, ConstructionK3) {
  const auto cert = construct_upb_4k4(3);
  const auto states = realize_configuration(cert.config, cert.assignment, BasisFamily(required_basis_count(cert.assignment)));
  EXPECT_TRUE(pairwise_orthogonality_check(states, 1e-9).orthonormal);
}

TEST(Recover, AllEqualGivesOneRegion) {
  const Qubit q = Qubit::from_angle(0.3);
  std::vector<ProductState> states(4, ProductState{{q}});
  const auto c = recover_orthogonality_graph(states);
  ASSERT_EQ(c.party(0).region_count(), 1);
  EXPECT_TRUE(c.party(0).pairs().empty());
}

TEST(Recover, PhaseIsIgnored) {
  const Qubit q = Qubit::from_angle(0.3);
  const Qubit minus_q{-q.a0, -q.a1};
  const Qubit iq{q.a0 * std::complex<double>(0, 1), q.a1 * std::complex<double>(0, 1)};
  const auto c = recover_orthogonality_graph({ProductState{{q}}, ProductState{{minus_q}}, ProductState{{iq}}});
  EXPECT_EQ(c.party(0).region_count(), 1);
}

TEST(Recover, DeadBandIsAnError) {
  const Qubit a = Qubit::from_angle(0.0);
  // overlap cos(t) with 1 - 10e-9 < cos(t) < 1 - 1e-9
  const Qubit b = Qubit::from_angle(std::acos(1.0 - 5e-9));
  EXPECT_THROW(recover_orthogonality_graph({ProductState{{a}}, ProductState{{b}}}), AmbiguousGrouping);
}

TEST(Recover, RoundTripRandomConfigurations) {
  std::mt19937_64 rng(99);
  for (int trial = 0; trial < 100; ++trial) {
    const int s = 1 + static_cast<int>(rng() % 10);
    const int p = 1 + static_cast<int>(rng() % 5);
    const auto c = oracles::random_configuration(s, p, rng);
    const auto a = canonical_assignment(c);
    const auto states = realize_configuration(c, a, BasisFamily(required_basis_count(a)));
    for (const auto& st : states)
      for (const auto& q : st.factors) EXPECT_NEAR(q.norm(), 1.0, 1e-12);
    EXPECT_EQ(recover_orthogonality_graph(states).canonical(), c.canonical()) << "trial " << trial;
  }
}

TEST(Realize, EdgesMatchNumericOrthogonality) {
  std::mt19937_64 rng(123);
  for (int trial = 0; trial < 50; ++trial) {
    const int s = 2 + static_cast<int>(rng() % 9);
    const int p = 1 + static_cast<int>(rng() % 4);
    const auto c = oracles::random_configuration(s, p, rng);
    const auto a = canonical_assignment(c);
    const auto states = realize_configuration(c, a, BasisFamily(required_basis_count(a)));
    for (int j = 0; j < p; ++j) {
      const EdgeSet e = party_edges(c.party(j));
      for (int x = 0; x < s; ++x)
        for (int y = x + 1; y < s; ++y) {
          const double ov = std::abs(inner(states[x].factors[j], states[y].factors[j]));
          if (e.contains(x, y))
            EXPECT_LE(ov, 1e-9);
          else
            EXPECT_GE(ov, 1e-6);
        }
    }
  }
}

TEST(RealizeWitness, OrthogonalToEveryMember) {
  const auto cert = seven_state_example();
  const BasisFamily f(required_basis_count(cert.assignment));
  const auto w = find_extension(cert.config);
  ASSERT_TRUE(w);
  const auto extra = realize_witness(cert.config, *w, cert.assignment, f);
  const auto states = realize_configuration(cert.config, cert.assignment, f);
  for (const auto& st : states) EXPECT_LE(std::abs(inner(extra, st)), 1e-9);
  EXPECT_NEAR(std::abs(inner(extra, extra)), 1.0, 1e-12);
}

TEST(RealizeWitness, SingleState) {
  const Configuration c(1, {layout(1, {{0}})});
  const SymbolicAssignment a{{{{0, Side::plus}}}};
  const BasisFamily f(1);
  const auto extra = realize_witness(c, ExtensionWitness{{0}}, a, f);
  const auto states = realize_configuration(c, a, f);
  EXPECT_LE(std::abs(inner(extra, states[0])), 1e-9);
  EXPECT_THROW(realize_witness(c, ExtensionWitness{{std::nullopt}}, a, f), std::invalid_argument);
}

TEST(RealizeWitness, AgreesWithFindExtension) {
  std::mt19937_64 rng(5150);
  for (int trial = 0; trial < 200; ++trial) {
    const int s = 1 + static_cast<int>(rng() % 8);
    const int p = 1 + static_cast<int>(rng() % 4);
    const auto c = oracles::random_configuration(s, p, rng);
    const auto a = canonical_assignment(c);
    const BasisFamily f(required_basis_count(a));
    const auto w = find_extension(c);
    if (!w) continue;
    const auto extra = realize_witness(c, *w, a, f);
    for (const auto& st : realize_configuration(c, a, f)) EXPECT_LE(std::abs(inner(extra, st)), 1e-9);
  }
}

TEST(StateMatrix, SeventeenDigits) {
  std::ostringstream os;
  write_state_matrix(os, {ProductState{{Qubit::from_angle(std::numbers::pi / 8)}}});
  EXPECT_EQ(os.str(), "0.92387953251128674 0 0.38268343236508978 0\n");
}
