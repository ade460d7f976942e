#include <algorithm>
#include <map>
#include <numeric>
#include <random>

#include <gtest/gtest.h>

#include "support.hpp"
#include "upb/certificate.hpp"
#include "upb/fixtures.hpp"
#include "upb/search.hpp"

using namespace upb;

namespace {

PairSystem random_pair_system(std::mt19937_64& rng, int parties, int per_party, int universe, int excess) {
  PairSystem ps{excess, {}};
  for (int j = 0; j < parties; ++j) {
    std::vector<Vertex> vs(static_cast<std::size_t>(universe));
    std::iota(vs.begin(), vs.end(), 0);
    std::shuffle(vs.begin(), vs.end(), rng);
    std::vector<Edge> party;
    for (int i = 0; i < per_party; ++i) party.emplace_back(vs[2 * i], vs[2 * i + 1]);
    ps.parties.push_back(party);
  }
  return ps;
}

// Largest family of distinct parties (two disjoint pairs each) on `universe`
// vertices with no two disjoint pairs on different parties.
int oracle_two_pair_max(int universe) {
  std::vector<std::vector<Edge>> all;
  for (int a = 0; a < universe; ++a)
    for (int b = a + 1; b < universe; ++b)
      for (int c = a + 1; c < universe; ++c)
        for (int d = c + 1; d < universe; ++d)
          if (c != b && d != b) all.push_back({Edge(a, b), Edge(c, d)});
  auto clash = [](const std::vector<Edge>& x, const std::vector<Edge>& y) {
    for (const Edge& e : x)
      for (const Edge& f : y)
        if (e.a != f.a && e.a != f.b && e.b != f.a && e.b != f.b) return true;
    return false;
  };
  int best = 0;
  std::vector<std::size_t> chosen;
  std::function<void(std::size_t)> go = [&](std::size_t from) {
    best = std::max(best, static_cast<int>(chosen.size()));
    for (std::size_t i = from; i < all.size(); ++i) {
      bool ok = true;
      for (auto c : chosen) ok = ok && !clash(all[c], all[i]);
      if (!ok) continue;
      chosen.push_back(i);
      go(i + 1);
      chosen.pop_back();
    }
  };
  go(0);
  return best;
}

}  // namespace

TEST(ExtensionRule, Examples) {
  const PairSystem disjoint3{3, {{Edge(0, 1)}, {Edge(2, 3)}, {Edge(4, 5)}}};
  const auto v = violates_extension_rule(disjoint3);
  ASSERT_TRUE(v);
  EXPECT_GE(v->covered(), static_cast<int>(v->picks.size()) + 3);

  EXPECT_FALSE(violates_extension_rule(k4_matching_system()));

  const PairSystem disjoint2{2, {{Edge(0, 1)}, {Edge(2, 3)}}};
  EXPECT_TRUE(violates_extension_rule(disjoint2));

  const PairSystem bad{2, {{Edge(0, 1), Edge(1, 2)}}};
  EXPECT_THROW(violates_extension_rule(bad), std::invalid_argument);
}

TEST(ExtensionRule, K4MatchingsAdmitNoFourthParty) {
  // Every party of two disjoint pairs on K_4's vertices plus fresh ones.
  for (int a = 0; a < 6; ++a)
    for (int b = a + 1; b < 6; ++b)
      for (int c = 0; c < 6; ++c)
        for (int d = c + 1; d < 6; ++d) {
          if (c == a || c == b || d == a || d == b) continue;
          PairSystem ps = k4_matching_system();
          ps.parties.push_back({Edge(a, b), Edge(c, d)});
          EXPECT_TRUE(violates_extension_rule(ps));
        }
}

TEST(ExtensionRule, AgreesWithOracle) {
  std::mt19937_64 rng(8);
  int hits = 0;
  for (int trial = 0; trial < 400; ++trial) {
    const int m = 1 + static_cast<int>(rng() % 5);
    const int per = 1 + static_cast<int>(rng() % 3);
    const int universe = 2 * per + static_cast<int>(rng() % 5);
    const int excess = 1 + static_cast<int>(rng() % 4);
    const auto ps = random_pair_system(rng, m, per, universe, excess);
    const auto v = violates_extension_rule(ps);
    ASSERT_EQ(v.has_value(), oracles::oracle_violates(ps)) << trial;
    hits += v.has_value();
    if (v) {
      EXPECT_GE(v->covered(), static_cast<int>(v->picks.size()) + excess);
    }
  }
  EXPECT_GT(hits, 0);
  EXPECT_LT(hits, 400);
}

TEST(ExtensionRule, InvariantUnderRelabeling) {
  std::mt19937_64 rng(31);
  for (int trial = 0; trial < 200; ++trial) {
    const auto ps = random_pair_system(rng, 4, 2, 8, 2 + static_cast<int>(rng() % 2));
    const bool verdict = violates_extension_rule(ps).has_value();
    std::vector<Vertex> perm(8);
    std::iota(perm.begin(), perm.end(), 0);
    std::shuffle(perm.begin(), perm.end(), rng);
    PairSystem moved{ps.excess, {}};
    for (const auto& party : ps.parties) {
      std::vector<Edge> np;
      for (const Edge& e : party) np.emplace_back(perm[e.a], perm[e.b]);
      moved.parties.push_back(np);
    }
    std::shuffle(moved.parties.begin(), moved.parties.end(), rng);
    EXPECT_EQ(violates_extension_rule(moved).has_value(), verdict);
    EXPECT_EQ(violates_extension_rule(canonical_labels(moved)).has_value(), verdict);
  }
}

TEST(CanonicalLabels, FirstUseOrder) {
  const PairSystem ps{3, {{Edge(7, 9), Edge(2, 4)}, {Edge(4, 9)}}};
  const auto c = canonical_labels(ps);
  EXPECT_EQ(c.parties[0], (std::vector<Edge>{Edge(0, 1), Edge(2, 3)}));
  EXPECT_EQ(canonical_labels(c), c);
}

TEST(PairSearch, KnownValues) {
  const auto r22 = pair_config_max_parties(2, 2, std::nullopt);
  EXPECT_EQ(r22.max_parties, 3);
  EXPECT_EQ(r22.status, SearchStatus::completed);
  EXPECT_FALSE(violates_extension_rule(r22.witness));

  const auto r33 = pair_config_max_parties(3, 3, std::nullopt);
  EXPECT_EQ(r33.max_parties, 4);
  EXPECT_FALSE(violates_extension_rule(r33.witness));

  const auto anchored = pair_config_max_parties(3, 3, AnchorConstraint{{0, 1, 2}});
  EXPECT_EQ(anchored.max_parties, 2);
  for (const auto& party : anchored.witness.parties)
    for (const Edge& e : party) EXPECT_TRUE((e.a < 3) != (e.b < 3));
}

TEST(PairSearch, WitnessesHaveDistinctParties) {
  const auto r = pair_config_max_parties(3, 3, std::nullopt);
  auto parties = r.witness.parties;
  std::sort(parties.begin(), parties.end());
  EXPECT_EQ(std::adjacent_find(parties.begin(), parties.end()), parties.end());
}

TEST(PairSearch, RepeatedPartiesChangeTheAnchoredValue) {
  // A party may repeat its pairs under the bare rule; then two copies each of
  // two anchored parties survive.
  PairSearchOptions opts;
  opts.allow_repeats = true;
  const auto r = pair_config_max_parties(3, 3, AnchorConstraint{{0, 1, 2}}, {}, opts);
  EXPECT_EQ(r.max_parties, 4);
  EXPECT_FALSE(violates_extension_rule(r.witness));
  EXPECT_EQ(pair_config_max_parties(2, 2, std::nullopt, {}, opts).max_parties, 3);
  EXPECT_EQ(pair_config_max_parties(3, 3, std::nullopt, {}, opts).max_parties, 4);
}

TEST(PairSearch, TwoPairsAgreeWithOracle) {
  EXPECT_EQ(oracle_two_pair_max(8), pair_config_max_parties(2, 2, std::nullopt).max_parties);
}

TEST(PairSearch, MonotoneTable) {
  // Larger excess only weakens the rule; anchors only shrink the space.
  // Unbounded cells (a star of pairs never yields enough disjoint pairs) are
  // cut at the cap, which keeps comparisons valid.
  const int cap = 6;
  std::map<std::tuple<int, int, bool>, int> table;
  for (int per = 1; per <= 3; ++per)
    for (int excess = 1; excess <= 3; ++excess)
      for (bool anchored : {false, true}) {
        if (per == 2 && excess == 3) continue;  // explored separately below
        std::optional<AnchorConstraint> a;
        if (anchored) {
          a.emplace();
          for (int i = 0; i < per; ++i) a->anchors.push_back(i);
        }
        PairSearchOptions opts;
        opts.party_cap = cap;
        const auto r = pair_config_max_parties(per, excess, a, {}, opts);
        ASSERT_EQ(r.status, SearchStatus::completed);
        table[{per, excess, anchored}] = r.max_parties;
      }
  for (auto [key, value] : table) {
    auto [per, excess, anchored] = key;
    if (excess > 1 && table.count({per, excess - 1, anchored})) {
      EXPECT_GE(value, (table[{per, excess - 1, anchored}]));
    }
    if (anchored) {
      EXPECT_LE(value, (table[{per, excess, false}]));
    }
  }
  EXPECT_EQ((table[{1, 1, false}]), 0);
  EXPECT_EQ((table[{1, 2, false}]), cap);
  EXPECT_EQ((table[{3, 2, false}]), 1);
  EXPECT_EQ((table[{3, 3, false}]), 4);
  EXPECT_EQ((table[{3, 3, true}]), 2);
}

TEST(PairSearch, TwoPairsExcessThreeIsUnbounded) {
  // Parties {0,x},{1,y} never give three disjoint pairs.
  PairSystem ps{3, {}};
  for (int i = 0; i < 10; ++i) ps.parties.push_back({Edge(0, 2 + 2 * i), Edge(1, 3 + 2 * i)});
  EXPECT_FALSE(violates_extension_rule(ps));
  PairSearchOptions opts;
  opts.party_cap = 3;
  const auto r = pair_config_max_parties(2, 3, std::nullopt, {}, opts);
  EXPECT_EQ(r.max_parties, 3);
  EXPECT_TRUE(r.capped);
}

TEST(PairSearch, ParallelMatchesSerial) {
  SearchBudget serial, parallel;
  parallel.threads = 4;
  const auto a = pair_config_max_parties(3, 3, std::nullopt, serial);
  const auto b = pair_config_max_parties(3, 3, std::nullopt, parallel);
  EXPECT_EQ(a.max_parties, b.max_parties);
  EXPECT_EQ(a.witness, b.witness);
}

TEST(PairSearch, BudgetExhaustionIsReported) {
  SearchBudget tiny;
  tiny.node_limit = 5;
  const auto r = pair_config_max_parties(3, 3, std::nullopt, tiny);
  EXPECT_EQ(r.status, SearchStatus::budget_exhausted);
  EXPECT_THROW(pair_config_max_parties(0, 3, std::nullopt), std::invalid_argument);
  EXPECT_THROW(pair_config_max_parties(2, 3, AnchorConstraint{{0}}), std::invalid_argument);
}

TEST(PairedLayouts, CountsAndShapes) {
  // Fully paired layouts on s labeled states: s=2 -> 1, s=3 -> 3.
  EXPECT_EQ(all_paired_layouts(2).size(), 1u);
  EXPECT_EQ(all_paired_layouts(3).size(), 3u);
  std::size_t brute = 0;
  for (const auto& l : oracles::all_layouts(4)) brute += pairing_violations(Configuration(4, {l})).empty();
  EXPECT_EQ(all_paired_layouts(4).size(), brute);
}

TEST(MinUpb, SmallValues) {
  const auto f1 = exhaustive_min_upb(1, 2);
  EXPECT_EQ(f1.min_size, 2);
  const auto f2 = exhaustive_min_upb(2, 4);
  EXPECT_EQ(f2.min_size, 4);
  const auto f3 = exhaustive_min_upb(3, 4);
  EXPECT_EQ(f3.min_size, 4);
  for (const auto* r : {&f1, &f2, &f3}) {
    ASSERT_TRUE(r->witness);
    EXPECT_TRUE(verify_certificate(*r->witness).passed());
    EXPECT_EQ(r->status, SearchStatus::completed);
  }
  const auto f4 = exhaustive_min_upb(4, 5);
  EXPECT_FALSE(f4.min_size);
  EXPECT_EQ(f4.status, SearchStatus::completed);
}

TEST(MinUpb, AgreesWithNaiveEnumerator) {
  for (int p = 1; p <= 3; ++p) {
    EXPECT_EQ(exhaustive_min_upb(p, 4).min_size, oracles::oracle_min_upb(p, 4)) << p;
    EXPECT_EQ(exhaustive_min_upb(p, 3).min_size, oracles::oracle_min_upb(p, 3)) << p;
  }
}

// Every UPB has all regions paired, so multisets of paired layouts suffice.
TEST(MinUpb, FourPartiesNoneUpToFiveByBruteForce) {
  for (int s = 1; s <= 5; ++s) {
    std::vector<PartyLayout> paired;
    for (const auto& l : oracles::all_layouts(s))
      if (pairing_violations(Configuration(s, {l})).empty()) paired.push_back(l);
    const std::size_t n = paired.size();
    for (std::size_t a = 0; a < n; ++a)
      for (std::size_t b = a; b < n; ++b)
        for (std::size_t c = b; c < n; ++c)
          for (std::size_t d = c; d < n; ++d) {
            Configuration cf(s, {paired[a], paired[b], paired[c], paired[d]});
            ASSERT_FALSE(is_product_basis(cf).is_basis && !oracles::oracle_extendible(cf)) << s;
          }
  }
  EXPECT_FALSE(exhaustive_min_upb(4, 5).min_size);
}

TEST(MinUpb, BudgetExhaustionIsNotNone) {
  SearchBudget tiny;
  tiny.node_limit = 3;
  const auto r = exhaustive_min_upb(4, 5, tiny);
  EXPECT_EQ(r.status, SearchStatus::budget_exhausted);
  EXPECT_FALSE(r.min_size);
}

TEST(FindUpb, SmallCases) {
  const auto r = find_upb(3, 4, {});
  ASSERT_TRUE(r.certificate);
  EXPECT_TRUE(verify_certificate(*r.certificate).passed());
  const auto none = find_upb(2, 3, {});
  EXPECT_FALSE(none.certificate);
  EXPECT_EQ(none.status, SearchStatus::completed);
  EXPECT_FALSE(find_upb(1, 1, {}).certificate);
}

TEST(FindUpb, DeterministicForFixedSeed) {
  SearchBudget b;
  b.seed = 42;
  const auto x = find_upb(5, 6, {}, b);
  const auto y = find_upb(5, 6, {}, b);
  ASSERT_TRUE(x.certificate);
  ASSERT_TRUE(y.certificate);
  EXPECT_EQ(x.certificate->config, y.certificate->config);
  EXPECT_TRUE(verify_certificate(*x.certificate).passed());
}

TEST(FindUpb, RespectsLimits) {
  StructuralLimits lim;
  lim.max_region = 1;
  // All-singleton parties: a UPB on 3 parties needs 4 states.
  const auto r = find_upb(3, 4, lim);
  ASSERT_TRUE(r.certificate);
  for (const auto& party : r.certificate->config.parties()) EXPECT_EQ(party_stats(party).max_region, 1);
  StructuralLimits bad;
  bad.parties_at_pair_cap = 2;
  EXPECT_THROW(find_upb(3, 4, bad), std::invalid_argument);
}
