#include <gtest/gtest.h>

#include <set>

#include "fixtures.hpp"
#include "oracles.hpp"
#include "ordrecon/canonical.hpp"
#include "ordrecon/enumerate.hpp"
#include "ordrecon/errors.hpp"
#include "ordrecon/pseudo_similar.hpp"

using namespace ordrecon;

namespace {

Poset from_cert(const char* text) { return poset_from_cert(CanonicalCert::parse(text)); }

PsStructure only_structure(const Poset& p) {
  const auto pairs = find_minmax_ps_pairs(p);
  EXPECT_EQ(pairs.size(), 1U);
  return lh_decomposition(p, pairs.at(0));
}

// Brute force: a minimal l and maximal h with isomorphic cards, by the
// permutation oracle.
bool naive_has_pair(const Poset& p) {
  const auto ext = extremal_sets(p);
  for (int l : ext.minimal) {
    for (int h : ext.maximal) {
      if (l != h && oracle::naive_iso(remove_point(p, l), remove_point(p, h))) return true;
    }
  }
  return false;
}

}  // namespace

TEST(PseudoSimilar, Chain) {
  for (int n = 2; n <= 6; ++n) {
    const Poset c = Poset::chain(n);
    const auto pairs = find_minmax_ps_pairs(c);
    ASSERT_EQ(pairs.size(), 1U);
    EXPECT_EQ(pairs[0].l, 0);
    EXPECT_EQ(pairs[0].h, n - 1);
    for (int x = 0; x + 1 < n; ++x) EXPECT_EQ(pairs[0].phi[x], x + 1);
    EXPECT_EQ(pairs[0].phi[n - 1], -1);

    const PsStructure ps = lh_decomposition(c, pairs[0]);
    // Every middle point reaches l avoiding h and h avoiding l.
    if (n >= 3) {
      ASSERT_EQ(ps.C.size(), 1U);
      EXPECT_EQ(ps.C[0], c.ground().without(0).without(n - 1));
    } else {
      EXPECT_TRUE(ps.C.empty());
    }
    EXPECT_TRUE(ps.L.empty());
    EXPECT_TRUE(ps.R.empty());
    EXPECT_EQ(ps.K_l, c.ground().without(n - 1));
    EXPECT_EQ(ps.K_h, c.ground().without(0));
    EXPECT_EQ(ps.A_P, std::vector<int>{n - 1});
    EXPECT_EQ(ps.v, n - 1);
    EXPECT_EQ(ps.d[n - 1], 0);

    std::vector<int> bottom_up(n);
    for (int i = 0; i < n; ++i) bottom_up[i] = i;
    EXPECT_EQ(phi_orbit(c, 0, ps.phi), bottom_up);

    const auto large = large_components(c, ps, 0);
    ASSERT_EQ(large.size(), 1U);
    EXPECT_EQ(large[0], c.ground().without(n - 1));
    const APartition part = compute_partition(c, ps);
    EXPECT_EQ(part.breakpoints, (std::vector<int>{0, 1}));
    ASSERT_EQ(part.blocks.size(), 1U);
    EXPECT_TRUE(part.blocks[0].contains(0));

    if (n >= 3) {
      const Morphism hat = phi_hat(c, ps);
      for (int x = 0; x + 2 < n; ++x) EXPECT_EQ(hat[x], x + 1);
    }
    EXPECT_TRUE(filter_shifting(c, n - 1));
  }
}

TEST(PseudoSimilar, NoPairsInV) {
  EXPECT_TRUE(find_minmax_ps_pairs(fixtures::v_poset()).empty());
  EXPECT_TRUE(find_minmax_ps_pairs(fixtures::lambda_poset()).empty());
}

TEST(PseudoSimilar, Errors) {
  const Poset c = Poset::chain(4);
  PsPair pair = find_minmax_ps_pairs(c).at(0);
  Morphism bad = pair.phi;
  bad[2] = -1;
  EXPECT_THROW(phi_orbit(c, 0, bad), OrbitError);
  bad = pair.phi;
  bad[1] = 1;
  EXPECT_THROW(phi_orbit(c, 0, bad), OrbitError);
  EXPECT_THROW(lh_decomposition(c, 1, 3, pair.phi), InvalidPairError);
  EXPECT_THROW(lh_decomposition(c, 0, 3, bad), InvalidPairError);
  EXPECT_THROW(lh_decomposition(Poset::antichain(2), 0, 1, Morphism{-1, 0}), InvalidPairError);
  const PsStructure ps = lh_decomposition(c, pair);
  EXPECT_THROW(large_components(c, ps, 1), IndexError);
  EXPECT_THROW(large_components(c, ps, -1), IndexError);
  EXPECT_THROW(filter_shifting(c, 2), NotMaximalError);
}

TEST(PseudoSimilar, FilterShifting) {
  EXPECT_FALSE(filter_shifting(fixtures::v_poset(), 1));
  EXPECT_FALSE(filter_shifting(fixtures::v_poset(), 2));
  // Filters {0},{1,0},{2,0} against the card's two points.
  EXPECT_FALSE(filter_shifting(fixtures::lambda_poset(), 0));
}

TEST(PseudoSimilar, UniverseMatchesBruteForce) {
  for (int n = 2; n <= 7; ++n) {
    std::set<CanonicalCert> expected;
    for (const CanonicalCert& c : enumerate(n, UniverseFilter::Connected).certs) {
      if (naive_has_pair(poset_from_cert(c))) expected.insert(c);
    }
    const auto got = ps_universe(n);
    EXPECT_EQ(std::set<CanonicalCert>(got.begin(), got.end()), expected) << "n=" << n;
  }
}

TEST(PseudoSimilar, StructuralGeneratorAgrees) {
  std::vector<std::vector<CanonicalCert>> smaller(2);
  for (int n = 2; n <= 9; ++n) {
    const auto complete = ps_universe(n);
    EXPECT_EQ(ps_universe_structural(n, smaller), complete) << "n=" << n;
    smaller.push_back(complete);
  }
  // Sizes 2..9: chains plus the sporadic ones.
  std::vector<std::size_t> sizes;
  for (std::size_t n = 2; n < smaller.size(); ++n) sizes.push_back(smaller[n].size());
  EXPECT_EQ(sizes, (std::vector<std::size_t>{1, 1, 2, 2, 5, 6, 13, 15}));
}

TEST(PseudoSimilar, SmallestNonChainFixture) {
  for (int n = 2; n <= 3; ++n) {
    for (const CanonicalCert& c : ps_universe(n)) EXPECT_EQ(c, canonical_cert(Poset::chain(n)));
  }
  std::vector<CanonicalCert> non_chains;
  for (const CanonicalCert& c : ps_universe(4)) {
    if (c != canonical_cert(Poset::chain(4))) non_chains.push_back(c);
  }
  ASSERT_EQ(non_chains.size(), 1U);
  EXPECT_EQ(non_chains[0].to_string(), fixtures::kSmallestPsNonChain);

  const Poset p = from_cert(fixtures::kSmallestPsNonChain);
  const PsStructure ps = only_structure(p);
  std::vector<int> sorted = phi_orbit(p, ps.l, ps.phi);
  std::sort(sorted.begin(), sorted.end());
  EXPECT_EQ(sorted, (std::vector<int>{0, 1, 2, 3}));
  const APartition part = compute_partition(p, ps);
  EXPECT_EQ(part.breakpoints.back(), p.size() - ps.v);
  for (std::size_t k = 0; k < part.blocks.size(); ++k) EXPECT_TRUE(part.blocks[k].contains(ps.orbit[k]));
}

TEST(PseudoSimilar, NonRigidMaximalCardFixture) {
  const Poset p = from_cert(fixtures::kNonRigidMaximalCard);
  const PsStructure ps = only_structure(p);
  bool found = false;
  for (int a : ps.A_P) found = found || !is_rigid(remove_point(p, a));
  EXPECT_TRUE(found);
  // Nothing smaller shows it.
  for (int n = 2; n < p.size(); ++n) {
    for (const CanonicalCert& c : ps_universe(n)) {
      const Poset q = poset_from_cert(c);
      const PsStructure qs = only_structure(q);
      for (int a : qs.A_P) EXPECT_TRUE(is_rigid(remove_point(q, a))) << c.to_string();
    }
  }
}

TEST(PseudoSimilar, SeveralLargeComponentsFixture) {
  const Poset p = from_cert(fixtures::kSeveralLargeComponents);
  const PsStructure ps = only_structure(p);
  const auto large = large_components(p, ps, 0);
  ASSERT_GT(large.size(), 1U);
  // They are B, Φ[B], ..., each holding the matching orbit point.
  ElemSet b = large_components(p, ps, 0)[0];
  for (ElemSet c : large) {
    if (c.contains(ps.l)) b = c;
  }
  std::set<ElemSet> want(large.begin(), large.end());
  for (std::size_t j = 0; j < large.size(); ++j) {
    EXPECT_TRUE(want.count(b));
    EXPECT_TRUE(b.contains(ps.orbit[j]));
    want.erase(b);
    ElemSet next;
    for (int x : b) next = next.with(ps.phi[x]);
    b = next;
  }
  const APartition part = compute_partition(p, ps);
  bool long_segment = false;
  for (std::size_t i = 0; i + 1 < part.breakpoints.size(); ++i) {
    long_segment = long_segment || part.breakpoints[i + 1] - part.breakpoints[i] >= 2;
  }
  EXPECT_TRUE(long_segment);
  EXPECT_EQ(phi_hat(p, ps).size(), static_cast<std::size_t>(p.size()));
}

TEST(PseudoSimilar, PhiHatOnAllSmallInstances) {
  bool saw_r = false;
  for (int n = 3; n <= 8; ++n) {
    for (const CanonicalCert& c : ps_universe(n)) {
      const Poset p = poset_from_cert(c);
      const PsStructure ps = only_structure(p);
      const Morphism hat = phi_hat(p, ps);
      const int pre_h = ps.orbit[n - 2];
      const Poset dom = induced(p, ps.K_l.without(pre_h));
      const Poset cod = induced(p, ps.K_l.without(ps.l));
      EXPECT_EQ(isomorphisms(dom, cod).size(), 1U) << c.to_string();
      if (!ps.R_all.empty()) {
        bool differs = false;
        for (int x : ps.K_l.without(pre_h)) {
          if (ps.R_all.contains(ps.phi[x])) differs = differs || hat[x] != ps.phi[x];
        }
        EXPECT_TRUE(differs) << c.to_string();
        saw_r = true;
      }
    }
  }
  EXPECT_TRUE(saw_r);
}

TEST(PseudoSimilar, ReportIsJson) {
  const Poset c = Poset::chain(3);
  const std::string text = format_ps_structure(only_structure(c));
  EXPECT_NE(text.find("\"l\":0"), std::string::npos);
  EXPECT_NE(text.find("\"A_P\":[2]"), std::string::npos);
}
