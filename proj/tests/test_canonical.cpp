#include <gtest/gtest.h>

#include <random>
#include <set>

#include "fixtures.hpp"
#include "oracles.hpp"
#include "ordrecon/canonical.hpp"
#include "ordrecon/errors.hpp"

using namespace ordrecon;
using fixtures::lambda_poset;
using fixtures::n_poset;
using fixtures::v_poset;

TEST(Canonical, RelabelingInvariance) {
  Poset relabeled = Poset::from_cover_pairs(3, {{2, 0}, {0, 1}});
  EXPECT_EQ(canonical_cert(Poset::chain(3)), canonical_cert(relabeled));
  EXPECT_NE(canonical_cert(v_poset()), canonical_cert(lambda_poset()));
}

TEST(Canonical, DistinctCertsOnFourElements) {
  std::set<CanonicalCert> certs;
  for (const Poset& p : oracle::upper_triangular_posets(4)) certs.insert(canonical_cert(p));
  EXPECT_EQ(certs.size(), oracle::naive_classes(4).size());
  EXPECT_EQ(certs.size(), 16u);
}

TEST(Canonical, CertIffIsomorphicExhaustive) {
  for (int n = 1; n <= 6; ++n) {
    auto reps = oracle::naive_classes(n);
    std::set<CanonicalCert> certs;
    for (const Poset& p : reps) certs.insert(canonical_cert(p));
    EXPECT_EQ(certs.size(), reps.size()) << "n=" << n;
    for (const Poset& p : oracle::upper_triangular_posets(n)) {
      EXPECT_TRUE(certs.count(canonical_cert(p)));
    }
  }
}

TEST(Canonical, CertStringRoundTrip) {
  std::mt19937 rng(3);
  EXPECT_EQ(canonical_cert(Poset::chain(1)).to_string(), "1:");
  EXPECT_EQ(canonical_cert(Poset::chain(2)).to_string(), "2:80");
  EXPECT_EQ(canonical_cert(Poset::antichain(3)).to_string(), "3:00");
  for (int trial = 0; trial < 300; ++trial) {
    const int n = 1 + trial % kMaxElements;
    Poset p = oracle::random_poset(rng, n, 0.2);
    CanonicalCert c = canonical_cert(p);
    EXPECT_EQ(CanonicalCert::parse(c.to_string()), c);
    Poset back = poset_from_cert(c);
    EXPECT_EQ(canonical_cert(back), c);
    EXPECT_TRUE(are_isomorphic(back, p));
    std::vector<int> perm(n);
    std::iota(perm.begin(), perm.end(), 0);
    std::shuffle(perm.begin(), perm.end(), rng);
    EXPECT_EQ(canonical_cert(oracle::relabel(p, perm)), c);
  }
  EXPECT_THROW(CanonicalCert::parse("3"), ParseError);
  EXPECT_THROW(CanonicalCert::parse("3:0"), ParseError);
  EXPECT_THROW(CanonicalCert::parse("3:01"), ParseError);
  EXPECT_THROW(CanonicalCert::parse("3:A0"), ParseError);
  EXPECT_THROW(poset_from_cert(CanonicalCert::parse("3:a0")), ParseError);
}

TEST(Canonical, CanonicalLabelingIsLinearExtension) {
  std::mt19937 rng(11);
  for (int trial = 0; trial < 200; ++trial) {
    Poset p = oracle::random_poset(rng, 2 + trial % 12, 0.3);
    auto form = canonical_form(p);
    for (int i = 0; i < p.size(); ++i)
      for (int j = 0; j < i; ++j) EXPECT_FALSE(p.less(form.labeling[i], form.labeling[j]));
  }
}

TEST(Canonical, SymmetricPosetsAreFast) {
  // Antichains and disjoint unions of many equal pieces stress the search.
  EXPECT_EQ(canonical_cert(Poset::antichain(16)).n, 16);
  Poset pieces = Poset::chain(2);
  for (int i = 0; i < 7; ++i) pieces = disjoint_union(pieces, Poset::chain(2));
  Poset relabeled = oracle::relabel(pieces, {15, 3, 8, 1, 0, 2, 4, 9, 6, 5, 7, 10, 12, 11, 14, 13});
  EXPECT_EQ(canonical_cert(pieces), canonical_cert(relabeled));
  Poset crown = Poset::from_cover_pairs(12, {{0, 6}, {0, 7}, {1, 7}, {1, 8}, {2, 8}, {2, 9}, {3, 9},
                                             {3, 10}, {4, 10}, {4, 11}, {5, 11}, {5, 6}});
  EXPECT_EQ(automorphisms(crown).size(), 12u);
}

TEST(Canonical, Automorphisms) {
  EXPECT_EQ(automorphisms(Poset::antichain(2)).size(), 2u);
  EXPECT_FALSE(is_rigid(Poset::antichain(2)));
  EXPECT_TRUE(is_rigid(Poset::chain(5)));
  EXPECT_EQ(automorphisms(Poset::chain(5)).size(), 1u);
  EXPECT_TRUE(isomorphisms(v_poset(), lambda_poset()).empty());
  EXPECT_EQ(dual_automorphisms(Poset::chain(2)).size(), 1u);
  EXPECT_EQ(dual_automorphisms(Poset::chain(2))[0], (Morphism{1, 0}));
  EXPECT_TRUE(dual_automorphisms(v_poset()).empty());
  EXPECT_EQ(dual_automorphisms(Poset::antichain(2)).size(), 2u);
}

TEST(Canonical, IsomorphismsMatchNaiveExhaustive) {
  for (int n = 1; n <= 5; ++n) {
    auto reps = oracle::naive_classes(n);
    for (const Poset& p : reps) {
      auto auts = automorphisms(p);
      EXPECT_EQ(static_cast<int>(auts.size()), oracle::naive_automorphism_count(p));
      for (const auto& m : auts) EXPECT_TRUE(is_isomorphism(p, p, m));
      for (const Poset& q : reps) {
        EXPECT_EQ(are_isomorphic(p, q), canonical_cert(p) == canonical_cert(q));
      }
    }
  }
}

TEST(Canonical, CountSubposets) {
  EXPECT_EQ(count_subposets(Poset::chain(2), Poset::chain(3)), 3);
  EXPECT_EQ(count_subposets(Poset::antichain(2), Poset::chain(3)), 0);
  EXPECT_EQ(count_subposets(v_poset(), n_poset()), oracle::brute_count_subposets(v_poset(), n_poset()));
  EXPECT_EQ(count_subposets(v_poset(), n_poset()), 1);
  EXPECT_THROW(count_subposets(Poset::chain(4), Poset::chain(3)), SizeError);
  auto fives = oracle::naive_classes(5);
  auto threes = oracle::naive_classes(3);
  for (const Poset& p : fives)
    for (const Poset& q : threes) EXPECT_EQ(count_subposets(q, p), oracle::brute_count_subposets(q, p));
}
