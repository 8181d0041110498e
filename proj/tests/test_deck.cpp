#include <gtest/gtest.h>

#include "fixtures.hpp"
#include "oracles.hpp"
#include "ordrecon/deck.hpp"
#include "ordrecon/enumerate.hpp"
#include "ordrecon/errors.hpp"

using namespace ordrecon;
using fixtures::lambda_poset;
using fixtures::v_poset;

namespace {
CanonicalCert cert(const Poset& p) { return canonical_cert(p); }
}  // namespace

TEST(Deck, Basics) {
  Deck c3 = deck(Poset::chain(3));
  EXPECT_EQ(c3.n, 3);
  EXPECT_EQ(c3.cards, (CertMultiset{{cert(Poset::chain(2)), 3}}));
  EXPECT_EQ(deck(v_poset()), deck(lambda_poset()));
  EXPECT_EQ(deck(v_poset()).cards,
            (CertMultiset{{cert(Poset::antichain(2)), 1}, {cert(Poset::chain(2)), 2}}));
  EXPECT_EQ(deck(Poset::antichain(2)).cards, (CertMultiset{{cert(Poset::chain(1)), 2}}));
}

TEST(Deck, PiDecks) {
  EXPECT_EQ(pi_deck(Poset::chain(4), PiPredicate::nonmaximal_rank(1)).cards,
            (CertMultiset{{cert(Poset::chain(3)), 1}}));
  EXPECT_EQ(pi_deck(lambda_poset(), PiPredicate::ntma()).cards, (CertMultiset{{cert(Poset::chain(2)), 2}}));
  EXPECT_EQ(pi_deck(v_poset(), PiPredicate::maximal()).cards, (CertMultiset{{cert(Poset::chain(2)), 2}}));
  for (const Poset& p : to_posets(enumerate(6, UniverseFilter::Connected).certs)) {
    int total = pi_deck(p, PiPredicate::maximal()).total();
    for (int r = 0; r < p.size(); ++r) total += pi_deck(p, PiPredicate::nonmaximal_rank(r)).total();
    EXPECT_EQ(total, p.size());
  }
}

TEST(Deck, KellyCounting) {
  EXPECT_EQ(kelly_count_from_deck(Poset::chain(2), deck(Poset::chain(4))), 6);
  EXPECT_THROW(kelly_count_from_deck(Poset::chain(2), deck(Poset::chain(3))), SizeError);
  EXPECT_THROW(kelly_count_from_deck(Poset::chain(5), deck(Poset::chain(5))), SizeError);
  for (const Poset& p : to_posets(enumerate(5, UniverseFilter::All).certs)) {
    Deck d = deck(p);
    EXPECT_EQ(kelly_count_from_deck(Poset::chain(1), d), 5);
    EXPECT_EQ(kelly_count_from_deck(v_poset(), d), count_subposets(v_poset(), p));
    EXPECT_EQ(kelly_count_from_deck(v_poset(), d), oracle::brute_count_subposets(v_poset(), p));
  }
  Deck broken = deck(Poset::chain(4));
  broken.cards.clear();
  broken.add(cert(Poset::chain(3)), 3);
  broken.add(cert(Poset::antichain(3)), 1);
  EXPECT_THROW(kelly_count_from_deck(Poset::chain(2), broken), ArithmeticError);
}

TEST(Deck, KellyProfileMatchesDirectCounts) {
  for (int n = 4; n <= 6; ++n) {
    for (const Poset& p : to_posets(enumerate(n, UniverseFilter::All).certs)) {
      EXPECT_EQ(kelly_profile_from_deck(deck(p)), subposet_profile(p, n - 1));
    }
  }
}

TEST(Deck, IdealFilterNeighborhood) {
  EXPECT_EQ(filter_deck(Poset::chain(3)),
            (CertMultiset{{cert(Poset::chain(1)), 1}, {cert(Poset::chain(2)), 1}, {cert(Poset::chain(3)), 1}}));
  EXPECT_EQ(ideal_deck(v_poset()), (CertMultiset{{cert(Poset::chain(1)), 1}, {cert(Poset::chain(2)), 2}}));
  EXPECT_EQ(neighborhood_deck(Poset::antichain(4), 0), (CertMultiset{{cert(Poset::chain(1)), 4}}));
  EXPECT_EQ(ideal_size_sequence(v_poset()), (std::vector<int>{1, 2, 2}));
}

TEST(Deck, Inversion) {
  auto chain = invert_deck(deck(Poset::chain(4)));
  ASSERT_EQ(chain.size(), 1u);
  EXPECT_EQ(cert(chain[0]), cert(Poset::chain(4)));
  auto vl = invert_deck(deck(v_poset()));
  ASSERT_EQ(vl.size(), 2u);
  std::set<CanonicalCert> got{cert(vl[0]), cert(vl[1])};
  EXPECT_EQ(got, (std::set<CanonicalCert>{cert(v_poset()), cert(lambda_poset())}));
  Deck bad = deck(Poset::chain(4));
  bad.add(cert(Poset::chain(2)));
  EXPECT_THROW(invert_deck(bad), InconsistentDeckError);
  Deck sizes;
  sizes.n = 3;
  sizes.add(cert(Poset::chain(2)), 2);
  sizes.add(cert(Poset::chain(3)), 1);
  EXPECT_THROW(invert_deck(sizes), InconsistentDeckError);
  Deck impossible;
  impossible.n = 4;
  impossible.add(cert(Poset::chain(3)), 3);
  impossible.add(cert(Poset::antichain(3)), 1);
  EXPECT_THROW(invert_deck(impossible), InconsistentDeckError);
}

TEST(Deck, InversionMatchesBruteForceExtensions) {
  // Brute force: every one-point extension of every card, filtered by deck.
  for (int n = 2; n <= 5; ++n) {
    auto all = to_posets(enumerate(n, UniverseFilter::All).certs);
    for (const Poset& p : all) {
      Deck d = deck(p);
      std::set<CanonicalCert> expect;
      for (const Poset& q : all) {
        if (deck(q) == d) expect.insert(cert(q));
      }
      std::set<CanonicalCert> got;
      for (const Poset& w : invert_deck(d)) got.insert(cert(w));
      EXPECT_EQ(got, expect);
    }
  }
}

TEST(Deck, Groups) {
  auto u3 = to_posets(enumerate(3, UniverseFilter::All).certs);
  auto g3 = deck_groups(u3);
  EXPECT_EQ(g3.size(), 4u);
  int pairs = 0;
  for (const auto& g : g3) {
    if (g.size() == 2) {
      ++pairs;
      std::set<CanonicalCert> got{cert(u3[g[0]]), cert(u3[g[1]])};
      EXPECT_EQ(got, (std::set<CanonicalCert>{cert(v_poset()), cert(lambda_poset())}));
    }
  }
  EXPECT_EQ(pairs, 1);
  for (int n = 4; n <= 5; ++n) {
    auto u = to_posets(enumerate(n, UniverseFilter::All).certs);
    for (const auto& g : deck_groups(u)) EXPECT_EQ(g.size(), 1u);
  }
}

TEST(Deck, FileRoundTrip) {
  for (const Poset& p : to_posets(enumerate(6, UniverseFilter::All).certs)) {
    Deck d = deck(p);
    std::string text = format_deck(d);
    EXPECT_EQ(parse_deck(text), d);
    EXPECT_EQ(format_deck(parse_deck(text)), text);
  }
  EXPECT_THROW(parse_deck("3 2:80\n"), ParseError);
  EXPECT_THROW(parse_deck("deck n=3\n3 2:8\n"), ParseError);
  EXPECT_THROW(parse_deck("deck n=3\n2 2:80\n"), InconsistentDeckError);
  EXPECT_THROW(parse_deck("deck n=3\n3 3:00\n"), InconsistentDeckError);
  EXPECT_THROW(parse_deck("deck n=3\n1 2:80\n2 2:80\n"), ParseError);
}
