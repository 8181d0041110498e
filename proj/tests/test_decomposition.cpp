#include <gtest/gtest.h>

#include "fixtures.hpp"
#include "oracles.hpp"
#include "ordrecon/decomposition.hpp"
#include "ordrecon/enumerate.hpp"
#include "ordrecon/errors.hpp"

using namespace ordrecon;

namespace {

ElemSet brute_ntma(const Poset& p) {
  ElemSet out;
  for (Mask s = 1; s < p.ground().bits(); ++s) {
    if (std::popcount(s) >= 2 && oracle::brute_autonomous(p, ElemSet(s))) out |= ElemSet(s);
  }
  return out;
}

// W fence a<d, b<d, b<e, c<e plus a twin c' of c.
Poset fence_with_twin() { return Poset::from_cover_pairs(6, {{0, 3}, {1, 3}, {1, 4}, {2, 4}, {5, 4}}); }

}  // namespace

TEST(Decomposition, IsOrderAutonomous) {
  Poset n = fixtures::n_poset();
  for (int x = 0; x < 4; ++x) EXPECT_TRUE(is_order_autonomous(n, ElemSet::single(x)));
  EXPECT_TRUE(is_order_autonomous(fixtures::lambda_poset(), ElemSet({1, 2})));
  EXPECT_FALSE(is_order_autonomous(Poset::chain(3), ElemSet({0, 2})));
  EXPECT_EQ(is_order_autonomous(Poset::chain(3), ElemSet({0, 2})),
            oracle::brute_autonomous(Poset::chain(3), ElemSet({0, 2})));
  EXPECT_THROW(is_order_autonomous(n, ElemSet()), EmptySetError);
}

TEST(Decomposition, MaximalPartition) {
  auto d = maximal_autonomous_partition(fixtures::n_poset());
  EXPECT_EQ(d.blocks.size(), 4u);
  for (ElemSet b : d.blocks) EXPECT_EQ(b.size(), 1);
  EXPECT_THROW(maximal_autonomous_partition(fixtures::lambda_poset()), NotCoconnectedError);
  EXPECT_THROW(maximal_autonomous_partition(fixtures::v_poset()), NotCoconnectedError);
  EXPECT_THROW(maximal_autonomous_partition(Poset::antichain(2)), NotConnectedError);

  auto w = maximal_autonomous_partition(fence_with_twin());
  ASSERT_EQ(w.blocks.size(), 5u);
  EXPECT_EQ(w.blocks[w.block_of[2]], ElemSet({2, 5}));
  EXPECT_TRUE(w.index_poset.less(w.block_of[2], w.block_of[4]));
  EXPECT_FALSE(w.index_poset.less(w.block_of[0], w.block_of[4]));
}

TEST(Decomposition, NtmaPoints) {
  EXPECT_EQ(ntma_points(fixtures::lambda_poset()), ElemSet({1, 2}));
  EXPECT_TRUE(is_decomposable(fixtures::lambda_poset()));
  EXPECT_TRUE(ntma_points(fixtures::n_poset()).empty());
  EXPECT_FALSE(is_decomposable(fixtures::n_poset()));
  EXPECT_EQ(ntma_points(fence_with_twin()), ElemSet({2, 5}));
  EXPECT_EQ(ntma_points(fence_with_twin()), brute_ntma(fence_with_twin()));
}

TEST(Decomposition, ExhaustiveAgreesWithClosure) {
  for (int n = 1; n <= 8; ++n) {
    for (const Poset& p : to_posets(enumerate(n, UniverseFilter::All).certs)) {
      EXPECT_EQ(ntma_points(p), brute_ntma(p));
      if (!is_connected(p) || !is_coconnected(p)) continue;
      auto a = maximal_autonomous_partition_exhaustive(p);
      auto b = maximal_autonomous_partition_closure(p);
      ASSERT_EQ(a.blocks, b.blocks);
      EXPECT_EQ(a.index_poset, b.index_poset);
      ElemSet nontrivial;
      for (ElemSet blk : a.blocks) {
        EXPECT_TRUE(is_order_autonomous(p, blk));
        if (blk.size() > 1) nontrivial |= blk;
      }
      EXPECT_EQ(nontrivial, ntma_points(p));
    }
  }
}

TEST(Decomposition, IntersectionsOfAutonomousSets) {
  for (int n = 3; n <= 7; ++n) {
    for (const Poset& p : to_posets(enumerate(n, UniverseFilter::All).certs)) {
      auto sets = nontrivial_autonomous_sets(p);
      for (std::size_t i = 0; i < sets.size(); ++i) {
        for (std::size_t j = i + 1; j < sets.size(); ++j) {
          ElemSet cap = sets[i] & sets[j];
          if (!cap.empty()) EXPECT_TRUE(is_order_autonomous(p, cap));
        }
      }
    }
  }
}
