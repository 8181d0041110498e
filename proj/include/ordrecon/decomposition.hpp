#pragma once

#include <vector>

#include "ordrecon/poset.hpp"

namespace ordrecon {

/// Partition of a connected coconnected poset into its maximal
/// order-autonomous proper subsets, with the induced order on blocks.
struct AutonomousDecomposition {
  std::vector<ElemSet> blocks;
  /// Block t < block u iff every element of t is below every element of u.
  Poset index_poset;
  std::vector<int> block_of;
};

/// Throws EmptySetError for an empty set.
bool is_order_autonomous(const Poset& p, ElemSet a);
/// Smallest order-autonomous superset of a (a nonempty).
ElemSet autonomous_closure(const Poset& p, ElemSet a);

/// Every order-autonomous set A with 2 <= |A| < n, by subset search.
std::vector<ElemSet> nontrivial_autonomous_sets(const Poset& p);

/// Requires p connected and coconnected (NotConnectedError,
/// NotCoconnectedError otherwise). Uses subset search for n <= 12 and
/// pairwise closures above that.
AutonomousDecomposition maximal_autonomous_partition(const Poset& p);
AutonomousDecomposition maximal_autonomous_partition_exhaustive(const Poset& p);
AutonomousDecomposition maximal_autonomous_partition_closure(const Poset& p);

bool is_decomposable(const Poset& p);
/// Union of all order-autonomous sets A with 2 <= |A| < n.
ElemSet ntma_points(const Poset& p);

}  // namespace ordrecon
