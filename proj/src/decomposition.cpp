#include "ordrecon/decomposition.hpp"

#include <algorithm>

#include "ordrecon/errors.hpp"

namespace ordrecon {

namespace {

// Outside points related to only part of a.
ElemSet splitters(const Poset& p, ElemSet a) {
  ElemSet out;
  for (int x : p.ground() - a) {
    const ElemSet lo = p.below(x) & a;
    const ElemSet hi = p.above(x) & a;
    if ((!lo.empty() && lo != a) || (!hi.empty() && hi != a)) out = out.with(x);
  }
  return out;
}

void require_connected_coconnected(const Poset& p) {
  if (!is_connected(p)) throw NotConnectedError("autonomous partition needs a connected poset");
  if (!is_coconnected(p)) throw NotCoconnectedError("autonomous partition needs a coconnected poset");
}

AutonomousDecomposition from_blocks(const Poset& p, std::vector<ElemSet> blocks) {
  std::sort(blocks.begin(), blocks.end(), [](ElemSet a, ElemSet b) { return a.first() < b.first(); });
  AutonomousDecomposition d;
  d.block_of.assign(p.size(), -1);
  for (std::size_t t = 0; t < blocks.size(); ++t) {
    for (int x : blocks[t]) {
      if (d.block_of[x] >= 0) throw StructureError("maximal autonomous sets overlap");
      d.block_of[x] = static_cast<int>(t);
    }
  }
  std::vector<std::pair<int, int>> pairs;
  for (std::size_t t = 0; t < blocks.size(); ++t) {
    for (std::size_t u = 0; u < blocks.size(); ++u) {
      if (t == u) continue;
      bool below = true;
      for (int x : blocks[t]) below = below && blocks[u].is_subset_of(p.above(x));
      if (below) pairs.emplace_back(static_cast<int>(t), static_cast<int>(u));
    }
  }
  d.index_poset = Poset::from_cover_pairs(static_cast<int>(blocks.size()), pairs);
  d.blocks = std::move(blocks);
  return d;
}

}  // namespace

bool is_order_autonomous(const Poset& p, ElemSet a) {
  if (a.empty()) throw EmptySetError("autonomy of the empty set");
  return splitters(p, a).empty();
}

ElemSet autonomous_closure(const Poset& p, ElemSet a) {
  if (a.empty()) throw EmptySetError("autonomous closure of the empty set");
  for (;;) {
    const ElemSet s = splitters(p, a);
    if (s.empty()) return a;
    a |= s;
  }
}

std::vector<ElemSet> nontrivial_autonomous_sets(const Poset& p) {
  std::vector<ElemSet> out;
  const int n = p.size();
  const Mask full = p.ground().bits();
  for (Mask s = 1; s < full; ++s) {
    if (std::popcount(s) < 2) continue;
    if (splitters(p, ElemSet(s)).empty()) out.emplace_back(s);
  }
  (void)n;
  return out;
}

AutonomousDecomposition maximal_autonomous_partition_exhaustive(const Poset& p) {
  require_connected_coconnected(p);
  const auto sets = nontrivial_autonomous_sets(p);
  std::vector<ElemSet> blocks;
  ElemSet covered;
  for (ElemSet a : sets) {
    bool maximal = true;
    for (ElemSet b : sets) {
      if (b != a && a.is_subset_of(b)) {
        maximal = false;
        break;
      }
    }
    if (maximal) {
      blocks.push_back(a);
      covered |= a;
    }
  }
  for (int x : p.ground() - covered) blocks.push_back(ElemSet::single(x));
  return from_blocks(p, std::move(blocks));
}

AutonomousDecomposition maximal_autonomous_partition_closure(const Poset& p) {
  require_connected_coconnected(p);
  std::vector<ElemSet> blocks;
  ElemSet done;
  const ElemSet all = p.ground();
  for (int x : all) {
    if (done.contains(x)) continue;
    ElemSet block = ElemSet::single(x);
    for (int y : all.without(x)) {
      const ElemSet c = autonomous_closure(p, ElemSet({x, y}));
      if (c != all) block |= c;
    }
    blocks.push_back(block);
    done |= block;
  }
  return from_blocks(p, std::move(blocks));
}

AutonomousDecomposition maximal_autonomous_partition(const Poset& p) {
  if (p.size() <= 12) return maximal_autonomous_partition_exhaustive(p);
  return maximal_autonomous_partition_closure(p);
}

ElemSet ntma_points(const Poset& p) {
  ElemSet out;
  const ElemSet all = p.ground();
  for (int x : all) {
    for (int y : all.without(x)) {
      if (out.contains(x) && out.contains(y)) continue;
      const ElemSet c = autonomous_closure(p, ElemSet({x, y}));
      if (c != all) out |= c;
    }
  }
  return out;
}

bool is_decomposable(const Poset& p) { return !ntma_points(p).empty(); }

}  // namespace ordrecon
