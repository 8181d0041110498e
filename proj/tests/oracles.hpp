#pragma once

// Slow reference implementations used only by tests.

#include <algorithm>
#include <numeric>
#include <random>
#include <vector>

#include "ordrecon/poset.hpp"

namespace oracle {

using ordrecon::ElemSet;
using ordrecon::Mask;
using ordrecon::Poset;

inline bool naive_iso(const Poset& p, const Poset& q) {
  const int n = p.size();
  if (q.size() != n) return false;
  std::vector<int> perm(n);
  std::iota(perm.begin(), perm.end(), 0);
  do {
    bool ok = true;
    for (int x = 0; x < n && ok; ++x) {
      for (int y = 0; y < n && ok; ++y) ok = p.less(x, y) == q.less(perm[x], perm[y]);
    }
    if (ok) return true;
  } while (std::next_permutation(perm.begin(), perm.end()));
  return false;
}

inline int naive_automorphism_count(const Poset& p) {
  const int n = p.size();
  std::vector<int> perm(n);
  std::iota(perm.begin(), perm.end(), 0);
  int count = 0;
  do {
    bool ok = true;
    for (int x = 0; x < n && ok; ++x) {
      for (int y = 0; y < n && ok; ++y) ok = p.less(x, y) == p.less(perm[x], perm[y]);
    }
    count += ok;
  } while (std::next_permutation(perm.begin(), perm.end()));
  return count;
}

// All strict orders whose identity labeling is a linear extension, i.e.
// every upper triangular transitive relation. Each isomorphism class occurs.
inline std::vector<Poset> upper_triangular_posets(int n) {
  std::vector<std::pair<int, int>> pairs;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) pairs.emplace_back(i, j);
  std::vector<Poset> out;
  const long long total = 1LL << pairs.size();
  for (long long bits = 0; bits < total; ++bits) {
    std::vector<Mask> rows(n, 0);
    for (std::size_t k = 0; k < pairs.size(); ++k) {
      if ((bits >> k) & 1) rows[pairs[k].first] |= Mask{1} << pairs[k].second;
    }
    bool closed = true;
    for (int x = 0; x < n && closed; ++x) {
      for (int y : ElemSet(rows[x])) {
        if (rows[y] & ~rows[x]) {
          closed = false;
          break;
        }
      }
    }
    if (closed) out.push_back(Poset::from_closed_up_rows(n, rows));
  }
  return out;
}

inline std::vector<int> degree_key(const Poset& p) {
  std::vector<int> key;
  for (int x = 0; x < p.size(); ++x) {
    key.push_back(std::popcount(p.down_row(x)) * 32 + std::popcount(p.up_row(x)));
  }
  std::sort(key.begin(), key.end());
  return key;
}

// Isomorphism class representatives by pairwise naive isomorphism tests.
inline std::vector<Poset> naive_classes(int n) {
  std::vector<Poset> reps;
  std::vector<std::vector<int>> keys;
  for (const Poset& p : upper_triangular_posets(n)) {
    auto key = degree_key(p);
    bool found = false;
    for (std::size_t i = 0; i < reps.size() && !found; ++i) {
      found = keys[i] == key && naive_iso(reps[i], p);
    }
    if (!found) {
      reps.push_back(p);
      keys.push_back(key);
    }
  }
  return reps;
}

inline bool is_chain_set(const Poset& p, Mask s) {
  for (int x : ElemSet(s))
    for (int y : ElemSet(s))
      if (x != y && !p.comparable(x, y)) return false;
  return true;
}

// Longest chain (edges) through x by scanning all subsets.
inline int brute_longest_chain_through(const Poset& p, int x) {
  int best = 0;
  for (Mask s = 0; s < (Mask{1} << p.size()); ++s) {
    if (((s >> x) & 1) && is_chain_set(p, s)) best = std::max(best, std::popcount(s) - 1);
  }
  return best;
}

inline int brute_rank(const Poset& p, int x) {
  int best = 0;
  for (Mask s = 0; s < (Mask{1} << p.size()); ++s) {
    if (!((s >> x) & 1) || !is_chain_set(p, s)) continue;
    bool x_top = true;
    for (int y : ElemSet(s)) x_top = x_top && (y == x || p.less(y, x));
    if (x_top) best = std::max(best, std::popcount(s) - 1);
  }
  return best;
}

inline long long brute_count_subposets(const Poset& q, const Poset& p) {
  long long count = 0;
  for (Mask s = 0; s < (Mask{1} << p.size()); ++s) {
    if (std::popcount(s) == q.size() && naive_iso(ordrecon::induced(p, ElemSet(s), true), q)) ++count;
  }
  return count;
}

inline bool brute_autonomous(const Poset& p, ElemSet a) {
  for (int x = 0; x < p.size(); ++x) {
    if (a.contains(x)) continue;
    bool some_above = false, all_above = true, some_below = false, all_below = true;
    for (int y : a) {
      some_above = some_above || p.less(y, x);
      all_above = all_above && p.less(y, x);
      some_below = some_below || p.less(x, y);
      all_below = all_below && p.less(x, y);
    }
    if ((some_above && !all_above) || (some_below && !all_below)) return false;
  }
  return true;
}

inline Poset relabel(const Poset& p, const std::vector<int>& perm) {
  std::vector<std::pair<int, int>> pairs;
  for (int x = 0; x < p.size(); ++x)
    for (int y : p.above(x)) pairs.emplace_back(perm[x], perm[y]);
  return Poset::from_cover_pairs(p.size(), pairs);
}

inline Poset random_poset(std::mt19937& rng, int n, double density) {
  std::bernoulli_distribution coin(density);
  std::vector<std::pair<int, int>> pairs;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      if (coin(rng)) pairs.emplace_back(i, j);
  std::vector<int> perm(n);
  std::iota(perm.begin(), perm.end(), 0);
  std::shuffle(perm.begin(), perm.end(), rng);
  for (auto& [a, b] : pairs) {
    a = perm[a];
    b = perm[b];
  }
  return Poset::from_cover_pairs(n, pairs);
}

}  // namespace oracle
