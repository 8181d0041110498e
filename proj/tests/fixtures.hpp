#pragma once

#include "ordrecon/poset.hpp"

namespace fixtures {

using ordrecon::Poset;

inline Poset v_poset() { return Poset::from_cover_pairs(3, {{0, 1}, {0, 2}}); }
inline Poset lambda_poset() { return Poset::from_cover_pairs(3, {{1, 0}, {2, 0}}); }
inline Poset n_poset() { return Poset::from_cover_pairs(4, {{0, 2}, {1, 2}, {1, 3}}); }
inline Poset crown4() { return Poset::from_cover_pairs(4, {{0, 2}, {0, 3}, {1, 2}, {1, 3}}); }

}  // namespace fixtures

namespace fixtures {

// Connected posets with a minmax pair, found by searching by increasing size.
// Smallest one that is not a chain.
inline constexpr const char* kSmallestPsNonChain = "4:38";
// Smallest ps-poset with a maximal card P∖{a}, a in A_P, that is not rigid.
inline constexpr const char* kNonRigidMaximalCard = "6:09e0";
// Smallest ps-poset where P minus the whole of A_P has two large components.
inline constexpr const char* kSeveralLargeComponents = "12:020109085550000480";

}  // namespace fixtures
