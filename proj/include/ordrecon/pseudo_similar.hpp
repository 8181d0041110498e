#pragma once

#include <string>
#include <vector>

#include "ordrecon/canonical.hpp"
#include "ordrecon/poset.hpp"

namespace ordrecon {

/// A minmax pair of pseudo-similar points with a witness Φ : P∖{h} → P∖{l}.
/// phi is indexed by the labels of P; phi[h] = -1.
struct PsPair {
  int l = -1;
  int h = -1;
  Morphism phi;
};

/// The structure attached to a minmax pair in a connected poset.
struct PsStructure {
  int l = -1;
  int h = -1;
  Morphism phi;
  std::vector<ElemSet> C, L, R;
  ElemSet C_all, L_all, R_all;
  ElemSet K_l, K_h;
  /// orbit[j] = Φ^j(l) for j = 0..n-1; orbit[n-1] = h.
  std::vector<int> orbit;
  /// position[x] = j with Φ^j(l) = x.
  std::vector<int> position;
  /// A_P = {Φ^v(l), ..., Φ^{n-1}(l)} in orbit order.
  std::vector<int> A_P;
  int v = 0;
  /// d[p] for p in A_P, -1 elsewhere.
  std::vector<int> d;
};

/// Breakpoints k_0 = 0 < ... < k_X = n - v and blocks B_0 .. B_{n-v-1}.
struct APartition {
  std::vector<int> breakpoints;
  std::vector<ElemSet> blocks;
};

/// All (l, h) with l minimal, h maximal, l != h and P∖{h} ≅ P∖{l}, each with
/// the first witness in search order.
std::vector<PsPair> find_minmax_ps_pairs(const Poset& p);
/// Every witness Φ for the given pair.
std::vector<Morphism> ps_witnesses(const Poset& p, int l, int h);

/// Throws InvalidPairError unless p is connected, l minimal, h maximal and
/// phi an isomorphism P∖{h} → P∖{l}; OrbitError or StructureError when the
/// orbit or A_P is malformed.
PsStructure lh_decomposition(const Poset& p, int l, int h, const Morphism& phi);
PsStructure lh_decomposition(const Poset& p, const PsPair& pair);

/// Φ^0(l), ..., Φ^{n-1}(l). Throws OrbitError if the iteration leaves the
/// domain, repeats, or does not end at h.
std::vector<int> phi_orbit(const Poset& p, int l, const Morphism& phi);

/// Components of P minus {Φ^{v+k}(l), ..., Φ^{n-1}(l)} with as many elements
/// as the component containing l. Throws IndexError unless 0 <= k <= n-1-v.
std::vector<ElemSet> large_components(const Poset& p, const PsStructure& ps, int k);

/// Built by iterating the large-component construction; StructureError if a
/// step fails.
APartition compute_partition(const Poset& p, const PsStructure& ps);

/// x ↦ Φ(x) if Φ(x) ∉ R, else Φ²(x), on K_l∖{Φ^{-1}(h)}; -1 elsewhere.
/// StructureError if it is not an isomorphism onto K_l∖{l}.
Morphism phi_hat(const Poset& p, const PsStructure& ps);

/// True iff the filter deck of P∖{x} is the filter deck of P minus one
/// filter. Throws NotMaximalError unless x is maximal.
bool filter_shifting(const Poset& p, int x);

/// Certificates of all connected posets on n elements with a minmax pair,
/// sorted.
std::vector<CanonicalCert> ps_universe(int n, int jobs = 1);

/// Faster generator for larger n: P∖{h} is taken to be a connected
/// ps-poset K (from `smaller`, all sizes below n) plus copies of distinct
/// components of K∖{l}. Complete only given the structure of P∖{h} for
/// minmax pairs, so it is cross-checked against ps_universe where both run.
/// smaller[k] must hold the ps-posets on k elements for 2 <= k < n.
std::vector<CanonicalCert> ps_universe_structural(int n, const std::vector<std::vector<CanonicalCert>>& smaller,
                                                  int jobs = 1);

/// Text report: l, h, phi and the sets, one `key: value` per line.
std::string format_ps_structure(const PsStructure& ps);

}  // namespace ordrecon
