#include "ordrecon/pseudo_similar.hpp"

#include <algorithm>
#include <set>

#include <json.hpp>

#include "ordrecon/deck.hpp"
#include "ordrecon/enumerate.hpp"
#include "ordrecon/errors.hpp"
#include "ordrecon/parallel.hpp"

namespace ordrecon {

namespace {

// Lifts a morphism between P∖{from} and P∖{to} (compacted labels) to the
// labels of P, with -1 at `from`.
Morphism lift(const Poset& p, int from, int to, const Morphism& m) {
  const auto dom = p.ground().without(from).to_vector();
  const auto cod = p.ground().without(to).to_vector();
  Morphism out(p.size(), -1);
  for (std::size_t i = 0; i < dom.size(); ++i) out[dom[i]] = cod[m[i]];
  return out;
}

ElemSet image(const Morphism& phi, ElemSet s) {
  ElemSet out;
  for (int x : s) {
    if (phi[x] < 0) throw StructureError("Φ applied outside its domain");
    out = out.with(phi[x]);
  }
  return out;
}

ElemSet component_of(const Poset& p, ElemSet within, int x) {
  for (ElemSet c : components_within(p, within)) {
    if (c.contains(x)) return c;
  }
  return ElemSet();
}

bool is_partial_isomorphism(const Poset& p, ElemSet dom, ElemSet cod, const Morphism& m) {
  ElemSet img;
  for (int x : dom) {
    if (m[x] < 0 || !cod.contains(m[x]) || img.contains(m[x])) return false;
    img = img.with(m[x]);
  }
  if (img != cod) return false;
  for (int x : dom) {
    for (int y : dom) {
      if (p.less(x, y) != p.less(m[x], m[y])) return false;
    }
  }
  return true;
}

}  // namespace

std::vector<Morphism> ps_witnesses(const Poset& p, int l, int h) {
  std::vector<Morphism> out;
  for (const Morphism& m : isomorphisms(remove_point(p, h), remove_point(p, l))) out.push_back(lift(p, h, l, m));
  return out;
}

std::vector<PsPair> find_minmax_ps_pairs(const Poset& p) {
  std::vector<PsPair> out;
  const auto ext = extremal_sets(p);
  std::vector<CanonicalCert> card(p.size());
  for (int x : ext.extremal) card[x] = canonical_cert(remove_point(p, x));
  for (int l : ext.minimal) {
    for (int h : ext.maximal) {
      if (l == h || card[l] != card[h]) continue;
      Poset ph = remove_point(p, h), pl = remove_point(p, l);
      for_each_isomorphism(ph, pl, [&](const Morphism& m) {
        out.push_back(PsPair{l, h, lift(p, h, l, m)});
        return false;
      });
    }
  }
  return out;
}

std::vector<int> phi_orbit(const Poset& p, int l, const Morphism& phi) {
  const int n = p.size();
  if (static_cast<int>(phi.size()) != n || l < 0 || l >= n) throw OrbitError("Φ has the wrong shape");
  std::vector<int> orbit{l};
  ElemSet seen = ElemSet::single(l);
  while (static_cast<int>(orbit.size()) < n) {
    const int next = phi[orbit.back()];
    if (next < 0 || next >= n) {
      throw OrbitError("Φ^" + std::to_string(orbit.size()) + "(l) is undefined");
    }
    if (seen.contains(next)) throw OrbitError("Φ-orbit of l repeats element " + std::to_string(next));
    seen = seen.with(next);
    orbit.push_back(next);
  }
  if (phi[orbit.back()] != -1) throw OrbitError("Φ-orbit of l does not end at h");
  return orbit;
}

PsStructure lh_decomposition(const Poset& p, int l, int h, const Morphism& phi) {
  const int n = p.size();
  if (!is_connected(p)) throw InvalidPairError("lh decomposition needs a connected poset");
  if (l < 0 || l >= n || h < 0 || h >= n || l == h) throw InvalidPairError("bad element labels");
  if (!p.below(l).empty()) throw InvalidPairError("l is not minimal");
  if (!p.above(h).empty()) throw InvalidPairError("h is not maximal");
  if (static_cast<int>(phi.size()) != n || phi[h] != -1 ||
      !is_partial_isomorphism(p, p.ground().without(h), p.ground().without(l), phi)) {
    throw InvalidPairError("phi is not an isomorphism P∖{h} → P∖{l}");
  }
  PsStructure ps;
  ps.l = l;
  ps.h = h;
  ps.phi = phi;
  const ElemSet all = p.ground();
  ps.K_l = component_of(p, all.without(h), l);
  ps.K_h = component_of(p, all.without(l), h);
  const ElemSet rest = all.without(l).without(h);
  ps.C_all = ps.K_l & ps.K_h & rest;
  ps.L_all = rest - ps.K_h;
  ps.R_all = rest - ps.K_l;
  ps.C = components_within(p, ps.C_all);
  ps.L = components_within(p, ps.L_all);
  ps.R = components_within(p, ps.R_all);

  ps.orbit = phi_orbit(p, l, phi);
  ps.position.assign(n, -1);
  for (int j = 0; j < n; ++j) ps.position[ps.orbit[j]] = j;

  const int hdown = p.below(h).size();
  ElemSet ap;
  for (int x : extremal_sets(p).maximal) {
    if (p.below(x).size() == hdown) ap = ap.with(x);
  }
  ps.v = n - ap.size();
  for (int j = ps.v; j < n; ++j) {
    if (!ap.contains(ps.orbit[j])) throw StructureError("A_P is not a suffix of the Φ-orbit of l");
    ps.A_P.push_back(ps.orbit[j]);
  }
  ps.d.assign(n, -1);
  for (int j = 0; j + ps.v < n; ++j) ps.d[ps.orbit[ps.v + j]] = ps.orbit[j];
  return ps;
}

PsStructure lh_decomposition(const Poset& p, const PsPair& pair) { return lh_decomposition(p, pair.l, pair.h, pair.phi); }

std::vector<ElemSet> large_components(const Poset& p, const PsStructure& ps, int k) {
  const int n = p.size();
  if (k < 0 || k > n - 1 - ps.v) throw IndexError("large component index out of range");
  ElemSet removed;
  for (int j = ps.v + k; j < n; ++j) removed = removed.with(ps.orbit[j]);
  const auto comps = components_within(p, p.ground() - removed);
  int size = 0;
  for (ElemSet c : comps) {
    if (c.contains(ps.l)) size = c.size();
  }
  std::vector<ElemSet> out;
  for (ElemSet c : comps) {
    if (c.size() == size) out.push_back(c);
  }
  return out;
}

APartition compute_partition(const Poset& p, const PsStructure& ps) {
  const int n = p.size();
  const int len = n - ps.v;
  APartition part;
  part.breakpoints.push_back(0);
  int k = 0;
  while (k < len) {
    const auto large = large_components(p, ps, k);
    ElemSet b;
    for (ElemSet c : large) {
      if (c.contains(ps.l)) b = c;
    }
    const int m = static_cast<int>(large.size());
    if (k + m > len) throw StructureError("large components overrun A_P");
    std::set<ElemSet> expected(large.begin(), large.end());
    for (int j = 0; j < m; ++j) {
      if (!expected.count(b)) throw StructureError("Φ-image of a large component is not large");
      if (!b.contains(ps.orbit[k + j])) throw StructureError("Φ^k(l) is not in block B_k");
      expected.erase(b);
      part.blocks.push_back(b);
      if (j + 1 < m) b = image(ps.phi, b);
    }
    k += m;
    part.breakpoints.push_back(k);
  }
  return part;
}

Morphism phi_hat(const Poset& p, const PsStructure& ps) {
  const int n = p.size();
  const int pre_h = ps.orbit[n - 2];
  const ElemSet dom = ps.K_l.without(pre_h);
  Morphism out(n, -1);
  for (int x : dom) {
    const int y = ps.phi[x];
    out[x] = ps.R_all.contains(y) ? ps.phi[y] : y;
  }
  if (!is_partial_isomorphism(p, dom, ps.K_l.without(ps.l), out)) {
    throw StructureError("Φ-hat is not an isomorphism K_l∖{Φ^-1(h)} → K_l∖{l}");
  }
  return out;
}

bool filter_shifting(const Poset& p, int x) {
  if (x < 0 || x >= p.size() || !p.above(x).empty()) throw NotMaximalError("filter shifting needs a maximal element");
  CertMultiset parent = filter_deck(p);
  for (const auto& [cert, mult] : filter_deck(remove_point(p, x))) {
    auto it = parent.find(cert);
    if (it == parent.end() || it->second < mult) return false;
    it->second -= mult;
  }
  int left = 0;
  for (const auto& [cert, mult] : parent) left += mult;
  return left == 1;
}

std::vector<CanonicalCert> ps_universe(int n, int jobs) {
  if (n < 2) return {};
  const auto parents = enumerate(n - 1, UniverseFilter::All, jobs, std::max(n - 1, kDefaultEnumerationCap)).certs;
  auto parts = parallel_map<std::vector<CanonicalCert>>(parents.size(), jobs, [&](std::size_t i) {
    const Poset q = poset_from_cert(parents[i]);
    const int m = q.size();
    const Mask all = q.ground().bits();
    std::set<CanonicalCert> found;
    std::array<Mask, kMaxElements> rows{};
    for (Mask lower = 1; lower <= all; ++lower) {
      bool down_closed = true;
      for (int x : ElemSet(lower)) down_closed = down_closed && !(q.down_row(x) & ~lower);
      if (!down_closed) continue;
      for (int x = 0; x < m; ++x) rows[x] = q.up_row(x) | (((lower >> x) & 1U) ? (Mask{1} << m) : 0);
      rows[m] = 0;
      const Poset cand = Poset::from_closed_up_rows(m + 1, std::span<const Mask>(rows.data(), m + 1));
      if (!is_connected(cand)) continue;
      for (int l : extremal_sets(cand).minimal) {
        if (canonical_cert(remove_point(cand, l)) == parents[i]) {
          found.insert(canonical_cert(cand));
          break;
        }
      }
    }
    return std::vector<CanonicalCert>(found.begin(), found.end());
  });
  std::vector<CanonicalCert> out;
  for (auto& part : parts) out.insert(out.end(), part.begin(), part.end());
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

std::vector<CanonicalCert> ps_universe_structural(int n, const std::vector<std::vector<CanonicalCert>>& smaller,
                                                  int jobs) {
  if (n < 2) return {};
  // Candidate bases Q = P∖{h}.
  std::set<CanonicalCert> bases;
  if (n == 2) bases.insert(canonical_cert(Poset::chain(1)));
  for (int k = 2; k < n; ++k) {
    if (k >= static_cast<int>(smaller.size())) break;
    for (const CanonicalCert& kc : smaller[k]) {
      const Poset kp = poset_from_cert(kc);
      for (const PsPair& pair : find_minmax_ps_pairs(kp)) {
        const auto comps = components_within(kp, kp.ground().without(pair.l));
        const int c = static_cast<int>(comps.size());
        for (Mask pick = 0; pick < (Mask{1} << c); ++pick) {
          int size = k;
          for (int i : ElemSet(pick)) size += comps[i].size();
          if (size != n - 1) continue;
          Poset q = kp;
          for (int i : ElemSet(pick)) q = disjoint_union(q, induced(kp, comps[i]));
          bases.insert(canonical_cert(q));
        }
      }
    }
  }
  const std::vector<CanonicalCert> base_list(bases.begin(), bases.end());
  auto parts = parallel_map<std::vector<CanonicalCert>>(base_list.size(), jobs, [&](std::size_t i) {
    const Poset q = poset_from_cert(base_list[i]);
    const int m = q.size();
    const Mask all = q.ground().bits();
    std::set<CanonicalCert> found;
    std::array<Mask, kMaxElements> rows{};
    for (Mask lower = 1; lower <= all; ++lower) {
      bool down_closed = true;
      for (int x : ElemSet(lower)) down_closed = down_closed && !(q.down_row(x) & ~lower);
      if (!down_closed) continue;
      for (int x = 0; x < m; ++x) rows[x] = q.up_row(x) | (((lower >> x) & 1U) ? (Mask{1} << m) : 0);
      rows[m] = 0;
      const Poset cand = Poset::from_closed_up_rows(m + 1, std::span<const Mask>(rows.data(), m + 1));
      if (!is_connected(cand)) continue;
      for (int l : extremal_sets(cand).minimal) {
        if (l != m && canonical_cert(remove_point(cand, l)) == base_list[i]) {
          found.insert(canonical_cert(cand));
          break;
        }
      }
    }
    return std::vector<CanonicalCert>(found.begin(), found.end());
  });
  std::vector<CanonicalCert> out;
  for (auto& part : parts) out.insert(out.end(), part.begin(), part.end());
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

std::string format_ps_structure(const PsStructure& ps) {
  auto sets = [](const std::vector<ElemSet>& v) {
    nlohmann::json arr = nlohmann::json::array();
    for (ElemSet s : v) arr.push_back(s.to_vector());
    return arr;
  };
  nlohmann::json j;
  j["l"] = ps.l;
  j["h"] = ps.h;
  j["phi"] = ps.phi;
  j["C"] = sets(ps.C);
  j["L"] = sets(ps.L);
  j["R"] = sets(ps.R);
  j["K_l"] = ps.K_l.to_vector();
  j["K_h"] = ps.K_h.to_vector();
  j["orbit"] = ps.orbit;
  j["A_P"] = ps.A_P;
  j["v"] = ps.v;
  nlohmann::json d = nlohmann::json::object();
  for (int p : ps.A_P) d[std::to_string(p)] = ps.d[p];
  j["d"] = d;
  return j.dump();
}

}  // namespace ordrecon
