#include "ordrecon/properties.hpp"

#include <algorithm>
#include <map>
#include <mutex>
#include <random>
#include <set>
#include <sstream>

#include <json.hpp>

#include "ordrecon/cache.hpp"
#include "ordrecon/decomposition.hpp"
#include "ordrecon/deck.hpp"
#include "ordrecon/errors.hpp"
#include "ordrecon/parallel.hpp"
#include "ordrecon/pseudo_similar.hpp"
#include "ordrecon/recon.hpp"

namespace ordrecon {

namespace {

using Diag = std::optional<std::string>;

// Where the posets of a property come from.
enum class Source { All, Connected, ConnectedCoconnected, Ps };

struct Entry {
  PropertyInfo info;
  Source source = Source::All;
  /// Ps-sourced structure suites also run on the searched fixtures.
  bool with_fixtures = false;
  UnitCheck check;
  /// Grouping key for UnitKind::Group.
  std::function<std::string(const Poset&)> group_key;
};

// Ps-posets found by search: the smallest non-chain, the smallest one with a
// non-rigid maximal card, and the smallest with several large components.
constexpr const char* kPsFixtures[] = {"4:38", "6:09e0", "12:020109085550000480"};

std::string seq_string(const std::vector<int>& v) {
  std::string s;
  for (int x : v) s += std::to_string(x) + ",";
  return s;
}

int compact(ElemSet within, int x) { return ElemSet(within.bits() & ((Mask{1} << x) - 1)).size(); }

// Image of a set under a partial map; nullopt when some point has no image.
std::optional<ElemSet> image(const Morphism& m, ElemSet s) {
  ElemSet out;
  for (int x : s) {
    if (m[x] < 0) return std::nullopt;
    out = out.with(m[x]);
  }
  return out;
}

int up_size(const Poset& p, int x) { return p.above(x).size() + 1; }

std::string pair_string(const PsStructure& ps) {
  return "(l=" + std::to_string(ps.l) + ",h=" + std::to_string(ps.h) + ")";
}

// Runs fn on the structure of every minmax pair and every witness.
Diag for_each_structure(const Poset& p, const std::function<Diag(const PsStructure&)>& fn) {
  const auto pairs = find_minmax_ps_pairs(p);
  if (pairs.empty()) return "no minmax pair";
  for (const PsPair& pair : pairs) {
    for (const Morphism& phi : ps_witnesses(p, pair.l, pair.h)) {
      const PsStructure ps = lh_decomposition(p, pair.l, pair.h, phi);
      if (Diag d = fn(ps)) return *d + " at " + pair_string(ps);
    }
  }
  return std::nullopt;
}

Diag single(const std::vector<Poset>& ps, const std::function<Diag(const Poset&)>& fn) { return fn(ps.front()); }

bool is_chain(const Poset& p) { return p.relation_count() == p.size() * (p.size() - 1) / 2; }

// True when (l, h) given in q's labels is a minmax pseudo-similar pair of q.
bool is_minmax_ps_pair(const Poset& q, int l, int h) {
  if (l == h) return q.size() == 1;
  return q.below(l).empty() && q.above(h).empty() && are_isomorphic(remove_point(q, l), remove_point(q, h));
}

std::map<int, Deck> nonempty_decks(const Poset& p, PiPredicate (*pred)(int)) {
  std::map<int, Deck> out;
  for (int r = 0; r <= height(p); ++r) {
    Deck d = pi_deck(p, pred(r));
    if (d.total() > 0) out.emplace(r, std::move(d));
  }
  return out;
}

// ---------------------------------------------------------------------------
// Reconstruction and decks

Diag check_singleton_group(const std::vector<Poset>& g) {
  if (g.size() > 1) return std::to_string(g.size()) + " posets share one deck";
  return std::nullopt;
}

Diag check_kelly(const Poset& p) {
  const Deck d = deck(p);
  const auto truth = subposet_profile(p, p.size() - 1);
  const auto from_deck = kelly_profile_from_deck(d);
  if (truth != from_deck) return "subposet counts from the deck differ from direct counts";
  // The profile already holds every count; also call the per-Q entry point,
  // which must agree. Types absent from P count zero on both sides.
  for (const auto& [q, count] : truth) {
    const long long got = kelly_count_from_deck(poset_from_cert(q), d);
    if (got != count) {
      return "s(" + q.to_string() + ") = " + std::to_string(count) + " but the deck gives " + std::to_string(got);
    }
  }
  return std::nullopt;
}

struct LabeledInvariants {
  std::map<int, Deck> nonmaximal, ntma;
  Deck extremal;
  CertMultiset ideals, filters;
  std::vector<CertMultiset> neighborhoods;
  std::vector<int> ideal_sizes;

  bool operator==(const LabeledInvariants&) const = default;
};

LabeledInvariants labeled_invariants(const Poset& p) {
  LabeledInvariants li;
  li.nonmaximal = nonempty_decks(p, &PiPredicate::nonmaximal_rank);
  li.nonmaximal.erase(0);
  li.ntma = nonempty_decks(p, &PiPredicate::ntma_rank);
  li.extremal = pi_deck(p, PiPredicate::extremal());
  li.ideals = ideal_deck(p);
  li.filters = filter_deck(p);
  for (int k = 0; k <= height(p); ++k) li.neighborhoods.push_back(neighborhood_deck(p, k));
  li.ideal_sizes = ideal_size_sequence(p);
  return li;
}

Diag check_thm_1_2(const std::vector<Poset>& g) {
  const Poset& p = g.front();
  const LabeledInvariants truth = labeled_invariants(p);
  for (std::size_t i = 1; i < g.size(); ++i) {
    if (!(labeled_invariants(g[i]) == truth)) return "deck group members differ in a deck-determined parameter";
  }
  const Deck d = deck(p);
  if (nonmaximal_rank_decks(d) != truth.nonmaximal) return "nonmaximal rank decks differ from the labeled ones";
  if (extremal_deck(d) != truth.extremal) return "extremal deck differs from the labeled one";
  if (!truth.ntma.empty() && is_coconnected(p)) {
    if (ntma_rank_decks(d) != truth.ntma) return "NTMA rank decks differ from the labeled ones";
  }
  return std::nullopt;
}

Diag check_thm_1_3(const Poset& p) {
  const auto found = invert_deck(deck(p));
  if (found.size() != 1) return "inverter returned " + std::to_string(found.size()) + " posets";
  if (canonical_cert(found.front()) != canonical_cert(p)) return "inverter returned a different poset";
  return std::nullopt;
}

Diag check_inverter_soundness(const Poset& p) {
  const CanonicalCert c = canonical_cert(p);
  for (const Poset& q : invert_deck(deck(p))) {
    if (canonical_cert(q) == c) return std::nullopt;
  }
  return "poset missing from the inverse of its own deck";
}

// ---------------------------------------------------------------------------
// Structure around a minmax pair

Diag check_lem_3_2(const Poset& p) {
  return for_each_structure(p, [&](const PsStructure& ps) -> Diag {
    const auto kl_image = image(ps.phi, ps.K_l);
    if (!kl_image || *kl_image != ps.K_h) return "Φ[K_l] is not K_h";
    if (ps.R.size() != ps.L.size()) return "different numbers of small components on the two sides";
    std::set<ElemSet> hit;
    const std::set<ElemSet> ls(ps.L.begin(), ps.L.end());
    for (ElemSet r : ps.R) {
      const auto img = image(ps.phi, r);
      if (!img || !ls.contains(*img) || !hit.insert(*img).second) return "Φ does not carry the R_i onto the L_i";
    }
    int g = -1;
    for (int x = 0; x < p.size(); ++x) {
      if (ps.phi[x] == ps.h) g = x;
    }
    if (g < 0 || !ps.K_l.contains(g)) return "Φ^{-1}(h) is not in K_l";
    const Poset kl = induced(p, ps.K_l);
    if (!is_minmax_ps_pair(kl, compact(ps.K_l, ps.l), compact(ps.K_l, g))) return "(l, Φ^{-1}(h)) fails on K_l";
    const int fl = ps.phi[ps.l];
    if (fl < 0 || !ps.K_h.contains(fl)) return "Φ(l) is not in K_h";
    const Poset kh = induced(p, ps.K_h);
    if (!is_minmax_ps_pair(kh, compact(ps.K_h, fl), compact(ps.K_h, ps.h))) return "(Φ(l), h) fails on K_h";
    return std::nullopt;
  });
}

Diag check_lem_3_6_1(const Poset& p) {
  return for_each_structure(p, [&](const PsStructure& ps) -> Diag {
    const auto orbit = phi_orbit(p, ps.l, ps.phi);
    ElemSet seen;
    for (int x : orbit) seen = seen.with(x);
    if (seen != p.ground() || orbit.back() != ps.h) return "orbit of l does not run through P ending at h";
    return std::nullopt;
  });
}

Diag check_lem_3_6_2(const Poset& p) {
  const auto pairs = find_minmax_ps_pairs(p);
  if (pairs.size() != 1) return std::to_string(pairs.size()) + " minmax pairs";
  return std::nullopt;
}

Diag check_lem_3_6_3(const Poset& p) {
  return for_each_structure(p, [&](const PsStructure& ps) -> Diag {
    std::set<int> sizes;
    for (ElemSet c : components_within(p, p.ground().without(ps.l))) {
      if (!sizes.insert(c.size()).second) return "two components of P∖{l} have " + std::to_string(c.size()) + " points";
    }
    return std::nullopt;
  });
}

Diag check_lem_3_6_4(const Poset& p) {
  if (!is_rigid(p)) return "P has a nontrivial automorphism";
  for (const PsPair& pair : find_minmax_ps_pairs(p)) {
    const auto witnesses = ps_witnesses(p, pair.l, pair.h);
    if (witnesses.size() != 1) return std::to_string(witnesses.size()) + " witnesses for one pair";
    for (ElemSet c : components_within(p, p.ground().without(pair.l))) {
      if (!is_rigid(induced(p, c))) return "component " + c.to_string() + " of P∖{l} is not rigid";
    }
  }
  return std::nullopt;
}

Diag check_lem_3_6_5(const Poset& p) {
  if (is_chain(p)) return std::nullopt;
  return for_each_structure(p, [&](const PsStructure& ps) -> Diag {
    for (ElemSet a : nontrivial_autonomous_sets(p)) {
      if (a.contains(ps.l) || a.contains(ps.h)) return "autonomous set " + a.to_string() + " contains l or h";
    }
    return std::nullopt;
  });
}

Diag check_lem_3_6_6(const Poset& p) {
  if (is_chain(p)) return std::nullopt;
  return for_each_structure(p, [&](const PsStructure& ps) -> Diag {
    const CanonicalCert card = canonical_cert(remove_point(p, ps.l));
    for (int a = 0; a < p.size(); ++a) {
      if (a != ps.l && a != ps.h && canonical_cert(remove_point(p, a)) == card) {
        return "point " + std::to_string(a) + " has the card of l";
      }
    }
    return std::nullopt;
  });
}

Diag check_lem_3_6_7(const Poset& p) {
  const auto duals = dual_automorphisms(p);
  if (duals.size() != 1) return std::to_string(duals.size()) + " dual automorphisms";
  return for_each_structure(p, [&](const PsStructure& ps) -> Diag {
    if (duals[0][ps.l] != ps.h || duals[0][ps.h] != ps.l) return "the dual automorphism does not swap l and h";
    return std::nullopt;
  });
}

Diag check_prop_3_3(const Poset& p) {
  const int n = p.size();
  const auto rp = rank_profile(p);
  std::vector<CanonicalCert> cards;
  for (int x = 0; x < n; ++x) cards.push_back(canonical_cert(remove_point(p, x)));
  bool lhs = false;
  for (int x = 0; x < n && !lhs; ++x) {
    for (int y = 0; y < n && !lhs; ++y) lhs = rp.rank[x] < rp.rank[y] && cards[x] == cards[y];
  }
  std::vector<ElemSet> sets = nontrivial_autonomous_sets(p);
  if (n >= 2) sets.push_back(p.ground());
  bool rhs = false;
  for (ElemSet s : sets) {
    const Poset q = induced(p, s);
    if (is_connected(q) && !find_minmax_ps_pairs(q).empty()) {
      rhs = true;
      break;
    }
  }
  if (lhs && !rhs) return "isomorphic cards at different ranks without an autonomous ps subset";
  if (rhs && !lhs) return "autonomous ps subset without isomorphic cards at different ranks";
  return std::nullopt;
}

std::string ideal_key(const Poset& p) { return std::to_string(p.size()) + "|" + seq_string(ideal_size_sequence(p)); }

Diag check_thm_3_4(const std::vector<Poset>& g) {
  for (std::size_t i = 1; i < g.size(); ++i) {
    const auto a = find_minmax_ps_pairs(g[0]);
    const auto b = find_minmax_ps_pairs(g[i]);
    if (a.empty() || b.empty()) return "member without a minmax pair";
    bool found = false;
    for_each_isomorphism(g[0], g[i], [&](const Morphism& m) {
      found = m[a[0].l] == b[0].l && m[a[0].h] == b[0].h;
      return !found;
    });
    if (!found) return "equal ideal size sequences without an isomorphism matching the pairs";
  }
  return std::nullopt;
}

// Multiset inclusion of certificate lists.
bool contains_all(std::vector<CanonicalCert> big, const std::vector<CanonicalCert>& small) {
  std::multiset<CanonicalCert> pool(big.begin(), big.end());
  for (const CanonicalCert& c : small) {
    auto it = pool.find(c);
    if (it == pool.end()) return false;
    pool.erase(it);
  }
  return true;
}

std::vector<CanonicalCert> component_certs(const Poset& q, ElemSet within) {
  std::vector<CanonicalCert> out;
  for (ElemSet c : components_within(q, within)) out.push_back(canonical_cert(q, c));
  return out;
}

// Some card K has no extremal m (maximal, or minimal when `minimal`) such
// that the components of K∖{m} include the small components.
bool some_card_avoids(const Poset& p, const std::vector<CanonicalCert>& small, bool minimal) {
  for (int y = 0; y < p.size(); ++y) {
    const Poset k = remove_point(p, y);
    const auto ext = extremal_sets(k);
    bool any = false;
    for (int m : minimal ? ext.minimal : ext.maximal) {
      if (contains_all(component_certs(k, k.ground().without(m)), small)) {
        any = true;
        break;
      }
    }
    if (!any) return true;
  }
  return false;
}

Diag check_lem_5_1(const Poset& p) {
  return for_each_structure(p, [&](const PsStructure& ps) -> Diag {
    if (!cutpoint_queries(p, ps.l).is_cutpoint || !cutpoint_queries(p, ps.h).is_cutpoint) return std::nullopt;
    std::vector<CanonicalCert> small;
    for (ElemSet r : ps.R) small.push_back(canonical_cert(p, r));
    if (small.empty()) return std::nullopt;
    if (!some_card_avoids(p, small, false)) return "every card has a maximal point leaving the small components";
    if (!some_card_avoids(p, small, true)) return "every card has a minimal point leaving the small components";
    return std::nullopt;
  });
}

Diag check_lem_5_4(const Poset& p) {
  const int n = p.size();
  return for_each_structure(p, [&](const PsStructure& ps) -> Diag {
    const auto& o = ps.orbit;
    const int last = n - 1 - ps.v;
    for (int j = 0; j < n; ++j) {
      if ((up_size(p, o[j]) == up_size(p, ps.l)) != (j <= last)) {
        return "|↑Φ^" + std::to_string(j) + "(l)| breaks the pattern";
      }
    }
    auto leq = [&](int a, int b) { return a == b || p.less(a, b); };
    for (int j = 0; j <= last; ++j) {
      if (!leq(o[j], o[ps.v + j])) return "Φ^" + std::to_string(j) + "(l) is not below its partner in A_P";
      for (int k = 0; k <= last; ++k) {
        if (leq(o[j], o[ps.v + k]) && k > j) {
          return "Φ^" + std::to_string(j) + "(l) lies below Φ^" + std::to_string(ps.v + k) + "(l)";
        }
      }
    }
    return std::nullopt;
  });
}

Diag check_lem_6_1(const Poset& p) {
  return for_each_structure(p, [&](const PsStructure& ps) -> Diag {
    if (ps.K_l.size() < 2) return std::nullopt;
    int g = -1;
    for (int x = 0; x < p.size(); ++x) {
      if (ps.phi[x] == ps.h) g = x;
    }
    const ElemSet from = ps.K_l.without(g);
    const ElemSet to = ps.K_l.without(ps.l);
    const auto isos = isomorphisms(induced(p, from, true), induced(p, to, true));
    if (isos.size() != 1) return std::to_string(isos.size()) + " isomorphisms K_l∖{Φ^{-1}(h)} → K_l∖{l}";
    const Morphism hat = phi_hat(p, ps);
    const auto from_v = from.to_vector();
    const auto to_v = to.to_vector();
    for (std::size_t i = 0; i < from_v.size(); ++i) {
      if (hat[from_v[i]] != to_v[isos[0][i]]) return "the unique isomorphism is not Φ̂";
    }
    return std::nullopt;
  });
}

Diag check_lem_6_2(const Poset& p) {
  const int n = p.size();
  return for_each_structure(p, [&](const PsStructure& ps) -> Diag {
    for (int w = 0; w <= n - 1 - ps.v; ++w) {
      ElemSet hp;
      for (int j = ps.v + w; j < n; ++j) hp = hp.with(ps.orbit[j]);
      const auto comps = components_within(p, p.ground() - hp);
      ElemSet b;
      for (ElemSet c : comps) {
        if (c.contains(ps.l)) b = c;
      }
      const std::string at = " for w=" + std::to_string(w);
      if (b.size() > 1) {
        const Poset q = induced(p, b);
        const int lb = compact(b, ps.l);
        bool has = false;
        for (const PsPair& pr : find_minmax_ps_pairs(q)) has = has || pr.l == lb;
        if (!has) return "B has no minmax pair at l" + at;
      }
      std::set<ElemSet> same;
      for (ElemSet c : comps) {
        if (c.size() > b.size()) return "a component is larger than B" + at;
        if (c.size() == b.size()) same.insert(c);
      }
      std::set<ElemSet> orbit_sets;
      ElemSet cur = b;
      for (std::size_t i = 0; i < same.size(); ++i) {
        if (!same.contains(cur) || !orbit_sets.insert(cur).second) return "large components are not B, Φ[B], ..." + at;
        if (i + 1 == same.size()) break;
        const auto next = image(ps.phi, cur);
        if (!next) return "Φ leaves its domain on a large component" + at;
        cur = *next;
      }
    }
    return std::nullopt;
  });
}

Diag check_lem_6_3(const Poset& p) {
  const int n = p.size();
  return for_each_structure(p, [&](const PsStructure& ps) -> Diag {
    const APartition part = compute_partition(p, ps);
    const auto& k = part.breakpoints;
    const int top = n - ps.v;
    if (k.empty() || k.front() != 0 || k.back() != top) return "breakpoints do not run from 0 to n-v";
    if (static_cast<int>(part.blocks.size()) != top) return "wrong number of blocks";
    for (std::size_t x = 0; x + 1 < k.size(); ++x) {
      if (k[x] >= k[x + 1]) return "breakpoints not increasing";
      const auto large = large_components(p, ps, k[x]);
      const std::set<ElemSet> want(large.begin(), large.end());
      std::set<ElemSet> got;
      for (int j = k[x]; j < k[x + 1]; ++j) got.insert(part.blocks[j]);
      if (want != got || static_cast<int>(large.size()) != k[x + 1] - k[x]) {
        return "blocks of segment " + std::to_string(x) + " are not its large components";
      }
      for (int j = k[x]; j < k[x + 1]; ++j) {
        if (!part.blocks[j].contains(ps.orbit[j])) return "Φ^" + std::to_string(j) + "(l) not in B_" + std::to_string(j);
        if (j + 1 < k[x + 1]) {
          const auto img = image(ps.phi, part.blocks[j]);
          if (!img || *img != part.blocks[j + 1]) return "Φ[B_" + std::to_string(j) + "] is not the next block";
        }
      }
    }
    return std::nullopt;
  });
}

Diag check_lem_6_4(const Poset& p) {
  return for_each_structure(p, [&](const PsStructure& ps) -> Diag {
    const int target = up_size(p, ps.l);
    std::vector<int> qualifying;
    for (int a : ps.A_P) {
      int count = 0;
      for (int y : p.below(a)) count += up_size(p, y) == target;
      if (count == 1) qualifying.push_back(a);
    }
    auto shift = [](int x, int removed) { return x - (x > removed ? 1 : 0); };
    for (int a : qualifying) {
      for (int b : qualifying) {
        bool bad = false;
        for_each_isomorphism(remove_point(p, a), remove_point(p, b), [&](const Morphism& psi) {
          bad = psi[shift(ps.d[a], a)] != shift(ps.d[b], b);
          return !bad;
        });
        if (bad) return "an isomorphism P∖{" + std::to_string(a) + "} → P∖{" + std::to_string(b) + "} misses d";
      }
    }
    return std::nullopt;
  });
}

// ---------------------------------------------------------------------------
// Corollaries and library invariants

Diag check_width3(const std::vector<Poset>& g) {
  const bool any = std::any_of(g.begin(), g.end(), [](const Poset& p) { return width(p) == 3; });
  if (!any) return std::nullopt;
  const Deck mn = pi_deck(g[0], PiPredicate::minimal());
  const Deck mx = pi_deck(g[0], PiPredicate::maximal());
  for (std::size_t i = 1; i < g.size(); ++i) {
    if (pi_deck(g[i], PiPredicate::minimal()) != mn) return "minimal decks differ within a deck group";
    if (pi_deck(g[i], PiPredicate::maximal()) != mx) return "maximal decks differ within a deck group";
  }
  return std::nullopt;
}

Diag check_dismantlable(const Poset& p) {
  const bool got = recognize_dismantlable(deck(p));
  if (got != is_dismantlable(p)) return std::string("deck says ") + (got ? "dismantlable" : "not dismantlable");
  return std::nullopt;
}

Diag check_decomposition(const Poset& p) {
  const AutonomousDecomposition dec = maximal_autonomous_partition(p);
  std::vector<ElemSet> cand = nontrivial_autonomous_sets(p);
  for (int x = 0; x < p.size(); ++x) cand.push_back(ElemSet::single(x));
  std::set<ElemSet> maximal;
  for (ElemSet a : cand) {
    bool is_max = true;
    for (ElemSet b : cand) is_max = is_max && !(a != b && a.is_subset_of(b));
    if (is_max) maximal.insert(a);
  }
  ElemSet cover;
  for (ElemSet a : maximal) {
    if (cover.intersects(a)) return "maximal autonomous sets overlap";
    cover |= a;
  }
  if (cover != p.ground()) return "maximal autonomous sets miss a point";
  if (maximal != std::set<ElemSet>(dec.blocks.begin(), dec.blocks.end())) return "partition differs from subset search";
  return std::nullopt;
}

Diag check_autonomous_intersection(const Poset& p) {
  const auto sets = nontrivial_autonomous_sets(p);
  for (ElemSet a : sets) {
    for (ElemSet b : sets) {
      const ElemSet c = a & b;
      if (!c.empty() && !is_order_autonomous(p, c)) return a.to_string() + " ∩ " + b.to_string() + " not autonomous";
    }
  }
  return std::nullopt;
}

Diag check_filter_shift(const Poset& p) {
  std::map<CanonicalCert, int> maximal_cards;
  for (int x : extremal_sets(p).maximal) ++maximal_cards[canonical_cert(remove_point(p, x))];
  for (const FilterShiftTag& t : classify_by_filter_shift(deck(p))) {
    if (t.maximal && maximal_cards[t.card] < t.multiplicity) return "card " + t.card.to_string() + " flagged too often";
  }
  return std::nullopt;
}

Diag check_recon_special(const Poset& p) {
  const auto got = reconstruct_special(deck(p));
  if (got && *got != canonical_cert(p)) return "rebuilt " + got->to_string();
  const Poset q = induced(p, p.ground() - extremal_sets(p).minimal, true);
  if (!got && q.size() > 0 && is_connected(q) && !find_minmax_ps_pairs(q).empty()) {
    return "P∖min(P) is connected with a minmax pair but nothing was rebuilt";
  }
  return std::nullopt;
}

Diag check_nonext_rank(const Poset& p) {
  const auto rp = rank_profile(p);
  const auto ext = extremal_sets(p);
  const ElemSet ntma = ntma_points(p);
  std::map<std::pair<CanonicalCert, int>, int> truth;
  for (int x = 0; x < p.size(); ++x) {
    if (!ext.extremal.contains(x) && !ntma.contains(x)) ++truth[{canonical_cert(remove_point(p, x)), rp.rank[x]}];
  }
  std::map<std::pair<CanonicalCert, int>, int> got;
  for (const TaggedCard& t : nonextremal_rank_assignment(deck(p))) {
    if (t.kind == CardKind::Nonextremal) got[{t.card, t.rank.value_or(-1)}] += t.multiplicity;
  }
  if (got != truth) return "nonextremal cards or their ranks differ from the labeled ones";
  return std::nullopt;
}

std::string seq_key(const Poset& p) {
  return ideal_key(p) + "|" + seq_string(filter_size_sequence(p));
}

Diag check_cert_iso(const std::vector<Poset>& g) {
  for (const Poset& p : g) {
    const CanonicalCert c = canonical_cert(p);
    std::mt19937_64 rng(c.digest());
    for (int round = 0; round < 3; ++round) {
      std::vector<int> perm(p.size());
      for (int i = 0; i < p.size(); ++i) perm[i] = i;
      std::shuffle(perm.begin(), perm.end(), rng);
      std::vector<Mask> rows(p.size());
      for (int x = 0; x < p.size(); ++x) {
        for (int y : p.above(x)) rows[perm[x]] |= Mask{1} << perm[y];
      }
      const Poset q = Poset::from_closed_up_rows(p.size(), rows);
      if (canonical_cert(q) != c) return "relabeling changes the certificate";
      if (!is_isomorphism(p, q, perm)) return "relabeling is not an isomorphism";
    }
  }
  for (std::size_t i = 0; i < g.size(); ++i) {
    for (std::size_t j = i + 1; j < g.size(); ++j) {
      if (are_isomorphic(g[i], g[j])) return "isomorphic posets with different certificates";
    }
  }
  return std::nullopt;
}

// ---------------------------------------------------------------------------

UnitCheck per_poset(Diag (*fn)(const Poset&)) {
  return [fn](const std::vector<Poset>& ps) { return single(ps, fn); };
}

std::vector<Entry> build_registry() {
  std::vector<Entry> r;
  auto add = [&](std::string id, std::string anchor, Source src, int min_n, int max_n, UnitKind unit, UnitCheck check,
                 bool fixtures = false, std::function<std::string(const Poset&)> key = {}) {
    static const char* names[] = {"all", "connected", "connected-coconnected", "connected-ps"};
    Entry e;
    e.info = PropertyInfo{std::move(id), std::move(anchor), names[static_cast<int>(src)], min_n, max_n, unit};
    e.source = src;
    e.with_fixtures = fixtures;
    e.check = std::move(check);
    e.group_key = std::move(key);
    r.push_back(std::move(e));
  };
  using U = UnitKind;
  add("recon-conjecture", "every poset with at least 4 points is determined by its deck", Source::All, 3, 8,
      U::DeckGroup, check_singleton_group);
  add("kelly", "subposet counts below n are read off the deck", Source::All, 4, 7, U::Poset, per_poset(check_kelly));
  add("thm-1.2", "removing nonmaximal points of rank r gives a deck-determined card multiset", Source::Connected, 4, 8,
      U::DeckGroup, check_thm_1_2);
  add("thm-1.3", "posets with a minmax pair of pseudo-similar points are reconstructible", Source::Ps, 4, 9, U::Poset,
      per_poset(check_thm_1_3));
  add("inverter-soundness", "a poset is among the inverses of its own deck", Source::All, 2, 7, U::Poset,
      per_poset(check_inverter_soundness));
  add("lem-3.2", "Φ carries K_l onto K_h and the small components onto each other", Source::Ps, 2, 9, U::Poset,
      per_poset(check_lem_3_2), true);
  add("lem-3.6.1", "the orbit of l under Φ runs through every point", Source::Ps, 2, 9, U::Poset,
      per_poset(check_lem_3_6_1), true);
  add("lem-3.6.2", "the only minmax pair of pseudo-similar points", Source::Ps, 2, 9, U::Poset,
      per_poset(check_lem_3_6_2), true);
  add("lem-3.6.3", "components of P∖{l} have distinct sizes", Source::Ps, 2, 9, U::Poset, per_poset(check_lem_3_6_3),
      true);
  add("lem-3.6.4", "P and the components of P∖{l} are rigid", Source::Ps, 2, 9, U::Poset, per_poset(check_lem_3_6_4),
      true);
  add("lem-3.6.5", "{l} and {h} lie in no nontrivial autonomous set unless P is a chain", Source::Ps, 2, 9, U::Poset,
      per_poset(check_lem_3_6_5), true);
  add("lem-3.6.6", "only l and h have the card of l unless P is a chain", Source::Ps, 2, 9, U::Poset,
      per_poset(check_lem_3_6_6), true);
  add("lem-3.6.7", "exactly one dual automorphism, and it swaps l and h", Source::Ps, 2, 9, U::Poset,
      per_poset(check_lem_3_6_7), true);
  add("prop-3.3", "isomorphic cards at different ranks iff an autonomous connected ps subset", Source::All, 1, 8,
      U::Poset, per_poset(check_prop_3_3));
  add("thm-3.4", "equal ideal size sequences force an isomorphism matching the pairs", Source::Ps, 2, 9, U::Group,
      check_thm_3_4, true, ideal_key);
  add("lem-5.1", "with l and h cutpoints some card avoids the small components", Source::Ps, 2, 9, U::Poset,
      per_poset(check_lem_5_1), true);
  add("lem-5.4", "up-set sizes and comparabilities along the orbit of l", Source::Ps, 2, 9, U::Poset,
      per_poset(check_lem_5_4), true);
  add("lem-6.1", "Φ̂ is the unique isomorphism K_l∖{Φ^{-1}(h)} → K_l∖{l}", Source::Ps, 2, 9, U::Poset,
      per_poset(check_lem_6_1), true);
  add("lem-6.2", "the large components below a suffix of A_P are B, Φ[B], ...", Source::Ps, 2, 9, U::Poset,
      per_poset(check_lem_6_2), true);
  add("lem-6.3", "A_P splits into segments whose blocks Φ cycles", Source::Ps, 2, 9, U::Poset,
      per_poset(check_lem_6_3), true);
  add("lem-6.4", "Then Ψ(d_a) = d_b", Source::Ps, 2, 9, U::Poset, per_poset(check_lem_6_4), true);
  add("cor-7.1-width3", "minimal and maximal decks are deck-determined at width 3", Source::All, 4, 8, U::DeckGroup,
      check_width3);
  add("cor-dismantlable", "dismantlable posets are recognizable", Source::Connected, 4, 8, U::Poset,
      per_poset(check_dismantlable));
  add("decomposition-uniqueness", "maximal autonomous proper subsets partition a coconnected poset",
      Source::ConnectedCoconnected, 3, 8, U::Poset, per_poset(check_decomposition));
  add("autonomous-intersection", "overlapping autonomous sets meet in an autonomous set", Source::All, 3, 7,
      U::Poset, per_poset(check_autonomous_intersection));
  add("filter-shift-soundness", "cards flagged by filter shifting come from maximal points", Source::Connected, 4, 8,
      U::Poset, per_poset(check_filter_shift));
  add("recon-special", "posets whose upper part has a minmax pair are rebuilt from the deck", Source::Connected, 4, 8,
      U::Poset, per_poset(check_recon_special));
  add("nonext-rank", "nonextremal non-NTMA cards and their ranks are deck-determined", Source::Connected, 4, 8,
      U::Poset, per_poset(check_nonext_rank));
  add("cert-iso", "equal certificates iff isomorphic", Source::All, 1, 7, U::Group, check_cert_iso, false, seq_key);
  return r;
}

const std::vector<Entry>& entries() {
  static const std::vector<Entry> r = build_registry();
  return r;
}

const Entry& entry(const std::string& id) {
  for (const Entry& e : entries()) {
    if (e.info.id == id) return e;
  }
  throw UnknownPropertyError("unknown property '" + id + "'");
}

UniverseFilter to_filter(Source s) {
  switch (s) {
    case Source::Connected: return UniverseFilter::Connected;
    case Source::ConnectedCoconnected: return UniverseFilter::ConnectedCoconnected;
    default: return UniverseFilter::All;
  }
}

// Connected ps-posets by size, complete search up to 9 and the structural
// generator above. Kept for the life of the process; the lists do not
// depend on jobs.
std::vector<std::vector<CanonicalCert>> ps_by_size(int max_n, int jobs) {
  static std::mutex mu;
  static std::vector<std::vector<CanonicalCert>> memo(2);
  std::lock_guard<std::mutex> lock(mu);
  for (int n = static_cast<int>(memo.size()); n <= max_n; ++n) {
    memo.push_back(n <= 9 ? ps_universe(n, jobs) : ps_universe_structural(n, memo, jobs));
  }
  return {memo.begin(), memo.begin() + std::max(max_n + 1, 2)};
}

std::vector<std::vector<CanonicalCert>> units_for(const Entry& e, int max_n, const RunOptions& opts) {
  std::vector<std::vector<CanonicalCert>> units;
  const int lo = std::max(e.info.min_n, 1);
  std::vector<std::vector<CanonicalCert>> layers;
  if (e.source == Source::Ps) {
    auto ps = ps_by_size(max_n, opts.jobs);
    for (int n = lo; n <= max_n; ++n) layers.push_back(n < static_cast<int>(ps.size()) ? ps[n] : std::vector<CanonicalCert>{});
    if (e.with_fixtures) {
      std::vector<CanonicalCert> extra;
      for (const char* f : kPsFixtures) {
        const CanonicalCert c = CanonicalCert::parse(f);
        if (c.n < lo || c.n > max_n) extra.push_back(c);
      }
      layers.push_back(extra);
    }
  } else {
    for (int n = lo; n <= max_n; ++n) {
      layers.push_back(enumerate_cached(n, to_filter(e.source), opts.cache_dir, opts.jobs).certs);
    }
  }
  for (const auto& certs : layers) {
    if (certs.empty()) continue;
    switch (e.info.unit) {
      case UnitKind::Poset:
        for (const CanonicalCert& c : certs) units.push_back({c});
        break;
      case UnitKind::DeckGroup: {
        const int n = certs.front().n;
        const UniverseFilter f = to_filter(e.source);
        std::optional<std::vector<std::vector<int>>> groups;
        if (!opts.cache_dir.empty()) groups = load_deck_groups(opts.cache_dir, n, f);
        if (!groups) {
          const auto decks = parallel_map<Deck>(certs.size(), opts.jobs,
                                                [&](std::size_t i) { return deck(poset_from_cert(certs[i])); });
          std::map<Deck, std::vector<int>> by_deck;
          for (std::size_t i = 0; i < decks.size(); ++i) by_deck[decks[i]].push_back(static_cast<int>(i));
          groups.emplace();
          for (auto& [d, idx] : by_deck) groups->push_back(std::move(idx));
          std::sort(groups->begin(), groups->end());
          if (!opts.cache_dir.empty()) save_deck_groups(opts.cache_dir, n, f, *groups);
        }
        for (const auto& g : *groups) {
          std::vector<CanonicalCert> u;
          for (int i : g) u.push_back(certs.at(i));
          units.push_back(std::move(u));
        }
        break;
      }
      case UnitKind::Group: {
        const auto keys = parallel_map<std::string>(certs.size(), opts.jobs,
                                                    [&](std::size_t i) { return e.group_key(poset_from_cert(certs[i])); });
        std::map<std::string, std::vector<CanonicalCert>> by_key;
        for (std::size_t i = 0; i < certs.size(); ++i) by_key[keys[i]].push_back(certs[i]);
        std::vector<std::vector<CanonicalCert>> groups;
        for (auto& [k, g] : by_key) groups.push_back(std::move(g));
        std::sort(groups.begin(), groups.end());
        for (auto& g : groups) units.push_back(std::move(g));
        break;
      }
    }
  }
  return units;
}

Diag run_check(const Entry& e, const std::vector<CanonicalCert>& unit) {
  try {
    std::vector<Poset> ps;
    for (const CanonicalCert& c : unit) ps.push_back(poset_from_cert(c));
    return e.check(ps);
  } catch (const std::exception& ex) {
    return std::string("error: ") + ex.what();
  }
}

}  // namespace

const std::vector<PropertyInfo>& property_registry() {
  static const std::vector<PropertyInfo> infos = [] {
    std::vector<PropertyInfo> out;
    for (const Entry& e : entries()) out.push_back(e.info);
    return out;
  }();
  return infos;
}

const PropertyInfo& property_info(const std::string& id) { return entry(id).info; }

std::vector<Finding> run_property(const std::string& id, int max_n, const RunOptions& opts) {
  const Entry& e = entry(id);
  if (max_n < 1 || max_n > kMaxElements) throw SizeError("max_n out of range");
  const auto units = units_for(e, max_n, opts);
  const auto diags =
      parallel_map<Diag>(units.size(), opts.jobs, [&](std::size_t i) { return run_check(e, units[i]); });
  std::vector<Finding> out;
  for (std::size_t i = 0; i < units.size(); ++i) {
    if (diags[i]) out.push_back(Finding{id, max_n, units[i], *diags[i]});
  }
  return out;
}

std::string format_finding(const Finding& f) {
  std::string s = "FAIL " + f.property + " witnesses=";
  for (std::size_t i = 0; i < f.witnesses.size(); ++i) s += (i ? "," : "") + f.witnesses[i].to_string();
  return s;
}

std::string findings_to_json(const std::vector<Finding>& findings) {
  nlohmann::ordered_json doc;
  doc["format"] = 1;
  doc["findings"] = nlohmann::ordered_json::array();
  for (const Finding& f : findings) {
    nlohmann::ordered_json j;
    j["property"] = f.property;
    j["max_n"] = f.max_n;
    j["witnesses"] = nlohmann::ordered_json::array();
    for (const CanonicalCert& c : f.witnesses) j["witnesses"].push_back(c.to_string());
    j["diagnostic"] = f.diagnostic;
    doc["findings"].push_back(std::move(j));
  }
  return doc.dump(2) + "\n";
}

std::vector<Finding> findings_from_json(const std::string& text) {
  std::vector<Finding> out;
  try {
    const auto doc = nlohmann::json::parse(text);
    for (const auto& j : doc.at("findings")) {
      Finding f;
      f.property = j.at("property").get<std::string>();
      f.max_n = j.at("max_n").get<int>();
      for (const auto& w : j.at("witnesses")) f.witnesses.push_back(CanonicalCert::parse(w.get<std::string>()));
      f.diagnostic = j.value("diagnostic", "");
      out.push_back(std::move(f));
    }
  } catch (const nlohmann::json::exception& ex) {
    throw ParseError(std::string("bad findings file: ") + ex.what());
  }
  return out;
}

std::vector<Finding> replay_findings(const std::vector<Finding>& findings) {
  std::vector<Finding> out;
  for (const Finding& f : findings) {
    if (Diag d = run_check(entry(f.property), f.witnesses)) {
      Finding again = f;
      again.diagnostic = *d;
      out.push_back(std::move(again));
    }
  }
  return out;
}

}  // namespace ordrecon
