#include "ordrecon/recon.hpp"

#include <algorithm>
#include <functional>
#include <set>
#include <sstream>

#include "ordrecon/decomposition.hpp"
#include "ordrecon/pseudo_similar.hpp"

namespace ordrecon {

DeckOracle::DeckOracle(Deck d) : deck_(std::move(d)) {}

const std::vector<Poset>& DeckOracle::witnesses() const {
  if (!witnesses_) witnesses_ = invert_deck(deck_);
  return *witnesses_;
}

long long DeckOracle::copies(const Poset& q) const {
  if (q.size() == 0) return 1;
  if (q.size() > n()) return 0;
  if (q.size() == n() || n() <= 3) {
    return parameter("copies of " + canonical_cert(q).to_string(),
                     [&](const Poset& p) { return count_subposets(q, p); });
  }
  if (!profile_) profile_ = kelly_profile_from_deck(deck_);
  const auto it = profile_->find(canonical_cert(q));
  return it == profile_->end() ? 0 : it->second;
}

Deck dual_deck(const Deck& d) {
  Deck out;
  out.n = d.n;
  for (const auto& [cert, mult] : d.cards) out.add(canonical_cert(dual(poset_from_cert(cert))), mult);
  return out;
}

DeckOracle DeckOracle::dual() const {
  DeckOracle out(dual_deck(deck_));
  if (witnesses_) {
    std::vector<Poset> ws;
    for (const Poset& p : *witnesses_) ws.push_back(ordrecon::dual(p));
    out.witnesses_ = std::move(ws);
  }
  return out;
}

std::string to_string(CardKind k) {
  switch (k) {
    case CardKind::Minimal: return "minimal";
    case CardKind::Maximal: return "maximal";
    case CardKind::Extremal: return "extremal";
    case CardKind::Nonextremal: return "nonextremal";
    case CardKind::Ntma: return "ntma";
  }
  return "?";
}

namespace {

using Trace = std::vector<std::string>;

bool is_chain(const Poset& p) { return p.relation_count() == p.size() * (p.size() - 1) / 2; }

ElemSet minimal_points(const Poset& p) { return extremal_sets(p).minimal; }
ElemSet maximal_points(const Poset& p) { return extremal_sets(p).maximal; }

Poset upper_part(const Poset& p) { return induced(p, p.ground() - minimal_points(p), true); }

CanonicalCert upper_part_cert(const Poset& p) { return canonical_cert(upper_part(p)); }

// Elements outside a below every element of a.
ElemSet lower_bounds(const Poset& p, ElemSet a) {
  ElemSet out = p.ground() - a;
  for (int x : a) out &= p.below(x);
  return out;
}

ElemSet upper_bounds(const Poset& p, ElemSet a) {
  ElemSet out = p.ground() - a;
  for (int x : a) out &= p.above(x);
  return out;
}

// Sum of |↓z| over the points z of each rank.
std::vector<long long> level_sums(const Poset& p) {
  const auto rp = rank_profile(p);
  std::vector<long long> out(p.size() == 0 ? 0 : rp.height + 1, 0);
  for (int x = 0; x < p.size(); ++x) out[rp.rank[x]] += p.below(x).size() + 1;
  return out;
}

long long at(const std::vector<long long>& v, int j) { return j < static_cast<int>(v.size()) ? v[j] : 0; }

std::vector<int> minimal_up_sizes(const Poset& p) {
  std::vector<int> out;
  for (int m : minimal_points(p)) out.push_back(p.above(m).size() + 1);
  std::sort(out.begin(), out.end());
  return out;
}

CertMultiset ntma_card_multiset(const Poset& p) {
  CertMultiset out;
  for (int x : ntma_points(p)) ++out[canonical_cert(remove_point(p, x))];
  return out;
}

// Maximal cards whose removed point has exactly one lower cover.
CertMultiset unique_lower_cover_maximal_cards(const Poset& p) {
  CertMultiset out;
  for (int x : maximal_points(p)) {
    if (p.lower_covers(x).size() == 1) ++out[canonical_cert(remove_point(p, x))];
  }
  return out;
}

/// A minimal card Z = P∖{z} together with the minimal points of Z that are
/// not minimal in P, in the canonical labels of Z (least image over Aut(Z)).
/// z has as few upper bounds as possible, so it is never below a set that
/// some other minimal point misses.
struct MarkedCard {
  CanonicalCert cert;
  Mask marked = 0;
  auto operator<=>(const MarkedCard&) const = default;
};

MarkedCard marked_minimal_card(const Poset& p) {
  const ElemSet mins = minimal_points(p);
  int fewest = kMaxElements;
  for (int z : mins) fewest = std::min(fewest, p.above(z).size());
  std::optional<MarkedCard> best;
  for (int z : mins) {
    if (p.above(z).size() != fewest) continue;
    const Poset card = remove_point(p, z);
    const CanonicalForm form = canonical_form(card);
    Mask mark = 0;
    for (int i = 0; i < card.size(); ++i) {
      const int x = form.labeling[i];
      const int in_p = x < z ? x : x + 1;
      if (card.below(x).empty() && !mins.contains(in_p)) mark |= Mask{1} << i;
    }
    const Poset canon = poset_from_cert(form.cert);
    Mask least = mark;
    for (const Morphism& a : automorphisms(canon)) {
      Mask img = 0;
      for (int i : ElemSet(mark)) img |= Mask{1} << a[i];
      least = std::min(least, img);
    }
    const MarkedCard cand{form.cert, least};
    if (!best || cand < *best) best = cand;
  }
  return *best;
}

std::map<int, int> nonextremal_counts_by_rank(const Poset& p) {
  const auto rp = rank_profile(p);
  const ElemSet ext = extremal_sets(p).extremal;
  std::map<int, int> out;
  for (int x : p.ground() - ext) ++out[rp.rank[x]];
  return out;
}

using NeighborhoodType = std::pair<CanonicalCert, CanonicalCert>;

// Neighborhood of x up to isomorphism, with x marked: the strict down-set and
// strict up-set (every point of the first is below every point of the second).
std::map<NeighborhoodType, int> neighborhood_types(const Poset& p, int k) {
  const auto rp = rank_profile(p);
  std::map<NeighborhoodType, int> out;
  for (int x = 0; x < p.size(); ++x) {
    if (rp.rank[x] != k) continue;
    ++out[{canonical_cert(p, p.below(x)), canonical_cert(p, p.above(x))}];
  }
  return out;
}

// s(q, card), zero when q does not fit.
long long copies_on(const Poset& q, const Poset& card) {
  return q.size() > card.size() ? 0 : count_subposets(q, card);
}

long long max_count(const CertMultiset& m, const CanonicalCert& c) {
  const auto it = m.find(c);
  return it == m.end() ? 0 : it->second;
}

/// Shared state of the deck-only procedures for one deck.
class Procedures {
 public:
  Procedures(const DeckOracle& o, Trace* trace) : o_(o), trace_(trace) {}

  std::vector<TaggedCard> nonextremal_tags();
  std::vector<TaggedCard> ntma_tags(const std::vector<TaggedCard>& non_ntma);
  std::optional<Poset> special();
  int rank_candidate(const Poset& card);

  void note(const std::string& s) {
    if (trace_) trace_->push_back(s);
  }
  const DeckOracle& oracle() const { return o_; }

  void require_connected(int min_n) {
    if (o_.n() < min_n) throw SizeError("procedure needs at least " + std::to_string(min_n) + " points");
    if (!o_.parameter("connectedness", [](const Poset& p) { return is_connected(p); })) {
      throw NotConnectedError("deck of a disconnected poset");
    }
  }

  const CertMultiset& ntma_cards() {
    if (!ntma_) ntma_ = o_.parameter("NTMA cards", ntma_card_multiset);
    return *ntma_;
  }

 private:
  int longest_chain_through(const Poset& card);
  std::optional<int> pseudo_similar_block_rank(const Poset& q, const Poset& card, ElemSet a, int l, int h);
  std::optional<Poset> linear_around_pseudo_similar(const Poset& q);
  std::optional<Poset> upper_pseudo_similar(const Poset& q);
  std::vector<Poset> from_marked_card(const Poset& y, const Poset& z, ElemSet low_z, int y_in_z);
  bool removal_consistent(const Poset& card, const Poset& q, int qpoint);
  std::vector<TaggedCard> prop_block_apportion();
  std::vector<TaggedCard> two_point_block(const std::vector<TaggedCard>& non_ntma);

  const DeckOracle& o_;
  Trace* trace_;
  std::optional<CertMultiset> ntma_;
  std::optional<std::vector<long long>> chains_;
};

int Procedures::longest_chain_through(const Poset& card) {
  const int n = o_.n();
  if (!chains_) {
    std::vector<long long> c(n + 1, 0);
    for (int k = 1; k < n; ++k) c[k] = o_.copies(Poset::chain(k));
    bool all_chains = true;
    for (const auto& [cert, mult] : o_.deck().cards) all_chains = all_chains && is_chain(poset_from_cert(cert));
    c[n] = all_chains ? 1 : 0;
    chains_ = c;
  }
  for (int k = n; k >= 2; --k) {
    const long long on_card = k < n ? count_subposets(Poset::chain(k), card) : 0;
    if ((*chains_)[k] > on_card) return k - 1;
  }
  return 0;
}

// The set A is order-autonomous and connected in Q = P∖min(P), not a chain,
// and (l, h) is a minmax pair of A; the card's upper part is Q∖{l}. Returns
// the rank candidate, or nothing when A is not the right block.
std::optional<int> Procedures::pseudo_similar_block_rank(const Poset& q, const Poset& card, ElemSet a, int l,
                                                         int h) {
  const auto qrank = rank_profile(q).rank;
  // A non-minimal x is l or h. Rebuild P from the card under each guess and
  // keep the guess whose rebuild has this deck; neither fits a minimal x.
  const bool as_l = removal_consistent(card, q, l), as_h = removal_consistent(card, q, h);
  if (as_l != as_h || !as_l) {
    note("rank: pseudo-similar block in P∖min(P), settled by rebuilding from the card");
    return (as_h && !as_l ? qrank[h] : qrank[l]) + 1;
  }
  const ElemSet nq = neighborhood(q, a);
  if (nq == q.ground()) {
    // Q = B ⊕ A ⊕ B'; the minimal points all lie below A iff each has more
    // than |B'| + 1 upper bounds.
    const ElemSet b_top = upper_bounds(q, a);
    const auto ups = o_.parameter("up-set sizes of minimal points", minimal_up_sizes);
    bool all_below = true;
    for (int u : ups) all_below = all_below && u > b_top.size() + 1;
    if (all_below) {
      note("rank: P∖min(P) is a linear sum around a pseudo-similar block; P reconstructed");
      const auto rec = special();
      if (!rec) throw ProcedureFailure("linear sum around a pseudo-similar block was not reconstructed");
      const CanonicalCert want = canonical_cert(card);
      const auto rk = rank_profile(*rec).rank;
      const ElemSet ntma = ntma_points(*rec);
      std::set<int> ranks;
      for (int x = 0; x < rec->size(); ++x) {
        if (!ntma.contains(x) && rk[x] > 0 && canonical_cert(remove_point(*rec, x)) == want) ranks.insert(rk[x]);
      }
      if (ranks.size() > 1) throw ProcedureFailure("card matches points of several positive ranks");
      return ranks.empty() ? 1 : *ranks.begin();
    }
  }

  // Largest V with V∖min(V) ≅ N_Q(A), every point comparable to A, and more
  // copies in P than on the card.
  const Poset w = induced(q, nq);
  const auto wl = nq.to_vector();
  auto wpos = [&](int x) { return static_cast<int>(std::find(wl.begin(), wl.end(), x) - wl.begin()); };
  ElemSet aw;
  for (int x : a) aw = aw.with(wpos(x));
  const int lw = wpos(l), hw = wpos(h);
  const int m = w.size();
  std::vector<Mask> ups;
  for (Mask s = 1; s < (Mask{1} << m); ++s) {
    bool closed = true;
    for (int x : ElemSet(s)) closed = closed && !(w.up_row(x) & ~s);
    if (closed && ElemSet(s).intersects(aw)) ups.push_back(s);
  }
  const Mask min_w = minimal_points(w).bits();
  const int n = o_.n();
  for (int k = n - m; k >= 1; --k) {
    std::map<CanonicalCert, Poset> found;
    std::set<CanonicalCert> seen;
    std::vector<int> idx(k, 0);
    std::function<void(int, int)> rec = [&](int pos, int from) {
      if (pos == k) {
        Mask cover = 0;
        for (int i : idx) cover |= ups[i];
        if ((cover & min_w) != min_w) return;
        std::array<Mask, kMaxElements> rows{};
        for (int x = 0; x < m; ++x) rows[x] = w.up_row(x);
        for (int i = 0; i < k; ++i) rows[m + i] = ups[idx[i]];
        const Poset v = Poset::from_up_rows(m + k, std::span<const Mask>(rows.data(), m + k));
        const CanonicalCert vc = canonical_cert(v);
        if (!seen.insert(vc).second) return;
        if (o_.copies(v) > copies_on(v, card)) found.emplace(vc, v);
        return;
      }
      for (int i = from; i < static_cast<int>(ups.size()); ++i) {
        idx[pos] = i;
        rec(pos + 1, i);
      }
    };
    rec(0, 0);
    if (found.empty()) continue;
    std::set<int> answers;
    for (const auto& [vc, v] : found) {
      const Poset vl = remove_point(v, lw), vh = remove_point(v, hw);
      if (are_isomorphic(vl, vh)) {
        // Only a minimal x is possible here, and any r works for it.
        answers.insert(qrank[l] + 1);
        continue;
      }
      const bool fewer_h = o_.copies(vh) > copies_on(vh, card);
      const bool same_l = o_.copies(vl) == copies_on(vl, card);
      answers.insert(fewer_h && same_l ? qrank[l] + 1 : qrank[h] + 1);
    }
    if (answers.size() != 1) throw ProcedureFailure("copy counts of the extended block disagree on the rank");
    note("rank: pseudo-similar block in P∖min(P), settled by copy counts");
    return *answers.begin();
  }
  return std::nullopt;
}

int Procedures::rank_candidate(const Poset& card) {
  const Poset q = poset_from_cert(o_.parameter("P∖min(P)", upper_part_cert));
  const CanonicalCert ucert = upper_part_cert(card);
  const auto qrank = rank_profile(q).rank;
  std::vector<int> hits;
  std::set<int> ranks;
  for (int y = 0; y < q.size(); ++y) {
    if (canonical_cert(remove_point(q, y)) == ucert) {
      hits.push_back(y);
      ranks.insert(qrank[y]);
    }
  }
  if (hits.empty()) throw ProcedureFailure("the card's upper part is not a card of P∖min(P)");
  if (ranks.size() == 1) return *ranks.begin() + 1;

  // Bottom of an order-autonomous chain of Q with two or more points.
  int top_rank = -1;
  for (int y : hits) {
    ElemSet chain = ElemSet::single(y);
    int top = y;
    for (;;) {
      const ElemSet covers = q.upper_covers(top);
      if (covers.size() != 1 || !is_order_autonomous(q, chain.with(covers.first()))) break;
      top = covers.first();
      chain = chain.with(top);
    }
    if (chain.size() >= 2) top_rank = std::max(top_rank, qrank[top]);
  }
  if (top_rank >= 0) {
    const auto f = o_.parameter("down-set sums by rank", level_sums);
    const auto g = level_sums(card);
    int r = top_rank + 1;
    for (int j = 1; j < r; ++j) {
      if (at(f, j) != at(g, j)) {
        r = j;
        break;
      }
    }
    note("rank: autonomous chain in P∖min(P), first level where down-set sums change");
    return r;
  }

  // l of a connected order-autonomous non-chain block with a minmax pair.
  auto sets = nontrivial_autonomous_sets(q);
  sets.push_back(q.ground());
  std::stable_sort(sets.begin(), sets.end(), [](ElemSet a, ElemSet b) { return a.size() < b.size(); });
  for (int y : hits) {
    for (ElemSet a : sets) {
      if (!a.contains(y)) continue;
      const Poset ap = induced(q, a);
      if (!is_connected(ap) || is_chain(ap)) continue;
      const auto al = a.to_vector();
      const int ly = static_cast<int>(std::find(al.begin(), al.end(), y) - al.begin());
      for (const PsPair& pair : find_minmax_ps_pairs(ap)) {
        if (pair.l != ly) continue;
        if (auto r = pseudo_similar_block_rank(q, card, a, y, al[pair.h])) return *r;
      }
    }
  }
  throw ProcedureFailure("points of different ranks give the card but no block explains it");
}

std::vector<TaggedCard> Procedures::nonextremal_tags() {
  require_connected(4);
  const int min_p = o_.parameter("number of minimal points", [](const Poset& p) { return minimal_points(p).size(); });
  const int max_p = o_.parameter("number of maximal points", [](const Poset& p) { return maximal_points(p).size(); });
  const CertMultiset& ntma = ntma_cards();
  const DeckOracle dual_o = o_.dual();
  Procedures dual_proc(dual_o, trace_);
  std::vector<TaggedCard> out;
  for (const auto& [cert, mult] : o_.deck().cards) {
    const int in_ntma = static_cast<int>(max_count(ntma, cert));
    if (in_ntma > 0) out.push_back(TaggedCard{cert, in_ntma, CardKind::Ntma, std::nullopt, false, "NTMA card"});
    const int plain = mult - in_ntma;
    if (plain <= 0) continue;
    const Poset card = poset_from_cert(cert);
    TaggedCard tag{cert, plain, CardKind::Extremal, std::nullopt, false, ""};
    if (maximal_points(card).size() != max_p) {
      tag.kind = CardKind::Maximal;
      tag.method = "number of maximal points changed";
    } else if (minimal_points(card).size() != min_p) {
      tag.kind = CardKind::Minimal;
      tag.rank = 0;
      tag.method = "number of minimal points changed";
    } else {
      const int c = longest_chain_through(card);
      const int r = rank_candidate(card);
      const int d = dual_proc.rank_candidate(dual(card));
      if (r == c && d == c) {
        tag.kind = CardKind::Extremal;
        tag.method = "rank and dual-rank candidates both equal the longest chain";
      } else if (c > d) {
        tag.rank = r;
        tag.kind = r < c ? CardKind::Nonextremal : CardKind::Maximal;
        tag.method = "dual rank below chain length; rank candidate is the rank";
      } else {
        tag.rank = c - d;
        tag.kind = d < c ? CardKind::Nonextremal : CardKind::Minimal;
        tag.method = "rank below chain length; chain length minus dual rank";
      }
    }
    out.push_back(tag);
  }
  return out;
}

// Blocks of the card (in its canonical labels) forming the orbit of the
// removed point's block under the automorphisms of the card's index poset.
std::set<Mask> block_orbit(const Poset& p, int x) {
  const Poset card = remove_point(p, x);
  const CanonicalForm form = canonical_form(card);
  std::vector<int> pos(card.size());
  for (int i = 0; i < card.size(); ++i) pos[form.labeling[i]] = i;
  const auto dec = maximal_autonomous_partition(card);
  const auto pdec = maximal_autonomous_partition(p);
  const int y = pdec.blocks[pdec.block_of[x]].without(x).first();
  const int start = dec.block_of[y < x ? y : y - 1];
  std::set<Mask> out;
  for (const Morphism& a : automorphisms(dec.index_poset)) {
    Mask m = 0;
    for (int e : dec.blocks[a[start]]) m |= Mask{1} << pos[e];
    out.insert(m);
  }
  return out;
}

// p with the order-autonomous set a replaced by a copy of b.
Poset substitute(const Poset& p, ElemSet a, const Poset& b) {
  const ElemSet rest = p.ground() - a;
  const auto rl = rest.to_vector();
  const int k = static_cast<int>(rl.size());
  const int total = k + b.size();
  const int rep = a.first();
  std::vector<int> pos(p.size(), -1);
  for (int i = 0; i < k; ++i) pos[rl[i]] = i;
  const Mask new_block = ((Mask{1} << b.size()) - 1) << k;
  std::array<Mask, kMaxElements> rows{};
  for (int i = 0; i < k; ++i) {
    for (int y : p.above(rl[i])) rows[i] |= y == rep ? new_block : a.contains(y) ? 0 : Mask{1} << pos[y];
  }
  Mask outside = 0;
  for (int y : p.above(rep) - a) outside |= Mask{1} << pos[y];
  for (int j = 0; j < b.size(); ++j) rows[k + j] = (b.up_row(j) << k) | outside;
  return Poset::from_up_rows(total, std::span<const Mask>(rows.data(), total));
}

struct BlockType {
  CanonicalCert block;
  CanonicalCert rest;
  std::set<Mask> orbit;
  auto operator<=>(const BlockType&) const = default;
};

std::vector<TaggedCard> Procedures::prop_block_apportion() {
  const int n = o_.n();
  using BlockTypes = std::map<CanonicalCert, std::set<BlockType>>;
  const BlockTypes types = o_.parameter("block types of NTMA cards", [](const Poset& p) {
    BlockTypes m;
    const auto dec = maximal_autonomous_partition(p);
    for (int x : ntma_points(p)) {
      const ElemSet b = dec.blocks[dec.block_of[x]];
      m[canonical_cert(remove_point(p, x))].insert(
          {canonical_cert(p, b), canonical_cert(p, b.without(x)), block_orbit(p, x)});
    }
    return m;
  });
  std::vector<TaggedCard> out;
  for (const auto& [cert, t] : ntma_cards()) {
    const auto it = types.find(cert);
    if (it == types.end() || it->second.size() != 1) {
      throw ProcedureFailure("NTMA card " + cert.to_string() + " has no single block type");
    }
    const BlockType& type = *it->second.begin();
    const Poset block = poset_from_cert(type.block);
    const CanonicalCert rest = type.rest;
    const Poset card = poset_from_cert(cert);

    std::vector<ElemSet> cands;
    for (Mask a : type.orbit) {
      if (canonical_cert(card, ElemSet(a)) == rest) cands.push_back(ElemSet(a));
    }
    std::set<std::pair<int, bool>> placements;
    for (ElemSet a : cands) {
      const ElemSet lo = lower_bounds(card, a), hi = upper_bounds(card, a);
      if (lo.size() + block.size() + hi.size() > n) continue;
      Poset v = block;
      if (!lo.empty()) v = linear_sum(induced(card, lo), v);
      if (!hi.empty()) v = linear_sum(v, induced(card, hi));
      if (o_.copies(v) <= copies_on(v, card)) continue;
      // Copy counts alone can accept a block of the orbit other than the
      // one x came from; putting B back in its place must give the deck.
      if (deck(substitute(card, a, block)) != o_.deck()) continue;
      placements.insert({lo.empty() ? -1 : height(induced(card, lo)), hi.empty()});
    }
    if (placements.size() != 1) {
      throw ProcedureFailure("neighborhood of the block on card " + cert.to_string() + " is not pinned down");
    }
    const auto [h, nothing_above] = *placements.begin();

    const auto brank = rank_profile(block).rank;
    std::map<std::pair<int, bool>, int> m;
    int d = 0;
    for (int y = 0; y < block.size(); ++y) {
      if (canonical_cert(remove_point(block, y)) != rest) continue;
      ++m[{brank[y] + h + 1, nothing_above && block.above(y).empty()}];
      ++d;
    }
    for (const auto& [key, ms] : m) {
      if ((ms * t) % d != 0) throw ProcedureFailure("block apportionment is not integral");
      out.push_back(TaggedCard{cert, ms * t / d, CardKind::Ntma, key.first, key.second,
                               "block type and copy-counted neighborhood"});
    }
  }
  return out;
}

std::vector<TaggedCard> Procedures::two_point_block(const std::vector<TaggedCard>& non_ntma) {
  const CertMultiset& nt = ntma_cards();
  if (nt.size() != 1) throw ProcedureFailure("two NTMA points with non-isomorphic cards");
  const CanonicalCert cert = nt.begin()->first;
  const Poset card = poset_from_cert(cert);
  const auto counts = o_.parameter("nonextremal points by rank", nonextremal_counts_by_rank);
  std::map<int, int> assigned;
  for (const TaggedCard& t : non_ntma) {
    if (t.kind == CardKind::Nonextremal) assigned[*t.rank] += t.multiplicity;
  }
  std::vector<TaggedCard> out;
  int left = 2;
  for (const auto& [r, total] : counts) {
    const int extra = total - assigned[r];
    if (extra < 0 || extra > 2) throw ProcedureFailure("nonextremal counts do not match the assigned ranks");
    if (extra == 0) continue;
    out.push_back(TaggedCard{cert, extra, CardKind::Ntma, r, false, "nonextremal count by rank"});
    left -= extra;
  }
  if (left < 0) throw ProcedureFailure("more than two NTMA points counted");
  if (left == 0) return out;

  const bool chain_block = o_.parameter("two-point block is a chain", [](const Poset& p) {
    const ElemSet s = ntma_points(p);
    return p.comparable(s.first(), s.without(s.first()).first());
  });
  bool is_max;
  if (chain_block) {
    if (left != 1) throw ProcedureFailure("both points of a two-chain block are extremal");
    const bool in_max = max_count(o_.parameter("maximal cards with one lower cover", unique_lower_cover_maximal_cards),
                                  cert) > 0;
    const bool in_min = max_count(o_.dual().parameter("maximal cards with one lower cover",
                                                      unique_lower_cover_maximal_cards),
                                  canonical_cert(dual(card))) > 0;
    if (in_max != in_min) {
      is_max = in_max;
      note("two-chain block: cards of points with one cover");
    } else {
      is_max = o_.parameter("the extremal point of the two-chain block is maximal", [](const Poset& p) {
        const ElemSet s = ntma_points(p);
        for (int x : s) {
          if (p.above(x).empty()) return true;
        }
        return false;
      });
      note("two-chain block: oracle for which end is extremal");
    }
  } else {
    const int min_p = o_.parameter("number of minimal points", [](const Poset& p) { return minimal_points(p).size(); });
    const int max_p = o_.parameter("number of maximal points", [](const Poset& p) { return maximal_points(p).size(); });
    if (minimal_points(card).size() < min_p) {
      is_max = false;
    } else if (maximal_points(card).size() < max_p) {
      is_max = true;
    } else {
      throw ProcedureFailure("extremal point of a two-antichain block is neither minimal nor maximal");
    }
  }
  int rank = 0;
  if (is_max) {
    CertMultiset missing = o_.parameter("ideal deck", ideal_deck);
    for (const auto& [c, k] : ideal_deck(card)) {
      auto it = missing.find(c);
      if (it == missing.end() || it->second < k) throw ProcedureFailure("card has an ideal P lacks");
      if ((it->second -= k) == 0) missing.erase(it);
    }
    if (missing.size() != 1 || missing.begin()->second != 1) throw ProcedureFailure("no single missing ideal");
    rank = height(poset_from_cert(missing.begin()->first));
  }
  out.push_back(TaggedCard{cert, left, CardKind::Ntma, rank, is_max, is_max ? "missing ideal" : "minimal"});
  return out;
}

std::vector<TaggedCard> Procedures::ntma_tags(const std::vector<TaggedCard>& non_ntma) {
  int total = 0;
  for (const auto& [c, k] : ntma_cards()) total += k;
  if (total == 0) throw NotDecomposableError("P has no nontrivial order-autonomous set");
  if (!o_.parameter("coconnectedness", [](const Poset& p) { return is_coconnected(p); })) {
    throw NotCoconnectedError("deck of a linear sum");
  }
  return total >= 3 ? prop_block_apportion() : two_point_block(non_ntma);
}

// Y = P∖{y} for a non-minimal y, Z = P∖{z} for a minimal z with the points
// min(P)∖{z} given as low_z and y located on Z. Rebuilds P by matching the
// minimal points of Y and Z through the unique isomorphism of their upper
// parts.
std::vector<Poset> Procedures::from_marked_card(const Poset& y, const Poset& z, ElemSet low_z, int y_in_z) {
  const ElemSet min_y = minimal_points(y);
  const ElemSet qy = y.ground() - min_y;
  const ElemSet qz = z.ground() - low_z;
  const Poset a = induced(y, qy, true), b = induced(z, qz.without(y_in_z), true);
  if (a.size() != b.size()) return {};
  const auto av = qy.to_vector(), bv = qz.without(y_in_z).to_vector();
  std::vector<int> apos(y.size(), -1);
  for (std::size_t i = 0; i < av.size(); ++i) apos[av[i]] = static_cast<int>(i);
  const long long up_z = o_.copies(Poset::chain(2)) - z.relation_count();
  const Mask yb = Mask{1} << y_in_z;
  std::vector<Poset> out;
  auto attempt = [&](const Morphism& psi) {
    std::map<Mask, int> a_groups, z_groups;
    for (int m : min_y) ++a_groups[y.up_row(m)];
    for (int m : low_z) ++z_groups[z.up_row(m)];
    auto take = [&](Mask key) {
      const auto it = z_groups.find(key);
      if (it == z_groups.end()) return 0;
      const int k = it->second;
      z_groups.erase(it);
      return k;
    };
    int deficits = 0;
    Mask base = 0;
    for (const auto& [up, count] : a_groups) {
      Mask t = 0;
      for (int x : ElemSet(up)) t |= Mask{1} << bv[psi[apos[x]]];
      const int diff = count - take(t) - take(t | yb);
      if (diff == 1) {
        ++deficits;
        base = t;
      } else if (diff != 0) {
        return;
      }
    }
    if (!z_groups.empty() || deficits != 1) return;
    Mask up;
    if (std::popcount(base) == up_z) {
      up = base;
    } else if (std::popcount(base) + 1 == up_z) {
      up = base | yb;
    } else {
      return;
    }
    std::array<Mask, kMaxElements> rows{};
    for (int x = 0; x < z.size(); ++x) rows[x] = z.up_row(x);
    rows[z.size()] = up;
    out.push_back(Poset::from_up_rows(z.size() + 1, std::span<const Mask>(rows.data(), z.size() + 1)));
  };
  if (a.size() == 0) {
    attempt(Morphism{});
  } else {
    for_each_isomorphism(a, b, [&](const Morphism& psi) {
      attempt(psi);
      return true;
    });
  }
  return out;
}

bool Procedures::removal_consistent(const Poset& card, const Poset& q, int qpoint) {
  const MarkedCard mz = o_.parameter("minimal card with marked upper minimal points", marked_minimal_card);
  const Poset z = poset_from_cert(mz.cert);
  const ElemSet low_z = minimal_points(z) - ElemSet(mz.marked);
  const auto qzl = (z.ground() - low_z).to_vector();
  std::set<int> spots;
  for_each_isomorphism(q, induced(z, z.ground() - low_z), [&](const Morphism& m) {
    spots.insert(qzl[m[qpoint]]);
    return true;
  });
  for (int y : spots) {
    for (const Poset& cand : from_marked_card(card, z, low_z, y)) {
      if (deck(cand) == o_.deck()) return true;
    }
  }
  return false;
}

std::optional<Poset> Procedures::upper_pseudo_similar(const Poset& q) {
  const Deck& d = o_.deck();
  if (is_chain(q)) {
    // P has a largest element: P = card ⊕ 1 for the card of that element.
    for (const auto& [cert, mult] : d.cards) {
      const Poset cand = linear_sum(poset_from_cert(cert), Poset::chain(1));
      if (deck(cand) == d) {
        note("P∖min(P) is a chain: P has a largest element");
        return cand;
      }
    }
    throw ProcedureFailure("no card plus a top element has this deck");
  }
  const MarkedCard mz = o_.parameter("minimal card with marked upper minimal points", marked_minimal_card);
  const Poset z = poset_from_cert(mz.cert);
  const ElemSet low_z = minimal_points(z) - ElemSet(mz.marked);
  const ElemSet qz = z.ground() - low_z;
  const Poset qzp = induced(z, qz);
  const auto qzl = qz.to_vector();

  std::set<CanonicalCert> max_cards;
  for (int x : maximal_points(qzp)) max_cards.insert(canonical_cert(remove_point(qzp, x)));
  std::vector<int> ls;
  for (int x : minimal_points(qzp)) {
    if (max_cards.count(canonical_cert(remove_point(qzp, x)))) ls.push_back(x);
  }
  if (ls.size() != 1) throw ProcedureFailure("l is not the only minimal point with a maximal-card twin");
  const int l_in_z = qzl[ls[0]];
  const CanonicalCert target = canonical_cert(remove_point(qzp, ls[0]));

  std::vector<std::pair<CanonicalCert, int>> hits;
  int total = 0;
  for (const auto& [cert, mult] : d.cards) {
    if (upper_part_cert(poset_from_cert(cert)) == target) {
      hits.emplace_back(cert, mult);
      total += mult;
    }
  }
  std::vector<CanonicalCert> ys;
  if (total == 2) {
    for (const auto& [c, k] : hits) ys.push_back(c);
  } else if (total == 3) {
    // u_x: upper bounds summed over the card's minimal points. Removing l
    // loses one upper bound, fewer than removing h or the lower cover of l,
    // so P∖{l} is the unique largest when the values separate it.
    std::vector<std::pair<long long, CanonicalCert>> us;
    for (const auto& [c, k] : hits) {
      const Poset card = poset_from_cert(c);
      long long u = 0;
      for (int m : minimal_points(card)) u += card.above(m).size();
      for (int i = 0; i < k; ++i) us.emplace_back(u, c);
    }
    std::sort(us.begin(), us.end(), std::greater<>());
    if (us[0].first > us[1].first) {
      ys.push_back(us[0].second);
    } else {
      for (const auto& [c, k] : hits) ys.push_back(c);
    }
  } else {
    throw ProcedureFailure("expected two or three cards over P∖min(P)∖{l}, found " + std::to_string(total));
  }

  std::map<CanonicalCert, Poset> results;
  for (const CanonicalCert& yc : ys) {
    for (const Poset& cand : from_marked_card(poset_from_cert(yc), z, low_z, l_in_z)) {
      if (deck(cand) == d) results.emplace(canonical_cert(cand), cand);
    }
  }
  {
    // min(P) below all of P∖min(P).
    const Poset cand = linear_sum(Poset::antichain(o_.n() - q.size()), q);
    if (deck(cand) == d) results.emplace(canonical_cert(cand), cand);
  }
  if (results.empty()) throw ProcedureFailure("rebuilding P from the marked minimal card failed");
  if (results.size() > 1) throw ProcedureFailure("two non-isomorphic posets rebuilt from one deck");
  note("P∖min(P) has a minmax pair: P rebuilt from P∖{l} and a marked minimal card");
  return results.begin()->second;
}

std::optional<Poset> Procedures::linear_around_pseudo_similar(const Poset& q) {
  const auto parts = linear_summand_sets(q);
  const int k = static_cast<int>(parts.size());
  if (k < 2) return std::nullopt;
  auto span = [&](int i, int j) {
    ElemSet s;
    for (int t = i; t <= j; ++t) s |= parts[t];
    return s;
  };
  auto qualifies = [&](int i, int j) {
    const Poset sp = induced(q, span(i, j));
    return is_connected(sp) && !is_chain(sp) && !find_minmax_ps_pairs(sp).empty();
  };
  // The topmost such summand: nothing above it qualifies.
  int bi = -1, bj = -1;
  for (int i = k - 1; i >= 0 && bi < 0; --i) {
    for (int j = i; j < k; ++j) {
      if (!qualifies(i, j)) continue;
      bool above = false;
      for (int s = j + 1; s < k && !above; ++s) {
        for (int t = s; t < k && !above; ++t) above = qualifies(s, t);
      }
      if (!above) {
        bi = i;
        bj = j;
        break;
      }
    }
  }
  if (bi < 0) return std::nullopt;
  const ElemSet a = span(bi, bj);
  const ElemSet b_top = bj + 1 < k ? span(bj + 1, k - 1) : ElemSet();
  const ElemSet b_low = bi > 0 ? span(0, bi - 1) : ElemSet();
  for (int u : o_.parameter("up-set sizes of minimal points", minimal_up_sizes)) {
    if (u <= b_top.size() + 1) return std::nullopt;
  }
  if (b_low.empty() && b_top.empty()) return upper_pseudo_similar(q);
  if (!b_top.empty() || !o_.parameter("coconnectedness", [](const Poset& p) { return is_coconnected(p); })) {
    note("P is a linear sum: oracle");
    return o_.witnesses().front();
  }

  // Lower bounds L of A on a marked minimal card Z (z is not in L).
  const MarkedCard mz = o_.parameter("minimal card with marked upper minimal points", marked_minimal_card);
  const Poset z = poset_from_cert(mz.cert);
  const ElemSet qz = z.ground() - (minimal_points(z) - ElemSet(mz.marked));
  const auto qzl = qz.to_vector();
  std::optional<Morphism> iso;
  for_each_isomorphism(q, induced(z, qz), [&](const Morphism& m) {
    iso = m;
    return false;
  });
  if (!iso) throw ProcedureFailure("marked card does not carry P∖min(P)");
  ElemSet a_z;
  for (int x : a) a_z = a_z.with(qzl[(*iso)[x]]);
  const Poset lp = induced(z, lower_bounds(z, a_z));
  const CanonicalCert a_cert = canonical_cert(q, a);

  // NTMA card with A on top and as few lower bounds of A as possible.
  std::optional<std::tuple<int, Poset, ElemSet, ElemSet>> best;
  for (const auto& [cert, mult] : ntma_cards()) {
    const Poset card = poset_from_cert(cert);
    const ElemSet up = card.ground() - minimal_points(card);
    const auto cparts = linear_summand_sets(induced(card, up, true));
    const auto upl = up.to_vector();
    for (int i = static_cast<int>(cparts.size()) - 1; i >= 0; --i) {
      ElemSet at;
      for (std::size_t t = i; t < cparts.size(); ++t) {
        for (int x : cparts[t]) at = at.with(upl[x]);
      }
      if (at.size() != a.size() || canonical_cert(card, at) != a_cert) continue;
      bool covered = true;
      for (int c : card.ground() - at) covered = covered && card.above(c).intersects(at);
      if (!covered) continue;
      const ElemSet lows = lower_bounds(card, at);
      if (!best || lows.size() < std::get<0>(*best)) best.emplace(lows.size(), card, at, lows);
    }
  }
  if (!best) throw ProcedureFailure("no NTMA card shows the pseudo-similar summand on top");
  const auto& [count, card, at, lows] = *best;
  const ElemSet keep = card.ground() - lows;
  const auto kl = keep.to_vector();
  std::vector<int> pos(card.size(), -1);
  for (std::size_t i = 0; i < kl.size(); ++i) pos[kl[i]] = static_cast<int>(i);
  const int base = static_cast<int>(kl.size());
  const int total = base + lp.size();
  if (total != o_.n()) throw ProcedureFailure("replacing the lower bounds gives the wrong size");
  std::array<Mask, kMaxElements> rows{};
  for (int x : keep) {
    for (int y : ElemSet(card.up_row(x) & keep.bits())) rows[pos[x]] |= Mask{1} << pos[y];
  }
  Mask above_a = 0;
  for (int x : at) above_a |= Mask{1} << pos[x];
  for (int i = 0; i < lp.size(); ++i) rows[base + i] = (lp.up_row(i) << base) | above_a;
  const Poset cand = Poset::from_up_rows(total, std::span<const Mask>(rows.data(), total));
  if (deck(cand) != o_.deck()) throw ProcedureFailure("replacing the lower bounds of A does not give the deck");
  note("P∖min(P) is a linear sum around a pseudo-similar set: lower bounds replaced on an NTMA card");
  return cand;
}

std::optional<Poset> Procedures::special() {
  require_connected(4);
  const Poset q = poset_from_cert(o_.parameter("P∖min(P)", upper_part_cert));
  if (is_connected(q) && !find_minmax_ps_pairs(q).empty()) return upper_pseudo_similar(q);
  return linear_around_pseudo_similar(q);
}

std::vector<TaggedCard> sorted(std::vector<TaggedCard> v) {
  std::sort(v.begin(), v.end(), [](const TaggedCard& a, const TaggedCard& b) {
    return std::tie(a.card, a.kind, a.rank, a.maximal) < std::tie(b.card, b.kind, b.rank, b.maximal);
  });
  return v;
}

// NTMA tags read off the witnesses, used for linear sums.
std::vector<TaggedCard> labeled_ntma_tags(const DeckOracle& o) {
  using Key = std::tuple<CanonicalCert, int, bool>;
  const auto counts = o.parameter("NTMA ranks", [](const Poset& p) {
    std::map<Key, int> m;
    const auto rk = rank_profile(p).rank;
    for (int x : ntma_points(p)) ++m[{canonical_cert(remove_point(p, x)), rk[x], p.above(x).empty()}];
    return m;
  });
  std::vector<TaggedCard> out;
  for (const auto& [key, k] : counts) {
    out.push_back(TaggedCard{std::get<0>(key), k, CardKind::Ntma, std::get<1>(key), std::get<2>(key),
                             "oracle: linear sum"});
  }
  return out;
}

struct Assignment {
  std::vector<TaggedCard> tags;
  std::map<int, Deck> rank_decks;
  std::map<int, Deck> ntma_decks;
  Deck extremal;
};

Assignment assign_all(const DeckOracle& o, Trace* trace) {
  Procedures proc(o, trace);
  Assignment a;
  std::vector<TaggedCard> plain;
  for (TaggedCard& t : proc.nonextremal_tags()) {
    if (t.kind != CardKind::Ntma) plain.push_back(std::move(t));
  }
  std::vector<TaggedCard> ntma;
  if (!proc.ntma_cards().empty()) {
    if (o.parameter("coconnectedness", [](const Poset& p) { return is_coconnected(p); })) {
      ntma = proc.ntma_tags(plain);
    } else {
      proc.note("NTMA ranks of a linear sum: oracle");
      ntma = labeled_ntma_tags(o);
    }
  }
  a.extremal = o.deck();
  auto add = [&](std::map<int, Deck>& m, int r, const TaggedCard& t) {
    Deck& d = m[r];
    d.n = o.n();
    d.add(t.card, t.multiplicity);
  };
  for (const TaggedCard& t : plain) {
    if (t.kind == CardKind::Nonextremal) {
      add(a.rank_decks, *t.rank, t);
      a.extremal.remove(t.card, t.multiplicity);
    }
  }
  for (const TaggedCard& t : ntma) {
    add(a.ntma_decks, *t.rank, t);
    if (*t.rank > 0 && !t.maximal) {
      add(a.rank_decks, *t.rank, t);
      a.extremal.remove(t.card, t.multiplicity);
    }
  }
  plain.insert(plain.end(), ntma.begin(), ntma.end());
  a.tags = sorted(std::move(plain));
  return a;
}

}  // namespace

std::vector<TaggedCard> nonextremal_rank_assignment(const Deck& d) {
  DeckOracle o(d);
  return sorted(Procedures(o, nullptr).nonextremal_tags());
}

std::vector<TaggedCard> ntma_rank_assignment(const Deck& d) {
  DeckOracle o(d);
  Procedures proc(o, nullptr);
  proc.require_connected(4);
  if (proc.ntma_cards().empty()) throw NotDecomposableError("P has no nontrivial order-autonomous set");
  std::vector<TaggedCard> plain;
  int ntma_total = 0;
  for (const auto& [c, k] : proc.ntma_cards()) ntma_total += k;
  if (ntma_total < 3) {
    for (TaggedCard& t : proc.nonextremal_tags()) {
      if (t.kind != CardKind::Ntma) plain.push_back(std::move(t));
    }
  }
  return sorted(proc.ntma_tags(plain));
}

std::map<int, Deck> ntma_rank_decks(const Deck& d) {
  std::map<int, Deck> out;
  for (const TaggedCard& t : ntma_rank_assignment(d)) {
    Deck& r = out[*t.rank];
    r.n = d.n;
    r.add(t.card, t.multiplicity);
  }
  return out;
}

std::map<int, Deck> nonmaximal_rank_decks(const Deck& d) { return assign_all(DeckOracle(d), nullptr).rank_decks; }

Deck extremal_deck(const Deck& d) { return assign_all(DeckOracle(d), nullptr).extremal; }

std::vector<FilterShiftTag> classify_by_filter_shift(const Deck& d) {
  const DeckOracle o(d);
  const Deck ext = assign_all(o, nullptr).extremal;
  const CertMultiset parent = o.parameter("filter deck", filter_deck);
  std::vector<FilterShiftTag> out;
  for (const auto& [cert, mult] : ext.cards) {
    CertMultiset rest = parent;
    bool shift = true;
    for (const auto& [c, k] : filter_deck(poset_from_cert(cert))) {
      auto it = rest.find(c);
      if (it == rest.end() || it->second < k) {
        shift = false;
        break;
      }
      if ((it->second -= k) == 0) rest.erase(it);
    }
    shift = shift && rest.size() == 1 && rest.begin()->second == 1;
    out.push_back(FilterShiftTag{cert, mult, !shift});
  }
  return out;
}

std::vector<RangingChain> ranging_chain_analysis(const Poset& p) {
  std::vector<RangingChain> out;
  const auto ext = extremal_sets(p);
  for (ElemSet c : components_within(p, p.ground() - ext.minimal)) {
    if (!is_chain(induced(p, c)) || !is_order_autonomous(p, c)) continue;
    int bottom = c.first();
    for (int x : c) {
      if (p.below(x).size() < p.below(bottom).size()) bottom = x;
    }
    if (p.lower_covers(bottom).size() == 1) out.push_back({c, ChainKind::Ranging});
  }
  for (ElemSet c : components_within(p, p.ground() - ext.maximal)) {
    if (!is_chain(induced(p, c)) || !is_order_autonomous(p, c)) continue;
    int top = c.first();
    for (int x : c) {
      if (p.above(x).size() < p.above(top).size()) top = x;
    }
    if (p.upper_covers(top).size() == 1) out.push_back({c, ChainKind::DuallyRanging});
  }
  return out;
}

bool recognize_dismantlable(const Deck& d) {
  const DeckOracle o(d);
  Procedures proc(o, nullptr);
  proc.require_connected(4);
  for (const auto& [cert, k] : o.parameter("maximal cards with one lower cover", unique_lower_cover_maximal_cards)) {
    if (is_dismantlable(poset_from_cert(cert))) return true;
  }
  for (const auto& [cert, k] :
       o.dual().parameter("maximal cards with one lower cover", unique_lower_cover_maximal_cards)) {
    if (is_dismantlable(poset_from_cert(cert))) return true;
  }
  for (const auto& [r, nr] : assign_all(o, nullptr).rank_decks) {
    const auto parent = o.parameter("neighborhoods of rank " + std::to_string(r),
                                    [r = r](const Poset& p) { return neighborhood_types(p, r); });
    for (const auto& [cert, k] : nr.cards) {
      const Poset card = poset_from_cert(cert);
      const auto mine = neighborhood_types(card, r);
      std::vector<NeighborhoodType> fewer;
      for (const auto& [type, count] : parent) {
        const auto it = mine.find(type);
        if ((it == mine.end() ? 0 : it->second) < count) fewer.push_back(type);
      }
      if (fewer.size() != 1) throw ProcedureFailure("neighborhood of the removed point is not determined");
      const Poset below = poset_from_cert(fewer[0].first), above = poset_from_cert(fewer[0].second);
      const bool irreducible = maximal_points(below).size() == 1 || minimal_points(above).size() == 1;
      if (irreducible && is_dismantlable(card)) return true;
    }
  }
  return false;
}

std::optional<CanonicalCert> reconstruct_special(const Deck& d) {
  const DeckOracle o(d);
  Procedures proc(o, nullptr);
  const auto p = proc.special();
  if (!p) return std::nullopt;
  return canonical_cert(*p);
}

ReconReport reconstruct_report(const Deck& d) {
  const DeckOracle o(d);
  ReconReport r;
  r.input_deck = d;
  Assignment a = assign_all(o, &r.method);
  r.card_tags = std::move(a.tags);
  r.rank_decks = std::move(a.rank_decks);
  r.ntma_rank_decks = std::move(a.ntma_decks);
  r.extremal_deck = std::move(a.extremal);
  Procedures proc(o, &r.method);
  if (const auto p = proc.special()) r.reconstructed = canonical_cert(*p);
  return r;
}

std::string format_recon_report(const ReconReport& r) {
  std::ostringstream os;
  auto cards = [&](const Deck& d) {
    for (const auto& [cert, mult] : d.cards) os << "  " << mult << ' ' << cert.to_string() << '\n';
  };
  os << "report n=" << r.input_deck.n << '\n';
  for (const TaggedCard& t : r.card_tags) {
    os << "card " << t.card.to_string() << " mult=" << t.multiplicity << " kind=" << to_string(t.kind);
    if (t.rank) os << " rank=" << *t.rank;
    if (t.kind == CardKind::Ntma && t.maximal) os << " maximal";
    os << " method=\"" << t.method << "\"\n";
  }
  for (const auto& [rank, d] : r.rank_decks) {
    os << "rank-deck r=" << rank << '\n';
    cards(d);
  }
  for (const auto& [rank, d] : r.ntma_rank_decks) {
    os << "ntma-deck r=" << rank << '\n';
    cards(d);
  }
  os << "extremal-deck\n";
  cards(r.extremal_deck);
  os << "reconstructed " << (r.reconstructed ? r.reconstructed->to_string() : "none") << '\n';
  for (const std::string& m : r.method) os << "method " << m << '\n';
  return os.str();
}

}  // namespace ordrecon
