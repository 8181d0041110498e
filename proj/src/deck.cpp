#include "ordrecon/deck.hpp"

#include <algorithm>
#include <charconv>
#include <set>
#include <sstream>

#include "ordrecon/decomposition.hpp"
#include "ordrecon/errors.hpp"

namespace ordrecon {

int Deck::total() const {
  int t = 0;
  for (const auto& [cert, mult] : cards) t += mult;
  return t;
}

void Deck::add(const CanonicalCert& card, int mult) {
  if (mult > 0) cards[card] += mult;
}

void Deck::remove(const CanonicalCert& card, int mult) {
  if (mult <= 0) return;
  auto it = cards.find(card);
  if (it == cards.end() || it->second < mult) {
    throw InconsistentDeckError("card " + card.to_string() + " not present often enough");
  }
  it->second -= mult;
  if (it->second == 0) cards.erase(it);
}

Deck deck(const Poset& p) {
  if (p.size() < 1) throw SizeError("deck of an empty poset");
  Deck d;
  d.n = p.size();
  for (int x = 0; x < p.size(); ++x) d.add(canonical_cert(remove_point(p, x)));
  return d;
}

ElemSet pi_points(const Poset& p, PiPredicate pred) {
  using K = PiPredicate::Kind;
  const auto ext = extremal_sets(p);
  ElemSet ntma;
  if (pred.kind == K::Ntma || pred.kind == K::NtmaRank) ntma = ntma_points(p);
  const auto rp = rank_profile(p);
  ElemSet out;
  for (int x = 0; x < p.size(); ++x) {
    const bool rank_ok = rp.rank[x] == pred.rank;
    bool keep = false;
    switch (pred.kind) {
      case K::Minimal: keep = ext.minimal.contains(x); break;
      case K::Maximal: keep = ext.maximal.contains(x); break;
      case K::Extremal: keep = ext.extremal.contains(x); break;
      case K::Rank: keep = rank_ok; break;
      case K::NonmaximalRank: keep = rank_ok && !ext.maximal.contains(x); break;
      case K::NonextremalRank: keep = rank_ok && !ext.extremal.contains(x); break;
      case K::Ntma: keep = ntma.contains(x); break;
      case K::NtmaRank: keep = rank_ok && ntma.contains(x); break;
    }
    if (keep) out = out.with(x);
  }
  return out;
}

Deck pi_deck(const Poset& p, PiPredicate pred) {
  Deck d;
  d.n = p.size();
  for (int x : pi_points(p, pred)) d.add(canonical_cert(remove_point(p, x)));
  return d;
}

long long kelly_count_from_deck(const Poset& q, const Deck& d) {
  if (d.n <= 3) throw SizeError("Kelly counting needs a deck of at least 4 cards");
  if (q.size() >= d.n) throw SizeError("Kelly counting needs |Q| < n");
  long long sum = 0;
  for (const auto& [cert, mult] : d.cards) sum += mult * count_subposets(q, poset_from_cert(cert));
  const long long div = d.n - q.size();
  if (sum % div != 0) throw ArithmeticError("card counts are not divisible; deck is corrupt");
  return sum / div;
}

std::map<CanonicalCert, long long> subposet_profile(const Poset& p, int max_size) {
  std::map<CanonicalCert, long long> out;
  const Mask full = p.ground().bits();
  for (Mask s = 1; s <= full && s != 0; ++s) {
    if (std::popcount(s) > max_size) continue;
    ++out[canonical_cert(p, ElemSet(s))];
  }
  return out;
}

std::map<CanonicalCert, long long> kelly_profile_from_deck(const Deck& d) {
  if (d.n <= 3) throw SizeError("Kelly counting needs a deck of at least 4 cards");
  std::map<CanonicalCert, long long> sums;
  for (const auto& [cert, mult] : d.cards) {
    for (const auto& [sub, count] : subposet_profile(poset_from_cert(cert), d.n - 1)) {
      sums[sub] += mult * count;
    }
  }
  for (auto& [sub, count] : sums) {
    const long long div = d.n - sub.n;
    if (count % div != 0) throw ArithmeticError("card counts are not divisible; deck is corrupt");
    count /= div;
  }
  return sums;
}

namespace {

CertMultiset cert_multiset(const Poset& p, const std::vector<ElemSet>& sets) {
  CertMultiset out;
  for (ElemSet s : sets) ++out[canonical_cert(p, s)];
  return out;
}

// Cheap deck-determined counts: comparable pairs, 3-chains, V and Λ copies.
struct Fingerprint {
  long long rel = 0, chain3 = 0, vee = 0, wedge = 0;
  bool operator==(const Fingerprint&) const = default;
};

Fingerprint fingerprint(const Poset& p) {
  Fingerprint f;
  for (int x = 0; x < p.size(); ++x) {
    const long long up = std::popcount(p.up_row(x));
    const long long down = std::popcount(p.down_row(x));
    f.rel += up;
    f.chain3 += up * down;
    long long up_pairs = up * (up - 1) / 2;
    for (int y : p.above(x)) up_pairs -= std::popcount(p.up_row(y));
    f.vee += up_pairs;
    long long down_pairs = down * (down - 1) / 2;
    for (int y : p.below(x)) down_pairs -= std::popcount(p.down_row(y));
    f.wedge += down_pairs;
  }
  return f;
}

void check_deck_shape(const Deck& d) {
  if (d.n < 2) throw InconsistentDeckError("deck inversion needs n >= 2");
  if (d.n > kMaxElements) throw InconsistentDeckError("deck size exceeds supported poset size");
  if (d.total() != d.n) throw InconsistentDeckError("deck has " + std::to_string(d.total()) + " cards, expected " + std::to_string(d.n));
  for (const auto& [cert, mult] : d.cards) {
    if (cert.n != d.n - 1) throw InconsistentDeckError("card " + cert.to_string() + " has the wrong size");
    if (mult <= 0) throw InconsistentDeckError("nonpositive card multiplicity");
  }
}

}  // namespace

CertMultiset ideal_deck(const Poset& p) {
  std::vector<ElemSet> sets;
  for (int x = 0; x < p.size(); ++x) sets.push_back(down_set(p, x));
  return cert_multiset(p, sets);
}

CertMultiset filter_deck(const Poset& p) {
  std::vector<ElemSet> sets;
  for (int x = 0; x < p.size(); ++x) sets.push_back(up_set(p, x));
  return cert_multiset(p, sets);
}

CertMultiset neighborhood_deck(const Poset& p, int k) {
  const auto rp = rank_profile(p);
  std::vector<ElemSet> sets;
  for (int x = 0; x < p.size(); ++x) {
    if (rp.rank[x] == k) sets.push_back(neighborhood(p, ElemSet::single(x)));
  }
  return cert_multiset(p, sets);
}

std::vector<Poset> invert_deck(const Deck& d) {
  check_deck_shape(d);
  const int n = d.n;
  const int m = n - 1;
  const Poset base = poset_from_cert(d.cards.begin()->first);

  // Deck-determined targets (each k-subset lies on n - k cards).
  Fingerprint target;
  bool have_rel = n >= 3, have_triples = n >= 4;
  if (have_rel) {
    Fingerprint sum;
    for (const auto& [cert, mult] : d.cards) {
      Fingerprint f = fingerprint(poset_from_cert(cert));
      sum.rel += mult * f.rel;
      sum.chain3 += mult * f.chain3;
      sum.vee += mult * f.vee;
      sum.wedge += mult * f.wedge;
    }
    if (sum.rel % (n - 2) != 0) throw InconsistentDeckError("pair counts are not divisible");
    target.rel = sum.rel / (n - 2);
    if (have_triples) {
      if (sum.chain3 % (n - 3) || sum.vee % (n - 3) || sum.wedge % (n - 3)) {
        throw InconsistentDeckError("triple counts are not divisible");
      }
      target.chain3 = sum.chain3 / (n - 3);
      target.vee = sum.vee / (n - 3);
      target.wedge = sum.wedge / (n - 3);
    }
  }
  const int new_rel = have_rel ? static_cast<int>(target.rel) - base.relation_count() : -1;
  if (have_rel && new_rel < 0) throw InconsistentDeckError("no one-point extension matches the deck");

  Deck rest = d;
  rest.remove(d.cards.begin()->first);

  std::set<CanonicalCert> found;
  const Mask all = ElemSet::full(m).bits();
  std::array<Mask, kMaxElements> rows{};
  for (Mask lower = 0; lower <= all; ++lower) {
    bool down_closed = true;
    Mask common = all;
    for (int x : ElemSet(lower)) {
      if (base.down_row(x) & ~lower) {
        down_closed = false;
        break;
      }
      common &= base.up_row(x);
    }
    if (!down_closed) continue;
    const int need = new_rel - std::popcount(lower);
    if (have_rel && need < 0) continue;
    // Every up-closed subset of `common`, walking submasks downward.
    for (Mask upper = common;; upper = (upper - 1) & common) {
      if (!have_rel || std::popcount(upper) == need) {
        bool up_closed = true;
        for (int y : ElemSet(upper)) {
          if (base.up_row(y) & ~upper) {
            up_closed = false;
            break;
          }
        }
        if (up_closed) {
          for (int x = 0; x < m; ++x) {
            rows[x] = base.up_row(x) | (((lower >> x) & 1U) ? (Mask{1} << m) : 0);
          }
          rows[m] = upper;
          const Poset cand = Poset::from_closed_up_rows(n, std::span<const Mask>(rows.data(), n));
          bool ok = !have_triples || fingerprint(cand) == target;
          if (ok) {
            CertMultiset left = rest.cards;
            for (int x = 0; x < m && ok; ++x) {
              auto it = left.find(canonical_cert(remove_point(cand, x)));
              if (it == left.end()) {
                ok = false;
              } else if (--it->second == 0) {
                left.erase(it);
              }
            }
            if (ok) found.insert(canonical_cert(cand));
          }
        }
      }
      if (upper == 0) break;
    }
    if (lower == all) break;
  }
  if (found.empty()) throw InconsistentDeckError("no one-point extension matches the deck");
  std::vector<Poset> out;
  for (const auto& c : found) out.push_back(poset_from_cert(c));
  return out;
}

std::vector<std::vector<int>> deck_groups(const std::vector<Poset>& universe) {
  std::map<Deck, std::vector<int>> by_deck;
  for (std::size_t i = 0; i < universe.size(); ++i) by_deck[deck(universe[i])].push_back(static_cast<int>(i));
  std::vector<std::vector<int>> out;
  for (auto& [dk, idx] : by_deck) out.push_back(std::move(idx));
  std::sort(out.begin(), out.end());
  return out;
}

std::string format_deck(const Deck& d) {
  std::ostringstream os;
  os << "deck n=" << d.n << '\n';
  for (const auto& [cert, mult] : d.cards) os << mult << ' ' << cert.to_string() << '\n';
  return os.str();
}

Deck parse_deck(std::string_view text) {
  Deck d;
  bool header = false;
  int line_no = 0;
  while (!text.empty()) {
    auto nl = text.find('\n');
    std::string line(text.substr(0, nl));
    text = nl == std::string_view::npos ? std::string_view() : text.substr(nl + 1);
    ++line_no;
    if (auto hash = line.find('#'); hash != std::string::npos) line.resize(hash);
    std::istringstream is(line);
    std::string a, b, extra;
    if (!(is >> a)) continue;
    const std::string where = "line " + std::to_string(line_no) + ": ";
    if (!header) {
      if (a != "deck" || !(is >> b) || b.rfind("n=", 0) != 0 || (is >> extra)) {
        throw ParseError(where + "expected 'deck n=<n>'");
      }
      auto [ptr, ec] = std::from_chars(b.data() + 2, b.data() + b.size(), d.n);
      if (ec != std::errc() || ptr != b.data() + b.size() || d.n < 1 || d.n > kMaxElements) {
        throw ParseError(where + "bad deck size");
      }
      header = true;
      continue;
    }
    int mult = 0;
    auto [ptr, ec] = std::from_chars(a.data(), a.data() + a.size(), mult);
    if (ec != std::errc() || ptr != a.data() + a.size() || mult <= 0 || !(is >> b) || (is >> extra)) {
      throw ParseError(where + "expected '<multiplicity> <cert>'");
    }
    const CanonicalCert cert = CanonicalCert::parse(b);
    if (d.cards.count(cert)) throw ParseError(where + "duplicate card " + b);
    d.cards.emplace(cert, mult);
  }
  if (!header) throw ParseError("missing 'deck n=<n>' header");
  if (d.total() != d.n) throw InconsistentDeckError("deck lists " + std::to_string(d.total()) + " cards for n=" + std::to_string(d.n));
  for (const auto& [cert, mult] : d.cards) {
    if (cert.n != d.n - 1) throw InconsistentDeckError("card " + cert.to_string() + " has the wrong size");
  }
  return d;
}

}  // namespace ordrecon
