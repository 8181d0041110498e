#pragma once

#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "ordrecon/canonical.hpp"
#include "ordrecon/poset.hpp"

namespace ordrecon {

using CertMultiset = std::map<CanonicalCert, int>;

/// Multiset of cards of an n-element poset.
struct Deck {
  int n = 0;
  CertMultiset cards;

  int total() const;
  void add(const CanonicalCert& card, int mult = 1);
  /// Removes mult copies; throws InconsistentDeckError if not present.
  void remove(const CanonicalCert& card, int mult = 1);
  auto operator<=>(const Deck&) const = default;
};

struct PiPredicate {
  enum class Kind {
    Minimal,
    Maximal,
    Extremal,
    Rank,
    NonmaximalRank,
    NonextremalRank,
    Ntma,
    NtmaRank,
  };
  Kind kind = Kind::Minimal;
  int rank = 0;

  static PiPredicate minimal() { return {Kind::Minimal, 0}; }
  static PiPredicate maximal() { return {Kind::Maximal, 0}; }
  static PiPredicate extremal() { return {Kind::Extremal, 0}; }
  static PiPredicate of_rank(int r) { return {Kind::Rank, r}; }
  /// N^r: nonmaximal points of rank r.
  static PiPredicate nonmaximal_rank(int r) { return {Kind::NonmaximalRank, r}; }
  static PiPredicate nonextremal_rank(int r) { return {Kind::NonextremalRank, r}; }
  static PiPredicate ntma() { return {Kind::Ntma, 0}; }
  static PiPredicate ntma_rank(int r) { return {Kind::NtmaRank, r}; }
};

Deck deck(const Poset& p);
/// Points of p satisfying pred.
ElemSet pi_points(const Poset& p, PiPredicate pred);
Deck pi_deck(const Poset& p, PiPredicate pred);

/// s(q, p) from the deck alone. Requires |q| < n and n > 3 (SizeError);
/// ArithmeticError when the division is not exact.
long long kelly_count_from_deck(const Poset& q, const Deck& d);

/// Counts of every induced subposet of p with 1 <= size <= max_size, keyed by
/// certificate.
std::map<CanonicalCert, long long> subposet_profile(const Poset& p, int max_size);
/// The same counts for sizes below n, computed from the deck only.
std::map<CanonicalCert, long long> kelly_profile_from_deck(const Deck& d);

CertMultiset ideal_deck(const Poset& p);
CertMultiset filter_deck(const Poset& p);
/// Neighborhoods N({x}) over x of rank k.
CertMultiset neighborhood_deck(const Poset& p, int k);

/// All posets (one canonical representative each) whose deck is d. Throws
/// InconsistentDeckError when there is none or d is malformed.
std::vector<Poset> invert_deck(const Deck& d);

/// Groups indices of universe by equal decks; groups ordered by first index.
std::vector<std::vector<int>> deck_groups(const std::vector<Poset>& universe);

/// `deck n=<n>` then `<mult> <cert>` per distinct card, sorted by cert.
std::string format_deck(const Deck& d);
Deck parse_deck(std::string_view text);

}  // namespace ordrecon
