#pragma once

#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "ordrecon/canonical.hpp"
#include "ordrecon/deck.hpp"
#include "ordrecon/errors.hpp"
#include "ordrecon/poset.hpp"

namespace ordrecon {

/// Deck-only access to parameters of P. Facts whose reconstruction this
/// library does not carry out itself are read off every poset with the given
/// deck (via invert_deck) and accepted only when all of them agree.
class DeckOracle {
 public:
  explicit DeckOracle(Deck d);

  const Deck& deck() const { return deck_; }
  int n() const { return deck_.n; }
  const std::vector<Poset>& witnesses() const;

  /// The common value of extract over all witnesses. Throws
  /// AmbiguousParameterError naming `what` when two witnesses disagree.
  template <class F>
  auto parameter(const std::string& what, F&& extract) const {
    const auto& ws = witnesses();
    auto value = extract(ws.front());
    for (std::size_t i = 1; i < ws.size(); ++i) {
      if (!(extract(ws[i]) == value)) throw AmbiguousParameterError(what + " is not determined by the deck");
    }
    return value;
  }

  /// s(q, P). Kelly counting from the deck when |q| < n; otherwise 0 or 1
  /// read off the witnesses.
  long long copies(const Poset& q) const;

  /// Oracle for the deck of the dual poset.
  DeckOracle dual() const;

 private:
  Deck deck_;
  mutable std::optional<std::vector<Poset>> witnesses_;
  mutable std::optional<std::map<CanonicalCert, long long>> profile_;
};

template <class F>
auto oracle_parameter(const Deck& d, F&& extract) {
  return DeckOracle(d).parameter("parameter", std::forward<F>(extract));
}

Deck dual_deck(const Deck& d);

enum class CardKind { Minimal, Maximal, Extremal, Nonextremal, Ntma };
std::string to_string(CardKind k);

/// A class of isomorphic cards sharing one classification. `rank` is the
/// rank of the removed point when known; for NTMA cards `maximal` records
/// whether the removed point is maximal.
struct TaggedCard {
  CanonicalCert card;
  int multiplicity = 1;
  CardKind kind = CardKind::Ntma;
  std::optional<int> rank;
  bool maximal = false;
  std::string method;

  bool operator==(const TaggedCard&) const = default;
};

/// Classifies every non-NTMA card as minimal, maximal, extremal or
/// nonextremal with the rank of its removed point. NTMA cards come back
/// untouched with kind Ntma. Requires a connected P with n >= 4.
std::vector<TaggedCard> nonextremal_rank_assignment(const Deck& d);

/// Rank (and maximality) of the removed point for every NTMA card of a
/// connected coconnected decomposable P.
std::vector<TaggedCard> ntma_rank_assignment(const Deck& d);
/// r -> cards of NTMA points of rank r. NotDecomposableError when P has no
/// nontrivial order-autonomous set.
std::map<int, Deck> ntma_rank_decks(const Deck& d);

/// r -> N^r, the cards of nonmaximal points of rank r > 0.
std::map<int, Deck> nonmaximal_rank_decks(const Deck& d);
/// Cards of extremal points: the deck minus every N^r.
Deck extremal_deck(const Deck& d);

struct FilterShiftTag {
  CanonicalCert card;
  int multiplicity = 1;
  /// Set when the card's filter deck is not the parent's minus one filter,
  /// which forces the removed point to be maximal.
  bool maximal = false;

  bool operator==(const FilterShiftTag&) const = default;
};
std::vector<FilterShiftTag> classify_by_filter_shift(const Deck& d);

enum class ChainKind { Ranging, DuallyRanging };
struct RangingChain {
  ElemSet chain;
  ChainKind kind = ChainKind::Ranging;

  bool operator==(const RangingChain&) const = default;
};
/// Chain components of P∖min(P) that are order-autonomous in P and whose
/// bottom has a unique lower cover; dually for P∖max(P).
std::vector<RangingChain> ranging_chain_analysis(const Poset& p);

/// Deck-only test for dismantlability. Requires n >= 4 and connected P.
bool recognize_dismantlable(const Deck& d);

/// Reconstructs P when P∖min(P) is connected with a minmax pair, or is a
/// linear sum around such a set with every minimal point below it. Returns
/// nothing for decks outside that class.
std::optional<CanonicalCert> reconstruct_special(const Deck& d);

struct ReconReport {
  Deck input_deck;
  std::vector<TaggedCard> card_tags;
  std::map<int, Deck> rank_decks;
  std::map<int, Deck> ntma_rank_decks;
  Deck extremal_deck;
  std::optional<CanonicalCert> reconstructed;
  std::vector<std::string> method;
};
ReconReport reconstruct_report(const Deck& d);
std::string format_recon_report(const ReconReport& r);

}  // namespace ordrecon
