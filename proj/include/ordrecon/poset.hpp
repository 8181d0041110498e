#pragma once

#include <array>
#include <bit>
#include <cstdint>
#include <initializer_list>
#include <iosfwd>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace ordrecon {

/// Largest supported ground set. Rows of the order relation fit in one word.
inline constexpr int kMaxElements = 16;

using Mask = std::uint32_t;

/// A subset of the ground set 0..n-1 of some poset, stored as a bit vector.
class ElemSet {
 public:
  class iterator {
   public:
    using value_type = int;
    using difference_type = std::ptrdiff_t;
    constexpr iterator() = default;
    constexpr explicit iterator(Mask rest) : rest_(rest) {}
    constexpr int operator*() const { return std::countr_zero(rest_); }
    constexpr iterator& operator++() {
      rest_ &= rest_ - 1;
      return *this;
    }
    constexpr iterator operator++(int) {
      iterator old = *this;
      ++*this;
      return old;
    }
    constexpr bool operator==(const iterator&) const = default;

   private:
    Mask rest_ = 0;
  };

  constexpr ElemSet() = default;
  constexpr explicit ElemSet(Mask bits) : bits_(bits) {}
  ElemSet(std::initializer_list<int> members) {
    for (int x : members) bits_ |= Mask{1} << x;
  }

  static constexpr ElemSet full(int n) {
    return ElemSet(n >= 32 ? ~Mask{0} : (Mask{1} << n) - 1);
  }
  static constexpr ElemSet single(int x) { return ElemSet(Mask{1} << x); }

  constexpr Mask bits() const { return bits_; }
  constexpr bool contains(int x) const { return (bits_ >> x) & 1U; }
  constexpr int size() const { return std::popcount(bits_); }
  constexpr bool empty() const { return bits_ == 0; }
  constexpr int first() const { return std::countr_zero(bits_); }
  constexpr bool is_subset_of(ElemSet other) const { return (bits_ & ~other.bits_) == 0; }
  constexpr bool intersects(ElemSet other) const { return (bits_ & other.bits_) != 0; }

  constexpr ElemSet with(int x) const { return ElemSet(bits_ | (Mask{1} << x)); }
  constexpr ElemSet without(int x) const { return ElemSet(bits_ & ~(Mask{1} << x)); }

  constexpr ElemSet operator|(ElemSet o) const { return ElemSet(bits_ | o.bits_); }
  constexpr ElemSet operator&(ElemSet o) const { return ElemSet(bits_ & o.bits_); }
  constexpr ElemSet operator-(ElemSet o) const { return ElemSet(bits_ & ~o.bits_); }
  constexpr ElemSet& operator|=(ElemSet o) {
    bits_ |= o.bits_;
    return *this;
  }
  constexpr ElemSet& operator&=(ElemSet o) {
    bits_ &= o.bits_;
    return *this;
  }
  constexpr ElemSet& operator-=(ElemSet o) {
    bits_ &= ~o.bits_;
    return *this;
  }
  constexpr auto operator<=>(const ElemSet&) const = default;

  constexpr iterator begin() const { return iterator(bits_); }
  constexpr iterator end() const { return iterator(0); }

  std::vector<int> to_vector() const { return {begin(), end()}; }
  std::string to_string() const;

 private:
  Mask bits_ = 0;
};

/// Finite poset on 0..n-1 storing the strict order x < y as bit rows.
///
/// Values are immutable: every operation that "changes" a poset returns a
/// new one. The relation is always transitively closed, irreflexive and
/// antisymmetric; constructors reject anything else.
class Poset {
 public:
  Poset() = default;

  /// Transitive closure of the given cover (or arbitrary) pairs.
  /// Throws IndexError for labels outside 0..n-1, CycleError if the closure
  /// is not antisymmetric.
  static Poset from_cover_pairs(int n, std::span<const std::pair<int, int>> pairs);
  static Poset from_cover_pairs(int n, std::initializer_list<std::pair<int, int>> pairs) {
    return from_cover_pairs(n, std::span<const std::pair<int, int>>(pairs.begin(), pairs.size()));
  }
  /// up_rows[x] = elements strictly above x (before closure).
  static Poset from_up_rows(int n, std::span<const Mask> up_rows);
  /// Same as from_up_rows but trusts that rows are already closed and valid.
  static Poset from_closed_up_rows(int n, std::span<const Mask> up_rows);

  static Poset chain(int n);
  static Poset antichain(int n);

  int size() const { return n_; }
  bool less(int x, int y) const { return (up_[x] >> y) & 1U; }
  bool comparable(int x, int y) const { return less(x, y) || less(y, x); }
  ElemSet above(int x) const { return ElemSet(up_[x]); }
  ElemSet below(int x) const { return ElemSet(down_[x]); }
  ElemSet ground() const { return ElemSet::full(n_); }
  Mask up_row(int x) const { return up_[x]; }
  Mask down_row(int x) const { return down_[x]; }
  int relation_count() const;

  /// Lower/upper covers of x.
  ElemSet lower_covers(int x) const;
  ElemSet upper_covers(int x) const;

  /// Re-checks closure, irreflexivity and antisymmetry. Throws CycleError.
  void validate() const;

  bool operator==(const Poset& other) const;

 private:
  void rebuild_down();

  int n_ = 0;
  std::array<Mask, kMaxElements> up_{};
  std::array<Mask, kMaxElements> down_{};
};

struct ExtremalSets {
  ElemSet minimal;
  ElemSet maximal;
  ElemSet extremal;
};

/// Chain lengths count edges: a chain of length k has k+1 elements.
struct RankProfile {
  std::vector<int> rank;
  std::vector<int> dual_rank;
  int height = 0;
};

ExtremalSets extremal_sets(const Poset& p);
RankProfile rank_profile(const Poset& p);
int height(const Poset& p);

/// Reflexive down-set / up-set of x.
ElemSet down_set(const Poset& p, int x);
ElemSet up_set(const Poset& p, int x);
/// Points comparable to (or inside) some member of a. Throws EmptySetError.
ElemSet neighborhood(const Poset& p, ElemSet a);

std::vector<ElemSet> components(const Poset& p);
/// Components of the comparability graph restricted to `within`.
std::vector<ElemSet> components_within(const Poset& p, ElemSet within);
bool is_connected(const Poset& p);

Poset linear_sum(const Poset& lower, const Poset& upper);
/// Ground sets S_1 < S_2 < ... of the finest linear sum decomposition.
std::vector<ElemSet> linear_summand_sets(const Poset& p);
std::vector<Poset> linear_summands(const Poset& p);
bool is_coconnected(const Poset& p);

Poset dual(const Poset& p);
/// Restriction to s with labels compacted in increasing order. Throws
/// EmptySetError when s is empty unless allow_empty is set.
Poset induced(const Poset& p, ElemSet s, bool allow_empty = false);
/// p with x deleted (a labeled card).
Poset remove_point(const Poset& p, int x);
/// Disjoint union with b relabeled after a.
Poset disjoint_union(const Poset& a, const Poset& b);

int longest_chain_through(const Poset& p, int x);

int width(const Poset& p);
bool is_irreducible(const Poset& p, int x);
/// Backtracking search over elimination orders, memoized by certificate.
bool is_dismantlable(const Poset& p);

struct CutpointInfo {
  bool is_cutpoint = false;
  /// Components of K minus c, where K is the component containing c,
  /// as ground sets of p and as induced posets.
  std::vector<ElemSet> component_sets;
  std::vector<Poset> components;
};
CutpointInfo cutpoint_queries(const Poset& p, int c);

/// Sorted multisets of |down(x)| and |up(x)|.
std::vector<int> ideal_size_sequence(const Poset& p);
std::vector<int> filter_size_sequence(const Poset& p);

/// Text format: first line n, then one `a<b` pair per line, `#` comments.
Poset parse_poset_text(std::string_view text);
std::string format_poset_text(const Poset& p);

std::ostream& operator<<(std::ostream& os, const Poset& p);

}  // namespace ordrecon
