#pragma once

#include <array>
#include <compare>
#include <cstdint>
#include <functional>
#include <string>
#include <string_view>
#include <vector>

#include "ordrecon/poset.hpp"

namespace ordrecon {

/// Canonical certificate: the strictly upper triangular relation matrix of
/// the canonically relabeled poset. Bit k of the row-major pair list
/// (0,1),(0,2),...,(n-2,n-1) sits at word k/64, position 63 - k%64, so
/// comparing (n, words) compares the bit strings lexicographically.
struct CanonicalCert {
  std::uint8_t n = 0;
  std::array<std::uint64_t, 2> words{};

  auto operator<=>(const CanonicalCert&) const = default;

  /// `n:` followed by lowercase hex of ceil(m/8) bytes, m = n(n-1)/2.
  std::string to_string() const;
  static CanonicalCert parse(std::string_view text);
  std::uint64_t digest() const;
};

struct CertHash {
  std::size_t operator()(const CanonicalCert& c) const { return c.digest(); }
};

/// map[x] is the image of x. For maps out of an induced subposet the domain
/// labels are the compacted ones.
using Morphism = std::vector<int>;

struct CanonicalForm {
  CanonicalCert cert;
  /// labeling[i] is the element of P placed at canonical position i.
  std::vector<int> labeling;
};

CanonicalForm canonical_form(const Poset& p);
CanonicalCert canonical_cert(const Poset& p);
CanonicalCert canonical_cert(const Poset& p, ElemSet s);
/// Inverse of canonical_cert up to isomorphism: the poset whose relation
/// matrix is the certificate itself.
Poset poset_from_cert(const CanonicalCert& cert);

/// Calls fn for every isomorphism p -> q until fn returns false.
void for_each_isomorphism(const Poset& p, const Poset& q,
                          const std::function<bool(const Morphism&)>& fn);
std::vector<Morphism> isomorphisms(const Poset& p, const Poset& q);
bool are_isomorphic(const Poset& p, const Poset& q);
std::vector<Morphism> automorphisms(const Poset& p);
bool is_rigid(const Poset& p);
/// Order-reversing bijections p -> p.
std::vector<Morphism> dual_automorphisms(const Poset& p);
/// Checks that m is an order isomorphism between p and q.
bool is_isomorphism(const Poset& p, const Poset& q, const Morphism& m);

/// Number of subsets S with induced(p, S) isomorphic to q. Throws SizeError
/// when |q| > |p|.
long long count_subposets(const Poset& q, const Poset& p);

}  // namespace ordrecon
