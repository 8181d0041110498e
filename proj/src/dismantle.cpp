#include <unordered_map>

#include "ordrecon/canonical.hpp"
#include "ordrecon/poset.hpp"

namespace ordrecon {

namespace {

bool dismantle(const Poset& p, std::unordered_map<CanonicalCert, bool, CertHash>& memo) {
  if (p.size() <= 1) return true;
  const CanonicalCert cert = canonical_cert(p);
  if (auto it = memo.find(cert); it != memo.end()) return it->second;
  bool result = false;
  for (int x = 0; x < p.size() && !result; ++x) {
    if (is_irreducible(p, x)) result = dismantle(remove_point(p, x), memo);
  }
  memo.emplace(cert, result);
  return result;
}

}  // namespace

bool is_dismantlable(const Poset& p) {
  std::unordered_map<CanonicalCert, bool, CertHash> memo;
  return dismantle(p, memo);
}

}  // namespace ordrecon
