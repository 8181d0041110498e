#pragma once

#include <string>
#include <vector>

#include "ordrecon/canonical.hpp"
#include "ordrecon/poset.hpp"

namespace ordrecon {

enum class UniverseFilter { All, Connected, ConnectedCoconnected };

std::string to_string(UniverseFilter f);
/// Accepts "all", "connected", "connected-coconnected". Throws ParseError.
UniverseFilter parse_filter(const std::string& text);
bool passes(const Poset& p, UniverseFilter f);

/// Every isomorphism type on n elements exactly once, sorted by certificate.
struct Universe {
  int n = 0;
  UniverseFilter filter = UniverseFilter::All;
  std::vector<CanonicalCert> certs;
};

inline constexpr int kDefaultEnumerationCap = 9;

/// Orderly generation level by level. Throws CapExceededError when n > cap
/// and SizeError when n < 1.
Universe enumerate(int n, UniverseFilter filter, int jobs = 1, int cap = kDefaultEnumerationCap);
/// Same, reading and writing the cache directory (empty = no cache).
Universe enumerate_cached(int n, UniverseFilter filter, const std::string& cache_dir, int jobs = 1,
                          int cap = kDefaultEnumerationCap);

/// One orderly step: the children of every parent certificate whose minimal
/// card is that parent.
std::vector<CanonicalCert> orderly_children(const std::vector<CanonicalCert>& parents, int jobs);
/// Independent strategy: add a maximal point over every down-set of every
/// parent and deduplicate globally.
std::vector<CanonicalCert> maximal_point_children(const std::vector<CanonicalCert>& parents, int jobs);

/// Posets obtained from p by adding a point n with strict down-set `lower` and
/// strict up-set `upper`, over every valid pair.
std::vector<Poset> one_point_extensions(const Poset& p);

std::vector<Poset> to_posets(const std::vector<CanonicalCert>& certs);

}  // namespace ordrecon
