#include "ordrecon/enumerate.hpp"

#include <algorithm>
#include <set>

#include "ordrecon/cache.hpp"
#include "ordrecon/errors.hpp"
#include "ordrecon/parallel.hpp"

namespace ordrecon {

std::string to_string(UniverseFilter f) {
  switch (f) {
    case UniverseFilter::All: return "all";
    case UniverseFilter::Connected: return "connected";
    case UniverseFilter::ConnectedCoconnected: return "connected-coconnected";
  }
  return "all";
}

UniverseFilter parse_filter(const std::string& text) {
  if (text == "all") return UniverseFilter::All;
  if (text == "connected") return UniverseFilter::Connected;
  if (text == "connected-coconnected") return UniverseFilter::ConnectedCoconnected;
  throw ParseError("unknown filter '" + text + "'");
}

bool passes(const Poset& p, UniverseFilter f) {
  switch (f) {
    case UniverseFilter::All: return true;
    case UniverseFilter::Connected: return is_connected(p);
    case UniverseFilter::ConnectedCoconnected: return is_connected(p) && is_coconnected(p);
  }
  return true;
}

namespace {

// Calls fn(lower, upper) for every down-set `lower` and up-set `upper` of p
// with lower < upper elementwise.
template <class Fn>
void for_each_extension_pair(const Poset& p, Fn&& fn) {
  const int m = p.size();
  const Mask all = ElemSet::full(m).bits();
  for (Mask lower = 0;; ++lower) {
    bool down_closed = true;
    Mask common = all;
    for (int x : ElemSet(lower)) {
      if (p.down_row(x) & ~lower) {
        down_closed = false;
        break;
      }
      common &= p.up_row(x);
    }
    if (down_closed) {
      for (Mask upper = common;; upper = (upper - 1) & common) {
        bool up_closed = true;
        for (int y : ElemSet(upper)) {
          if (p.up_row(y) & ~upper) {
            up_closed = false;
            break;
          }
        }
        if (up_closed) fn(lower, upper);
        if (upper == 0) break;
      }
    }
    if (lower == all) break;
  }
}

Poset extend(const Poset& p, Mask lower, Mask upper) {
  const int m = p.size();
  std::array<Mask, kMaxElements> rows{};
  for (int x = 0; x < m; ++x) rows[x] = p.up_row(x) | (((lower >> x) & 1U) ? (Mask{1} << m) : 0);
  rows[m] = upper;
  return Poset::from_closed_up_rows(m + 1, std::span<const Mask>(rows.data(), m + 1));
}

std::vector<CanonicalCert> merge_sorted(std::vector<std::vector<CanonicalCert>>& parts) {
  std::vector<CanonicalCert> out;
  for (auto& part : parts) out.insert(out.end(), part.begin(), part.end());
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

}  // namespace

std::vector<Poset> one_point_extensions(const Poset& p) {
  if (p.size() >= kMaxElements) throw SizeError("extension would exceed the supported size");
  std::vector<Poset> out;
  for_each_extension_pair(p, [&](Mask lower, Mask upper) { out.push_back(extend(p, lower, upper)); });
  return out;
}

std::vector<CanonicalCert> orderly_children(const std::vector<CanonicalCert>& parents, int jobs) {
  auto parts = parallel_map<std::vector<CanonicalCert>>(parents.size(), jobs, [&](std::size_t i) {
    const CanonicalCert& parent_cert = parents[i];
    const Poset parent = poset_from_cert(parent_cert);
    const int m = parent.size();
    std::set<CanonicalCert> kids;
    for_each_extension_pair(parent, [&](Mask lower, Mask upper) {
      const Poset child = extend(parent, lower, upper);
      // Accept only if no other card is smaller than the parent.
      for (int x = 0; x < m; ++x) {
        if (canonical_cert(remove_point(child, x)) < parent_cert) return;
      }
      kids.insert(canonical_cert(child));
    });
    return std::vector<CanonicalCert>(kids.begin(), kids.end());
  });
  std::vector<CanonicalCert> out;
  for (auto& part : parts) out.insert(out.end(), part.begin(), part.end());
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<CanonicalCert> maximal_point_children(const std::vector<CanonicalCert>& parents, int jobs) {
  auto parts = parallel_map<std::vector<CanonicalCert>>(parents.size(), jobs, [&](std::size_t i) {
    const Poset parent = poset_from_cert(parents[i]);
    const Mask all = parent.ground().bits();
    std::set<CanonicalCert> kids;
    for (Mask lower = 0;; ++lower) {
      bool down_closed = true;
      for (int x : ElemSet(lower)) down_closed = down_closed && !(parent.down_row(x) & ~lower);
      if (down_closed) kids.insert(canonical_cert(extend(parent, lower, 0)));
      if (lower == all) break;
    }
    return std::vector<CanonicalCert>(kids.begin(), kids.end());
  });
  return merge_sorted(parts);
}

std::vector<Poset> to_posets(const std::vector<CanonicalCert>& certs) {
  std::vector<Poset> out;
  out.reserve(certs.size());
  for (const auto& c : certs) out.push_back(poset_from_cert(c));
  return out;
}

namespace {

std::vector<CanonicalCert> all_certs(int n, const std::string& cache_dir, int jobs) {
  if (n == 1) return {canonical_cert(Poset::chain(1))};
  if (!cache_dir.empty()) {
    if (auto hit = load_universe(cache_dir, n, UniverseFilter::All)) return hit->certs;
  }
  auto parents = all_certs(n - 1, cache_dir, jobs);
  auto certs = orderly_children(parents, jobs);
  if (!cache_dir.empty()) save_universe(cache_dir, Universe{n, UniverseFilter::All, certs});
  return certs;
}

Universe build(int n, UniverseFilter filter, const std::string& cache_dir, int jobs, int cap) {
  if (n < 1) throw SizeError("enumeration needs n >= 1");
  if (n > cap) throw CapExceededError("n=" + std::to_string(n) + " exceeds the enumeration cap " + std::to_string(cap));
  if (!cache_dir.empty() && filter != UniverseFilter::All) {
    if (auto hit = load_universe(cache_dir, n, filter)) return *hit;
  }
  Universe u{n, filter, all_certs(n, cache_dir, jobs)};
  if (filter != UniverseFilter::All) {
    auto keep = parallel_map<char>(u.certs.size(), jobs, [&](std::size_t i) {
      return static_cast<char>(passes(poset_from_cert(u.certs[i]), filter));
    });
    std::vector<CanonicalCert> kept;
    for (std::size_t i = 0; i < u.certs.size(); ++i) {
      if (keep[i]) kept.push_back(u.certs[i]);
    }
    u.certs = std::move(kept);
    if (!cache_dir.empty()) save_universe(cache_dir, u);
  }
  return u;
}

}  // namespace

Universe enumerate(int n, UniverseFilter filter, int jobs, int cap) { return build(n, filter, "", jobs, cap); }

Universe enumerate_cached(int n, UniverseFilter filter, const std::string& cache_dir, int jobs, int cap) {
  return build(n, filter, cache_dir, jobs, cap);
}

}  // namespace ordrecon
