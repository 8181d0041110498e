#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <set>

#include "oracles.hpp"
#include "ordrecon/cache.hpp"
#include "ordrecon/enumerate.hpp"
#include "ordrecon/errors.hpp"

using namespace ordrecon;
namespace fs = std::filesystem;

namespace {

std::set<CanonicalCert> certs_of(const std::vector<Poset>& ps) {
  std::set<CanonicalCert> out;
  for (const Poset& p : ps) out.insert(canonical_cert(p));
  return out;
}

// Number of multisets of connected posets with total size n, from the counts
// c[k] of connected posets on k points (Euler transform).
long long count_from_connected(const std::vector<long long>& c, int n) {
  std::vector<long long> ways(n + 1, 0);
  ways[0] = 1;
  for (int k = 1; k <= n; ++k) {
    // Multisets drawn from c[k] types of size k: add them one size at a time.
    std::vector<long long> next(n + 1, 0);
    for (int total = 0; total <= n; ++total) {
      if (!ways[total]) continue;
      // choose m parts of size k with repetition: C(c[k] + m - 1, m)
      long long choose = 1;
      for (int m = 0; total + m * k <= n; ++m) {
        if (m > 0) choose = choose * (c[k] + m - 1) / m;
        next[total + m * k] += ways[total] * choose;
      }
    }
    ways = next;
  }
  return ways[n];
}

struct TempDir {
  fs::path path;
  explicit TempDir(const std::string& name) : path(fs::temp_directory_path() / name) {
    fs::remove_all(path);
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
};

}  // namespace

TEST(Enumerate, KnownCounts) {
  const long long expected[] = {1, 2, 5, 16, 63, 318, 2045};
  for (int n = 1; n <= 7; ++n) EXPECT_EQ(enumerate(n, UniverseFilter::All).certs.size(), expected[n - 1]) << n;
}

TEST(Enumerate, MatchesNaiveClasses) {
  for (int n = 1; n <= 5; ++n) {
    const auto u = enumerate(n, UniverseFilter::All);
    EXPECT_EQ(std::set<CanonicalCert>(u.certs.begin(), u.certs.end()), certs_of(oracle::naive_classes(n))) << n;
  }
}

TEST(Enumerate, SortedAndDuplicateFree) {
  const auto u = enumerate(6, UniverseFilter::All);
  EXPECT_TRUE(std::is_sorted(u.certs.begin(), u.certs.end()));
  EXPECT_EQ(std::set<CanonicalCert>(u.certs.begin(), u.certs.end()).size(), u.certs.size());
}

TEST(Enumerate, SecondStrategyAgrees) {
  std::vector<CanonicalCert> level = enumerate(1, UniverseFilter::All).certs;
  for (int n = 2; n <= 6; ++n) {
    level = maximal_point_children(level, 1);
    EXPECT_EQ(level, enumerate(n, UniverseFilter::All).certs) << n;
  }
}

TEST(Enumerate, ConnectedCountsComposeToAll) {
  std::vector<long long> c(8, 0);
  for (int n = 1; n <= 7; ++n) {
    c[n] = static_cast<long long>(enumerate(n, UniverseFilter::Connected).certs.size());
    EXPECT_EQ(count_from_connected(c, n), static_cast<long long>(enumerate(n, UniverseFilter::All).certs.size()))
        << n;
  }
}

TEST(Enumerate, Filters) {
  for (const CanonicalCert& cert : enumerate(5, UniverseFilter::ConnectedCoconnected).certs) {
    const Poset p = poset_from_cert(cert);
    EXPECT_TRUE(is_connected(p));
    EXPECT_TRUE(is_coconnected(p));
  }
  EXPECT_EQ(parse_filter("connected-coconnected"), UniverseFilter::ConnectedCoconnected);
  EXPECT_THROW(parse_filter("bogus"), ParseError);
}

TEST(Enumerate, Limits) {
  EXPECT_THROW(enumerate(10, UniverseFilter::All), CapExceededError);
  EXPECT_THROW(enumerate(0, UniverseFilter::All), SizeError);
}

TEST(Cache, RoundTrip) {
  TempDir dir("ordrecon_test_cache_rt");
  const Universe u = enumerate(6, UniverseFilter::All);
  save_universe(dir.path.string(), u);
  const auto back = load_universe(dir.path.string(), 6, UniverseFilter::All);
  ASSERT_TRUE(back.has_value());
  EXPECT_EQ(back->certs, u.certs);
  EXPECT_EQ(enumerate_cached(6, UniverseFilter::All, dir.path.string()).certs, u.certs);
}

TEST(Cache, TamperedFileIsRejected) {
  TempDir dir("ordrecon_test_cache_tamper");
  save_universe(dir.path.string(), enumerate(5, UniverseFilter::All));
  const std::string path = universe_cache_path(dir.path.string(), 5, UniverseFilter::All);
  std::string text;
  {
    std::ifstream in(path);
    text.assign(std::istreambuf_iterator<char>(in), {});
  }
  const auto pos = text.find('\n') + 3;
  text[pos] = text[pos] == '0' ? '1' : '0';
  std::ofstream(path, std::ios::trunc) << text;
  EXPECT_THROW(load_universe(dir.path.string(), 5, UniverseFilter::All), CacheCorruptError);
}

TEST(Cache, VersionBumpMisses) {
  TempDir dir("ordrecon_test_cache_version");
  const Universe u = enumerate(4, UniverseFilter::All);
  std::ofstream(universe_cache_path(dir.path.string(), 4, UniverseFilter::All, kCacheFormatVersion - 1))
      << serialize_universe(u, kCacheFormatVersion - 1);
  EXPECT_FALSE(load_universe(dir.path.string(), 4, UniverseFilter::All).has_value());
  EXPECT_THROW(deserialize_universe(serialize_universe(u, kCacheFormatVersion + 1)), CacheCorruptError);
  EXPECT_EQ(enumerate_cached(4, UniverseFilter::All, dir.path.string()).certs, u.certs);
  EXPECT_TRUE(fs::exists(universe_cache_path(dir.path.string(), 4, UniverseFilter::All)));
}

TEST(Cache, DeckGroups) {
  TempDir dir("ordrecon_test_cache_groups");
  const std::vector<std::vector<int>> groups = {{0, 3}, {1}, {2}};
  save_deck_groups(dir.path.string(), 3, UniverseFilter::All, groups);
  EXPECT_EQ(load_deck_groups(dir.path.string(), 3, UniverseFilter::All), groups);
  EXPECT_FALSE(load_deck_groups(dir.path.string(), 4, UniverseFilter::All).has_value());
}
