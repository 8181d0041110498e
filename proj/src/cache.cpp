#include "ordrecon/cache.hpp"

#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "ordrecon/errors.hpp"

namespace ordrecon {

namespace fs = std::filesystem;

namespace {

std::uint64_t fnv1a(const std::string& text) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : text) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::string hex64(std::uint64_t v) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
  return buf;
}

std::string seal(const std::string& body) { return body + "checksum " + hex64(fnv1a(body)) + "\n"; }

// Returns the body after verifying the checksum line.
std::string unseal(const std::string& text) {
  const auto pos = text.rfind("checksum ");
  if (pos == std::string::npos || (pos > 0 && text[pos - 1] != '\n')) {
    throw CacheCorruptError("cache file has no checksum line");
  }
  std::string body = text.substr(0, pos);
  std::string line = text.substr(pos + 9);
  while (!line.empty() && (line.back() == '\n' || line.back() == '\r')) line.pop_back();
  if (line != hex64(fnv1a(body))) throw CacheCorruptError("cache checksum mismatch");
  return body;
}

std::optional<std::string> read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) return std::nullopt;
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

void write_file_atomic(const std::string& path, const std::string& text) {
  fs::create_directories(fs::path(path).parent_path());
  const std::string tmp = path + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error("cannot write cache file " + tmp);
    out << text;
    if (!out) throw Error("cannot write cache file " + tmp);
  }
  fs::rename(tmp, path);
}

std::string key_stem(int n, UniverseFilter filter, int version) {
  return "n" + std::to_string(n) + "-" + to_string(filter) + "-v" + std::to_string(version);
}

}  // namespace

std::string cache_dir_from_env() {
  const char* v = std::getenv("ORDRECON_CACHE");
  return v ? std::string(v) : std::string();
}

std::string universe_cache_path(const std::string& dir, int n, UniverseFilter filter, int version) {
  return (fs::path(dir) / ("universe-" + key_stem(n, filter, version) + ".txt")).string();
}

std::string serialize_universe(const Universe& u, int version) {
  std::ostringstream os;
  os << "ordrecon-universe version=" << version << " n=" << u.n << " filter=" << to_string(u.filter)
     << " count=" << u.certs.size() << '\n';
  for (const auto& c : u.certs) os << c.to_string() << '\n';
  return seal(os.str());
}

Universe deserialize_universe(const std::string& text) {
  std::istringstream is(unseal(text));
  std::string magic, version, n_field, filter_field, count_field;
  if (!(is >> magic >> version >> n_field >> filter_field >> count_field) || magic != "ordrecon-universe" ||
      version != "version=" + std::to_string(kCacheFormatVersion) || n_field.rfind("n=", 0) != 0 ||
      filter_field.rfind("filter=", 0) != 0 || count_field.rfind("count=", 0) != 0) {
    throw CacheCorruptError("malformed universe cache header");
  }
  Universe u;
  try {
    u.n = std::stoi(n_field.substr(2));
    u.filter = parse_filter(filter_field.substr(7));
    const std::size_t count = std::stoul(count_field.substr(6));
    std::string line;
    while (is >> line) u.certs.push_back(CanonicalCert::parse(line));
    if (u.certs.size() != count) throw CacheCorruptError("universe cache count mismatch");
  } catch (const CacheCorruptError&) {
    throw;
  } catch (const std::exception& e) {
    throw CacheCorruptError(std::string("malformed universe cache: ") + e.what());
  }
  return u;
}

void save_universe(const std::string& dir, const Universe& u) {
  write_file_atomic(universe_cache_path(dir, u.n, u.filter), serialize_universe(u));
}

std::optional<Universe> load_universe(const std::string& dir, int n, UniverseFilter filter) {
  auto text = read_file(universe_cache_path(dir, n, filter));
  if (!text) return std::nullopt;
  Universe u = deserialize_universe(*text);
  if (u.n != n || u.filter != filter) throw CacheCorruptError("universe cache key mismatch");
  return u;
}

std::string deck_groups_cache_path(const std::string& dir, int n, UniverseFilter filter) {
  return (fs::path(dir) / ("deckgroups-" + key_stem(n, filter, kCacheFormatVersion) + ".txt")).string();
}

void save_deck_groups(const std::string& dir, int n, UniverseFilter filter,
                      const std::vector<std::vector<int>>& groups) {
  std::ostringstream os;
  os << "ordrecon-deckgroups version=" << kCacheFormatVersion << " n=" << n << " filter=" << to_string(filter)
     << " count=" << groups.size() << '\n';
  for (const auto& g : groups) {
    for (std::size_t i = 0; i < g.size(); ++i) os << (i ? " " : "") << g[i];
    os << '\n';
  }
  write_file_atomic(deck_groups_cache_path(dir, n, filter), seal(os.str()));
}

std::optional<std::vector<std::vector<int>>> load_deck_groups(const std::string& dir, int n,
                                                               UniverseFilter filter) {
  auto text = read_file(deck_groups_cache_path(dir, n, filter));
  if (!text) return std::nullopt;
  std::istringstream is(unseal(*text));
  std::string header;
  std::getline(is, header);
  const std::string expect = "ordrecon-deckgroups version=" + std::to_string(kCacheFormatVersion) +
                             " n=" + std::to_string(n) + " filter=" + to_string(filter) + " count=";
  if (header.rfind(expect, 0) != 0) throw CacheCorruptError("deck-group cache key mismatch");
  std::vector<std::vector<int>> groups;
  std::string line;
  while (std::getline(is, line)) {
    std::istringstream ls(line);
    std::vector<int> g;
    int idx;
    while (ls >> idx) g.push_back(idx);
    groups.push_back(std::move(g));
  }
  if (std::to_string(groups.size()) != header.substr(expect.size())) {
    throw CacheCorruptError("deck-group cache count mismatch");
  }
  return groups;
}

}  // namespace ordrecon
