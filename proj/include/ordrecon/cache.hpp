#pragma once

#include <optional>
#include <string>
#include <vector>

#include "ordrecon/enumerate.hpp"

namespace ordrecon {

inline constexpr int kCacheFormatVersion = 1;

/// Value of ORDRECON_CACHE, or empty.
std::string cache_dir_from_env();

std::string universe_cache_path(const std::string& dir, int n, UniverseFilter filter,
                                int version = kCacheFormatVersion);
/// Text with a trailing FNV-1a checksum line.
std::string serialize_universe(const Universe& u, int version = kCacheFormatVersion);
/// Throws CacheCorruptError on a bad checksum or malformed body.
Universe deserialize_universe(const std::string& text);

void save_universe(const std::string& dir, const Universe& u);
/// nullopt when no file exists for (n, filter, current version).
std::optional<Universe> load_universe(const std::string& dir, int n, UniverseFilter filter);

/// Deck-group index over a universe: groups of positions with equal decks.
std::string deck_groups_cache_path(const std::string& dir, int n, UniverseFilter filter);
void save_deck_groups(const std::string& dir, int n, UniverseFilter filter,
                      const std::vector<std::vector<int>>& groups);
std::optional<std::vector<std::vector<int>>> load_deck_groups(const std::string& dir, int n,
                                                               UniverseFilter filter);

}  // namespace ordrecon
