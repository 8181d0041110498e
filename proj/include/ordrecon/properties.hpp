#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "ordrecon/canonical.hpp"
#include "ordrecon/enumerate.hpp"

namespace ordrecon {

/// A failed check. Re-running the property's check on `witnesses` with the
/// same max_n reproduces it.
struct Finding {
  std::string property;
  int max_n = 0;
  std::vector<CanonicalCert> witnesses;
  std::string diagnostic;

  bool operator==(const Finding&) const = default;
};

/// What one check looks at: a single poset, or all posets sharing a deck.
enum class UnitKind { Poset, DeckGroup, Group };

/// Returns a diagnostic when the posets violate the property.
using UnitCheck = std::function<std::optional<std::string>(const std::vector<Poset>&)>;

struct RunOptions {
  int jobs = 1;
  /// Universe cache directory; empty disables caching.
  std::string cache_dir;
};

struct PropertyInfo {
  std::string id;
  /// Short statement of the claim being checked.
  std::string anchor;
  std::string universe;
  int min_n = 1;
  int default_max_n = 8;
  UnitKind unit = UnitKind::Poset;
};

const std::vector<PropertyInfo>& property_registry();
/// Throws UnknownPropertyError.
const PropertyInfo& property_info(const std::string& id);

/// Findings in universe order; independent of opts.jobs.
std::vector<Finding> run_property(const std::string& id, int max_n, const RunOptions& opts = {});

/// `FAIL <id> witnesses=<cert,...>`.
std::string format_finding(const Finding& f);
/// JSON document listing the findings with everything needed to replay them.
std::string findings_to_json(const std::vector<Finding>& findings);
std::vector<Finding> findings_from_json(const std::string& text);
/// Re-runs each finding's check on its witnesses; returns those that still fail.
std::vector<Finding> replay_findings(const std::vector<Finding>& findings);

}  // namespace ordrecon
