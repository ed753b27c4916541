#pragma once

// Property suite behind `tradelab verify`.

#include <functional>
#include <string>
#include <vector>

namespace tradelab {

struct PropertyResult {
  std::string name;
  bool passed = false;
  std::string detail;
};

using PropertySink = std::function<void(const PropertyResult&)>;

/// Property names in execution order.
const std::vector<std::string>& verification_properties();

/// Runs every property whose name contains `filter` (all when empty),
/// reporting each result to `sink` as soon as it is known.
std::vector<PropertyResult> run_verification(const std::string& filter,
                                             const PropertySink& sink = {});

}  // namespace tradelab
