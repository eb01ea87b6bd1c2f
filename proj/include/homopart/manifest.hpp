#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "homopart/audit.hpp"
#include "homopart/balance.hpp"
#include "homopart/partition.hpp"

namespace homopart {

using Json = nlohmann::json;

inline constexpr int kManifestVersion = 1;

/// {version, params, splits, removed, unassigned_negatives}; every id array
/// is sorted so that equal partitions serialize identically.
Json partition_json(const Partition& partition);

/// Reads a partition (or balanced) manifest; extra members are ignored.
Partition parse_partition(const Json& manifest);

/// Partition manifest of `source` with each split replaced by the matching
/// balanced set, plus a `strategy` block.
Json balanced_json(const Partition& source, const std::vector<BalancedSet>& sets, Json strategy);

Json report_json(const ViolationReport& report);

/// Two-space indented text with a trailing newline.
std::string dump(const Json& json);

}  // namespace homopart
