#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "homopart/corpus.hpp"
#include "homopart/identity_store.hpp"
#include "homopart/partition.hpp"

namespace homopart {

enum class Strategy { no_balance, hard_balance, length_control, minimal };

std::string_view to_string(Strategy strategy);
/// Accepts the full names and the short forms none, hard, length, minimal.
Strategy parse_strategy(std::string_view text);

struct BalancedSet {
  std::vector<std::string> positives;  // sorted
  std::vector<std::string> negatives;  // sorted
  Strategy strategy = Strategy::no_balance;
  std::uint64_t seed = 0;
  std::string provenance;

  bool operator==(const BalancedSet&) const = default;
};

BalancedSet no_balance(const Split& split, std::string provenance = {});

/// Negatives subsampled uniformly to the positive count; a split with no
/// more negatives than positives is returned unchanged.
BalancedSet hard_balance(const Split& split, std::uint64_t seed, std::string provenance = {});

/// Greedy nearest-length matching. Positives are visited in a seeded random
/// order; each takes the unused negative closest in length. Equally close
/// negatives are ordered by (length, id) and one is drawn at random. Splits
/// with no more negatives than positives are returned unchanged.
BalancedSet length_control(const Split& split, const Corpus& sequences, std::uint64_t seed,
                           std::string provenance = {});

/// One (training split, t_c) combination taking part in a Minimal run.
struct MinimalSetting {
  std::string name;
  std::string dataset;
  Split split;
  double t_c = 0.0;
};

enum class Scope { global, per_dataset };

/// Brings every setting down to the smallest positive and negative counts of
/// its scope. Positives are subsampled uniformly; negatives are drawn
/// uniformly from those with identity >= t_c to a retained positive. Throws
/// InfeasibleError when a setting's pool is smaller than the target.
std::vector<BalancedSet> minimal(const std::vector<MinimalSetting>& settings, const IdentityStore& store,
                                 std::uint64_t seed, Scope scope);

struct ValidationSplit {
  Split train;
  Split validation;
};

/// Holds out min(ceil(fraction * n), cap) sequences, apportioned between the
/// classes by largest remainder with at least one of each.
ValidationSplit validation_split(const Split& training, double fraction, std::size_t cap, std::uint64_t seed);

}  // namespace homopart
