#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "homopart/corpus.hpp"
#include "homopart/identity_source.hpp"
#include "homopart/identity_store.hpp"
#include "homopart/rng.hpp"

namespace homopart {

/// t_s: inter-split ceiling (a same-class cross-split pair above it is a
/// violation). t_c: inter-class floor (each negative needs a positive in its
/// split at or above it); 0 disables the anchor constraint.
struct Thresholds {
  double t_s = 1.0;
  double t_c = 0.0;

  /// Checks the ranges and that both values can be decided by `store`.
  void validate(const IdentityStore& store) const;

  bool operator==(const Thresholds&) const = default;
};

struct RemovalRecord {
  std::string id;
  Label label = Label::positive;
  std::size_t split = 0;  // split the sequence was removed from
  std::size_t violations = 0;
  bool restored = false;

  bool operator==(const RemovalRecord&) const = default;
};

/// Id lists are kept sorted.
struct Split {
  std::vector<std::string> positives;
  std::vector<std::string> negatives;

  bool operator==(const Split&) const = default;
};

struct Partition {
  std::size_t k = 0;
  std::vector<Split> splits;
  Thresholds thresholds;
  std::uint64_t seed = 0;
  std::string dataset;
  std::vector<RemovalRecord> removed;
  std::vector<std::string> unassigned_negatives;

  bool operator==(const Partition&) const = default;
};

using IdSets = std::vector<std::vector<std::string>>;

/// Capped single-linkage clustering of the positives into exactly k sets.
///
/// Stored pairs are merged in descending identity (ties by id pair) unless
/// the merged cluster would exceed ceil(n / k); afterwards the two smallest
/// clusters (ties by smallest member id) are merged until k remain. Sets are
/// returned sorted, ordered by their smallest id.
IdSets cluster_positives(const std::vector<std::string>& positives, const IdentityStore& store, std::size_t k);

struct CleanResult {
  IdSets splits;
  std::vector<RemovalRecord> removed;
};

/// Removes one member of every cross-split pair with identity > t_s. Pairs are
/// ranked by the summed violation counts of their members (counted once, on
/// the input); the member of the currently larger split goes, `rng` decides
/// size ties.
CleanResult remove_inter_split_violations(const IdSets& splits, Label label, const IdentityStore& store, double t_s,
                                          Rng& rng);

/// Re-inserts removed records, fewest violations first (ties by id), into
/// their original split whenever that creates no violation. One pass is
/// enough: the split contents only grow, so a rejected record stays rejected.
void readd_removed(IdSets& splits, std::vector<RemovalRecord>& removed, const IdentityStore& store, double t_s);

struct NegativeAssignment {
  IdSets splits;
  std::vector<RemovalRecord> removed;
  /// Negatives without a qualifying positive in any split.
  std::vector<std::string> unassigned;
};

/// Places negatives next to the positive splits.
///
/// A negative's candidate splits hold a positive with identity >= t_c (every
/// split when t_c is 0). Negatives go in order of candidate count, then id,
/// to the candidate split with the fewest negatives (lowest index on ties).
/// Without `base` the result is then cleaned and re-added like the
/// positives. With `base` (an assignment at a higher t_c over the same
/// positives) base placements are kept, and each further qualifying negative
/// is placed only if it creates no violation; otherwise it is recorded as
/// removed.
NegativeAssignment assign_negatives(const IdSets& positive_splits, const std::vector<std::string>& negatives,
                                    const IdentityStore& store, const Thresholds& thresholds, Rng& rng,
                                    const NegativeAssignment* base = nullptr);

/// Partitions for every (t_s, t_c) of the grid. Positives are clustered once
/// per t_s; t_c levels run in descending order, each lower level built
/// incrementally on the one above.
std::map<std::pair<double, double>, Partition> build_cv_sets(const std::vector<std::string>& positives,
                                                            const std::vector<std::string>& negatives,
                                                            const IdentityStore& store, std::size_t k,
                                                            const std::vector<double>& t_s_list,
                                                            const std::vector<double>& t_c_list, std::uint64_t seed,
                                                            const std::string& dataset = {});

/// Training set for a given test split: pool sequences with identity > t_s to
/// any same-class test sequence are dropped, then negatives need a retained
/// positive at >= train_t_c.
Split derive_train_for_test(const Split& test, const Split& pool, const IdentityStore& store, double t_s,
                            double train_t_c);

/// Baseline partitioner that clusters against cluster founders only, the way
/// representative-based tools do. It performs no violation removal.
///
/// Each class is processed longest first (ties by id); a sequence joins the
/// first cluster whose founder reaches `threshold`. Clusters, largest first
/// (equal sizes in seeded random order), each go to the split currently
/// holding the fewest sequences of that class.
Partition greedy_representative_partition(const Corpus& positives, const Corpus& negatives,
                                          const IdentitySource& identity, double threshold, std::size_t k,
                                          std::uint64_t seed);

}  // namespace homopart
