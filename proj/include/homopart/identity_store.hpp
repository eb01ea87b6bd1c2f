#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "homopart/corpus.hpp"
#include "homopart/format.hpp"
#include "homopart/scoring.hpp"

namespace homopart {

/// Alignment parameters recorded with a store.
struct StoreParams {
  std::string matrix = "BLOSUM62";
  int gap_open = 10;
  int gap_extend = 2;
  double coverage_min = 0.25;

  static StoreParams from(const ScoringScheme& scoring);
  bool operator==(const StoreParams&) const = default;
};

struct IdentityEntry {
  std::string a;
  std::string b;
  double identity = 0.0;

  bool operator==(const IdentityEntry&) const = default;
};

/// Sparse symmetric identity map over a fixed universe of ids.
///
/// Only pairs with identity >= floor are stored; an absent pair means
/// "below floor" and reads back as 0. Thresholds tested against the store
/// must not be below its floor (see require_threshold).
class IdentityStore {
 public:
  struct Neighbor {
    std::uint32_t index;
    double identity;
  };

  IdentityStore() = default;
  IdentityStore(StoreParams params, double floor, std::vector<std::string> universe,
                std::vector<IdentityEntry> entries);

  double floor() const { return floor_; }
  const StoreParams& params() const { return params_; }

  /// Universe size; indices are assigned in lexicographic id order.
  std::size_t size() const { return ids_.size(); }
  const std::string& id(std::size_t index) const { return ids_[index]; }
  const std::vector<std::string>& ids() const { return ids_; }
  bool contains(std::string_view id) const;
  /// Throws InputError for ids outside the universe.
  std::uint32_t index_of(std::string_view id) const;

  double lookup(std::uint32_t a, std::uint32_t b) const;
  double lookup(std::string_view a, std::string_view b) const;
  /// Stored neighbours of `index`, ascending by index.
  std::span<const Neighbor> neighbors(std::uint32_t index) const { return adjacency_[index]; }

  std::size_t entry_count() const { return entry_count_; }
  /// All stored pairs with a < b, sorted.
  std::vector<IdentityEntry> entries() const;

  /// Throws InputError when threshold `t` is below the store floor, i.e.
  /// when absent pairs could not be classified against it.
  void require_threshold(double t, std::string_view what) const;

  /// Adds ids (e.g. sequences without any stored pair) to the universe.
  void extend_universe(const std::vector<std::string>& ids);

  /// Canonical text form: header line then sorted `id_a<TAB>id_b<TAB>identity` rows.
  void write(std::ostream& out) const;
  static IdentityStore read(std::istream& in);

 private:
  void rebuild(std::vector<IdentityEntry> entries);

  StoreParams params_;
  double floor_ = 0.0;
  std::vector<std::string> ids_;
  std::unordered_map<std::string, std::uint32_t> index_;
  std::vector<std::vector<Neighbor>> adjacency_;
  std::size_t entry_count_ = 0;
};

struct AllPairsOptions {
  double floor = 0.25;
  unsigned workers = 1;
};

struct AllPairsReport {
  std::size_t pairs_evaluated = 0;
};

/// Identity of every unordered pair in `corpus`; entries >= floor are kept.
/// The result does not depend on the worker count.
IdentityStore all_pairs_identity(const Corpus& corpus, const ScoringScheme& scoring, const AllPairsOptions& options,
                                 AllPairsReport* report = nullptr);

/// Identity of every pair (x, y) with x in `first`, y in `second`. The two
/// corpora must not share ids.
IdentityStore all_pairs_identity(const Corpus& first, const Corpus& second, const ScoringScheme& scoring,
                                 const AllPairsOptions& options, AllPairsReport* report = nullptr);

/// For each id of `set_a`, its maximum identity to any other id of `set_b`
/// (absent pairs count as 0; an id is never compared with itself).
std::vector<double> max_identity_profile(const std::vector<std::string>& set_a, const std::vector<std::string>& set_b,
                                         const IdentityStore& store);

}  // namespace homopart
