#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "homopart/corpus.hpp"
#include "homopart/identity_store.hpp"
#include "homopart/scoring.hpp"

namespace homopart {

/// Pairwise identity oracle used by auditing, histograms and the baseline
/// partitioner.
class IdentitySource {
 public:
  virtual ~IdentitySource() = default;

  virtual double identity(std::string_view a, std::string_view b) const = 0;

  /// Identities below this value may be reported as 0. Threshold tests are
  /// exact only for thresholds >= exact_above().
  virtual double exact_above() const = 0;
};

/// Reads a precomputed store; pairs below its floor read as 0.
class StoreIdentity final : public IdentitySource {
 public:
  explicit StoreIdentity(const IdentityStore& store) : store_(store) {}

  double identity(std::string_view a, std::string_view b) const override { return store_.lookup(a, b); }
  double exact_above() const override { return store_.floor(); }

 private:
  const IdentityStore& store_;
};

/// Aligns on demand. When a store is supplied, pairs it holds are served
/// from it and only pairs below its floor are aligned.
class ComputedIdentity final : public IdentitySource {
 public:
  ComputedIdentity(const std::vector<const Corpus*>& corpora, ScoringScheme scoring,
                   const IdentityStore* cache = nullptr);

  double identity(std::string_view a, std::string_view b) const override;
  double exact_above() const override { return 0.0; }

 private:
  std::unordered_map<std::string, std::vector<std::uint8_t>> encoded_;
  ScoringScheme scoring_;
  const IdentityStore* cache_;
};

}  // namespace homopart
