#pragma once

#include <cstddef>
#include <cstdint>
#include <string>

#include "homopart/corpus.hpp"

namespace homopart {

struct SynthOptions {
  std::size_t families = 60;
  std::size_t family_size = 8;
  std::size_t min_length = 60;
  std::size_t max_length = 400;
  /// Per-residue substitution probability of each member relative to its
  /// founder. Members also receive short indels at rate mutation_rate / 20
  /// per residue.
  double mutation_rate = 0.2;
  /// Probability that a family (or, in a mixed family, a member) is negative.
  double negative_fraction = 0.5;
  /// Share of families whose members draw their class individually.
  double mixed_fraction = 0.25;
  std::uint64_t seed = 1;
  std::string id_prefix = "s";
};

/// Random protein families: uniform founders, members derived by
/// substitution and indels. Ids are `<prefix><family>_<member>`, zero padded
/// so that lexicographic order follows generation order. Every record gets a
/// creation date between 2015-01-01 and 2024-12-31.
Corpus synthesize_corpus(const SynthOptions& options);

}  // namespace homopart
