#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

#include "homopart/scoring.hpp"

namespace homopart {

/// Half-open residue range [begin, end).
struct Span {
  std::size_t begin = 0;
  std::size_t end = 0;

  bool operator==(const Span&) const = default;
};

struct LocalAlignment {
  int score = 0;
  std::size_t aligned_columns = 0;  // including gap columns
  std::size_t matches = 0;
  Span span_a;
  Span span_b;

  bool operator==(const LocalAlignment&) const = default;
};

/// Score and column counts of the optimal local alignment, without spans.
struct AlignmentStats {
  int score = 0;
  std::uint32_t matches = 0;
  std::uint32_t columns = 0;

  bool operator==(const AlignmentStats&) const = default;
};

/// Residues translated to 0..19 codes. Throws InputError on any
/// non-canonical residue.
std::vector<std::uint8_t> encode_residues(std::string_view residues);

/// Smith-Waterman local alignment with affine gaps, linear memory.
///
/// Among equal-scoring alignments the result follows a fixed traceback
/// order: diagonal before up (gap in b) before left (gap in a); a gap state
/// prefers opening over extending on ties; the end cell is the last
/// maximum in row-major order. An alignment with no positive score is
/// returned empty.
LocalAlignment sw_align(std::string_view a, std::string_view b, const ScoringScheme& scoring);

/// Same recurrence as sw_align on pre-encoded sequences, tracking only
/// score, matches and columns.
AlignmentStats sw_stats(std::span<const std::uint8_t> a, std::span<const std::uint8_t> b,
                        const ScoringScheme& scoring);

/// sw_stats(a, t) for every target t, computed several targets at a time.
/// `a` keeps the row role for every pair; results equal the one-pair calls.
std::vector<AlignmentStats> sw_stats_batch(std::span<const std::uint8_t> a,
                                           std::span<const std::span<const std::uint8_t>> targets,
                                           const ScoringScheme& scoring);

/// Identity values are reported on a 1e-6 grid (round half up of
/// matches / columns); this is also the precision of identity store files.
inline constexpr double kIdentityResolution = 1e-6;

/// matches / columns of an alignment, or 0 when its column count falls
/// below coverage_min times the shorter sequence length.
double identity_from_stats(std::uint32_t matches, std::uint32_t columns, std::size_t len_a, std::size_t len_b,
                           double coverage_min);

/// Local-alignment identity with the coverage rule applied. Symmetric: the
/// pair is aligned in a canonical argument order.
double identity(std::string_view a, std::string_view b, const ScoringScheme& scoring);
double identity(std::span<const std::uint8_t> a, std::span<const std::uint8_t> b, const ScoringScheme& scoring);

}  // namespace homopart
