#include "homopart/align.hpp"

#include <algorithm>
#include <array>
#include <climits>
#include <cstdlib>
#include <cstring>

#include "homopart/error.hpp"

namespace homopart {

std::vector<std::uint8_t> encode_residues(std::string_view residues) {
  std::vector<std::uint8_t> out(residues.size());
  for (std::size_t i = 0; i < residues.size(); ++i) {
    const int code = residue_code(residues[i]);
    if (code < 0) {
      throw InputError(std::string("non-canonical residue '") + residues[i] + "' at position " + std::to_string(i));
    }
    out[i] = static_cast<std::uint8_t>(code);
  }
  return out;
}

namespace {

constexpr int kNegInf = INT_MIN / 4;
// Packed column counts: high word = columns, low word = matches.
constexpr std::uint64_t kColumn = 1ULL << 32;
// Packed cell coordinates: high word = row, low word = column.
constexpr std::uint64_t pack_cell(std::size_t i, std::size_t j) { return (std::uint64_t{i} << 32) | j; }

struct KernelResult {
  int score = 0;
  std::uint64_t stats = 0;
  std::uint64_t start = 0;  // first aligned cell, 0-based
  std::size_t end_i = 0;    // one past the last aligned residue
  std::size_t end_j = 0;
};

// Gotoh recurrence over one row buffer. Each state carries the packed
// column/match counts (and optionally the start cell) of the path that the
// fixed traceback order would select, so no traceback matrix is needed.
// Selections are written as conditional moves; random sequences make the
// branches unpredictable.
template <bool kTrackSpans>
KernelResult gotoh(std::span<const std::uint8_t> a, std::span<const std::uint8_t> b, const ScoringScheme& sc) {
  struct Column {
    int h;  // H of the previous row until overwritten
    int f;
    std::uint64_t hs;
    std::uint64_t fs;
  };
  struct Starts {
    std::uint64_t h;
    std::uint64_t f;
  };

  const std::size_t m = b.size();
  const int open_ext = sc.gap_open + sc.gap_extend;
  const int ext = sc.gap_extend;

  thread_local std::vector<Column> row;
  thread_local std::vector<Starts> starts;
  row.assign(m + 1, Column{0, kNegInf, 0, 0});
  if constexpr (kTrackSpans) starts.assign(m + 1, Starts{0, 0});
  Column* col = row.data();
  Starts* st = starts.data();

  std::array<int, kAlphabetSize> profile{};
  KernelResult best;
  for (std::size_t i = 1; i <= a.size(); ++i) {
    for (int c = 0; c < kAlphabetSize; ++c) profile[c] = sc.matrix.score(a[i - 1], c);
    const std::uint8_t ai = a[i - 1];
    int diag_h = 0;
    std::uint64_t diag_s = 0, diag_st = 0;
    int left_h = 0;
    std::uint64_t left_s = 0, left_st = 0;
    int e = kNegInf;
    std::uint64_t es = 0, est = 0;

    for (std::size_t j = 1; j <= m; ++j) {
      const std::uint8_t bj = b[j - 1];
      Column& cj = col[j];

      // up: gap in b, consumes a[i-1]
      const int f_open = cj.h - open_ext;
      const int f_ext = cj.f - ext;
      const bool f_opens = f_open >= f_ext;
      const int f = f_opens ? f_open : f_ext;
      const std::uint64_t fs = (f_opens ? cj.hs : cj.fs) + kColumn;
      std::uint64_t fst = 0;
      if constexpr (kTrackSpans) {
        fst = f_opens ? (cj.h > 0 ? st[j].h : pack_cell(i - 1, j - 1)) : st[j].f;
        st[j].f = fst;
      }

      // left: gap in a, consumes b[j-1]
      const int e_open = left_h - open_ext;
      const int e_ext = e - ext;
      const bool e_opens = e_open >= e_ext;
      e = e_opens ? e_open : e_ext;
      es = (e_opens ? left_s : es) + kColumn;
      if constexpr (kTrackSpans) est = e_opens ? (left_h > 0 ? left_st : pack_cell(i - 1, j - 1)) : est;

      const int d = diag_h + profile[bj];
      const std::uint64_t ds = diag_s + kColumn + (ai == bj ? 1 : 0);
      std::uint64_t dst = 0;
      if constexpr (kTrackSpans) {
        dst = diag_h > 0 ? diag_st : pack_cell(i - 1, j - 1);
        diag_st = st[j].h;
      }
      diag_h = cj.h;
      diag_s = cj.hs;

      const bool take_d = (d >= f) & (d >= e);
      const bool take_f = f >= e;
      int h = take_d ? d : (take_f ? f : e);
      std::uint64_t hs = take_d ? ds : (take_f ? fs : es);
      const bool positive = h > 0;
      h = positive ? h : 0;
      hs = positive ? hs : 0;

      cj.h = h;
      cj.f = f;
      cj.hs = hs;
      cj.fs = fs;
      left_h = h;
      left_s = hs;
      if constexpr (kTrackSpans) {
        std::uint64_t hst = take_d ? dst : (take_f ? fst : est);
        hst = positive ? hst : 0;
        st[j].h = hst;
        left_st = hst;
      }

      if (positive && h >= best.score) {
        best.score = h;
        best.stats = hs;
        if constexpr (kTrackSpans) best.start = st[j].h;
        best.end_i = i;
        best.end_j = j;
      }
    }
  }
  return best;
}

}  // namespace

// ---------------------------------------------------------------------------
// Inter-sequence kernel: one query against kLanes targets, one target per
// 16-bit lane. Every lane runs the scalar recurrence unchanged, so ties
// resolve exactly as in gotoh<false>.

namespace detail {

constexpr int kLanes = 16;
// Storage is plain int16 arrays viewed as vectors; 16-byte alignment is
// what the default allocator guarantees.
using Vec = std::int16_t __attribute__((vector_size(2 * kLanes), aligned(16), may_alias));

struct LaneBlock {
  std::size_t width = 0;                // longest target in the block
  std::vector<std::int16_t> profile;    // [residue][j][lane] substitution scores
  std::vector<std::int16_t> residues;   // [j][lane] target codes, -1 past the end
  std::int16_t lengths[kLanes] = {};

  const Vec* profile_row(int residue) const {
    return reinterpret_cast<const Vec*>(profile.data()) + static_cast<std::size_t>(residue) * width;
  }
  const Vec* residue_row() const { return reinterpret_cast<const Vec*>(residues.data()); }
};

// Plain arrays: vector types cross the clone boundary with different ABIs.
struct LaneResult {
  std::int16_t score[kLanes], columns[kLanes], matches[kLanes];
};

__attribute__((target_clones("avx2", "default"))) void lane_kernel(const std::uint8_t* a, std::size_t la,
                                                                   const LaneBlock& blk, int open_ext, int ext,
                                                                   LaneResult& out) {
  const std::size_t w = blk.width;
  // Per column: h, f, hc, hm, fc, fm.
  constexpr std::size_t kFields = 6;
  thread_local std::vector<std::int16_t> storage;
  storage.assign(w * kFields * kLanes, 0);
  Vec* row = reinterpret_cast<Vec*>(storage.data());
  const Vec zero{};
  const Vec one = zero + 1;
  const Vec neg = zero - 30000;
  for (std::size_t j = 0; j < w; ++j) row[j * kFields + 1] = neg;
  Vec lengths;
  std::memcpy(&lengths, blk.lengths, sizeof lengths);
  const Vec* residues = blk.residue_row();
  const Vec oe = zero + static_cast<std::int16_t>(open_ext);
  const Vec ex = zero + static_cast<std::int16_t>(ext);

  Vec best = zero, best_c = zero, best_m = zero;
  for (std::size_t i = 0; i < la; ++i) {
    const Vec* prof = blk.profile_row(a[i]);
    const Vec ai = zero + static_cast<std::int16_t>(a[i]);
    Vec diag_h = zero, diag_c = zero, diag_m = zero;
    Vec left_h = zero, left_c = zero, left_m = zero;
    Vec e = neg, ec = zero, em = zero;
    for (std::size_t j = 0; j < w; ++j) {
      Vec* c = row + j * kFields;
      const Vec up_h = c[0], up_hc = c[2], up_hm = c[3];
      const Vec f_open = up_h - oe;
      const Vec f_ext = c[1] - ex;
      const Vec f_opens = f_open >= f_ext;
      const Vec f = f_opens ? f_open : f_ext;
      const Vec fc = (f_opens ? up_hc : c[4]) + one;
      const Vec fm = f_opens ? up_hm : c[5];

      const Vec e_open = left_h - oe;
      const Vec e_ext = e - ex;
      const Vec e_opens = e_open >= e_ext;
      e = e_opens ? e_open : e_ext;
      ec = (e_opens ? left_c : ec) + one;
      em = e_opens ? left_m : em;

      const Vec d = diag_h + prof[j];
      const Vec dc = diag_c + one;
      const Vec dm = diag_m - (residues[j] == ai);
      diag_h = up_h;
      diag_c = up_hc;
      diag_m = up_hm;

      const Vec take_d = (d >= f) & (d >= e);
      const Vec take_f = f >= e;
      Vec h = take_d ? d : (take_f ? f : e);
      Vec hc = take_d ? dc : (take_f ? fc : ec);
      Vec hm = take_d ? dm : (take_f ? fm : em);
      const Vec positive = h > zero;
      h = positive ? h : zero;
      hc = positive ? hc : zero;
      hm = positive ? hm : zero;

      c[0] = h;
      c[1] = f;
      c[2] = hc;
      c[3] = hm;
      c[4] = fc;
      c[5] = fm;
      left_h = h;
      left_c = hc;
      left_m = hm;

      const Vec take = positive & (h >= best) & (lengths > static_cast<std::int16_t>(j));
      best = take ? h : best;
      best_c = take ? hc : best_c;
      best_m = take ? hm : best_m;
    }
  }
  for (int k = 0; k < kLanes; ++k) {
    out.score[k] = best[k];
    out.columns[k] = best_c[k];
    out.matches[k] = best_m[k];
  }
}

}  // namespace detail

AlignmentStats sw_stats(std::span<const std::uint8_t> a, std::span<const std::uint8_t> b,
                        const ScoringScheme& scoring) {
  const auto r = gotoh<false>(a, b, scoring);
  return {r.score, static_cast<std::uint32_t>(r.stats & 0xffffffffULL), static_cast<std::uint32_t>(r.stats >> 32)};
}

std::vector<AlignmentStats> sw_stats_batch(std::span<const std::uint8_t> a,
                                           std::span<const std::span<const std::uint8_t>> targets,
                                           const ScoringScheme& scoring) {
  std::vector<AlignmentStats> out(targets.size());
  int max_entry = 0;
  for (int x = 0; x < kAlphabetSize; ++x) {
    for (int y = 0; y < kAlphabetSize; ++y) max_entry = std::max(max_entry, std::abs(scoring.matrix.score(x, y)));
  }
  // 16-bit lanes hold scores up to max_entry * |a| and column counts up to
  // |a| + |t|; anything larger goes through the scalar kernel.
  const std::size_t limit = 30000;
  const bool narrow_ok = scoring.gap_open + scoring.gap_extend <= 1000 && max_entry * a.size() <= limit;

  std::vector<std::size_t> order;
  for (std::size_t t = 0; t < targets.size(); ++t) {
    if (narrow_ok && a.size() + targets[t].size() <= limit) {
      order.push_back(t);
    } else {
      out[t] = sw_stats(a, targets[t], scoring);
    }
  }
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t x, std::size_t y) { return targets[x].size() < targets[y].size(); });

  thread_local detail::LaneBlock blk;
  for (std::size_t first = 0; first < order.size(); first += detail::kLanes) {
    const std::size_t count = std::min<std::size_t>(detail::kLanes, order.size() - first);
    std::size_t w = 0;
    for (std::size_t k = 0; k < count; ++k) w = std::max(w, targets[order[first + k]].size());
    blk.width = w;
    constexpr std::size_t lanes = detail::kLanes;
    blk.profile.assign(kAlphabetSize * w * lanes, 0);
    blk.residues.assign(w * lanes, -1);
    std::fill(std::begin(blk.lengths), std::end(blk.lengths), 0);
    for (std::size_t k = 0; k < count; ++k) {
      const auto t = targets[order[first + k]];
      blk.lengths[k] = static_cast<std::int16_t>(t.size());
      for (std::size_t j = 0; j < t.size(); ++j) {
        blk.residues[j * lanes + k] = t[j];
        for (int c = 0; c < kAlphabetSize; ++c) {
          blk.profile[(c * w + j) * lanes + k] = static_cast<std::int16_t>(scoring.matrix.score(c, t[j]));
        }
      }
    }
    detail::LaneResult r;
    detail::lane_kernel(a.data(), a.size(), blk, scoring.gap_open + scoring.gap_extend, scoring.gap_extend, r);
    for (std::size_t k = 0; k < count; ++k) {
      out[order[first + k]] = {r.score[k], static_cast<std::uint32_t>(r.matches[k]),
                               static_cast<std::uint32_t>(r.columns[k])};
    }
  }
  return out;
}

LocalAlignment sw_align(std::string_view a, std::string_view b, const ScoringScheme& scoring) {
  const auto ea = encode_residues(a);
  const auto eb = encode_residues(b);
  const auto r = gotoh<true>(ea, eb, scoring);
  LocalAlignment out;
  if (r.score == 0) return out;
  out.score = r.score;
  out.matches = r.stats & 0xffffffffULL;
  out.aligned_columns = r.stats >> 32;
  out.span_a = {static_cast<std::size_t>(r.start >> 32), r.end_i};
  out.span_b = {static_cast<std::size_t>(r.start & 0xffffffffULL), r.end_j};
  return out;
}

double identity_from_stats(std::uint32_t matches, std::uint32_t columns, std::size_t len_a, std::size_t len_b,
                           double coverage_min) {
  if (columns == 0) return 0.0;
  const double shorter = static_cast<double>(std::min(len_a, len_b));
  if (static_cast<double>(columns) < coverage_min * shorter) return 0.0;
  // round half up on the 1e-6 grid, in integer arithmetic
  const std::uint64_t micro = (std::uint64_t{matches} * 2000000ULL + columns) / (2ULL * columns);
  return static_cast<double>(micro) / 1e6;
}

double identity(std::span<const std::uint8_t> a, std::span<const std::uint8_t> b, const ScoringScheme& scoring) {
  // Canonical order keeps tie-breaking, and hence the result, symmetric.
  if (std::lexicographical_compare(b.begin(), b.end(), a.begin(), a.end())) std::swap(a, b);
  const auto st = sw_stats(a, b, scoring);
  return identity_from_stats(st.matches, st.columns, a.size(), b.size(), scoring.coverage_min);
}

double identity(std::string_view a, std::string_view b, const ScoringScheme& scoring) {
  const auto ea = encode_residues(a);
  const auto eb = encode_residues(b);
  return identity(std::span<const std::uint8_t>(ea), std::span<const std::uint8_t>(eb), scoring);
}

}  // namespace homopart
