#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <string_view>

namespace homopart {

inline constexpr int kAlphabetSize = 20;

/// Maps a canonical residue to 0..19 (order of kCanonicalResidues), or -1.
int residue_code(char residue);

/// Symmetric 20x20 integer substitution matrix over the canonical alphabet.
class SubstitutionMatrix {
 public:
  SubstitutionMatrix() = default;

  /// Parses the NCBI text layout (column header line, one row per residue).
  /// Rows/columns for B, Z, X and * are ignored; all 20 canonical residues
  /// must be present and the result must be symmetric.
  static SubstitutionMatrix parse(std::string_view text, std::string name);

  int score(int code_a, int code_b) const { return cells_[code_a * kAlphabetSize + code_b]; }
  int score(char a, char b) const;
  const std::string& name() const { return name_; }

  bool operator==(const SubstitutionMatrix&) const = default;

 private:
  std::string name_;
  std::array<std::int32_t, kAlphabetSize * kAlphabetSize> cells_{};
};

/// The bundled BLOSUM62 matrix.
const SubstitutionMatrix& blosum62();
/// Raw text of the bundled matrix file.
std::string_view blosum62_text();

/// Alignment parameters. A gap of length L costs gap_open + L * gap_extend.
struct ScoringScheme {
  SubstitutionMatrix matrix = blosum62();
  int gap_open = 10;
  int gap_extend = 2;
  double coverage_min = 0.25;

  /// Throws InputError when the invariants (gap_open >= gap_extend >= 1,
  /// coverage in [0,1]) do not hold.
  void validate() const;
};

}  // namespace homopart
