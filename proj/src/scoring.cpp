#include "homopart/scoring.hpp"

#include <sstream>
#include <vector>

#include "homopart/corpus.hpp"
#include "homopart/error.hpp"

namespace homopart {

namespace {

// Copy of data/blosum62.txt.
constexpr std::string_view kBlosum62 = R"MATRIX(#  Matrix made by matblas from blosum62.iij
#  * column uses minimum score
#  BLOSUM Clustered Scoring Matrix in 1/2 Bit Units
#  Blocks Database = /data/blocks_5.0/blocks.dat
#  Cluster Percentage: >= 62
#  Entropy =   0.6979, Expected =  -0.5209
   A  R  N  D  C  Q  E  G  H  I  L  K  M  F  P  S  T  W  Y  V  B  Z  X  *
A  4 -1 -2 -2  0 -1 -1  0 -2 -1 -1 -1 -1 -2 -1  1  0 -3 -2  0 -2 -1  0 -4 
R -1  5  0 -2 -3  1  0 -2  0 -3 -2  2 -1 -3 -2 -1 -1 -3 -2 -3 -1  0 -1 -4 
N -2  0  6  1 -3  0  0  0  1 -3 -3  0 -2 -3 -2  1  0 -4 -2 -3  3  0 -1 -4 
D -2 -2  1  6 -3  0  2 -1 -1 -3 -4 -1 -3 -3 -1  0 -1 -4 -3 -3  4  1 -1 -4 
C  0 -3 -3 -3  9 -3 -4 -3 -3 -1 -1 -3 -1 -2 -3 -1 -1 -2 -2 -1 -3 -3 -2 -4 
Q -1  1  0  0 -3  5  2 -2  0 -3 -2  1  0 -3 -1  0 -1 -2 -1 -2  0  3 -1 -4 
E -1  0  0  2 -4  2  5 -2  0 -3 -3  1 -2 -3 -1  0 -1 -3 -2 -2  1  4 -1 -4 
G  0 -2  0 -1 -3 -2 -2  6 -2 -4 -4 -2 -3 -3 -2  0 -2 -2 -3 -3 -1 -2 -1 -4 
H -2  0  1 -1 -3  0  0 -2  8 -3 -3 -1 -2 -1 -2 -1 -2 -2  2 -3  0  0 -1 -4 
I -1 -3 -3 -3 -1 -3 -3 -4 -3  4  2 -3  1  0 -3 -2 -1 -3 -1  3 -3 -3 -1 -4 
L -1 -2 -3 -4 -1 -2 -3 -4 -3  2  4 -2  2  0 -3 -2 -1 -2 -1  1 -4 -3 -1 -4 
K -1  2  0 -1 -3  1  1 -2 -1 -3 -2  5 -1 -3 -1  0 -1 -3 -2 -2  0  1 -1 -4 
M -1 -1 -2 -3 -1  0 -2 -3 -2  1  2 -1  5  0 -2 -1 -1 -1 -1  1 -3 -1 -1 -4 
F -2 -3 -3 -3 -2 -3 -3 -3 -1  0  0 -3  0  6 -4 -2 -2  1  3 -1 -3 -3 -1 -4 
P -1 -2 -2 -1 -3 -1 -1 -2 -2 -3 -3 -1 -2 -4  7 -1 -1 -4 -3 -2 -2 -1 -2 -4 
S  1 -1  1  0 -1  0  0  0 -1 -2 -2  0 -1 -2 -1  4  1 -3 -2 -2  0  0  0 -4 
T  0 -1  0 -1 -1 -1 -1 -2 -2 -1 -1 -1 -1 -2 -1  1  5 -2 -2  0 -1 -1  0 -4 
W -3 -3 -4 -4 -2 -2 -3 -2 -2 -3 -2 -3 -1  1 -4 -3 -2 11  2 -3 -4 -3 -2 -4 
Y -2 -2 -2 -3 -2 -1 -2 -3  2 -1 -1 -2 -1  3 -3 -2 -2  2  7 -1 -3 -2 -1 -4 
V  0 -3 -3 -3 -1 -2 -2 -3 -3  3  1 -2  1 -1 -2 -2  0 -3 -1  4 -3 -2 -1 -4 
B -2 -1  3  4 -3  0  1 -1  0 -3 -4  0 -3 -3 -2  0 -1 -4 -3 -3  4  1 -1 -4 
Z -1  0  0  1 -3  3  4 -2  0 -3 -3  1 -1 -3 -1  0 -1 -3 -2 -2  1  4 -1 -4 
X  0 -1 -1 -1 -2 -1 -1 -1 -1 -1 -1 -1 -1 -1 -2  0  0 -2 -1 -1 -1 -1 -1 -4 
* -4 -4 -4 -4 -4 -4 -4 -4 -4 -4 -4 -4 -4 -4 -4 -4 -4 -4 -4 -4 -4 -4 -4  1 
)MATRIX";

}  // namespace

int residue_code(char residue) {
  static const auto table = [] {
    std::array<int, 256> t{};
    t.fill(-1);
    for (std::size_t i = 0; i < kCanonicalResidues.size(); ++i) {
      t[static_cast<unsigned char>(kCanonicalResidues[i])] = static_cast<int>(i);
    }
    return t;
  }();
  return table[static_cast<unsigned char>(residue)];
}

int SubstitutionMatrix::score(char a, char b) const {
  const int ca = residue_code(a);
  const int cb = residue_code(b);
  if (ca < 0 || cb < 0) throw InputError("non-canonical residue in substitution lookup");
  return score(ca, cb);
}

SubstitutionMatrix SubstitutionMatrix::parse(std::string_view text, std::string name) {
  SubstitutionMatrix m;
  m.name_ = std::move(name);
  std::istringstream in{std::string(text)};
  std::string line;
  std::vector<char> columns;
  std::array<bool, kAlphabetSize> seen_row{};
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line.front() == '#') continue;
    std::istringstream ls(line);
    if (columns.empty()) {
      std::string tok;
      while (ls >> tok) {
        if (tok.size() != 1) throw InputError("malformed substitution matrix header");
        columns.push_back(tok[0]);
      }
      continue;
    }
    std::string row_tok;
    ls >> row_tok;
    if (row_tok.size() != 1) throw InputError("malformed substitution matrix row");
    const int r = residue_code(row_tok[0]);
    for (char c : columns) {
      int v = 0;
      if (!(ls >> v)) throw InputError("short substitution matrix row for '" + row_tok + "'");
      const int cc = residue_code(c);
      if (r >= 0 && cc >= 0) m.cells_[r * kAlphabetSize + cc] = v;
    }
    if (r >= 0) seen_row[r] = true;
  }
  for (std::size_t i = 0; i < kCanonicalResidues.size(); ++i) {
    if (!seen_row[i]) throw InputError(std::string("substitution matrix lacks row for ") + kCanonicalResidues[i]);
    bool seen_col = false;
    for (char c : columns) seen_col |= (c == kCanonicalResidues[i]);
    if (!seen_col) throw InputError(std::string("substitution matrix lacks column for ") + kCanonicalResidues[i]);
  }
  for (int a = 0; a < kAlphabetSize; ++a) {
    for (int b = 0; b < a; ++b) {
      if (m.score(a, b) != m.score(b, a)) throw InputError("substitution matrix is not symmetric");
    }
  }
  return m;
}

const SubstitutionMatrix& blosum62() {
  static const SubstitutionMatrix m = SubstitutionMatrix::parse(kBlosum62, "BLOSUM62");
  return m;
}

std::string_view blosum62_text() { return kBlosum62; }

void ScoringScheme::validate() const {
  if (gap_extend < 1) throw InputError("gap_extend must be >= 1");
  if (gap_open < gap_extend) throw InputError("gap_open must be >= gap_extend");
  if (!(coverage_min >= 0.0 && coverage_min <= 1.0)) throw InputError("coverage_min must lie in [0,1]");
}

}  // namespace homopart
