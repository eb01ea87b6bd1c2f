#pragma once

#include <chrono>
#include <cstddef>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace homopart {

enum class Label { positive, negative };

std::string_view to_string(Label label);
Label parse_label(std::string_view text);

using Date = std::chrono::year_month_day;

/// Parses a strict ISO-8601 calendar date (YYYY-MM-DD).
Date parse_date(std::string_view text);
std::string format_date(const Date& date);

/// The 20 canonical amino acids.
inline constexpr std::string_view kCanonicalResidues = "ACDEFGHIKLMNPQRSTVWY";

bool is_canonical(std::string_view residues);

struct SequenceRecord {
  std::string id;
  std::string residues;
  Label label = Label::positive;
  std::optional<Date> created;
  std::string source;

  bool operator==(const SequenceRecord&) const = default;
};

/// Ordered collection of records with unique ids.
class Corpus {
 public:
  Corpus() = default;
  explicit Corpus(std::vector<SequenceRecord> records, std::string description = {});

  /// Appends a record; throws InputError on an empty or duplicate id.
  void add(SequenceRecord record);

  const std::vector<SequenceRecord>& records() const { return records_; }
  std::size_t size() const { return records_.size(); }
  bool empty() const { return records_.empty(); }

  const SequenceRecord* find(std::string_view id) const;
  const SequenceRecord& at(std::string_view id) const;
  bool contains(std::string_view id) const { return find(id) != nullptr; }

  std::vector<std::string> ids() const;
  std::vector<std::string> ids(Label label) const;
  Corpus subset(Label label) const;

  std::string description;
  std::vector<std::string> qc_log;

  bool operator==(const Corpus& other) const { return records_ == other.records_; }

 private:
  std::vector<SequenceRecord> records_;
  std::unordered_map<std::string, std::size_t> index_;
};

/// Reads FASTA text. The first header token is the id; later tokens of the
/// form key=value set `created`, `source` or `label`. Records without a
/// `label=` token get `default_label`.
Corpus parse_fasta(std::istream& in, Label default_label = Label::positive);
Corpus parse_fasta_string(std::string_view text, Label default_label = Label::positive);
Corpus read_fasta_file(const std::string& path, Label default_label = Label::positive);

/// Writes FASTA with LF line endings and 60-column wrapping. Header
/// attributes are emitted so that parse_fasta restores the corpus exactly.
void write_fasta(std::ostream& out, const Corpus& corpus);

/// Applies a JSON sidecar mapping id -> {"created": "YYYY-MM-DD", "source": "..."}.
/// Unknown ids are an error.
Corpus apply_metadata(const Corpus& corpus, std::string_view json_text);

// ---------------------------------------------------------------------------
// Quality control

enum class DropReason { too_short, too_long, noncanonical, duplicate, substring, cross_class, external_overlap };

std::string_view to_string(DropReason reason);

struct DroppedRecord {
  std::string id;
  DropReason reason;

  bool operator==(const DroppedRecord&) const = default;
};

struct FilterResult {
  Corpus kept;
  std::vector<DroppedRecord> dropped;
};

struct QcOptions {
  std::size_t min_len = 50;
  std::size_t max_len = 1000;
};

/// Length and alphabet filters, then within-class duplicate/substring
/// removal. Of a duplicate or substring pair the shorter record is dropped;
/// between identical residues the lexicographically later id is dropped.
FilterResult quality_filter(const Corpus& corpus, const QcOptions& options = {});

/// Removes negatives that are identical to, contained in, or contain any
/// positive.
FilterResult cross_class_filter(const Corpus& positives, const Corpus& negatives);

/// Removes training records identical to, contained in, or containing any
/// external record, regardless of class.
FilterResult filter_train_against_external(const Corpus& train, const Corpus& external);

struct TemporalSplit {
  Corpus before_or_on;
  Corpus after;
};

/// Records created on or before `cutoff` form the training pool.
TemporalSplit temporal_split(const Corpus& corpus, const Date& cutoff);

/// TSV `id<TAB>reason` with a header row.
void write_drop_log(std::ostream& out, const std::vector<DroppedRecord>& dropped);

}  // namespace homopart
