#include "homopart/corpus.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include <json.hpp>

#include "homopart/error.hpp"
#include "substring_index.hpp"

namespace homopart {

std::string_view to_string(Label label) {
  return label == Label::positive ? "positive" : "negative";
}

Label parse_label(std::string_view text) {
  if (text == "positive" || text == "pos" || text == "1") return Label::positive;
  if (text == "negative" || text == "neg" || text == "0") return Label::negative;
  throw InputError("unknown class label '" + std::string(text) + "'");
}

Date parse_date(std::string_view text) {
  auto bad = [&] { return InputError("invalid date '" + std::string(text) + "', expected YYYY-MM-DD"); };
  if (text.size() != 10 || text[4] != '-' || text[7] != '-') throw bad();
  auto field = [&](std::size_t pos, std::size_t len) {
    int value = 0;
    const char* first = text.data() + pos;
    auto [ptr, ec] = std::from_chars(first, first + len, value);
    if (ec != std::errc{} || ptr != first + len) throw bad();
    return value;
  };
  const Date date{std::chrono::year{field(0, 4)}, std::chrono::month{static_cast<unsigned>(field(5, 2))},
                  std::chrono::day{static_cast<unsigned>(field(8, 2))}};
  if (!date.ok()) throw bad();
  return date;
}

std::string format_date(const Date& date) {
  char buf[16];
  std::snprintf(buf, sizeof buf, "%04d-%02u-%02u", static_cast<int>(date.year()),
                static_cast<unsigned>(date.month()), static_cast<unsigned>(date.day()));
  return buf;
}

bool is_canonical(std::string_view residues) {
  return std::all_of(residues.begin(), residues.end(),
                     [](char c) { return kCanonicalResidues.find(c) != std::string_view::npos; });
}

Corpus::Corpus(std::vector<SequenceRecord> records, std::string description_)
    : description(std::move(description_)) {
  records_.reserve(records.size());
  for (auto& r : records) add(std::move(r));
}

void Corpus::add(SequenceRecord record) {
  if (record.id.empty()) throw InputError("record with empty id");
  if (index_.contains(record.id)) throw InputError("duplicate id '" + record.id + "'");
  index_.emplace(record.id, records_.size());
  records_.push_back(std::move(record));
}

const SequenceRecord* Corpus::find(std::string_view id) const {
  auto it = index_.find(std::string(id));
  return it == index_.end() ? nullptr : &records_[it->second];
}

const SequenceRecord& Corpus::at(std::string_view id) const {
  const auto* r = find(id);
  if (r == nullptr) throw InputError("unknown id '" + std::string(id) + "'");
  return *r;
}

std::vector<std::string> Corpus::ids() const {
  std::vector<std::string> out;
  out.reserve(records_.size());
  for (const auto& r : records_) out.push_back(r.id);
  return out;
}

std::vector<std::string> Corpus::ids(Label label) const {
  std::vector<std::string> out;
  for (const auto& r : records_) {
    if (r.label == label) out.push_back(r.id);
  }
  return out;
}

Corpus Corpus::subset(Label label) const {
  Corpus out;
  out.description = description;
  for (const auto& r : records_) {
    if (r.label == label) out.add(r);
  }
  return out;
}

// ---------------------------------------------------------------------------
// FASTA

namespace {

std::vector<std::string_view> split_ws(std::string_view s) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < s.size()) {
    while (i < s.size() && std::isspace(static_cast<unsigned char>(s[i]))) ++i;
    std::size_t j = i;
    while (j < s.size() && !std::isspace(static_cast<unsigned char>(s[j]))) ++j;
    if (j > i) out.push_back(s.substr(i, j - i));
    i = j;
  }
  return out;
}

}  // namespace

Corpus parse_fasta(std::istream& in, Label default_label) {
  Corpus corpus;
  std::optional<SequenceRecord> current;
  std::size_t line_no = 0;

  auto finish = [&] {
    if (!current) return;
    if (current->residues.empty()) throw InputError("empty sequence body for id '" + current->id + "'");
    corpus.add(std::move(*current));
    current.reset();
  };

  std::string line;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (line.front() == '>') {
      finish();
      auto tokens = split_ws(std::string_view(line).substr(1));
      if (tokens.empty()) throw InputError("malformed FASTA header at line " + std::to_string(line_no));
      SequenceRecord rec;
      rec.id = std::string(tokens.front());
      rec.label = default_label;
      for (std::size_t t = 1; t < tokens.size(); ++t) {
        const auto eq = tokens[t].find('=');
        if (eq == std::string_view::npos) continue;  // free-text description
        const auto key = tokens[t].substr(0, eq);
        const auto value = tokens[t].substr(eq + 1);
        try {
          if (key == "created") {
            rec.created = parse_date(value);
          } else if (key == "source") {
            rec.source = std::string(value);
          } else if (key == "label") {
            rec.label = parse_label(value);
          }
        } catch (const InputError& e) {
          throw InputError("malformed FASTA header at line " + std::to_string(line_no) + ": " + e.what());
        }
      }
      current = std::move(rec);
      continue;
    }
    if (!current) {
      throw InputError("malformed FASTA: sequence data before first header at line " + std::to_string(line_no));
    }
    for (char c : line) {
      if (std::isspace(static_cast<unsigned char>(c))) continue;
      current->residues.push_back(static_cast<char>(std::toupper(static_cast<unsigned char>(c))));
    }
  }
  finish();
  return corpus;
}

Corpus parse_fasta_string(std::string_view text, Label default_label) {
  std::istringstream in{std::string(text)};
  return parse_fasta(in, default_label);
}

Corpus read_fasta_file(const std::string& path, Label default_label) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot open FASTA file '" + path + "'");
  Corpus corpus = parse_fasta(in, default_label);
  corpus.description = path;
  return corpus;
}

void write_fasta(std::ostream& out, const Corpus& corpus) {
  constexpr std::size_t kWidth = 60;
  for (const auto& r : corpus.records()) {
    out << '>' << r.id << " label=" << to_string(r.label);
    if (r.created) out << " created=" << format_date(*r.created);
    if (!r.source.empty()) out << " source=" << r.source;
    out << '\n';
    for (std::size_t i = 0; i < r.residues.size(); i += kWidth) {
      out << std::string_view(r.residues).substr(i, kWidth) << '\n';
    }
  }
}

Corpus apply_metadata(const Corpus& corpus, std::string_view json_text) {
  nlohmann::json meta;
  try {
    meta = nlohmann::json::parse(json_text);
  } catch (const nlohmann::json::exception& e) {
    throw InputError(std::string("invalid metadata JSON: ") + e.what());
  }
  if (!meta.is_object()) throw InputError("metadata sidecar must be a JSON object keyed by id");
  std::vector<SequenceRecord> records = corpus.records();
  std::unordered_map<std::string, std::size_t> pos;
  for (std::size_t i = 0; i < records.size(); ++i) pos.emplace(records[i].id, i);
  for (const auto& [id, entry] : meta.items()) {
    auto it = pos.find(id);
    if (it == pos.end()) throw InputError("metadata refers to unknown id '" + id + "'");
    if (!entry.is_object()) throw InputError("metadata for '" + id + "' must be an object");
    auto& rec = records[it->second];
    if (entry.contains("created") && !entry["created"].is_null()) {
      rec.created = parse_date(entry["created"].get<std::string>());
    }
    if (entry.contains("source") && !entry["source"].is_null()) {
      rec.source = entry["source"].get<std::string>();
    }
  }
  Corpus out(std::move(records), corpus.description);
  out.qc_log = corpus.qc_log;
  return out;
}

// ---------------------------------------------------------------------------
// Quality control

std::string_view to_string(DropReason reason) {
  switch (reason) {
    case DropReason::too_short: return "too_short";
    case DropReason::too_long: return "too_long";
    case DropReason::noncanonical: return "noncanonical";
    case DropReason::duplicate: return "duplicate";
    case DropReason::substring: return "substring";
    case DropReason::cross_class: return "cross_class";
    case DropReason::external_overlap: return "external_overlap";
  }
  return "unknown";
}

namespace {

FilterResult assemble(const Corpus& input, const std::vector<std::optional<DropReason>>& verdict) {
  FilterResult result;
  result.kept.description = input.description;
  result.kept.qc_log = input.qc_log;
  const auto& recs = input.records();
  for (std::size_t i = 0; i < recs.size(); ++i) {
    if (verdict[i]) {
      result.dropped.push_back({recs[i].id, *verdict[i]});
      result.kept.qc_log.push_back(recs[i].id + "\t" + std::string(to_string(*verdict[i])));
    } else {
      result.kept.add(recs[i]);
    }
  }
  return result;
}

// Within-class redundancy among the records whose verdict is still empty.
void mark_redundant(const std::vector<SequenceRecord>& recs, const std::vector<std::size_t>& members,
                    std::vector<std::optional<DropReason>>& verdict) {
  if (members.size() < 2) return;
  std::vector<std::string_view> texts;
  texts.reserve(members.size());
  for (auto m : members) texts.push_back(recs[m].residues);
  detail::SubstringIndex index(texts, detail::anchor_length(texts));

  for (std::size_t qi = 0; qi < members.size(); ++qi) {
    const auto& x = recs[members[qi]];
    bool duplicate = false;
    bool substring = false;
    for (std::size_t ti : index.containing(x.residues)) {
      if (ti == qi) continue;
      const auto& y = recs[members[ti]];
      if (y.residues.size() > x.residues.size()) {
        substring = true;
      } else if (y.id < x.id) {  // identical residues
        duplicate = true;
      }
    }
    if (duplicate) {
      verdict[members[qi]] = DropReason::duplicate;
    } else if (substring) {
      verdict[members[qi]] = DropReason::substring;
    }
  }
}

// Drops subject records identical to, contained in, or containing any
// reference record.
FilterResult overlap_filter(const Corpus& subject, const Corpus& reference, DropReason reason) {
  const auto& subj = subject.records();
  std::vector<std::optional<DropReason>> verdict(subj.size());
  if (!subj.empty() && !reference.empty()) {
    std::vector<std::string_view> subj_texts, ref_texts;
    for (const auto& r : subj) subj_texts.push_back(r.residues);
    for (const auto& r : reference.records()) ref_texts.push_back(r.residues);

    // subject contains (or equals) a reference sequence
    detail::SubstringIndex by_subject(subj_texts, detail::anchor_length(ref_texts));
    for (auto ref : ref_texts) {
      for (std::size_t hit : by_subject.containing(ref)) verdict[hit] = reason;
    }
    // subject contained in a reference sequence
    detail::SubstringIndex by_reference(ref_texts, detail::anchor_length(subj_texts));
    for (std::size_t i = 0; i < subj.size(); ++i) {
      if (!verdict[i] && !by_reference.containing(subj_texts[i]).empty()) verdict[i] = reason;
    }
  }
  return assemble(subject, verdict);
}

}  // namespace

FilterResult quality_filter(const Corpus& corpus, const QcOptions& options) {
  const auto& recs = corpus.records();
  std::vector<std::optional<DropReason>> verdict(recs.size());
  std::vector<std::size_t> positives, negatives;
  for (std::size_t i = 0; i < recs.size(); ++i) {
    const auto& r = recs[i];
    if (r.residues.size() < options.min_len) {
      verdict[i] = DropReason::too_short;
    } else if (r.residues.size() > options.max_len) {
      verdict[i] = DropReason::too_long;
    } else if (!is_canonical(r.residues)) {
      verdict[i] = DropReason::noncanonical;
    } else {
      (r.label == Label::positive ? positives : negatives).push_back(i);
    }
  }
  mark_redundant(recs, positives, verdict);
  mark_redundant(recs, negatives, verdict);
  return assemble(corpus, verdict);
}

FilterResult cross_class_filter(const Corpus& positives, const Corpus& negatives) {
  return overlap_filter(negatives, positives, DropReason::cross_class);
}

FilterResult filter_train_against_external(const Corpus& train, const Corpus& external) {
  return overlap_filter(train, external, DropReason::external_overlap);
}

TemporalSplit temporal_split(const Corpus& corpus, const Date& cutoff) {
  TemporalSplit out;
  out.before_or_on.description = corpus.description;
  out.after.description = corpus.description;
  for (const auto& r : corpus.records()) {
    if (!r.created) throw InputError("record '" + r.id + "' has no creation date");
  }
  for (const auto& r : corpus.records()) {
    (*r.created <= cutoff ? out.before_or_on : out.after).add(r);
  }
  return out;
}

void write_drop_log(std::ostream& out, const std::vector<DroppedRecord>& dropped) {
  out << "id\treason\n";
  for (const auto& d : dropped) out << d.id << '\t' << to_string(d.reason) << '\n';
}

}  // namespace homopart
