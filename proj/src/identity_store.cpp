#include "homopart/identity_store.hpp"

#include <algorithm>
#include <atomic>
#include <istream>
#include <ostream>
#include <sstream>
#include <thread>
#include <unordered_set>

#include "homopart/align.hpp"
#include "homopart/error.hpp"

namespace homopart {

StoreParams StoreParams::from(const ScoringScheme& scoring) {
  return {scoring.matrix.name(), scoring.gap_open, scoring.gap_extend, scoring.coverage_min};
}

IdentityStore::IdentityStore(StoreParams params, double floor, std::vector<std::string> universe,
                             std::vector<IdentityEntry> entries)
    : params_(std::move(params)), floor_(floor) {
  if (!(floor >= 0.0 && floor <= 1.0)) throw InputError("store floor must lie in [0,1]");
  for (const auto& e : entries) {
    universe.push_back(e.a);
    universe.push_back(e.b);
  }
  std::sort(universe.begin(), universe.end());
  universe.erase(std::unique(universe.begin(), universe.end()), universe.end());
  ids_ = std::move(universe);
  rebuild(std::move(entries));
}

void IdentityStore::rebuild(std::vector<IdentityEntry> entries) {
  index_.clear();
  index_.reserve(ids_.size());
  for (std::size_t i = 0; i < ids_.size(); ++i) index_.emplace(ids_[i], static_cast<std::uint32_t>(i));
  adjacency_.assign(ids_.size(), {});
  entry_count_ = 0;
  for (const auto& e : entries) {
    if (e.a == e.b) throw InputError("self pair '" + e.a + "' in identity store");
    if (!(e.identity >= floor_ && e.identity <= 1.0)) {
      throw InputError("identity " + format_double(e.identity) + " for pair (" + e.a + ", " + e.b +
                       ") outside [floor, 1]");
    }
    const auto ia = index_of(e.a);
    const auto ib = index_of(e.b);
    adjacency_[ia].push_back({ib, e.identity});
    adjacency_[ib].push_back({ia, e.identity});
    ++entry_count_;
  }
  for (std::size_t i = 0; i < adjacency_.size(); ++i) {
    auto& adj = adjacency_[i];
    std::sort(adj.begin(), adj.end(), [](const Neighbor& x, const Neighbor& y) { return x.index < y.index; });
    for (std::size_t k = 1; k < adj.size(); ++k) {
      if (adj[k].index == adj[k - 1].index) {
        throw InputError("duplicate pair (" + ids_[i] + ", " + ids_[adj[k].index] + ") in identity store");
      }
    }
  }
}

bool IdentityStore::contains(std::string_view id) const { return index_.contains(std::string(id)); }

std::uint32_t IdentityStore::index_of(std::string_view id) const {
  auto it = index_.find(std::string(id));
  if (it == index_.end()) throw InputError("id '" + std::string(id) + "' is not in the identity store universe");
  return it->second;
}

double IdentityStore::lookup(std::uint32_t a, std::uint32_t b) const {
  if (a == b) return 1.0;
  const auto& small = adjacency_[a].size() <= adjacency_[b].size() ? adjacency_[a] : adjacency_[b];
  const std::uint32_t other = adjacency_[a].size() <= adjacency_[b].size() ? b : a;
  auto it = std::lower_bound(small.begin(), small.end(), other,
                             [](const Neighbor& n, std::uint32_t v) { return n.index < v; });
  return (it != small.end() && it->index == other) ? it->identity : 0.0;
}

double IdentityStore::lookup(std::string_view a, std::string_view b) const { return lookup(index_of(a), index_of(b)); }

std::vector<IdentityEntry> IdentityStore::entries() const {
  std::vector<IdentityEntry> out;
  out.reserve(entry_count_);
  for (std::uint32_t i = 0; i < adjacency_.size(); ++i) {
    for (const auto& n : adjacency_[i]) {
      if (n.index > i) out.push_back({ids_[i], ids_[n.index], n.identity});
    }
  }
  return out;
}

void IdentityStore::require_threshold(double t, std::string_view what) const {
  if (t < floor_) {
    throw InputError(std::string(what) + " " + format_double(t) + " is below the identity store floor " +
                     format_double(floor_));
  }
}

void IdentityStore::extend_universe(const std::vector<std::string>& ids) {
  auto all = entries();
  ids_.insert(ids_.end(), ids.begin(), ids.end());
  std::sort(ids_.begin(), ids_.end());
  ids_.erase(std::unique(ids_.begin(), ids_.end()), ids_.end());
  rebuild(std::move(all));
}

// ---------------------------------------------------------------------------
// File format

namespace {

constexpr std::string_view kMagic = "#homopart-ids";

std::vector<std::string_view> split(std::string_view s, char sep) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const auto pos = s.find(sep, start);
    out.push_back(s.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

int parse_int(std::string_view text) {
  const double v = parse_double(text);
  if (v != static_cast<int>(v)) throw InputError("expected integer, got '" + std::string(text) + "'");
  return static_cast<int>(v);
}

}  // namespace

void IdentityStore::write(std::ostream& out) const {
  out << kMagic << " v1 floor=" << format_double(floor_) << " matrix=" << params_.matrix
      << " gap_open=" << params_.gap_open << " gap_extend=" << params_.gap_extend
      << " cov=" << format_double(params_.coverage_min) << '\n';
  for (std::uint32_t i = 0; i < adjacency_.size(); ++i) {
    for (const auto& n : adjacency_[i]) {
      if (n.index > i) out << ids_[i] << '\t' << ids_[n.index] << '\t' << format_fixed(n.identity, 6) << '\n';
    }
  }
}

IdentityStore IdentityStore::read(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw InputError("empty identity store");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  const auto tokens = split(line, ' ');
  if (tokens.size() < 2 || tokens[0] != kMagic || tokens[1] != "v1") {
    throw InputError("identity store header must start with '#homopart-ids v1'");
  }
  StoreParams params;
  double floor = -1.0;
  bool have[5] = {};
  for (std::size_t t = 2; t < tokens.size(); ++t) {
    const auto eq = tokens[t].find('=');
    if (eq == std::string_view::npos) throw InputError("malformed identity store header field '" + std::string(tokens[t]) + "'");
    const auto key = tokens[t].substr(0, eq);
    const auto value = tokens[t].substr(eq + 1);
    if (key == "floor") {
      floor = parse_double(value);
      have[0] = true;
    } else if (key == "matrix") {
      params.matrix = std::string(value);
      have[1] = true;
    } else if (key == "gap_open") {
      params.gap_open = parse_int(value);
      have[2] = true;
    } else if (key == "gap_extend") {
      params.gap_extend = parse_int(value);
      have[3] = true;
    } else if (key == "cov") {
      params.coverage_min = parse_double(value);
      have[4] = true;
    } else {
      throw InputError("unknown identity store header field '" + std::string(key) + "'");
    }
  }
  if (!std::all_of(std::begin(have), std::end(have), [](bool b) { return b; })) {
    throw InputError("identity store header is missing fields");
  }

  std::vector<IdentityEntry> entries;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const auto cols = split(line, '\t');
    if (cols.size() != 3) throw InputError("identity store line " + std::to_string(line_no) + ": expected 3 columns");
    if (!(cols[0] < cols[1])) {
      throw InputError("identity store line " + std::to_string(line_no) + ": ids must satisfy id_a < id_b");
    }
    entries.push_back({std::string(cols[0]), std::string(cols[1]), parse_double(cols[2])});
  }
  return IdentityStore(std::move(params), floor, {}, std::move(entries));
}

// ---------------------------------------------------------------------------
// All-vs-all computation

namespace {

struct Member {
  const SequenceRecord* record;
  std::vector<std::uint8_t> codes;
  int group;
};

std::vector<Member> encode_all(const Corpus& corpus, int group, std::vector<Member> out = {}) {
  for (const auto& r : corpus.records()) {
    try {
      out.push_back({&r, encode_residues(r.residues), group});
    } catch (const InputError& err) {
      throw InputError("sequence '" + r.id + "': " + err.what());
    }
  }
  return out;
}

// Evaluates every pair of members that `wanted` accepts. Members are ranked
// by residue string so that each pair is aligned with the lexicographically
// smaller sequence in the row role, as identity() does. Each row's output
// slot is fixed, so the result does not depend on scheduling.
template <typename PairFn>
std::vector<IdentityEntry> run_pairs(std::vector<Member> members, unsigned workers, double floor,
                                     const ScoringScheme& scoring, PairFn wanted, std::size_t& evaluated) {
  std::stable_sort(members.begin(), members.end(),
                   [](const Member& x, const Member& y) { return x.codes < y.codes; });
  const std::size_t n = members.size();
  std::vector<std::vector<std::pair<std::size_t, double>>> rows(n);
  std::atomic<std::size_t> next{0};
  std::atomic<std::size_t> count{0};
  auto worker = [&] {
    std::size_t local = 0;
    std::vector<std::size_t> partners;
    std::vector<std::span<const std::uint8_t>> targets;
    for (std::size_t i = next.fetch_add(1); i < n; i = next.fetch_add(1)) {
      partners.clear();
      targets.clear();
      for (std::size_t j = i + 1; j < n; ++j) {
        if (!wanted(members[i], members[j])) continue;
        partners.push_back(j);
        targets.emplace_back(members[j].codes);
      }
      const auto stats = sw_stats_batch(members[i].codes, targets, scoring);
      for (std::size_t k = 0; k < partners.size(); ++k) {
        const double v = identity_from_stats(stats[k].matches, stats[k].columns, members[i].codes.size(),
                                             targets[k].size(), scoring.coverage_min);
        if (v >= floor && v > 0.0) rows[i].emplace_back(partners[k], v);
      }
      local += partners.size();
    }
    count += local;
  };
  const unsigned threads = std::max(1u, workers);
  if (threads == 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (unsigned t = 0; t < threads; ++t) pool.emplace_back(worker);
  }
  evaluated = count.load();

  std::vector<IdentityEntry> entries;
  for (std::size_t i = 0; i < n; ++i) {
    for (auto [j, v] : rows[i]) entries.push_back({members[i].record->id, members[j].record->id, v});
  }
  return entries;
}

void check_floor(double floor) {
  if (!(floor >= 0.0 && floor <= 1.0)) throw InputError("floor must lie in [0,1]");
}

}  // namespace

IdentityStore all_pairs_identity(const Corpus& corpus, const ScoringScheme& scoring, const AllPairsOptions& options,
                                 AllPairsReport* report) {
  scoring.validate();
  check_floor(options.floor);
  std::size_t evaluated = 0;
  auto entries = run_pairs(encode_all(corpus, 0), options.workers, options.floor, scoring,
                           [](const Member&, const Member&) { return true; }, evaluated);
  if (report) report->pairs_evaluated = evaluated;
  return IdentityStore(StoreParams::from(scoring), options.floor, corpus.ids(), std::move(entries));
}

IdentityStore all_pairs_identity(const Corpus& first, const Corpus& second, const ScoringScheme& scoring,
                                 const AllPairsOptions& options, AllPairsReport* report) {
  scoring.validate();
  check_floor(options.floor);
  for (const auto& r : second.records()) {
    if (first.contains(r.id)) throw InputError("id '" + r.id + "' occurs in both corpora");
  }
  std::size_t evaluated = 0;
  auto entries = run_pairs(encode_all(second, 1, encode_all(first, 0)), options.workers, options.floor, scoring,
                           [](const Member& x, const Member& y) { return x.group != y.group; }, evaluated);
  auto universe = first.ids();
  for (const auto& id : second.ids()) universe.push_back(id);
  if (report) report->pairs_evaluated = evaluated;
  return IdentityStore(StoreParams::from(scoring), options.floor, std::move(universe), std::move(entries));
}

std::vector<double> max_identity_profile(const std::vector<std::string>& set_a, const std::vector<std::string>& set_b,
                                         const IdentityStore& store) {
  std::vector<char> in_b(store.size(), 0);
  for (const auto& id : set_b) in_b[store.index_of(id)] = 1;
  std::vector<double> out;
  out.reserve(set_a.size());
  for (const auto& id : set_a) {
    const auto ia = store.index_of(id);
    double best = 0.0;
    for (const auto& n : store.neighbors(ia)) {
      if (in_b[n.index] && n.identity > best) best = n.identity;
    }
    out.push_back(best);
  }
  return out;
}

}  // namespace homopart
