// Acceptance checks. Prints one PASS/FAIL line per criterion and exits
// nonzero when any criterion fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <numeric>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <json.hpp>

#include "homopart/align.hpp"
#include "homopart/audit.hpp"
#include "homopart/balance.hpp"
#include "homopart/cli.hpp"
#include "homopart/corpus.hpp"
#include "homopart/identity_source.hpp"
#include "homopart/identity_store.hpp"
#include "homopart/manifest.hpp"
#include "homopart/metrics.hpp"
#include "homopart/partition.hpp"
#include "homopart/rng.hpp"
#include "homopart/stats.hpp"
#include "homopart/synth.hpp"
#include "oracles/brute.hpp"
#include "oracles/matching.hpp"
#include "oracles/reference_sw.hpp"
#include "support.hpp"

using namespace homopart;
namespace fs = std::filesystem;

namespace {

const std::vector<double> kTs = {0.3, 0.4, 0.5, 1.0};
const std::vector<double> kTc = {0.0, 0.4, 0.5, 0.6, 0.7};
constexpr std::size_t kK = 3;
constexpr double kFloor = 0.25;
constexpr std::uint64_t kSeed = 7;

struct Outcome {
  bool pass = true;
  std::string detail;
};

// Collects failure notes; the first few are kept for the report line.
class Tally {
 public:
  void expect(bool ok, const std::string& what) {
    ++checks_;
    if (ok) return;
    ++failures_;
    if (notes_.size() < 3) notes_.push_back(what);
  }
  bool ok() const { return failures_ == 0; }
  std::string summary(const std::string& passed) const {
    if (ok()) return passed;
    std::string s = std::to_string(failures_) + "/" + std::to_string(checks_) + " checks failed";
    for (const auto& n : notes_) s += "; " + n;
    return s;
  }

 private:
  std::size_t checks_ = 0, failures_ = 0;
  std::vector<std::string> notes_;
};

struct Dataset {
  std::string name;
  Corpus corpus;
  IdentityStore store;
  std::map<std::pair<double, double>, Partition> grid;
};

unsigned workers() { return std::max(1u, std::thread::hardware_concurrency()); }

Dataset make_dataset(std::size_t index) {
  Dataset d;
  d.name = "d" + std::to_string(index + 1);
  SynthOptions o;
  o.families = 60;
  o.family_size = 8;
  o.min_length = 60;
  o.max_length = 400;
  o.seed = 1000 + index;
  o.id_prefix = d.name + "_";
  const Corpus raw = synthesize_corpus(o);
  const Corpus kept = quality_filter(raw).kept;
  const Corpus positives = kept.subset(Label::positive);
  const Corpus negatives = cross_class_filter(positives, kept.subset(Label::negative)).kept;
  for (const auto& r : positives.records()) d.corpus.add(r);
  for (const auto& r : negatives.records()) d.corpus.add(r);
  d.store = all_pairs_identity(d.corpus, ScoringScheme{}, {kFloor, workers()});
  d.grid = build_cv_sets(d.corpus.ids(Label::positive), d.corpus.ids(Label::negative), d.store, kK, kTs, kTc, kSeed,
                         d.name);
  return d;
}

std::string fmt(double v) {
  std::ostringstream s;
  s << v;
  return s.str();
}

// Direct scan of every same-class cross-split pair and every negative anchor.
std::pair<std::size_t, std::size_t> scan(const Partition& p, const IdentityStore& store) {
  std::size_t violations = 0, anchors = 0;
  for (std::size_t i = 0; i < p.k; ++i) {
    for (std::size_t j = i + 1; j < p.k; ++j) {
      for (auto member : {&Split::positives, &Split::negatives}) {
        for (const auto& a : p.splits[i].*member) {
          for (const auto& b : p.splits[j].*member) violations += store.lookup(a, b) > p.thresholds.t_s;
        }
      }
    }
    if (p.thresholds.t_c == 0.0) continue;
    for (const auto& n : p.splits[i].negatives) {
      bool anchored = false;
      for (const auto& q : p.splits[i].positives) anchored = anchored || store.lookup(n, q) >= p.thresholds.t_c;
      anchors += !anchored;
    }
  }
  return {violations, anchors};
}

Outcome zero_violations(const std::vector<Dataset>& data) {
  Tally t;
  std::size_t settings = 0;
  AuditOptions options;
  options.histograms = false;
  for (const auto& d : data) {
    t.expect(d.grid.size() == kTs.size() * kTc.size(), d.name + " grid size " + std::to_string(d.grid.size()));
    const StoreIdentity source(d.store);
    for (const auto& [key, p] : d.grid) {
      ++settings;
      const auto report = audit_partition(p, source, options);
      const auto [v, a] = scan(p, d.store);
      const std::string where = d.name + " ts" + fmt(key.first) + " tc" + fmt(key.second);
      t.expect(report.violations.empty() && v == 0, where + ": " + std::to_string(v) + " violations");
      t.expect(report.anchor_failures.empty() && a == 0, where + ": " + std::to_string(a) + " unanchored");
    }
  }
  return {t.ok(), t.summary(std::to_string(settings) + " settings on " + std::to_string(data.size()) +
                            " corpora, 0 violations, 0 anchor failures")};
}

Outcome grid_cardinality(const std::vector<Dataset>& data, const fs::path& root) {
  Tally t;
  std::set<std::tuple<std::string, double, double>> seen;
  std::size_t files = 0;
  for (std::size_t i = 0; i < 3; ++i) {
    const auto& d = data[i];
    const fs::path dir = root / ("grid_" + d.name);
    fs::create_directories(dir);
    const auto fasta = (dir / "corpus.fasta").string();
    const auto store = (dir / "identities.tsv").string();
    {
      std::ofstream f(fasta);
      write_fasta(f, d.corpus);
      std::ofstream s(store);
      d.store.write(s);
    }
    std::vector<std::string> args = {"partition", "--in", fasta, "--store", store, "--dataset", d.name, "--k", "3",
                                     "--seed", std::to_string(kSeed), "--out", (dir / "out").string()};
    for (double v : kTs) args.insert(args.end(), {"--ts", fmt(v)});
    for (double v : kTc) args.insert(args.end(), {"--tc", fmt(v)});
    std::ostringstream out, err;
    const int code = run(args, out, err);
    t.expect(code == 0, d.name + " partition exit " + std::to_string(code) + " " + err.str());
    if (code != 0) continue;
    for (const auto& entry : fs::directory_iterator(dir / "out")) {
      if (entry.path().filename() == "run.json") continue;
      ++files;
      std::ifstream in(entry.path());
      const auto p = parse_partition(Json::parse(in));
      seen.insert({p.dataset, p.thresholds.t_s, p.thresholds.t_c});
    }
  }
  t.expect(files == 60, std::to_string(files) + " manifest files");
  t.expect(seen.size() == 60, std::to_string(seen.size()) + " distinct settings");
  return {t.ok(), t.summary("3 corpora x 4 t_s x 5 t_c = 60 distinct manifests")};
}

Outcome baseline_contrast(const std::vector<Dataset>& data) {
  Tally t;
  std::size_t leaking = 0;
  std::string counts;
  AuditOptions options;
  options.histograms = false;
  for (std::size_t i = 0; i < data.size(); ++i) {
    const auto& d = data[i];
    const StoreIdentity source(d.store);
    const auto baseline = greedy_representative_partition(d.corpus.subset(Label::positive),
                                                          d.corpus.subset(Label::negative), source, 0.4, kK, kSeed);
    const auto n = audit_partition(baseline, source, options).violations.size();
    leaking += n > 0;
    counts += (counts.empty() ? "" : ",") + std::to_string(n);
    for (double tc : kTc) {
      const auto [v, a] = scan(d.grid.at({0.4, tc}), d.store);
      t.expect(v == 0, d.name + " pipeline tc" + fmt(tc) + " has " + std::to_string(v) + " violations");
    }
  }
  t.expect(leaking >= 4, "baseline leaked on only " + std::to_string(leaking) + " corpora");
  return {t.ok(), t.summary("baseline violations per corpus at t_s 0.4: " + counts + "; pipeline: 0 on all")};
}

// Homolog with substitutions, short indels and unrelated flanks.
std::string homolog(std::mt19937_64& gen, const std::string& s, double rate, std::size_t flank) {
  std::bernoulli_distribution indel(rate / 8), coin(0.5);
  std::string out = testing::random_protein(gen, flank);
  for (char c : testing::point_mutant(gen, s, rate)) {
    if (indel(gen)) {
      if (coin(gen)) continue;
      out += testing::random_protein(gen, 1 + gen() % 3);
    }
    out.push_back(c);
  }
  return out + testing::random_protein(gen, flank);
}

Outcome alignment_oracle() {
  Tally t;
  std::mt19937_64 gen(2024);
  std::uniform_int_distribution<std::size_t> len(10, 400);
  std::uniform_real_distribution<double> rate(0.0, 0.7);
  const ScoringScheme sc;
  std::size_t zeroed = 0, positive = 0;
  for (int i = 0; i < 1000; ++i) {
    std::string a = testing::random_protein(gen, len(gen)), b;
    switch (i % 4) {
      case 0: b = testing::random_protein(gen, len(gen)); break;
      case 1: b = homolog(gen, a, rate(gen), 0); break;
      case 2: b = homolog(gen, a.substr(0, std::min<std::size_t>(a.size(), 15 + gen() % 40)), rate(gen), gen() % 150); break;
      default: b = homolog(gen, a, rate(gen), gen() % 60); break;
    }
    const auto ref = oracle::reference_sw(a, b, sc);
    const auto ea = encode_residues(a), eb = encode_residues(b);
    const auto st = sw_stats(ea, eb, sc);
    const std::span<const std::uint8_t> target(eb);
    const auto batch = sw_stats_batch(ea, std::span<const std::span<const std::uint8_t>>(&target, 1), sc);
    const auto al = sw_align(a, b, sc);
    const std::string where = "pair " + std::to_string(i);
    t.expect(st.score == ref.score && st.matches == ref.matches && st.columns == ref.columns, where + " stats");
    t.expect(batch[0] == st, where + " batch");
    t.expect(al.score == ref.score && al.matches == ref.matches && al.aligned_columns == ref.columns,
             where + " traceback");
    const double expected = oracle::reference_identity(a, b, sc);
    t.expect(identity(a, b, sc) == expected && identity(b, a, sc) == expected, where + " identity");
    const auto& [x, y] = a <= b ? std::pair{a, b} : std::pair{b, a};
    const auto canon = oracle::reference_sw(x, y, sc);
    if (canon.columns > 0 && canon.columns * 4 < std::min(a.size(), b.size())) ++zeroed;
    positive += expected > 0;
  }
  t.expect(zeroed > 0 && positive > 0, "coverage rule not exercised");
  return {t.ok(), t.summary("1000 pairs equal the reference DP in score, matches and columns; " +
                            std::to_string(zeroed) + " zeroed by the 25% coverage rule")};
}

std::vector<ScoredInstance> scored(const std::vector<int>& labels, const std::vector<double>& scores) {
  std::vector<ScoredInstance> out;
  for (std::size_t i = 0; i < labels.size(); ++i) {
    out.push_back({"i" + std::to_string(i), labels[i] ? Label::positive : Label::negative, scores[i]});
  }
  return out;
}

Outcome metric_oracles() {
  Tally t;
  std::mt19937_64 gen(55);
  double worst = 0;
  for (int s = 0; s < 200; ++s) {
    const int n = 2 + static_cast<int>(gen() % 300);
    const int grid = 1 + static_cast<int>(gen() % 50);
    std::vector<int> labels;
    std::vector<double> scores, pos, neg;
    for (int i = 0; i < n; ++i) {
      const int l = i < 2 ? i : static_cast<int>(gen() % 2);
      const double v = static_cast<double>(gen() % grid) / grid;
      labels.push_back(l);
      scores.push_back(v);
      (l ? pos : neg).push_back(v);
    }
    worst = std::max(worst, std::abs(auroc(scored(labels, scores)) - oracle::auroc_pairs(pos, neg)));
  }
  t.expect(worst < 1e-12, "auroc deviation " + fmt(worst));

  std::vector<int> mutations(65, 0);
  std::fill(mutations.begin(), mutations.begin() + 22, 1);
  t.expect(background_auprc(scored(mutations, std::vector<double>(65, 0.5))) == 22.0 / 65.0, "background 22/65");
  for (int s = 0; s < 50; ++s) {
    std::vector<int> labels{1, 0};
    for (int i = 0; i < 30; ++i) labels.push_back(static_cast<int>(gen() % 2));
    const double p = std::count(labels.begin(), labels.end(), 1);
    t.expect(background_auprc(scored(labels, std::vector<double>(labels.size(), 0.0))) == p / labels.size(),
             "background P/(P+N)");
  }

  // hand-derived step-interpolated areas
  const double hand[][2] = {
      {auprc(scored({1, 1, 0}, {0.9, 0.8, 0.1})), 1.0},
      {auprc(scored({1, 0, 1}, {0.9, 0.8, 0.7})), (2.0 - std::log(1.5)) / 2.0},
      {auprc(scored({0, 1}, {0.9, 0.1})), 1.0 - std::log(2.0)},
      {auprc(scored({1, 0}, {0.5, 0.5})), 0.5},
      {auprc(scored({1, 1, 0, 1}, {0.9, 0.8, 0.8, 0.7})),
       (1.0 + 0.5 + std::log(3.0) / 4.0 + 1.0 - std::log(4.0 / 3.0)) / 3.0},
  };
  for (const auto& h : hand) t.expect(std::abs(h[0] - h[1]) < 1e-9, "hand case " + fmt(h[0]) + " vs " + fmt(h[1]));

  std::uniform_real_distribution<double> u(0, 1);
  std::string mc;
  for (double prevalence : {0.1, 0.2, 0.5}) {
    double sum = 0;
    const int reps = 100;
    for (int r = 0; r < reps; ++r) {
      std::vector<int> labels;
      std::vector<double> scores;
      for (int i = 0; i < 2000; ++i) {
        labels.push_back(u(gen) < prevalence);
        scores.push_back(u(gen));
      }
      sum += auprc(scored(labels, scores));
    }
    const double dev = std::abs(sum / reps - prevalence);
    mc += (mc.empty() ? "" : ",") + fmt(dev);
    t.expect(dev < 0.01, "Monte Carlo deviation " + fmt(dev) + " at prevalence " + fmt(prevalence));
  }
  return {t.ok(), t.summary("auroc max deviation " + fmt(worst) + " on 200 sets; 22/65 exact; hand cases within "
                            "1e-9; random-score deviations " + mc)};
}

// Nemenyi critical values at k = 2..10 as published, to three decimals (some
// entries are truncated rather than rounded).
const double kQ05[] = {1.960, 2.343, 2.569, 2.728, 2.850, 2.949, 3.031, 3.102, 3.164};
const double kQ01[] = {2.576, 2.913, 3.113, 3.255, 3.364, 3.452, 3.526, 3.590, 3.646};

Outcome stats_oracles() {
  Tally t;
  std::mt19937_64 gen(99);
  std::uniform_real_distribution<double> u(-1, 1);

  for (std::size_t n = 1; n <= 12; ++n) {
    for (int rep = 0; rep < 20; ++rep) {
      std::vector<double> d;
      std::vector<std::pair<double, double>> pairs;
      std::set<double> mags;
      while (d.size() < n) {
        const double v = std::round(u(gen) * 1000) / 100;
        if (v == 0 || !mags.insert(std::abs(v)).second) continue;
        d.push_back(v);
        pairs.push_back({v, 0.0});
      }
      const auto e = oracle::wilcoxon_enumerate(d);
      const auto two = wilcoxon_signed_rank(pairs, true);
      const auto one = wilcoxon_signed_rank(pairs, false);
      t.expect(two.statistic == e.w && std::abs(two.p_value - e.p_two_sided) < 1e-12 &&
                   std::abs(one.p_value - e.p_greater) < 1e-12,
               "wilcoxon n=" + std::to_string(n));
    }
  }

  for (int rep = 0; rep < 200; ++rep) {
    std::vector<double> x(1 + gen() % 40), y(1 + gen() % 40);
    for (auto& v : x) v = static_cast<double>(gen() % 15);
    for (auto& v : y) v = static_cast<double>(gen() % 15);
    t.expect(mann_whitney_u(x, y).statistic == oracle::mwu_pairs(x, y), "mwu U");
    t.expect(ks_two_sample(x, y).statistic == oracle::ks_scan(x, y), "ks D");
    std::vector<double> fx(x.size()), fy(y.size());
    for (auto& v : fx) v = u(gen);
    for (auto& v : fy) v = u(gen);
    t.expect(ks_two_sample(fx, fy).statistic == oracle::ks_scan(fx, fy), "ks D continuous");
  }

  double worst_friedman = 0;
  for (int rep = 0; rep < 100; ++rep) {
    RankTable table;
    for (int m = 0; m < 8; ++m) table.models.push_back("m" + std::to_string(m));
    for (int d = 0; d < 6; ++d) {
      table.datasets.push_back("d" + std::to_string(d));
      std::vector<double> row;
      for (int m = 0; m < 8; ++m) row.push_back(static_cast<double>(gen() % 6) / 5);
      table.values.push_back(row);
    }
    worst_friedman = std::max(worst_friedman, std::abs(friedman(table).statistic - oracle::friedman_statistic(table.values)));
    for (auto& row : table.values) std::fill(row.begin(), row.end(), 0.75);
    t.expect(friedman(table).statistic == 0.0, "friedman on a constant table");
  }
  t.expect(worst_friedman < 1e-9, "friedman deviation " + fmt(worst_friedman));

  double worst_cd = 0;
  for (std::size_t k = 2; k <= 10; ++k) {
    for (std::size_t n : {3, 6, 10, 25}) {
      RankTable table;
      for (std::size_t m = 0; m < k; ++m) table.models.push_back("m" + std::to_string(m));
      for (std::size_t d = 0; d < n; ++d) {
        table.datasets.push_back("d" + std::to_string(d));
        std::vector<double> row;
        for (std::size_t m = 0; m < k; ++m) row.push_back(u(gen));
        table.values.push_back(row);
      }
      for (double alpha : {0.05, 0.01}) {
        const double q = nemenyi_q(k, alpha);
        const double published = (alpha == 0.05 ? kQ05 : kQ01)[k - 2];
        t.expect(std::abs(q - published) < 1e-3, "q(" + std::to_string(k) + ") = " + fmt(q));
        const double cd = q * std::sqrt(k * (k + 1.0) / (6.0 * n));
        worst_cd = std::max(worst_cd, std::abs(nemenyi(table, alpha).critical_difference - cd));
      }
    }
  }
  t.expect(worst_cd < 1e-9, "CD deviation " + fmt(worst_cd));
  return {t.ok(), t.summary("wilcoxon = 2^n enumeration (n <= 12); U and D = brute force; friedman deviation " +
                            fmt(worst_friedman) + "; CD deviation " + fmt(worst_cd))};
}

bool is_subset(const std::vector<std::string>& part, std::vector<std::string> whole) {
  std::sort(whole.begin(), whole.end());
  return std::all_of(part.begin(), part.end(),
                     [&](const std::string& id) { return std::binary_search(whole.begin(), whole.end(), id); });
}

Outcome strategy_invariants(const std::vector<Dataset>& data) {
  Tally t;
  std::size_t splits = 0, matched = 0, minimal_sets = 0;
  for (const auto& d : data) {
    for (const auto& [key, p] : d.grid) {
      for (std::size_t s = 0; s < p.k; ++s) {
        const auto& split = p.splits[s];
        const std::uint64_t seed = mix_seed(kSeed, s);
        ++splits;
        const auto hard = hard_balance(split, seed);
        const std::size_t np = split.positives.size(), nn = split.negatives.size();
        t.expect(hard.positives == split.positives, "hard balance keeps positives");
        t.expect(hard.negatives.size() == (nn > np ? np : nn) && is_subset(hard.negatives, split.negatives),
                 "hard balance size");

        const auto lc = length_control(split, d.corpus, seed);
        t.expect(lc.negatives.size() == (nn > np ? np : nn) && is_subset(lc.negatives, split.negatives),
                 "length control size");
        if (nn <= np) continue;
        auto order = lc.positives;
        Rng rng(seed);
        rng.shuffle(order);
        std::vector<std::size_t> lengths;
        for (const auto& id : order) lengths.push_back(d.corpus.at(id).residues.size());
        std::map<std::size_t, int> chosen, others;
        for (const auto& id : split.negatives) {
          const bool taken = std::binary_search(lc.negatives.begin(), lc.negatives.end(), id);
          ++(taken ? chosen : others)[d.corpus.at(id).residues.size()];
        }
        ++matched;
        t.expect(oracle::greedy_matching_exists(lengths, chosen, others),
                 d.name + " length control is not a greedy nearest-length matching");
      }
    }
  }

  // Minimal over every split of the grid, one scope per corpus
  for (const auto& d : data) {
    std::vector<MinimalSetting> settings;
    for (const auto& [key, p] : d.grid) {
      for (std::size_t s = 0; s < p.k; ++s) {
        settings.push_back({"ts" + fmt(key.first) + "_tc" + fmt(key.second) + "#" + std::to_string(s), d.name,
                            p.splits[s], key.second});
      }
    }
    std::vector<BalancedSet> out;
    try {
      out = minimal(settings, d.store, kSeed, Scope::per_dataset);
    } catch (const std::exception& e) {
      t.expect(false, d.name + " minimal: " + e.what());
      continue;
    }
    for (std::size_t i = 0; i < out.size(); ++i) {
      ++minimal_sets;
      t.expect(out[i].positives.size() == out[0].positives.size() &&
                   out[i].negatives.size() == out[0].negatives.size(),
               d.name + " minimal sizes differ");
      t.expect(is_subset(out[i].positives, settings[i].split.positives) &&
                   is_subset(out[i].negatives, settings[i].split.negatives),
               d.name + " minimal subsets");
      if (settings[i].t_c == 0.0) continue;
      for (const auto& n : out[i].negatives) {
        bool anchored = false;
        for (const auto& q : out[i].positives) anchored = anchored || d.store.lookup(n, q) >= settings[i].t_c;
        t.expect(anchored, d.name + " minimal negative " + n + " not anchored");
      }
    }
  }

  auto fake = [](std::size_t pos, std::size_t neg) {
    Split s;
    for (std::size_t i = 0; i < pos; ++i) s.positives.push_back("p" + std::to_string(100000 + i));
    for (std::size_t i = 0; i < neg; ++i) s.negatives.push_back("n" + std::to_string(100000 + i));
    return s;
  };
  for (const auto& [pos, neg] : std::vector<std::pair<std::size_t, std::size_t>>{
           {400, 600}, {8000, 12000}, {300, 700}, {2, 98}, {45, 46}, {2600, 2400}, {10, 10}}) {
    const auto input = fake(pos, neg);
    const auto v = validation_split(input, 0.1, 500, 3);
    const std::size_t n = pos + neg;
    const std::size_t expected = std::min<std::size_t>((n + 9) / 10, 500);
    const std::size_t held = v.validation.positives.size() + v.validation.negatives.size();
    t.expect(held == expected, "validation of " + std::to_string(n) + " holds " + std::to_string(held));
    t.expect(held + v.train.positives.size() + v.train.negatives.size() == n, "validation partitions the input");
  }
  return {t.ok(), t.summary("hard balance and length control on " + std::to_string(splits) + " splits (" +
                            std::to_string(matched) + " matchings verified); minimal equal and anchored on " +
                            std::to_string(minimal_sets) + " sets; 10%/500 validation rule")};
}

std::string slurp(const fs::path& p) { return testing::slurp(p); }

int cli(std::vector<std::string> args) {
  std::ostringstream out, err;
  return run(args, out, err);
}

Outcome determinism(const std::vector<Dataset>& data, const fs::path& root) {
  Tally t;
  const auto& d = data[0];
  const fs::path dir = root / "determinism";
  fs::create_directories(dir);
  const auto fasta = (dir / "corpus.fasta").string();
  {
    std::ofstream f(fasta);
    write_fasta(f, d.corpus);
  }
  std::vector<std::string> grid_args;
  for (double v : kTs) grid_args.insert(grid_args.end(), {"--ts", fmt(v)});
  for (double v : kTc) grid_args.insert(grid_args.end(), {"--tc", fmt(v)});

  for (const std::string w : {"1", "4", "8"}) {
    t.expect(cli({"pairwise", "--in", fasta, "--workers", w, "--out", (dir / ("store" + w)).string()}) == 0,
             "pairwise exit");
    std::vector<std::string> args = {"partition", "--in", fasta, "--store", (dir / "store1" / "identities.tsv").string(),
                                     "--dataset", d.name, "--seed", std::to_string(kSeed), "--workers", w, "--out",
                                     (dir / ("parts" + w)).string()};
    args.insert(args.end(), grid_args.begin(), grid_args.end());
    t.expect(cli(args) == 0, "partition exit");
  }
  std::ostringstream library;
  d.store.write(library);
  const auto store1 = slurp(dir / "store1" / "identities.tsv");
  t.expect(store1 == library.str(), "CLI store differs from the library store");
  t.expect(store1 == slurp(dir / "store4" / "identities.tsv"), "store differs at 4 workers");
  t.expect(store1 == slurp(dir / "store8" / "identities.tsv"), "store differs at 8 workers");

  // all three partition runs read store1, so their configs differ only in --workers
  std::size_t compared = 0;
  for (const auto& entry : fs::directory_iterator(dir / "parts1")) {
    const auto name = entry.path().filename();
    if (name == "run.json") continue;
    ++compared;
    const auto text = slurp(entry.path());
    t.expect(text == slurp(dir / "parts4" / name) && text == slurp(dir / "parts8" / name),
             name.string() + " differs across worker counts");
    // manifests match the library result for the same setting
    const auto p = parse_partition(Json::parse(text));
    t.expect(p.splits == d.grid.at({p.thresholds.t_s, p.thresholds.t_c}).splits,
             name.string() + " differs from the library run");
  }
  t.expect(compared == 20, std::to_string(compared) + " manifests compared");

  t.expect(cli({"rerun", "--config", (dir / "parts1" / "run.json").string(), "--out", (dir / "again").string()}) == 0,
           "rerun exit");
  for (const auto& entry : fs::directory_iterator(dir / "parts1")) {
    t.expect(slurp(entry.path()) == slurp(dir / "again" / entry.path().filename()),
             entry.path().filename().string() + " differs on rerun");
  }

  const auto manifest = (dir / "parts1" / ("d1_ts0.4_tc0.5.json")).string();
  for (const std::string s : {"hard", "length", "minimal"}) {
    for (const std::string out : {"b1", "b2"}) {
      t.expect(cli({"balance", "--manifest", manifest, "--in", fasta, "--store",
                    (dir / "store1" / "identities.tsv").string(), "--strategy", s, "--seed", "5", "--out",
                    (dir / out).string()}) == 0,
               "balance " + s + " exit");
    }
  }
  for (const auto& entry : fs::directory_iterator(dir / "b1")) {
    t.expect(slurp(entry.path()) == slurp(dir / "b2" / entry.path().filename()),
             entry.path().filename().string() + " differs on rerun");
  }
  return {t.ok(), t.summary("store and 20 manifests byte-identical at --workers 1, 4, 8; rerun and balance "
                            "outputs byte-identical")};
}

Outcome readd_maximality(const std::vector<Dataset>& data) {
  Tally t;
  std::size_t unrestored = 0, restored = 0;
  for (const auto& d : data) {
    const StoreIdentity source(d.store);
    for (const auto& [key, p] : d.grid) {
      t.expect(readd_counterexamples(p, source).empty(), d.name + " has re-addable sequences");
      for (const auto& r : p.removed) {
        if (r.restored) {
          ++restored;
          continue;
        }
        ++unrestored;
        bool collides = false;
        for (std::size_t s = 0; s < p.k && !collides; ++s) {
          if (s == r.split) continue;
          const auto& others = r.label == Label::positive ? p.splits[s].positives : p.splits[s].negatives;
          for (const auto& o : others) {
            if (d.store.lookup(r.id, o) > p.thresholds.t_s) {
              collides = true;
              break;
            }
          }
        }
        t.expect(collides, d.name + " " + r.id + " re-inserts cleanly");
      }
    }
  }
  t.expect(unrestored > 0, "no unrestored removals to check");
  return {t.ok(), t.summary(std::to_string(unrestored) + " unrestored removals each collide on re-insertion (" +
                            std::to_string(restored) + " restored)")};
}

Outcome temporal_boundary(const fs::path& root) {
  Tally t;
  const std::string fasta =
      ">a created=2020-12-31\nACDEFGHIK\n>b created=2021-01-01\nACDEFGHIK\n>c created=2020-12-30\nACDEFGHIK\n"
      ">d created=2020-02-29\nACDEFGHIK\n>e created=2021-12-31\nACDEFGHIK\n>f created=1999-01-01\nACDEFGHIK\n";
  const auto corpus = parse_fasta_string(fasta);
  const auto split = temporal_split(corpus, parse_date("2020-12-31"));
  t.expect(split.before_or_on.ids() == std::vector<std::string>{"a", "c", "d", "f"}, "train side");
  t.expect(split.after.ids() == std::vector<std::string>{"b", "e"}, "test side");
  const auto early = temporal_split(corpus, parse_date("2020-12-30"));
  t.expect(early.before_or_on.ids() == std::vector<std::string>{"c", "d", "f"}, "moved cutoff");

  const fs::path dir = root / "temporal";
  fs::create_directories(dir);
  {
    std::ofstream f(dir / "in.fasta");
    f << fasta;
  }
  t.expect(cli({"split-by-date", "--in", (dir / "in.fasta").string(), "--cutoff", "2020-12-31", "--out",
                (dir / "out").string()}) == 0,
           "split-by-date exit");
  t.expect(read_fasta_file((dir / "out" / "train.fasta").string()).ids() == std::vector<std::string>{"a", "c", "d", "f"},
           "CLI train side");
  t.expect(read_fasta_file((dir / "out" / "test.fasta").string()).ids() == std::vector<std::string>{"b", "e"},
           "CLI test side");
  t.expect(cli({"split-by-date", "--in", (dir / "in.fasta").string(), "--cutoff", "2021-02-29", "--out",
                (dir / "bad").string()}) == kExitInput,
           "invalid cutoff accepted");
  const auto undated = parse_fasta_string(">x\nACDE\n");
  bool threw = false;
  try {
    temporal_split(undated, parse_date("2020-12-31"));
  } catch (const std::exception&) {
    threw = true;
  }
  t.expect(threw, "undated record accepted");
  return {t.ok(), t.summary("cutoff 2020-12-31: on or before -> train, 2021-01-01 -> test; bad dates rejected")};
}

}  // namespace

int main() {
  const auto start = std::chrono::steady_clock::now();
  testing::TempDir scratch;
  std::vector<Dataset> data;
  for (std::size_t i = 0; i < 5; ++i) data.push_back(make_dataset(i));

  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria = {
      {"zero-violation guarantee", [&] { return zero_violations(data); }},
      {"grid cardinality", [&] { return grid_cardinality(data, scratch.path()); }},
      {"baseline contrast", [&] { return baseline_contrast(data); }},
      {"alignment oracle equivalence", [] { return alignment_oracle(); }},
      {"metric oracles", [] { return metric_oracles(); }},
      {"statistics oracles", [] { return stats_oracles(); }},
      {"strategy invariants", [&] { return strategy_invariants(data); }},
      {"determinism", [&] { return determinism(data, scratch.path()); }},
      {"greedy maximality of re-addition", [&] { return readd_maximality(data); }},
      {"temporal split", [&] { return temporal_boundary(scratch.path()); }},
  };
  bool all = true;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    all = all && o.pass;
    std::cout << (o.pass ? "PASS" : "FAIL") << "  " << (i + 1) << ". " << criteria[i].first << ": " << o.detail
              << std::endl;
  }
  const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  std::printf("%s in %.1f s\n", all ? "all criteria passed" : "some criteria failed", seconds);
  return all ? 0 : 1;
}
