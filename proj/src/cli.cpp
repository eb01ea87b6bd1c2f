#include "homopart/cli.hpp"

#include <CLI11.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>

#include "homopart/align.hpp"
#include "homopart/audit.hpp"
#include "homopart/balance.hpp"
#include "homopart/corpus.hpp"
#include "homopart/error.hpp"
#include "homopart/format.hpp"
#include "homopart/identity_source.hpp"
#include "homopart/identity_store.hpp"
#include "homopart/manifest.hpp"
#include "homopart/metrics.hpp"
#include "homopart/partition.hpp"
#include "homopart/stats.hpp"
#include "homopart/synth.hpp"

namespace homopart {

namespace {

namespace fs = std::filesystem;

std::string fnv1a64(std::string_view bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

void write_atomic(const fs::path& path, const std::string& content) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  fs::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    out << content;
    out.flush();
    if (!out) throw InputError("cannot write '" + tmp.string() + "'");
  }
  fs::rename(tmp, path);
}

// Arguments that do not influence any output.
bool is_transient(std::string_view arg) { return arg == "--workers" || arg == "--out"; }

// State of one invocation: reads are recorded (path and content hash) into
// the configuration snapshot written next to every output.
class Session {
 public:
  Session(std::string command, const std::vector<std::string>& args, std::ostream& out)
      : command_(std::move(command)), out_(out) {
    for (std::size_t i = 1; i < args.size(); ++i) {
      const std::string_view a = args[i];
      const auto eq = a.find('=');
      if (is_transient(a.substr(0, eq))) {
        if (eq == std::string_view::npos) ++i;
        continue;
      }
      args_.push_back(args[i]);
    }
  }

  std::string read(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw InputError("cannot open '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    std::string text = ss.str();
    inputs_[path] = fnv1a64(text);
    return text;
  }

  Corpus fasta(const std::string& path, Label default_label = Label::positive) {
    std::istringstream in(read(path));
    Corpus c = parse_fasta(in, default_label);
    c.description = path;
    return c;
  }

  Json json_file(const std::string& path) {
    try {
      return Json::parse(read(path));
    } catch (const Json::parse_error& e) {
      throw InputError("'" + path + "' is not valid JSON: " + e.what());
    }
  }

  Json config() const {
    Json inputs = Json::object();
    for (const auto& [path, hash] : inputs_) inputs[path] = {{"fnv1a64", hash}};
    return {{"command", command_}, {"args", args_}, {"inputs", inputs}};
  }

  void write(const fs::path& path, const std::string& content) {
    write_atomic(path, content);
    written_.push_back(path.filename().string());
  }

  /// Writes run.json (when an output directory is given) and the summary line.
  int finish(const std::string& out_dir, Json summary, int code = kExitOk) {
    summary["command"] = command_;
    if (!out_dir.empty()) {
      write(fs::path(out_dir) / "run.json", dump({{"config", config()}, {"outputs", written_}}));
    }
    out_ << summary.dump() << '\n';
    return code;
  }

 private:
  std::string command_;
  std::vector<std::string> args_;
  std::map<std::string, std::string> inputs_;
  std::vector<std::string> written_;
  std::ostream& out_;
};

struct AlignFlags {
  std::string matrix;
  int gap_open = 10;
  int gap_extend = 2;
  double coverage = 0.25;
  double floor = 0.25;

  void add(CLI::App* app, bool with_floor) {
    app->add_option("--matrix", matrix, "Substitution matrix file (NCBI layout); BLOSUM62 when omitted");
    app->add_option("--gap-open", gap_open, "Gap opening penalty")->capture_default_str();
    app->add_option("--gap-extend", gap_extend, "Gap extension penalty")->capture_default_str();
    app->add_option("--coverage", coverage, "Minimum aligned columns as a fraction of the shorter sequence")
        ->capture_default_str();
    if (with_floor) app->add_option("--floor", floor, "Smallest identity kept in the store")->capture_default_str();
  }

  ScoringScheme scheme(Session& s) const {
    ScoringScheme sc;
    if (!matrix.empty()) sc.matrix = SubstitutionMatrix::parse(s.read(matrix), fs::path(matrix).stem().string());
    sc.gap_open = gap_open;
    sc.gap_extend = gap_extend;
    sc.coverage_min = coverage;
    sc.validate();
    return sc;
  }
};

// Loads a store file, checks it against the alignment flags and adds the
// corpus ids that have no stored pair to its universe.
IdentityStore load_store(Session& s, const std::string& path, const ScoringScheme& scoring,
                         const std::vector<const Corpus*>& corpora) {
  std::istringstream in(s.read(path));
  auto store = IdentityStore::read(in);
  if (!(store.params() == StoreParams::from(scoring))) {
    throw InputError("identity store '" + path + "' was built with different alignment parameters");
  }
  std::vector<std::string> ids;
  for (const auto* c : corpora) {
    for (const auto& id : c->ids()) ids.push_back(id);
  }
  store.extend_universe(ids);
  return store;
}

Corpus merge(const std::vector<Corpus>& parts) {
  Corpus out;
  for (const auto& p : parts) {
    for (const auto& r : p.records()) out.add(r);
  }
  return out;
}

std::string threshold_tag(double v) { return format_double(v); }

std::vector<double> read_numbers(Session& s, const std::string& path) {
  std::istringstream in(s.read(path));
  std::vector<double> out;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    out.push_back(parse_double(line));
  }
  return out;
}

Json split_json(const Split& s) { return {{"positives", s.positives}, {"negatives", s.negatives}}; }

Split corpus_split(const Corpus& c) { return {c.ids(Label::positive), c.ids(Label::negative)}; }

auto alpha_check = [](const std::string& v) -> std::string {
  return (v == "0.05" || v == "0.01") ? std::string() : "alpha must be 0.05 or 0.01";
};

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Similarity-aware partitioning of two-class sequence datasets", "homopart"};
  app.require_subcommand(1);
  app.set_help_all_flag("--help-all", "Help for every subcommand");

  std::uint64_t seed = 1;
  unsigned workers = 1;
  std::string out_dir;
  AlignFlags align;
  std::vector<std::string> inputs;
  std::string store_path, manifest_path, metadata_path, external_path, label_text = "positive";
  std::vector<std::string> manifests;
  std::size_t k = 3, min_len = 50, max_len = 1000, bins = 50, test_split = 0, validation_cap = 500;
  std::vector<double> ts_list, tc_list;
  double alpha = 0.05, validation_fraction = 0.0;
  std::string strategy_text, scope_text = "per_dataset", cutoff_text, dataset, against, scores_path, table_path;
  std::string test_name, x_path, y_path, train_path, test_path, set_a, set_b, config_path;
  bool exact = false, one_sided = false;
  std::size_t bonferroni_m = 0;
  SynthOptions synth;

  auto add_seed = [&](CLI::App* c) { c->add_option("--seed", seed, "Seed for every random choice")->capture_default_str(); };
  auto add_out = [&](CLI::App* c, bool required) {
    auto* o = c->add_option("--out", out_dir, "Output directory");
    if (required) o->required();
  };

  auto* qc = app.add_subcommand("qc", "Length, alphabet, redundancy and cross-class filters");
  qc->add_option("--in", inputs, "Input FASTA (repeatable)")->required();
  qc->add_option("--label", label_text, "Class of records without a label= attribute")->capture_default_str();
  qc->add_option("--metadata", metadata_path, "JSON sidecar with creation dates and sources");
  qc->add_option("--external", external_path, "External test FASTA; overlapping records are dropped");
  qc->add_option("--min-len", min_len, "Minimum length")->capture_default_str();
  qc->add_option("--max-len", max_len, "Maximum length")->capture_default_str();
  add_out(qc, true);

  auto* pairwise = app.add_subcommand("pairwise", "All-vs-all identity store");
  pairwise->add_option("--in", inputs, "Input FASTA (repeatable; records are pooled)")->required();
  pairwise->add_option("--against", against, "Second FASTA; only cross pairs are computed");
  align.add(pairwise, true);
  pairwise->add_option("--workers", workers, "Alignment threads")->capture_default_str();
  add_out(pairwise, true);

  auto* partition = app.add_subcommand("partition", "Cross-validation splits for a grid of thresholds");
  partition->add_option("--in", inputs, "Labelled FASTA (repeatable)")->required();
  partition->add_option("--store", store_path, "Identity store; computed when omitted");
  partition->add_option("--k", k, "Number of splits")->capture_default_str();
  partition->add_option("--ts", ts_list, "Inter-split threshold (repeatable)")->required();
  partition->add_option("--tc", tc_list, "Inter-class threshold (repeatable; default 0)");
  partition->add_option("--dataset", dataset, "Dataset tag recorded in the manifests");
  add_seed(partition);
  align.add(partition, true);
  partition->add_option("--workers", workers, "Alignment threads")->capture_default_str();
  add_out(partition, true);

  auto* balance = app.add_subcommand("balance", "Training-set strategies applied to every split");
  balance->add_option("--manifest", manifests, "Partition manifest (repeatable)")->required();
  balance->add_option("--strategy", strategy_text, "Strategy")
      ->required()
      ->check(CLI::IsMember({"none", "hard", "length", "minimal"}));
  balance->add_option("--in", inputs, "Labelled FASTA (needed by length)");
  balance->add_option("--store", store_path, "Identity store (needed by minimal with t_c > 0)");
  balance->add_option("--scope", scope_text, "Minimal scope")
      ->check(CLI::IsMember({"global", "per_dataset"}))
      ->capture_default_str();
  add_seed(balance);
  align.add(balance, false);
  add_out(balance, true);

  auto* by_date = app.add_subcommand("split-by-date", "Temporal split: created on or before the cutoff trains");
  by_date->add_option("--in", inputs, "Labelled FASTA (repeatable)")->required();
  by_date->add_option("--metadata", metadata_path, "JSON sidecar with creation dates");
  by_date->add_option("--cutoff", cutoff_text, "Cutoff date YYYY-MM-DD")->required();
  add_out(by_date, true);

  auto* derive = app.add_subcommand("derive-train", "Training set for one test split under its own t_c");
  derive->add_option("--manifest", manifest_path, "Partition manifest")->required();
  derive->add_option("--test-split", test_split, "Index of the test split")->capture_default_str();
  derive->add_option("--store", store_path, "Identity store")->required();
  derive->add_option("--in", inputs, "Labelled FASTA (repeatable) for the store universe");
  derive->add_option("--ts", ts_list, "Inter-split threshold (default: the manifest's)");
  derive->add_option("--tc", tc_list, "Training inter-class threshold (default 0)");
  derive->add_option("--validation-fraction", validation_fraction, "Hold out this fraction (0: none)")
      ->capture_default_str();
  derive->add_option("--validation-cap", validation_cap, "Largest validation set")->capture_default_str();
  add_seed(derive);
  align.add(derive, false);
  add_out(derive, true);

  auto* baseline = app.add_subcommand("baseline-partition", "Founder-based clustering baseline, no violation removal");
  baseline->add_option("--in", inputs, "Labelled FASTA (repeatable)")->required();
  baseline->add_option("--store", store_path, "Identity store; alignments computed on demand when omitted");
  baseline->add_option("--ts", ts_list, "Clustering threshold")->required()->expected(1);
  baseline->add_option("--k", k, "Number of splits")->capture_default_str();
  add_seed(baseline);
  align.add(baseline, false);
  add_out(baseline, true);

  auto* verify = app.add_subcommand("verify", "Exhaustive audit of a partition manifest");
  verify->add_option("--manifest", manifest_path, "Partition manifest")->required();
  verify->add_option("--store", store_path, "Identity store");
  verify->add_option("--in", inputs, "Labelled FASTA (repeatable); required with --exact");
  verify->add_flag("--exact", exact, "Align pairs below the store floor instead of reading them as 0");
  verify->add_option("--bins", bins, "Histogram bins")->capture_default_str();
  align.add(verify, false);
  add_out(verify, false);

  auto* hist = app.add_subcommand("hist", "Identity histograms (CSV)");
  hist->add_option("--manifest", manifest_path, "Partition manifest: one CSV per audit panel");
  hist->add_option("--set-a", set_a, "FASTA of the first set");
  hist->add_option("--set-b", set_b, "FASTA of the second set");
  hist->add_option("--store", store_path, "Identity store");
  hist->add_option("--in", inputs, "Labelled FASTA (repeatable)");
  hist->add_flag("--exact", exact, "Align pairs below the store floor");
  hist->add_option("--bins", bins, "Histogram bins")->capture_default_str();
  align.add(hist, false);
  add_out(hist, true);

  auto* evaluate = app.add_subcommand("evaluate", "AUROC, AUPRC and background AUPRC of a scores file");
  evaluate->add_option("--scores", scores_path, "TSV id, label, score")->required();
  add_out(evaluate, false);

  auto* stats = app.add_subcommand("stats", "Nonparametric tests and correlations");
  stats->add_option("--test", test_name, "Test")
      ->required()
      ->check(CLI::IsMember({"friedman", "nemenyi", "mwu", "wilcoxon", "ks", "pearson", "spearman", "bonferroni"}));
  stats->add_option("--table", table_path, "Rank table CSV (friedman, nemenyi)");
  stats->add_option("--x", x_path, "First sample, one value per line (p-values for bonferroni)");
  stats->add_option("--y", y_path, "Second sample");
  stats->add_option("--alpha", alpha, "Significance level")->check(alpha_check)->capture_default_str();
  stats->add_flag("--one-sided", one_sided, "One-sided alternative: x tends to exceed y");
  stats->add_option("--m", bonferroni_m, "Bonferroni test count (default: number of p-values)");
  add_out(stats, false);

  auto* difficulty = app.add_subcommand("difficulty", "Compare inter-class similarity of a training and a test set");
  difficulty->add_option("--train", train_path, "Labelled FASTA of the training set")->required();
  difficulty->add_option("--test", test_path, "Labelled FASTA of the test set")->required();
  difficulty->add_option("--store", store_path, "Identity store used as a cache");
  difficulty->add_option("--alpha", alpha, "Significance level")->check(alpha_check)->capture_default_str();
  align.add(difficulty, false);
  add_out(difficulty, false);

  auto* synth_cmd = app.add_subcommand("synth", "Synthetic protein families");
  synth_cmd->add_option("--families", synth.families, "Family count")->capture_default_str();
  synth_cmd->add_option("--family-size", synth.family_size, "Members per family")->capture_default_str();
  synth_cmd->add_option("--min-len", synth.min_length, "Shortest founder")->capture_default_str();
  synth_cmd->add_option("--max-len", synth.max_length, "Longest founder")->capture_default_str();
  synth_cmd->add_option("--rate", synth.mutation_rate, "Substitution rate")->capture_default_str();
  synth_cmd->add_option("--negative-fraction", synth.negative_fraction, "Negative share")->capture_default_str();
  synth_cmd->add_option("--mixed-fraction", synth.mixed_fraction, "Share of mixed-class families")
      ->capture_default_str();
  synth_cmd->add_option("--prefix", synth.id_prefix, "Id prefix")->capture_default_str();
  add_seed(synth_cmd);
  add_out(synth_cmd, true);

  auto* rerun = app.add_subcommand("rerun", "Repeat a run from the config snapshot of one of its outputs");
  rerun->add_option("--config", config_path, "run.json or manifest holding a config block")->required();
  rerun->add_option("--workers", workers, "Alignment threads")->capture_default_str();
  add_out(rerun, true);

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  CLI::App* cmd = app.get_subcommands().front();
  Session session(cmd->get_name(), args, out);
  try {
    if (cmd == qc) {
      std::vector<Corpus> parts;
      for (const auto& p : inputs) parts.push_back(session.fasta(p, parse_label(label_text)));
      Corpus corpus = merge(parts);
      if (!metadata_path.empty()) corpus = apply_metadata(corpus, session.read(metadata_path));
      auto filtered = quality_filter(corpus, {min_len, max_len});
      auto dropped = filtered.dropped;
      const auto cross = cross_class_filter(filtered.kept.subset(Label::positive), filtered.kept.subset(Label::negative));
      dropped.insert(dropped.end(), cross.dropped.begin(), cross.dropped.end());
      Corpus kept;
      for (const auto& r : filtered.kept.records()) {
        if (r.label == Label::positive || cross.kept.contains(r.id)) kept.add(r);
      }
      if (!external_path.empty()) {
        auto ext = filter_train_against_external(kept, session.fasta(external_path));
        dropped.insert(dropped.end(), ext.dropped.begin(), ext.dropped.end());
        kept = ext.kept;
      }
      std::ostringstream fasta, log;
      write_fasta(fasta, kept);
      write_drop_log(log, dropped);
      session.write(fs::path(out_dir) / "kept.fasta", fasta.str());
      session.write(fs::path(out_dir) / "dropped.tsv", log.str());
      return session.finish(out_dir, {{"kept", kept.size()},
                                      {"dropped", dropped.size()},
                                      {"positives", kept.ids(Label::positive).size()},
                                      {"negatives", kept.ids(Label::negative).size()}});
    }

    if (cmd == pairwise) {
      const auto scoring = align.scheme(session);
      std::vector<Corpus> parts;
      for (const auto& p : inputs) parts.push_back(session.fasta(p));
      const Corpus corpus = merge(parts);
      AllPairsReport report;
      const AllPairsOptions opts{align.floor, workers};
      const IdentityStore store = against.empty()
                                      ? all_pairs_identity(corpus, scoring, opts, &report)
                                      : all_pairs_identity(corpus, session.fasta(against), scoring, opts, &report);
      std::ostringstream text;
      store.write(text);
      session.write(fs::path(out_dir) / "identities.tsv", text.str());
      return session.finish(out_dir, {{"pairs_evaluated", report.pairs_evaluated}, {"entries", store.entry_count()}});
    }

    if (cmd == partition) {
      const auto scoring = align.scheme(session);
      std::vector<Corpus> parts;
      for (const auto& p : inputs) parts.push_back(session.fasta(p));
      const Corpus corpus = merge(parts);
      const IdentityStore store = store_path.empty()
                                      ? all_pairs_identity(corpus, scoring, {align.floor, workers})
                                      : load_store(session, store_path, scoring, {&corpus});
      if (tc_list.empty()) tc_list = {0.0};
      const auto grid = build_cv_sets(corpus.ids(Label::positive), corpus.ids(Label::negative), store, k, ts_list,
                                      tc_list, seed, dataset);
      const Json config = session.config();
      std::vector<std::string> files;
      for (const auto& [key, p] : grid) {
        Json m = partition_json(p);
        m["config"] = config;
        const std::string name = (dataset.empty() ? std::string("partition") : dataset) + "_ts" +
                                 threshold_tag(key.first) + "_tc" + threshold_tag(key.second) + ".json";
        session.write(fs::path(out_dir) / name, dump(m));
        files.push_back(name);
      }
      return session.finish(out_dir, {{"manifests", files.size()}, {"files", files}});
    }

    if (cmd == balance) {
      const Strategy strategy = parse_strategy(strategy_text);
      std::vector<Partition> parts;
      std::vector<std::string> names;
      for (const auto& m : manifests) {
        parts.push_back(parse_partition(session.json_file(m)));
        names.push_back(fs::path(m).stem().string() + "_" + std::string(to_string(strategy)) + ".json");
        if (std::count(names.begin(), names.end(), names.back()) > 1) {
          throw InputError("manifests with the same file name: '" + m + "'");
        }
      }
      std::vector<Corpus> corpora;
      for (const auto& p : inputs) corpora.push_back(session.fasta(p));
      const Corpus corpus = merge(corpora);
      std::vector<std::vector<BalancedSet>> sets(parts.size());
      Json block = {{"name", to_string(strategy)}, {"seed", seed}};

      if (strategy == Strategy::minimal) {
        std::vector<MinimalSetting> settings;
        bool need_store = false;
        for (std::size_t m = 0; m < parts.size(); ++m) {
          for (std::size_t s = 0; s < parts[m].k; ++s) {
            settings.push_back({names[m] + "#" + std::to_string(s), parts[m].dataset, parts[m].splits[s],
                                parts[m].thresholds.t_c});
            need_store = need_store || parts[m].thresholds.t_c > 0.0;
          }
        }
        IdentityStore store;
        if (need_store) {
          if (store_path.empty()) throw InputError("minimal with t_c > 0 needs --store");
          store = load_store(session, store_path, align.scheme(session), {&corpus});
        }
        const Scope scope = scope_text == "global" ? Scope::global : Scope::per_dataset;
        const auto balanced = minimal(settings, store, seed, scope);
        std::size_t next = 0;
        for (std::size_t m = 0; m < parts.size(); ++m) {
          for (std::size_t s = 0; s < parts[m].k; ++s) sets[m].push_back(balanced[next++]);
        }
        block["scope"] = scope_text;
      } else {
        if (strategy == Strategy::length_control && inputs.empty()) throw InputError("length needs --in");
        for (std::size_t m = 0; m < parts.size(); ++m) {
          for (std::size_t s = 0; s < parts[m].k; ++s) {
            const auto split_seed = mix_seed(seed, s);
            const auto& split = parts[m].splits[s];
            if (strategy == Strategy::no_balance) sets[m].push_back(no_balance(split, names[m]));
            if (strategy == Strategy::hard_balance) sets[m].push_back(hard_balance(split, split_seed, names[m]));
            if (strategy == Strategy::length_control) {
              sets[m].push_back(length_control(split, corpus, split_seed, names[m]));
            }
          }
        }
      }
      const Json config = session.config();
      for (std::size_t m = 0; m < parts.size(); ++m) {
        Json j = balanced_json(parts[m], sets[m], block);
        j["config"] = config;
        session.write(fs::path(out_dir) / names[m], dump(j));
      }
      return session.finish(out_dir, {{"manifests", names.size()}, {"files", names}});
    }

    if (cmd == by_date) {
      std::vector<Corpus> parts;
      for (const auto& p : inputs) parts.push_back(session.fasta(p));
      Corpus corpus = merge(parts);
      if (!metadata_path.empty()) corpus = apply_metadata(corpus, session.read(metadata_path));
      const auto split = temporal_split(corpus, parse_date(cutoff_text));
      std::ostringstream train, test;
      write_fasta(train, split.before_or_on);
      write_fasta(test, split.after);
      session.write(fs::path(out_dir) / "train.fasta", train.str());
      session.write(fs::path(out_dir) / "test.fasta", test.str());
      return session.finish(out_dir, {{"train", split.before_or_on.size()}, {"test", split.after.size()}});
    }

    if (cmd == derive) {
      const Partition p = parse_partition(session.json_file(manifest_path));
      if (test_split >= p.k) throw InputError("test split index out of range");
      std::vector<Corpus> parts;
      for (const auto& path : inputs) parts.push_back(session.fasta(path));
      const Corpus corpus = merge(parts);
      const auto store = load_store(session, store_path, align.scheme(session), {&corpus});
      const double t_s = ts_list.empty() ? p.thresholds.t_s : ts_list.front();
      const double t_c = tc_list.empty() ? 0.0 : tc_list.front();
      Split pool;
      for (std::size_t s = 0; s < p.k; ++s) {
        if (s == test_split) continue;
        pool.positives.insert(pool.positives.end(), p.splits[s].positives.begin(), p.splits[s].positives.end());
        pool.negatives.insert(pool.negatives.end(), p.splits[s].negatives.begin(), p.splits[s].negatives.end());
      }
      Split train = derive_train_for_test(p.splits[test_split], pool, store, t_s, t_c);
      Json result = {{"config", session.config()}, {"test_split", test_split}, {"t_s", t_s}, {"train_t_c", t_c}};
      if (validation_fraction > 0.0) {
        auto v = validation_split(train, validation_fraction, validation_cap, seed);
        train = v.train;
        result["validation"] = split_json(v.validation);
      }
      result["train"] = split_json(train);
      session.write(fs::path(out_dir) / "train.json", dump(result));
      return session.finish(out_dir, {{"positives", train.positives.size()}, {"negatives", train.negatives.size()}});
    }

    if (cmd == baseline) {
      const auto scoring = align.scheme(session);
      std::vector<Corpus> parts;
      for (const auto& p : inputs) parts.push_back(session.fasta(p));
      const Corpus corpus = merge(parts);
      const Corpus pos = corpus.subset(Label::positive);
      const Corpus neg = corpus.subset(Label::negative);
      std::optional<IdentityStore> store;
      if (!store_path.empty()) store = load_store(session, store_path, scoring, {&corpus});
      const ComputedIdentity computed({&corpus}, scoring, store ? &*store : nullptr);
      const Partition p = greedy_representative_partition(pos, neg, computed, ts_list.front(), k, seed);
      Json m = partition_json(p);
      m["config"] = session.config();
      session.write(fs::path(out_dir) / "baseline.json", dump(m));
      return session.finish(out_dir, {{"k", p.k}});
    }

    if (cmd == verify || (cmd == hist && !manifest_path.empty())) {
      const Partition p = parse_partition(session.json_file(manifest_path));
      const auto scoring = align.scheme(session);
      std::vector<Corpus> parts;
      for (const auto& path : inputs) parts.push_back(session.fasta(path));
      const Corpus corpus = merge(parts);
      if (store_path.empty() && !exact) throw InputError("give --store, or --in with --exact");
      if (exact && inputs.empty()) throw InputError("--exact needs --in");
      std::optional<IdentityStore> store;
      if (!store_path.empty()) store = load_store(session, store_path, scoring, {&corpus});
      std::unique_ptr<IdentitySource> source;
      if (exact) {
        source = std::make_unique<ComputedIdentity>(std::vector<const Corpus*>{&corpus}, scoring,
                                                    store ? &*store : nullptr);
      } else {
        source = std::make_unique<StoreIdentity>(*store);
      }
      const auto report = audit_partition(p, *source, {bins, true});
      static const char* panel_files[] = {"hist_positive_inter_split.csv", "hist_negative_inter_split.csv",
                                          "hist_inter_class_in_split.csv"};
      if (cmd == hist) {
        for (std::size_t i = 0; i < report.histograms.size(); ++i) {
          std::ostringstream csv;
          write_histogram_csv(csv, report.histograms[i]);
          session.write(fs::path(out_dir) / panel_files[i], csv.str());
        }
        return session.finish(out_dir, {{"files", std::vector<std::string>(panel_files, panel_files + 3)}});
      }
      const auto counter = readd_counterexamples(p, *source);
      Json j = report_json(report);
      j["readd_counterexamples"] = counter;
      j["config"] = session.config();
      if (!out_dir.empty()) session.write(fs::path(out_dir) / "report.json", dump(j));
      const bool ok = report.passes() && counter.empty();
      if (!ok) err << "partition violates its constraints\n";
      return session.finish(out_dir,
                            {{"passes", report.passes()},
                             {"violations", report.violations.size()},
                             {"anchor_failures", report.anchor_failures.size()},
                             {"readd_maximal", counter.empty()}},
                            ok ? kExitOk : kExitInfeasible);
    }

    if (cmd == hist) {
      if (set_a.empty() || set_b.empty()) throw InputError("give --manifest, or both --set-a and --set-b");
      const auto scoring = align.scheme(session);
      const Corpus a = session.fasta(set_a);
      const Corpus b = session.fasta(set_b);
      std::vector<const Corpus*> all{&a, &b};
      std::vector<Corpus> extra;
      for (const auto& path : inputs) extra.push_back(session.fasta(path));
      for (const auto& c : extra) all.push_back(&c);
      std::optional<IdentityStore> store;
      if (!store_path.empty()) store = load_store(session, store_path, scoring, all);
      std::unique_ptr<IdentitySource> source;
      if (store && !exact) {
        source = std::make_unique<StoreIdentity>(*store);
      } else {
        source = std::make_unique<ComputedIdentity>(all, scoring, store ? &*store : nullptr);
      }
      const auto h = identity_histograms(a.ids(), b.ids(), *source, bins, set_a, set_b);
      std::ostringstream csv;
      write_histogram_csv(csv, h);
      session.write(fs::path(out_dir) / "histogram.csv", csv.str());
      return session.finish(out_dir, {{"files", {"histogram.csv"}}});
    }

    if (cmd == evaluate) {
      std::istringstream in(session.read(scores_path));
      const auto scores = read_scores(in);
      const auto p = std::count_if(scores.begin(), scores.end(),
                                   [](const ScoredInstance& s) { return s.label == Label::positive; });
      Json summary = {{"auroc", auroc(scores)},
                      {"auprc", auprc(scores)},
                      {"background_auprc", background_auprc(scores)},
                      {"positives", p},
                      {"negatives", static_cast<std::ptrdiff_t>(scores.size()) - p}};
      if (!out_dir.empty()) {
        Json j = summary;
        j["config"] = session.config();
        session.write(fs::path(out_dir) / "metrics.json", dump(j));
      }
      return session.finish(out_dir, summary);
    }

    if (cmd == stats) {
      Json summary = {{"test", test_name}};
      auto need = [](const std::string& v, const char* flag) {
        if (v.empty()) throw InputError(std::string(flag) + " is required for this test");
      };
      if (test_name == "friedman" || test_name == "nemenyi") {
        need(table_path, "--table");
        std::istringstream in(session.read(table_path));
        const auto table = read_rank_table(in);
        const auto f = friedman(table);
        summary["statistic"] = f.statistic;
        summary["p_value"] = f.p_value;
        if (test_name == "nemenyi") {
          const auto n = nemenyi(table, alpha);
          Json pairs = Json::array();
          for (auto [i, j] : n.significant) pairs.push_back({table.models[i], table.models[j]});
          Json ranks = Json::object();
          for (std::size_t i = 0; i < table.models.size(); ++i) ranks[table.models[i]] = n.average_ranks[i];
          summary["alpha"] = alpha;
          summary["critical_difference"] = n.critical_difference;
          summary["average_ranks"] = ranks;
          summary["significant_pairs"] = pairs;
        }
      } else if (test_name == "bonferroni") {
        need(x_path, "--x");
        const auto p = read_numbers(session, x_path);
        summary["adjusted"] = bonferroni(p, bonferroni_m ? std::optional<std::size_t>(bonferroni_m) : std::nullopt);
      } else {
        need(x_path, "--x");
        need(y_path, "--y");
        const auto x = read_numbers(session, x_path);
        const auto y = read_numbers(session, y_path);
        if (test_name == "pearson" || test_name == "spearman") {
          const auto c = test_name == "pearson" ? pearson(x, y) : spearman(x, y);
          summary["coefficient"] = c.coefficient;
          summary["p_value"] = c.p_value;
        } else {
          TestResult r;
          if (test_name == "mwu") r = mann_whitney_u(x, y, !one_sided);
          if (test_name == "ks") r = ks_two_sample(x, y);
          if (test_name == "wilcoxon") {
            if (x.size() != y.size()) throw InputError("wilcoxon needs paired samples of equal length");
            std::vector<std::pair<double, double>> pairs;
            for (std::size_t i = 0; i < x.size(); ++i) pairs.emplace_back(x[i], y[i]);
            r = wilcoxon_signed_rank(pairs, !one_sided);
          }
          summary["statistic"] = r.statistic;
          summary["p_value"] = r.p_value;
        }
      }
      if (!out_dir.empty()) {
        Json j = summary;
        j["config"] = session.config();
        session.write(fs::path(out_dir) / "stats.json", dump(j));
      }
      return session.finish(out_dir, summary);
    }

    if (cmd == difficulty) {
      const auto scoring = align.scheme(session);
      const Corpus train = session.fasta(train_path);
      const Corpus test = session.fasta(test_path);
      std::optional<IdentityStore> store;
      if (!store_path.empty()) store = load_store(session, store_path, scoring, {&train, &test});
      const ComputedIdentity source({&train, &test}, scoring, store ? &*store : nullptr);
      const auto r = difficulty_compare(corpus_split(train), corpus_split(test), source, alpha);
      Json summary = {{"verdict", to_string(r.verdict)},
                      {"u", r.test.statistic},
                      {"p_value", r.test.p_value},
                      {"train_median", r.train_median},
                      {"test_median", r.test_median}};
      if (!out_dir.empty()) {
        Json j = summary;
        j["train_profile"] = r.train_profile;
        j["test_profile"] = r.test_profile;
        j["config"] = session.config();
        session.write(fs::path(out_dir) / "difficulty.json", dump(j));
      }
      return session.finish(out_dir, summary);
    }

    if (cmd == synth_cmd) {
      synth.seed = seed;
      const Corpus c = synthesize_corpus(synth);
      std::ostringstream fasta;
      write_fasta(fasta, c);
      session.write(fs::path(out_dir) / "corpus.fasta", fasta.str());
      return session.finish(out_dir, {{"records", c.size()},
                                      {"positives", c.ids(Label::positive).size()},
                                      {"negatives", c.ids(Label::negative).size()}});
    }

    if (cmd == rerun) {
      Json doc = session.json_file(config_path);
      const Json config = doc.contains("config") ? doc.at("config") : doc;
      std::vector<std::string> replay{config.at("command").get<std::string>()};
      if (replay.front() == "rerun") throw InputError("a rerun snapshot cannot be replayed");
      for (const auto& [path, meta] : config.at("inputs").items()) {
        std::ifstream in(path, std::ios::binary);
        if (!in) throw InputError("input '" + path + "' of the snapshot is missing");
        std::ostringstream ss;
        ss << in.rdbuf();
        if (fnv1a64(ss.str()) != meta.at("fnv1a64").get<std::string>()) {
          throw InputError("input '" + path + "' changed since the snapshot was taken");
        }
      }
      for (const auto& a : config.at("args")) replay.push_back(a.get<std::string>());
      replay.push_back("--out");
      replay.push_back(out_dir);
      if (replay.front() == "pairwise" || replay.front() == "partition") {
        replay.push_back("--workers");
        replay.push_back(std::to_string(workers));
      }
      return run(replay, out, err);
    }
  } catch (const InfeasibleError& e) {
    err << "error: " << e.what() << '\n';
    return kExitInfeasible;
  } catch (const InputError& e) {
    err << "error: " << e.what() << '\n';
    return kExitInput;
  } catch (const Json::exception& e) {
    err << "error: malformed JSON input: " << e.what() << '\n';
    return kExitInput;
  } catch (const fs::filesystem_error& e) {
    err << "error: " << e.what() << '\n';
    return kExitInput;
  }
  return kExitUsage;
}

int run(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return run(args, std::cout, std::cerr);
}

}  // namespace homopart
