#include "homopart/audit.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>

#include "homopart/error.hpp"
#include "homopart/format.hpp"

namespace homopart {

std::size_t identity_bin(double identity, std::size_t bins) {
  const auto micro = static_cast<std::uint64_t>(std::llround(std::clamp(identity, 0.0, 1.0) * 1e6));
  return std::min<std::size_t>(bins - 1, micro * bins / 1000000);
}

namespace {

HistogramSet empty_histogram(std::string a, std::string b, std::size_t bins) {
  if (bins == 0) throw InputError("histogram needs at least one bin");
  HistogramSet h{std::move(a), std::move(b), {}, std::vector<std::size_t>(bins, 0), std::vector<std::size_t>(bins, 0)};
  for (std::size_t i = 0; i <= bins; ++i) h.edges.push_back(static_cast<double>(i) / static_cast<double>(bins));
  return h;
}

struct Member {
  const std::string* id;
  std::size_t split;
};

std::vector<Member> members(const Partition& p, Label label) {
  std::vector<Member> out;
  for (std::size_t s = 0; s < p.splits.size(); ++s) {
    for (const auto& id : label == Label::positive ? p.splits[s].positives : p.splits[s].negatives) {
      out.push_back({&id, s});
    }
  }
  return out;
}

void check_decidable(const Thresholds& t, const IdentitySource& identity) {
  const double floor = identity.exact_above();
  if (t.t_s < 1.0 && t.t_s < floor) throw InputError("t_s " + format_double(t.t_s) + " is below the identity floor");
  if (t.t_c > 0.0 && t.t_c < floor) throw InputError("t_c " + format_double(t.t_c) + " is below the identity floor");
}

double median(std::vector<double> v) {
  if (v.empty()) return 0.0;
  std::sort(v.begin(), v.end());
  const std::size_t m = v.size() / 2;
  return v.size() % 2 == 1 ? v[m] : (v[m - 1] + v[m]) / 2.0;
}

}  // namespace

ViolationReport audit_partition(const Partition& partition, const IdentitySource& identity,
                                const AuditOptions& options) {
  check_decidable(partition.thresholds, identity);
  const double t_s = partition.thresholds.t_s;
  const double t_c = partition.thresholds.t_c;
  ViolationReport report;
  report.thresholds = partition.thresholds;

  for (Label label : {Label::positive, Label::negative}) {
    const auto m = members(partition, label);
    const std::string name = label == Label::positive ? "positive" : "negative";
    auto hist = empty_histogram(name + " inter-split", name + " inter-split", options.bins);
    std::vector<double> best(m.size(), 0.0);
    std::vector<char> has_partner(m.size(), 0);
    for (std::size_t i = 0; i < m.size(); ++i) {
      for (std::size_t j = i + 1; j < m.size(); ++j) {
        if (m[i].split == m[j].split) continue;
        const double v = identity.identity(*m[i].id, *m[j].id);
        if (v > t_s) report.violations.push_back({*m[i].id, m[i].split, *m[j].id, m[j].split, label, v});
        if (options.histograms) {
          ++hist.all_vs_all[identity_bin(v, options.bins)];
          best[i] = std::max(best[i], v);
          best[j] = std::max(best[j], v);
          has_partner[i] = has_partner[j] = 1;
        }
      }
    }
    if (options.histograms) {
      for (std::size_t i = 0; i < m.size(); ++i) {
        if (has_partner[i]) ++hist.maximum[identity_bin(best[i], options.bins)];
      }
      report.histograms.push_back(std::move(hist));
    }
  }

  auto cross = empty_histogram("negative in-split", "positive in-split", options.bins);
  for (const auto& split : partition.splits) {
    for (const auto& n : split.negatives) {
      double best = 0.0;
      for (const auto& p : split.positives) {
        const double v = identity.identity(n, p);
        best = std::max(best, v);
        if (options.histograms) ++cross.all_vs_all[identity_bin(v, options.bins)];
      }
      if (t_c > 0.0 && best < t_c) report.anchor_failures.push_back(n);
      if (options.histograms && !split.positives.empty()) ++cross.maximum[identity_bin(best, options.bins)];
    }
  }
  if (options.histograms) report.histograms.push_back(std::move(cross));
  std::sort(report.anchor_failures.begin(), report.anchor_failures.end());
  return report;
}

HistogramSet identity_histograms(const std::vector<std::string>& set_a, const std::vector<std::string>& set_b,
                                 const IdentitySource& identity, std::size_t bins, std::string name_a,
                                 std::string name_b) {
  auto h = empty_histogram(std::move(name_a), std::move(name_b), bins);
  for (const auto& a : set_a) {
    double best = 0.0;
    for (const auto& b : set_b) {
      if (a == b) continue;
      const double v = identity.identity(a, b);
      ++h.all_vs_all[identity_bin(v, bins)];
      best = std::max(best, v);
    }
    ++h.maximum[identity_bin(best, bins)];
  }
  return h;
}

std::vector<std::string> readd_counterexamples(const Partition& partition, const IdentitySource& identity) {
  check_decidable(partition.thresholds, identity);
  std::vector<std::string> out;
  for (const auto& rec : partition.removed) {
    if (rec.restored) continue;
    const auto m = members(partition, rec.label);
    const bool blocked = std::any_of(m.begin(), m.end(), [&](const Member& x) {
      return x.split != rec.split && identity.identity(rec.id, *x.id) > partition.thresholds.t_s;
    });
    if (!blocked) out.push_back(rec.id);
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::string_view to_string(Verdict verdict) {
  switch (verdict) {
    case Verdict::train_harder: return "train_harder";
    case Verdict::test_harder: return "test_harder";
    case Verdict::no_sig: return "no_sig";
  }
  return "unknown";
}

DifficultyResult difficulty_compare(const Split& train, const Split& test, const IdentitySource& identity,
                                    double alpha) {
  auto profile = [&](const Split& s, const char* name) {
    if (s.positives.empty() || s.negatives.empty()) {
      throw InputError(std::string(name) + " set needs both positives and negatives");
    }
    std::vector<double> out;
    for (const auto& n : s.negatives) {
      double best = 0.0;
      for (const auto& p : s.positives) best = std::max(best, identity.identity(n, p));
      out.push_back(best);
    }
    return out;
  };
  DifficultyResult r;
  r.train_profile = profile(train, "training");
  r.test_profile = profile(test, "test");
  r.test = mann_whitney_u(r.train_profile, r.test_profile, true);
  r.train_median = median(r.train_profile);
  r.test_median = median(r.test_profile);
  if (r.test.p_value < alpha) {
    double shift = r.train_median - r.test_median;
    if (shift == 0.0) {
      shift = r.test.statistic -
              static_cast<double>(r.train_profile.size()) * static_cast<double>(r.test_profile.size()) / 2.0;
    }
    if (shift > 0) r.verdict = Verdict::train_harder;
    if (shift < 0) r.verdict = Verdict::test_harder;
  }
  return r;
}

void write_histogram_csv(std::ostream& out, const HistogramSet& h) {
  out << "bin_lo,bin_hi,all_vs_all,maximum\n";
  for (std::size_t i = 0; i + 1 < h.edges.size(); ++i) {
    out << format_double(h.edges[i]) << ',' << format_double(h.edges[i + 1]) << ',' << h.all_vs_all[i] << ','
        << h.maximum[i] << '\n';
  }
}

}  // namespace homopart
