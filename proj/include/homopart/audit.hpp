#pragma once

#include <cstddef>
#include <iosfwd>
#include <string>
#include <vector>

#include "homopart/identity_source.hpp"
#include "homopart/partition.hpp"
#include "homopart/stats.hpp"

namespace homopart {

struct Violation {
  std::string id_a;
  std::size_t split_a = 0;
  std::string id_b;
  std::size_t split_b = 0;
  Label label = Label::positive;
  double identity = 0.0;

  bool operator==(const Violation&) const = default;
};

/// Identity distribution between two sets: every contributing pair, and the
/// per-sequence maximum.
struct HistogramSet {
  std::string set_a;
  std::string set_b;
  std::vector<double> edges;  // bins + 1 values from 0 to 1
  std::vector<std::size_t> all_vs_all;
  std::vector<std::size_t> maximum;
};

/// Bin of an identity among `bins` uniform bins over [0, 1]; 1.0 falls in
/// the last bin. Identities are compared on their 1e-6 grid so that values
/// on an edge land in the bin that starts there.
std::size_t identity_bin(double identity, std::size_t bins);

struct ViolationReport {
  Thresholds thresholds;
  std::vector<Violation> violations;
  std::vector<std::string> anchor_failures;
  std::vector<HistogramSet> histograms;

  bool passes() const { return violations.empty() && anchor_failures.empty(); }
};

struct AuditOptions {
  std::size_t bins = 50;
  bool histograms = true;
};

/// Exhaustive check of every same-class cross-split pair against t_s and of
/// every negative's in-split anchor against t_c. Histograms cover positive
/// inter-split, negative inter-split and inter-class in-split identities.
ViolationReport audit_partition(const Partition& partition, const IdentitySource& identity,
                                const AuditOptions& options = {});

/// All-vs-all over every (a, b) with a != b, and each a's maximum over b.
HistogramSet identity_histograms(const std::vector<std::string>& set_a, const std::vector<std::string>& set_b,
                                 const IdentitySource& identity, std::size_t bins, std::string name_a = "A",
                                 std::string name_b = "B");

/// Unrestored removed sequences that could be put back into their split
/// without a violation. Empty when re-addition was greedily maximal.
std::vector<std::string> readd_counterexamples(const Partition& partition, const IdentitySource& identity);

enum class Verdict { train_harder, test_harder, no_sig };

std::string_view to_string(Verdict verdict);

struct DifficultyResult {
  Verdict verdict = Verdict::no_sig;
  TestResult test;  // two-sided Mann-Whitney U, train profile as x
  std::vector<double> train_profile;
  std::vector<double> test_profile;
  double train_median = 0.0;
  double test_median = 0.0;
};

/// Compares the per-negative maximum identity to in-set positives. The set
/// whose profile is significantly higher (by median, then by U) is harder.
DifficultyResult difficulty_compare(const Split& train, const Split& test, const IdentitySource& identity,
                                    double alpha);

/// CSV `bin_lo,bin_hi,all_vs_all,maximum`.
void write_histogram_csv(std::ostream& out, const HistogramSet& histogram);

}  // namespace homopart
