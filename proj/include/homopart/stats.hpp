#pragma once

#include <cstddef>
#include <iosfwd>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace homopart {

struct TestResult {
  double statistic = 0.0;
  double p_value = 1.0;
};

/// Average ranks (1-based, ascending values); ties share their mean rank.
std::vector<double> midranks(const std::vector<double>& values);

/// D = sup |F_x - F_y|; p from the asymptotic Kolmogorov distribution at
/// sqrt(n_x n_y / (n_x + n_y)) * D.
TestResult ks_two_sample(const std::vector<double>& x, const std::vector<double>& y);

/// Samples up to this size without ties get an exact Mann-Whitney p-value.
inline constexpr std::size_t kMwuExactMax = 20;

/// U = #{x_i > y_j} + #{x_i = y_j} / 2. The p-value is exact for small
/// untied samples (see kMwuExactMax) and otherwise a normal approximation
/// with tie and continuity corrections. The one-sided alternative is "x
/// tends to exceed y".
TestResult mann_whitney_u(const std::vector<double>& x, const std::vector<double>& y, bool two_sided = true);

/// Zero differences are dropped and |a - b| ranked with midranks; the
/// statistic is min(W+, W-). The p-value is exact for up to 25 untied
/// differences and a tie-corrected normal approximation (with continuity
/// correction) otherwise. The one-sided alternative is "a tends to exceed b".
TestResult wilcoxon_signed_rank(const std::vector<std::pair<double, double>>& pairs, bool two_sided = true);

/// min(1, p * m), m defaulting to the number of p-values.
std::vector<double> bonferroni(const std::vector<double>& p_values, std::optional<std::size_t> m = std::nullopt);

/// Scores of k models on N datasets; higher is better.
struct RankTable {
  std::vector<std::string> models;
  std::vector<std::string> datasets;
  std::vector<std::vector<double>> values;  // values[dataset][model]

  void validate() const;
};

/// CSV: a header row whose first cell is ignored followed by model names,
/// then one row per dataset starting with its name.
RankTable read_rank_table(std::istream& in);

/// Per-dataset ranks, 1 for the best model, midranks on ties.
std::vector<std::vector<double>> model_ranks(const RankTable& table);

/// chi2 = 12 / (N k (k + 1)) * sum_j R_j^2 - 3 N (k + 1) over rank sums R_j,
/// without a tie correction; p from chi-square with k - 1 degrees of freedom.
TestResult friedman(const RankTable& table);

/// Critical values q_alpha(k) of the Nemenyi test (studentized range over
/// sqrt(2)) for k = 2..20 and alpha 0.05 or 0.01.
double nemenyi_q(std::size_t k, double alpha);

struct NemenyiResult {
  double critical_difference = 0.0;
  std::vector<double> average_ranks;
  /// Model index pairs (i < j) whose average ranks differ by more than CD.
  std::vector<std::pair<std::size_t, std::size_t>> significant;
};

NemenyiResult nemenyi(const RankTable& table, double alpha);

struct Correlation {
  double coefficient = 0.0;
  double p_value = 1.0;  // two-sided, t distribution with n - 2 df
};

Correlation pearson(const std::vector<double>& x, const std::vector<double>& y);
/// Pearson correlation of the midranks.
Correlation spearman(const std::vector<double>& x, const std::vector<double>& y);

}  // namespace homopart
