#include "homopart/stats.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <istream>
#include <numbers>
#include <numeric>

#include <boost/math/distributions/chi_squared.hpp>
#include <boost/math/distributions/normal.hpp>
#include <boost/math/distributions/students_t.hpp>

#include "homopart/error.hpp"
#include "homopart/format.hpp"

namespace homopart {

namespace {

void require_nonempty(const std::vector<double>& v, const char* name) {
  if (v.empty()) throw InputError(std::string("sample ") + name + " is empty");
  for (double x : v) {
    if (!std::isfinite(x)) throw InputError(std::string("sample ") + name + " contains a non-finite value");
  }
}

double normal_sf(double z) { return boost::math::cdf(boost::math::complement(boost::math::normal(), z)); }

// Sum of t^3 - t over tie groups of `values`.
double tie_term(std::vector<double> values) {
  std::sort(values.begin(), values.end());
  double sum = 0;
  for (std::size_t i = 0; i < values.size();) {
    std::size_t j = i;
    while (j < values.size() && values[j] == values[i]) ++j;
    const double t = static_cast<double>(j - i);
    sum += t * t * t - t;
    i = j;
  }
  return sum;
}

// P(K > lambda) for the Kolmogorov distribution.
double kolmogorov_sf(double lambda) {
  if (lambda <= 0.0) return 1.0;
  if (lambda < 1.18) {
    // Small-argument series of the CDF converges faster.
    const double pi2 = std::numbers::pi * std::numbers::pi;
    double cdf = 0;
    for (int k = 1; k <= 20; ++k) {
      const double m = 2.0 * k - 1.0;
      cdf += std::exp(-m * m * pi2 / (8.0 * lambda * lambda));
    }
    cdf *= std::sqrt(2.0 * std::numbers::pi) / lambda;
    return std::clamp(1.0 - cdf, 0.0, 1.0);
  }
  double sf = 0;
  for (int k = 1; k <= 100; ++k) {
    const double term = std::exp(-2.0 * k * k * lambda * lambda);
    sf += (k % 2 == 1 ? 2.0 : -2.0) * term;
    if (term < 1e-17) break;
  }
  return std::clamp(sf, 0.0, 1.0);
}

// Number of interleavings of n1 x-values and n2 y-values (no ties) for each
// value of U, built by whether the largest element is an x or a y.
std::vector<double> mwu_counts(std::size_t n1, std::size_t n2) {
  const std::size_t width = n1 * n2 + 1;
  std::vector<std::vector<double>> prev(n2 + 1, std::vector<double>(width, 0.0));
  for (auto& row : prev) row[0] = 1;  // no x values: U = 0
  for (std::size_t i = 1; i <= n1; ++i) {
    std::vector<std::vector<double>> cur(n2 + 1, std::vector<double>(width, 0.0));
    cur[0][0] = 1;
    for (std::size_t j = 1; j <= n2; ++j) {
      for (std::size_t u = 0; u < width; ++u) {
        cur[j][u] = cur[j - 1][u] + (u >= j ? prev[j][u - j] : 0.0);
      }
    }
    prev = std::move(cur);
  }
  return prev[n2];
}

}  // namespace

std::vector<double> midranks(const std::vector<double>& values) {
  std::vector<std::size_t> order(values.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return values[a] < values[b]; });
  std::vector<double> ranks(values.size());
  for (std::size_t i = 0; i < order.size();) {
    std::size_t j = i;
    while (j < order.size() && values[order[j]] == values[order[i]]) ++j;
    const double r = (static_cast<double>(i + 1) + static_cast<double>(j)) / 2.0;
    for (std::size_t t = i; t < j; ++t) ranks[order[t]] = r;
    i = j;
  }
  return ranks;
}

TestResult ks_two_sample(const std::vector<double>& x, const std::vector<double>& y) {
  require_nonempty(x, "x");
  require_nonempty(y, "y");
  auto a = x, b = y;
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  const double na = static_cast<double>(a.size());
  const double nb = static_cast<double>(b.size());
  double d = 0;
  std::size_t i = 0, j = 0;
  while (i < a.size() && j < b.size()) {
    const double v = std::min(a[i], b[j]);
    while (i < a.size() && a[i] == v) ++i;
    while (j < b.size() && b[j] == v) ++j;
    d = std::max(d, std::abs(static_cast<double>(i) / na - static_cast<double>(j) / nb));
  }
  // Past the end of either sample the other ECDF only moves towards 1.
  d = std::max(d, std::abs(static_cast<double>(i) / na - static_cast<double>(j) / nb));
  const double ne = na * nb / (na + nb);
  return {d, kolmogorov_sf(std::sqrt(ne) * d)};
}

TestResult mann_whitney_u(const std::vector<double>& x, const std::vector<double>& y, bool two_sided) {
  require_nonempty(x, "x");
  require_nonempty(y, "y");
  std::vector<double> all = x;
  all.insert(all.end(), y.begin(), y.end());
  const auto ranks = midranks(all);
  const double n1 = static_cast<double>(x.size());
  const double n2 = static_cast<double>(y.size());
  const double n = n1 + n2;
  const double r1 = std::accumulate(ranks.begin(), ranks.begin() + static_cast<std::ptrdiff_t>(x.size()), 0.0);
  const double u = r1 - n1 * (n1 + 1) / 2.0;

  if (x.size() <= kMwuExactMax && y.size() <= kMwuExactMax && tie_term(all) == 0) {
    const auto counts = mwu_counts(x.size(), y.size());
    double total = 0, below = 0, above = 0;  // P(U <= u), P(U >= u) numerators
    for (std::size_t v = 0; v < counts.size(); ++v) {
      total += counts[v];
      if (static_cast<double>(v) <= u) below += counts[v];
      if (static_cast<double>(v) >= u) above += counts[v];
    }
    if (two_sided) return {u, std::min(1.0, 2.0 * std::min(below, above) / total)};
    return {u, above / total};
  }

  const double mean = n1 * n2 / 2.0;
  const double var = n1 * n2 / 12.0 * ((n + 1) - tie_term(all) / (n * (n - 1)));
  if (var <= 0) return {u, 1.0};
  const double sd = std::sqrt(var);
  if (two_sided) {
    const double z = std::max(0.0, std::abs(u - mean) - 0.5) / sd;
    return {u, std::min(1.0, 2.0 * normal_sf(z))};
  }
  return {u, normal_sf((u - mean - 0.5) / sd)};
}

TestResult wilcoxon_signed_rank(const std::vector<std::pair<double, double>>& pairs, bool two_sided) {
  std::vector<double> diff;
  for (const auto& [a, b] : pairs) {
    if (!std::isfinite(a) || !std::isfinite(b)) throw InputError("non-finite value in paired sample");
    if (a != b) diff.push_back(a - b);
  }
  if (diff.empty()) throw InputError("all paired differences are zero");
  const std::size_t n = diff.size();
  std::vector<double> mags;
  for (double d : diff) mags.push_back(std::abs(d));
  const auto ranks = midranks(mags);
  double w_plus = 0, w_minus = 0;
  for (std::size_t i = 0; i < n; ++i) (diff[i] > 0 ? w_plus : w_minus) += ranks[i];
  const double w = std::min(w_plus, w_minus);
  const double total = static_cast<double>(n * (n + 1)) / 2.0;
  const double ties = tie_term(mags);

  if (n <= 25 && ties == 0) {
    // counts[s] = number of sign assignments with W+ = s
    const std::size_t max_sum = n * (n + 1) / 2;
    std::vector<double> counts(max_sum + 1, 0.0);
    counts[0] = 1;
    for (std::size_t r = 1; r <= n; ++r) {
      for (std::size_t s = max_sum; s >= r; --s) counts[s] += counts[s - r];
    }
    const double all = std::ldexp(1.0, static_cast<int>(n));
    auto cdf = [&](double v) {  // P(W+ <= v)
      double c = 0;
      for (std::size_t s = 0; s <= max_sum && static_cast<double>(s) <= v; ++s) c += counts[s];
      return c / all;
    };
    if (two_sided) return {w, std::min(1.0, 2.0 * cdf(w))};
    return {w, cdf(total - w_plus)};  // P(W+ >= observed), by symmetry
  }

  const double nd = static_cast<double>(n);
  const double mean = nd * (nd + 1) / 4.0;
  const double var = nd * (nd + 1) * (2 * nd + 1) / 24.0 - ties / 48.0;
  if (var <= 0) return {w, 1.0};
  const double sd = std::sqrt(var);
  if (two_sided) {
    const double z = std::max(0.0, std::abs(w_plus - mean) - 0.5) / sd;
    return {w, std::min(1.0, 2.0 * normal_sf(z))};
  }
  return {w, normal_sf((w_plus - mean - 0.5) / sd)};
}

std::vector<double> bonferroni(const std::vector<double>& p_values, std::optional<std::size_t> m) {
  const double factor = static_cast<double>(m.value_or(p_values.size()));
  if (factor < 1) throw InputError("Bonferroni count must be at least 1");
  std::vector<double> out;
  for (double p : p_values) {
    if (!(p >= 0.0 && p <= 1.0)) throw InputError("p-value " + format_double(p) + " outside [0, 1]");
    out.push_back(std::min(1.0, p * factor));
  }
  return out;
}

void RankTable::validate() const {
  if (models.size() < 2) throw InputError("rank table needs at least two models");
  if (datasets.size() < 2) throw InputError("rank table needs at least two datasets");
  if (values.size() != datasets.size()) throw InputError("rank table row count does not match datasets");
  for (std::size_t r = 0; r < values.size(); ++r) {
    if (values[r].size() != models.size()) {
      throw InputError("rank table row '" + datasets[r] + "' does not have one value per model");
    }
    for (double v : values[r]) {
      if (!std::isfinite(v)) throw InputError("rank table row '" + datasets[r] + "' has a non-finite value");
    }
  }
}

RankTable read_rank_table(std::istream& in) {
  auto cells = [](const std::string& line) {
    std::vector<std::string> out;
    std::size_t start = 0;
    while (true) {
      const auto pos = line.find(',', start);
      out.push_back(line.substr(start, pos == std::string::npos ? std::string::npos : pos - start));
      if (pos == std::string::npos) break;
      start = pos + 1;
    }
    return out;
  };
  std::string line;
  RankTable table;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    auto row = cells(line);
    if (table.models.empty()) {
      table.models.assign(row.begin() + 1, row.end());
      if (table.models.empty()) throw InputError("rank table header has no model names");
      continue;
    }
    if (row.size() != table.models.size() + 1) {
      throw InputError("rank table line " + std::to_string(line_no) + ": expected " +
                       std::to_string(table.models.size() + 1) + " cells");
    }
    table.datasets.push_back(row[0]);
    auto& values = table.values.emplace_back();
    for (std::size_t c = 1; c < row.size(); ++c) {
      try {
        values.push_back(parse_double(row[c]));
      } catch (const InputError& e) {
        throw InputError("rank table line " + std::to_string(line_no) + ": " + e.what());
      }
    }
  }
  table.validate();
  return table;
}

std::vector<std::vector<double>> model_ranks(const RankTable& table) {
  table.validate();
  std::vector<std::vector<double>> out;
  for (const auto& row : table.values) {
    std::vector<double> negated;
    for (double v : row) negated.push_back(-v);
    out.push_back(midranks(negated));
  }
  return out;
}

TestResult friedman(const RankTable& table) {
  const auto ranks = model_ranks(table);
  const double k = static_cast<double>(table.models.size());
  const double n = static_cast<double>(table.datasets.size());
  double sum_sq = 0;
  for (std::size_t j = 0; j < table.models.size(); ++j) {
    double r = 0;
    for (const auto& row : ranks) r += row[j];
    sum_sq += r * r;
  }
  const double chi2 = std::max(0.0, 12.0 / (n * k * (k + 1)) * sum_sq - 3.0 * n * (k + 1));
  const boost::math::chi_squared dist(k - 1);
  return {chi2, boost::math::cdf(boost::math::complement(dist, chi2))};
}

double nemenyi_q(std::size_t k, double alpha) {
  // Studentized range quantiles divided by sqrt(2), infinite degrees of freedom.
  static constexpr std::array<double, 19> q05 = {1.959964, 2.343701, 2.569032, 2.727774, 2.849705,
                                                 2.948320, 3.030878, 3.101730, 3.163684, 3.218654,
                                                 3.268004, 3.312739, 3.353618, 3.391230, 3.426041,
                                                 3.458425, 3.488685, 3.517073, 3.543799};
  static constexpr std::array<double, 19> q01 = {2.575829, 2.913494, 3.113250, 3.254686, 3.363740,
                                                 3.452213, 3.526471, 3.590339, 3.646292, 3.696021,
                                                 3.740733, 3.781318, 3.818451, 3.852654, 3.884343,
                                                 3.913850, 3.941446, 3.967357, 3.991770};
  if (k < 2 || k > 20) throw InputError("Nemenyi critical values cover 2 to 20 models, got " + std::to_string(k));
  if (alpha == 0.05) return q05[k - 2];
  if (alpha == 0.01) return q01[k - 2];
  throw InputError("alpha must be 0.05 or 0.01");
}

NemenyiResult nemenyi(const RankTable& table, double alpha) {
  const auto ranks = model_ranks(table);
  const std::size_t k = table.models.size();
  const double n = static_cast<double>(table.datasets.size());
  const double kd = static_cast<double>(k);
  NemenyiResult out;
  out.critical_difference = nemenyi_q(k, alpha) * std::sqrt(kd * (kd + 1) / (6.0 * n));
  out.average_ranks.assign(k, 0.0);
  for (const auto& row : ranks) {
    for (std::size_t j = 0; j < k; ++j) out.average_ranks[j] += row[j];
  }
  for (auto& r : out.average_ranks) r /= n;
  for (std::size_t i = 0; i < k; ++i) {
    for (std::size_t j = i + 1; j < k; ++j) {
      if (std::abs(out.average_ranks[i] - out.average_ranks[j]) > out.critical_difference) {
        out.significant.emplace_back(i, j);
      }
    }
  }
  return out;
}

Correlation pearson(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size()) throw InputError("correlation needs samples of equal length");
  if (x.size() < 3) throw InputError("correlation needs at least three points");
  require_nonempty(x, "x");
  require_nonempty(y, "y");
  const double n = static_cast<double>(x.size());
  const double mx = std::accumulate(x.begin(), x.end(), 0.0) / n;
  const double my = std::accumulate(y.begin(), y.end(), 0.0) / n;
  double sxy = 0, sxx = 0, syy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxy += (x[i] - mx) * (y[i] - my);
    sxx += (x[i] - mx) * (x[i] - mx);
    syy += (y[i] - my) * (y[i] - my);
  }
  if (sxx == 0 || syy == 0) throw InputError("correlation is undefined for a constant sample");
  const double r = std::clamp(sxy / std::sqrt(sxx * syy), -1.0, 1.0);
  if (std::abs(r) == 1.0) return {r, 0.0};
  const double t = r * std::sqrt((n - 2) / (1 - r * r));
  const boost::math::students_t dist(n - 2);
  return {r, std::min(1.0, 2.0 * boost::math::cdf(boost::math::complement(dist, std::abs(t))))};
}

Correlation spearman(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size()) throw InputError("correlation needs samples of equal length");
  require_nonempty(x, "x");
  require_nonempty(y, "y");
  return pearson(midranks(x), midranks(y));
}

}  // namespace homopart
