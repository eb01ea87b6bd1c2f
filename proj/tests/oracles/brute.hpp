#pragma once

// Brute-force definitions used as test oracles. Quadratic or exponential on
// purpose; none of them shares code with the library.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <utility>
#include <vector>

namespace oracle {

// P(score of a positive > score of a negative), ties 1/2, over all pairs.
inline double auroc_pairs(const std::vector<double>& pos, const std::vector<double>& neg) {
  double wins = 0;
  for (double p : pos) {
    for (double n : neg) wins += p > n ? 1.0 : (p == n ? 0.5 : 0.0);
  }
  return wins / (static_cast<double>(pos.size()) * static_cast<double>(neg.size()));
}

inline double mwu_pairs(const std::vector<double>& x, const std::vector<double>& y) {
  double u = 0;
  for (double a : x) {
    for (double b : y) u += a > b ? 1.0 : (a == b ? 0.5 : 0.0);
  }
  return u;
}

// sup |F_x - F_y| evaluated at every sample point, ECDFs by counting.
inline double ks_scan(const std::vector<double>& x, const std::vector<double>& y) {
  std::vector<double> points = x;
  points.insert(points.end(), y.begin(), y.end());
  double d = 0;
  for (double t : points) {
    double cx = 0, cy = 0;
    for (double v : x) cx += v <= t;
    for (double v : y) cy += v <= t;
    d = std::max(d, std::abs(cx / static_cast<double>(x.size()) - cy / static_cast<double>(y.size())));
  }
  return d;
}

// Rank of values[i] among values: 1 + #smaller + #equal-others / 2.
inline std::vector<double> midranks_count(const std::vector<double>& v) {
  std::vector<double> r(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) {
    double smaller = 0, equal = 0;
    for (std::size_t j = 0; j < v.size(); ++j) {
      if (j == i) continue;
      smaller += v[j] < v[i];
      equal += v[j] == v[i];
    }
    r[i] = 1 + smaller + equal / 2;
  }
  return r;
}

struct EnumeratedWilcoxon {
  double w = 0;
  double p_two_sided = 0;
  double p_greater = 0;  // P(W+ >= observed W+)
};

// Enumerates all 2^n sign assignments of the ranks 1..n of |d|.
// Differences must be nonzero with distinct magnitudes.
inline EnumeratedWilcoxon wilcoxon_enumerate(const std::vector<double>& d) {
  const std::size_t n = d.size();
  std::vector<double> mags;
  for (double v : d) mags.push_back(std::abs(v));
  const auto ranks = midranks_count(mags);
  double w_plus = 0, total = 0;
  for (std::size_t i = 0; i < n; ++i) {
    total += ranks[i];
    if (d[i] > 0) w_plus += ranks[i];
  }
  const double w = std::min(w_plus, total - w_plus);
  std::uint64_t extreme = 0, greater = 0;
  for (std::uint64_t mask = 0; mask < (1ULL << n); ++mask) {
    double s = 0;
    for (std::size_t i = 0; i < n; ++i) {
      if (mask >> i & 1) s += ranks[i];
    }
    if (std::min(s, total - s) <= w) ++extreme;
    if (s >= w_plus) ++greater;
  }
  const double all = static_cast<double>(1ULL << n);
  return {w, extreme / all, greater / all};
}

// Friedman chi-square from ranks computed by counting; higher value = rank 1.
inline double friedman_statistic(const std::vector<std::vector<double>>& values) {
  const std::size_t n = values.size(), k = values.front().size();
  std::vector<double> sums(k, 0.0);
  for (const auto& row : values) {
    for (std::size_t j = 0; j < k; ++j) {
      double better = 0, equal = 0;
      for (std::size_t l = 0; l < k; ++l) {
        if (l == j) continue;
        better += row[l] > row[j];
        equal += row[l] == row[j];
      }
      sums[j] += 1 + better + equal / 2;
    }
  }
  const double nd = static_cast<double>(n), kd = static_cast<double>(k);
  double ss = 0;
  for (double r : sums) ss += (r - nd * (kd + 1) / 2) * (r - nd * (kd + 1) / 2);
  return 12.0 / (nd * kd * (kd + 1)) * ss;
}

inline double pearson_plain(const std::vector<double>& x, const std::vector<double>& y) {
  const double n = static_cast<double>(x.size());
  double mx = 0, my = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += x[i] / n;
    my += y[i] / n;
  }
  double sxy = 0, sxx = 0, syy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxy += (x[i] - mx) * (y[i] - my);
    sxx += (x[i] - mx) * (x[i] - mx);
    syy += (y[i] - my) * (y[i] - my);
  }
  return sxy / std::sqrt(sxx * syy);
}

}  // namespace oracle
