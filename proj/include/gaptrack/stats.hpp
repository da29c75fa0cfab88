#pragma once

// The statistical battery run over per-category change-point steps:
// Pearson/Spearman correlation, one-way ANOVA, two-sample t-tests
// (Welch by default) and tie-corrected Kruskal-Wallis.

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>
#include <vector>

#include "gaptrack/errors.hpp"
#include "gaptrack/special_functions.hpp"

namespace gaptrack {

struct Group {
  std::string name;
  std::vector<double> values;
};

using GroupedSamples = std::vector<Group>;

// statistic plus degrees of freedom and a two-sided or upper-tail p-value,
// depending on the test. df2 is used by ANOVA only.
struct TestResult {
  double statistic = 0.0;
  double df1 = 0.0;
  double df2 = 0.0;
  double p_value = 1.0;
};

namespace detail {

inline double sample_mean(const std::vector<double>& xs) {
  if (xs.empty()) throw ValidationError("mean of empty sample");
  return std::accumulate(xs.begin(), xs.end(), 0.0) / static_cast<double>(xs.size());
}

// Unbiased (n-1) variance.
inline double sample_variance(const std::vector<double>& xs) {
  if (xs.size() < 2) throw ValidationError("variance needs at least 2 values");
  const double m = sample_mean(xs);
  double s = 0.0;
  for (double x : xs) s += (x - m) * (x - m);
  return s / static_cast<double>(xs.size() - 1);
}

// Average (fractional) ranks, 1-based; tied values share the mean of the
// positions they occupy.
inline std::vector<double> average_ranks(const std::vector<double>& xs) {
  const std::size_t n = xs.size();
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(),
            [&xs](std::size_t a, std::size_t b) { return xs[a] < xs[b]; });
  std::vector<double> ranks(n, 0.0);
  std::size_t i = 0;
  while (i < n) {
    std::size_t j = i;
    while (j + 1 < n && xs[order[j + 1]] == xs[order[i]]) ++j;
    const double avg = 0.5 * static_cast<double>(i + j) + 1.0;
    for (std::size_t k = i; k <= j; ++k) ranks[order[k]] = avg;
    i = j + 1;
  }
  return ranks;
}

inline void validate_groups(const GroupedSamples& groups, const char* who) {
  if (groups.size() < 2) {
    throw ValidationError(std::string(who) + ": need at least 2 groups");
  }
  for (const auto& g : groups) {
    if (g.values.empty()) {
      throw ValidationError(std::string(who) + ": group '" + g.name + "' is empty");
    }
    for (double v : g.values) {
      if (!std::isfinite(v)) {
        throw ValidationError(std::string(who) + ": non-finite value in group '" +
                              g.name + "'");
      }
    }
  }
}

}  // namespace detail

// Sample Pearson correlation coefficient.
inline double pearson(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size()) throw ValidationError("pearson: length mismatch");
  if (x.size() < 3) throw ValidationError("pearson: need at least 3 points");
  const double mx = detail::sample_mean(x);
  const double my = detail::sample_mean(y);
  double sxy = 0.0, sxx = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxy += (x[i] - mx) * (y[i] - my);
    sxx += (x[i] - mx) * (x[i] - mx);
    syy += (y[i] - my) * (y[i] - my);
  }
  if (sxx == 0.0 || syy == 0.0) {
    throw ValidationError("pearson: correlation undefined for constant input");
  }
  const double r = sxy / std::sqrt(sxx * syy);
  return std::clamp(r, -1.0, 1.0);
}

// Pearson correlation of the average-rank vectors.
inline double spearman(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size()) throw ValidationError("spearman: length mismatch");
  if (x.size() < 3) throw ValidationError("spearman: need at least 3 points");
  return pearson(detail::average_ranks(x), detail::average_ranks(y));
}

// One-way ANOVA: F = MS_between / MS_within with df (k-1, N-k), upper-tail p.
inline TestResult one_way_anova(const GroupedSamples& groups) {
  detail::validate_groups(groups, "one_way_anova");
  const std::size_t k = groups.size();
  std::size_t n_total = 0;
  double grand_sum = 0.0;
  for (const auto& g : groups) {
    n_total += g.values.size();
    grand_sum = std::accumulate(g.values.begin(), g.values.end(), grand_sum);
  }
  if (n_total <= k) throw ValidationError("one_way_anova: need more values than groups");
  const double grand_mean = grand_sum / static_cast<double>(n_total);

  double ssb = 0.0, ssw = 0.0;
  for (const auto& g : groups) {
    const double gm = detail::sample_mean(g.values);
    ssb += static_cast<double>(g.values.size()) * (gm - grand_mean) * (gm - grand_mean);
    for (double v : g.values) ssw += (v - gm) * (v - gm);
  }
  TestResult r;
  r.df1 = static_cast<double>(k - 1);
  r.df2 = static_cast<double>(n_total - k);
  if (ssw == 0.0 && ssb == 0.0) {
    throw ValidationError("one_way_anova: F undefined, no variance anywhere");
  }
  if (ssw == 0.0) {
    r.statistic = std::numeric_limits<double>::infinity();
    r.p_value = 0.0;
    return r;
  }
  r.statistic = (ssb / r.df1) / (ssw / r.df2);
  r.p_value = fisher_f_sf(r.statistic, r.df1, r.df2);
  return r;
}

// Two-sample t-test, two-sided. Welch statistic and Welch-Satterthwaite df
// by default; classic pooled-variance test behind the flag.
inline TestResult two_sample_t(const std::vector<double>& a, const std::vector<double>& b,
                               bool pooled = false) {
  if (a.size() < 2 || b.size() < 2) {
    throw ValidationError("two_sample_t: each sample needs at least 2 values");
  }
  const double na = static_cast<double>(a.size());
  const double nb = static_cast<double>(b.size());
  const double ma = detail::sample_mean(a);
  const double mb = detail::sample_mean(b);
  const double va = detail::sample_variance(a);
  const double vb = detail::sample_variance(b);

  TestResult r;
  if (va == 0.0 && vb == 0.0) {
    if (ma == mb) throw ValidationError("two_sample_t: t undefined, zero variance and equal means");
    r.statistic = ma > mb ? std::numeric_limits<double>::infinity()
                          : -std::numeric_limits<double>::infinity();
    r.df1 = na + nb - 2.0;
    r.p_value = 0.0;
    return r;
  }
  if (pooled) {
    const double sp2 = ((na - 1.0) * va + (nb - 1.0) * vb) / (na + nb - 2.0);
    r.statistic = (ma - mb) / std::sqrt(sp2 * (1.0 / na + 1.0 / nb));
    r.df1 = na + nb - 2.0;
  } else {
    const double wa = va / na;
    const double wb = vb / nb;
    r.statistic = (ma - mb) / std::sqrt(wa + wb);
    r.df1 = (wa + wb) * (wa + wb) /
            (wa * wa / (na - 1.0) + wb * wb / (nb - 1.0));
  }
  r.p_value = 2.0 * student_t_sf(std::abs(r.statistic), r.df1);
  return r;
}

// Kruskal-Wallis H with tie correction, p from chi-square with k-1 df.
inline TestResult kruskal_wallis(const GroupedSamples& groups) {
  detail::validate_groups(groups, "kruskal_wallis");
  const std::size_t k = groups.size();
  std::vector<double> pooled;
  for (const auto& g : groups) {
    pooled.insert(pooled.end(), g.values.begin(), g.values.end());
  }
  const std::size_t n = pooled.size();
  if (n < 5) throw ValidationError("kruskal_wallis: need at least 5 values in total");

  const std::vector<double> ranks = detail::average_ranks(pooled);
  TestResult r;
  r.df1 = static_cast<double>(k - 1);

  double h = 0.0;
  std::size_t offset = 0;
  for (const auto& g : groups) {
    double rank_sum = 0.0;
    for (std::size_t i = 0; i < g.values.size(); ++i) rank_sum += ranks[offset + i];
    offset += g.values.size();
    h += rank_sum * rank_sum / static_cast<double>(g.values.size());
  }
  const double dn = static_cast<double>(n);
  h = 12.0 / (dn * (dn + 1.0)) * h - 3.0 * (dn + 1.0);

  // Tie correction: 1 - sum(t^3 - t) / (N^3 - N) over tie groups.
  std::vector<double> sorted = pooled;
  std::sort(sorted.begin(), sorted.end());
  double tie_sum = 0.0;
  std::size_t i = 0;
  while (i < n) {
    std::size_t j = i;
    while (j + 1 < n && sorted[j + 1] == sorted[i]) ++j;
    const double t = static_cast<double>(j - i + 1);
    tie_sum += t * t * t - t;
    i = j + 1;
  }
  const double correction = 1.0 - tie_sum / (dn * dn * dn - dn);
  if (correction <= 0.0) {
    // Every value identical: no evidence of any group difference.
    r.statistic = 0.0;
    r.p_value = 1.0;
    return r;
  }
  r.statistic = h / correction;
  if (r.statistic < 0.0 && r.statistic > -1e-12) r.statistic = 0.0;
  r.p_value = chi_square_sf(r.statistic, r.df1);
  return r;
}

}  // namespace gaptrack
