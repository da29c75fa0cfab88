#pragma once

// Minimal-pair trajectory analysis: perplexity, pair accuracy, the
// log-perplexity gap signal across training checkpoints, early/late
// segment means and the four-way trajectory taxonomy.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <map>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "gaptrack/errors.hpp"

namespace gaptrack {

// Mean-per-token NLL (nats/token) of one good/bad sentence pair at one
// checkpoint. Token counts are kept so the sentence-total NLL stays
// recoverable.
struct PairScore {
  std::string class_name;
  std::int64_t pair_id = 0;
  std::int64_t checkpoint_step = 0;
  double nll_good = 0.0;
  std::int64_t n_tokens_good = 1;
  double nll_bad = 0.0;
  std::int64_t n_tokens_bad = 1;
};

// The per-class gap signal: one delta value per checkpoint, steps ascending.
struct GapSeries {
  std::string class_name;
  std::vector<std::int64_t> steps;
  std::vector<double> gaps;

  std::size_t size() const { return steps.size(); }
};

struct SegmentMeans {
  double early_mean = 0.0;
  double late_mean = 0.0;
  std::size_t n_early = 0;
  std::size_t n_late = 0;
};

enum class TrajectoryCategory { EES, CES, CLS, ELS };

inline const char* to_string(TrajectoryCategory c) {
  switch (c) {
    case TrajectoryCategory::EES: return "EES";
    case TrajectoryCategory::CES: return "CES";
    case TrajectoryCategory::CLS: return "CLS";
    case TrajectoryCategory::ELS: return "ELS";
  }
  throw InternalError("unknown trajectory category");
}

inline TrajectoryCategory category_from_string(const std::string& s) {
  if (s == "EES") return TrajectoryCategory::EES;
  if (s == "CES") return TrajectoryCategory::CES;
  if (s == "CLS") return TrajectoryCategory::CLS;
  if (s == "ELS") return TrajectoryCategory::ELS;
  throw ValidationError("unknown trajectory category: '" + s + "'");
}

// How per-pair perplexities are pooled into the class-level gap.
//   SumPpl:     log(sum PPL_good) - log(sum PPL_bad), the default.
//   MeanLogPpl: mean(log PPL_good) - mean(log PPL_bad), sensitivity variant.
enum class GapAggregate { SumPpl, MeanLogPpl };

// PPL = exp(mean per-token NLL).
inline double perplexity(double nll) {
  if (!std::isfinite(nll)) throw ValidationError("perplexity: non-finite NLL");
  return std::exp(nll);
}

// 1 iff the grammatical sentence has strictly lower perplexity; ties lose.
inline int pair_correct(double ppl_good, double ppl_bad) {
  if (!(ppl_good > 0.0) || !(ppl_bad > 0.0) || !std::isfinite(ppl_good) ||
      !std::isfinite(ppl_bad)) {
    throw ValidationError("pair_correct: perplexities must be positive and finite");
  }
  return ppl_good < ppl_bad ? 1 : 0;
}

// Percentage of pairs with PPL_good < PPL_bad.
inline double class_accuracy(const std::vector<std::pair<double, double>>& pairs) {
  if (pairs.empty()) throw ValidationError("class_accuracy: no pairs");
  std::int64_t correct = 0;
  for (const auto& [good, bad] : pairs) correct += pair_correct(good, bad);
  return 100.0 * static_cast<double>(correct) / static_cast<double>(pairs.size());
}

namespace detail {

// log(sum_j exp(x_j)) with the usual max shift.
inline double log_sum_exp(const std::vector<double>& xs) {
  double m = -std::numeric_limits<double>::infinity();
  for (double x : xs) m = std::max(m, x);
  if (!std::isfinite(m)) throw InternalError("log_sum_exp: non-finite maximum");
  double s = 0.0;
  for (double x : xs) s += std::exp(x - m);
  return m + std::log(s);
}

}  // namespace detail

// Class-level gap at a single checkpoint:
//   delta = log(sum_j PPL_good,j) - log(sum_j PPL_bad,j)
// Negative delta means good sentences are preferred. All records must share
// one checkpoint step. MeanLogPpl replaces the pooled sums with per-pair
// means of log-PPL (= mean NLL).
inline double gap_at_checkpoint(const std::vector<PairScore>& pairs,
                                GapAggregate agg = GapAggregate::SumPpl) {
  if (pairs.empty()) throw ValidationError("gap_at_checkpoint: no pairs");
  const std::int64_t step = pairs.front().checkpoint_step;
  std::vector<double> good, bad;
  good.reserve(pairs.size());
  bad.reserve(pairs.size());
  for (const auto& p : pairs) {
    if (p.checkpoint_step != step) {
      throw ValidationError("gap_at_checkpoint: mixed checkpoint steps (" +
                            std::to_string(step) + " vs " +
                            std::to_string(p.checkpoint_step) + ")");
    }
    good.push_back(p.nll_good);
    bad.push_back(p.nll_bad);
  }
  if (agg == GapAggregate::MeanLogPpl) {
    double mg = 0.0, mb = 0.0;
    for (std::size_t j = 0; j < good.size(); ++j) {
      mg += good[j];
      mb += bad[j];
    }
    return (mg - mb) / static_cast<double>(good.size());
  }
  return detail::log_sum_exp(good) - detail::log_sum_exp(bad);
}

// Sort one class's records by checkpoint and compute the gap per step.
// Requires at least 3 distinct checkpoints; duplicate (pair_id, step)
// records are rejected.
inline GapSeries build_gap_series(const std::vector<PairScore>& scores,
                                  GapAggregate agg = GapAggregate::SumPpl) {
  if (scores.empty()) throw ValidationError("build_gap_series: no scores");
  const std::string& cls = scores.front().class_name;
  std::map<std::int64_t, std::vector<PairScore>> by_step;
  std::set<std::pair<std::int64_t, std::int64_t>> seen;
  for (const auto& s : scores) {
    if (s.class_name != cls) {
      throw ValidationError("build_gap_series: mixed classes ('" + cls +
                            "' vs '" + s.class_name + "')");
    }
    if (!seen.insert({s.pair_id, s.checkpoint_step}).second) {
      throw ValidationError("build_gap_series: duplicate record for class '" +
                            cls + "', pair " + std::to_string(s.pair_id) +
                            ", step " + std::to_string(s.checkpoint_step));
    }
    by_step[s.checkpoint_step].push_back(s);
  }
  if (by_step.size() < 3) {
    throw ValidationError("build_gap_series: class '" + cls + "' has " +
                          std::to_string(by_step.size()) +
                          " checkpoints, need at least 3");
  }
  GapSeries series;
  series.class_name = cls;
  series.steps.reserve(by_step.size());
  series.gaps.reserve(by_step.size());
  for (auto& [step, group] : by_step) {
    // Fix the summation order so shuffled input yields identical bits.
    std::sort(group.begin(), group.end(),
              [](const PairScore& a, const PairScore& b) { return a.pair_id < b.pair_id; });
    series.steps.push_back(step);
    series.gaps.push_back(gap_at_checkpoint(group, agg));
  }
  return series;
}

// Means of the first and last fraction of the series (floor, at least one
// point each). Defaults follow the 30/40/30 split.
inline SegmentMeans segment_means(const GapSeries& series, double early_frac = 0.3,
                                  double late_frac = 0.3) {
  const std::size_t n = series.size();
  if (n < 3 || series.gaps.size() != n) {
    throw ValidationError("segment_means: invalid series");
  }
  if (!(early_frac > 0.0) || !(late_frac > 0.0) || early_frac + late_frac > 1.0) {
    throw ValidationError("segment_means: fractions must be positive and sum to at most 1");
  }
  SegmentMeans m;
  m.n_early = std::max<std::size_t>(1, static_cast<std::size_t>(
                                           std::floor(early_frac * static_cast<double>(n))));
  m.n_late = std::max<std::size_t>(1, static_cast<std::size_t>(
                                          std::floor(late_frac * static_cast<double>(n))));
  double se = 0.0, sl = 0.0;
  for (std::size_t i = 0; i < m.n_early; ++i) se += series.gaps[i];
  for (std::size_t i = n - m.n_late; i < n; ++i) sl += series.gaps[i];
  m.early_mean = se / static_cast<double>(m.n_early);
  m.late_mean = sl / static_cast<double>(m.n_late);
  return m;
}

// Sign pattern of (early, late) -> category. An exact zero counts as
// positive (the erroneous side), so every series lands in exactly one bin.
inline TrajectoryCategory categorize(const SegmentMeans& m) {
  if (!std::isfinite(m.early_mean) || !std::isfinite(m.late_mean)) {
    throw ValidationError("categorize: non-finite segment means");
  }
  const bool early_pos = m.early_mean >= 0.0;
  const bool late_pos = m.late_mean >= 0.0;
  if (early_pos && late_pos) return TrajectoryCategory::EES;
  if (!early_pos && !late_pos) return TrajectoryCategory::CES;
  if (early_pos) return TrajectoryCategory::CLS;
  return TrajectoryCategory::ELS;
}

}  // namespace gaptrack
