#pragma once

// Change-point detection on the per-class gap signal: window-free CUSUM,
// greedy binary segmentation and exact PELT over L2 or centered RBF-kernel
// segment costs, plus the no-change regime classifier.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "gaptrack/errors.hpp"

namespace gaptrack {

// One-dimensional signal indexed by checkpoint step.
struct Signal {
  std::vector<double> values;
  std::vector<std::int64_t> steps;

  std::size_t size() const { return values.size(); }

  void validate() const {
    if (values.size() != steps.size()) {
      throw ValidationError("signal: values/steps length mismatch");
    }
    if (values.size() < 3) throw ValidationError("signal: need at least 3 points");
    for (std::size_t i = 0; i + 1 < steps.size(); ++i) {
      if (steps[i] >= steps[i + 1]) {
        throw ValidationError("signal: steps must be strictly increasing");
      }
    }
    for (double v : values) {
      if (!std::isfinite(v)) throw ValidationError("signal: non-finite value");
    }
  }
};

enum class Regime { Changed, AlwaysTogether, AlwaysApart };

inline const char* to_string(Regime r) {
  switch (r) {
    case Regime::Changed: return "changed";
    case Regime::AlwaysTogether: return "always_together";
    case Regime::AlwaysApart: return "always_apart";
  }
  throw InternalError("unknown regime");
}

// Segment cost family. Bandwidth applies to RBF only.
struct CostKind {
  enum class Kind { L2, Rbf };
  Kind kind = Kind::L2;
  double bandwidth = 1.0;

  static CostKind l2() { return {Kind::L2, 1.0}; }
  static CostKind rbf(double bandwidth) {
    if (!(bandwidth > 0.0)) throw ValidationError("rbf cost: bandwidth must be positive");
    return {Kind::Rbf, bandwidth};
  }
};

struct ChangePointResult {
  bool detected = false;
  std::optional<std::size_t> index;  // points before the change
  std::optional<std::int64_t> step;  // checkpoint step at the change
  double statistic = 0.0;            // CUSUM value or total cost reduction
  Regime regime = Regime::AlwaysTogether;
  double mean_gap = 0.0;
  double std_gap = 0.0;
  std::vector<std::size_t> breakpoints;
};

namespace detail {

inline double mean_of(const std::vector<double>& xs, std::size_t a, std::size_t b) {
  double s = 0.0;
  for (std::size_t i = a; i < b; ++i) s += xs[i];
  return s / static_cast<double>(b - a);
}

// Population standard deviation (divide by n, not n-1).
inline double population_std(const std::vector<double>& xs) {
  const double m = mean_of(xs, 0, xs.size());
  double s = 0.0;
  for (double x : xs) s += (x - m) * (x - m);
  return std::sqrt(s / static_cast<double>(xs.size()));
}

}  // namespace detail

// |mean(values[t+1..T]) - mean(values[1..t])| with 1-based t, so t counts
// the points before the candidate change.
inline double cusum_statistic(const Signal& signal, std::size_t t) {
  signal.validate();
  const std::size_t n = signal.size();
  if (t < 1 || t > n - 1) {
    throw ValidationError("cusum_statistic: split index " + std::to_string(t) +
                          " out of range for length " + std::to_string(n));
  }
  return std::abs(detail::mean_of(signal.values, t, n) -
                  detail::mean_of(signal.values, 0, t));
}

// Scan every candidate split away from the edges and return the maximizer
// (earliest index on ties). CUSUM always commits to a change, so the regime
// is "changed" by construction; the borderline cases are handled by the
// segmentation path instead.
inline ChangePointResult cusum_detect(const Signal& signal, double trim_frac = 0.1) {
  signal.validate();
  if (!(trim_frac >= 0.0) || trim_frac >= 0.5) {
    throw ValidationError("cusum_detect: trim_frac must be in [0, 0.5)");
  }
  const std::size_t n = signal.size();
  const std::size_t trim = std::max<std::size_t>(
      2, static_cast<std::size_t>(std::ceil(trim_frac * static_cast<double>(n))));
  if (n < 5 || trim > n - trim) {
    throw ValidationError("cusum_detect: signal too short after trimming (T=" +
                          std::to_string(n) + ", trim=" + std::to_string(trim) + ")");
  }
  std::size_t best_t = trim;
  double best_stat = -1.0;
  for (std::size_t t = trim; t + trim <= n; ++t) {
    const double stat = cusum_statistic(signal, t);
    if (stat > best_stat) {
      best_stat = stat;
      best_t = t;
    }
  }
  ChangePointResult r;
  r.detected = true;
  r.index = best_t;
  r.step = signal.steps[best_t];
  r.statistic = best_stat;
  r.regime = Regime::Changed;
  r.mean_gap = detail::mean_of(signal.values, 0, n);
  r.std_gap = detail::population_std(signal.values);
  r.breakpoints = {best_t};
  return r;
}

// Sum of squared deviations from the segment mean.
inline double cost_l2(const std::vector<double>& segment) {
  if (segment.empty()) throw ValidationError("cost_l2: empty segment");
  const double m = detail::mean_of(segment, 0, segment.size());
  double s = 0.0;
  for (double y : segment) s += (y - m) * (y - m);
  return s;
}

// Centered kernel cost n - (1/n) sum_ij K(y_i, y_j) with a Gaussian kernel.
// Zero iff the segment is constant.
inline double cost_rbf(const std::vector<double>& segment, double bandwidth) {
  if (segment.empty()) throw ValidationError("cost_rbf: empty segment");
  if (!(bandwidth > 0.0)) throw ValidationError("cost_rbf: bandwidth must be positive");
  const std::size_t n = segment.size();
  double ksum = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      const double d = segment[i] - segment[j];
      ksum += std::exp(-d * d / (2.0 * bandwidth * bandwidth));
    }
  }
  const double c = static_cast<double>(n) - ksum / static_cast<double>(n);
  return std::max(0.0, c);
}

// Median pairwise absolute difference, the usual kernel bandwidth pick.
// Falls back to 1.0 when the median is zero (constant-heavy signals).
inline double median_heuristic_bandwidth(const Signal& signal) {
  if (signal.size() < 2) {
    throw ValidationError("median_heuristic_bandwidth: need at least 2 points");
  }
  std::vector<double> diffs;
  diffs.reserve(signal.size() * (signal.size() - 1) / 2);
  for (std::size_t i = 0; i < signal.size(); ++i) {
    for (std::size_t j = i + 1; j < signal.size(); ++j) {
      diffs.push_back(std::abs(signal.values[i] - signal.values[j]));
    }
  }
  std::sort(diffs.begin(), diffs.end());
  const std::size_t n = diffs.size();
  const double med =
      (n % 2 == 1) ? diffs[n / 2] : 0.5 * (diffs[n / 2 - 1] + diffs[n / 2]);
  return med > 0.0 ? med : 1.0;
}

// O(1)-per-segment cost lookups backed by prefix sums. For RBF this holds
// the (T+1)^2 running sum of the kernel matrix, so it is meant for the
// checkpoint-scale signals this library analyzes, not megasample streams.
class SegmentCost {
 public:
  SegmentCost(const std::vector<double>& values, CostKind cost)
      : kind_(cost.kind), n_(values.size()) {
    if (kind_ == CostKind::Kind::L2) {
      sum_.assign(n_ + 1, 0.0);
      sumsq_.assign(n_ + 1, 0.0);
      for (std::size_t i = 0; i < n_; ++i) {
        sum_[i + 1] = sum_[i] + values[i];
        sumsq_[i + 1] = sumsq_[i] + values[i] * values[i];
      }
    } else {
      const double denom = 2.0 * cost.bandwidth * cost.bandwidth;
      kprefix_.assign((n_ + 1) * (n_ + 1), 0.0);
      for (std::size_t i = 0; i < n_; ++i) {
        for (std::size_t j = 0; j < n_; ++j) {
          const double d = values[i] - values[j];
          at(i + 1, j + 1) = std::exp(-d * d / denom) + at(i, j + 1) + at(i + 1, j) - at(i, j);
        }
      }
    }
  }

  // Cost of the half-open segment [a, b).
  double operator()(std::size_t a, std::size_t b) const {
    if (a >= b || b > n_) throw InternalError("segment cost: bad range");
    const double len = static_cast<double>(b - a);
    double c;
    if (kind_ == CostKind::Kind::L2) {
      const double s = sum_[b] - sum_[a];
      c = sumsq_[b] - sumsq_[a] - s * s / len;
    } else {
      const double ksum = at(b, b) - at(a, b) - at(b, a) + at(a, a);
      c = len - ksum / len;
    }
    return std::max(0.0, c);
  }

 private:
  double& at(std::size_t i, std::size_t j) { return kprefix_[i * (n_ + 1) + j]; }
  double at(std::size_t i, std::size_t j) const { return kprefix_[i * (n_ + 1) + j]; }

  CostKind::Kind kind_;
  std::size_t n_;
  std::vector<double> sum_, sumsq_;
  std::vector<double> kprefix_;
};

// Total cost of the segmentation induced by ascending breakpoints, without
// the penalty term.
inline double segmentation_cost(const SegmentCost& cost, std::size_t n,
                                const std::vector<std::size_t>& breakpoints) {
  double total = 0.0;
  std::size_t a = 0;
  for (std::size_t b : breakpoints) {
    total += cost(a, b);
    a = b;
  }
  return total + cost(a, n);
}

// BIC-style default: 2 * sigma^2 * log T with the population sigma of the
// whole signal.
inline double default_penalty(const Signal& signal) {
  signal.validate();
  const double sd = detail::population_std(signal.values);
  return 2.0 * sd * sd * std::log(static_cast<double>(signal.size()));
}

struct BinsegResult {
  std::vector<std::size_t> breakpoints;       // ascending split positions
  std::optional<std::size_t> first_split;     // earliest accepted in recursion order
};

// Greedy binary segmentation: repeatedly take the single split (over all
// current segments) with the largest cost reduction, accept while the
// reduction strictly exceeds the penalty, at most max_breakpoints times.
// Breakpoint p means p points lie before the split. Minimum segment
// length 2, earliest index on ties.
inline BinsegResult binseg(const Signal& signal, CostKind cost,
                           std::size_t max_breakpoints, double penalty) {
  signal.validate();
  if (signal.size() < 5) throw ValidationError("binseg: need at least 5 points");
  if (max_breakpoints < 1) throw ValidationError("binseg: max_breakpoints must be >= 1");
  if (!(penalty >= 0.0)) throw ValidationError("binseg: penalty must be nonnegative");

  const SegmentCost C(signal.values, cost);
  struct Seg {
    std::size_t a, b;
    double gain;
    std::size_t split;
  };
  auto best_split = [&C](std::size_t a, std::size_t b) {
    Seg s{a, b, -std::numeric_limits<double>::infinity(), a};
    const double whole = C(a, b);
    for (std::size_t p = a + 2; p + 2 <= b; ++p) {
      const double gain = whole - C(a, p) - C(p, b);
      if (gain > s.gain) {
        s.gain = gain;
        s.split = p;
      }
    }
    return s;
  };

  std::vector<Seg> segs = {best_split(0, signal.size())};
  BinsegResult result;
  while (result.breakpoints.size() < max_breakpoints) {
    std::size_t best = segs.size();
    for (std::size_t i = 0; i < segs.size(); ++i) {
      // Strict comparison keeps the leftmost segment on equal gains.
      if (std::isfinite(segs[i].gain) && (best == segs.size() || segs[i].gain > segs[best].gain)) {
        best = i;
      }
    }
    if (best == segs.size() || !(segs[best].gain > penalty)) break;
    const Seg chosen = segs[best];
    result.breakpoints.push_back(chosen.split);
    if (!result.first_split) result.first_split = chosen.split;
    segs[best] = best_split(chosen.a, chosen.split);
    segs.insert(segs.begin() + static_cast<std::ptrdiff_t>(best) + 1,
                best_split(chosen.split, chosen.b));
  }
  std::sort(result.breakpoints.begin(), result.breakpoints.end());
  return result;
}

// Exact penalized segmentation via PELT. Minimizes
//   sum of segment costs + penalty * (number of breakpoints)
// over all segmentations with segments of length >= 2.
inline std::vector<std::size_t> pelt(const Signal& signal, CostKind cost, double penalty) {
  signal.validate();
  if (signal.size() < 5) throw ValidationError("pelt: need at least 5 points");
  if (!(penalty > 0.0)) throw ValidationError("pelt: penalty must be positive");

  const std::size_t n = signal.size();
  const SegmentCost C(signal.values, cost);
  const double inf = std::numeric_limits<double>::infinity();

  std::vector<double> F(n + 1, inf);
  std::vector<std::size_t> prev(n + 1, 0);
  F[0] = -penalty;
  std::vector<std::size_t> cands = {0};
  std::vector<std::size_t> pending_removal;

  for (std::size_t t = 2; t <= n; ++t) {
    double best = inf;
    std::size_t best_s = 0;
    for (std::size_t s : cands) {
      if (t - s < 2) continue;
      const double v = F[s] + C(s, t) + penalty;
      if (v < best) {
        best = v;
        best_s = s;
      }
    }
    F[t] = best;
    prev[t] = best_s;

    // Candidates failing the bound are removed one step late: a start
    // pruned at t is still legal (length exactly 2) at t+1, and only from
    // t+2 on is it provably dominated by t itself.
    if (!pending_removal.empty()) {
      std::vector<std::size_t> kept;
      kept.reserve(cands.size());
      for (std::size_t s : cands) {
        if (!std::binary_search(pending_removal.begin(), pending_removal.end(), s)) {
          kept.push_back(s);
        }
      }
      cands.swap(kept);
      pending_removal.clear();
    }
    for (std::size_t s : cands) {
      if (t - s >= 2 && F[s] + C(s, t) > F[t]) pending_removal.push_back(s);
    }
    cands.push_back(t);
  }

  std::vector<std::size_t> breakpoints;
  for (std::size_t cp = prev[n]; cp > 0; cp = prev[cp]) breakpoints.push_back(cp);
  std::reverse(breakpoints.begin(), breakpoints.end());
  return breakpoints;
}

// No-change classifier: the class sits apart from zero when its mean gap
// exceeds twice the standard error, otherwise the curves track together.
inline Regime regime_classify(const Signal& signal) {
  signal.validate();
  const double m = detail::mean_of(signal.values, 0, signal.size());
  const double sd = detail::population_std(signal.values);
  const double stderr_gap = sd / std::sqrt(static_cast<double>(signal.size()));
  return std::abs(m) > 2.0 * stderr_gap ? Regime::AlwaysApart : Regime::AlwaysTogether;
}

enum class Segmenter { Binseg, Pelt };

inline const char* to_string(Segmenter s) {
  switch (s) {
    case Segmenter::Binseg: return "binseg";
    case Segmenter::Pelt: return "pelt";
  }
  throw InternalError("unknown segmenter");
}

// Penalized-segmentation front end used by the report: runs the chosen
// search, then fills the diagnostic fields. The reported change point is
// the first split in recursion order for Binseg and the earliest
// breakpoint for PELT; with no accepted split the regime classifier
// decides between always_together and always_apart.
inline ChangePointResult segment_detect(const Signal& signal, CostKind cost,
                                        double penalty, Segmenter method,
                                        std::size_t max_breakpoints = 5) {
  signal.validate();
  ChangePointResult r;
  r.mean_gap = detail::mean_of(signal.values, 0, signal.size());
  r.std_gap = detail::population_std(signal.values);

  std::optional<std::size_t> reported;
  if (method == Segmenter::Binseg) {
    BinsegResult b = binseg(signal, cost, max_breakpoints, penalty);
    r.breakpoints = b.breakpoints;
    reported = b.first_split;
  } else {
    r.breakpoints = pelt(signal, cost, penalty);
    if (!r.breakpoints.empty()) reported = r.breakpoints.front();
  }

  if (reported) {
    const SegmentCost C(signal.values, cost);
    r.detected = true;
    r.index = *reported;
    r.step = signal.steps[*reported];
    r.statistic = C(0, signal.size()) - segmentation_cost(C, signal.size(), r.breakpoints);
    r.regime = Regime::Changed;
  } else {
    r.regime = regime_classify(signal);
  }
  return r;
}

}  // namespace gaptrack
