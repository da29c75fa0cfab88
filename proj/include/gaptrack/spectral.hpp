#pragma once

// Weight-matrix diagnostics for attention projections: Frobenius norm,
// entry statistics, flattened cosine similarity, singular values via
// one-sided Jacobi, condition number, effective rank and the Q/K ratio.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <string>
#include <utility>
#include <vector>

#include "gaptrack/errors.hpp"

namespace gaptrack {

enum class MatrixKind { Q, K, V, O };

inline const char* to_string(MatrixKind k) {
  switch (k) {
    case MatrixKind::Q: return "q";
    case MatrixKind::K: return "k";
    case MatrixKind::V: return "v";
    case MatrixKind::O: return "o";
  }
  throw InternalError("unknown matrix kind");
}

inline MatrixKind matrix_kind_from_string(const std::string& s) {
  if (s == "q" || s == "Q") return MatrixKind::Q;
  if (s == "k" || s == "K") return MatrixKind::K;
  if (s == "v" || s == "V") return MatrixKind::V;
  if (s == "o" || s == "O") return MatrixKind::O;
  throw ValidationError("unknown matrix kind: '" + s + "'");
}

struct WeightMatrix {
  int layer = 0;
  MatrixKind kind = MatrixKind::Q;
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<double> entries;  // row-major
  std::int64_t checkpoint_step = 0;

  double at(std::size_t r, std::size_t c) const { return entries[r * cols + c]; }
  double& at(std::size_t r, std::size_t c) { return entries[r * cols + c]; }

  void validate() const {
    if (rows < 1 || cols < 1) throw ValidationError("weight matrix: empty shape");
    if (entries.size() != rows * cols) {
      throw ValidationError("weight matrix: entry count does not match shape");
    }
    for (double v : entries) {
      if (!std::isfinite(v)) throw ValidationError("weight matrix: non-finite entry");
    }
  }
};

struct SpectralSummary {
  double frobenius = 0.0;
  double entry_mean = 0.0;
  double entry_std = 0.0;
  double sigma_max = 0.0;
  double sigma_min = 0.0;
  double condition = 1.0;
  std::size_t effective_rank = 1;
};

inline double frobenius(const WeightMatrix& w) {
  w.validate();
  double s = 0.0;
  for (double v : w.entries) s += v * v;
  return std::sqrt(s);
}

// Population mean and std over all entries (divisor rows*cols).
inline std::pair<double, double> entry_stats(const WeightMatrix& w) {
  w.validate();
  const double n = static_cast<double>(w.entries.size());
  double mean = 0.0;
  for (double v : w.entries) mean += v;
  mean /= n;
  double var = 0.0;
  for (double v : w.entries) var += (v - mean) * (v - mean);
  return {mean, std::sqrt(var / n)};
}

// Cosine of the row-major flattenings.
inline double cosine_similarity(const WeightMatrix& a, const WeightMatrix& b) {
  a.validate();
  b.validate();
  if (a.rows != b.rows || a.cols != b.cols) {
    throw ValidationError("cosine_similarity: shape mismatch");
  }
  double dot = 0.0, na = 0.0, nb = 0.0;
  for (std::size_t i = 0; i < a.entries.size(); ++i) {
    dot += a.entries[i] * b.entries[i];
    na += a.entries[i] * a.entries[i];
    nb += b.entries[i] * b.entries[i];
  }
  if (na == 0.0 || nb == 0.0) {
    throw ValidationError("cosine_similarity: undefined for a zero matrix");
  }
  return std::clamp(dot / (std::sqrt(na) * std::sqrt(nb)), -1.0, 1.0);
}

// All min(rows, cols) singular values, descending. One-sided Jacobi
// (Hestenes) on the matrix with rows >= cols: cyclic sweeps orthogonalize
// column pairs until every inner product is negligible, then the column
// norms are the singular values. Fixed sweep order keeps runs bit-stable.
inline std::vector<double> singular_values(const WeightMatrix& w) {
  w.validate();
  std::size_t m = w.rows, n = w.cols;
  // Column-major working copy of W (or its transpose when rows < cols;
  // the spectrum is the same).
  std::vector<std::vector<double>> col;
  if (m >= n) {
    col.assign(n, std::vector<double>(m));
    for (std::size_t r = 0; r < m; ++r) {
      for (std::size_t c = 0; c < n; ++c) col[c][r] = w.at(r, c);
    }
  } else {
    std::swap(m, n);
    col.assign(n, std::vector<double>(m));
    for (std::size_t r = 0; r < w.rows; ++r) {
      for (std::size_t c = 0; c < w.cols; ++c) col[r][c] = w.at(r, c);
    }
  }

  const double tol = 1e-15;
  const int max_sweeps = 60;
  for (int sweep = 0; sweep < max_sweeps; ++sweep) {
    bool rotated = false;
    for (std::size_t i = 0; i + 1 < n; ++i) {
      for (std::size_t j = i + 1; j < n; ++j) {
        double alpha = 0.0, beta = 0.0, gamma = 0.0;
        for (std::size_t k = 0; k < m; ++k) {
          alpha += col[i][k] * col[i][k];
          beta += col[j][k] * col[j][k];
          gamma += col[i][k] * col[j][k];
        }
        if (std::abs(gamma) <= tol * std::sqrt(alpha * beta) || alpha == 0.0 || beta == 0.0) {
          continue;
        }
        const double zeta = (beta - alpha) / (2.0 * gamma);
        const double t = (zeta >= 0.0 ? 1.0 : -1.0) /
                         (std::abs(zeta) + std::sqrt(1.0 + zeta * zeta));
        const double c = 1.0 / std::sqrt(1.0 + t * t);
        const double s = c * t;
        for (std::size_t k = 0; k < m; ++k) {
          const double vi = col[i][k];
          const double vj = col[j][k];
          col[i][k] = c * vi - s * vj;
          col[j][k] = s * vi + c * vj;
        }
        rotated = true;
      }
    }
    if (!rotated) break;
  }

  std::vector<double> sv(n);
  for (std::size_t i = 0; i < n; ++i) {
    double s = 0.0;
    for (std::size_t k = 0; k < m; ++k) s += col[i][k] * col[i][k];
    sv[i] = std::sqrt(s);
  }
  std::sort(sv.begin(), sv.end(), std::greater<double>());
  return sv;
}

inline void require_descending(const std::vector<double>& sv, const char* who) {
  if (sv.empty()) throw ValidationError(std::string(who) + ": empty spectrum");
  for (std::size_t i = 0; i + 1 < sv.size(); ++i) {
    if (sv[i] < sv[i + 1]) {
      throw ValidationError(std::string(who) + ": spectrum not descending");
    }
  }
  if (sv.back() < 0.0) throw ValidationError(std::string(who) + ": negative singular value");
}

inline double condition_number(const std::vector<double>& sv, double eps = 1e-12) {
  require_descending(sv, "condition_number");
  return sv.front() / (sv.back() + eps);
}

// Smallest k whose leading singular values carry fraction tau of the total
// squared spectral energy.
inline std::size_t effective_rank(const std::vector<double>& sv, double tau = 0.99) {
  require_descending(sv, "effective_rank");
  if (!(tau > 0.0) || tau > 1.0) {
    throw ValidationError("effective_rank: tau must be in (0,1]");
  }
  double total = 0.0;
  for (double s : sv) total += s * s;
  if (total == 0.0) throw ValidationError("effective_rank: all-zero spectrum");
  double cum = 0.0;
  for (std::size_t k = 0; k < sv.size(); ++k) {
    cum += sv[k] * sv[k];
    if (cum / total >= tau) return k + 1;
  }
  return sv.size();
}

inline double qk_ratio(const WeightMatrix& wq, const WeightMatrix& wk) {
  const double nq = frobenius(wq);
  const double nk = frobenius(wk);
  if (nk == 0.0) throw ValidationError("qk_ratio: zero-norm key matrix");
  return nq / nk;
}

// Full per-matrix summary. The Frobenius/spectrum identity is checked on
// the way out; a violation means the SVD iteration failed to converge.
inline SpectralSummary summarize(const WeightMatrix& w, double tau = 0.99) {
  SpectralSummary s;
  s.frobenius = frobenius(w);
  const auto [mean, sd] = entry_stats(w);
  s.entry_mean = mean;
  s.entry_std = sd;
  const std::vector<double> sv = singular_values(w);
  s.sigma_max = sv.front();
  s.sigma_min = sv.back();
  s.condition = condition_number(sv);
  double energy = 0.0;
  for (double v : sv) energy += v * v;
  const double frob2 = s.frobenius * s.frobenius;
  if (frob2 > 0.0 && std::abs(energy - frob2) > 1e-6 * frob2) {
    throw InternalError("spectral summary: singular values do not carry the Frobenius energy");
  }
  if (frob2 == 0.0) {
    s.effective_rank = 1;
    s.condition = 1.0;
    s.sigma_max = s.sigma_min = 0.0;
    return s;
  }
  s.effective_rank = effective_rank(sv, tau);
  return s;
}

// Column blocks of width cols/heads, one per attention head.
inline std::vector<WeightMatrix> head_slices(const WeightMatrix& w, std::size_t heads) {
  w.validate();
  if (heads < 1 || w.cols % heads != 0) {
    throw ValidationError("head_slices: column count not divisible by head count");
  }
  const std::size_t width = w.cols / heads;
  std::vector<WeightMatrix> slices;
  slices.reserve(heads);
  for (std::size_t h = 0; h < heads; ++h) {
    WeightMatrix s;
    s.layer = w.layer;
    s.kind = w.kind;
    s.rows = w.rows;
    s.cols = width;
    s.checkpoint_step = w.checkpoint_step;
    s.entries.reserve(w.rows * width);
    for (std::size_t r = 0; r < w.rows; ++r) {
      for (std::size_t c = 0; c < width; ++c) {
        s.entries.push_back(w.at(r, h * width + c));
      }
    }
    slices.push_back(std::move(s));
  }
  return slices;
}

}  // namespace gaptrack
