#pragma once

// Upper-tail probabilities for the t, F and chi-square distributions,
// built on the regularized incomplete beta and gamma functions. Series and
// continued-fraction evaluation (modified Lentz) gives absolute error well
// below 1e-10 over the df ranges this library meets.

#include <cmath>
#include <limits>
#include <string>

#include "gaptrack/errors.hpp"

namespace gaptrack {
namespace detail {

inline constexpr int kMaxIter = 300;
inline constexpr double kTiny = 1e-300;

// Continued fraction for the incomplete beta, evaluated with the modified
// Lentz algorithm. Converges fast for x < (a+1)/(a+b+2).
inline double beta_cf(double a, double b, double x) {
  const double eps = std::numeric_limits<double>::epsilon();
  const double qab = a + b;
  const double qap = a + 1.0;
  const double qam = a - 1.0;
  double c = 1.0;
  double d = 1.0 - qab * x / qap;
  if (std::abs(d) < kTiny) d = kTiny;
  d = 1.0 / d;
  double h = d;
  for (int m = 1; m <= kMaxIter; ++m) {
    const double m2 = 2.0 * m;
    double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
    d = 1.0 + aa * d;
    if (std::abs(d) < kTiny) d = kTiny;
    c = 1.0 + aa / c;
    if (std::abs(c) < kTiny) c = kTiny;
    d = 1.0 / d;
    h *= d * c;
    aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
    d = 1.0 + aa * d;
    if (std::abs(d) < kTiny) d = kTiny;
    c = 1.0 + aa / c;
    if (std::abs(c) < kTiny) c = kTiny;
    d = 1.0 / d;
    const double del = d * c;
    h *= del;
    if (std::abs(del - 1.0) < eps) return h;
  }
  throw InternalError("incomplete beta continued fraction did not converge");
}

// Series for the lower regularized gamma P(a, x), valid for x < a + 1.
inline double gamma_p_series(double a, double x) {
  const double eps = std::numeric_limits<double>::epsilon();
  double ap = a;
  double sum = 1.0 / a;
  double del = sum;
  for (int n = 0; n < kMaxIter; ++n) {
    ap += 1.0;
    del *= x / ap;
    sum += del;
    if (std::abs(del) < std::abs(sum) * eps) {
      return sum * std::exp(-x + a * std::log(x) - std::lgamma(a));
    }
  }
  throw InternalError("incomplete gamma series did not converge");
}

// Continued fraction for the upper regularized gamma Q(a, x), x >= a + 1.
inline double gamma_q_cf(double a, double x) {
  const double eps = std::numeric_limits<double>::epsilon();
  double b = x + 1.0 - a;
  double c = 1.0 / kTiny;
  double d = 1.0 / b;
  double h = d;
  for (int i = 1; i <= kMaxIter; ++i) {
    const double an = -static_cast<double>(i) * (static_cast<double>(i) - a);
    b += 2.0;
    d = an * d + b;
    if (std::abs(d) < kTiny) d = kTiny;
    c = b + an / c;
    if (std::abs(c) < kTiny) c = kTiny;
    d = 1.0 / d;
    const double del = d * c;
    h *= del;
    if (std::abs(del - 1.0) < eps) {
      return h * std::exp(-x + a * std::log(x) - std::lgamma(a));
    }
  }
  throw InternalError("incomplete gamma continued fraction did not converge");
}

}  // namespace detail

// Regularized incomplete beta I_x(a, b).
inline double regularized_incomplete_beta(double a, double b, double x) {
  if (!(a > 0.0) || !(b > 0.0)) {
    throw ValidationError("incomplete beta: parameters must be positive");
  }
  if (!(x >= 0.0) || !(x <= 1.0)) {
    throw ValidationError("incomplete beta: x must lie in [0,1]");
  }
  if (x == 0.0) return 0.0;
  if (x == 1.0) return 1.0;
  const double ln_front = std::lgamma(a + b) - std::lgamma(a) - std::lgamma(b) +
                          a * std::log(x) + b * std::log1p(-x);
  const double front = std::exp(ln_front);
  if (x < (a + 1.0) / (a + b + 2.0)) {
    return front * detail::beta_cf(a, b, x) / a;
  }
  return 1.0 - front * detail::beta_cf(b, a, 1.0 - x) / b;
}

// Lower regularized gamma P(a, x); Q(a, x) = 1 - P(a, x).
inline double regularized_gamma_p(double a, double x) {
  if (!(a > 0.0)) throw ValidationError("incomplete gamma: a must be positive");
  if (!(x >= 0.0)) throw ValidationError("incomplete gamma: x must be nonnegative");
  if (x == 0.0) return 0.0;
  if (x < a + 1.0) return detail::gamma_p_series(a, x);
  return 1.0 - detail::gamma_q_cf(a, x);
}

inline double regularized_gamma_q(double a, double x) {
  if (!(a > 0.0)) throw ValidationError("incomplete gamma: a must be positive");
  if (!(x >= 0.0)) throw ValidationError("incomplete gamma: x must be nonnegative");
  if (x == 0.0) return 1.0;
  if (x < a + 1.0) return 1.0 - detail::gamma_p_series(a, x);
  return detail::gamma_q_cf(a, x);
}

// P(T > t) for Student's t with df degrees of freedom.
inline double student_t_sf(double t, double df) {
  if (!(df > 0.0)) throw ValidationError("student_t_sf: df must be positive");
  if (std::isnan(t)) throw ValidationError("student_t_sf: NaN statistic");
  if (std::isinf(t)) return t > 0.0 ? 0.0 : 1.0;
  const double x = df / (df + t * t);
  const double half_tail = 0.5 * regularized_incomplete_beta(0.5 * df, 0.5, x);
  return t >= 0.0 ? half_tail : 1.0 - half_tail;
}

// P(F > f) for Fisher's F with (d1, d2) degrees of freedom.
inline double fisher_f_sf(double f, double d1, double d2) {
  if (!(d1 > 0.0) || !(d2 > 0.0)) throw ValidationError("fisher_f_sf: df must be positive");
  if (std::isnan(f)) throw ValidationError("fisher_f_sf: NaN statistic");
  if (f <= 0.0) return 1.0;
  if (std::isinf(f)) return 0.0;
  return regularized_incomplete_beta(0.5 * d2, 0.5 * d1, d2 / (d2 + d1 * f));
}

// P(X > x) for chi-square with k degrees of freedom.
inline double chi_square_sf(double x, double k) {
  if (!(k > 0.0)) throw ValidationError("chi_square_sf: df must be positive");
  if (std::isnan(x)) throw ValidationError("chi_square_sf: NaN statistic");
  if (x <= 0.0) return 1.0;
  if (std::isinf(x)) return 0.0;
  return regularized_gamma_q(0.5 * k, 0.5 * x);
}

}  // namespace gaptrack
