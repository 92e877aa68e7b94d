#pragma once

// Special functions behind the kernel symbols: complex log-gamma, Riemann zeta,
// Dirichlet eta, digamma, the exponential integral and the fractional part.
//
// Everything here is a pure function; the only tables are constexpr.

#include <complex>

namespace salemlab {

using Complex = std::complex<double>;

/// Default height ceiling for zeta/eta evaluation.
inline constexpr double kDefaultTMax = 1.0e3;

/// A point s = sigma + i t of the open critical strip 0 < sigma < 1.
class StripPoint {
 public:
  /// Throws DomainError unless 0 < sigma < 1 and |t| <= t_max.
  StripPoint(double sigma, double t, double t_max = kDefaultTMax);

  double sigma() const { return sigma_; }
  double t() const { return t_; }
  Complex value() const { return {sigma_, t_}; }

 private:
  double sigma_;
  double t_;
};

namespace specfun {

/// Principal branch of log Gamma(s).
///
/// Lanczos (g = 7, 9 terms) for Re s >= 1/2; smaller real parts are lifted
/// with log Gamma(s) = log Gamma(s + n) - sum log(s + k), which keeps the
/// branch continuous off the negative real axis.
/// Throws PoleError at non-positive integers and OverflowError when
/// |Re s| or |Im s| exceeds 1e6.
Complex log_gamma(Complex s);

/// exp(log_gamma(s)). Underflows to zero for very large |Im s|.
Complex gamma(Complex s);

/// Riemann zeta by Euler-Maclaurin summation with N = max(20, ceil|t|) terms
/// and 12 Bernoulli corrections.
///
/// Throws PoleError at s = 1 and PrecisionError when |Im s| > t_max or
/// Re s < -10 (outside the validated range).
Complex zeta(Complex s, double t_max = kDefaultTMax);

/// Dirichlet eta (1 - 2^{1-s}) zeta(s), finite at s = 1 (eta(1) = log 2).
///
/// Shares the Euler-Maclaurin core with zeta() but folds the pole term into
/// (1 - 2^{1-s}) / (s - 1), evaluated through expm1 so that nothing cancels
/// near s = 1.
Complex eta(Complex s, double t_max = kDefaultTMax);

/// psi(x) for x > 0 via upward recurrence to x >= 10 and the asymptotic
/// series. Absolute error below 1e-12. DomainError for x <= 0.
double digamma(double x);

/// Complex digamma, used by the Mellin quadratures on shifted contours.
/// PoleError at non-positive integers.
Complex digamma(Complex z);

/// Ei(x) for x < 0, i.e. -E1(-x). DomainError for x >= 0.
double ei(double x);

/// E1(x) for x > 0 (series below 1, continued fraction above).
double expint_e1(double x);

/// E1(z) off the negative real axis (series for |z| <= 2, continued fraction
/// otherwise). Used by the Ei Mellin check on shifted contours.
Complex expint_e1(Complex z);

/// x - floor(x), always in [0, 1).
double frac(double x);

/// 1 / sin(z) without overflow for large |Im z|.
Complex inv_sin(Complex z);

/// exp(z) - 1 without cancellation for small |z|.
Complex expm1(Complex z);

namespace detail {
double e1_series(double x);
double e1_continued_fraction(double x);
}  // namespace detail

}  // namespace specfun
}  // namespace salemlab
