#include "salemlab/specfun.hpp"

#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "salemlab/errors.hpp"

namespace salemlab {

StripPoint::StripPoint(double sigma, double t, double t_max) : sigma_(sigma), t_(t) {
  if (!(sigma > 0.0 && sigma < 1.0)) {
    throw DomainError("sigma must lie in (0,1), got " + std::to_string(sigma));
  }
  if (!std::isfinite(t) || std::abs(t) > t_max) {
    throw DomainError("|t| must not exceed " + std::to_string(t_max));
  }
}

namespace specfun {
namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kEulerGamma = std::numbers::egamma;
constexpr double kLn2 = std::numbers::ln2;
constexpr double kHalfLog2Pi = 0.91893853320467274178;

constexpr double kLanczosG = 7.0;
constexpr std::array<double, 9> kLanczos = {
    0.99999999999980993,  676.5203681218851,     -1259.1392167224028,
    771.32342877765313,   -176.61502916214059,   12.507343278686905,
    -0.13857109526572012, 9.9843695780195716e-6, 1.5056327351493116e-7};

// B_{2k} / (2k)!, k = 1..12
constexpr std::array<double, 12> kBernoulliOverFactorial = {
    1.0 / 12.0,
    -1.0 / 720.0,
    1.0 / 30240.0,
    -1.0 / 1209600.0,
    1.0 / 47900160.0,
    -691.0 / 1307674368000.0,
    1.0 / 74724249600.0,
    -3617.0 / 10670622842880000.0,
    43867.0 / 5109094217170944000.0,
    -174611.0 / 802857662698291200000.0,
    77683.0 / 14101100039391805440000.0,
    -236364091.0 / 1693824136731743669452800000.0};

// B_{2k} / (2k), k = 1..7, for the digamma asymptotic series
constexpr std::array<double, 7> kBernoulliOverIndex = {
    1.0 / 12.0, -1.0 / 120.0, 1.0 / 252.0, -1.0 / 240.0, 1.0 / 132.0, -691.0 / 32760.0, 1.0 / 12.0};

constexpr double kMaxLogGammaArg = 1.0e6;
constexpr double kZetaMinRe = -10.0;

bool is_nonpositive_integer(Complex z) {
  return z.imag() == 0.0 && z.real() <= 0.0 && z.real() == std::floor(z.real());
}

void require_finite(Complex z, const char* what) {
  if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) {
    throw DomainError(std::string(what) + ": argument must be finite");
  }
}

// Lanczos sum, valid for Re z >= 1/2.
Complex lanczos_log_gamma(Complex z) {
  z -= 1.0;
  Complex acc = kLanczos[0];
  for (std::size_t k = 1; k < kLanczos.size(); ++k) {
    acc += kLanczos[k] / (z + static_cast<double>(k));
  }
  const Complex t = z + kLanczosG + 0.5;
  return kHalfLog2Pi + (z + 0.5) * std::log(t) - t + std::log(acc);
}

struct EulerMaclaurin {
  Complex head;      // sum_{n<N} n^{-s} + N^{-s}/2 + Bernoulli corrections
  Complex n_pow;     // N^{1-s}
};

// Everything in zeta(s) except the pole term N^{1-s}/(s-1).
EulerMaclaurin euler_maclaurin(Complex s, double t_max) {
  require_finite(s, "zeta");
  if (std::abs(s.imag()) > t_max) {
    throw PrecisionError("zeta: |Im s| = " + std::to_string(std::abs(s.imag())) +
                         " exceeds the validated height " + std::to_string(t_max));
  }
  if (s.real() < kZetaMinRe) {
    throw PrecisionError("zeta: Re s below the validated range (-10)");
  }
  const int n_terms = std::max(20, static_cast<int>(std::ceil(std::abs(s.imag()))));
  const double big_n = n_terms;

  Complex sum = 0.0;
  for (int n = 1; n < n_terms; ++n) {
    sum += std::exp(-s * std::log(static_cast<double>(n)));
  }
  const Complex n_minus_s = std::exp(-s * std::log(big_n));
  sum += 0.5 * n_minus_s;

  // B_{2k}/(2k)! * s(s+1)...(s+2k-2) * N^{-s-2k+1}
  Complex rising = s;
  Complex power = n_minus_s / big_n;
  const double inv_n2 = 1.0 / (big_n * big_n);
  for (std::size_t k = 0; k < kBernoulliOverFactorial.size(); ++k) {
    sum += kBernoulliOverFactorial[k] * rising * power;
    const double m = 2.0 * static_cast<double>(k) + 1.0;
    rising *= (s + m) * (s + m + 1.0);
    power *= inv_n2;
  }
  return {sum, n_minus_s * big_n};
}

// expm1(w)/w
Complex expm1_over(Complex w) {
  if (std::abs(w) < 1e-3) {
    return 1.0 + w * (0.5 + w * (1.0 / 6.0 + w * (1.0 / 24.0 + w / 120.0)));
  }
  return expm1(w) / w;
}

double digamma_asymptotic(double x) {
  const double inv2 = 1.0 / (x * x);
  double series = 0.0;
  for (auto it = kBernoulliOverIndex.rbegin(); it != kBernoulliOverIndex.rend(); ++it) {
    series = series * inv2 + *it;
  }
  return std::log(x) - 0.5 / x - series * inv2;
}

Complex digamma_asymptotic(Complex z) {
  const Complex inv2 = 1.0 / (z * z);
  Complex series = 0.0;
  for (auto it = kBernoulliOverIndex.rbegin(); it != kBernoulliOverIndex.rend(); ++it) {
    series = series * inv2 + *it;
  }
  return std::log(z) - 0.5 / z - series * inv2;
}

Complex e1_series_complex(Complex z) {
  // E1(z) = -gamma - log z - sum_{k>=1} (-z)^k / (k k!)
  Complex term = 1.0;
  Complex sum = 0.0;
  for (int k = 1; k < 200; ++k) {
    term *= -z / static_cast<double>(k);
    const Complex add = term / static_cast<double>(k);
    sum += add;
    if (std::abs(add) < 1e-17 * std::abs(sum)) break;
  }
  return -kEulerGamma - std::log(z) - sum;
}

Complex e1_cf_complex(Complex z) {
  // Modified Lentz on E1(z) = e^{-z} / (z + 1 - 1/(z + 3 - 4/(z + 5 - ...)))
  constexpr double kTiny = 1e-300;
  Complex b = z + 1.0;
  Complex c = 1.0 / kTiny;
  Complex d = 1.0 / b;
  Complex h = d;
  for (int i = 1; i < 100000; ++i) {
    const double an = -static_cast<double>(i) * static_cast<double>(i);
    b += 2.0;
    d = 1.0 / (an * d + b);
    c = b + an / c;
    const Complex del = c * d;
    h *= del;
    if (std::abs(del - 1.0) < 1e-16) {
      return h * std::exp(-z);
    }
  }
  throw ConvergenceError("expint_e1: continued fraction did not converge");
}

}  // namespace

Complex expm1(Complex z) {
  const double x = z.real();
  const double y = z.imag();
  const double s = std::sin(0.5 * y);
  return {std::expm1(x) * std::cos(y) - 2.0 * s * s, std::exp(x) * std::sin(y)};
}

Complex log_gamma(Complex s) {
  require_finite(s, "log_gamma");
  if (is_nonpositive_integer(s)) {
    throw PoleError("log_gamma: pole at non-positive integer " + std::to_string(s.real()));
  }
  if (std::abs(s.imag()) > kMaxLogGammaArg || std::abs(s.real()) > kMaxLogGammaArg) {
    throw OverflowError("log_gamma: argument beyond the safe range (1e6)");
  }
  if (s.real() >= 0.5) return lanczos_log_gamma(s);

  // log Gamma(s) = log Gamma(s + n) - sum_{k<n} log(s + k)
  const int lift = static_cast<int>(std::ceil(0.5 - s.real()));
  Complex correction = 0.0;
  for (int k = 0; k < lift; ++k) {
    correction += std::log(s + static_cast<double>(k));
  }
  return lanczos_log_gamma(s + static_cast<double>(lift)) - correction;
}

Complex gamma(Complex s) { return std::exp(log_gamma(s)); }

Complex zeta(Complex s, double t_max) {
  if (s == Complex(1.0, 0.0)) throw PoleError("zeta: pole at s = 1");
  const auto em = euler_maclaurin(s, t_max);
  return em.head + em.n_pow / (s - 1.0);
}

Complex eta(Complex s, double t_max) {
  const auto em = euler_maclaurin(s, t_max);
  // (1 - 2^{1-s}) = -expm1((1-s) log 2); (1 - 2^{1-s})/(s-1) = log2 * expm1(w)/w
  const Complex w = (1.0 - s) * kLn2;
  const Complex factor = -expm1(w);
  return factor * em.head + em.n_pow * kLn2 * expm1_over(w);
}

double digamma(double x) {
  if (!(x > 0.0) || !std::isfinite(x)) {
    throw DomainError("digamma: x must be positive and finite");
  }
  double shift = 0.0;
  while (x < 10.0) {
    shift -= 1.0 / x;
    x += 1.0;
  }
  return shift + digamma_asymptotic(x);
}

Complex digamma(Complex z) {
  require_finite(z, "digamma");
  if (is_nonpositive_integer(z)) throw PoleError("digamma: pole at non-positive integer");
  Complex shift = 0.0;
  while (z.real() < 10.0) {
    shift -= 1.0 / z;
    z += 1.0;
  }
  return shift + digamma_asymptotic(z);
}

namespace detail {

double e1_series(double x) { return e1_series_complex(Complex(x, 0.0)).real(); }

double e1_continued_fraction(double x) { return e1_cf_complex(Complex(x, 0.0)).real(); }

}  // namespace detail

double expint_e1(double x) {
  if (!(x > 0.0)) throw DomainError("expint_e1: x must be positive");
  if (std::isinf(x)) return 0.0;
  return x <= 1.0 ? detail::e1_series(x) : detail::e1_continued_fraction(x);
}

Complex expint_e1(Complex z) {
  require_finite(z, "expint_e1");
  if (z.imag() == 0.0 && z.real() <= 0.0) {
    throw DomainError("expint_e1: argument on the branch cut");
  }
  return std::abs(z) <= 2.0 ? e1_series_complex(z) : e1_cf_complex(z);
}

double ei(double x) {
  if (!(x < 0.0)) throw DomainError("ei: only negative arguments are supported");
  return -expint_e1(-x);
}

double frac(double x) {
  const double r = x - std::floor(x);
  // tiny negative x rounds 1 - eps up to 1
  return r < 1.0 ? r : std::nextafter(1.0, 0.0);
}

Complex inv_sin(Complex z) {
  // 1/sin z = 2i e^{iz} / (e^{2iz} - 1), mirrored for Im z < 0
  const Complex i(0.0, 1.0);
  if (z.imag() >= 0.0) {
    const Complex q = std::exp(i * z);
    return 2.0 * i * q / (q * q - 1.0);
  }
  const Complex q = std::exp(-i * z);
  return 2.0 * i * q / (1.0 - q * q);
}

}  // namespace specfun
}  // namespace salemlab
