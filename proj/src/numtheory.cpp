#include "salemlab/numtheory.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "json.hpp"
#include "salemlab/errors.hpp"
#include "salemlab/quadrature.hpp"

namespace salemlab {
namespace {

constexpr double kPi = std::numbers::pi;
constexpr std::int64_t kSegment = 1 << 20;

std::vector<std::int8_t> linear_sieve(std::int64_t limit) {
  std::vector<std::int8_t> mu(static_cast<std::size_t>(limit) + 1, 0);
  std::vector<std::int32_t> primes;
  std::vector<bool> composite(static_cast<std::size_t>(limit) + 1, false);
  mu[1] = 1;
  for (std::int64_t i = 2; i <= limit; ++i) {
    if (!composite[static_cast<std::size_t>(i)]) {
      primes.push_back(static_cast<std::int32_t>(i));
      mu[static_cast<std::size_t>(i)] = -1;
    }
    for (std::int32_t p : primes) {
      const std::int64_t ip = i * p;
      if (ip > limit) break;
      composite[static_cast<std::size_t>(ip)] = true;
      if (i % p == 0) {
        mu[static_cast<std::size_t>(ip)] = 0;
        break;
      }
      mu[static_cast<std::size_t>(ip)] = static_cast<std::int8_t>(-mu[static_cast<std::size_t>(i)]);
    }
  }
  return mu;
}

std::vector<std::int8_t> segmented_sieve(std::int64_t limit) {
  const auto root = static_cast<std::int64_t>(std::sqrt(static_cast<double>(limit))) + 1;
  std::vector<std::int32_t> primes;
  {
    std::vector<bool> composite(static_cast<std::size_t>(root) + 1, false);
    for (std::int64_t i = 2; i <= root; ++i) {
      if (composite[static_cast<std::size_t>(i)]) continue;
      primes.push_back(static_cast<std::int32_t>(i));
      for (std::int64_t j = i * i; j <= root; j += i) composite[static_cast<std::size_t>(j)] = true;
    }
  }
  std::vector<std::int8_t> mu(static_cast<std::size_t>(limit) + 1, 0);
  std::vector<std::int64_t> rest(static_cast<std::size_t>(kSegment));
  for (std::int64_t lo = 1; lo <= limit; lo += kSegment) {
    const std::int64_t hi = std::min(limit, lo + kSegment - 1);
    for (std::int64_t n = lo; n <= hi; ++n) {
      rest[static_cast<std::size_t>(n - lo)] = n;
      mu[static_cast<std::size_t>(n)] = 1;
    }
    for (std::int64_t p : primes) {
      if (p * p > hi) break;
      const std::int64_t first = ((lo + p - 1) / p) * p;
      for (std::int64_t n = first; n <= hi; n += p) {
        mu[static_cast<std::size_t>(n)] = static_cast<std::int8_t>(-mu[static_cast<std::size_t>(n)]);
        rest[static_cast<std::size_t>(n - lo)] /= p;
      }
      const std::int64_t sq = p * p;
      for (std::int64_t n = ((lo + sq - 1) / sq) * sq; n <= hi; n += sq) mu[static_cast<std::size_t>(n)] = 0;
    }
    for (std::int64_t n = lo; n <= hi; ++n) {
      if (rest[static_cast<std::size_t>(n - lo)] > 1) {
        mu[static_cast<std::size_t>(n)] = static_cast<std::int8_t>(-mu[static_cast<std::size_t>(n)]);
      }
    }
  }
  mu[0] = 0;
  return mu;
}

double snap_to_integer(double x) {
  const double r = std::round(x);
  return std::abs(x - r) <= 1e-12 * std::max(1.0, std::abs(x)) ? r : x;
}

// 1 / (t (exp(a t) + 1))
double salem_weight(double t, double a) {
  const double at = a * t;
  if (at > 30.0) {
    const double q = std::exp(-at);
    return q / (t * (1.0 + q));
  }
  return 1.0 / (t * (std::exp(at) + 1.0));
}

// e^{s(u + i theta)} e^{theta Im s}
Complex shifted_exp(Complex s, double u, double theta) {
  return std::exp(Complex(s.real() * u, s.imag() * u + s.real() * theta));
}

}  // namespace

MoebiusTable::MoebiusTable(std::int64_t limit, std::vector<std::int8_t> mu) : limit_(limit), mu_(std::move(mu)) {
  if (static_cast<std::int64_t>(mu_.size()) != limit_ + 1) throw DomainError("MoebiusTable: size mismatch");
}

int MoebiusTable::mu(std::int64_t n) const {
  if (n < 1 || n > limit_) throw LimitError("mu(" + std::to_string(n) + ") outside the sieved range");
  return mu_[static_cast<std::size_t>(n)];
}

MoebiusTable moebius_sieve(std::int64_t limit) {
  if (limit < 1 || limit > kSieveCap) {
    throw LimitError("sieve limit must lie in [1, 1e8], got " + std::to_string(limit));
  }
  return {limit, limit <= kLinearSieveMax ? linear_sieve(limit) : segmented_sieve(limit)};
}

MertensEvaluator::MertensEvaluator(MoebiusTable table) : table_(std::move(table)) {
  const auto& mu = table_.values();
  prefix_.assign(mu.size(), 0);
  std::int32_t acc = 0;
  for (std::size_t n = 1; n < mu.size(); ++n) {
    acc += mu[n];
    prefix_[n] = acc;
  }
}

MertensEvaluator::MertensEvaluator(std::int64_t limit) : MertensEvaluator(moebius_sieve(limit)) {}

std::int64_t MertensEvaluator::prefix(std::int64_t n) const {
  if (n < 0 || n > limit()) throw LimitError("M(" + std::to_string(n) + ") outside the sieved range");
  return prefix_[static_cast<std::size_t>(n)];
}

std::int64_t mertens(double x, const MertensEvaluator& ev) {
  if (!std::isfinite(x)) throw DomainError("mertens: x must be finite");
  x = snap_to_integer(x);
  if (x < 1.0) return 0;
  const double fl = std::floor(x);
  if (fl > static_cast<double>(ev.limit())) {
    throw LimitError("mertens: floor(x) exceeds the sieve limit " + std::to_string(ev.limit()));
  }
  return ev.prefix(static_cast<std::int64_t>(fl));
}

double example_h(double x, double sigma) {
  if (!std::isfinite(x)) throw DomainError("example_h: x must be finite");
  if (x > 700.0) throw OverflowError("example_h: e^x overflows for x > 700");
  const double a = std::exp(x);
  return std::exp(sigma * x) * (specfun::ei(-a) - 2.0 * specfun::ei(-2.0 * a));
}

double example_phi(double x, double sigma, const MertensEvaluator& ev) {
  if (x >= 0.0) return 0.0;
  return -std::exp(sigma * x) * static_cast<double>(mertens(std::exp(-x), ev));
}

std::vector<double> default_example_points() {
  std::vector<double> xs;
  for (int i = 0; i <= 10; ++i) xs.push_back(-3.0 + 0.6 * i);
  return xs;
}

std::string ExampleReport::to_json() const {
  nlohmann::json j;
  j["sigma"] = sigma;
  j["Y"] = Y;
  j["tol"] = tol;
  j["xs"] = xs;
  j["max_abs_err"] = max_abs_err;
  j["omitted_bound"] = omitted_bound;
  auto arr = nlohmann::json::array();
  for (const auto& p : per_point) arr.push_back({{"x", p.x}, {"lhs", p.lhs}, {"rhs", p.rhs}, {"err", p.err}});
  j["per_point"] = std::move(arr);
  j["pass"] = pass;
  return j.dump();
}

ExampleReport verify_example(double sigma, const std::vector<double>& xs, double Y, double tol,
                             const MertensEvaluator& ev) {
  if (!(sigma > 0.5 && sigma < 1.0)) throw DomainError("sigma must lie in (1/2,1)");
  if (!(Y > 0.0) || !std::isfinite(Y)) throw DomainError("verify_example: Y must be positive");
  const double t_max = snap_to_integer(std::exp(Y));
  if (std::floor(t_max) > static_cast<double>(ev.limit())) {
    throw LimitError("verify_example: e^Y exceeds the sieve limit " + std::to_string(ev.limit()));
  }

  ExampleReport report;
  report.sigma = sigma;
  report.Y = Y;
  report.tol = tol;
  report.xs = xs;
  const auto n_last = static_cast<std::int64_t>(std::floor(t_max));
  for (double x : xs) {
    const double a = std::exp(x);
    double sum = 0.0;
    double omitted = 0.0;
    for (std::int64_t n = 1; n <= n_last; ++n) {
      const double lo = static_cast<double>(n);
      const double hi = std::min(lo + 1.0, t_max);
      // |M(t)| <= t: what is left beyond n is at most sum_{k>=n} e^{-a k}
      const double tail = std::exp(-a * lo) / (-std::expm1(-a));
      if (n > 1 && tail < 1e-18 * std::abs(sum)) {
        omitted = tail;
        break;
      }
      if (!(hi > lo)) break;
      const std::int64_t m = ev.prefix(n);
      if (m == 0) continue;
      const double scale = salem_weight(lo, a);
      auto piece = quad::tanh_sinh([a](double t) { return salem_weight(t, a); }, lo, hi,
                                   std::max(1e-16 * scale, 1e-300), 10);
      if (!piece.converged && piece.error > 1e-13 * scale) {
        throw ConvergenceError("verify_example: plateau quadrature did not converge");
      }
      sum += static_cast<double>(m) * piece.value;
    }
    if (omitted == 0.0) omitted = std::exp(-a * t_max) / (-std::expm1(-a));
    const double weight = std::exp(sigma * x);
    ExamplePoint p{x, -weight * sum, example_h(x, sigma), 0.0};
    p.err = std::abs(p.lhs - p.rhs);
    report.max_abs_err = std::max(report.max_abs_err, p.err);
    report.omitted_bound = std::max(report.omitted_bound, weight * omitted);
    report.per_point.push_back(p);
  }
  report.pass = report.max_abs_err < tol;
  return report;
}

EiMellinResult ei_mellin_check(double beta, Complex s, double tol) {
  if (!(beta > 0.0) || !std::isfinite(beta)) throw DomainError("ei_mellin_check: beta must be positive");
  if (!(s.real() > 0.0)) throw DomainError("ei_mellin_check: Re s must be positive");
  const double y = s.imag();
  const double theta = y == 0.0 ? 0.0 : std::copysign(0.5 * kPi - 0.25, y);
  const Complex rot = std::exp(Complex(0.0, theta));

  // below u_s: -E1(z) = gamma + log z + sum (-z)^k / (k k!), |z| = 1/2
  const double u_s = std::log(0.5 / beta);
  const Complex w_s(u_s, theta);
  Complex left = (std::numbers::egamma + std::log(beta)) * shifted_exp(s, u_s, theta) / s +
                 shifted_exp(s, u_s, theta) * (w_s / s - 1.0 / (s * s));
  double coeff = 1.0;
  for (int k = 1; k <= 60; ++k) {
    coeff *= -beta / static_cast<double>(k);
    const Complex sk = s + static_cast<double>(k);
    const Complex term = coeff / static_cast<double>(k) * shifted_exp(sk, u_s, theta) / sk;
    left += term;
    if (std::abs(term) < 1e-18 * std::abs(left)) break;
  }

  // beyond u_r the integrand is below e^{-45}
  const double u_r = std::log(45.0 / (beta * std::cos(theta)));
  auto integrand = [&](double u) -> Complex {
    const Complex z = beta * std::exp(u) * rot;
    return -specfun::expint_e1(z) * shifted_exp(s, u, theta);
  };
  const double width = std::min(0.5, kPi / std::max(std::abs(y), 1.0));
  const double quad_tol = 1e-14 * std::max(1.0, std::abs(left));
  auto middle = quad::composite(integrand, u_s, u_r, width, quad_tol, 10);
  if (!middle.converged) throw ConvergenceError("ei_mellin_check: quadrature did not converge");

  EiMellinResult out;
  out.numeric = std::exp(-theta * y) * (left + middle.value);
  out.analytic = -specfun::gamma(s) / (s * std::exp(s * std::log(beta)));
  out.rel_gap = std::abs(out.numeric - out.analytic) / std::abs(out.analytic);
  out.pass = out.rel_gap <= tol;
  return out;
}

std::string mertens_csv(const MertensEvaluator& ev, std::int64_t n_max) {
  if (n_max < 1 || n_max > ev.limit()) throw LimitError("mertens_csv: n outside the sieved range");
  std::string out = "n,mu,M\n";
  for (std::int64_t n = 1; n <= n_max; ++n) {
    out += std::to_string(n) + ',' + std::to_string(ev.mu(n)) + ',' + std::to_string(ev.prefix(n)) + '\n';
  }
  return out;
}

}  // namespace salemlab
