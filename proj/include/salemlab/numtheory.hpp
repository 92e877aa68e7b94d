#pragma once

// Moebius / Mertens machinery and the explicit Mertens-function example:
//
//   h(x)   = e^{sigma x} (Ei(-e^x) - 2 Ei(-2 e^x))
//   phi(x) = -e^{sigma x} M(e^{-x})  for x < 0,  0 for x >= 0
//
// satisfy h(x) = e^{sigma x} \int e^{-sigma y} phi(y) / (exp(e^{x-y}) + 1) dy.

#include <cstdint>
#include <string>
#include <vector>

#include "salemlab/specfun.hpp"

namespace salemlab {

inline constexpr std::int64_t kLinearSieveMax = 10'000'000;
inline constexpr std::int64_t kSieveCap = 100'000'000;
inline constexpr std::int64_t kDefaultSieveLimit = 1'000'000;

class MoebiusTable {
 public:
  MoebiusTable(std::int64_t limit, std::vector<std::int8_t> mu);

  std::int64_t limit() const { return limit_; }
  /// mu(n) for 1 <= n <= limit; LimitError otherwise.
  int mu(std::int64_t n) const;
  const std::vector<std::int8_t>& values() const { return mu_; }  // index n, entry 0 unused

 private:
  std::int64_t limit_;
  std::vector<std::int8_t> mu_;
};

/// Linear sieve up to 1e7, segmented sieve above; LimitError outside [1, 1e8].
MoebiusTable moebius_sieve(std::int64_t limit);

class MertensEvaluator {
 public:
  explicit MertensEvaluator(MoebiusTable table);
  explicit MertensEvaluator(std::int64_t limit = kDefaultSieveLimit);

  std::int64_t limit() const { return table_.limit(); }
  int mu(std::int64_t n) const { return table_.mu(n); }
  /// M(n) for 0 <= n <= limit.
  std::int64_t prefix(std::int64_t n) const;
  const MoebiusTable& table() const { return table_; }

 private:
  MoebiusTable table_;
  std::vector<std::int32_t> prefix_;
};

/// M(floor x); 0 for x < 1. Values within 1e-12 relative of an integer are
/// snapped to it first (so M(e^{log 5}) = M(5)). LimitError beyond the table.
std::int64_t mertens(double x, const MertensEvaluator& ev);

/// Left side of the example. OverflowError for x > 700; underflows to 0.
double example_h(double x, double sigma);

/// Closed-form solution; phi(0) = 0.
double example_phi(double x, double sigma, const MertensEvaluator& ev);

struct ExamplePoint {
  double x;
  double lhs;  // e^{sigma x} \int_{-Y}^0 e^{-sigma y} k(x - y) phi(y) dy
  double rhs;  // example_h(x)
  double err;
};

struct ExampleReport {
  double sigma = 0.0;
  double Y = 0.0;
  double tol = 0.0;
  std::vector<double> xs;
  std::vector<ExamplePoint> per_point;
  double max_abs_err = 0.0;
  double omitted_bound = 0.0;  // bound on the part of the integral not summed
  bool pass = false;

  std::string to_json() const;
};

/// Sums M(n) \int_n^{n+1} dt / (t (exp(e^x t) + 1)) over the Mertens plateaus
/// t = e^{-y} in [1, e^Y] (tanh-sinh per plateau), stopping early once the
/// remainder bound is below 1e-18 of the running value.
/// DomainError unless 1/2 < sigma < 1; LimitError when e^Y exceeds the table.
ExampleReport verify_example(double sigma, const std::vector<double>& xs, double Y, double tol,
                             const MertensEvaluator& ev);

/// 11 equispaced points on [-3, 3].
std::vector<double> default_example_points();

struct EiMellinResult {
  Complex numeric;
  Complex analytic;  // -Gamma(s) / (s beta^s)
  double rel_gap = 0.0;
  bool pass = false;
};

/// \int_0^inf Ei(-beta t) t^{s-1} dt by tanh-sinh on a shifted contour in
/// u = log t, with the small-t part integrated from the E1 series.
EiMellinResult ei_mellin_check(double beta, Complex s, double tol);

/// "n,mu,M" rows for n = 1..n_max.
std::string mertens_csv(const MertensEvaluator& ev, std::int64_t n_max);

}  // namespace salemlab
