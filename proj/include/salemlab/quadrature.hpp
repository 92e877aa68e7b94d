#pragma once

// Tanh-sinh (double exponential) quadrature on finite intervals.
//
// Nodes are refined level by level (step 2^-k) and the integral is accepted
// once two successive levels agree to the requested absolute tolerance. The
// endpoints themselves are never evaluated.

#include <cmath>
#include <cstddef>
#include <numbers>
#include <vector>

namespace salemlab::quad {

template <class T>
struct Result {
  T value{};
  double error = 0.0;  // |last level - previous level|
  long evaluations = 0;
  bool converged = false;
};

namespace detail {

struct Node {
  double offset;  // distance from the nearer endpoint on [-1, 1]
  double weight;
};

struct NodeTable {
  static constexpr int kMaxLevel = 10;
  static constexpr double kTMax = 4.0;
  // levels[k] holds the t > 0 nodes first used at level k
  std::vector<std::vector<Node>> levels;

  NodeTable() {
    levels.resize(kMaxLevel + 1);
    for (int k = 0; k <= kMaxLevel; ++k) {
      const double h = std::ldexp(1.0, -k);
      const int stride = k == 0 ? 1 : 2;
      for (int j = 1;; j += stride) {
        const double t = j * h;
        if (t > kTMax) break;
        const double v = 0.5 * std::numbers::pi * std::sinh(t);
        const double offset = 2.0 / (std::exp(2.0 * v) + 1.0);
        const double ch = std::cosh(v);
        const double weight = 0.5 * std::numbers::pi * std::cosh(t) / (ch * ch);
        levels[k].push_back({offset, weight});
      }
    }
  }
};

inline const NodeTable& node_table() {
  static const NodeTable table;
  return table;
}

}  // namespace detail

/// Integrates f over [a, b] to absolute tolerance `tol`.
/// Gives up after `max_level` refinements; check `converged`.
template <class F>
auto tanh_sinh(F&& f, double a, double b, double tol, int max_level = 8)
    -> Result<decltype(f(a))> {
  using T = decltype(f(a));
  const auto& table = detail::node_table();
  if (max_level > detail::NodeTable::kMaxLevel) max_level = detail::NodeTable::kMaxLevel;

  const double half = 0.5 * (b - a);
  Result<T> out;
  T sum = 0.5 * std::numbers::pi * f(a + half);
  out.evaluations = 1;
  T previous{};
  for (int k = 0; k <= max_level; ++k) {
    for (const auto& node : table.levels[k]) {
      const double d = half * node.offset;
      if (d <= 0.0) continue;
      sum += node.weight * (f(a + d) + f(b - d));
      out.evaluations += 2;
    }
    const T estimate = sum * (half * std::ldexp(1.0, -k));
    if (k > 0) {
      out.error = std::abs(estimate - previous);
      if (k >= 3 && out.error <= tol) {
        out.value = estimate;
        out.converged = true;
        return out;
      }
    }
    previous = estimate;
  }
  out.value = previous;
  return out;
}

/// Splits [a, b] into equal panels no wider than `panel` and applies
/// tanh_sinh to each, sharing the tolerance in proportion to width.
template <class F>
auto composite(F&& f, double a, double b, double panel, double tol, int max_level = 8)
    -> Result<decltype(f(a))> {
  using T = decltype(f(a));
  Result<T> out;
  out.converged = true;
  if (!(b > a)) return out;
  const auto n = static_cast<long>(std::ceil((b - a) / panel));
  const double width = (b - a) / static_cast<double>(n);
  const double panel_tol = tol / static_cast<double>(n);
  for (long i = 0; i < n; ++i) {
    const double lo = a + static_cast<double>(i) * width;
    const double hi = i + 1 == n ? b : lo + width;
    auto piece = tanh_sinh(f, lo, hi, panel_tol, max_level);
    out.value += piece.value;
    out.error += piece.error;
    out.evaluations += piece.evaluations;
    out.converged = out.converged && piece.converged;
  }
  return out;
}

}  // namespace salemlab::quad
