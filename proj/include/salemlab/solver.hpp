#pragma once

// lambda1 phi = lambda2 h + k * phi, solved by spectral division:
//
//   phi = lambda2 F^{-1}[ H / (lambda1 - K) ]
//
// with H the unitary transform of h and K the plain symbol \int k(u) e^{iuy} du.
// For lambda1 = 0, lambda2 = -1 this is phi = F^{-1}[H / K].

#include <functional>
#include <string>
#include <vector>

#include "salemlab/fourier.hpp"
#include "salemlab/kernels.hpp"

namespace salemlab {

/// A convolution kernel together with its symbol. Wraps one of the three
/// KernelInstance families or an arbitrary (kernel, symbol) pair.
class ConvolutionKernel {
 public:
  ConvolutionKernel(const KernelInstance& kernel);  // NOLINT(google-explicit-constructor)

  /// `evaluate` is sampled at lags for forward application, `symbol` is used
  /// for the division.
  static ConvolutionKernel custom(std::string name, std::function<double(double)> evaluate,
                                  std::function<Complex(double)> symbol);

  double eval(double u) const { return eval_(u); }
  Complex symbol(double y) const { return symbol_(y); }
  const std::string& name() const { return name_; }

  /// Apply through the symbol on a padded grid instead of sampling the kernel
  /// (FRACPART: the kernel jumps at u = -log n).
  bool spectral_apply() const { return spectral_; }
  /// Exponential decay rate of the slower tail, used to size the padding.
  double tail_rate() const { return tail_rate_; }

 private:
  ConvolutionKernel() = default;
  std::string name_;
  std::function<double(double)> eval_;
  std::function<Complex(double)> symbol_;
  bool spectral_ = false;
  double tail_rate_ = 1.0;
};

enum class Regularization { kCutoff, kTikhonov, kNone };

struct SolveConfig {
  double lambda1 = 0.0;
  double lambda2 = -1.0;
  Regularization regularization = Regularization::kCutoff;
  double tau = 1e-8;     // cutoff, relative to max |lambda1 - K|
  double alpha = 1e-10;  // Tikhonov, relative to max |lambda1 - K|^2
  Window window = Window::kTaper;

  /// DomainError for lambda1 < 0, lambda1 = lambda2 = 0, or a non-positive tau/alpha.
  void validate() const;
};

struct ApplyDiagnostics {
  bool truncation_warning = false;  // |phi| > 1e-10 at a grid edge
  double edge_magnitude = 0.0;
};

/// h = k * phi on the grid of phi (linear convolution, no wrap-around).
SampledFunction forward_apply(const ConvolutionKernel& kernel, const SampledFunction& phi,
                              ApplyDiagnostics* diagnostics = nullptr);

struct ResidualNorms {
  double l2 = 0.0;
  double sup = 0.0;
};

/// Norms of lambda1 phi - lambda2 h - k * phi over the interior 90% of the grid.
ResidualNorms residual(const ConvolutionKernel& kernel, const SampledFunction& phi, const SampledFunction& h,
                       const SolveConfig& cfg = {});

struct SolveReport {
  SampledFunction phi;
  double residual_l2 = 0.0;
  double residual_sup = 0.0;
  double regularized_fraction = 0.0;
  double denominator_min = 0.0;
  double l2_ratio = 1.0;  // ||H/D|| over the full band / over the half band
  std::vector<std::string> flags;  // ILL_POSED, TRUNCATION
  std::string convention;

  bool has_flag(const std::string& flag) const;
  std::string to_json() const;
};

/// Throws SingularSymbolError when more than half of the bins are clipped (or
/// any denominator vanishes with regularization NONE).
SolveReport solve(const ConvolutionKernel& kernel, const SampledFunction& h, const SolveConfig& cfg = {});

struct TranslateFit {
  std::vector<double> coeffs;
  double residual = 0.0;  // (sum |g - sum a_i k(x - z_i)|^p dx)^{1/p}
  int iterations = 0;
};

/// Least-squares (p = 2) or IRLS (p = 1) fit of Re g by translates k(x - z_i).
/// RankError when the Gram matrix is singular beyond the ridge.
TranslateFit fit_translates(const ConvolutionKernel& kernel, const SampledFunction& g,
                            const std::vector<double>& nodes, int p);

}  // namespace salemlab
