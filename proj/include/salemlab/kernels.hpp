#pragma once

// The three zeta-bearing convolution kernels.
//
// Each equation h(x) = e^{sx} \int e^{-sy} k_base(x-y) phi(y) dy is written as
// h = k_sigma * phi with k_sigma(u) = e^{sigma u} k_base(u). Substituting t = e^u
// turns the Fourier integral of k_sigma into a Mellin transform of the base
// kernel, so the symbol at frequency y is an explicit zeta expression in
// s = sigma + i y:
//
//   SALEM     k_base(u) = 1 / (exp(e^u) + 1)       K = Gamma(s) eta(s)
//   FRACPART  k_base(u) = {e^{-u}}                 K = -c zeta(s) / s
//   DIGAMMA   k_base(u) = psi(e^u + 1) - u         K = -pi zeta(1-s) / sin(pi s)
//
// "Symbol" here is the plain integral \int k_sigma(u) e^{iuy} du, i.e. sqrt(2 pi)
// times the unitary Fourier transform used by the fourier module.

#include <array>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "salemlab/specfun.hpp"

namespace salemlab {

enum class KernelKind { kSalem, kFracPart, kDigamma };

std::string_view to_string(KernelKind kind);
/// Accepts "salem", "fracpart", "digamma" (case-insensitive). DomainError otherwise.
KernelKind parse_kernel_kind(std::string_view name);

/// Multiplicative constant in front of -zeta(s)/s for the fractional-part kernel.
enum class FracPartConstant { kOne, kPi };
/// Argument of the sine in the digamma symbol.
enum class DigammaSine { kPiS, kS };

struct SymbolConventions {
  FracPartConstant fracpart_constant = FracPartConstant::kOne;
  DigammaSine digamma_sine = DigammaSine::kPiS;
};

enum class SigmaDomain {
  kStrict,  // 1/2 < sigma < 1
  kStrip,   // 0 < sigma < 1
};

class KernelInstance {
 public:
  /// Throws DomainError when sigma is outside the requested domain.
  KernelInstance(KernelKind kind, double sigma, SigmaDomain domain = SigmaDomain::kStrict,
                 SymbolConventions conventions = {});

  KernelKind kind() const { return kind_; }
  double sigma() const { return sigma_; }
  const SymbolConventions& conventions() const { return conventions_; }

 private:
  KernelKind kind_;
  double sigma_;
  SymbolConventions conventions_;
};

/// Base kernel without the exponential weight.
double kernel_base(KernelKind kind, double u);

/// k_sigma(u). Nonnegative; underflows to exactly 0 far in the tails. For
/// FRACPART, once e^{-u} exceeds 2^53 its fractional part is not
/// representable and the value is 0.
double kernel_eval(const KernelInstance& kernel, double u);

/// Analytic symbol K(sigma + i y).
Complex symbol_eval(const KernelInstance& kernel, double y);

struct SymbolFactors {
  Complex zeta_part;  // zeta(s), or zeta(1-s) for DIGAMMA
  Complex w_part;     // cofactor, nonvanishing on the strip
};

/// K = zeta_part * w_part.
SymbolFactors symbol_factors(const KernelInstance& kernel, double y);

struct QuadratureConfig {
  double tol = 1e-10;       // absolute, on the integral scaled by e^{theta |y|}
  int max_level = 8;        // tanh-sinh refinements per panel
  long max_panels = 200000;
  bool contour_shift = true;
};

struct SymbolQuadrature {
  Complex value;
  double error_estimate = 0.0;  // on the unscaled value
  long evaluations = 0;
  double contour_shift = 0.0;   // Im u of the integration line
};

/// Independent numerical symbol: \int k_sigma(u) e^{iuy} du by composite
/// tanh-sinh quadrature.
///
/// SALEM and DIGAMMA are analytic in a horizontal strip (|Im u| < pi/2 and
/// |Im u| < pi respectively), so for y != 0 the line of integration is moved
/// to Im u = theta with sign(theta) = sign(y). The integrand then carries the
/// factor e^{-theta y} explicitly instead of producing it through
/// cancellation, which is what makes |y| = 20 reachable in double precision.
/// The slowly decaying right tail of DIGAMMA (e^{(sigma-1)u}) is integrated
/// in closed form from the asymptotic expansion of psi.
///
/// FRACPART has jumps at u = -log n and is integrated on the real line, piece
/// by piece in x = e^{-u}, with an Euler-Maclaurin remainder for the pieces
/// beyond x = 1000.
///
/// Throws ConvergenceError when the tolerance is not met within the budget.
SymbolQuadrature symbol_numeric_report(const KernelInstance& kernel, double y,
                                       const QuadratureConfig& quad = {});

Complex symbol_numeric(const KernelInstance& kernel, double y, const QuadratureConfig& quad = {});

/// ||k_sigma||_1. The kernels are nonnegative, so this is the y = 0 quadrature.
double l1_norm(const KernelInstance& kernel, const QuadratureConfig& quad = {});

// ---------------------------------------------------------------------------
// Convention calibration

struct CalibrationPoint {
  double sigma;
  double y;
  Complex numeric;
  Complex base;   // analytic expression with the ambiguous factor removed
  Complex ratio;  // numeric / base
};

struct ConventionFit {
  std::string label;
  double fitted = 0.0;        // least-squares real scale of numeric against base
  double max_ratio_dev = 0.0; // max_j |ratio_j - chosen| / chosen
  bool stable = false;        // every point within tolerance of the chosen value
};

struct CalibrationResult {
  std::vector<CalibrationPoint> fracpart_points;
  double fracpart_fitted = 0.0;
  FracPartConstant fracpart_choice = FracPartConstant::kOne;
  double fracpart_rel_gap = 0.0;  // |fitted - choice| / choice
  bool fracpart_stable = false;

  std::array<ConventionFit, 2> digamma_fits;  // sin(pi s), sin(s)
  DigammaSine digamma_choice = DigammaSine::kPiS;
  bool digamma_stable = false;

  bool pass(double tol) const;
};

/// The 15 calibration nodes: sigma in {0.55, 0.75, 0.95}, y in {0, 2, 5, 9, 14}.
std::vector<std::pair<double, double>> default_calibration_nodes();

/// Measures the FRACPART constant and the DIGAMMA sine convention against
/// the quadrature oracle.
CalibrationResult calibrate_conventions(const std::vector<std::pair<double, double>>& nodes,
                                        double tol = 1e-6, const QuadratureConfig& quad = {});

}  // namespace salemlab
