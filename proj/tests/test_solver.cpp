#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "salemlab/errors.hpp"
#include "salemlab/fourier.hpp"
#include "salemlab/kernels.hpp"
#include "salemlab/quadrature.hpp"
#include "salemlab/solver.hpp"

using namespace salemlab;

namespace {

constexpr double kRoundtripL = 128.0;
constexpr std::size_t kRoundtripN = 512;

SampledFunction gauss(double L, std::size_t n, double centre = 0.0) {
  return SampledFunction::tabulate([centre](double x) { return Complex(std::exp(-(x - centre) * (x - centre)), 0.0); }, L, n);
}

double rel_l2(const SampledFunction& a, const SampledFunction& b) {
  double num = 0.0;
  double den = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    num += std::norm(a.samples[i] - b.samples[i]);
    den += std::norm(b.samples[i]);
  }
  return std::sqrt(num / den);
}

SampledFunction combine(Complex a, const SampledFunction& f, Complex b, const SampledFunction& g) {
  SampledFunction out = f;
  for (std::size_t i = 0; i < f.size(); ++i) out.samples[i] = a * f.samples[i] + b * g.samples[i];
  return out;
}

// lambda1 = lambda2 = 1 test kernel: half a unit gaussian, so ||k||_1 = 1/2
ConvolutionKernel half_gaussian() {
  const double c = 0.5 / std::sqrt(2.0 * std::numbers::pi);
  return ConvolutionKernel::custom(
      "half-gaussian", [c](double u) { return c * std::exp(-0.5 * u * u); },
      [](double y) { return Complex(0.5 * std::exp(-0.5 * y * y), 0.0); });
}

// phi = h + k * phi by fixed-point iteration with direct (O(n^2)) quadrature
SampledFunction neumann_oracle(const ConvolutionKernel& k, const SampledFunction& h) {
  const std::size_t n = h.size();
  std::vector<double> kmat(2 * n - 1);
  for (std::size_t d = 0; d < kmat.size(); ++d) {
    kmat[d] = k.eval((static_cast<double>(d) - static_cast<double>(n - 1)) * h.dx) * h.dx;
  }
  SampledFunction phi = h;
  for (int it = 0; it < 200; ++it) {
    SampledFunction next = h;
    double change = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      Complex acc = 0.0;
      for (std::size_t j = 0; j < n; ++j) acc += kmat[i + n - 1 - j] * phi.samples[j];
      next.samples[i] += acc;
      change = std::max(change, std::abs(next.samples[i] - phi.samples[i]));
    }
    phi = std::move(next);
    if (change < 1e-16) break;
  }
  return phi;
}

// k * e^{-y^2} at x by quadrature; the FRACPART kernel jumps at u = -log n,
// so its integral is split at y = x + log n
double direct_apply(const KernelInstance& kernel, double x) {
  auto integrand = [&](double y) { return kernel_eval(kernel, x - y) * std::exp(-y * y); };
  constexpr double kReach = 7.0;
  if (kernel.kind() != KernelKind::kFracPart) return quad::composite(integrand, -kReach, kReach, 0.25, 1e-13, 8).value;
  double total = quad::composite(integrand, -kReach, x, 0.25, 1e-14, 8).value;
  for (double n = 1.0;; n += 1.0) {
    const double a = x + std::log(n);
    if (a >= kReach) break;
    const double b = std::min(kReach, x + std::log(n + 1.0));
    total += quad::tanh_sinh(integrand, a, b, 1e-15, 8).value;
  }
  return total;
}

}  // namespace

TEST(SolveConfig, Validation) {
  SolveConfig cfg;
  EXPECT_NO_THROW(cfg.validate());
  cfg.lambda2 = 0.0;
  EXPECT_THROW(cfg.validate(), DomainError);
  cfg = {};
  cfg.lambda1 = -1.0;
  EXPECT_THROW(cfg.validate(), DomainError);
  cfg = {};
  cfg.tau = 0.0;
  EXPECT_THROW(cfg.validate(), DomainError);
  cfg = {};
  cfg.regularization = Regularization::kTikhonov;
  cfg.alpha = -1.0;
  EXPECT_THROW(cfg.validate(), DomainError);
}

TEST(ForwardApply, ZeroInZeroOut) {
  const auto h = forward_apply(KernelInstance(KernelKind::kSalem, 0.75), SampledFunction::zeros(24.0, 512));
  for (const auto& z : h.samples) EXPECT_EQ(z, Complex(0.0, 0.0));
}

TEST(ForwardApply, SpotCheckAgainstQuadrature) {
  for (auto kind : {KernelKind::kSalem, KernelKind::kFracPart, KernelKind::kDigamma}) {
    const KernelInstance kernel(kind, 0.75);
    const auto phi = gauss(32.0, kDefaultGridSize);
    const auto h = forward_apply(kernel, phi);
    for (double x : {-2.0, 0.0, 2.0}) {
      const auto idx = static_cast<std::size_t>(std::llround((x - h.x0) / h.dx));
      ASSERT_NEAR(h.x(idx), x, 1e-12);
      EXPECT_NEAR(h.samples[idx].real(), direct_apply(kernel, x), 1e-6) << to_string(kind) << " x=" << x;
    }
  }
}

TEST(ForwardApply, TruncationDiagnostic) {
  ApplyDiagnostics diag;
  forward_apply(KernelInstance(KernelKind::kSalem, 0.75), gauss(24.0, 512), &diag);
  EXPECT_FALSE(diag.truncation_warning);
  forward_apply(KernelInstance(KernelKind::kSalem, 0.75), SampledFunction::tabulate([](double) { return Complex(1.0); }, 24.0, 512),
                &diag);
  EXPECT_TRUE(diag.truncation_warning);
}

TEST(Solve, ZeroDataGivesZeroSolution) {
  for (auto kind : {KernelKind::kSalem, KernelKind::kFracPart, KernelKind::kDigamma}) {
    const auto report = solve(KernelInstance(kind, 0.75), SampledFunction::zeros(kRoundtripL, kRoundtripN));
    for (const auto& z : report.phi.samples) EXPECT_EQ(z, Complex(0.0, 0.0));
    EXPECT_EQ(report.residual_l2, 0.0);
    EXPECT_EQ(report.residual_sup, 0.0);
  }
}

TEST(Solve, RoundtripAllKernels) {
  for (auto kind : {KernelKind::kSalem, KernelKind::kFracPart, KernelKind::kDigamma}) {
    const ConvolutionKernel k(KernelInstance(kind, 0.75));
    const auto phi = gauss(kRoundtripL, kRoundtripN);
    const auto h = forward_apply(k, phi);  // lambda1 = 0, lambda2 = -1 reads h = k * phi
    const auto report = solve(k, h);
    EXPECT_LE(rel_l2(report.phi, phi), 1e-3) << to_string(kind);
    EXPECT_FALSE(report.has_flag("ILL_POSED")) << to_string(kind);
    EXPECT_LE(report.residual_sup, 1e-4) << to_string(kind);
    EXPECT_LT(report.regularized_fraction, 0.5);
  }
}

TEST(Solve, DefaultGridIsTooFineForSalem) {
  const ConvolutionKernel k(KernelInstance(KernelKind::kSalem, 0.75));
  auto h = forward_apply(k, gauss(kDefaultHalfWidth, kDefaultGridSize));
  EXPECT_THROW(solve(k, h), SingularSymbolError);
}

TEST(Solve, NeumannBranch) {
  const auto k = half_gaussian();
  const auto h = gauss(24.0, 512, 0.5);
  SolveConfig cfg;
  cfg.lambda1 = 1.0;
  cfg.lambda2 = 1.0;
  cfg.window = Window::kNone;
  const auto report = solve(k, h, cfg);
  const auto oracle = neumann_oracle(k, h);
  EXPECT_LE(rel_l2(report.phi, oracle), 1e-6);
  EXPECT_EQ(report.regularized_fraction, 0.0);
}

TEST(Solve, Linearity) {
  const ConvolutionKernel k(KernelInstance(KernelKind::kSalem, 0.75));
  const auto h1 = forward_apply(k, gauss(kRoundtripL, kRoundtripN, -1.0));
  const auto h2 = forward_apply(k, gauss(kRoundtripL, kRoundtripN, 2.0));
  const Complex a(1.5, 0.0);
  const Complex b(-0.75, 0.0);
  const auto lhs = solve(k, combine(a, h1, b, h2)).phi;
  const auto rhs = combine(a, solve(k, h1).phi, b, solve(k, h2).phi);
  double err = 0.0;
  for (std::size_t i = 0; i < lhs.size(); ++i) err = std::max(err, std::abs(lhs.samples[i] - rhs.samples[i]));
  EXPECT_LE(err, 1e-8);
}

TEST(Solve, RegularizationMonotonicInTau) {
  const ConvolutionKernel k(KernelInstance(KernelKind::kSalem, 0.75));
  auto h = forward_apply(k, gauss(kRoundtripL, kRoundtripN));
  double previous = std::numeric_limits<double>::infinity();
  for (double tau : {1e-4, 1e-6, 1e-8}) {
    SolveConfig cfg;
    cfg.tau = tau;
    const auto report = solve(k, h, cfg);
    EXPECT_LE(report.residual_l2, previous) << tau;
    previous = report.residual_l2;
  }
}

TEST(Solve, TikhonovRuns) {
  const ConvolutionKernel k(KernelInstance(KernelKind::kFracPart, 0.75));
  auto h = forward_apply(k, gauss(kRoundtripL, kRoundtripN));
  SolveConfig cfg;
  cfg.regularization = Regularization::kTikhonov;
  cfg.alpha = 1e-14;
  EXPECT_LE(rel_l2(solve(k, h, cfg).phi, gauss(kRoundtripL, kRoundtripN)), 1e-3);
}

TEST(Solve, ReportJsonFields) {
  const ConvolutionKernel k(KernelInstance(KernelKind::kFracPart, 0.75));
  const auto report = solve(k, SampledFunction::zeros(kRoundtripL, kRoundtripN));
  const std::string js = report.to_json();
  for (const char* key : {"residual_l2", "residual_sup", "regularized_fraction", "denominator_min", "flags", "convention"}) {
    EXPECT_NE(js.find(key), std::string::npos) << key;
  }
}

TEST(Residual, PerturbationScalesWithKernelNorm) {
  const KernelInstance inst(KernelKind::kSalem, 0.75);
  const ConvolutionKernel k(inst);
  const auto phi = gauss(kRoundtripL, kRoundtripN);
  auto h = forward_apply(k, phi);
  const auto exact = residual(k, phi, h);
  EXPECT_LE(exact.sup, 1e-10);
  const double eps = 1e-3;
  const auto bumped = combine(1.0, phi, eps, gauss(kRoundtripL, kRoundtripN, 0.5));
  const auto r = residual(k, bumped, h);
  // ||k * g||_2 <= ||k||_1 ||g||_2 with ||g||_2 = (pi/2)^{1/4}
  const double ratio = r.l2 / (l1_norm(inst) * eps);
  EXPECT_GE(ratio, 0.5);
  EXPECT_LE(ratio, 2.0);
}

TEST(Residual, MismatchedGrids) {
  const ConvolutionKernel k(KernelInstance(KernelKind::kSalem, 0.75));
  EXPECT_THROW(residual(k, SampledFunction::zeros(24.0, 256), SampledFunction::zeros(24.0, 512)), GridError);
  EXPECT_THROW(solve(k, SampledFunction{0.0, 0.1, std::vector<Complex>(100)}), GridError);
}

TEST(FitTranslates, SingleExactTranslate) {
  const KernelInstance inst(KernelKind::kSalem, 0.75);
  const auto g = SampledFunction::tabulate([&](double x) { return Complex(kernel_eval(inst, x - 1.0), 0.0); }, 24.0, 1024);
  const auto fit = fit_translates(inst, g, {1.0}, 2);
  ASSERT_EQ(fit.coeffs.size(), 1u);
  EXPECT_NEAR(fit.coeffs[0], 1.0, 1e-10);
  EXPECT_LE(fit.residual, 1e-8);
}

TEST(FitTranslates, TwoTermExact) {
  const KernelInstance inst(KernelKind::kSalem, 0.75);
  const auto g = SampledFunction::tabulate(
      [&](double x) { return Complex(2.0 * kernel_eval(inst, x) + 3.0 * kernel_eval(inst, x - 2.0), 0.0); }, 24.0, 1024);
  for (int p : {2, 1}) {
    const auto fit = fit_translates(inst, g, {0.0, 2.0}, p);
    EXPECT_NEAR(fit.coeffs[0], 2.0, 1e-6) << p;
    EXPECT_NEAR(fit.coeffs[1], 3.0, 1e-6) << p;
  }
}

TEST(FitTranslates, MoreNodesFitBetter) {
  const KernelInstance inst(KernelKind::kSalem, 0.75);
  const auto g = gauss(24.0, 1024);
  auto nodes = [](int m) {
    std::vector<double> z;
    for (int i = 0; i < m; ++i) z.push_back(-6.0 + 12.0 * i / (m - 1));
    return z;
  };
  for (int p : {2, 1}) {
    const double r5 = fit_translates(inst, g, nodes(5), p).residual;
    const double r20 = fit_translates(inst, g, nodes(20), p).residual;
    EXPECT_LT(r20, r5) << p;
  }
}

TEST(FitTranslates, SupersetNeverWorse) {
  const KernelInstance inst(KernelKind::kFracPart, 0.75);
  const auto g = gauss(24.0, 1024, 0.3);
  std::vector<double> nodes{-2.0, 1.0};
  double previous = fit_translates(inst, g, nodes, 2).residual;
  for (double z : {0.0, 3.0, -4.5, 2.2, -1.1}) {
    nodes.push_back(z);
    const double r = fit_translates(inst, g, nodes, 2).residual;
    EXPECT_LE(r, previous * (1.0 + 1e-9)) << nodes.size();
    previous = r;
  }
}

TEST(FitTranslates, Preconditions) {
  const KernelInstance inst(KernelKind::kSalem, 0.75);
  const auto g = gauss(24.0, 1024);
  EXPECT_THROW(fit_translates(inst, g, {0.0, 0.0}, 2), DomainError);
  EXPECT_THROW(fit_translates(inst, g, {100.0}, 2), DomainError);
  EXPECT_THROW(fit_translates(inst, g, {0.0}, 3), DomainError);
  EXPECT_THROW(fit_translates(inst, g, {}, 2), DomainError);
  EXPECT_THROW(fit_translates(inst, g, {0.0, 1e-10}, 2), RankError);
}
