#include "salemlab/solver.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <set>

#include "json.hpp"
#include "salemlab/errors.hpp"

namespace salemlab {
namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kEdgeTolerance = 1e-10;
constexpr double kWrapExponent = 30.0;  // padding keeps wrapped tails below e^{-30}
constexpr double kIllPosedRatio = 1.05;

std::size_t next_power_of_two(std::size_t n) {
  std::size_t p = 1;
  while (p < n) p <<= 1;
  return p;
}

double edge_magnitude(const SampledFunction& f) {
  return std::max(std::abs(f.samples.front()), std::abs(f.samples.back()));
}

// dx sum_m k((i - m) dx) phi_m with kernel samples at every lag in (-N, N)
SampledFunction apply_sampled(const ConvolutionKernel& kernel, const SampledFunction& phi) {
  const std::size_t n = phi.size();
  const std::size_t size = 4 * n;
  std::vector<Complex> kp(size, Complex(0.0, 0.0));
  std::vector<Complex> fp(size, Complex(0.0, 0.0));
  for (std::size_t l = 1; l < 2 * n; ++l) {
    kp[l] = kernel.eval((static_cast<double>(l) - static_cast<double>(n)) * phi.dx);
  }
  std::copy(phi.samples.begin(), phi.samples.end(), fp.begin());
  fft::transform(kp, -1);
  fft::transform(fp, -1);
  for (std::size_t j = 0; j < size; ++j) kp[j] *= fp[j];
  fft::transform(kp, +1);

  SampledFunction out = phi;
  const double scale = phi.dx / static_cast<double>(size);
  for (std::size_t i = 0; i < n; ++i) out.samples[i] = scale * kp[i + n];
  return out;
}

// Periodic convolution on a padded lattice whose transfer function is the
// symbol itself; the padding is wide enough that wrapped kernel tails vanish.
SampledFunction apply_spectral(const ConvolutionKernel& kernel, const SampledFunction& phi) {
  const std::size_t n = phi.size();
  const auto margin = static_cast<std::size_t>(std::ceil(kWrapExponent / (kernel.tail_rate() * phi.dx)));
  const std::size_t size = next_power_of_two(2 * n + margin);
  std::vector<Complex> fp(size, Complex(0.0, 0.0));
  std::copy(phi.samples.begin(), phi.samples.end(), fp.begin());
  fft::transform(fp, +1);

  const double dy = 2.0 * kPi / (static_cast<double>(size) * phi.dx);
  for (std::size_t j = 0; j < size; ++j) {
    const long q = j < size / 2 ? static_cast<long>(j) : static_cast<long>(j) - static_cast<long>(size);
    Complex symbol = kernel.symbol(static_cast<double>(q) * dy);
    if (j == size / 2) symbol = Complex(symbol.real(), 0.0);
    fp[j] *= symbol;
  }
  fft::transform(fp, -1);

  SampledFunction out = phi;
  const double scale = 1.0 / static_cast<double>(size);
  for (std::size_t i = 0; i < n; ++i) out.samples[i] = scale * fp[i];
  return out;
}

std::string regularization_name(Regularization r) {
  switch (r) {
    case Regularization::kCutoff:
      return "cutoff";
    case Regularization::kTikhonov:
      return "tikhonov";
    case Regularization::kNone:
      return "none";
  }
  return "unknown";
}

}  // namespace

ConvolutionKernel::ConvolutionKernel(const KernelInstance& kernel)
    : name_(std::string(to_string(kernel.kind()))),
      eval_([kernel](double u) { return kernel_eval(kernel, u); }),
      symbol_([kernel](double y) { return symbol_eval(kernel, y); }),
      spectral_(kernel.kind() == KernelKind::kFracPart) {
  const double sigma = kernel.sigma();
  tail_rate_ = kernel.kind() == KernelKind::kSalem ? sigma : std::min(sigma, 1.0 - sigma);
}

ConvolutionKernel ConvolutionKernel::custom(std::string name, std::function<double(double)> evaluate,
                                            std::function<Complex(double)> symbol) {
  ConvolutionKernel k;
  k.name_ = std::move(name);
  k.eval_ = std::move(evaluate);
  k.symbol_ = std::move(symbol);
  return k;
}

void SolveConfig::validate() const {
  if (!(lambda1 >= 0.0)) throw DomainError("lambda1 must be >= 0");
  if (lambda1 == 0.0 && lambda2 == 0.0) throw DomainError("lambda1 = lambda2 = 0 is the homogeneous equation");
  if (regularization == Regularization::kCutoff && !(tau > 0.0)) throw DomainError("tau must be positive");
  if (regularization == Regularization::kTikhonov && !(alpha > 0.0)) throw DomainError("alpha must be positive");
}

SampledFunction forward_apply(const ConvolutionKernel& kernel, const SampledFunction& phi,
                              ApplyDiagnostics* diagnostics) {
  phi.validate();
  if (diagnostics != nullptr) {
    diagnostics->edge_magnitude = edge_magnitude(phi);
    diagnostics->truncation_warning = diagnostics->edge_magnitude > kEdgeTolerance;
  }
  return kernel.spectral_apply() ? apply_spectral(kernel, phi) : apply_sampled(kernel, phi);
}

ResidualNorms residual(const ConvolutionKernel& kernel, const SampledFunction& phi, const SampledFunction& h,
                       const SolveConfig& cfg) {
  phi.validate();
  h.validate();
  if (!phi.same_grid(h)) throw GridError("residual: phi and h live on different grids");
  const auto applied = forward_apply(kernel, phi);
  const std::size_t n = phi.size();
  const std::size_t edge = n / 20;
  ResidualNorms out;
  double sum = 0.0;
  for (std::size_t i = edge; i < n - edge; ++i) {
    const Complex r = cfg.lambda1 * phi.samples[i] - cfg.lambda2 * h.samples[i] - applied.samples[i];
    sum += std::norm(r);
    out.sup = std::max(out.sup, std::abs(r));
  }
  out.l2 = std::sqrt(sum * phi.dx);
  return out;
}

bool SolveReport::has_flag(const std::string& flag) const {
  return std::find(flags.begin(), flags.end(), flag) != flags.end();
}

std::string SolveReport::to_json() const {
  nlohmann::json j;
  j["residual_l2"] = residual_l2;
  j["residual_sup"] = residual_sup;
  j["regularized_fraction"] = regularized_fraction;
  j["denominator_min"] = denominator_min;
  j["l2_ratio"] = std::isfinite(l2_ratio) ? nlohmann::json(l2_ratio) : nlohmann::json("inf");
  j["flags"] = flags;
  j["metadata"] = {{"convention", convention}};
  return j.dump();
}

SolveReport solve(const ConvolutionKernel& kernel, const SampledFunction& h, const SolveConfig& cfg) {
  cfg.validate();
  h.validate();
  SolveReport report;
  report.convention =
      "phi = lambda2 * Finv[H / (lambda1 - K)], K(y) = int k(u) exp(iuy) du; lambda1=" +
      std::to_string(cfg.lambda1) + " lambda2=" + std::to_string(cfg.lambda2) +
      " regularization=" + regularization_name(cfg.regularization);

  Spectrum spectrum = forward_ft(h, cfg.window);
  const std::size_t n = spectrum.size();
  std::vector<Complex> denom(n);
  double max_d = 0.0;
  double min_d = std::numeric_limits<double>::infinity();
  for (std::size_t j = 0; j < n; ++j) {
    denom[j] = cfg.lambda1 - kernel.symbol(spectrum.y(j));
    max_d = std::max(max_d, std::abs(denom[j]));
    min_d = std::min(min_d, std::abs(denom[j]));
  }
  report.denominator_min = min_d;
  if (!(max_d > 0.0)) throw SingularSymbolError("solve: the denominator vanishes on every bin");

  // L2 side condition: ||H/D|| on the full band against the half band
  const double half_band = 0.5 * std::abs(spectrum.y0);
  double full = 0.0;
  double half = 0.0;
  bool infinite = false;
  for (std::size_t j = 0; j < n; ++j) {
    const double hj = std::norm(spectrum.samples[j]);
    if (hj == 0.0) continue;
    const double dj = std::norm(denom[j]);
    if (dj == 0.0) {
      infinite = true;
      continue;
    }
    const double q = hj / dj;
    full += q;
    if (std::abs(spectrum.y(j)) <= half_band) half += q;
  }
  if (infinite || !std::isfinite(full)) {
    report.l2_ratio = std::numeric_limits<double>::infinity();
  } else {
    report.l2_ratio = half > 0.0 ? std::sqrt(full / half) : (full > 0.0 ? std::numeric_limits<double>::infinity() : 1.0);
  }
  if (report.l2_ratio > kIllPosedRatio) report.flags.emplace_back("ILL_POSED");

  std::size_t regularized = 0;
  for (std::size_t j = 0; j < n; ++j) {
    const Complex d = denom[j];
    Complex& v = spectrum.samples[j];
    switch (cfg.regularization) {
      case Regularization::kCutoff:
        if (std::abs(d) < cfg.tau * max_d) {
          v = 0.0;
          ++regularized;
        } else {
          v = cfg.lambda2 * v / d;
        }
        break;
      case Regularization::kTikhonov: {
        const double shift = cfg.alpha * max_d * max_d;
        const double filter = std::norm(d) / (std::norm(d) + shift);
        if (filter < 0.5) ++regularized;
        v = cfg.lambda2 * v * std::conj(d) / (std::norm(d) + shift);
        break;
      }
      case Regularization::kNone:
        if (d == Complex(0.0, 0.0)) throw SingularSymbolError("solve: zero denominator without regularization");
        v = cfg.lambda2 * v / d;
        break;
    }
  }
  report.regularized_fraction = static_cast<double>(regularized) / static_cast<double>(n);
  if (2 * regularized > n) {
    throw SingularSymbolError("solve: " + std::to_string(regularized) + " of " + std::to_string(n) +
                              " spectral bins clipped (more than half); use a coarser grid");
  }

  report.phi = inverse_ft(spectrum);
  ApplyDiagnostics diag;
  (void)forward_apply(kernel, report.phi, &diag);
  if (diag.truncation_warning) report.flags.emplace_back("TRUNCATION");
  const auto norms = residual(kernel, report.phi, h, cfg);
  report.residual_l2 = norms.l2;
  report.residual_sup = norms.sup;
  return report;
}

// ---------------------------------------------------------------------------

namespace {

double lp_norm(const Eigen::VectorXd& r, int p, double dx) {
  return p == 1 ? r.cwiseAbs().sum() * dx : std::sqrt(r.squaredNorm() * dx);
}

Eigen::VectorXd weighted_solve(const Eigen::MatrixXd& a, const Eigen::VectorXd& g, const Eigen::VectorXd& w) {
  const Eigen::MatrixXd aw = w.asDiagonal() * a;
  Eigen::MatrixXd gram = a.transpose() * aw;
  const Eigen::VectorXd rhs = aw.transpose() * g;
  const double jitter = 1e-12 * gram.diagonal().maxCoeff();
  gram.diagonal().array() += jitter;
  Eigen::LDLT<Eigen::MatrixXd> ldlt(gram);
  if (ldlt.info() != Eigen::Success || !ldlt.isPositive()) {
    throw RankError("fit_translates: Gram matrix factorization failed");
  }
  if (ldlt.vectorD().minCoeff() <= 10.0 * jitter) {
    throw RankError("fit_translates: translate Gram matrix is numerically singular");
  }
  return ldlt.solve(rhs);
}

}  // namespace

TranslateFit fit_translates(const ConvolutionKernel& kernel, const SampledFunction& g,
                            const std::vector<double>& nodes, int p) {
  g.validate();
  if (p != 1 && p != 2) throw DomainError("fit_translates: p must be 1 or 2");
  if (nodes.empty() || nodes.size() > 256) throw DomainError("fit_translates: need 1 to 256 nodes");
  const double lo = g.x(0);
  const double hi = g.x(g.size() - 1);
  std::set<double> seen;
  for (double z : nodes) {
    if (!(z >= lo && z <= hi)) throw DomainError("fit_translates: node outside the grid");
    if (!seen.insert(z).second) throw DomainError("fit_translates: nodes must be distinct");
  }

  const auto n = static_cast<Eigen::Index>(g.size());
  const auto m = static_cast<Eigen::Index>(nodes.size());
  Eigen::MatrixXd a(n, m);
  Eigen::VectorXd target(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const double x = g.x(static_cast<std::size_t>(i));
    target(i) = g.samples[static_cast<std::size_t>(i)].real();
    for (Eigen::Index j = 0; j < m; ++j) a(i, j) = kernel.eval(x - nodes[static_cast<std::size_t>(j)]);
  }
  for (Eigen::Index j = 0; j < m; ++j) {
    if (a.col(j).cwiseAbs().maxCoeff() == 0.0) throw RankError("fit_translates: a translate vanishes on the grid");
  }

  TranslateFit fit;
  Eigen::VectorXd w = Eigen::VectorXd::Ones(n);
  Eigen::VectorXd coeffs = weighted_solve(a, target, w);
  fit.iterations = 1;
  if (p == 1) {
    const double floor = 1e-12 * std::max(1.0, target.cwiseAbs().maxCoeff());
    double previous = lp_norm(target - a * coeffs, 1, g.dx);
    for (int it = 0; it < 20; ++it) {
      const Eigen::VectorXd r = target - a * coeffs;
      w = r.cwiseAbs().cwiseMax(floor).cwiseInverse();
      coeffs = weighted_solve(a, target, w);
      ++fit.iterations;
      const double current = lp_norm(target - a * coeffs, 1, g.dx);
      if (std::abs(previous - current) <= 1e-8 * std::max(previous, floor)) break;
      previous = current;
    }
  }
  fit.coeffs.assign(coeffs.data(), coeffs.data() + m);
  fit.residual = lp_norm(target - a * coeffs, p, g.dx);
  return fit;
}

}  // namespace salemlab
