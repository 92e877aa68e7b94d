#include "salemlab/kernels.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <numbers>
#include <string>

#include "salemlab/errors.hpp"
#include "salemlab/quadrature.hpp"

namespace salemlab {
namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kTwoPow53 = 9007199254740992.0;

// Half-widths of the analyticity strips minus a safety margin.
constexpr double kSalemShift = 0.5 * kPi - 0.25;
constexpr double kDigammaShift = kPi - 0.5;

// psi(x+1) - log x = sum_m c_m x^{-m} for large x
struct AsymptoticTerm {
  int power;
  double coeff;
};
constexpr std::array<AsymptoticTerm, 7> kPsiTail = {{{1, 0.5},
                                                     {2, -1.0 / 12.0},
                                                     {4, 1.0 / 120.0},
                                                     {6, -1.0 / 252.0},
                                                     {8, 1.0 / 240.0},
                                                     {10, -1.0 / 132.0},
                                                     {12, 691.0 / 32760.0}}};

constexpr double kDigammaAsymptoticFrom = 20.0;  // use the series for e^u >= 20
constexpr double kDigammaTailFrom = 100.0;       // closed-form quadrature tail for e^u >= 100

// psi(x+1) - log x for x >= 20, as a polynomial in r = 1/x
double psi_tail_series(double r) {
  double acc = 0.0;
  for (auto it = kPsiTail.rbegin(); it != kPsiTail.rend(); ++it) {
    acc += it->coeff * std::pow(r, it->power - 1);
  }
  return acc;
}

// e^{s(u + i theta)} e^{theta Im s}: the weight on the shifted line with the
// e^{-theta y} factor removed.
Complex shifted_exp(Complex s, double u, double theta) {
  return std::exp(Complex(s.real() * u, s.imag() * u + s.real() * theta));
}

Complex salem_base(Complex w) {
  const Complex z = std::exp(w);
  if (z.real() > 0.0) {
    const Complex q = std::exp(-z);
    return q / (1.0 + q);
  }
  return 1.0 / (std::exp(z) + 1.0);
}

Complex digamma_base(Complex w) { return specfun::digamma(std::exp(w) + 1.0) - w; }

double panel_width(double y) { return std::min(0.5, kPi / std::max(std::abs(y), 1.0)); }

// Smallest U (searched on a grid) with bound(U) < target.
template <class Bound>
double find_cutoff(Bound&& bound, double start, double step, double target, double limit) {
  double u = start;
  while (bound(u) >= target) {
    u += step;
    if (u > limit) throw ConvergenceError("symbol_numeric: tail bound never drops below tolerance");
  }
  return u;
}

void require(bool ok, const char* what) {
  if (!ok) throw ConvergenceError(what);
}

SymbolQuadrature shifted_line_symbol(const KernelInstance& kernel, double y,
                                     const QuadratureConfig& quad) {
  const double sigma = kernel.sigma();
  const Complex s(sigma, y);
  const bool salem = kernel.kind() == KernelKind::kSalem;
  double theta = 0.0;
  if (quad.contour_shift && y != 0.0) {
    theta = std::copysign(salem ? kSalemShift : kDigammaShift, y);
  }
  const double target = quad.tol / 10.0;

  // left end: |k_base| <= 1 (SALEM) or gamma + |w| + 2 (DIGAMMA) for u <= -2
  auto left_bound = [&](double u) {
    const double decay = std::exp(-sigma * u) / sigma;
    return salem ? decay : decay * (2.0 + kPi + u + 1.0 / sigma);
  };
  const double u_left = -find_cutoff(left_bound, 2.0, 1.0, target, 1e5);

  double u_right = 0.0;
  if (salem) {
    const double c = std::cos(theta);
    auto right_bound = [&](double u) {
      const double re = c * std::exp(u);
      if (re <= sigma + 1.0) return 1.0e300;
      return 2.0 * std::exp(sigma * u - re) / (re - sigma);
    };
    u_right = find_cutoff(right_bound, 0.0, 0.25, target, 50.0);
  } else {
    u_right = std::log(kDigammaTailFrom);
  }

  auto integrand = [&](double u) -> Complex {
    const Complex w(u, theta);
    const Complex base = salem ? salem_base(w) : digamma_base(w);
    return shifted_exp(s, u, theta) * base;
  };

  const double width = panel_width(y);
  const auto panels = static_cast<long>(std::ceil((u_right - u_left) / width));
  if (panels > quad.max_panels) throw ConvergenceError("symbol_numeric: panel budget exceeded");

  auto result = quad::composite(integrand, u_left, u_right, width, 0.8 * quad.tol, quad.max_level);
  require(result.converged, "symbol_numeric: tanh-sinh did not reach the tolerance");

  Complex scaled = result.value;
  if (!salem) {
    // \int_{U}^{inf} e^{s w} sum_m c_m e^{-m w} dw along the shifted line
    for (const auto& term : kPsiTail) {
      const Complex sm = s - static_cast<double>(term.power);
      scaled += term.coeff * shifted_exp(sm, u_right, theta) / (-sm);
    }
  }

  const double descale = std::exp(-theta * y);
  SymbolQuadrature out;
  out.value = descale * scaled;
  out.error_estimate = descale * (result.error + 2.0 * target);
  out.evaluations = result.evaluations;
  out.contour_shift = theta;
  return out;
}

SymbolQuadrature fracpart_symbol(const KernelInstance& kernel, double y, const QuadratureConfig& quad) {
  const double sigma = kernel.sigma();
  const Complex s(sigma, y);
  const double width = panel_width(y);

  // u > 0: integrand e^{(s-1)u}; the remainder past u_cut is a pure exponential
  const double u_cut = std::min(40.0, std::log(10.0 / ((1.0 - sigma) * quad.tol)) / (1.0 - sigma));
  auto right = quad::composite([&](double u) { return std::exp((s - 1.0) * u); }, 0.0, u_cut, width,
                               0.25 * quad.tol, quad.max_level);
  require(right.converged, "symbol_numeric: tanh-sinh did not reach the tolerance");
  Complex total = right.value + std::exp((s - 1.0) * u_cut) / (1.0 - s);

  // u < 0, in x = e^{-u} > 1: sum over unit pieces of (x - n) x^{-s-1}
  constexpr int kPieces = 1000;
  const double piece_tol = 0.5 * quad.tol / kPieces;
  double err = right.error;
  long evals = right.evaluations;
  for (int n = 1; n < kPieces; ++n) {
    const double base = n;
    auto piece = quad::tanh_sinh(
        [&](double x) { return (x - base) * std::exp((-s - 1.0) * std::log(x)); }, base, base + 1.0,
        piece_tol, quad.max_level);
    require(piece.converged, "symbol_numeric: tanh-sinh did not reach the tolerance");
    total += piece.value;
    err += piece.error;
    evals += piece.evaluations;
  }
  // \int_N^inf {x} f(x) dx with f = x^{-s-1}: N^{-s}/(2s) - f/12 + f''/720 - f''''/30240
  const double big_n = kPieces;
  const Complex f0 = std::exp((-s - 1.0) * std::log(big_n));
  const Complex f2 = (s + 1.0) * (s + 2.0) * f0 / (big_n * big_n);
  const Complex f4 = (s + 3.0) * (s + 4.0) * f2 / (big_n * big_n);
  total += f0 * big_n / (2.0 * s) - f0 / 12.0 + f2 / 720.0 - f4 / 30240.0;

  SymbolQuadrature out;
  out.value = total;
  out.error_estimate = err + quad.tol / 4.0;
  out.evaluations = evals;
  return out;
}

std::string lower(std::string_view text) {
  std::string out(text);
  std::transform(out.begin(), out.end(), out.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return out;
}

}  // namespace

std::string_view to_string(KernelKind kind) {
  switch (kind) {
    case KernelKind::kSalem:
      return "salem";
    case KernelKind::kFracPart:
      return "fracpart";
    case KernelKind::kDigamma:
      return "digamma";
  }
  return "unknown";
}

KernelKind parse_kernel_kind(std::string_view name) {
  const auto key = lower(name);
  if (key == "salem") return KernelKind::kSalem;
  if (key == "fracpart") return KernelKind::kFracPart;
  if (key == "digamma") return KernelKind::kDigamma;
  throw DomainError("unknown kernel '" + std::string(name) + "' (expected salem, fracpart or digamma)");
}

KernelInstance::KernelInstance(KernelKind kind, double sigma, SigmaDomain domain,
                               SymbolConventions conventions)
    : kind_(kind), sigma_(sigma), conventions_(conventions) {
  if (!(sigma > 0.0 && sigma < 1.0)) {
    throw DomainError("sigma must lie in (0,1)");
  }
  if (domain == SigmaDomain::kStrict && !(sigma > 0.5)) {
    throw DomainError("sigma must lie in (1/2,1) for a strict kernel");
  }
}

double kernel_base(KernelKind kind, double u) {
  switch (kind) {
    case KernelKind::kSalem: {
      const double v = std::exp(u);
      if (v > 30.0) return std::exp(-v - std::log1p(std::exp(-v)));
      return 1.0 / (std::exp(v) + 1.0);
    }
    case KernelKind::kFracPart: {
      const double x = std::exp(-u);
      return x < kTwoPow53 ? specfun::frac(x) : 0.0;
    }
    case KernelKind::kDigamma: {
      const double v = std::exp(u);
      if (v >= kDigammaAsymptoticFrom) return std::exp(-u) * psi_tail_series(std::exp(-u));
      return specfun::digamma(v + 1.0) - u;
    }
  }
  return 0.0;
}

double kernel_eval(const KernelInstance& kernel, double u) {
  const double sigma = kernel.sigma();
  switch (kernel.kind()) {
    case KernelKind::kSalem: {
      const double v = std::exp(u);
      if (v > 30.0) return std::exp(sigma * u - v - std::log1p(std::exp(-v)));
      return std::exp(sigma * u) / (std::exp(v) + 1.0);
    }
    case KernelKind::kFracPart: {
      if (u > 0.0) return std::exp((sigma - 1.0) * u);
      return std::exp(sigma * u) * kernel_base(KernelKind::kFracPart, u);
    }
    case KernelKind::kDigamma: {
      if (std::exp(u) >= kDigammaAsymptoticFrom) {
        return std::exp((sigma - 1.0) * u) * psi_tail_series(std::exp(-u));
      }
      return std::exp(sigma * u) * (specfun::digamma(std::exp(u) + 1.0) - u);
    }
  }
  return 0.0;
}

SymbolFactors symbol_factors(const KernelInstance& kernel, double y) {
  const StripPoint point(kernel.sigma(), y);
  const Complex s = point.value();
  switch (kernel.kind()) {
    case KernelKind::kSalem:
      return {specfun::zeta(s), specfun::gamma(s) * (-specfun::expm1((1.0 - s) * std::numbers::ln2))};
    case KernelKind::kFracPart: {
      const double c = kernel.conventions().fracpart_constant == FracPartConstant::kPi ? kPi : 1.0;
      return {specfun::zeta(s), -c / s};
    }
    case KernelKind::kDigamma: {
      const Complex arg = kernel.conventions().digamma_sine == DigammaSine::kPiS ? kPi * s : s;
      return {specfun::zeta(1.0 - s), -kPi * specfun::inv_sin(arg)};
    }
  }
  return {};
}

Complex symbol_eval(const KernelInstance& kernel, double y) {
  if (kernel.kind() == KernelKind::kSalem) {
    const StripPoint point(kernel.sigma(), y);
    const Complex s = point.value();
    return specfun::gamma(s) * specfun::eta(s);
  }
  const auto f = symbol_factors(kernel, y);
  return f.zeta_part * f.w_part;
}

SymbolQuadrature symbol_numeric_report(const KernelInstance& kernel, double y, const QuadratureConfig& quad) {
  StripPoint point(kernel.sigma(), y);
  if (!(quad.tol > 0.0) || quad.max_level <= 0 || quad.max_panels <= 0) {
    throw DomainError("symbol_numeric: quadrature budget must be positive");
  }
  if (kernel.kind() == KernelKind::kFracPart) return fracpart_symbol(kernel, y, quad);
  return shifted_line_symbol(kernel, y, quad);
}

Complex symbol_numeric(const KernelInstance& kernel, double y, const QuadratureConfig& quad) {
  return symbol_numeric_report(kernel, y, quad).value;
}

double l1_norm(const KernelInstance& kernel, const QuadratureConfig& quad) {
  return symbol_numeric(kernel, 0.0, quad).real();
}

// ---------------------------------------------------------------------------

std::vector<std::pair<double, double>> default_calibration_nodes() {
  std::vector<std::pair<double, double>> nodes;
  for (double sigma : {0.55, 0.75, 0.95}) {
    for (double y : {0.0, 2.0, 5.0, 9.0, 14.0}) nodes.emplace_back(sigma, y);
  }
  return nodes;
}

namespace {

double real_scale_fit(const std::vector<CalibrationPoint>& points) {
  double num = 0.0;
  double den = 0.0;
  for (const auto& p : points) {
    num += (std::conj(p.base) * p.numeric).real();
    den += std::norm(p.base);
  }
  return num / den;
}

double max_ratio_deviation(const std::vector<CalibrationPoint>& points, double chosen) {
  double dev = 0.0;
  for (const auto& p : points) dev = std::max(dev, std::abs(p.ratio - chosen) / chosen);
  return dev;
}

}  // namespace

bool CalibrationResult::pass(double tol) const {
  return fracpart_rel_gap <= tol && fracpart_stable && digamma_stable;
}

CalibrationResult calibrate_conventions(const std::vector<std::pair<double, double>>& nodes, double tol,
                                        const QuadratureConfig& quad) {
  CalibrationResult out;

  for (const auto& [sigma, y] : nodes) {
    const KernelInstance kernel(KernelKind::kFracPart, sigma, SigmaDomain::kStrip);
    const Complex s(sigma, y);
    CalibrationPoint p{sigma, y, symbol_numeric(kernel, y, quad), -specfun::zeta(s) / s, {}};
    p.ratio = p.numeric / p.base;
    out.fracpart_points.push_back(p);
  }
  out.fracpart_fitted = real_scale_fit(out.fracpart_points);
  const double gap_one = std::abs(out.fracpart_fitted - 1.0);
  const double gap_pi = std::abs(out.fracpart_fitted - kPi) / kPi;
  out.fracpart_choice = gap_one <= gap_pi ? FracPartConstant::kOne : FracPartConstant::kPi;
  const double chosen = out.fracpart_choice == FracPartConstant::kOne ? 1.0 : kPi;
  out.fracpart_rel_gap = std::min(gap_one, gap_pi);
  out.fracpart_stable = max_ratio_deviation(out.fracpart_points, chosen) <= tol;

  std::vector<Complex> digamma_numeric;
  for (const auto& [sigma, y] : nodes) {
    const KernelInstance kernel(KernelKind::kDigamma, sigma, SigmaDomain::kStrip);
    digamma_numeric.push_back(symbol_numeric(kernel, y, quad));
  }
  const std::array<DigammaSine, 2> conventions = {DigammaSine::kPiS, DigammaSine::kS};
  for (std::size_t c = 0; c < conventions.size(); ++c) {
    std::vector<CalibrationPoint> points;
    for (std::size_t j = 0; j < nodes.size(); ++j) {
      const auto [sigma, y] = nodes[j];
      const Complex s(sigma, y);
      const Complex arg = conventions[c] == DigammaSine::kPiS ? kPi * s : s;
      CalibrationPoint p{sigma, y, digamma_numeric[j], -kPi * specfun::zeta(1.0 - s) * specfun::inv_sin(arg), {}};
      p.ratio = p.numeric / p.base;
      points.push_back(p);
    }
    auto& fit = out.digamma_fits[c];
    fit.label = conventions[c] == DigammaSine::kPiS ? "sin(pi*s)" : "sin(s)";
    fit.fitted = real_scale_fit(points);
    fit.max_ratio_dev = max_ratio_deviation(points, 1.0);
    fit.stable = fit.max_ratio_dev <= tol && std::abs(fit.fitted - 1.0) <= tol;
  }
  const bool pi_s_better = out.digamma_fits[0].max_ratio_dev <= out.digamma_fits[1].max_ratio_dev;
  out.digamma_choice = pi_s_better ? DigammaSine::kPiS : DigammaSine::kS;
  out.digamma_stable = out.digamma_fits[pi_s_better ? 0 : 1].stable;
  return out;
}

}  // namespace salemlab
