#pragma once

// Uniform grids and the continuum Fourier pair
//
//   G(y) = (2 pi)^{-1/2} \int g(v) e^{+ivy} dv,   f(x) = (2 pi)^{-1/2} \int G(y) e^{-ixy} dy
//
// evaluated by FFT with the phase of the grid origin folded in, so that the
// outputs are samples of the continuum transforms and not raw DFT bins.

#include <cstddef>
#include <functional>
#include <string>
#include <vector>

#include "salemlab/kernels.hpp"
#include "salemlab/specfun.hpp"

namespace salemlab {

inline constexpr double kDefaultHalfWidth = 24.0;
inline constexpr std::size_t kDefaultGridSize = 4096;

struct SampledFunction {
  double x0 = 0.0;
  double dx = 1.0;
  std::vector<Complex> samples;

  std::size_t size() const { return samples.size(); }
  double x(std::size_t k) const { return x0 + static_cast<double>(k) * dx; }

  /// Zero function on [-L, L) with n points (x0 = -n dx / 2).
  static SampledFunction zeros(double half_width = kDefaultHalfWidth, std::size_t n = kDefaultGridSize);
  static SampledFunction tabulate(const std::function<Complex(double)>& f,
                                  double half_width = kDefaultHalfWidth, std::size_t n = kDefaultGridSize);

  /// GridError unless n >= 8 is a power of two and dx > 0.
  void validate() const;
  bool same_grid(const SampledFunction& other) const;
};

struct Spectrum {
  double y0 = 0.0;
  double dy = 1.0;
  double x0 = 0.0;  // origin of the sampled function this spectrum belongs to
  std::vector<Complex> samples;

  std::size_t size() const { return samples.size(); }
  double y(std::size_t j) const { return y0 + static_cast<double>(j) * dy; }
  /// Spacing of the dual (space) grid, 2 pi / (n dy).
  double dual_dx() const;
  void validate() const;
};

enum class Window { kNone, kTaper };

/// Raised-cosine weights on the outer 5% of an n-point grid (1 elsewhere).
std::vector<double> taper_weights(std::size_t n);

/// Dual grid of an n-point grid with spacing dx: dy = 2 pi / (n dx), y0 = -n dy / 2.
Spectrum dual_grid(const SampledFunction& g);

Spectrum forward_ft(const SampledFunction& g, Window window = Window::kTaper);
SampledFunction inverse_ft(const Spectrum& spectrum);

/// Linear convolution (k * f)(x_i) = dx sum_m k(x_i - x_m) f(x_m), zero-padded to
/// 2N. Requires x0/dx to be an integer so that lags land on grid points.
SampledFunction convolve(const SampledFunction& k, const SampledFunction& f);

/// symbol_eval on the dual grid of `grid`.
Spectrum sample_symbol(const KernelInstance& kernel, const SampledFunction& grid);

namespace fft {
/// In-place unnormalized DFT; sign = -1 uses e^{-2 pi i jk/n}, +1 uses e^{+2 pi i jk/n}.
void transform(std::vector<Complex>& data, int sign);
}  // namespace fft

// --- serialization ---------------------------------------------------------

/// Header "x,re,im", one row per sample, 17 significant digits.
std::string to_csv(const SampledFunction& f);
std::string to_csv(const Spectrum& s);
SampledFunction sampled_from_csv(const std::string& text);

/// {"x0":…, "dx":…, "n":…, "data":[[re,im],…]}; round-trips bit-exactly.
std::string to_json(const SampledFunction& f);
/// Same envelope with x0/dx holding y0/dy, plus "signal_x0".
std::string to_json(const Spectrum& s);
SampledFunction sampled_from_json(const std::string& text);
Spectrum spectrum_from_json(const std::string& text);

}  // namespace salemlab
