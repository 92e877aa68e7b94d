#include "salemlab/fourier.hpp"

#include <fftw3.h>

#include <algorithm>
#include <charconv>
#include <cmath>
#include <mutex>
#include <numbers>
#include <sstream>

#include "json.hpp"
#include "salemlab/errors.hpp"

namespace salemlab {
namespace {

constexpr double kPi = std::numbers::pi;
const double kInvSqrt2Pi = 1.0 / std::sqrt(2.0 * kPi);

// FFTW's planner is not reentrant; execution is.
std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

bool is_power_of_two(std::size_t n) { return n >= 8 && (n & (n - 1)) == 0; }

// e^{2 pi i t}, exact at quarter turns
Complex unit_phase(double turns) {
  double t = turns - std::floor(turns);
  const double q = 4.0 * t;
  if (q == std::floor(q)) {
    switch (static_cast<int>(q)) {
      case 0:
        return {1.0, 0.0};
      case 1:
        return {0.0, 1.0};
      case 2:
        return {-1.0, 0.0};
      default:
        return {0.0, -1.0};
    }
  }
  if (t > 0.5) t -= 1.0;
  return {std::cos(2.0 * kPi * t), std::sin(2.0 * kPi * t)};
}

double snap_half_integer(double a) {
  const double twice = std::round(2.0 * a);
  return std::abs(2.0 * a - twice) < 1e-9 ? 0.5 * twice : a;
}

// (p * q mod n) / n, with p*q formed before reduction
double turns_of(double p, double q, double n) { return std::fmod(p * q, n) / n; }

std::string format_double(double v) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::general, 17);
  return std::string(buf, res.ptr);
}

double parse_double(std::string_view text) {
  while (!text.empty() && (text.front() == ' ' || text.front() == '\t')) text.remove_prefix(1);
  while (!text.empty() && (text.back() == ' ' || text.back() == '\r' || text.back() == '\t')) text.remove_suffix(1);
  double v = 0.0;
  auto res = std::from_chars(text.data(), text.data() + text.size(), v);
  if (res.ec != std::errc() || res.ptr != text.data() + text.size()) {
    throw GridError("cannot parse number '" + std::string(text) + "'");
  }
  return v;
}

// Shared body of the analysis/synthesis sums.
//   out_j = scale * sum_k in_k e^{sign 2 pi i (a + k)(b + j) / n}
std::vector<Complex> phased_dft(const std::vector<Complex>& in, double a, double b, int sign, double scale) {
  const std::size_t n = in.size();
  const double nd = static_cast<double>(n);
  std::vector<Complex> work(n);
  for (std::size_t k = 0; k < n; ++k) {
    work[k] = in[k] * unit_phase(sign * turns_of(b, static_cast<double>(k), nd));
  }
  fft::transform(work, sign);
  const Complex global = unit_phase(sign * turns_of(a, b, nd));
  for (std::size_t j = 0; j < n; ++j) {
    work[j] *= scale * global * unit_phase(sign * turns_of(a, static_cast<double>(j), nd));
  }
  return work;
}

}  // namespace

namespace fft {

void transform(std::vector<Complex>& data, int sign) {
  const int n = static_cast<int>(data.size());
  auto* ptr = reinterpret_cast<fftw_complex*>(data.data());
  fftw_plan plan;
  {
    std::lock_guard<std::mutex> lock(planner_mutex());
    plan = fftw_plan_dft_1d(n, ptr, ptr, sign < 0 ? FFTW_FORWARD : FFTW_BACKWARD, FFTW_ESTIMATE);
  }
  fftw_execute(plan);
  std::lock_guard<std::mutex> lock(planner_mutex());
  fftw_destroy_plan(plan);
}

}  // namespace fft

SampledFunction SampledFunction::zeros(double half_width, std::size_t n) {
  if (!(half_width > 0.0)) throw GridError("grid half-width must be positive");
  SampledFunction f;
  f.dx = 2.0 * half_width / static_cast<double>(n);
  f.x0 = -0.5 * static_cast<double>(n) * f.dx;
  f.samples.assign(n, Complex(0.0, 0.0));
  f.validate();
  return f;
}

SampledFunction SampledFunction::tabulate(const std::function<Complex(double)>& fn, double half_width,
                                          std::size_t n) {
  auto f = zeros(half_width, n);
  for (std::size_t k = 0; k < n; ++k) f.samples[k] = fn(f.x(k));
  return f;
}

void SampledFunction::validate() const {
  if (!is_power_of_two(samples.size())) {
    throw GridError("grid length must be a power of two >= 8, got " + std::to_string(samples.size()));
  }
  if (!(dx > 0.0) || !std::isfinite(dx) || !std::isfinite(x0)) throw GridError("grid spacing must be positive");
}

bool SampledFunction::same_grid(const SampledFunction& other) const {
  return x0 == other.x0 && dx == other.dx && size() == other.size();
}

double Spectrum::dual_dx() const { return 2.0 * kPi / (static_cast<double>(size()) * dy); }

void Spectrum::validate() const {
  if (!is_power_of_two(samples.size())) {
    throw GridError("spectrum length must be a power of two >= 8, got " + std::to_string(samples.size()));
  }
  if (!(dy > 0.0) || !std::isfinite(dy) || !std::isfinite(y0)) throw GridError("spectrum spacing must be positive");
}

std::vector<double> taper_weights(std::size_t n) {
  std::vector<double> w(n, 1.0);
  const std::size_t m = std::max<std::size_t>(1, n / 20);
  for (std::size_t k = 0; k < m && k < n; ++k) {
    const double v = 0.5 * (1.0 - std::cos(kPi * (static_cast<double>(k) + 0.5) / static_cast<double>(m)));
    w[k] = v;
    w[n - 1 - k] = v;
  }
  return w;
}

Spectrum dual_grid(const SampledFunction& g) {
  g.validate();
  Spectrum s;
  const double n = static_cast<double>(g.size());
  s.dy = 2.0 * kPi / (n * g.dx);
  s.y0 = -0.5 * n * s.dy;
  s.x0 = g.x0;
  s.samples.assign(g.size(), Complex(0.0, 0.0));
  return s;
}

Spectrum forward_ft(const SampledFunction& g, Window window) {
  Spectrum out = dual_grid(g);
  std::vector<Complex> input = g.samples;
  if (window == Window::kTaper) {
    const auto w = taper_weights(input.size());
    for (std::size_t k = 0; k < input.size(); ++k) input[k] *= w[k];
  }
  const double a = snap_half_integer(g.x0 / g.dx);
  const double b = snap_half_integer(out.y0 / out.dy);
  out.samples = phased_dft(input, a, b, +1, g.dx * kInvSqrt2Pi);
  return out;
}

SampledFunction inverse_ft(const Spectrum& spectrum) {
  spectrum.validate();
  SampledFunction out;
  out.dx = spectrum.dual_dx();
  out.x0 = spectrum.x0;
  const double a = snap_half_integer(out.x0 / out.dx);
  const double b = snap_half_integer(spectrum.y0 / spectrum.dy);
  out.samples = phased_dft(spectrum.samples, a, b, -1, spectrum.dy * kInvSqrt2Pi);
  return out;
}

SampledFunction convolve(const SampledFunction& k, const SampledFunction& f) {
  k.validate();
  f.validate();
  if (!k.same_grid(f)) throw GridError("convolve: grids differ");
  const double a_real = k.x0 / k.dx;
  const double a_round = std::round(a_real);
  if (std::abs(a_real - a_round) > 1e-9) throw GridError("convolve: x0/dx must be an integer");
  const auto a = static_cast<long>(a_round);

  const std::size_t n = f.size();
  std::vector<Complex> kp(2 * n, Complex(0.0, 0.0));
  std::vector<Complex> fp(2 * n, Complex(0.0, 0.0));
  std::copy(k.samples.begin(), k.samples.end(), kp.begin());
  std::copy(f.samples.begin(), f.samples.end(), fp.begin());
  fft::transform(kp, -1);
  fft::transform(fp, -1);
  for (std::size_t j = 0; j < 2 * n; ++j) kp[j] *= fp[j];
  fft::transform(kp, +1);

  SampledFunction out = f;
  const double scale = f.dx / static_cast<double>(2 * n);
  for (std::size_t i = 0; i < n; ++i) {
    const long p = static_cast<long>(i) - a;
    out.samples[i] = (p >= 0 && p < static_cast<long>(2 * n - 1)) ? scale * kp[static_cast<std::size_t>(p)]
                                                                 : Complex(0.0, 0.0);
  }
  return out;
}

Spectrum sample_symbol(const KernelInstance& kernel, const SampledFunction& grid) {
  Spectrum s = dual_grid(grid);
  for (std::size_t j = 0; j < s.size(); ++j) s.samples[j] = symbol_eval(kernel, s.y(j));
  return s;
}

// ---------------------------------------------------------------------------

namespace {

template <class Axis>
std::string csv_body(const char* axis_name, std::size_t n, Axis axis, const std::vector<Complex>& data) {
  std::string out = std::string(axis_name) + ",re,im\n";
  for (std::size_t k = 0; k < n; ++k) {
    out += format_double(axis(k));
    out += ',';
    out += format_double(data[k].real());
    out += ',';
    out += format_double(data[k].imag());
    out += '\n';
  }
  return out;
}

nlohmann::json envelope(double origin, double step, const std::vector<Complex>& data) {
  nlohmann::json j;
  j["x0"] = origin;
  j["dx"] = step;
  j["n"] = data.size();
  auto arr = nlohmann::json::array();
  for (const auto& z : data) arr.push_back({z.real(), z.imag()});
  j["data"] = std::move(arr);
  return j;
}

std::vector<Complex> read_data(const nlohmann::json& j) {
  const auto n = j.at("n").get<std::size_t>();
  const auto& arr = j.at("data");
  if (arr.size() != n) throw GridError("json: data length does not match n");
  std::vector<Complex> out;
  out.reserve(n);
  for (const auto& pair : arr) out.emplace_back(pair.at(0).get<double>(), pair.at(1).get<double>());
  return out;
}

}  // namespace

std::string to_csv(const SampledFunction& f) {
  return csv_body("x", f.size(), [&](std::size_t k) { return f.x(k); }, f.samples);
}

std::string to_csv(const Spectrum& s) {
  return csv_body("y", s.size(), [&](std::size_t k) { return s.y(k); }, s.samples);
}

SampledFunction sampled_from_csv(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line)) throw GridError("csv: empty input");
  std::vector<double> xs;
  SampledFunction f;
  while (std::getline(in, line)) {
    if (line.empty() || line == "\r") continue;
    const auto c1 = line.find(',');
    const auto c2 = line.find(',', c1 + 1);
    if (c1 == std::string::npos || c2 == std::string::npos) throw GridError("csv: expected three columns");
    const std::string_view view(line);
    xs.push_back(parse_double(view.substr(0, c1)));
    f.samples.emplace_back(parse_double(view.substr(c1 + 1, c2 - c1 - 1)), parse_double(view.substr(c2 + 1)));
  }
  if (xs.size() < 2) throw GridError("csv: need at least two rows");
  f.x0 = xs.front();
  f.dx = (xs.back() - xs.front()) / static_cast<double>(xs.size() - 1);
  for (std::size_t k = 0; k < xs.size(); ++k) {
    if (std::abs(xs[k] - f.x(k)) > 1e-9 * std::max(1.0, std::abs(xs[k]))) {
      throw GridError("csv: abscissae are not uniformly spaced");
    }
  }
  f.validate();
  return f;
}

std::string to_json(const SampledFunction& f) { return envelope(f.x0, f.dx, f.samples).dump(); }

std::string to_json(const Spectrum& s) {
  auto j = envelope(s.y0, s.dy, s.samples);
  j["signal_x0"] = s.x0;
  return j.dump();
}

SampledFunction sampled_from_json(const std::string& text) {
  try {
    const auto j = nlohmann::json::parse(text);
    SampledFunction f;
    f.x0 = j.at("x0").get<double>();
    f.dx = j.at("dx").get<double>();
    f.samples = read_data(j);
    f.validate();
    return f;
  } catch (const nlohmann::json::exception& e) {
    throw GridError(std::string("json: ") + e.what());
  }
}

Spectrum spectrum_from_json(const std::string& text) {
  try {
    const auto j = nlohmann::json::parse(text);
    Spectrum s;
    s.y0 = j.at("x0").get<double>();
    s.dy = j.at("dx").get<double>();
    s.samples = read_data(j);
    s.x0 = j.contains("signal_x0") ? j.at("signal_x0").get<double>()
                                   : -0.5 * static_cast<double>(s.size()) * s.dual_dx();
    s.validate();
    return s;
  } catch (const nlohmann::json::exception& e) {
    throw GridError(std::string("json: ") + e.what());
  }
}

}  // namespace salemlab
