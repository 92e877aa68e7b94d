#include "salemlab/cli.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <functional>
#include <iostream>
#include <map>
#include <numbers>
#include <optional>
#include <random>
#include <sstream>
#include <stdexcept>

#include "CLI11.hpp"
#include "json.hpp"
#include "salemlab/errors.hpp"
#include "salemlab/fourier.hpp"
#include "salemlab/kernels.hpp"
#include "salemlab/manifest.hpp"
#include "salemlab/numtheory.hpp"
#include "salemlab/solver.hpp"
#include "salemlab/stripscan.hpp"

#ifndef SALEMLAB_VERSION
#define SALEMLAB_VERSION "0.0.0"
#endif

namespace salemlab::cli {
namespace {

namespace fs = std::filesystem;
using nlohmann::json;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// What a subcommand hands back to the driver.
struct Outcome {
  int code = kExitOk;
  json report = json::object();
  std::vector<std::pair<std::string, std::string>> files;  // name, content
  json conventions = json::object();
  std::vector<std::string> inputs;
};

json complex_json(Complex z) { return {{"re", z.real()}, {"im", z.imag()}}; }

// --- shared option groups --------------------------------------------------

struct KernelOptions {
  std::string kernel = "salem";
  double sigma = 0.75;
  bool non_strict = false;
  std::string fracpart_constant = "one";
  std::string digamma_sine = "pi_s";

  void add(CLI::App* app) {
    app->add_option("--kernel", kernel, "Kernel family: salem, fracpart or digamma");
    app->add_option("--sigma", sigma, "Real part sigma of s = sigma + iy");
    app->add_flag("--non-strict", non_strict, "Allow sigma in (0,1) instead of (1/2,1)");
    app->add_option("--fracpart-constant", fracpart_constant, "Constant c in -c zeta(s)/s: one or pi")
        ->check(CLI::IsMember({"one", "pi"}));
    app->add_option("--digamma-sine", digamma_sine, "Sine argument in the digamma symbol: pi_s or s")
        ->check(CLI::IsMember({"pi_s", "s"}));
  }

  SymbolConventions conventions() const {
    SymbolConventions c;
    c.fracpart_constant = fracpart_constant == "pi" ? FracPartConstant::kPi : FracPartConstant::kOne;
    c.digamma_sine = digamma_sine == "s" ? DigammaSine::kS : DigammaSine::kPiS;
    return c;
  }

  KernelInstance instance() const {
    KernelKind kind;
    try {
      kind = parse_kernel_kind(kernel);
    } catch (const DomainError& e) {
      throw UsageError(e.what());
    }
    if (!(sigma > 0.0 && sigma < 1.0)) throw UsageError("sigma must lie in (0,1)");
    if (!non_strict && !(sigma > 0.5)) throw UsageError("sigma must lie in (1/2,1) (use --non-strict for (0,1))");
    return {kind, sigma, non_strict ? SigmaDomain::kStrip : SigmaDomain::kStrict, conventions()};
  }

  json conventions_json() const {
    return {{"fracpart_constant", fracpart_constant}, {"digamma_sine", digamma_sine}};
  }
};

struct FunctionOptions {
  std::string input;
  std::string function;
  double half_width = kDefaultHalfWidth;
  std::size_t n = kDefaultGridSize;
  double shift = 0.0;
  double width = 1.0;

  void add(CLI::App* app, const std::string& what) {
    app->add_option("--input", input, what + " as CSV (x,re,im) or JSON envelope");
    app->add_option("--function", function,
                    "Built-in " + what + ": gaussian, zero, example-h, example-phi, kernel, random");
    app->add_option("--L", half_width, "Grid half-width (grid is [-L, L))");
    app->add_option("--n", n, "Grid points (power of two)");
    app->add_option("--shift", shift, "Centre of the built-in function");
    app->add_option("--width", width, "Width of the built-in gaussian, exp(-((x-shift)/width)^2)");
  }

  SampledFunction load(Outcome& outcome, const KernelOptions* kernel, std::uint64_t seed) const {
    if (!input.empty() && !function.empty()) throw UsageError("give either --input or --function, not both");
    if (!input.empty()) {
      outcome.inputs.push_back(input);
      const std::string text = read_file(input);
      return fs::path(input).extension() == ".json" ? sampled_from_json(text) : sampled_from_csv(text);
    }
    const std::string name = function.empty() ? "gaussian" : function;
    if (!(width > 0.0)) throw UsageError("--width must be positive");
    if (name == "gaussian") {
      const double c = shift;
      const double w = width;
      return SampledFunction::tabulate([c, w](double x) { return Complex(std::exp(-std::pow((x - c) / w, 2)), 0.0); },
                                       half_width, n);
    }
    if (name == "zero") return SampledFunction::zeros(half_width, n);
    if (name == "example-h" || name == "example-phi") {
      const double sigma = kernel != nullptr ? kernel->sigma : 0.75;
      if (name == "example-h") {
        return SampledFunction::tabulate([sigma](double x) { return Complex(example_h(x, sigma), 0.0); }, half_width, n);
      }
      const auto limit = static_cast<std::int64_t>(std::ceil(std::exp(half_width))) + 1;
      if (limit > kSieveCap) throw UsageError("example-phi needs e^L within the sieve cap");
      MertensEvaluator ev(limit);
      return SampledFunction::tabulate([&](double x) { return Complex(example_phi(x, sigma, ev), 0.0); }, half_width, n);
    }
    if (name == "kernel") {
      if (kernel == nullptr) throw UsageError("--function kernel needs a kernel");
      const auto k = kernel->instance();
      const double c = shift;
      return SampledFunction::tabulate([k, c](double x) { return Complex(kernel_eval(k, x - c), 0.0); }, half_width, n);
    }
    if (name == "random") {
      // smooth random test data: a few gaussian bumps with seeded centres and weights
      std::mt19937_64 rng(seed);
      std::uniform_real_distribution<double> centre(-0.25 * half_width, 0.25 * half_width);
      std::uniform_real_distribution<double> weight(-1.0, 1.0);
      std::vector<std::pair<double, double>> bumps;
      for (int i = 0; i < 5; ++i) bumps.emplace_back(centre(rng), weight(rng));
      const double w = width;
      return SampledFunction::tabulate(
          [bumps, w](double x) {
            double v = 0.0;
            for (const auto& [c, a] : bumps) v += a * std::exp(-std::pow((x - c) / w, 2));
            return Complex(v, 0.0);
          },
          half_width, n);
    }
    throw UsageError("unknown --function '" + name + "'");
  }
};

// --- subcommands -----------------------------------------------------------

struct Command {
  CLI::App* app = nullptr;
  std::function<Outcome()> handler;
};

class Driver {
 public:
  Driver() : app_("salemlab: numerical lab for zeta-bearing convolution equations", "salemlab") {
    app_.option_defaults()->always_capture_default();
    app_.set_help_flag("--help", "Print this help message and exit");
    app_.require_subcommand(1);
    app_.set_version_flag("--version", tool_version());
    add_kernel_eval();
    add_symbol();
    add_symbol_check();
    add_ft();
    add_apply();
    add_solve();
    add_residual();
    add_fit_translates();
    add_mertens();
    add_verify_example();
    add_ei_mellin_check();
    add_scan();
    add_calibrate();
    add_rerun();
  }

  int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

 private:
  CLI::App* sub(const std::string& name, const std::string& help) {
    auto* s = app_.add_subcommand(name, help);
    s->add_option("--out", out_dir_, "Write artifacts and manifest.json to this directory");
    s->add_option("--seed", seed_, "Seed for randomized test data");
    return s;
  }

  void add_kernel_eval();
  void add_symbol();
  void add_symbol_check();
  void add_ft();
  void add_apply();
  void add_solve();
  void add_residual();
  void add_fit_translates();
  void add_mertens();
  void add_verify_example();
  void add_ei_mellin_check();
  void add_scan();
  void add_calibrate();
  void add_rerun();

  json given_parameters(const CLI::App* s) const;
  int emit(const std::string& command, const CLI::App* s, Outcome& outcome, std::ostream& out);

  CLI::App app_;
  std::map<std::string, Command> commands_;
  std::string out_dir_;
  std::uint64_t seed_ = 0;

  KernelOptions kernel_;
  FunctionOptions function_;
  FunctionOptions second_;  // residual: h
  std::vector<double> us_{0.0};
  double y_ = 0.0;
  std::vector<double> sigmas_{0.55, 0.75, 0.95};
  std::vector<double> ys_{0.0, 1.0, -1.0, 5.0, -5.0, 10.0, -10.0, 20.0, -20.0};
  double tol_ = 1e-6;
  double quad_tol_ = 1e-10;
  bool inverse_ = false;
  bool no_taper_ = false;
  bool from_phi_ = false;
  double lambda1_ = 0.0;
  double lambda2_ = -1.0;
  std::string regularization_ = "cutoff";
  double tau_ = 1e-8;
  double alpha_ = 1e-10;
  std::vector<double> nodes_;
  std::size_t node_count_ = 0;
  double node_lo_ = -6.0;
  double node_hi_ = 6.0;
  int p_ = 2;
  double x_ = 100.0;
  std::int64_t limit_ = kDefaultSieveLimit;
  std::int64_t csv_max_ = 0;
  double example_sigma_ = 0.75;
  double example_tol_ = 1e-4;
  double big_y_ = 0.0;
  std::vector<double> xs_ = default_example_points();
  bool sweep_ = false;
  double beta_ = 1.0;
  double mellin_sigma_ = 0.75;
  double mellin_t_ = 0.0;
  double mellin_tol_ = 1e-8;
  ScanGrid grid_{};
  double threshold_ = 1e-2;
  double delta_ = 1e-4;
  unsigned threads_ = 0;
  std::string manifest_path_;
};

void Driver::add_kernel_eval() {
  auto* s = sub("kernel-eval", "Evaluate k_sigma(u) = e^{sigma u} k_base(u)");
  kernel_.add(s);
  s->add_option("--u", us_, "Points u (comma-separated)")->delimiter(',');
  commands_["kernel-eval"] = {s, [this] {
    Outcome o;
    const auto k = kernel_.instance();
    json values = json::array();
    for (double u : us_) values.push_back({{"u", u}, {"value", kernel_eval(k, u)}});
    o.report = {{"kernel", kernel_.kernel}, {"sigma", kernel_.sigma}, {"values", values}};
    o.files.emplace_back("result.json", o.report.dump(2));
    return o;
  }};
}

void Driver::add_symbol() {
  auto* s = sub("symbol", "Analytic symbol K(sigma + iy) and its zeta/w factors");
  kernel_.add(s);
  s->add_option("--y", y_, "Frequency y");
  commands_["symbol"] = {s, [this] {
    Outcome o;
    const auto k = kernel_.instance();
    const Complex v = symbol_eval(k, y_);
    const auto f = symbol_factors(k, y_);
    o.report = {{"kernel", kernel_.kernel}, {"sigma", kernel_.sigma}, {"y", y_},
                {"value", complex_json(v)},  {"abs", std::abs(v)},      {"zeta_part", complex_json(f.zeta_part)},
                {"w_part", complex_json(f.w_part)}};
    o.conventions = kernel_.conventions_json();
    o.files.emplace_back("result.json", o.report.dump(2));
    return o;
  }};
}

void Driver::add_symbol_check() {
  auto* s = sub("symbol-check", "Compare the analytic symbol with tanh-sinh quadrature");
  kernel_.add(s);
  s->add_option("--sigmas", sigmas_, "Values of sigma (comma-separated)")->delimiter(',');
  s->add_option("--ys", ys_, "Frequencies y (comma-separated)")->delimiter(',');
  s->add_option("--tol", tol_, "Pass threshold on the relative gap");
  s->add_option("--quad-tol", quad_tol_, "Absolute quadrature tolerance");
  commands_["symbol-check"] = {s, [this] {
    Outcome o;
    const KernelKind kind = kernel_.instance().kind();
    QuadratureConfig quad;
    quad.tol = quad_tol_;
    json rows = json::array();
    std::string csv = "sigma,y,analytic_re,analytic_im,numeric_re,numeric_im,rel_gap,pass\n";
    double worst = 0.0;
    bool all = true;
    for (double sigma : sigmas_) {
      KernelOptions ko = kernel_;
      ko.sigma = sigma;
      const auto k = ko.instance();
      for (double y : ys_) {
        const Complex a = symbol_eval(k, y);
        const auto q = symbol_numeric_report(k, y, quad);
        const double gap = std::abs(a - q.value) / std::abs(a);
        const bool pass = gap <= tol_;
        all = all && pass;
        worst = std::max(worst, gap);
        rows.push_back({{"sigma", sigma}, {"y", y}, {"analytic", complex_json(a)}, {"numeric", complex_json(q.value)},
                        {"rel_gap", gap}, {"error_estimate", q.error_estimate}, {"contour_shift", q.contour_shift},
                        {"pass", pass}});
        char line[512];
        std::snprintf(line, sizeof line, "%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%d\n", sigma, y, a.real(),
                      a.imag(), q.value.real(), q.value.imag(), gap, pass ? 1 : 0);
        csv += line;
      }
    }
    o.report = {{"kernel", std::string(to_string(kind))}, {"tol", tol_}, {"max_rel_gap", worst}, {"pass", all},
                {"points", rows}};
    o.conventions = kernel_.conventions_json();
    o.files.emplace_back("report.json", o.report.dump(2));
    o.files.emplace_back("report.csv", csv);
    o.code = all ? kExitOk : kExitVerification;
    return o;
  }};
}

void Driver::add_ft() {
  auto* s = sub("ft", "Forward (or inverse) continuum Fourier transform on a uniform grid");
  function_.add(s, "function");
  s->add_flag("--inverse", inverse_, "Treat --input as a spectrum JSON and synthesize");
  s->add_flag("--no-taper", no_taper_, "Skip the raised-cosine edge taper");
  commands_["ft"] = {s, [this] {
    Outcome o;
    if (inverse_) {
      if (function_.input.empty()) throw UsageError("--inverse needs --input SPECTRUM.json");
      o.inputs.push_back(function_.input);
      const auto f = inverse_ft(spectrum_from_json(read_file(function_.input)));
      o.report = json::parse(to_json(f));
      o.files.emplace_back("function.json", to_json(f));
      o.files.emplace_back("function.csv", to_csv(f));
      return o;
    }
    const auto g = function_.load(o, nullptr, seed_);
    const auto spec = forward_ft(g, no_taper_ ? Window::kNone : Window::kTaper);
    o.report = json::parse(to_json(spec));
    o.files.emplace_back("spectrum.json", to_json(spec));
    o.files.emplace_back("spectrum.csv", to_csv(spec));
    return o;
  }};
}

void Driver::add_apply() {
  auto* s = sub("apply", "Forward application h = k_sigma * phi");
  kernel_.add(s);
  function_.add(s, "phi");
  commands_["apply"] = {s, [this] {
    Outcome o;
    const auto k = kernel_.instance();
    const auto phi = function_.load(o, &kernel_, seed_);
    ApplyDiagnostics diag;
    const auto h = forward_apply(ConvolutionKernel(k), phi, &diag);
    o.report = json::parse(to_json(h));
    o.report["truncation_warning"] = diag.truncation_warning;
    o.conventions = kernel_.conventions_json();
    o.files.emplace_back("h.json", to_json(h));
    o.files.emplace_back("h.csv", to_csv(h));
    return o;
  }};
}

SolveConfig make_solve_config(double l1, double l2, const std::string& reg, double tau, double alpha, bool no_taper) {
  SolveConfig cfg;
  cfg.lambda1 = l1;
  cfg.lambda2 = l2;
  cfg.tau = tau;
  cfg.alpha = alpha;
  cfg.window = no_taper ? Window::kNone : Window::kTaper;
  if (reg == "cutoff") {
    cfg.regularization = Regularization::kCutoff;
  } else if (reg == "tikhonov") {
    cfg.regularization = Regularization::kTikhonov;
  } else {
    cfg.regularization = Regularization::kNone;
  }
  try {
    cfg.validate();
  } catch (const DomainError& e) {
    throw UsageError(e.what());
  }
  return cfg;
}

void add_solve_flags(CLI::App* s, double& l1, double& l2, std::string& reg, double& tau, double& alpha) {
  s->add_option("--lambda1", l1, "lambda1 >= 0");
  s->add_option("--lambda2", l2, "lambda2");
  s->add_option("--regularization", reg, "cutoff, tikhonov or none")->check(CLI::IsMember({"cutoff", "tikhonov", "none"}));
  s->add_option("--tau", tau, "Spectral cutoff relative to max |lambda1 - K|");
  s->add_option("--alpha", alpha, "Tikhonov parameter relative to max |lambda1 - K|^2");
}

void Driver::add_solve() {
  auto* s = sub("solve", "Solve lambda1 phi = lambda2 h + k_sigma * phi by spectral division");
  kernel_.add(s);
  function_.add(s, "h");
  add_solve_flags(s, lambda1_, lambda2_, regularization_, tau_, alpha_);
  s->add_flag("--from-phi", from_phi_, "Treat the function as phi, build h by forward application and report recovery");
  s->add_flag("--no-taper", no_taper_, "Skip the raised-cosine edge taper");
  commands_["solve"] = {s, [this] {
    Outcome o;
    const auto k = kernel_.instance();
    const auto cfg = make_solve_config(lambda1_, lambda2_, regularization_, tau_, alpha_, no_taper_);
    const ConvolutionKernel ck(k);
    const auto source = function_.load(o, &kernel_, seed_);
    SampledFunction h = source;
    if (from_phi_) {
      h = forward_apply(ck, source);
      for (std::size_t i = 0; i < h.size(); ++i) {
        h.samples[i] = (cfg.lambda1 * source.samples[i] - h.samples[i]) / cfg.lambda2;
      }
    }
    const auto report = solve(ck, h, cfg);
    o.report = json::parse(report.to_json());
    if (from_phi_) {
      double num = 0.0;
      double den = 0.0;
      for (std::size_t i = 0; i < h.size(); ++i) {
        num += std::norm(report.phi.samples[i] - source.samples[i]);
        den += std::norm(source.samples[i]);
      }
      o.report["recovery_rel_l2"] = den > 0.0 ? std::sqrt(num / den) : std::sqrt(num);
    }
    o.conventions = kernel_.conventions_json();
    o.conventions["solve"] = report.convention;
    o.files.emplace_back("report.json", o.report.dump(2));
    o.files.emplace_back("phi.json", to_json(report.phi));
    o.files.emplace_back("phi.csv", to_csv(report.phi));
    return o;
  }};
}

void Driver::add_residual() {
  auto* s = sub("residual", "Norms of lambda1 phi - lambda2 h - k_sigma * phi on the interior 90%");
  kernel_.add(s);
  s->add_option("--phi", function_.input, "phi as CSV or JSON")->required();
  s->add_option("--h", second_.input, "h as CSV or JSON")->required();
  add_solve_flags(s, lambda1_, lambda2_, regularization_, tau_, alpha_);
  commands_["residual"] = {s, [this] {
    Outcome o;
    const auto k = kernel_.instance();
    const auto cfg = make_solve_config(lambda1_, lambda2_, regularization_, tau_, alpha_, false);
    const auto phi = function_.load(o, &kernel_, seed_);
    const auto h = second_.load(o, &kernel_, seed_);
    const auto r = residual(ConvolutionKernel(k), phi, h, cfg);
    o.report = {{"l2", r.l2}, {"sup", r.sup}};
    o.files.emplace_back("report.json", o.report.dump(2));
    return o;
  }};
}

void Driver::add_fit_translates() {
  auto* s = sub("fit-translates", "Fit g by a combination of translates k_sigma(x - z_i)");
  kernel_.add(s);
  function_.add(s, "g");
  s->add_option("--nodes", nodes_, "Translate centres z_i (comma-separated)")->delimiter(',');
  s->add_option("--node-count", node_count_, "Equispaced centres on [node-lo, node-hi] when --nodes is absent");
  s->add_option("--node-lo", node_lo_, "First equispaced centre");
  s->add_option("--node-hi", node_hi_, "Last equispaced centre");
  s->add_option("--p", p_, "Norm: 1 or 2")->check(CLI::IsMember({1, 2}));
  commands_["fit-translates"] = {s, [this] {
    Outcome o;
    const auto k = kernel_.instance();
    const auto g = function_.load(o, &kernel_, seed_);
    std::vector<double> nodes = nodes_;
    if (nodes.empty()) {
      if (node_count_ == 0) throw UsageError("give --nodes or --node-count");
      for (std::size_t i = 0; i < node_count_; ++i) {
        nodes.push_back(node_count_ == 1 ? node_lo_
                                         : node_lo_ + (node_hi_ - node_lo_) * static_cast<double>(i) /
                                                          static_cast<double>(node_count_ - 1));
      }
    }
    const auto fit = fit_translates(ConvolutionKernel(k), g, nodes, p_);
    o.report = {{"nodes", nodes}, {"coeffs", fit.coeffs}, {"residual_p", fit.residual}, {"p", p_},
                {"iterations", fit.iterations}};
    o.files.emplace_back("report.json", o.report.dump(2));
    return o;
  }};
}

void Driver::add_mertens() {
  auto* s = sub("mertens", "Mertens function M(x) from a Moebius sieve");
  s->add_option("--x", x_, "Argument x");
  s->add_option("--limit", limit_, "Sieve limit (at most 1e8)");
  s->add_option("--csv-max", csv_max_, "Also write n,mu,M for n <= this value to mertens.csv");
  commands_["mertens"] = {s, [this] {
    Outcome o;
    if (limit_ < 1 || limit_ > kSieveCap) throw UsageError("--limit must lie in [1, 1e8]");
    const MertensEvaluator ev(limit_);
    o.report = {{"x", x_}, {"M", mertens(x_, ev)}, {"limit", limit_}};
    if (x_ >= 1.0 && std::floor(x_) <= static_cast<double>(ev.limit())) {
      o.report["mu_floor_x"] = ev.mu(static_cast<std::int64_t>(std::floor(x_)));
    }
    o.files.emplace_back("report.json", o.report.dump(2));
    if (csv_max_ > 0) o.files.emplace_back("mertens.csv", mertens_csv(ev, csv_max_));
    return o;
  }};
}

void Driver::add_verify_example() {
  auto* s = sub("verify-example", "Check h = k_sigma * phi for the explicit Mertens example");
  s->add_option("--sigma", example_sigma_, "sigma in (1/2,1)");
  s->add_option("--limit", limit_, "Sieve limit");
  s->add_option("--tol", example_tol_, "Pass threshold on max |lhs - rhs|");
  s->add_option("--Y", big_y_, "Truncation: integrate y in [-Y, 0] (default log(limit))");
  s->add_option("--xs", xs_, "Points x (comma-separated)")->delimiter(',');
  s->add_flag("--sweep", sweep_, "Also run Y = log 10^3 ... log(limit) and require non-increasing errors");
  commands_["verify-example"] = {s, [this] {
    Outcome o;
    if (!(example_sigma_ > 0.0 && example_sigma_ < 1.0)) throw UsageError("sigma must lie in (0,1)");
    if (!(example_sigma_ > 0.5)) throw UsageError("sigma must lie in (1/2,1) for the example");
    if (limit_ < 1 || limit_ > kSieveCap) throw UsageError("--limit must lie in [1, 1e8]");
    const MertensEvaluator ev(limit_);
    const double Y = big_y_ > 0.0 ? big_y_ : std::log(static_cast<double>(limit_));
    const auto report = verify_example(example_sigma_, xs_, Y, example_tol_, ev);
    o.report = json::parse(report.to_json());
    bool pass = report.pass;
    if (sweep_) {
      json sweep = json::array();
      double previous = std::numeric_limits<double>::infinity();
      bool monotone = true;
      for (int e = 3; std::pow(10.0, e) <= static_cast<double>(limit_) * (1.0 + 1e-12); ++e) {
        const double ye = std::log(std::pow(10.0, e));
        const auto r = verify_example(example_sigma_, xs_, ye, example_tol_, ev);
        monotone = monotone && r.max_abs_err <= previous;
        previous = r.max_abs_err;
        sweep.push_back({{"Y", ye}, {"max_abs_err", r.max_abs_err}, {"omitted_bound", r.omitted_bound}});
      }
      o.report["sweep"] = sweep;
      o.report["monotone"] = monotone;
      pass = pass && monotone;
      o.report["pass"] = pass;
    }
    o.files.emplace_back("report.json", o.report.dump(2));
    o.code = pass ? kExitOk : kExitVerification;
    return o;
  }};
}

void Driver::add_ei_mellin_check() {
  auto* s = sub("ei-mellin-check", "Check int_0^inf Ei(-beta t) t^{s-1} dt = -Gamma(s)/(s beta^s)");
  s->add_option("--beta", beta_, "beta > 0");
  s->add_option("--sigma", mellin_sigma_, "Re s > 0");
  s->add_option("--t", mellin_t_, "Im s");
  s->add_option("--tol", mellin_tol_, "Pass threshold on the relative gap");
  commands_["ei-mellin-check"] = {s, [this] {
    Outcome o;
    if (!(beta_ > 0.0)) throw UsageError("beta must be positive");
    if (!(mellin_sigma_ > 0.0)) throw UsageError("Re s must be positive");
    const auto r = ei_mellin_check(beta_, Complex(mellin_sigma_, mellin_t_), mellin_tol_);
    o.report = {{"beta", beta_},          {"s", complex_json(Complex(mellin_sigma_, mellin_t_))},
                {"numeric", complex_json(r.numeric)}, {"analytic", complex_json(r.analytic)},
                {"rel_gap", r.rel_gap},   {"tol", mellin_tol_},
                {"pass", r.pass}};
    o.files.emplace_back("report.json", o.report.dump(2));
    o.code = r.pass ? kExitOk : kExitVerification;
    return o;
  }};
}

void Driver::add_scan() {
  auto* s = sub("scan", "Scan |K| over a rectangle of the strip and classify the band");
  kernel_.add(s);
  s->add_option("--sigma-lo", grid_.sigma_lo, "Lowest sigma");
  s->add_option("--sigma-hi", grid_.sigma_hi, "Highest sigma");
  s->add_option("--t-lo", grid_.t_lo, "Lowest t");
  s->add_option("--t-hi", grid_.t_hi, "Highest t");
  s->add_option("--d-sigma", grid_.d_sigma, "Step in sigma");
  s->add_option("--dt", grid_.dt, "Step in t");
  s->add_option("--threshold", threshold_, "Keep minima whose zeta factor is below this");
  s->add_option("--delta", delta_, "Non-vanishing threshold for the Wiener classification");
  s->add_option("--threads", threads_, "Worker threads (0: hardware concurrency)");
  commands_["scan"] = {s, [this] {
    Outcome o;
    KernelKind kind;
    try {
      kind = parse_kernel_kind(kernel_.kernel);
    } catch (const DomainError& e) {
      throw UsageError(e.what());
    }
    ScanOptions opts;
    opts.strict = !kernel_.non_strict;
    opts.threshold = threshold_;
    opts.threads = threads_;
    opts.conventions = kernel_.conventions();
    if (!(delta_ > 0.0)) throw UsageError("delta must be positive");
    try {
      grid_.validate(opts.strict);
    } catch (const DomainError& e) {
      throw UsageError(e.what());
    }
    const auto result = scan_symbol(kind, grid_, opts);
    const auto wr = wiener_report(result, delta_);
    o.report = json::parse(wr.to_json(result));
    o.conventions = kernel_.conventions_json();
    o.files.emplace_back("summary.json", o.report.dump(2));
    o.files.emplace_back("scan.csv", result.to_csv());
    return o;
  }};
}

void Driver::add_calibrate() {
  auto* s = sub("calibrate", "Measure the FRACPART constant and the DIGAMMA sine convention");
  s->add_option("--tol", tol_, "Relative tolerance for the fit and per-point stability");
  s->add_option("--quad-tol", quad_tol_, "Absolute quadrature tolerance");
  commands_["calibrate"] = {s, [this] {
    Outcome o;
    QuadratureConfig quad;
    quad.tol = quad_tol_;
    const auto c = calibrate_conventions(default_calibration_nodes(), tol_, quad);
    json frac_points = json::array();
    for (const auto& p : c.fracpart_points) {
      frac_points.push_back({{"sigma", p.sigma}, {"y", p.y}, {"ratio", complex_json(p.ratio)}});
    }
    json fits = json::array();
    for (const auto& f : c.digamma_fits) {
      fits.push_back({{"convention", f.label}, {"fitted", f.fitted}, {"max_ratio_dev", f.max_ratio_dev}, {"stable", f.stable}});
    }
    const std::string frac_choice = c.fracpart_choice == FracPartConstant::kOne ? "one" : "pi";
    const std::string sine_choice = c.digamma_choice == DigammaSine::kPiS ? "pi_s" : "s";
    o.report = {{"fracpart", {{"fitted_c", c.fracpart_fitted}, {"choice", frac_choice}, {"rel_gap", c.fracpart_rel_gap},
                              {"stable", c.fracpart_stable}, {"points", frac_points}}},
                {"digamma", {{"fits", fits}, {"choice", sine_choice}, {"stable", c.digamma_stable}}},
                {"tol", tol_},
                {"pass", c.pass(tol_)}};
    o.conventions = {{"fracpart_constant", frac_choice},
                     {"fracpart_fitted_c", c.fracpart_fitted},
                     {"digamma_sine", sine_choice}};
    o.files.emplace_back("calibration.json", o.report.dump(2));
    o.code = c.pass(tol_) ? kExitOk : kExitVerification;
    return o;
  }};
}

void Driver::add_rerun() {
  auto* s = app_.add_subcommand("rerun", "Replay a manifest and compare the output digests");
  s->add_option("--manifest", manifest_path_, "manifest.json of an earlier run")->required();
  s->add_option("--out", out_dir_, "Directory for the replayed artifacts")->required();
}

json Driver::given_parameters(const CLI::App* s) const {
  json params = json::object();
  for (const CLI::Option* opt : s->get_options()) {
    const std::string name = opt->get_single_name();
    if (name == "help" || name == "out" || name == "seed" || opt->count() == 0) continue;
    if (opt->get_expected_min() == 0) {
      params[name] = true;
    } else {
      const auto& res = opt->results();
      params[name] = res.size() == 1 ? json(res.front()) : json(res);
    }
  }
  return params;
}

std::vector<std::string> replay_args(const RunManifest& m, const std::string& out_dir) {
  std::vector<std::string> args{m.command};
  for (const auto& [name, value] : m.parameters.items()) {
    if (value.is_boolean()) {
      if (value.get<bool>()) args.push_back("--" + name);
      continue;
    }
    std::string joined;
    if (value.is_array()) {
      for (const auto& v : value) joined += (joined.empty() ? "" : ",") + v.get<std::string>();
    } else {
      joined = value.get<std::string>();
    }
    args.push_back("--" + name);
    args.push_back(joined);
  }
  args.push_back("--seed");
  args.push_back(std::to_string(m.seed));
  args.push_back("--out");
  args.push_back(out_dir);
  return args;
}

int Driver::emit(const std::string& command, const CLI::App* s, Outcome& outcome, std::ostream& out) {
  out << outcome.report.dump() << '\n';
  if (out_dir_.empty()) return outcome.code;
  const fs::path dir(out_dir_);
  fs::create_directories(dir);
  RunManifest m;
  m.command = command;
  m.parameters = given_parameters(s);
  m.tool_version = tool_version();
  m.seed = seed_;
  m.conventions = outcome.conventions;
  for (const auto& path : outcome.inputs) m.input_digests[fs::absolute(path).lexically_normal().string()] = sha256_file(path);
  for (const auto& [name, content] : outcome.files) {
    write_file(dir / name, content);
    m.outputs[name] = sha256_hex(content);
  }
  write_file(dir / "manifest.json", m.to_json().dump(2) + "\n");
  return outcome.code;
}

int Driver::run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app_.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app_.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app_.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::CallForVersion&) {
    out << tool_version() << '\n';
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "usage error: " << e.what() << '\n';
    for (const auto* s : app_.get_subcommands()) {
      if (s->parsed()) {
        err << s->help();
        return kExitUsage;
      }
    }
    err << app_.help();
    return kExitUsage;
  }

  const CLI::App* chosen = app_.get_subcommands().front();
  const std::string name = chosen->get_name();
  try {
    if (name == "rerun") {
      const auto manifest = RunManifest::from_json(json::parse(read_file(manifest_path_)));
      for (const auto& [path, digest] : manifest.input_digests) {
        if (sha256_file(path) != digest) {
          err << "input changed since the recorded run: " << path << '\n';
          return kExitVerification;
        }
      }
      Driver replay;
      std::ostringstream replay_out;
      const int code = replay.run(replay_args(manifest, out_dir_), replay_out, err);
      if (!fs::exists(fs::path(out_dir_) / "manifest.json")) {
        err << "replay did not produce a manifest (exit " << code << ")\n";
        return kExitVerification;
      }
      const auto fresh = RunManifest::from_json(json::parse(read_file(fs::path(out_dir_) / "manifest.json")));
      json mismatches = json::array();
      for (const auto& [file, digest] : manifest.outputs) {
        auto it = fresh.outputs.find(file);
        if (it == fresh.outputs.end() || it->second != digest) mismatches.push_back(file);
      }
      const bool identical = mismatches.empty() && fresh.outputs.size() == manifest.outputs.size();
      out << json{{"command", manifest.command}, {"exit_code", code}, {"identical", identical}, {"mismatches", mismatches}}.dump()
          << '\n';
      return identical ? kExitOk : kExitVerification;
    }
    Outcome outcome = commands_.at(name).handler();
    return emit(name, chosen, outcome, out);
  } catch (const UsageError& e) {
    err << "usage error: " << e.what() << '\n' << chosen->help();
    return kExitUsage;
  } catch (const PoleError& e) {
    err << "numerical error: " << e.what() << '\n';
    return kExitNumerical;
  } catch (const DomainError& e) {
    err << "usage error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const LimitError& e) {
    err << "usage error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const BudgetError& e) {
    err << "usage error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const Error& e) {
    err << "numerical error: " << e.what() << '\n';
    return kExitNumerical;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitNumerical;
  }
}

}  // namespace

const char* tool_version() { return SALEMLAB_VERSION; }

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  Driver driver;
  return driver.run(args, out, err);
}

int dispatch(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return run(args, std::cout, std::cerr);
}

}  // namespace salemlab::cli
