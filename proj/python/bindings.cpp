#include <pybind11/complex.h>
#include <pybind11/functional.h>
#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <cmath>

#include "salemlab/errors.hpp"
#include "salemlab/fourier.hpp"
#include "salemlab/kernels.hpp"
#include "salemlab/numtheory.hpp"
#include "salemlab/solver.hpp"
#include "salemlab/specfun.hpp"
#include "salemlab/stripscan.hpp"

namespace py = pybind11;
using namespace salemlab;

namespace {

using ComplexArray = py::array_t<Complex, py::array::c_style | py::array::forcecast>;

ComplexArray to_array(const std::vector<Complex>& v) {
  ComplexArray a(static_cast<py::ssize_t>(v.size()));
  std::copy(v.begin(), v.end(), a.mutable_data());
  return a;
}

std::vector<Complex> from_array(const ComplexArray& a) {
  if (a.ndim() != 1) throw GridError("samples must be one-dimensional");
  return {a.data(), a.data() + a.size()};
}

KernelInstance make_kernel(const std::string& kind, double sigma, bool strict, const std::string& fracpart_constant,
                           const std::string& digamma_sine) {
  SymbolConventions conv;
  if (fracpart_constant == "one") {
    conv.fracpart_constant = FracPartConstant::kOne;
  } else if (fracpart_constant == "pi") {
    conv.fracpart_constant = FracPartConstant::kPi;
  } else {
    throw DomainError("fracpart_constant must be 'one' or 'pi'");
  }
  if (digamma_sine == "pi_s") {
    conv.digamma_sine = DigammaSine::kPiS;
  } else if (digamma_sine == "s") {
    conv.digamma_sine = DigammaSine::kS;
  } else {
    throw DomainError("digamma_sine must be 'pi_s' or 's'");
  }
  return KernelInstance(parse_kernel_kind(kind), sigma, strict ? SigmaDomain::kStrict : SigmaDomain::kStrip, conv);
}

Regularization parse_regularization(const std::string& name) {
  if (name == "cutoff") return Regularization::kCutoff;
  if (name == "tikhonov") return Regularization::kTikhonov;
  if (name == "none") return Regularization::kNone;
  throw DomainError("regularization must be cutoff, tikhonov or none");
}

py::dict minimum_dict(const ScanMinimum& m) {
  py::dict d;
  d["sigma"] = m.sigma;
  d["t"] = m.t;
  d["zeta_magnitude"] = m.zeta_magnitude;
  d["magnitude"] = m.magnitude;
  return d;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Convolution equations with zeta-type symbols";

  auto error = py::register_exception<Error>(m, "Error", PyExc_RuntimeError);
  auto domain = py::register_exception<DomainError>(m, "DomainError", error.ptr());
  py::register_exception<PoleError>(m, "PoleError", domain.ptr());
  py::register_exception<OverflowError>(m, "OverflowError", error.ptr());
  py::register_exception<PrecisionError>(m, "PrecisionError", error.ptr());
  py::register_exception<ConvergenceError>(m, "ConvergenceError", error.ptr());
  py::register_exception<GridError>(m, "GridError", error.ptr());
  py::register_exception<SingularSymbolError>(m, "SingularSymbolError", error.ptr());
  py::register_exception<RankError>(m, "RankError", error.ptr());
  py::register_exception<LimitError>(m, "LimitError", error.ptr());
  py::register_exception<BudgetError>(m, "BudgetError", error.ptr());

  // special functions
  m.def("zeta", [](Complex s) { return specfun::zeta(s); }, py::arg("s"));
  m.def("eta", [](Complex s) { return specfun::eta(s); }, py::arg("s"));
  m.def("gamma", &specfun::gamma, py::arg("s"));
  m.def("log_gamma", &specfun::log_gamma, py::arg("s"));
  m.def("digamma", py::overload_cast<double>(&specfun::digamma), py::arg("x"));
  m.def("digamma", py::overload_cast<Complex>(&specfun::digamma), py::arg("z"));
  m.def("ei", &specfun::ei, py::arg("x"));
  m.def("expint_e1", py::overload_cast<double>(&specfun::expint_e1), py::arg("x"));

  // kernels
  py::class_<KernelInstance>(m, "Kernel")
      .def(py::init(&make_kernel), py::arg("kind"), py::arg("sigma"), py::arg("strict") = true,
           py::arg("fracpart_constant") = "one", py::arg("digamma_sine") = "pi_s")
      .def_property_readonly("kind", [](const KernelInstance& k) { return std::string(to_string(k.kind())); })
      .def_property_readonly("sigma", &KernelInstance::sigma)
      .def("__call__", [](const KernelInstance& k, double u) { return kernel_eval(k, u); }, py::arg("u"))
      .def("symbol", [](const KernelInstance& k, double y) { return symbol_eval(k, y); }, py::arg("y"))
      .def(
          "symbol_numeric",
          [](const KernelInstance& k, double y, double tol) {
            QuadratureConfig q;
            q.tol = tol;
            return symbol_numeric(k, y, q);
          },
          py::arg("y"), py::arg("tol") = 1e-10)
      .def("l1_norm", [](const KernelInstance& k) { return l1_norm(k); })
      .def("__repr__", [](const KernelInstance& k) {
        return "Kernel(" + std::string(to_string(k.kind())) + ", sigma=" + std::to_string(k.sigma()) + ")";
      });

  m.def(
      "calibrate",
      [](double tol) {
        const auto r = calibrate_conventions(default_calibration_nodes(), tol);
        py::dict d;
        d["fracpart_fitted"] = r.fracpart_fitted;
        d["fracpart_constant"] = r.fracpart_choice == FracPartConstant::kOne ? "one" : "pi";
        d["fracpart_stable"] = r.fracpart_stable;
        d["digamma_sine"] = r.digamma_choice == DigammaSine::kPiS ? "pi_s" : "s";
        d["digamma_stable"] = r.digamma_stable;
        py::dict fits;
        for (const auto& f : r.digamma_fits) fits[py::str(f.label)] = f.fitted;
        d["digamma_fits"] = fits;
        d["pass"] = r.pass(tol);
        return d;
      },
      py::arg("tol") = 1e-6);

  // grids and transforms
  py::class_<SampledFunction>(m, "SampledFunction")
      .def(py::init([](double x0, double dx, const ComplexArray& samples) {
             SampledFunction g{x0, dx, from_array(samples)};
             g.validate();
             return g;
           }),
           py::arg("x0"), py::arg("dx"), py::arg("samples"))
      .def_static("tabulate", &SampledFunction::tabulate, py::arg("f"), py::arg("half_width") = kDefaultHalfWidth,
                  py::arg("n") = kDefaultGridSize)
      .def_static("zeros", &SampledFunction::zeros, py::arg("half_width") = kDefaultHalfWidth,
                  py::arg("n") = kDefaultGridSize)
      .def_readonly("x0", &SampledFunction::x0)
      .def_readonly("dx", &SampledFunction::dx)
      .def_property_readonly("samples", [](const SampledFunction& g) { return to_array(g.samples); })
      .def_property_readonly("x",
                             [](const SampledFunction& g) {
                               py::array_t<double> a(static_cast<py::ssize_t>(g.size()));
                               for (std::size_t k = 0; k < g.size(); ++k) a.mutable_data()[k] = g.x(k);
                               return a;
                             })
      .def("__len__", &SampledFunction::size);

  py::class_<Spectrum>(m, "Spectrum")
      .def_readonly("y0", &Spectrum::y0)
      .def_readonly("dy", &Spectrum::dy)
      .def_property_readonly("samples", [](const Spectrum& s) { return to_array(s.samples); })
      .def_property_readonly("y",
                             [](const Spectrum& s) {
                               py::array_t<double> a(static_cast<py::ssize_t>(s.size()));
                               for (std::size_t j = 0; j < s.size(); ++j) a.mutable_data()[j] = s.y(j);
                               return a;
                             })
      .def("__len__", &Spectrum::size);

  m.def(
      "forward_ft",
      [](const SampledFunction& g, bool taper) { return forward_ft(g, taper ? Window::kTaper : Window::kNone); },
      py::arg("g"), py::arg("taper") = true);
  m.def("inverse_ft", &inverse_ft, py::arg("spectrum"));

  // solver
  m.def(
      "apply", [](const KernelInstance& k, const SampledFunction& phi) { return forward_apply(k, phi); }, py::arg("kernel"),
      py::arg("phi"));
  m.def(
      "solve",
      [](const KernelInstance& k, const SampledFunction& h, double lambda1, double lambda2, const std::string& regularization,
         double tau, double alpha, bool taper) {
        SolveConfig cfg;
        cfg.lambda1 = lambda1;
        cfg.lambda2 = lambda2;
        cfg.regularization = parse_regularization(regularization);
        cfg.tau = tau;
        cfg.alpha = alpha;
        cfg.window = taper ? Window::kTaper : Window::kNone;
        const auto r = solve(k, h, cfg);
        py::dict d;
        d["phi"] = r.phi;
        d["residual_l2"] = r.residual_l2;
        d["residual_sup"] = r.residual_sup;
        d["regularized_fraction"] = r.regularized_fraction;
        d["denominator_min"] = r.denominator_min;
        d["flags"] = r.flags;
        return d;
      },
      py::arg("kernel"), py::arg("h"), py::arg("lambda1") = 0.0, py::arg("lambda2") = -1.0,
      py::arg("regularization") = "cutoff", py::arg("tau") = 1e-8, py::arg("alpha") = 1e-10, py::arg("taper") = true);
  m.def(
      "residual",
      [](const KernelInstance& k, const SampledFunction& phi, const SampledFunction& h, double lambda1, double lambda2) {
        SolveConfig cfg;
        cfg.lambda1 = lambda1;
        cfg.lambda2 = lambda2;
        const auto r = residual(k, phi, h, cfg);
        return py::make_tuple(r.l2, r.sup);
      },
      py::arg("kernel"), py::arg("phi"), py::arg("h"), py::arg("lambda1") = 0.0, py::arg("lambda2") = -1.0);
  m.def(
      "fit_translates",
      [](const KernelInstance& k, const SampledFunction& g, const std::vector<double>& nodes, int p) {
        const auto f = fit_translates(k, g, nodes, p);
        return py::make_tuple(f.coeffs, f.residual);
      },
      py::arg("kernel"), py::arg("g"), py::arg("nodes"), py::arg("p") = 2);

  // number theory
  py::class_<MertensEvaluator>(m, "MertensEvaluator")
      .def(py::init<std::int64_t>(), py::arg("limit") = kDefaultSieveLimit)
      .def_property_readonly("limit", &MertensEvaluator::limit)
      .def("mu", &MertensEvaluator::mu, py::arg("n"))
      .def("prefix", &MertensEvaluator::prefix, py::arg("n"))
      .def("__call__", [](const MertensEvaluator& ev, double x) { return mertens(x, ev); }, py::arg("x"));
  m.def("example_h", &example_h, py::arg("x"), py::arg("sigma"));
  m.def("example_phi", &example_phi, py::arg("x"), py::arg("sigma"), py::arg("evaluator"));
  m.def(
      "verify_example",
      [](double sigma, std::vector<double> xs, std::int64_t limit, double tol) {
        if (xs.empty()) xs = default_example_points();
        const MertensEvaluator ev(limit);
        const auto r = verify_example(sigma, xs, std::log(static_cast<double>(limit)), tol, ev);
        py::dict d;
        d["max_abs_err"] = r.max_abs_err;
        d["omitted_bound"] = r.omitted_bound;
        d["pass"] = r.pass;
        std::vector<double> err;
        for (const auto& p : r.per_point) err.push_back(p.err);
        d["xs"] = r.xs;
        d["errors"] = err;
        return d;
      },
      py::arg("sigma"), py::arg("xs") = std::vector<double>{}, py::arg("limit") = 1000000, py::arg("tol") = 1e-4);
  m.def(
      "ei_mellin_check",
      [](double beta, Complex s, double tol) {
        const auto r = ei_mellin_check(beta, s, tol);
        py::dict d;
        d["numeric"] = r.numeric;
        d["analytic"] = r.analytic;
        d["rel_gap"] = r.rel_gap;
        d["pass"] = r.pass;
        return d;
      },
      py::arg("beta"), py::arg("s"), py::arg("tol") = 1e-8);

  // strip scan
  m.def(
      "scan",
      [](const std::string& kind, double sigma_lo, double sigma_hi, double t_lo, double t_hi, double d_sigma, double dt,
         bool strict, double delta) {
        ScanGrid g;
        g.sigma_lo = sigma_lo;
        g.sigma_hi = sigma_hi;
        g.t_lo = t_lo;
        g.t_hi = t_hi;
        g.d_sigma = d_sigma;
        g.dt = dt;
        ScanOptions o;
        o.strict = strict;
        o.threads = 1;
        const auto r = scan_symbol(parse_kernel_kind(kind), g, o);
        const auto w = wiener_report(r, delta);
        py::dict d;
        d["classification"] = w.label();
        d["floor"] = minimum_dict(w.floor);
        py::list minima;
        for (const auto& mm : r.minima) minima.append(minimum_dict(mm));
        d["minima"] = minima;
        py::array_t<double> mag({static_cast<py::ssize_t>(g.sigma_count()), static_cast<py::ssize_t>(g.t_count())});
        std::copy(r.magnitudes.begin(), r.magnitudes.end(), mag.mutable_data());
        d["magnitudes"] = mag;
        return d;
      },
      py::arg("kind") = "salem", py::arg("sigma_lo") = 0.75, py::arg("sigma_hi") = 0.75, py::arg("t_lo") = 0.0,
      py::arg("t_hi") = 30.0, py::arg("d_sigma") = 0.05, py::arg("dt") = 0.01, py::arg("strict") = true,
      py::arg("delta") = 1e-4);
}
