#include "salemlab/stripscan.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <cmath>
#include <limits>
#include <thread>

#include "json.hpp"
#include "salemlab/errors.hpp"

namespace salemlab {
namespace {

std::size_t axis_count(double lo, double hi, double step) {
  if (hi == lo) return 1;
  return static_cast<std::size_t>(std::llround((hi - lo) / step)) + 1;
}

std::string fmt(double v) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::general, 17);
  return std::string(buf, res.ptr);
}

struct NodeValue {
  double raw;
  double zeta;
};

NodeValue evaluate(const KernelInstance& kernel, double t) {
  const auto f = symbol_factors(kernel, t);
  const double zeta = std::abs(f.zeta_part);
  return {zeta * std::abs(f.w_part), zeta};
}

// Golden-section search for the minimum of the zeta factor on [a, b].
ScanMinimum golden_refine(const KernelInstance& kernel, double a, double b) {
  const double ratio = 0.5 * (std::sqrt(5.0) - 1.0);
  double c = b - ratio * (b - a);
  double d = a + ratio * (b - a);
  double fc = evaluate(kernel, c).zeta;
  double fd = evaluate(kernel, d).zeta;
  for (int it = 0; it < 80 && (b - a) > 1e-12 * std::max(1.0, std::abs(a)); ++it) {
    if (fc < fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - ratio * (b - a);
      fc = evaluate(kernel, c).zeta;
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + ratio * (b - a);
      fd = evaluate(kernel, d).zeta;
    }
  }
  const double t = 0.5 * (a + b);
  const auto v = evaluate(kernel, t);
  return {kernel.sigma(), t, v.zeta, v.raw};
}

}  // namespace

std::size_t ScanGrid::sigma_count() const { return axis_count(sigma_lo, sigma_hi, d_sigma); }
std::size_t ScanGrid::t_count() const { return axis_count(t_lo, t_hi, dt); }
double ScanGrid::sigma(std::size_t i) const {
  return i + 1 == sigma_count() ? sigma_hi : sigma_lo + static_cast<double>(i) * d_sigma;
}
double ScanGrid::t(std::size_t j) const {
  return j + 1 == t_count() ? t_hi : t_lo + static_cast<double>(j) * dt;
}

void ScanGrid::validate(bool strict) const {
  for (double v : {sigma_lo, sigma_hi, t_lo, t_hi, d_sigma, dt}) {
    if (!std::isfinite(v)) throw DomainError("scan grid values must be finite");
  }
  if (!(d_sigma > 0.0) || !(dt > 0.0)) throw DomainError("scan steps must be positive");
  if (sigma_hi < sigma_lo || t_hi <= t_lo) throw DomainError("scan band is empty or inverted");
  const double lo_bound = strict ? 0.5 : 0.0;
  if (!(sigma_lo > lo_bound && sigma_hi < 1.0)) {
    throw DomainError(strict ? "sigma must lie in (1/2,1) for a strict scan" : "sigma must lie in (0,1)");
  }
  if (std::max(std::abs(t_lo), std::abs(t_hi)) > kDefaultTMax) {
    throw DomainError("scan height exceeds the validated range of zeta");
  }
  const double sc = std::floor((sigma_hi - sigma_lo) / d_sigma + 0.5) + 1.0;
  const double tc = std::floor((t_hi - t_lo) / dt + 0.5) + 1.0;
  if (tc < 2.0) throw DomainError("scan needs at least 2 samples along t");
  if (sc * tc > static_cast<double>(kScanCellBudget)) {
    throw BudgetError("scan grid has more than 1e7 cells");
  }
}

ScanMinimum ScanResult::floor() const {
  ScanMinimum best{0.0, 0.0, std::numeric_limits<double>::infinity(), 0.0};
  const std::size_t nt = grid.t_count();
  for (std::size_t i = 0; i < grid.sigma_count(); ++i) {
    for (std::size_t j = 0; j < nt; ++j) {
      if (zeta_magnitude(i, j) < best.zeta_magnitude) {
        best = {grid.sigma(i), grid.t(j), zeta_magnitude(i, j), magnitude(i, j)};
      }
    }
  }
  for (const auto& m : minima) {
    if (m.zeta_magnitude < best.zeta_magnitude) best = m;
  }
  return best;
}

std::string ScanResult::to_csv() const {
  std::string out = "sigma,t,magnitude,zeta_magnitude\n";
  const std::size_t nt = grid.t_count();
  for (std::size_t i = 0; i < grid.sigma_count(); ++i) {
    for (std::size_t j = 0; j < nt; ++j) {
      out += fmt(grid.sigma(i)) + ',' + fmt(grid.t(j)) + ',' + fmt(magnitude(i, j)) + ',' +
             fmt(zeta_magnitude(i, j)) + '\n';
    }
  }
  return out;
}

ScanResult scan_symbol(KernelKind kind, const ScanGrid& grid, const ScanOptions& options) {
  grid.validate(options.strict);
  ScanResult result;
  result.kind = kind;
  result.grid = grid;
  result.threshold = options.threshold;
  const std::size_t ns = grid.sigma_count();
  const std::size_t nt = grid.t_count();
  result.magnitudes.assign(ns * nt, 0.0);
  result.zeta_magnitudes.assign(ns * nt, 0.0);

  const SigmaDomain domain = options.strict ? SigmaDomain::kStrict : SigmaDomain::kStrip;
  std::vector<KernelInstance> rows;
  rows.reserve(ns);
  for (std::size_t i = 0; i < ns; ++i) rows.emplace_back(kind, grid.sigma(i), domain, options.conventions);

  std::atomic<std::size_t> next{0};
  auto worker = [&]() {
    for (std::size_t i = next.fetch_add(1); i < ns; i = next.fetch_add(1)) {
      for (std::size_t j = 0; j < nt; ++j) {
        const auto v = evaluate(rows[i], grid.t(j));
        result.magnitudes[i * nt + j] = v.raw;
        result.zeta_magnitudes[i * nt + j] = v.zeta;
      }
    }
  };
  unsigned threads = options.threads == 0 ? std::max(1u, std::thread::hardware_concurrency()) : options.threads;
  threads = static_cast<unsigned>(std::min<std::size_t>(threads, ns));
  if (threads <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (unsigned k = 0; k < threads; ++k) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }

  // strict local minima against every existing 8-neighbour, interior in t
  for (std::size_t i = 0; i < ns; ++i) {
    for (std::size_t j = 1; j + 1 < nt; ++j) {
      const double v = result.zeta_magnitude(i, j);
      if (!(v < options.threshold)) continue;
      bool is_min = true;
      for (int di = -1; di <= 1 && is_min; ++di) {
        const long ii = static_cast<long>(i) + di;
        if (ii < 0 || ii >= static_cast<long>(ns)) continue;
        for (int dj = -1; dj <= 1; ++dj) {
          if (di == 0 && dj == 0) continue;
          const auto jj = static_cast<std::size_t>(static_cast<long>(j) + dj);
          if (!(v < result.zeta_magnitude(static_cast<std::size_t>(ii), jj))) {
            is_min = false;
            break;
          }
        }
      }
      if (!is_min) continue;
      if (options.refine) {
        result.minima.push_back(golden_refine(rows[i], grid.t(j - 1), grid.t(j + 1)));
      } else {
        result.minima.push_back({grid.sigma(i), grid.t(j), v, result.magnitude(i, j)});
      }
    }
  }
  std::stable_sort(result.minima.begin(), result.minima.end(),
                   [](const ScanMinimum& a, const ScanMinimum& b) { return a.zeta_magnitude < b.zeta_magnitude; });
  return result;
}

std::string WienerReport::label() const {
  return classification == WienerClass::kNonvanishing ? "NONVANISHING" : "CANDIDATE_ZERO";
}

std::string WienerReport::to_json(const ScanResult& result) const {
  auto point = [](const ScanMinimum& m) {
    return nlohmann::json{{"sigma", m.sigma}, {"t", m.t}, {"zeta_magnitude", m.zeta_magnitude}, {"magnitude", m.magnitude}};
  };
  nlohmann::json j;
  j["kernel"] = std::string(to_string(result.kind));
  j["band"] = {{"sigma_lo", result.grid.sigma_lo}, {"sigma_hi", result.grid.sigma_hi},
               {"t_lo", result.grid.t_lo},         {"t_hi", result.grid.t_hi},
               {"d_sigma", result.grid.d_sigma},   {"dt", result.grid.dt}};
  j["min"] = floor.zeta_magnitude;
  j["min_raw"] = floor.magnitude;
  j["argmin"] = {{"sigma", floor.sigma}, {"t", floor.t}};
  auto minima = nlohmann::json::array();
  for (const auto& m : result.minima) minima.push_back(point(m));
  j["minima"] = std::move(minima);
  auto dip_list = nlohmann::json::array();
  for (const auto& m : dips) dip_list.push_back(point(m));
  j["dips"] = std::move(dip_list);
  j["delta"] = delta;
  j["classification"] = label();
  j["statement"] = statement;
  return j.dump();
}

WienerReport wiener_report(const ScanResult& result, double delta) {
  if (!(delta > 0.0)) throw DomainError("delta must be positive");
  WienerReport report;
  report.delta = delta;
  report.floor = result.floor();
  for (const auto& m : result.minima) {
    if (m.zeta_magnitude < delta) report.dips.push_back(m);
  }
  report.classification =
      report.floor.zeta_magnitude >= delta ? WienerClass::kNonvanishing : WienerClass::kCandidateZero;
  report.statement =
      "finite-band numerical statement on the scanned rectangle only; not a proof of (non)vanishing";
  return report;
}

}  // namespace salemlab
