#pragma once

// Scans of |K(sigma + it)| over rectangles of the critical strip.
//
// Every node stores the raw symbol magnitude and the magnitude of its zeta
// factor (|K| / |w|). The cofactor w never vanishes on the strip but decays
// like e^{-pi|t|/2} (SALEM) or e^{-pi|t|} (DIGAMMA), so near-zeros are
// detected, and thresholds applied, on the zeta factor.

#include <cstddef>
#include <string>
#include <vector>

#include "salemlab/kernels.hpp"

namespace salemlab {

inline constexpr std::size_t kScanCellBudget = 10'000'000;

struct ScanGrid {
  double sigma_lo = 0.75;
  double sigma_hi = 0.75;
  double t_lo = 0.0;
  double t_hi = 30.0;
  double d_sigma = 0.05;
  double dt = 0.01;

  std::size_t sigma_count() const;
  std::size_t t_count() const;
  double sigma(std::size_t i) const;
  double t(std::size_t j) const;
  /// DomainError for an empty or inverted band, fewer than 2 t samples, or
  /// sigma outside (1/2,1) (strict) / (0,1); BudgetError above 1e7 cells.
  void validate(bool strict) const;
};

struct ScanOptions {
  bool strict = true;        // sigma in (1/2,1); false admits sigma = 1/2 probes
  double threshold = 1e-2;   // minima kept when the zeta factor is below this
  unsigned threads = 0;      // 0: hardware concurrency
  bool refine = true;        // golden-section refinement along t
  SymbolConventions conventions{};
};

struct ScanMinimum {
  double sigma;
  double t;
  double zeta_magnitude;
  double magnitude;  // raw |K| at the same point
};

struct ScanResult {
  KernelKind kind = KernelKind::kSalem;
  ScanGrid grid;
  double threshold = 0.0;
  std::vector<double> magnitudes;       // row-major [sigma][t], raw |K|
  std::vector<double> zeta_magnitudes;  // same layout, |zeta factor|
  std::vector<ScanMinimum> minima;      // ascending by zeta_magnitude

  double magnitude(std::size_t i, std::size_t j) const { return magnitudes[i * grid.t_count() + j]; }
  double zeta_magnitude(std::size_t i, std::size_t j) const {
    return zeta_magnitudes[i * grid.t_count() + j];
  }
  /// Smallest zeta-factor magnitude over nodes and refined minima.
  ScanMinimum floor() const;

  std::string to_csv() const;
};

ScanResult scan_symbol(KernelKind kind, const ScanGrid& grid, const ScanOptions& options = {});

enum class WienerClass { kNonvanishing, kCandidateZero };

struct WienerReport {
  WienerClass classification = WienerClass::kNonvanishing;
  double delta = 0.0;
  ScanMinimum floor{};
  std::vector<ScanMinimum> dips;  // minima below delta
  std::string statement;

  std::string label() const;
  std::string to_json(const ScanResult& result) const;
};

/// NONVANISHING when the floor is >= delta (ties count as nonvanishing).
/// A statement about the scanned band only.
WienerReport wiener_report(const ScanResult& result, double delta);

}  // namespace salemlab
