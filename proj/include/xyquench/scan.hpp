#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "xyquench/entanglement.hpp"
#include "xyquench/ensemble.hpp"
#include "xyquench/quadrature.hpp"

namespace xyq {

/// Inclusive, evenly spaced axis: n >= 2 points from lo to hi.
struct AxisRange {
  double lo = 0.0;
  double hi = 2.0;
  int n = 101;

  std::vector<double> values() const;
};

/// Sweep of the quench plane (h0, h) at fixed anisotropies.
struct ScanConfig {
  double gamma = 1.0;
  std::optional<double> gamma0;  // defaults to gamma
  AxisRange h0_range;
  AxisRange h_range;
  QuadratureSpec quadrature;
  double detection_threshold = kDetectionThreshold;

  double pre_gamma() const { return gamma0.value_or(gamma); }
};

void validate(const ScanConfig& config);

struct CellResult {
  double h0 = 0.0;
  double h = 0.0;
  WitnessReport prethermal;
  WitnessReport thermal;
  Temperature t_th = Temperature::zero();
  std::string error;  // empty when the cell evaluated cleanly

  bool ok() const { return error.empty(); }
};

/// Prethermal report from the GGE correlators, thermal report from the
/// Gibbs state at the matched temperature. Failures are recorded in
/// `error`, never thrown.
CellResult evaluate_cell(const QuenchSpec& quench, const QuadratureSpec& spec,
                         double threshold = kDetectionThreshold);

enum class Detector { Mu1, Mu2 };
enum class Ensemble { Prethermal, Thermal };
enum class Region { Neither, PrethermalOnly, ThermalOnly, Both, Invalid };

std::string_view to_string(Detector d);
std::string_view to_string(Ensemble e);
std::string_view to_string(Region r);
std::optional<Region> parse_region(std::string_view s);

double detector_value(const WitnessReport& report, Detector d);
Region classify(const CellResult& cell, Detector d, double threshold = kDetectionThreshold);

struct RegionMap {
  Detector detector = Detector::Mu1;
  std::size_t rows = 0;  // h0 index
  std::size_t cols = 0;  // h index
  std::vector<Region> cells;

  Region at(std::size_t i, std::size_t j) const { return cells[i * cols + j]; }
};

struct ScanResult {
  ScanConfig config;
  std::vector<double> h0_values;
  std::vector<double> h_values;
  std::vector<CellResult> cells;  // row-major: h0 outer, h inner
  RegionMap mu1_map;
  RegionMap mu2_map;
  std::size_t failed = 0;

  const CellResult& at(std::size_t i, std::size_t j) const { return cells[i * h_values.size() + j]; }
  const RegionMap& map(Detector d) const { return d == Detector::Mu1 ? mu1_map : mu2_map; }
};

RegionMap build_region_map(const std::vector<CellResult>& cells, std::size_t rows, std::size_t cols, Detector d,
                           double threshold);

struct ScanOptions {
  unsigned threads = 0;  // 0: hardware concurrency
  /// Evaluate cells in a shuffled order; output order is unaffected.
  std::optional<std::uint64_t> shuffle_seed;
  /// Called from worker threads with (completed, total).
  std::function<void(std::size_t, std::size_t)> progress;
};

ScanResult run_scan(const ScanConfig& config, const ScanOptions& options = {});

struct BoundaryPoint {
  double h0 = 0.0;
  double h = 0.0;
  double mu = 0.0;
};

struct BoundaryRefinement {
  Detector detector = Detector::Mu1;
  Ensemble ensemble = Ensemble::Prethermal;
  std::vector<BoundaryPoint> points;
  std::vector<std::string> notes;  // skipped edges
};

/// mu(h0, h) for the detector being refined.
using DetectorFunction = std::function<double(double h0, double h)>;

/// Bisects every grid edge whose endpoints differ in detection until
/// |mu| < tol. Edges touching failed cells or without a continuous sign
/// change are skipped with a note.
BoundaryRefinement refine_boundary(const ScanResult& grid, Detector d, Ensemble e, const DetectorFunction& mu,
                                   double tol = 1e-9, unsigned threads = 1);
/// Uses evaluate_cell with the grid's own configuration.
BoundaryRefinement refine_boundary(const ScanResult& grid, Detector d, Ensemble e, double tol = 1e-9,
                                   unsigned threads = 1);

/// Runs fn(i) for i in [0, n) on `threads` workers (0: hardware concurrency).
void parallel_for(std::size_t n, unsigned threads, const std::function<void(std::size_t)>& fn);
unsigned resolve_threads(unsigned requested);

}  // namespace xyq
