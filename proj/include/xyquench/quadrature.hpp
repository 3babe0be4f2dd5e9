#pragma once

#include <array>
#include <cmath>
#include <cstddef>
#include <functional>
#include <string>
#include <vector>

#include "xyquench/model.hpp"

namespace xyq {

struct QuadratureSpec {
  double rel_tol = 1e-10;
  double abs_tol = 1e-12;
  int max_refinements = 24;
  /// Extra panel boundaries in [-pi, pi]. Kinks and gapless points of the
  /// integrand belong here.
  std::vector<double> breakpoints;
};

// Throws std::invalid_argument when tolerances are not positive, the
// refinement count is negative, or a breakpoint lies outside [-pi, pi].
void validate(const QuadratureSpec& spec);

/// Nodes of one refinement level of a double-exponential (tanh-sinh)
/// trapezoid rule on a panel. `jacobian` excludes the step size.
struct NodeLevel {
  std::vector<double> p;
  std::vector<double> cos_p;
  std::vector<double> sin_p;
  std::vector<double> jacobian;

  std::size_t size() const { return p.size(); }
};

/// One panel [a, b]. Level k uses step base_step / 2^k and adds only the
/// nodes that are new at that level, so level sums accumulate. Levels are
/// cached up to a fixed depth; deeper ones are rebuilt on demand.
class TanhSinhPanel {
 public:
  static constexpr double kBaseStep = 0.5;
  // nodes reach ~1e-37 of the panel ends, enough for 1/sqrt endpoint behaviour
  static constexpr double kMaxAbscissa = 4.0;

  TanhSinhPanel(double a, double b);

  double lower() const { return a_; }
  double upper() const { return b_; }
  double step(int level) const { return std::ldexp(kBaseStep, -level); }

  /// Not thread-safe: the returned reference may alias an internal scratch buffer.
  const NodeLevel& level(int k);

 private:
  static constexpr int kCachedLevels = 13;
  void build(int k, NodeLevel& out) const;

  double a_;
  double b_;
  std::vector<NodeLevel> cache_;
  NodeLevel scratch_;
};

/// Adaptive panel quadrature over a breakpoint-delimited interval. Each
/// panel is halved independently until successive levels agree to within
/// max(abs_tol, rel_tol * |I|) in every component.
class QuadratureGrid {
 public:
  static constexpr int kMinLevel = 3;

  /// `cuts` are sorted panel boundaries including both ends.
  QuadratureGrid(std::vector<double> cuts, const QuadratureSpec& spec);

  /// `level_sum(const NodeLevel&)` returns the Jacobian-weighted sum of the
  /// integrand components over the level's nodes.
  template <std::size_t N, class LevelSum>
  std::array<double, N> integrate(LevelSum&& level_sum, double rel_tol, double abs_tol);

  template <std::size_t N, class LevelSum>
  std::array<double, N> integrate(LevelSum&& level_sum) {
    return integrate<N>(level_sum, rel_tol_, abs_tol_);
  }

  const std::vector<double>& cuts() const { return cuts_; }
  std::size_t panel_count() const { return panels_.size(); }
  int deepest_level() const { return deepest_level_; }

 private:
  std::vector<double> cuts_;
  std::vector<TanhSinhPanel> panels_;
  double rel_tol_;
  double abs_tol_;
  int max_refinements_;
  int deepest_level_ = 0;
};

/// Integral of f over [-pi, pi] with panels split at spec.breakpoints.
/// Throws QuadratureError when the tolerance is not met.
double periodic_quadrature(const std::function<double(double)>& f, const QuadratureSpec& spec = {});

/// Sorted, de-duplicated copy of `points` clipped to [lo, hi] with both
/// ends included. Points closer than `min_gap` collapse into one.
std::vector<double> merge_cuts(double lo, double hi, std::vector<double> points, double min_gap = 1e-14);

// ---------------------------------------------------------------------------

template <std::size_t N, class LevelSum>
std::array<double, N> QuadratureGrid::integrate(LevelSum&& level_sum, double rel_tol, double abs_tol) {
  std::array<double, N> total{};
  for (auto& panel : panels_) {
    std::array<double, N> acc{};
    std::array<double, N> prev{};
    bool converged = false;
    for (int k = 0; k <= max_refinements_; ++k) {
      const std::array<double, N> s = level_sum(panel.level(k));
      std::array<double, N> cur{};
      const double step = panel.step(k);
      for (std::size_t i = 0; i < N; ++i) {
        acc[i] += s[i];
        cur[i] = step * acc[i];
      }
      if (k >= kMinLevel) {
        converged = true;
        for (std::size_t i = 0; i < N; ++i) {
          const double tol = std::max(abs_tol, rel_tol * std::abs(cur[i]));
          if (!(std::abs(cur[i] - prev[i]) <= tol)) {
            converged = false;
            break;
          }
        }
      }
      prev = cur;
      if (k > deepest_level_) deepest_level_ = k;
      if (converged) break;
    }
    if (!converged) {
      throw QuadratureError("quadrature did not converge on panel [" + std::to_string(panel.lower()) + ", " +
                            std::to_string(panel.upper()) + "] within " + std::to_string(max_refinements_) +
                            " refinements");
    }
    for (std::size_t i = 0; i < N; ++i) total[i] += prev[i];
  }
  return total;
}

}  // namespace xyq
