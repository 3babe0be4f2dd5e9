#include "xyquench/quadrature.hpp"

#include <algorithm>
#include <numbers>
#include <stdexcept>

namespace xyq {
namespace {
constexpr double kPi = std::numbers::pi;
}

void validate(const QuadratureSpec& spec) {
  if (!(spec.rel_tol > 0.0) || !(spec.abs_tol > 0.0)) {
    throw std::invalid_argument("quadrature tolerances must be positive");
  }
  if (spec.max_refinements < QuadratureGrid::kMinLevel) {
    throw std::invalid_argument("max_refinements must be at least " + std::to_string(QuadratureGrid::kMinLevel));
  }
  for (double b : spec.breakpoints) {
    if (!(b >= -kPi && b <= kPi)) throw std::invalid_argument("breakpoint outside [-pi, pi]");
  }
}

TanhSinhPanel::TanhSinhPanel(double a, double b) : a_(a), b_(b) {
  if (!(a < b)) throw std::invalid_argument("empty quadrature panel");
}

const NodeLevel& TanhSinhPanel::level(int k) {
  if (k >= kCachedLevels) {
    build(k, scratch_);
    return scratch_;
  }
  while (static_cast<int>(cache_.size()) <= k) {
    cache_.emplace_back();
    build(static_cast<int>(cache_.size()) - 1, cache_.back());
  }
  return cache_[static_cast<std::size_t>(k)];
}

void TanhSinhPanel::build(int k, NodeLevel& out) const {
  out.p.clear();
  out.cos_p.clear();
  out.sin_p.clear();
  out.jacobian.clear();

  const double h = step(k);
  const double half = 0.5 * (b_ - a_);
  const auto emit = [&](double t) {
    const double u = 0.5 * kPi * std::sinh(t);
    const double cu = std::cosh(u);
    const double jac = half * 0.5 * kPi * std::cosh(t) / (cu * cu);
    // distance to the nearer end: 1 - tanh|u| = 2 e^{-2|u|} / (1 + e^{-2|u|})
    const double e = std::exp(-2.0 * std::abs(u));
    const double off = half * 2.0 * e / (1.0 + e);
    double p;
    if (t < 0.0) {
      p = a_ + off;
    } else if (t > 0.0) {
      p = b_ - off;
    } else {
      p = a_ + half;
    }
    if (!(p > a_ && p < b_)) return;  // collapsed onto an endpoint
    out.p.push_back(p);
    out.cos_p.push_back(std::cos(p));
    out.sin_p.push_back(std::sin(p));
    out.jacobian.push_back(jac);
  };

  if (k == 0) {
    const int n = static_cast<int>(kMaxAbscissa / h);
    for (int j = -n; j <= n; ++j) emit(j * h);
  } else {
    // odd multiples of h are the nodes new at this level
    const long n = static_cast<long>((kMaxAbscissa / h - 1.0) / 2.0);
    for (long j = -n - 1; j <= n; ++j) {
      const double t = static_cast<double>(2 * j + 1) * h;
      if (std::abs(t) <= kMaxAbscissa) emit(t);
    }
  }
}

QuadratureGrid::QuadratureGrid(std::vector<double> cuts, const QuadratureSpec& spec)
    : cuts_(std::move(cuts)), rel_tol_(spec.rel_tol), abs_tol_(spec.abs_tol), max_refinements_(spec.max_refinements) {
  if (cuts_.size() < 2) throw std::invalid_argument("quadrature grid needs at least two cuts");
  panels_.reserve(cuts_.size() - 1);
  for (std::size_t i = 0; i + 1 < cuts_.size(); ++i) panels_.emplace_back(cuts_[i], cuts_[i + 1]);
}

std::vector<double> merge_cuts(double lo, double hi, std::vector<double> points, double min_gap) {
  std::vector<double> out{lo};
  std::sort(points.begin(), points.end());
  for (double p : points) {
    if (p > out.back() + min_gap && p < hi - min_gap) out.push_back(p);
  }
  out.push_back(hi);
  return out;
}

double periodic_quadrature(const std::function<double(double)>& f, const QuadratureSpec& spec) {
  validate(spec);
  QuadratureGrid grid(merge_cuts(-kPi, kPi, spec.breakpoints), spec);
  const auto r = grid.integrate<1>([&](const NodeLevel& lv) {
    double s = 0.0;
    for (std::size_t i = 0; i < lv.size(); ++i) s += f(lv.p[i]) * lv.jacobian[i];
    return std::array<double, 1>{s};
  });
  return r[0];
}

}  // namespace xyq
