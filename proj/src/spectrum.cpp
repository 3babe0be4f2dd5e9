#include "xyquench/spectrum.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

namespace xyq {
namespace {

constexpr double kPi = std::numbers::pi;

// Numerator of cos_delta divided by 4, as a polynomial in c = cos p:
// (1 - g g0) c^2 - (h0 + h) c + (h0 h + g g0).
struct CosDeltaNumerator {
  double a, b, c;

  explicit CosDeltaNumerator(const QuenchSpec& q)
      : a(1.0 - q.pre.gamma * q.post.gamma),
        b(-(q.pre.h + q.post.h)),
        c(q.pre.h * q.post.h + q.pre.gamma * q.post.gamma) {}

  double operator()(double x) const { return (a * x + b) * x + c; }
  double derivative(double x) const { return 2.0 * a * x + b; }
};

void sort_unique(std::vector<double>& v) {
  std::sort(v.begin(), v.end());
  v.erase(std::unique(v.begin(), v.end()), v.end());
}

}  // namespace

double dispersion(const ModelParams& params, double p) noexcept {
  const double a = params.gamma * std::sin(p);
  const double b = params.h - std::cos(p);
  return 2.0 * std::sqrt(a * a + b * b);
}

double bogoliubov_angle(const ModelParams& params, double p) {
  const double y = -params.gamma * std::sin(p);
  const double x = params.h - std::cos(p);
  if (y == 0.0 && x == 0.0) {
    throw DegenerateModeError("Bogoliubov angle undefined at a gapless mode");
  }
  return std::atan2(y, x);
}

double cos_delta(const QuenchSpec& quench, double p) {
  if (quench.is_trivial()) return 1.0;
  const double e = dispersion(quench.post, p);
  const double e0 = dispersion(quench.pre, p);
  if (e == 0.0 || e0 == 0.0) {
    throw DegenerateModeError("cos_delta undefined: dispersion vanishes at p");
  }
  const double c = std::cos(p);
  const double s = std::sin(p);
  const double num = (c - quench.pre.h) * (c - quench.post.h) + quench.pre.gamma * quench.post.gamma * s * s;
  return std::clamp(4.0 * num / (e * e0), -1.0, 1.0);
}

Occupation occupation_from_cos_delta(double cd) {
  const double a = std::abs(cd);
  return {0.5 * (1.0 - cd), a == 0.0 ? std::numeric_limits<double>::infinity() : -0.5 * std::log(a)};
}

Occupation occupation(const QuenchSpec& quench, double p) {
  return occupation_from_cos_delta(cos_delta(quench, p));
}

std::vector<double> gapless_momenta(const ModelParams& params) {
  std::vector<double> out;
  const double h = params.h;
  if (params.gamma == 0.0) {
    if (std::abs(h) <= 1.0) {
      const double k = std::acos(h);
      out.push_back(-k);
      out.push_back(k);
    }
  } else if (h == 1.0) {
    out.push_back(0.0);
  } else if (h == -1.0) {
    out.push_back(-kPi);
    out.push_back(kPi);
  }
  for (double& p : out) p = p == 0.0 ? 0.0 : p;  // fold -0
  sort_unique(out);
  return out;
}

std::vector<double> dispersion_minima(const ModelParams& params) {
  const double denom = 1.0 - params.gamma * params.gamma;
  if (denom == 0.0) return {};
  const double c = params.h / denom;
  if (!(std::abs(c) < 1.0)) return {};
  return {std::acos(c)};
}

std::vector<double> cos_delta_roots(const QuenchSpec& quench) {
  if (quench.is_trivial()) return {};
  const CosDeltaNumerator n(quench);
  std::vector<double> cs;
  const double scale = std::max({std::abs(n.a), std::abs(n.b), std::abs(n.c)});
  if (scale == 0.0) return {};
  if (std::abs(n.a) <= 1e-15 * scale) {
    if (n.b != 0.0) cs.push_back(-n.c / n.b);
  } else {
    const double disc = n.b * n.b - 4.0 * n.a * n.c;
    if (disc >= 0.0) {
      const double q = -0.5 * (n.b + std::copysign(std::sqrt(disc), n.b));
      if (q != 0.0) {
        cs.push_back(q / n.a);
        cs.push_back(n.c / q);
      } else {
        cs.push_back(0.0);
      }
    }
  }
  std::vector<double> out;
  for (double c : cs) {
    // two Newton steps in c recover digits lost to cancellation
    for (int i = 0; i < 2; ++i) {
      const double d = n.derivative(c);
      if (d == 0.0) break;
      c -= n(c) / d;
    }
    if (c >= -1.0 && c <= 1.0) out.push_back(std::acos(c));
  }
  sort_unique(out);
  return out;
}

double disorder_field(double gamma) { return std::sqrt(std::max(0.0, 1.0 - gamma * gamma)); }

}  // namespace xyq
