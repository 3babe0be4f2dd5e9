#include "xyquench/entanglement.hpp"

#include <algorithm>
#include <cmath>

#include "fmt/format.h"

namespace xyq {
namespace {

// Eigenvalues of [[a, b], [b, d]], ascending.
std::array<double, 2> sym2_eigenvalues(double a, double b, double d) {
  const double mean = 0.5 * (a + d);
  const double r = std::hypot(0.5 * (a - d), b);
  return {mean - r, mean + r};
}

double witness_value(double sxsx, double sysy, double szsz) { return -0.25 * (sxsx - sysy + szsz - 1.0); }

}  // namespace

double TwoQubitState::trace() const { return rho[0][0] + rho[1][1] + rho[2][2] + rho[3][3]; }

std::array<double, 4> TwoQubitState::eigenvalues() const {
  const auto outer = sym2_eigenvalues(rho[0][0], rho[0][3], rho[3][3]);
  const auto inner = sym2_eigenvalues(rho[1][1], rho[1][2], rho[2][2]);
  std::array<double, 4> ev{outer[0], outer[1], inner[0], inner[1]};
  std::sort(ev.begin(), ev.end());
  return ev;
}

TwoQubitState reduced_density_matrix(const CorrelatorSet& c) {
  TwoQubitState s;
  auto& r = s.rho;
  r[0][0] = 0.25 * (1.0 + 2.0 * c.sz + c.szsz);
  r[1][1] = 0.25 * (1.0 - c.szsz);
  r[2][2] = 0.25 * (1.0 - c.szsz);
  r[3][3] = 0.25 * (1.0 - 2.0 * c.sz + c.szsz);
  r[0][3] = r[3][0] = 0.25 * (c.sxsx - c.sysy);
  r[1][2] = r[2][1] = 0.25 * (c.sxsx + c.sysy);
  return s;
}

Matrix4 partial_transpose(const Matrix4& m) {
  Matrix4 out{};
  for (int k = 0; k < 2; ++k)
    for (int l = 0; l < 2; ++l)
      for (int a = 0; a < 2; ++a)
        for (int b = 0; b < 2; ++b) out[2 * l + a][2 * k + b] = m[2 * k + a][2 * l + b];
  return out;
}

Matrix4 partial_transpose(const TwoQubitState& s) { return partial_transpose(s.rho); }

Matrix2 single_site_state(const TwoQubitState& s, int site) {
  Matrix2 out{};
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j)
      for (int t = 0; t < 2; ++t) {
        out[i][j] += site == 0 ? s.rho[2 * i + t][2 * j + t] : s.rho[2 * t + i][2 * t + j];
      }
  return out;
}

double mu_min_1(const CorrelatorSet& c) {
  const double sum_xy = c.sxsx + c.sysy;
  return 0.25 * (c.szsz + 1.0) - 0.25 * std::sqrt(4.0 * c.sz * c.sz + sum_xy * sum_xy);
}

double mu_min_2(const CorrelatorSet& c) { return witness_value(c.sxsx, c.sysy, c.szsz); }

double witness_expectation(const CorrelatorSet& c) { return witness_value(c.sxsx, c.sysy, c.szsz); }

Matrix4 witness_operator() {
  // X1X2 - Y1Y2 couples |up up> and |down down> with weight 2;
  // Z1Z2 - 1 is diag(0, -2, -2, 0).
  Matrix4 w{};
  w[0][3] = w[3][0] = -0.5;
  w[1][1] = w[2][2] = 0.5;
  return w;
}

std::string_view to_string(Detection d) {
  switch (d) {
    case Detection::ByMu1:
      return "ByMu1";
    case Detection::ByMu2:
      return "ByMu2";
    case Detection::Undetected:
      return "Undetected";
  }
  return "?";
}

WitnessReport analyze(const CorrelatorSet& c, double threshold) {
  WitnessReport r;
  r.mu1 = mu_min_1(c);
  r.mu2 = mu_min_2(c);
  const double lowest = reduced_density_matrix(c).eigenvalues()[0];
  if (lowest < kStateFloor) {
    throw UnphysicalStateError(fmt::format("reduced density matrix has eigenvalue {:.17g}", lowest));
  }
  const bool neg1 = r.mu1 < threshold;
  const bool neg2 = r.mu2 < threshold;
  if (neg1 && neg2) {
    throw UnphysicalStateError(
        fmt::format("both partial-transpose branches negative (mu1={:.17g}, mu2={:.17g})", r.mu1, r.mu2));
  }
  r.negativity = 2.0 * std::max(0.0, -std::min(r.mu1, r.mu2));
  r.detection = neg1 ? Detection::ByMu1 : neg2 ? Detection::ByMu2 : Detection::Undetected;
  return r;
}

}  // namespace xyq
