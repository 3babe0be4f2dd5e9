#include "xyquench/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "fmt/format.h"
#include "xyquench/spectrum.hpp"

namespace xyq::oracle {

std::vector<double> FiniteChainSpec::momenta() const {
  if (sites < 8 || sites % 2 != 0) throw std::invalid_argument("chain length must be even and at least 8");
  std::vector<double> p(static_cast<std::size_t>(sites));
  for (int k = 0; k < sites; ++k) p[static_cast<std::size_t>(k)] = std::numbers::pi * (2 * k + 1 - sites) / sites;
  return p;
}

CorrelatorSet finite_chain_correlators(const ModelParams& params, const ModeWeight& w, const FiniteChainSpec& spec) {
  double gc = 0.0;
  double gs = 0.0;
  double g0 = 0.0;
  for (double p : spec.momenta()) {
    const double e = dispersion(params, p);
    if (e == 0.0) throw DegenerateModeError(fmt::format("gapless mode at p = {:.17g}", p));
    const double r = weight(w, params, p) / e;
    const double c = std::cos(p);
    const double s = std::sin(p);
    gc += c * (c - params.h) * r;
    gs += s * s * r;
    g0 += (params.h - c) * r;
  }
  const double norm = 2.0 / spec.sites;
  return CorrelatorSet::from_g({norm * gc, -params.gamma * norm * gs, norm * g0});
}

std::vector<double> symmetric_eigenvalues(std::span<const double> row_major, std::size_t n) {
  if (n == 0 || n > 8 || row_major.size() != n * n) throw std::invalid_argument("expected an n x n matrix, n <= 8");
  std::vector<double> a(row_major.begin(), row_major.end());
  const auto at = [&](std::size_t i, std::size_t j) -> double& { return a[i * n + j]; };

  double frob = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      if (std::abs(at(i, j) - at(j, i)) > 1e-12) throw std::invalid_argument("matrix is not symmetric");
      frob += at(i, j) * at(i, j);
    }
  }
  const double target = 1e-14 * std::max(1.0, std::sqrt(frob));

  const auto off_norm = [&] {
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j)
        if (i != j) s += at(i, j) * at(i, j);
    return std::sqrt(s);
  };

  for (int sweep = 0; sweep < 100 && off_norm() >= target; ++sweep) {
    for (std::size_t p = 0; p + 1 < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        const double apq = at(p, q);
        if (apq == 0.0) continue;
        const double theta = (at(q, q) - at(p, p)) / (2.0 * apq);
        const double t = std::copysign(1.0, theta) / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double s = t * c;
        for (std::size_t k = 0; k < n; ++k) {
          const double akp = at(k, p);
          const double akq = at(k, q);
          at(k, p) = c * akp - s * akq;
          at(k, q) = s * akp + c * akq;
        }
        for (std::size_t k = 0; k < n; ++k) {
          const double apk = at(p, k);
          const double aqk = at(q, k);
          at(p, k) = c * apk - s * aqk;
          at(q, k) = s * apk + c * aqk;
        }
      }
    }
  }
  if (off_norm() >= target) throw std::runtime_error("Jacobi eigensolver did not converge");

  std::vector<double> ev(n);
  for (std::size_t i = 0; i < n; ++i) ev[i] = at(i, i);
  std::sort(ev.begin(), ev.end());
  return ev;
}

std::vector<double> symmetric_eigenvalues(const Matrix4& m) {
  std::array<double, 16> flat{};
  for (std::size_t i = 0; i < 4; ++i)
    for (std::size_t j = 0; j < 4; ++j) flat[i * 4 + j] = m[i][j];
  return symmetric_eigenvalues(flat, 4);
}

}  // namespace xyq::oracle
