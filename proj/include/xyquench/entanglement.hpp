#pragma once

#include <array>
#include <string_view>

#include "xyquench/correlators.hpp"

namespace xyq {

using Matrix2 = std::array<std::array<double, 2>, 2>;
using Matrix4 = std::array<std::array<double, 4>, 4>;

/// Nearest-neighbour reduced density matrix in the sigma^z product basis
/// |up up>, |up down>, |down up>, |down down> (index 2k + m, k = left site).
/// X-form: only the diagonal and the anti-diagonal are populated.
struct TwoQubitState {
  Matrix4 rho{};

  double trace() const;
  /// Closed-form spectrum of the two 2x2 blocks {0,3} and {1,2}, ascending.
  std::array<double, 4> eigenvalues() const;
};

/// rho = 1/4 [1 + sz (Z1 + Z2) + sxsx X1X2 + sysy Y1Y2 + szsz Z1Z2].
/// Assumes vanishing transverse one-point functions and cross correlators.
TwoQubitState reduced_density_matrix(const CorrelatorSet& c);

/// Transpose on the left site: (k m, l n) -> (l m, k n).
Matrix4 partial_transpose(const Matrix4& m);
Matrix4 partial_transpose(const TwoQubitState& s);

/// Partial trace over the other site; `site` is 0 (left) or 1 (right).
Matrix2 single_site_state(const TwoQubitState& s, int site);

/// Smaller eigenvalue of the partial-transpose block {0,3}.
double mu_min_1(const CorrelatorSet& c);
/// Smaller eigenvalue of the partial-transpose block {1,2} when sxsx >= sysy.
double mu_min_2(const CorrelatorSet& c);
/// <W_N> with W_N = -1/4 (X1X2 - Y1Y2 + Z1Z2 - 1); same arithmetic as mu_min_2.
double witness_expectation(const CorrelatorSet& c);
/// The operator W_N as a matrix in the product basis.
Matrix4 witness_operator();

enum class Detection { ByMu1, ByMu2, Undetected };
std::string_view to_string(Detection d);

inline constexpr double kDetectionThreshold = -1e-12;
/// Reduced density matrix eigenvalues below this reject the input.
inline constexpr double kStateFloor = -1e-10;

struct WitnessReport {
  double mu1 = 0.0;
  double mu2 = 0.0;
  double negativity = 0.0;
  Detection detection = Detection::Undetected;
};

/// Throws UnphysicalStateError when the reconstructed state has an eigenvalue
/// below kStateFloor or both mu values fall below `threshold`.
WitnessReport analyze(const CorrelatorSet& c, double threshold = kDetectionThreshold);

}  // namespace xyq
