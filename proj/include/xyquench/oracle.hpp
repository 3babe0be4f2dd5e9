#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "xyquench/correlators.hpp"
#include "xyquench/entanglement.hpp"

// Validation paths that share no code with the quadrature/kernel route.
namespace xyq::oracle {

/// Chain of L sites with antiperiodic quasi-momenta p_k = pi (2k + 1 - L) / L.
struct FiniteChainSpec {
  int sites = 512;

  std::vector<double> momenta() const;
};

/// Discrete-momentum version of the g-integrals: (1/pi) integral dp -> (2/L) sum_k.
/// Throws DegenerateModeError if some p_k is a gapless mode.
CorrelatorSet finite_chain_correlators(const ModelParams& params, const ModeWeight& w, const FiniteChainSpec& spec);

/// All eigenvalues of a real symmetric n x n matrix (row-major, n <= 8) by
/// cyclic Jacobi rotations, ascending. Throws std::invalid_argument on
/// asymmetric input.
std::vector<double> symmetric_eigenvalues(std::span<const double> row_major, std::size_t n);
std::vector<double> symmetric_eigenvalues(const Matrix4& m);

}  // namespace xyq::oracle
