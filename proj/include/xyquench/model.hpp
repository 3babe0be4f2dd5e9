#pragma once

#include <stdexcept>
#include <string>

namespace xyq {

/// Parameters of one XY Hamiltonian: anisotropy `gamma` and transverse field `h`.
struct ModelParams {
  double gamma = 1.0;
  double h = 0.0;

  friend bool operator==(const ModelParams&, const ModelParams&) = default;
};

/// Sudden change from the ground state of `pre` to evolution under `post`.
struct QuenchSpec {
  ModelParams pre;
  ModelParams post;

  bool is_trivial() const { return pre == post; }
  friend bool operator==(const QuenchSpec&, const QuenchSpec&) = default;
};

// Throws std::invalid_argument on non-finite fields.
void validate(const ModelParams& params);
void validate(const QuenchSpec& quench);

/// A mode with vanishing single-particle energy was evaluated where the
/// quantity is undefined.
class DegenerateModeError : public std::domain_error {
 public:
  explicit DegenerateModeError(const std::string& what) : std::domain_error(what) {}
};

class QuadratureError : public std::runtime_error {
 public:
  explicit QuadratureError(const std::string& what) : std::runtime_error(what) {}
};

/// Both partial-transpose eigenvalue branches came out negative.
class UnphysicalStateError : public std::domain_error {
 public:
  explicit UnphysicalStateError(const std::string& what) : std::domain_error(what) {}
};

}  // namespace xyq
