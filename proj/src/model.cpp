#include "xyquench/model.hpp"

#include <cmath>

namespace xyq {

void validate(const ModelParams& params) {
  if (!std::isfinite(params.gamma) || !std::isfinite(params.h)) {
    throw std::invalid_argument("model parameters must be finite");
  }
}

void validate(const QuenchSpec& quench) {
  validate(quench.pre);
  validate(quench.post);
}

}  // namespace xyq
