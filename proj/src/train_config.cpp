#include "slidesvm/train_config.hpp"

#include <cmath>
#include <stdexcept>

namespace slidesvm {

void TrainConfig::validate() const {
  if (!(C > 0.0) || !std::isfinite(C)) throw std::invalid_argument("C must be positive");
  if (!(delta > 0.0) || !std::isfinite(delta)) {
    throw std::invalid_argument("delta must be positive");
  }
  const double golden = (1.0 + std::sqrt(5.0)) / 2.0;
  if (!(eta > 0.0) || !(eta < golden)) {
    throw std::invalid_argument("eta must lie in (0, (1 + sqrt 5) / 2)");
  }
  if (max_iter < 1) throw std::invalid_argument("max_iter must be at least 1");
  if (!(tol > 0.0)) throw std::invalid_argument("tol must be positive");
  slide.validate();
}

}  // namespace slidesvm
