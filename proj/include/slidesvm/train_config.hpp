#ifndef SLIDESVM_TRAIN_CONFIG_HPP
#define SLIDESVM_TRAIN_CONFIG_HPP

#include <cstddef>

#include "slidesvm/slide_loss.hpp"

namespace slidesvm {

// Solver hyperparameters. Defaults follow the reference experiments:
// eta = 1.618, K = 1000, tol = 1e-3.
struct TrainConfig {
  double C = 1.0;       // loss trade-off
  double delta = 1.0;   // augmented Lagrangian penalty
  double eta = 1.618;   // dual step, must lie in (0, (1 + sqrt 5) / 2)
  std::size_t max_iter = 1000;
  double tol = 1e-3;
  SlideParams slide;

  void validate() const;

  // The solver's proximal scale is 1/delta, so gamma*C = C/delta.
  double gamma_c() const { return C / delta; }
  bool ramp_regime() const { return slidesvm::ramp_regime(gamma_c(), slide); }
  // Threshold below which a multiplier counts as zero.
  double support_threshold() const { return 10.0 * tol; }
};

}  // namespace slidesvm

#endif  // SLIDESVM_TRAIN_CONFIG_HPP
