#ifndef SLIDESVM_PROXCHECK_HPP
#define SLIDESVM_PROXCHECK_HPP

#include <cstddef>
#include <cstdint>
#include <ostream>
#include <vector>

#include "slidesvm/slide_loss.hpp"

namespace slidesvm {

inline constexpr std::uint64_t kDefaultProxSeed = 2024;

struct ProxCheckRow {
  double s = 0.0;
  double gamma_c = 0.0;
  SlideParams slide;
  double prox = 0.0;
  double oracle = 0.0;
  double abs_dev = 0.0;
  bool tie_excluded = false;  // s within tie_radius of the jump
};

struct ProxCheckReport {
  std::vector<ProxCheckRow> rows;
  double max_dev = 0.0;   // over rows that are not tie-excluded
  double mean_dev = 0.0;
  std::size_t ramp_samples = 0;
  std::size_t flat_samples = 0;
  std::size_t excluded = 0;
  std::size_t failures(double limit) const;
};

// Random (s, gamma*C, eps, v) draws compared against the brute-force
// minimizer. gamma*C is drawn so gamma*C / (2 (v - eps)^2) is log-uniform
// on [0.1, 10], which puts roughly half the draws in each regime, and s
// covers every breakpoint with a margin of 0.5 on both sides.
ProxCheckReport run_prox_check(std::size_t samples, std::uint64_t seed,
                               double tie_radius = 1e-6);

void write_prox_check_csv(const ProxCheckReport& report, std::ostream& out);

}  // namespace slidesvm

#endif  // SLIDESVM_PROXCHECK_HPP
