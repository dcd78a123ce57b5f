#ifndef SLIDESVM_SLIDE_LOSS_HPP
#define SLIDESVM_SLIDE_LOSS_HPP

#include <optional>
#include <span>
#include <vector>

namespace slidesvm {

// Shape of the Slide loss: zero up to `epsilon`, a linear ramp on
// (epsilon, v], and a plateau of 1 above `v`.
struct SlideParams {
  double epsilon = 0.1;
  double v = 1.0;

  // Throws std::invalid_argument unless 0 <= epsilon < v <= 1.
  void validate() const;
  double width() const { return v - epsilon; }
  bool operator==(const SlideParams&) const = default;
};

double slide_loss(double t, const SlideParams& p);

// scale * sum_i slide_loss(u_i).
double slide_loss_sum(std::span<const double> u, const SlideParams& p,
                      double scale = 1.0);

// Limiting subdifferential of the Slide loss at a point.
struct SubdiffSet {
  enum class Kind { singleton, pair, interval };
  Kind kind = Kind::singleton;
  double lo = 0.0;
  double hi = 0.0;

  bool contains(double g, double tol = 0.0) const;
};

SubdiffSet slide_subdifferential(double t, const SlideParams& p);

// Minimizer of t -> gamma_c * slide_loss(t) + (t - s)^2 / 2.
//
// At the two tie points the objective has two global minimizers. `value`
// then holds s (identity branch) and `alternate` the other one.
struct ProxResult {
  double value = 0.0;
  bool is_tie = false;
  std::optional<double> alternate;
};

// Regime split of the proximal map: the ramp branch only exists while
// gamma_c < 2 (v - eps)^2. The boundary belongs to the flat regime.
inline bool ramp_regime(double gamma_c, const SlideParams& p) {
  return gamma_c < 2.0 * p.width() * p.width();
}

// Upper edge of the region mapped away from the identity; this is the
// tie point of the active regime.
double prox_tie_point(double gamma_c, const SlideParams& p);

ProxResult prox_slide(double s, double gamma_c, const SlideParams& p);

// Componentwise prox, taking `value` at ties.
std::vector<double> prox_slide_vector(std::span<const double> s, double gamma_c,
                                      const SlideParams& p);

// Objective minimized by the proximal map.
double prox_objective(double t, double s, double gamma_c, const SlideParams& p);

// Test oracles. They only evaluate prox_objective and never consult the
// closed form above.

// Grid minimization of prox_objective over [s - 2 gamma_c/(v-eps) - 1, s + 1]
// at spacing `step`, plus the candidates {eps, v, s, s - gamma_c/(v-eps)}.
// Ties resolve toward the candidate nearest to s. Each smooth piece of the
// objective is a convex quadratic, so only the grid points bracketing the
// piece's stationary point and the piece ends are evaluated; the result is
// the grid argmin.
double prox_oracle(double s, double gamma_c, const SlideParams& p,
                   double step = 1e-6);

// Same contract as prox_oracle but evaluates every grid point. Only usable
// with coarse steps; kept to validate prox_oracle.
double prox_oracle_scan(double s, double gamma_c, const SlideParams& p,
                        double step);

}  // namespace slidesvm

#endif  // SLIDESVM_SLIDE_LOSS_HPP
