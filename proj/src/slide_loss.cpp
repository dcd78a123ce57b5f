#include "slidesvm/slide_loss.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace slidesvm {

void SlideParams::validate() const {
  if (!(epsilon >= 0.0) || !(epsilon < v) || !(v <= 1.0)) {
    throw std::invalid_argument(
        "slide parameters must satisfy 0 <= epsilon < v <= 1 (got epsilon=" +
        std::to_string(epsilon) + ", v=" + std::to_string(v) + ")");
  }
}

double slide_loss(double t, const SlideParams& p) {
  if (t > p.v) return 1.0;
  if (t <= p.epsilon) return 0.0;
  return (t - p.epsilon) / p.width();
}

double slide_loss_sum(std::span<const double> u, const SlideParams& p,
                      double scale) {
  double total = 0.0;
  for (double t : u) total += slide_loss(t, p);
  return scale * total;
}

bool SubdiffSet::contains(double g, double tol) const {
  switch (kind) {
    case Kind::singleton:
      return std::abs(g - lo) <= tol;
    case Kind::pair:
      return std::abs(g - lo) <= tol || std::abs(g - hi) <= tol;
    case Kind::interval:
      return g >= lo - tol && g <= hi + tol;
  }
  return false;
}

SubdiffSet slide_subdifferential(double t, const SlideParams& p) {
  const double slope = 1.0 / p.width();
  using K = SubdiffSet::Kind;
  if (t > p.v || t < p.epsilon) return {K::singleton, 0.0, 0.0};
  if (t == p.v) return {K::pair, 0.0, slope};
  if (t == p.epsilon) return {K::interval, 0.0, slope};
  return {K::singleton, slope, slope};
}

double prox_tie_point(double gamma_c, const SlideParams& p) {
  if (ramp_regime(gamma_c, p)) return p.v + gamma_c / (2.0 * p.width());
  return std::sqrt(2.0 * gamma_c) + p.epsilon;
}

ProxResult prox_slide(double s, double gamma_c, const SlideParams& p) {
  if (!(gamma_c > 0.0)) {
    throw std::invalid_argument("prox_slide: gamma_c must be positive");
  }
  const double tie = prox_tie_point(gamma_c, p);
  if (s > tie || s <= p.epsilon) return {s, false, std::nullopt};

  if (ramp_regime(gamma_c, p)) {
    const double shift = gamma_c / p.width();
    if (s == tie) return {s, true, s - shift};
    if (s >= shift + p.epsilon) return {s - shift, false, std::nullopt};
    return {p.epsilon, false, std::nullopt};
  }
  if (s == tie) return {s, true, p.epsilon};
  return {p.epsilon, false, std::nullopt};
}

std::vector<double> prox_slide_vector(std::span<const double> s, double gamma_c,
                                      const SlideParams& p) {
  std::vector<double> out(s.size());
  std::transform(s.begin(), s.end(), out.begin(), [&](double si) {
    return prox_slide(si, gamma_c, p).value;
  });
  return out;
}

double prox_objective(double t, double s, double gamma_c, const SlideParams& p) {
  const double d = t - s;
  return gamma_c * slide_loss(t, p) + 0.5 * d * d;
}

namespace {

struct Best {
  double t = 0.0;
  double f = 0.0;
  bool set = false;
};

void offer(Best& best, double t, double s, double gamma_c,
           const SlideParams& p) {
  const double f = prox_objective(t, s, gamma_c, p);
  if (!best.set || f < best.f) {
    best = {t, f, true};
    return;
  }
  // Equal objective: prefer the point nearest to s.
  if (f == best.f && std::abs(t - s) < std::abs(best.t - s)) best.t = t;
}

struct GridSpan {
  double lo;
  long long count;  // number of grid points
  double step;
  double at(long long j) const { return lo + static_cast<double>(j) * step; }
};

GridSpan make_span(double s, double gamma_c, const SlideParams& p,
                   double step) {
  if (!(step > 0.0)) throw std::invalid_argument("oracle step must be positive");
  const double lo = s - 2.0 * gamma_c / p.width() - 1.0;
  const double hi = s + 1.0;
  const auto count = static_cast<long long>(std::floor((hi - lo) / step)) + 1;
  return {lo, count, step};
}

void offer_breakpoints(Best& best, double s, double gamma_c,
                       const SlideParams& p) {
  for (double c : {p.epsilon, p.v, s, s - gamma_c / p.width()}) {
    offer(best, c, s, gamma_c, p);
  }
}

}  // namespace

double prox_oracle(double s, double gamma_c, const SlideParams& p,
                   double step) {
  const GridSpan grid = make_span(s, gamma_c, p, step);
  Best best;
  offer_breakpoints(best, s, gamma_c, p);

  // Within each smooth piece the objective is a convex quadratic, so the
  // grid minimum of that piece sits at a grid point next to the piece's
  // stationary point or next to one of the piece boundaries.
  std::vector<double> anchors = {p.epsilon, p.v, s, s - gamma_c / p.width()};
  const long long last = grid.count - 1;
  auto visit = [&](long long j) {
    if (j < 0 || j > last) return;
    offer(best, grid.at(j), s, gamma_c, p);
  };
  visit(0);
  visit(last);
  for (double a : anchors) {
    const auto j = static_cast<long long>(std::floor((a - grid.lo) / step));
    for (long long k = j - 2; k <= j + 2; ++k) visit(std::clamp(k, 0LL, last));
  }
  return best.t;
}

double prox_oracle_scan(double s, double gamma_c, const SlideParams& p,
                        double step) {
  const GridSpan grid = make_span(s, gamma_c, p, step);
  Best best;
  offer_breakpoints(best, s, gamma_c, p);
  for (long long j = 0; j < grid.count; ++j) offer(best, grid.at(j), s, gamma_c, p);
  return best.t;
}

}  // namespace slidesvm
