#include "slidesvm/proxcheck.hpp"

#include <cmath>
#include <random>

#include "slidesvm/text_format.hpp"

namespace slidesvm {

std::size_t ProxCheckReport::failures(double limit) const {
  std::size_t n = 0;
  for (const auto& r : rows) n += !r.tie_excluded && r.abs_dev > limit;
  return n;
}

ProxCheckReport run_prox_check(std::size_t samples, std::uint64_t seed,
                               double tie_radius) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  ProxCheckReport rep;
  rep.rows.reserve(samples);
  double sum = 0.0;
  std::size_t counted = 0;

  for (std::size_t j = 0; j < samples; ++j) {
    ProxCheckRow row;
    row.slide.v = 0.05 + 0.95 * unit(rng);
    row.slide.epsilon = 0.9 * row.slide.v * unit(rng);
    const double w = row.slide.width();
    const double rho = std::exp(std::log(0.1) + (std::log(10.0) - std::log(0.1)) * unit(rng));
    row.gamma_c = 2.0 * rho * w * w;
    const double tie = prox_tie_point(row.gamma_c, row.slide);
    const double lo = row.slide.epsilon - 0.5;
    const double hi = tie + 0.5;
    row.s = lo + (hi - lo) * unit(rng);

    row.prox = prox_slide(row.s, row.gamma_c, row.slide).value;
    row.oracle = prox_oracle(row.s, row.gamma_c, row.slide);
    row.abs_dev = std::abs(row.prox - row.oracle);
    row.tie_excluded = std::abs(row.s - tie) <= tie_radius;

    (ramp_regime(row.gamma_c, row.slide) ? rep.ramp_samples : rep.flat_samples)++;
    if (row.tie_excluded) {
      ++rep.excluded;
    } else {
      rep.max_dev = std::max(rep.max_dev, row.abs_dev);
      sum += row.abs_dev;
      ++counted;
    }
    rep.rows.push_back(row);
  }
  rep.mean_dev = counted ? sum / static_cast<double>(counted) : 0.0;
  return rep;
}

void write_prox_check_csv(const ProxCheckReport& report, std::ostream& out) {
  out << "sample,s,gamma_c,epsilon,v,prox,oracle,abs_dev,tie_excluded\n";
  for (std::size_t j = 0; j < report.rows.size(); ++j) {
    const auto& r = report.rows[j];
    out << j << ',' << format_double(r.s) << ',' << format_double(r.gamma_c) << ','
        << format_double(r.slide.epsilon) << ',' << format_double(r.slide.v) << ','
        << format_double(r.prox) << ',' << format_double(r.oracle) << ','
        << format_double(r.abs_dev) << ',' << (r.tie_excluded ? 1 : 0) << '\n';
  }
}

}  // namespace slidesvm
