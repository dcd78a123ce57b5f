#ifndef SLIDESVM_TESTS_PROPERTY_HPP
#define SLIDESVM_TESTS_PROPERTY_HPP

// Minimal seeded property runner. Each case gets its own generator derived
// from (seed, case index) so a failure can be replayed on its own.

#include <cmath>
#include <cstdint>
#include <iostream>
#include <optional>
#include <random>
#include <string>

namespace slidesvm::prop {

using Rng = std::mt19937_64;

struct Outcome {
  std::size_t cases = 0;
  std::size_t discarded = 0;
  std::optional<std::string> failure;
};

// `check(rng)` returns nullopt on success, "" to discard the case, or a
// description of the counterexample.
template <class Check>
Outcome for_all(const std::string& name, std::size_t cases, std::uint64_t seed, Check check) {
  Outcome out;
  for (std::size_t i = 0; i < cases; ++i) {
    std::seed_seq seq{seed, static_cast<std::uint64_t>(i)};
    Rng rng(seq);
    std::optional<std::string> r = check(rng);
    if (!r) {
      ++out.cases;
      continue;
    }
    if (r->empty()) {
      ++out.discarded;
      continue;
    }
    out.failure = name + " failed at case " + std::to_string(i) + " (seed " +
                  std::to_string(seed) + "): " + *r;
    return out;
  }
  std::cout << "property " << name << ": " << out.cases << " cases passed";
  if (out.discarded) std::cout << ", " << out.discarded << " discarded";
  std::cout << "\n";
  return out;
}

inline double uniform(Rng& rng, double lo, double hi) {
  return std::uniform_real_distribution<double>(lo, hi)(rng);
}

inline std::size_t index(Rng& rng, std::size_t lo, std::size_t hi) {
  return std::uniform_int_distribution<std::size_t>(lo, hi)(rng);
}

inline double log_uniform(Rng& rng, double lo, double hi) {
  return std::exp(uniform(rng, std::log(lo), std::log(hi)));
}

}  // namespace slidesvm::prop

#endif  // SLIDESVM_TESTS_PROPERTY_HPP
