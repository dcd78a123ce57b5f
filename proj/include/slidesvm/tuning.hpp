#ifndef SLIDESVM_TUNING_HPP
#define SLIDESVM_TUNING_HPP

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <ostream>
#include <vector>

#include "slidesvm/admm.hpp"
#include "slidesvm/dataset.hpp"
#include "slidesvm/train_config.hpp"

namespace slidesvm {

inline constexpr std::uint64_t kDefaultCvSeed = 7;
inline constexpr std::uint64_t kDefaultFlipSeed = 11;

// Hyperparameter grid. When `epsilon_values` is empty each v gets
// epsilon = v / 10; otherwise it is paired element-wise with `v_values`.
struct Grid {
  std::vector<double> c_values;
  std::vector<double> delta_values;
  std::vector<double> v_values;
  std::vector<double> epsilon_values;
  double eta = 1.618;
  std::size_t max_iter = 1000;
  double tol = 1e-3;

  void validate() const;
  std::size_t size() const;
  // C-major, then delta, then v, in the order the lists are given.
  std::vector<TrainConfig> configs() const;
};

// C and delta over sqrt(2)^-7 .. sqrt(2)^7, v over 0.1 .. 1.0.
Grid default_grid();

// Strict "comes first" order for equal scores: smaller C, then delta, then v.
bool tie_break_less(const TrainConfig& a, const TrainConfig& b);

struct CvScore {
  TrainConfig config;
  std::vector<double> fold_accuracy;
  double mean_accuracy = 0.0;
  std::size_t converged_folds = 0;
};

struct CvResult {
  std::vector<CvScore> scores;  // grid order
  std::size_t best = 0;
  std::size_t folds = 0;
  std::uint64_t plan_fingerprint = 0;

  const CvScore& best_score() const { return scores.at(best); }
};

// Called once per (config, fold) with the scaled fold data. Calls are
// serialized, but their order depends on scheduling.
using CvObserver = std::function<void(const TrainConfig&, std::size_t fold,
                                      const TrainResult&, const Dataset& train,
                                      const Dataset& held_out)>;
using ProgressFn = std::function<void(std::size_t done, std::size_t total)>;

struct GridOptions {
  std::size_t folds = 10;
  std::uint64_t seed = kDefaultCvSeed;
  std::size_t parallelism = 1;
  CvObserver observer;
  ProgressFn progress;
};

// Scaling is fit on each training portion and applied to both portions.
CvScore cross_validate(const Dataset& ds, const TrainConfig& cfg, const FoldPlan& plan);
CvScore cross_validate(const Dataset& ds, const TrainConfig& cfg, std::size_t k,
                       std::uint64_t seed);
// Mean over `repeats` fold plans with seeds seed, seed+1, ...; the fold
// list holds every fold of every repeat.
CvScore repeated_cross_validate(const Dataset& ds, const TrainConfig& cfg,
                                std::size_t k, std::uint64_t seed,
                                std::size_t repeats);

// Every config sees the same folds. Output does not depend on parallelism.
CvResult grid_search(const Dataset& ds, const Grid& grid, const GridOptions& opts);
CvResult grid_search(const Dataset& ds, const Grid& grid, std::size_t k,
                     std::uint64_t seed, std::size_t parallelism);

struct HoldoutResult {
  Model model;
  double test_accuracy = 0.0;
};

// Fit scaling on `train`, train `cfg` on all of it, score `test`.
HoldoutResult train_and_test(const Dataset& train, const Dataset& test,
                             const TrainConfig& cfg);

struct FlipRow {
  double rate = 0.0;
  std::size_t flipped = 0;
  TrainConfig config;
  double cv_mean_accuracy = 0.0;
  double test_accuracy = 0.0;
  bool converged = false;
};

// One row per rate, rate 0 first (added when missing). Each row flips
// the training labels with `flip_seed`, tunes on the flipped set, retrains
// the winner on it and scores the untouched test set.
std::vector<FlipRow> flip_experiment(const Dataset& train, const Dataset& test,
                                     const Grid& grid, std::vector<double> rates,
                                     std::uint64_t flip_seed, const GridOptions& opts);

void write_cv_csv(const CvResult& result, std::ostream& out,
                  std::optional<double> test_accuracy = std::nullopt);
void write_flip_csv(const std::vector<FlipRow>& rows, std::ostream& out);

}  // namespace slidesvm

#endif  // SLIDESVM_TUNING_HPP
