#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <mutex>
#include <set>
#include <sstream>

#include "slidesvm/tuning.hpp"

namespace slidesvm {
namespace {

Grid small_grid() {
  Grid g;
  g.c_values = {0.5, 2.0};
  g.delta_values = {1.0, 4.0};
  g.v_values = {0.5, 1.0};
  g.max_iter = 60;
  return g;
}

std::string csv(const CvResult& r) {
  std::ostringstream out;
  write_cv_csv(r, out);
  return out.str();
}

TEST(Grid, Default) {
  const Grid g = default_grid();
  EXPECT_EQ(g.c_values.size(), 15u);
  EXPECT_EQ(g.delta_values.size(), 15u);
  EXPECT_EQ(g.v_values.size(), 10u);
  EXPECT_EQ(g.size(), 2250u);
  EXPECT_EQ(g.configs().size(), 2250u);
  EXPECT_NE(std::find(g.c_values.begin(), g.c_values.end(), 1.0), g.c_values.end());
  EXPECT_DOUBLE_EQ(g.c_values.front(), std::pow(2.0, -3.5));
  EXPECT_DOUBLE_EQ(g.c_values.back(), std::pow(2.0, 3.5));
  EXPECT_EQ(g.eta, 1.618);
  EXPECT_EQ(g.max_iter, 1000u);
  EXPECT_EQ(g.tol, 1e-3);
  for (const auto& cfg : g.configs()) {
    if (cfg.slide.v == 0.5) EXPECT_DOUBLE_EQ(cfg.slide.epsilon, 0.05);
    EXPECT_DOUBLE_EQ(cfg.slide.epsilon, cfg.slide.v / 10);
  }
}

TEST(Grid, Validation) {
  Grid g = small_grid();
  g.c_values.clear();
  EXPECT_THROW(g.validate(), std::invalid_argument);
  g = small_grid();
  g.v_values = {1.5};
  EXPECT_THROW(g.validate(), std::invalid_argument);
  g = small_grid();
  g.delta_values = {-1.0};
  EXPECT_THROW(g.validate(), std::invalid_argument);
  g = small_grid();
  g.epsilon_values = {0.0};
  EXPECT_THROW(g.validate(), std::invalid_argument);
}

TEST(Grid, BaselinesAreSlideSettings) {
  // Ramp loss: eps = 0, v = 1. Truncated loss: eps = 0, v < 1.
  Grid g = small_grid();
  g.v_values = {1.0, 0.6};
  g.epsilon_values = {0.0, 0.0};
  const auto cfgs = g.configs();
  ASSERT_EQ(cfgs.size(), 8u);
  for (const auto& c : cfgs) {
    EXPECT_EQ(c.slide.epsilon, 0.0);
    EXPECT_NO_THROW(c.validate());
  }
  const Dataset ds = two_cluster_dataset(15, 2);
  EXPECT_NO_THROW(grid_search(ds, g, 3, 1, 1));
}

TEST(TieBreak, Order) {
  TrainConfig a, b;
  a.C = 1;
  b.C = 2;
  EXPECT_TRUE(tie_break_less(a, b));
  b.C = 1;
  a.delta = 2;
  b.delta = 1;
  EXPECT_TRUE(tie_break_less(b, a));
  a.delta = 1;
  a.slide.v = 0.5;
  EXPECT_TRUE(tie_break_less(a, b));
  EXPECT_FALSE(tie_break_less(a, a));
}

TEST(CrossValidate, SeparableGivesPerfectScore) {
  const Dataset ds = two_cluster_dataset(30, 6, 6.0);
  TrainConfig cfg;
  const CvScore s = cross_validate(ds, cfg, 10, 1);
  EXPECT_EQ(s.fold_accuracy.size(), 10u);
  EXPECT_EQ(s.mean_accuracy, 1.0);
}

TEST(CrossValidate, DeterministicAndFoldCount) {
  const Dataset ds = two_cluster_dataset(25, 7, 1.0);
  TrainConfig cfg;
  cfg.max_iter = 80;
  const CvScore a = cross_validate(ds, cfg, 5, 99);
  const CvScore b = cross_validate(ds, cfg, 5, 99);
  EXPECT_EQ(a.fold_accuracy, b.fold_accuracy);
  EXPECT_EQ(a.mean_accuracy, b.mean_accuracy);

  const Dataset four = two_cluster_dataset(2, 1);
  const CvScore two = cross_validate(four, cfg, 2, 3);
  EXPECT_EQ(two.fold_accuracy.size(), 2u);
  const FoldPlan plan = kfold_plan(4, 2, 3);
  EXPECT_EQ(plan.test_indices(0).size(), 2u);
  EXPECT_EQ(plan.test_indices(1).size(), 2u);
}

TEST(CrossValidate, SingleClassFoldStillTrains) {
  const Dataset ds({{{0, 1.0}}, {{0, 2.0}}, {{0, -1.0}}, {{0, 3.0}}}, {1, 1, -1, 1}, 1);
  TrainConfig cfg;
  const CvScore s = cross_validate(ds, cfg, 4, 0);
  for (double a : s.fold_accuracy) {
    EXPECT_GE(a, 0.0);
    EXPECT_LE(a, 1.0);
  }
}

TEST(CrossValidate, Repeated) {
  const Dataset ds = two_cluster_dataset(20, 3, 1.0);
  TrainConfig cfg;
  cfg.max_iter = 50;
  const CvScore r = repeated_cross_validate(ds, cfg, 4, 10, 3);
  EXPECT_EQ(r.fold_accuracy.size(), 12u);
  const double expected = (cross_validate(ds, cfg, 4, 10).mean_accuracy +
                           cross_validate(ds, cfg, 4, 11).mean_accuracy +
                           cross_validate(ds, cfg, 4, 12).mean_accuracy) / 3.0;
  EXPECT_DOUBLE_EQ(r.mean_accuracy, expected);
}

TEST(GridSearch, SingleConfig) {
  Grid g;
  g.c_values = {2.0};
  g.delta_values = {0.5};
  g.v_values = {0.7};
  const CvResult r = grid_search(two_cluster_dataset(20, 1), g, 5, 1, 1);
  ASSERT_EQ(r.scores.size(), 1u);
  EXPECT_EQ(r.best, 0u);
  EXPECT_EQ(r.best_score().config.C, 2.0);
}

TEST(GridSearch, ParallelismDoesNotChangeOutput) {
  const Dataset ds = two_cluster_dataset(30, 11, 1.0);
  const CvResult one = grid_search(ds, small_grid(), 5, 4, 1);
  const CvResult many = grid_search(ds, small_grid(), 5, 4, 8);
  EXPECT_EQ(csv(one), csv(many));
  EXPECT_EQ(one.best, many.best);
  EXPECT_EQ(one.plan_fingerprint, many.plan_fingerprint);
}

TEST(GridSearch, TiesGoToSmallerC) {
  // Every config separates these clusters perfectly.
  const Dataset ds = two_cluster_dataset(20, 2, 8.0);
  Grid g = small_grid();
  g.c_values = {4.0, 0.5, 2.0};
  g.delta_values = {1.0, 0.5};
  const CvResult r = grid_search(ds, g, 4, 1, 2);
  for (const auto& s : r.scores) ASSERT_EQ(s.mean_accuracy, 1.0);
  EXPECT_EQ(r.best_score().config.C, 0.5);
  EXPECT_EQ(r.best_score().config.delta, 0.5);
  EXPECT_EQ(r.best_score().config.slide.v, 0.5);
}

TEST(GridSearch, EveryConfigSeesTheSameFolds) {
  const Dataset ds = two_cluster_dataset(20, 5, 1.5);
  GridOptions opts;
  opts.folds = 4;
  opts.seed = 12;
  opts.parallelism = 3;
  std::mutex mu;
  std::set<std::pair<std::size_t, std::size_t>> fold_shapes;
  std::size_t calls = 0;
  opts.observer = [&](const TrainConfig&, std::size_t fold, const TrainResult&,
                      const Dataset& train_part, const Dataset& held_out) {
    std::lock_guard g(mu);
    ++calls;
    fold_shapes.insert({fold, train_part.size() * 1000 + held_out.size()});
  };
  const CvResult r = grid_search(ds, small_grid(), opts);
  EXPECT_EQ(calls, small_grid().size() * 4);
  EXPECT_EQ(fold_shapes.size(), 4u);
  EXPECT_EQ(r.plan_fingerprint, kfold_plan(ds.size(), 4, 12).fingerprint());

  // Same plan inside cross_validate gives the same per-fold scores.
  for (const auto& s : r.scores) {
    EXPECT_EQ(s.fold_accuracy, cross_validate(ds, s.config, kfold_plan(ds.size(), 4, 12)).fold_accuracy);
  }
}

TEST(GridSearch, CsvLayout) {
  const Dataset ds = two_cluster_dataset(10, 1);
  Grid g;
  g.c_values = {1.0};
  g.delta_values = {1.0};
  g.v_values = {1.0};
  const CvResult r = grid_search(ds, g, 2, 1, 1);
  std::ostringstream out;
  write_cv_csv(r, out, 0.75);
  std::istringstream in(out.str());
  std::string header, row, test;
  std::getline(in, header);
  std::getline(in, row);
  std::getline(in, test);
  EXPECT_EQ(header, "C,delta,v,epsilon,mean_acc,fold_1,fold_2,converged_folds");
  EXPECT_EQ(row.substr(0, 10), "1,1,1,0.1,");
  EXPECT_EQ(test, "1,1,1,0.1,0.75,,,test");
}

TEST(Holdout, ScalesWithTrainingMap) {
  const Dataset train_set = two_cluster_dataset(30, 1);
  const Dataset test = two_cluster_dataset(30, 2);
  TrainConfig cfg;
  const HoldoutResult h = train_and_test(train_set, test, cfg);
  const ScalingMap map = fit_scaling(train_set);
  EXPECT_EQ(h.test_accuracy, accuracy(h.model, apply_scaling(test, map)));
  EXPECT_THROW(train_and_test(train_set, Dataset({}, {}, 2), cfg), std::invalid_argument);
}

TEST(Flip, BaselineOnlyMatchesPlainPipeline) {
  const Dataset train_set = two_cluster_dataset(20, 3, 1.0);
  const Dataset test = two_cluster_dataset(20, 4, 1.0);
  GridOptions opts;
  opts.folds = 4;
  const auto rows = flip_experiment(train_set, test, small_grid(), {0.0}, 5, opts);
  ASSERT_EQ(rows.size(), 1u);
  const CvResult cv = grid_search(train_set, small_grid(), opts);
  EXPECT_EQ(rows[0].flipped, 0u);
  EXPECT_EQ(rows[0].cv_mean_accuracy, cv.best_score().mean_accuracy);
  EXPECT_EQ(rows[0].test_accuracy,
            train_and_test(train_set, test, cv.best_score().config).test_accuracy);
}

TEST(Flip, RowsAndDeterminism) {
  const Dataset train_set = two_cluster_dataset(20, 3, 1.0);
  const Dataset test = two_cluster_dataset(20, 4, 1.0);
  GridOptions opts;
  opts.folds = 4;
  const auto a = flip_experiment(train_set, test, small_grid(), {0.05, 0.15}, 5, opts);
  ASSERT_EQ(a.size(), 3u);
  EXPECT_EQ(a[0].rate, 0.0);
  EXPECT_EQ(a[1].flipped, 2u);
  EXPECT_EQ(a[2].flipped, 6u);
  const auto b = flip_experiment(train_set, test, small_grid(), {0.05, 0.15}, 5, opts);
  std::ostringstream sa, sb;
  write_flip_csv(a, sa);
  write_flip_csv(b, sb);
  EXPECT_EQ(sa.str(), sb.str());
  EXPECT_EQ(sa.str().substr(0, sa.str().find('\n')),
            "rate,flipped,C,delta,v,epsilon,cv_mean_acc,test_acc,converged");
  EXPECT_THROW(flip_experiment(train_set, test, small_grid(), {1.5}, 5, opts),
               std::invalid_argument);
}

}  // namespace
}  // namespace slidesvm
