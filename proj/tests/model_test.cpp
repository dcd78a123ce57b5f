#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>
#include <random>

#include "slidesvm/admm.hpp"
#include "slidesvm/model.hpp"

namespace slidesvm {
namespace {

Model linear(std::vector<double> w, double b) {
  Model m;
  m.w = std::move(w);
  m.b = b;
  return m;
}

TEST(SupportVectors, Examples) {
  TrainConfig cfg;
  cfg.C = 1;
  cfg.slide = {0.1, 1.0};
  ASSERT_TRUE(cfg.ramp_regime());

  const std::vector<double> none(5, 0.0);
  EXPECT_TRUE(extract_support_vectors(none, cfg).t_star.empty());

  const std::vector<double> lam{0.0, -1.0 / 0.9, -0.5};
  const SupportSet s = extract_support_vectors(lam, cfg);
  EXPECT_EQ(s.t_star, (std::vector<std::size_t>{1, 2}));
  EXPECT_EQ(s.t2, (std::vector<std::size_t>{1}));
  EXPECT_EQ(s.t1, (std::vector<std::size_t>{2}));
  EXPECT_EQ(s.lambda_values, (std::vector<double>{-1.0 / 0.9, -0.5}));

  TrainConfig flat = cfg;
  flat.slide = {0.1, 0.3};
  ASSERT_FALSE(flat.ramp_regime());
  const SupportSet f = extract_support_vectors(std::vector<double>{-0.2, 0.0}, flat);
  EXPECT_EQ(f.t_star, (std::vector<std::size_t>{0}));
  EXPECT_EQ(f.t1, f.t_star);
  EXPECT_TRUE(f.t2.empty());
}

TEST(SupportVectors, ComplementIsBelowThreshold) {
  TrainConfig cfg;
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> u(-1.5, 0.2);
  std::vector<double> lam(1000);
  for (auto& x : lam) x = u(rng);
  const SupportSet s = extract_support_vectors(lam, cfg);
  std::vector<char> in(lam.size(), 0);
  for (auto i : s.t_star) in[i] = 1;
  for (std::size_t i = 0; i < lam.size(); ++i) {
    if (!in[i]) EXPECT_FALSE(lam[i] < -cfg.support_threshold());
  }
  EXPECT_EQ(s.t1.size() + s.t2.size(), s.t_star.size());
}

TEST(Predict, Examples) {
  EXPECT_EQ(predict(linear({0, 0}, 1), {{1, 5.0}}), 1);
  EXPECT_EQ(predict(linear({1, 0}, -0.5), {{0, 0.5}, {1, 9.0}}), -1);
  EXPECT_EQ(predict(linear({1, 0}, 0), {{0, -0.3}, {1, 7.0}}), -1);
  EXPECT_THROW(decision_value(linear({1}, 0), {{3, 1.0}}), std::out_of_range);
}

TEST(Accuracy, Counting) {
  const Dataset ds({{{0, 1.0}}, {{0, -1.0}}, {{0, 2.0}}, {{0, -2.0}}}, {1, -1, 1, 1}, 1);
  EXPECT_EQ(accuracy(linear({1}, 0), ds), 0.75);
  EXPECT_EQ(accuracy(linear({1}, 0), ds.with_labels({1, -1, 1, -1})), 1.0);
  EXPECT_EQ(accuracy(linear({1}, 0), ds.with_labels({-1, 1, -1, 1})), 0.0);
  const Confusion c = confusion(linear({1}, 0), ds);
  EXPECT_EQ(c.true_pos, 2u);
  EXPECT_EQ(c.true_neg, 1u);
  EXPECT_EQ(c.false_neg, 1u);
  EXPECT_EQ(c.false_pos, 0u);
}

TEST(Accuracy, Errors) {
  EXPECT_THROW(accuracy(linear({1}, 0), Dataset({}, {}, 1)), std::invalid_argument);
  EXPECT_THROW(accuracy(linear({1}, 0), Dataset({{{1, 1.0}}}, {1}, 2)), std::invalid_argument);
}

TEST(Accuracy, EqualsSignFormula) {
  std::mt19937_64 rng(2);
  std::normal_distribution<double> nd;
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t m = 1 + trial % 37;
    std::vector<SparseRow> rows(m);
    std::vector<int> labels(m);
    for (std::size_t i = 0; i < m; ++i) {
      // Some exact zeros so the sign-at-zero rule is exercised.
      if (i % 5) rows[i] = {{0, std::round(nd(rng) * 2) / 2}, {1, nd(rng)}};
      labels[i] = nd(rng) > 0 ? 1 : -1;
    }
    const Dataset ds(rows, labels, 2);
    const Model model = linear({nd(rng), trial % 3 ? 0.0 : nd(rng)}, trial % 4 ? 0.0 : nd(rng));
    double sum = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
      const double sgn = decision_value(model, ds.row(i)) > 0 ? 1.0 : -1.0;
      sum += std::abs(sgn - labels[i]);
    }
    EXPECT_DOUBLE_EQ(accuracy(model, ds), 1.0 - sum / (2.0 * static_cast<double>(m)));
  }
}

TEST(MarginCheck, Examples) {
  const double tol = 1e-3;
  Model m = linear({1.0}, 0.0);
  m.C = 0.5;
  m.delta = 1.0;
  m.slide = {0.1, 1.0};

  // x = 1 - eps gives margin exactly 1 - eps.
  const Dataset ds({{{0, 0.9}}, {{0, -1.0}}, {{0, 0.9 + 5 * tol}}}, {1, -1, 1}, 1);
  SupportSet s;
  s.t_star = {0, 1, 2};
  s.t1 = {0, 2};
  s.t2 = {1};
  s.lambda_values = {-0.2, -1.0 / 0.9, -0.3};
  const MarginReport rep = margin_identity_check(m, ds, s, tol);
  ASSERT_EQ(rep.violations.size(), 1u);
  EXPECT_EQ(rep.violations[0].index, 2u);
  EXPECT_FALSE(rep.violations[0].in_t2);

  // T2 interval [1 + gc/(2 (v - eps)) - v, 1]; margin 1 sits on the top end.
  SupportSet t2_only;
  t2_only.t_star = t2_only.t2 = {1};
  t2_only.lambda_values = {-1.0 / 0.9};
  EXPECT_TRUE(margin_identity_check(m, ds, t2_only, tol).ok());
  const Dataset above({{}, {{0, -1.5}}}, {1, -1}, 1);
  EXPECT_FALSE(margin_identity_check(m, above, t2_only, tol).ok());
}

TEST(Reconstruct, WeightedSum) {
  const Dataset ds({{{0, 1.0}}, {{0, 2.0}, {1, 1.0}}, {{1, 4.0}}}, {1, -1, 1}, 2);
  SupportSet s;
  s.t_star = {1, 2};
  s.t1 = s.t_star;
  s.lambda_values = {-0.5, -0.25};
  // -(-0.5)(-1)(2,1) - (-0.25)(1)(0,4) = (-1, -0.5) + (0, 1)
  EXPECT_EQ(reconstruct_hyperplane(s, ds), (std::vector<double>{-1.0, 0.5}));
}

Model trained_model() {
  TrainConfig cfg;
  cfg.slide = {0.1, 1.0};
  return train(two_cluster_dataset(40, 9), cfg).model;
}

TEST(Persistence, RoundTrip) {
  Model m = trained_model();
  m.w.push_back(0.0);  // zero weights are left out of the file
  m.w.push_back(1.0 / 3.0);
  m.b = -0.1;
  m.support.t_star = {1, 4, 6};
  m.support.t1 = {1, 6};
  m.support.t2 = {4};
  m.support.lambda_values = {-0.1, -1.0 / 0.9, -1e-17};
  EXPECT_EQ(load_model(save_model(m)), m);
}

TEST(Persistence, TrainedModelRoundTripsThroughFile) {
  const Model m = trained_model();
  const auto path = std::filesystem::temp_directory_path() / "slidesvm_model_test.txt";
  save_model_file(m, path.string());
  EXPECT_EQ(load_model_file(path.string()), m);
  std::filesystem::remove(path);
}

TEST(Persistence, Errors) {
  const std::string good = save_model(trained_model());
  EXPECT_THROW(load_model(""), std::runtime_error);
  EXPECT_THROW(load_model("garbage 1\n"), std::runtime_error);
  std::string other_version = good;
  other_version.replace(good.find(" 1\n"), 3, " 9\n");
  EXPECT_THROW(load_model(other_version), std::runtime_error);
  EXPECT_THROW(load_model(good.substr(0, good.size() / 2)), std::runtime_error);

  std::string wide = good;
  wide.replace(wide.find("n 2\n"), 4, "n 1\n");
  EXPECT_THROW(load_model(wide), std::runtime_error);
  EXPECT_THROW(load_model_file("/nonexistent/model.txt"), std::runtime_error);
}

}  // namespace
}  // namespace slidesvm
