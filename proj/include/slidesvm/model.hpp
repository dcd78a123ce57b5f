#ifndef SLIDESVM_MODEL_HPP
#define SLIDESVM_MODEL_HPP

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "slidesvm/dataset.hpp"
#include "slidesvm/train_config.hpp"

namespace slidesvm {

// Samples with strictly negative multipliers. In the ramp regime they
// split into t1 (interior multipliers, margin exactly 1 - eps) and t2
// (multiplier at -C/(v - eps)). In the flat regime t1 == t_star.
struct SupportSet {
  std::vector<std::size_t> t_star;
  std::vector<std::size_t> t1;
  std::vector<std::size_t> t2;
  std::vector<double> lambda_values;  // aligned with t_star

  bool operator==(const SupportSet&) const = default;
};

SupportSet extract_support_vectors(std::span<const double> lambda,
                                   const TrainConfig& cfg);

struct Model {
  std::vector<double> w;
  double b = 0.0;
  SlideParams slide;
  double C = 1.0;
  double delta = 1.0;
  double tol = 1e-3;
  SupportSet support;
  bool converged = false;
  std::size_t iterations = 0;

  std::size_t dim() const { return w.size(); }
  TrainConfig config() const;
  bool operator==(const Model&) const = default;
};

double decision_value(const Model& model, const SparseRow& x);
// +1 when the decision value is strictly positive, -1 otherwise.
int predict(const Model& model, const SparseRow& x);

struct Confusion {
  std::size_t true_pos = 0;
  std::size_t true_neg = 0;
  std::size_t false_pos = 0;
  std::size_t false_neg = 0;

  std::size_t total() const { return true_pos + true_neg + false_pos + false_neg; }
  double accuracy() const;
};

Confusion confusion(const Model& model, const Dataset& ds);
// Fraction of correctly predicted samples. Throws on an empty dataset or
// when the data has more features than the model.
double accuracy(const Model& model, const Dataset& ds);

// w_hat = -sum_{i in T*} lambda_i y_i x_i over the training set.
std::vector<double> reconstruct_hyperplane(const SupportSet& support,
                                           const Dataset& train);

struct MarginViolation {
  std::size_t index = 0;
  double margin = 0.0;  // y_i (<w, x_i> + b)
  bool in_t2 = false;
};

struct MarginReport {
  std::vector<MarginViolation> violations;
  bool ok() const { return violations.empty(); }
};

// Checks y_i f(x_i) = 1 - eps on t1, and y_i f(x_i) in
// [1 + gamma C / (2 (v - eps)) - v, 1] on t2, with gamma = 1/delta.
MarginReport margin_identity_check(const Model& model, const Dataset& train,
                                   const SupportSet& support, double tol);

std::string save_model(const Model& model);
Model load_model(const std::string& text);
void save_model_file(const Model& model, const std::string& path);
Model load_model_file(const std::string& path);

}  // namespace slidesvm

#endif  // SLIDESVM_MODEL_HPP
