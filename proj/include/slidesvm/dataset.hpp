#ifndef SLIDESVM_DATASET_HPP
#define SLIDESVM_DATASET_HPP

#include <cstddef>
#include <cstdint>
#include <istream>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace slidesvm {

struct FeatureEntry {
  std::size_t index = 0;  // 0-based
  double value = 0.0;

  bool operator==(const FeatureEntry&) const = default;
};

using SparseRow = std::vector<FeatureEntry>;

// Thrown on malformed LIBSVM input; `line()` is 1-based.
class ParseError : public std::runtime_error {
 public:
  ParseError(std::size_t line, const std::string& what);
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

// Row-sparse samples with +1/-1 labels. Rows keep strictly increasing
// feature indices, all below `dim()`.
class Dataset {
 public:
  Dataset() = default;
  Dataset(std::vector<SparseRow> rows, std::vector<int> labels,
          std::size_t dim);

  std::size_t size() const { return rows_.size(); }
  std::size_t dim() const { return dim_; }
  bool empty() const { return rows_.empty(); }

  const SparseRow& row(std::size_t i) const { return rows_[i]; }
  int label(std::size_t i) const { return labels_[i]; }
  const std::vector<SparseRow>& rows() const { return rows_; }
  const std::vector<int>& labels() const { return labels_; }

  // Samples at `indices`, in that order.
  Dataset subset(std::span<const std::size_t> indices) const;
  Dataset with_labels(std::vector<int> labels) const;
  // Same samples with feature dimension raised to `dim`.
  Dataset with_dim(std::size_t dim) const;

  bool operator==(const Dataset&) const = default;

 private:
  std::vector<SparseRow> rows_;
  std::vector<int> labels_;
  std::size_t dim_ = 0;
};

double dot(const SparseRow& row, std::span<const double> w);

// Reads "<label> <idx>:<val> ..." lines. Labels 0/1 map to -1/+1, '#'
// starts a comment, blank lines are skipped. The dimension is 1 + the
// largest index seen unless `dim` is given (and then must cover it).
Dataset parse_libsvm(std::istream& in,
                     std::optional<std::size_t> dim = std::nullopt);
Dataset parse_libsvm_string(const std::string& text,
                            std::optional<std::size_t> dim = std::nullopt);
Dataset load_libsvm(const std::string& path,
                    std::optional<std::size_t> dim = std::nullopt);

// Shortest round-trip rendering; parse_libsvm(write_libsvm(ds)) == ds up to
// the inferred dimension.
std::string write_libsvm(const Dataset& ds);

// Per-feature (min, max) of a training split. Absent sparse entries count
// as 0.
struct ScalingMap {
  std::vector<double> min;
  std::vector<double> max;

  std::size_t dim() const { return min.size(); }
  double apply(std::size_t feature, double x) const;
  bool operator==(const ScalingMap&) const = default;
};

ScalingMap fit_scaling(const Dataset& train);
// x' = 2 (x - min) / (max - min) - 1; constant features map to 0. Test
// values are not clipped.
Dataset apply_scaling(const Dataset& ds, const ScalingMap& map);

std::string serialize_scaling(const ScalingMap& map);
ScalingMap parse_scaling(const std::string& text);

// Negates floor(rate * m) distinct labels chosen by a seeded shuffle.
Dataset flip_labels(const Dataset& ds, double rate, std::uint64_t seed);

// Two Gaussian clusters in 2-D with unit variance, centred at
// (center, center) for +1 and (-center, -center) for -1. Rows alternate
// +1, -1 so any prefix is balanced.
Dataset two_cluster_dataset(std::size_t per_class, std::uint64_t seed,
                            double center = 2.0);

struct FoldPlan {
  std::size_t k = 0;
  std::uint64_t seed = 0;
  std::vector<std::size_t> assignments;

  std::vector<std::size_t> train_indices(std::size_t fold) const;
  std::vector<std::size_t> test_indices(std::size_t fold) const;
  std::uint64_t fingerprint() const;
  bool operator==(const FoldPlan&) const = default;
};

// Seeded permutation dealt round-robin into k folds.
FoldPlan kfold_plan(std::size_t m, std::size_t k, std::uint64_t seed);

std::string serialize_fold_plan(const FoldPlan& plan);
FoldPlan parse_fold_plan(const std::string& text);

}  // namespace slidesvm

#endif  // SLIDESVM_DATASET_HPP
