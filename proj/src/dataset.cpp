#include "slidesvm/dataset.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <numeric>
#include <random>
#include <sstream>

#include "slidesvm/text_format.hpp"

namespace slidesvm {

ParseError::ParseError(std::size_t line, const std::string& what)
    : std::runtime_error("line " + std::to_string(line) + ": " + what),
      line_(line) {}

Dataset::Dataset(std::vector<SparseRow> rows, std::vector<int> labels,
                 std::size_t dim)
    : rows_(std::move(rows)), labels_(std::move(labels)), dim_(dim) {
  if (rows_.size() != labels_.size()) {
    throw std::invalid_argument("dataset: row and label counts differ");
  }
  for (int y : labels_) {
    if (y != 1 && y != -1) throw std::invalid_argument("dataset: labels must be +1 or -1");
  }
  for (const auto& row : rows_) {
    for (std::size_t j = 0; j < row.size(); ++j) {
      if (row[j].index >= dim_) {
        throw std::invalid_argument("dataset: feature index exceeds dimension");
      }
      if (j > 0 && row[j].index <= row[j - 1].index) {
        throw std::invalid_argument("dataset: row indices must be strictly increasing");
      }
    }
  }
}

Dataset Dataset::subset(std::span<const std::size_t> indices) const {
  std::vector<SparseRow> rows;
  std::vector<int> labels;
  rows.reserve(indices.size());
  labels.reserve(indices.size());
  for (std::size_t i : indices) {
    rows.push_back(rows_.at(i));
    labels.push_back(labels_.at(i));
  }
  return Dataset(std::move(rows), std::move(labels), dim_);
}

Dataset Dataset::with_labels(std::vector<int> labels) const {
  return Dataset(rows_, std::move(labels), dim_);
}

Dataset Dataset::with_dim(std::size_t dim) const {
  return Dataset(rows_, labels_, dim);
}

double dot(const SparseRow& row, std::span<const double> w) {
  double s = 0.0;
  for (const auto& e : row) {
    if (e.index < w.size()) s += e.value * w[e.index];
  }
  return s;
}

namespace {

int map_label(std::string_view token, std::size_t line_no) {
  const auto value = parse_double(token);
  if (!value) throw ParseError(line_no, "malformed label '" + std::string(token) + "'");
  if (*value == 1.0) return 1;
  if (*value == -1.0 || *value == 0.0) return -1;
  throw ParseError(line_no, "label '" + std::string(token) + "' is not one of +1/-1/0/1");
}

}  // namespace

Dataset parse_libsvm(std::istream& in, std::optional<std::size_t> dim) {
  std::vector<SparseRow> rows;
  std::vector<int> labels;
  std::size_t max_index = 0;
  bool any_feature = false;

  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    std::string_view view(line);
    if (const auto hash = view.find('#'); hash != std::string_view::npos) {
      view = view.substr(0, hash);
    }
    const auto tokens = split_ws(view);
    if (tokens.empty()) continue;

    labels.push_back(map_label(tokens[0], line_no));
    SparseRow row;
    row.reserve(tokens.size() - 1);
    for (std::size_t t = 1; t < tokens.size(); ++t) {
      const auto tok = tokens[t];
      const auto colon = tok.find(':');
      if (colon == std::string_view::npos) {
        throw ParseError(line_no, "malformed feature token '" + std::string(tok) + "'");
      }
      const auto idx = parse_int(tok.substr(0, colon));
      if (!idx || *idx < 1) {
        throw ParseError(line_no, "bad feature index in '" + std::string(tok) + "'");
      }
      const auto val = parse_double(tok.substr(colon + 1));
      if (!val) {
        throw ParseError(line_no, "non-numeric feature value in '" + std::string(tok) + "'");
      }
      const auto index = static_cast<std::size_t>(*idx - 1);
      if (!row.empty() && index <= row.back().index) {
        throw ParseError(line_no, "feature indices must be strictly increasing");
      }
      row.push_back({index, *val});
      max_index = std::max(max_index, index);
      any_feature = true;
    }
    rows.push_back(std::move(row));
  }

  const std::size_t inferred = any_feature ? max_index + 1 : 0;
  std::size_t n = inferred;
  if (dim) {
    if (*dim < inferred) {
      throw ParseError(line_no, "feature index exceeds requested dimension");
    }
    n = *dim;
  }
  return Dataset(std::move(rows), std::move(labels), n);
}

Dataset parse_libsvm_string(const std::string& text,
                            std::optional<std::size_t> dim) {
  std::istringstream in(text);
  return parse_libsvm(in, dim);
}

Dataset load_libsvm(const std::string& path, std::optional<std::size_t> dim) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open data file '" + path + "'");
  return parse_libsvm(in, dim);
}

std::string write_libsvm(const Dataset& ds) {
  std::string out;
  for (std::size_t i = 0; i < ds.size(); ++i) {
    out += ds.label(i) > 0 ? "+1" : "-1";
    for (const auto& e : ds.row(i)) {
      out += ' ';
      out += std::to_string(e.index + 1);
      out += ':';
      out += format_double(e.value);
    }
    out += '\n';
  }
  return out;
}

double ScalingMap::apply(std::size_t feature, double x) const {
  const double lo = min[feature];
  const double hi = max[feature];
  if (hi == lo) return 0.0;
  return 2.0 * (x - lo) / (hi - lo) - 1.0;
}

ScalingMap fit_scaling(const Dataset& train) {
  if (train.empty()) throw std::invalid_argument("fit_scaling: empty training set");
  const std::size_t n = train.dim();
  ScalingMap map{std::vector<double>(n, 0.0), std::vector<double>(n, 0.0)};
  std::vector<std::size_t> present(n, 0);
  std::vector<bool> seen(n, false);
  for (const auto& row : train.rows()) {
    for (const auto& e : row) {
      if (!seen[e.index]) {
        map.min[e.index] = map.max[e.index] = e.value;
        seen[e.index] = true;
      } else {
        map.min[e.index] = std::min(map.min[e.index], e.value);
        map.max[e.index] = std::max(map.max[e.index], e.value);
      }
      ++present[e.index];
    }
  }
  for (std::size_t j = 0; j < n; ++j) {
    if (present[j] < train.size()) {
      map.min[j] = std::min(map.min[j], 0.0);
      map.max[j] = std::max(map.max[j], 0.0);
    }
  }
  return map;
}

Dataset apply_scaling(const Dataset& ds, const ScalingMap& map) {
  if (ds.dim() > map.dim()) {
    throw std::invalid_argument("apply_scaling: dataset has " + std::to_string(ds.dim()) +
                                " features but the scaling map covers " +
                                std::to_string(map.dim()));
  }
  const std::size_t n = map.dim();
  std::vector<SparseRow> rows;
  rows.reserve(ds.size());
  for (const auto& row : ds.rows()) {
    SparseRow scaled;
    auto it = row.begin();
    for (std::size_t j = 0; j < n; ++j) {
      double x = 0.0;
      if (it != row.end() && it->index == j) {
        x = it->value;
        ++it;
      }
      const double s = map.apply(j, x);
      if (s != 0.0) scaled.push_back({j, s});
    }
    rows.push_back(std::move(scaled));
  }
  return Dataset(std::move(rows), ds.labels(), n);
}

std::string serialize_scaling(const ScalingMap& map) {
  std::string out = "scaling_map 1\ndim " + std::to_string(map.dim()) + "\n";
  for (std::size_t j = 0; j < map.dim(); ++j) {
    out += std::to_string(j + 1) + ' ' + format_double(map.min[j]) + ' ' +
           format_double(map.max[j]) + '\n';
  }
  return out;
}

namespace {

std::vector<std::vector<std::string_view>> token_lines(const std::string& text) {
  std::vector<std::vector<std::string_view>> lines;
  std::string_view rest(text);
  while (!rest.empty()) {
    const auto nl = rest.find('\n');
    auto line = rest.substr(0, nl);
    rest = nl == std::string_view::npos ? std::string_view{} : rest.substr(nl + 1);
    auto tokens = split_ws(line);
    if (!tokens.empty()) lines.push_back(std::move(tokens));
  }
  return lines;
}

std::size_t expect_count(const std::vector<std::string_view>& line,
                         std::string_view key) {
  if (line.size() != 2 || line[0] != key) {
    throw std::runtime_error("expected '" + std::string(key) + " <count>'");
  }
  const auto v = parse_int(line[1]);
  if (!v || *v < 0) throw std::runtime_error("bad count for '" + std::string(key) + "'");
  return static_cast<std::size_t>(*v);
}

}  // namespace

ScalingMap parse_scaling(const std::string& text) {
  const auto lines = token_lines(text);
  if (lines.size() < 2 || lines[0].size() != 2 || lines[0][0] != "scaling_map" ||
      lines[0][1] != "1") {
    throw std::runtime_error("not a version-1 scaling map");
  }
  const std::size_t n = expect_count(lines[1], "dim");
  if (lines.size() != n + 2) throw std::runtime_error("scaling map: truncated");
  ScalingMap map{std::vector<double>(n), std::vector<double>(n)};
  for (std::size_t j = 0; j < n; ++j) {
    const auto& l = lines[j + 2];
    const auto idx = l.size() == 3 ? parse_int(l[0]) : std::nullopt;
    const auto lo = l.size() == 3 ? parse_double(l[1]) : std::nullopt;
    const auto hi = l.size() == 3 ? parse_double(l[2]) : std::nullopt;
    if (!idx || !lo || !hi || *idx != static_cast<long long>(j + 1)) {
      throw std::runtime_error("scaling map: malformed entry " + std::to_string(j + 1));
    }
    map.min[j] = *lo;
    map.max[j] = *hi;
  }
  return map;
}

Dataset flip_labels(const Dataset& ds, double rate, std::uint64_t seed) {
  if (!(rate >= 0.0 && rate <= 1.0)) {
    throw std::invalid_argument("flip rate must lie in [0, 1]");
  }
  // The small guard keeps e.g. 0.29 * 100 from flooring to 28.
  const auto count = static_cast<std::size_t>(
      std::floor(rate * static_cast<double>(ds.size()) + 1e-9));
  std::vector<std::size_t> order(ds.size());
  std::iota(order.begin(), order.end(), 0);
  std::mt19937_64 engine(seed);
  std::shuffle(order.begin(), order.end(), engine);

  std::vector<int> labels = ds.labels();
  for (std::size_t i = 0; i < count; ++i) labels[order[i]] = -labels[order[i]];
  return ds.with_labels(std::move(labels));
}

std::vector<std::size_t> FoldPlan::train_indices(std::size_t fold) const {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < assignments.size(); ++i) {
    if (assignments[i] != fold) out.push_back(i);
  }
  return out;
}

std::vector<std::size_t> FoldPlan::test_indices(std::size_t fold) const {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < assignments.size(); ++i) {
    if (assignments[i] == fold) out.push_back(i);
  }
  return out;
}

std::uint64_t FoldPlan::fingerprint() const {
  std::uint64_t h = 1469598103934665603ULL;
  auto mix = [&h](std::uint64_t x) {
    for (int b = 0; b < 8; ++b) {
      h ^= (x >> (8 * b)) & 0xffU;
      h *= 1099511628211ULL;
    }
  };
  mix(k);
  mix(assignments.size());
  for (std::size_t a : assignments) mix(a);
  return h;
}

FoldPlan kfold_plan(std::size_t m, std::size_t k, std::uint64_t seed) {
  if (k < 2) throw std::invalid_argument("kfold_plan: need at least 2 folds");
  if (k > m) {
    throw std::invalid_argument("kfold_plan: " + std::to_string(k) +
                                " folds requested for " + std::to_string(m) + " samples");
  }
  std::vector<std::size_t> order(m);
  std::iota(order.begin(), order.end(), 0);
  std::mt19937_64 engine(seed);
  std::shuffle(order.begin(), order.end(), engine);

  FoldPlan plan{k, seed, std::vector<std::size_t>(m)};
  for (std::size_t pos = 0; pos < m; ++pos) plan.assignments[order[pos]] = pos % k;
  return plan;
}

std::string serialize_fold_plan(const FoldPlan& plan) {
  std::string out = "fold_plan 1\nk " + std::to_string(plan.k) + "\nseed " +
                    std::to_string(plan.seed) + "\nm " +
                    std::to_string(plan.assignments.size()) + "\nassignments";
  for (std::size_t a : plan.assignments) out += ' ' + std::to_string(a);
  out += '\n';
  return out;
}

FoldPlan parse_fold_plan(const std::string& text) {
  const auto lines = token_lines(text);
  if (lines.size() != 5 || lines[0].size() != 2 || lines[0][0] != "fold_plan" ||
      lines[0][1] != "1") {
    throw std::runtime_error("not a version-1 fold plan");
  }
  FoldPlan plan;
  plan.k = expect_count(lines[1], "k");
  if (lines[2].size() != 2 || lines[2][0] != "seed") throw std::runtime_error("fold plan: missing seed");
  std::uint64_t seed = 0;
  {
    const auto tok = lines[2][1];
    auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), seed);
    if (ec != std::errc() || ptr != tok.data() + tok.size()) {
      throw std::runtime_error("fold plan: bad seed");
    }
  }
  plan.seed = seed;
  const std::size_t m = expect_count(lines[3], "m");
  const auto& a = lines[4];
  if (a.empty() || a[0] != "assignments" || a.size() != m + 1) {
    throw std::runtime_error("fold plan: assignment count does not match m");
  }
  plan.assignments.resize(m);
  for (std::size_t i = 0; i < m; ++i) {
    const auto v = parse_int(a[i + 1]);
    if (!v || *v < 0 || static_cast<std::size_t>(*v) >= plan.k) {
      throw std::runtime_error("fold plan: bad fold id");
    }
    plan.assignments[i] = static_cast<std::size_t>(*v);
  }
  return plan;
}

Dataset two_cluster_dataset(std::size_t per_class, std::uint64_t seed, double center) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> noise(0.0, 1.0);
  std::vector<SparseRow> rows;
  std::vector<int> labels;
  for (std::size_t i = 0; i < per_class; ++i) {
    for (int y : {1, -1}) {
      const double x0 = y * center + noise(rng);
      const double x1 = y * center + noise(rng);
      SparseRow r;
      if (x0 != 0.0) r.push_back({0, x0});
      if (x1 != 0.0) r.push_back({1, x1});
      rows.push_back(std::move(r));
      labels.push_back(y);
    }
  }
  return Dataset(std::move(rows), std::move(labels), 2);
}

}  // namespace slidesvm
