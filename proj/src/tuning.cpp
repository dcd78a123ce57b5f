#include "slidesvm/tuning.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <mutex>
#include <stdexcept>
#include <thread>

#include "slidesvm/text_format.hpp"

namespace slidesvm {

void Grid::validate() const {
  if (c_values.empty() || delta_values.empty() || v_values.empty()) {
    throw std::invalid_argument("grid: every value list must be nonempty");
  }
  auto positive = [](const std::vector<double>& xs) {
    return std::all_of(xs.begin(), xs.end(), [](double x) { return x > 0.0 && std::isfinite(x); });
  };
  if (!positive(c_values) || !positive(delta_values)) {
    throw std::invalid_argument("grid: C and delta values must be positive");
  }
  for (double v : v_values) {
    if (!(v > 0.0 && v <= 1.0)) throw std::invalid_argument("grid: v values must lie in (0, 1]");
  }
  if (!epsilon_values.empty() && epsilon_values.size() != v_values.size()) {
    throw std::invalid_argument("grid: epsilon list must pair with the v list");
  }
  for (const auto& cfg : configs()) cfg.validate();
}

std::size_t Grid::size() const {
  return c_values.size() * delta_values.size() * v_values.size();
}

std::vector<TrainConfig> Grid::configs() const {
  std::vector<TrainConfig> out;
  out.reserve(size());
  for (double c : c_values) {
    for (double d : delta_values) {
      for (std::size_t j = 0; j < v_values.size(); ++j) {
        TrainConfig cfg;
        cfg.C = c;
        cfg.delta = d;
        cfg.eta = eta;
        cfg.max_iter = max_iter;
        cfg.tol = tol;
        cfg.slide.v = v_values[j];
        cfg.slide.epsilon = epsilon_values.empty() ? v_values[j] / 10.0 : epsilon_values[j];
        out.push_back(cfg);
      }
    }
  }
  return out;
}

Grid default_grid() {
  Grid g;
  for (int e = -7; e <= 7; ++e) {
    const double x = std::pow(std::sqrt(2.0), e);
    g.c_values.push_back(x);
    g.delta_values.push_back(x);
  }
  for (int j = 1; j <= 10; ++j) g.v_values.push_back(j / 10.0);
  return g;
}

bool tie_break_less(const TrainConfig& a, const TrainConfig& b) {
  if (a.C != b.C) return a.C < b.C;
  if (a.delta != b.delta) return a.delta < b.delta;
  return a.slide.v < b.slide.v;
}

namespace {

struct FoldData {
  Dataset train;
  Dataset held_out;
  Problem problem;
};

std::vector<FoldData> prepare_folds(const Dataset& ds, const FoldPlan& plan) {
  if (plan.assignments.size() != ds.size()) {
    throw std::invalid_argument("fold plan does not match dataset size");
  }
  std::vector<FoldData> folds;
  folds.reserve(plan.k);
  for (std::size_t f = 0; f < plan.k; ++f) {
    const auto tr_idx = plan.train_indices(f);
    const auto te_idx = plan.test_indices(f);
    const Dataset tr = ds.subset(tr_idx);
    const ScalingMap map = fit_scaling(tr);
    Dataset tr_s = apply_scaling(tr, map);
    Dataset te_s = apply_scaling(ds.subset(te_idx).with_dim(map.dim()), map);
    Problem p(tr_s);
    folds.push_back({std::move(tr_s), std::move(te_s), std::move(p)});
  }
  return folds;
}

CvScore score_config(const TrainConfig& cfg, const std::vector<FoldData>& folds,
                     const CvObserver& observer, std::mutex* observer_lock) {
  CvScore s;
  s.config = cfg;
  double sum = 0.0;
  for (std::size_t f = 0; f < folds.size(); ++f) {
    const TrainResult r = train(folds[f].problem, cfg);
    const double acc = accuracy(r.model, folds[f].held_out);
    s.fold_accuracy.push_back(acc);
    sum += acc;
    s.converged_folds += r.model.converged;
    if (observer) {
      std::unique_lock<std::mutex> lock;
      if (observer_lock) lock = std::unique_lock(*observer_lock);
      observer(cfg, f, r, folds[f].train, folds[f].held_out);
    }
  }
  s.mean_accuracy = sum / static_cast<double>(folds.size());
  return s;
}

std::size_t pick_best(const std::vector<CvScore>& scores) {
  std::size_t best = 0;
  for (std::size_t i = 1; i < scores.size(); ++i) {
    const double a = scores[i].mean_accuracy;
    const double b = scores[best].mean_accuracy;
    if (a > b || (a == b && tie_break_less(scores[i].config, scores[best].config))) best = i;
  }
  return best;
}

}  // namespace

CvScore cross_validate(const Dataset& ds, const TrainConfig& cfg, const FoldPlan& plan) {
  cfg.validate();
  return score_config(cfg, prepare_folds(ds, plan), {}, nullptr);
}

CvScore cross_validate(const Dataset& ds, const TrainConfig& cfg, std::size_t k,
                       std::uint64_t seed) {
  return cross_validate(ds, cfg, kfold_plan(ds.size(), k, seed));
}

CvScore repeated_cross_validate(const Dataset& ds, const TrainConfig& cfg,
                                std::size_t k, std::uint64_t seed,
                                std::size_t repeats) {
  if (repeats < 1) throw std::invalid_argument("repeats must be at least 1");
  CvScore total;
  total.config = cfg;
  double sum = 0.0;
  for (std::size_t r = 0; r < repeats; ++r) {
    const CvScore s = cross_validate(ds, cfg, k, seed + r);
    total.fold_accuracy.insert(total.fold_accuracy.end(), s.fold_accuracy.begin(),
                               s.fold_accuracy.end());
    total.converged_folds += s.converged_folds;
    sum += s.mean_accuracy;
  }
  total.mean_accuracy = sum / static_cast<double>(repeats);
  return total;
}

CvResult grid_search(const Dataset& ds, const Grid& grid, const GridOptions& opts) {
  grid.validate();
  const FoldPlan plan = kfold_plan(ds.size(), opts.folds, opts.seed);
  const std::vector<FoldData> folds = prepare_folds(ds, plan);
  const std::vector<TrainConfig> configs = grid.configs();

  CvResult result;
  result.folds = plan.k;
  result.plan_fingerprint = plan.fingerprint();
  result.scores.resize(configs.size());

  std::mutex lock;
  std::atomic<std::size_t> next{0};
  std::size_t done = 0;
  std::exception_ptr failure;

  auto worker = [&] {
    for (;;) {
      const std::size_t i = next.fetch_add(1);
      if (i >= configs.size()) return;
      try {
        result.scores[i] = score_config(configs[i], folds, opts.observer, &lock);
      } catch (...) {
        std::lock_guard g(lock);
        if (!failure) failure = std::current_exception();
        next.store(configs.size());
        return;
      }
      if (opts.progress) {
        std::lock_guard g(lock);
        opts.progress(++done, configs.size());
      }
    }
  };

  const std::size_t workers = std::clamp<std::size_t>(opts.parallelism, 1, configs.size());
  if (workers == 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (std::size_t t = 0; t < workers; ++t) pool.emplace_back(worker);
  }
  if (failure) std::rethrow_exception(failure);

  result.best = pick_best(result.scores);
  return result;
}

CvResult grid_search(const Dataset& ds, const Grid& grid, std::size_t k,
                     std::uint64_t seed, std::size_t parallelism) {
  GridOptions opts;
  opts.folds = k;
  opts.seed = seed;
  opts.parallelism = parallelism;
  return grid_search(ds, grid, opts);
}

HoldoutResult train_and_test(const Dataset& train_set, const Dataset& test,
                             const TrainConfig& cfg) {
  if (test.empty()) throw std::invalid_argument("test set is empty");
  const std::size_t dim = std::max(train_set.dim(), test.dim());
  const ScalingMap map = fit_scaling(train_set.with_dim(dim));
  HoldoutResult out;
  out.model = train(apply_scaling(train_set, map), cfg).model;
  out.test_accuracy = accuracy(out.model, apply_scaling(test, map));
  return out;
}

std::vector<FlipRow> flip_experiment(const Dataset& train_set, const Dataset& test,
                                     const Grid& grid, std::vector<double> rates,
                                     std::uint64_t flip_seed, const GridOptions& opts) {
  if (test.empty()) throw std::invalid_argument("flip experiment needs a test set");
  for (double r : rates) {
    if (!(r >= 0.0 && r <= 1.0)) {
      throw std::invalid_argument("flip rate " + format_double(r) + " outside [0, 1]");
    }
  }
  if (std::find(rates.begin(), rates.end(), 0.0) == rates.end()) rates.insert(rates.begin(), 0.0);
  std::stable_partition(rates.begin(), rates.end(), [](double r) { return r == 0.0; });

  std::vector<FlipRow> rows;
  for (double rate : rates) {
    const Dataset flipped = flip_labels(train_set, rate, flip_seed);
    FlipRow row;
    row.rate = rate;
    for (std::size_t i = 0; i < flipped.size(); ++i) {
      row.flipped += flipped.label(i) != train_set.label(i);
    }
    const CvResult cv = grid_search(flipped, grid, opts);
    row.config = cv.best_score().config;
    row.cv_mean_accuracy = cv.best_score().mean_accuracy;
    const HoldoutResult h = train_and_test(flipped, test, row.config);
    row.test_accuracy = h.test_accuracy;
    row.converged = h.model.converged;
    rows.push_back(row);
  }
  return rows;
}

void write_cv_csv(const CvResult& result, std::ostream& out,
                  std::optional<double> test_accuracy) {
  out << "C,delta,v,epsilon,mean_acc";
  for (std::size_t f = 1; f <= result.folds; ++f) out << ",fold_" << f;
  out << ",converged_folds\n";
  auto prefix = [&](const TrainConfig& c, double acc) {
    out << format_double(c.C) << ',' << format_double(c.delta) << ','
        << format_double(c.slide.v) << ',' << format_double(c.slide.epsilon) << ','
        << format_double(acc);
  };
  for (const auto& s : result.scores) {
    prefix(s.config, s.mean_accuracy);
    for (double a : s.fold_accuracy) out << ',' << format_double(a);
    out << ',' << s.converged_folds << '\n';
  }
  if (test_accuracy) {
    prefix(result.best_score().config, *test_accuracy);
    for (std::size_t f = 0; f < result.folds; ++f) out << ',';
    out << ",test\n";
  }
}

void write_flip_csv(const std::vector<FlipRow>& rows, std::ostream& out) {
  out << "rate,flipped,C,delta,v,epsilon,cv_mean_acc,test_acc,converged\n";
  for (const auto& r : rows) {
    out << format_double(r.rate) << ',' << r.flipped << ',' << format_double(r.config.C) << ','
        << format_double(r.config.delta) << ',' << format_double(r.config.slide.v) << ','
        << format_double(r.config.slide.epsilon) << ',' << format_double(r.cv_mean_accuracy)
        << ',' << format_double(r.test_accuracy) << ',' << (r.converged ? 1 : 0) << '\n';
  }
}

}  // namespace slidesvm
