#include "slidesvm/cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <iomanip>
#include <memory>
#include <optional>
#include <sstream>
#include <thread>

#include "slidesvm/admm.hpp"
#include "slidesvm/dataset.hpp"
#include "slidesvm/model.hpp"
#include "slidesvm/proxcheck.hpp"
#include "slidesvm/text_format.hpp"
#include "slidesvm/tuning.hpp"

namespace slidesvm {
namespace {

// Writes to a file, or to `fallback` for "-" / empty.
class Sink {
 public:
  Sink(const std::string& path, std::ostream& fallback) : path_(path) {
    if (path.empty() || path == "-") {
      stream_ = &fallback;
    } else {
      file_ = std::make_unique<std::ofstream>(path, std::ios::binary);
      if (!*file_) throw std::runtime_error("cannot open " + path + " for writing");
      stream_ = file_.get();
    }
  }
  std::ostream& get() { return *stream_; }
  bool is_file() const { return file_ != nullptr; }
  void finish() {
    stream_->flush();
    if (!*stream_) throw std::runtime_error("write failed: " + path_);
  }

 private:
  std::string path_;
  std::unique_ptr<std::ofstream> file_;
  std::ostream* stream_ = nullptr;
};

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string fixed4(double x) {
  std::ostringstream ss;
  ss << std::fixed << std::setprecision(4) << x;
  return ss.str();
}

struct SolverFlags {
  double C = 1.0;
  double delta = 1.0;
  double v = 1.0;
  std::optional<double> eps;
  double eta = 1.618;
  std::size_t max_iter = 1000;
  double tol = 1e-3;

  void add_to(CLI::App* cmd) {
    cmd->add_option("--C", C, "loss trade-off C")->capture_default_str();
    cmd->add_option("--delta", delta, "penalty parameter delta")->capture_default_str();
    cmd->add_option("--v", v, "upper slide breakpoint v")->capture_default_str();
    cmd->add_option("--eps", eps, "lower slide breakpoint epsilon (default v/10)");
    cmd->add_option("--eta", eta, "dual step size")->capture_default_str();
    cmd->add_option("--max-iter", max_iter, "iteration limit K")->capture_default_str();
    cmd->add_option("--tol", tol, "stopping tolerance")->capture_default_str();
  }

  TrainConfig config() const {
    TrainConfig cfg;
    cfg.C = C;
    cfg.delta = delta;
    cfg.eta = eta;
    cfg.max_iter = max_iter;
    cfg.tol = tol;
    cfg.slide.v = v;
    cfg.slide.epsilon = eps.value_or(v / 10.0);
    cfg.validate();
    return cfg;
  }
};

struct GridFlags {
  std::string c_values;
  std::string delta_values;
  std::string v_values;
  std::string eps_values;
  double eta = 1.618;
  std::size_t max_iter = 1000;
  double tol = 1e-3;
  std::size_t folds = 10;
  std::uint64_t seed = kDefaultCvSeed;
  std::size_t parallel = std::max(1u, std::thread::hardware_concurrency());
  bool progress = false;

  void add_to(CLI::App* cmd) {
    cmd->add_option("--c-values", c_values, "comma list overriding the C grid");
    cmd->add_option("--delta-values", delta_values, "comma list overriding the delta grid");
    cmd->add_option("--v-values", v_values, "comma list overriding the v grid");
    cmd->add_option("--eps-values", eps_values, "comma list paired with v (default v/10)");
    cmd->add_option("--eta", eta, "dual step size")->capture_default_str();
    cmd->add_option("--max-iter", max_iter, "iteration limit K")->capture_default_str();
    cmd->add_option("--tol", tol, "stopping tolerance")->capture_default_str();
    cmd->add_option("--folds", folds, "cross-validation folds")->capture_default_str();
    cmd->add_option("--seed", seed, "fold seed")->capture_default_str();
    cmd->add_option("--parallel", parallel, "worker threads (default: hardware threads)")
        ->capture_default_str();
    cmd->add_flag("--progress", progress, "report progress on stderr");
  }

  static std::vector<double> parse_list(const std::string& text, const char* what) {
    std::vector<double> out;
    for (const auto& tok : split_csv_list(text)) {
      auto x = parse_double(tok);
      if (!x) throw std::invalid_argument(std::string("bad value '") + tok + "' in " + what);
      out.push_back(*x);
    }
    return out;
  }

  Grid grid() const {
    Grid g = default_grid();
    if (!c_values.empty()) g.c_values = parse_list(c_values, "--c-values");
    if (!delta_values.empty()) g.delta_values = parse_list(delta_values, "--delta-values");
    if (!v_values.empty()) g.v_values = parse_list(v_values, "--v-values");
    if (!eps_values.empty()) g.epsilon_values = parse_list(eps_values, "--eps-values");
    g.eta = eta;
    g.max_iter = max_iter;
    g.tol = tol;
    g.validate();
    return g;
  }

  GridOptions options(std::ostream& err) const {
    GridOptions o;
    o.folds = folds;
    o.seed = seed;
    o.parallelism = parallel;
    if (progress) {
      o.progress = [&err](std::size_t done, std::size_t total) {
        if (done == total || done % 50 == 0) err << "grid " << done << "/" << total << "\n";
      };
    }
    return o;
  }
};

Dataset load_scaled(const std::string& data, const std::string& scale_path) {
  Dataset ds = load_libsvm(data);
  if (scale_path.empty()) return ds;
  return apply_scaling(ds, parse_scaling(read_file(scale_path)));
}

std::string config_summary(const TrainConfig& c) {
  return "C=" + format_double(c.C) + " delta=" + format_double(c.delta) +
         " v=" + format_double(c.slide.v) + " epsilon=" + format_double(c.slide.epsilon);
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Linear SVM with the slide loss, trained by ADMM"};
  app.name("slidesvm");
  app.require_subcommand(1);

  // train
  auto* train_cmd = app.add_subcommand("train", "train a model on a LIBSVM file");
  std::string t_data, t_out, t_diag, t_scale_out;
  SolverFlags t_flags;
  train_cmd->add_option("--data", t_data, "training data (LIBSVM)")->required();
  train_cmd->add_option("--out", t_out, "model output path")->required();
  train_cmd->add_option("--diagnostics", t_diag, "per-iteration CSV");
  train_cmd->add_option("--scale-out", t_scale_out,
                        "fit [-1,1] scaling on the data, train on scaled data, save the map here");
  t_flags.add_to(train_cmd);

  // eval
  auto* eval_cmd = app.add_subcommand("eval", "accuracy and confusion counts");
  std::string e_model, e_data, e_scale;
  eval_cmd->add_option("--model", e_model, "model file")->required();
  eval_cmd->add_option("--data", e_data, "data (LIBSVM)")->required();
  eval_cmd->add_option("--scale", e_scale, "scaling map to apply first");

  // predict
  auto* pred_cmd = app.add_subcommand("predict", "labels and decision values");
  std::string p_model, p_data, p_scale, p_out;
  pred_cmd->add_option("--model", p_model, "model file")->required();
  pred_cmd->add_option("--data", p_data, "data (LIBSVM)")->required();
  pred_cmd->add_option("--scale", p_scale, "scaling map to apply first");
  pred_cmd->add_option("--out", p_out, "output path (default stdout)");

  // cv
  auto* cv_cmd = app.add_subcommand("cv", "k-fold cross-validation of one config");
  std::string c_data, c_out;
  SolverFlags c_flags;
  std::size_t c_folds = 10, c_repeats = 1;
  std::uint64_t c_seed = kDefaultCvSeed;
  cv_cmd->add_option("--data", c_data, "data (LIBSVM)")->required();
  cv_cmd->add_option("--folds", c_folds, "folds")->capture_default_str();
  cv_cmd->add_option("--seed", c_seed, "fold seed")->capture_default_str();
  cv_cmd->add_option("--repeats", c_repeats, "fold plans averaged, seeds seed..seed+repeats-1")
      ->capture_default_str();
  cv_cmd->add_option("--out", c_out, "CSV output (default stdout)");
  c_flags.add_to(cv_cmd);

  // grid
  auto* grid_cmd = app.add_subcommand("grid", "grid search with cross-validation");
  std::string g_data, g_test, g_out;
  GridFlags g_flags;
  grid_cmd->add_option("--data", g_data, "training data (LIBSVM)")->required();
  grid_cmd->add_option("--test", g_test, "test data; adds a row for the retrained best config");
  grid_cmd->add_option("--out", g_out, "CSV output (default stdout)");
  g_flags.add_to(grid_cmd);

  // flip
  auto* flip_cmd = app.add_subcommand("flip", "label-flip robustness table");
  std::string f_data, f_test, f_out, f_rates = "0.05,0.15";
  std::uint64_t f_seed = kDefaultFlipSeed;
  GridFlags f_flags;
  flip_cmd->add_option("--data", f_data, "training data (LIBSVM)")->required();
  flip_cmd->add_option("--test", f_test, "test data (LIBSVM)");
  flip_cmd->add_option("--rates", f_rates, "comma list of flip rates")->capture_default_str();
  flip_cmd->add_option("--flip-seed", f_seed, "seed for choosing flipped labels")
      ->capture_default_str();
  flip_cmd->add_option("--out", f_out, "CSV output (default stdout)");
  f_flags.add_to(flip_cmd);

  // proxcheck
  auto* prox_cmd = app.add_subcommand("proxcheck", "compare the closed-form prox to brute force");
  std::size_t x_samples = 10000;
  std::uint64_t x_seed = kDefaultProxSeed;
  std::string x_out;
  prox_cmd->add_option("--samples", x_samples, "number of random draws")
      ->capture_default_str()
      ->check(CLI::PositiveNumber);
  prox_cmd->add_option("--seed", x_seed, "seed")->capture_default_str();
  prox_cmd->add_option("--out", x_out, "per-sample CSV (default stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? 0 : 2;
  }

  try {
    if (*train_cmd) {
      const TrainConfig cfg = t_flags.config();
      Dataset ds = load_libsvm(t_data);
      if (!t_scale_out.empty()) {
        const ScalingMap map = fit_scaling(ds);
        Sink s(t_scale_out, out);
        s.get() << serialize_scaling(map);
        s.finish();
        ds = apply_scaling(ds, map);
      }
      const TrainResult r = train(ds, cfg);
      save_model_file(r.model, t_out);
      if (!t_diag.empty()) {
        Sink s(t_diag, out);
        write_diagnostics_csv(r.diagnostics, s.get());
        s.finish();
      }
      out << "converged " << (r.model.converged ? 1 : 0) << " iterations " << r.model.iterations
          << " support " << r.model.support.t_star.size() << "\n";
      out << "train_accuracy " << fixed4(accuracy(r.model, ds)) << "\n";
      return 0;
    }

    if (*eval_cmd) {
      const Model model = load_model_file(e_model);
      const Dataset ds = load_scaled(e_data, e_scale);
      const Confusion c = confusion(model, ds);
      out << "accuracy " << fixed4(c.accuracy()) << "\n";
      out << "tp " << c.true_pos << " tn " << c.true_neg << " fp " << c.false_pos << " fn "
          << c.false_neg << "\n";
      return 0;
    }

    if (*pred_cmd) {
      const Model model = load_model_file(p_model);
      const Dataset ds = load_scaled(p_data, p_scale);
      Sink s(p_out, out);
      for (std::size_t i = 0; i < ds.size(); ++i) {
        const double f = decision_value(model, ds.row(i));
        s.get() << (f > 0.0 ? "+1" : "-1") << ' ' << format_double(f) << '\n';
      }
      s.finish();
      return 0;
    }

    if (*cv_cmd) {
      const TrainConfig cfg = c_flags.config();
      const Dataset ds = load_libsvm(c_data);
      const CvScore score = repeated_cross_validate(ds, cfg, c_folds, c_seed, c_repeats);
      Sink s(c_out, out);
      s.get() << "fold,accuracy\n";
      for (std::size_t f = 0; f < score.fold_accuracy.size(); ++f) {
        s.get() << f + 1 << ',' << format_double(score.fold_accuracy[f]) << '\n';
      }
      s.get() << "mean," << format_double(score.mean_accuracy) << '\n';
      s.finish();
      if (s.is_file()) {
        out << "mean_accuracy " << fixed4(score.mean_accuracy) << " converged_folds "
            << score.converged_folds << "\n";
      }
      return 0;
    }

    if (*grid_cmd) {
      const Grid grid = g_flags.grid();
      const Dataset ds = load_libsvm(g_data);
      std::optional<Dataset> test;
      if (!g_test.empty()) test = load_libsvm(g_test);
      const CvResult cv = grid_search(ds, grid, g_flags.options(err));
      std::optional<double> test_acc;
      if (test) test_acc = train_and_test(ds, *test, cv.best_score().config).test_accuracy;
      Sink s(g_out, out);
      write_cv_csv(cv, s.get(), test_acc);
      s.finish();
      if (s.is_file()) {
        out << "best " << config_summary(cv.best_score().config) << " cv_accuracy "
            << fixed4(cv.best_score().mean_accuracy) << "\n";
        if (test_acc) out << "test_accuracy " << fixed4(*test_acc) << "\n";
      }
      return 0;
    }

    if (*flip_cmd) {
      if (f_test.empty()) throw std::invalid_argument("flip needs --test");
      std::vector<double> rates = GridFlags::parse_list(f_rates, "--rates");
      for (double r : rates) {
        if (!(r >= 0.0 && r <= 1.0)) {
          throw std::invalid_argument("flip rate " + format_double(r) + " outside [0, 1]");
        }
      }
      const Grid grid = f_flags.grid();
      const Dataset train_set = load_libsvm(f_data);
      const Dataset test = load_libsvm(f_test);
      const auto rows =
          flip_experiment(train_set, test, grid, rates, f_seed, f_flags.options(err));
      Sink s(f_out, out);
      write_flip_csv(rows, s.get());
      s.finish();
      return 0;
    }

    if (*prox_cmd) {
      const ProxCheckReport rep = run_prox_check(x_samples, x_seed);
      Sink s(x_out, out);
      write_prox_check_csv(rep, s.get());
      s.finish();
      const std::size_t bad = rep.failures(1e-6);
      std::ostream& summary = s.is_file() ? out : err;
      summary << "samples " << rep.rows.size() << " ramp " << rep.ramp_samples << " flat "
          << rep.flat_samples << " tie_excluded " << rep.excluded << " max_dev "
          << format_double(rep.max_dev) << " mean_dev " << format_double(rep.mean_dev)
          << " failures " << bad << "\n";
      return bad == 0 ? 0 : 3;
    }
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  }
  return 2;
}

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  std::vector<const char*> argv;
  argv.reserve(args.size() + 1);
  argv.push_back("slidesvm");
  for (const auto& a : args) argv.push_back(a.c_str());
  return run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
}

}  // namespace slidesvm
