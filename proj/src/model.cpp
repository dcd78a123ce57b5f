#include "slidesvm/model.hpp"

#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "slidesvm/text_format.hpp"

namespace slidesvm {

SupportSet extract_support_vectors(std::span<const double> lambda,
                                   const TrainConfig& cfg) {
  const double theta = cfg.support_threshold();
  const bool ramp = cfg.ramp_regime();
  const double floor_value = -cfg.C / cfg.slide.width();
  SupportSet s;
  for (std::size_t i = 0; i < lambda.size(); ++i) {
    if (!(lambda[i] < -theta)) continue;
    s.t_star.push_back(i);
    s.lambda_values.push_back(lambda[i]);
    if (ramp && std::abs(lambda[i] - floor_value) <= theta) {
      s.t2.push_back(i);
    } else {
      s.t1.push_back(i);
    }
  }
  return s;
}

TrainConfig Model::config() const {
  TrainConfig cfg;
  cfg.C = C;
  cfg.delta = delta;
  cfg.tol = tol;
  cfg.slide = slide;
  return cfg;
}

double decision_value(const Model& model, const SparseRow& x) {
  double s = model.b;
  for (const auto& e : x) {
    if (e.index >= model.w.size()) {
      throw std::out_of_range("feature index " + std::to_string(e.index + 1) +
                              " beyond model dimension " + std::to_string(model.w.size()));
    }
    s += model.w[e.index] * e.value;
  }
  return s;
}

int predict(const Model& model, const SparseRow& x) {
  return decision_value(model, x) > 0.0 ? 1 : -1;
}

double Confusion::accuracy() const {
  if (total() == 0) throw std::invalid_argument("accuracy of an empty dataset");
  return static_cast<double>(true_pos + true_neg) / static_cast<double>(total());
}

Confusion confusion(const Model& model, const Dataset& ds) {
  if (ds.dim() > model.dim()) {
    throw std::invalid_argument("dataset has " + std::to_string(ds.dim()) +
                                " features, model has " + std::to_string(model.dim()));
  }
  Confusion c;
  for (std::size_t i = 0; i < ds.size(); ++i) {
    const int p = predict(model, ds.row(i));
    const int y = ds.label(i);
    if (y > 0) {
      (p > 0 ? c.true_pos : c.false_neg)++;
    } else {
      (p > 0 ? c.false_pos : c.true_neg)++;
    }
  }
  return c;
}

double accuracy(const Model& model, const Dataset& ds) {
  if (ds.empty()) throw std::invalid_argument("accuracy of an empty dataset");
  return confusion(model, ds).accuracy();
}

std::vector<double> reconstruct_hyperplane(const SupportSet& support,
                                           const Dataset& train) {
  std::vector<double> w(train.dim(), 0.0);
  for (std::size_t j = 0; j < support.t_star.size(); ++j) {
    const std::size_t i = support.t_star[j];
    if (i >= train.size()) throw std::out_of_range("support index outside training set");
    const double c = -support.lambda_values[j] * train.label(i);
    for (const auto& e : train.row(i)) w[e.index] += c * e.value;
  }
  return w;
}

MarginReport margin_identity_check(const Model& model, const Dataset& train,
                                   const SupportSet& support, double tol) {
  MarginReport rep;
  const double eps = model.slide.epsilon;
  const double gc = model.C / model.delta;
  const double t2_lo = 1.0 + gc / (2.0 * model.slide.width()) - model.slide.v;
  auto margin = [&](std::size_t i) { return train.label(i) * decision_value(model, train.row(i)); };

  for (std::size_t i : support.t1) {
    const double m = margin(i);
    if (std::abs(m - (1.0 - eps)) > tol) rep.violations.push_back({i, m, false});
  }
  for (std::size_t i : support.t2) {
    const double m = margin(i);
    if (m < t2_lo - tol || m > 1.0 + tol) rep.violations.push_back({i, m, true});
  }
  return rep;
}

namespace {

constexpr const char* kMagic = "slidesvm_model";
constexpr long long kVersion = 1;

class LineReader {
 public:
  explicit LineReader(const std::string& text) : in_(text) {}

  std::vector<std::string_view> next(const char* what) {
    while (std::getline(in_, line_)) {
      ++number_;
      auto tokens = split_ws(line_);
      if (!tokens.empty()) return tokens;
    }
    throw std::runtime_error("model file truncated: expected " + std::string(what));
  }

  [[noreturn]] void fail(const std::string& msg) const {
    throw std::runtime_error("model file line " + std::to_string(number_) + ": " + msg);
  }

  double real(const char* key) {
    auto t = next(key);
    if (t.size() != 2 || t[0] != key) fail(std::string("expected '") + key + " <value>'");
    auto v = parse_double(t[1]);
    if (!v) fail(std::string("bad number for ") + key);
    return *v;
  }

  long long integer(const char* key) {
    auto t = next(key);
    if (t.size() != 2 || t[0] != key) fail(std::string("expected '") + key + " <value>'");
    auto v = parse_int(t[1]);
    if (!v || *v < 0) fail(std::string("bad count for ") + key);
    return *v;
  }

 private:
  std::istringstream in_;
  std::string line_;
  std::size_t number_ = 0;
};

}  // namespace

std::string save_model(const Model& model) {
  std::ostringstream out;
  out << kMagic << ' ' << kVersion << '\n';
  out << "n " << model.w.size() << '\n';
  out << "C " << format_double(model.C) << '\n';
  out << "delta " << format_double(model.delta) << '\n';
  out << "epsilon " << format_double(model.slide.epsilon) << '\n';
  out << "v " << format_double(model.slide.v) << '\n';
  out << "converged " << (model.converged ? 1 : 0) << '\n';
  out << "iterations " << model.iterations << '\n';
  out << "tol " << format_double(model.tol) << '\n';
  out << "b " << format_double(model.b) << '\n';

  std::size_t nnz = 0;
  for (double x : model.w) nnz += x != 0.0;
  out << "w " << nnz << '\n';
  for (std::size_t j = 0; j < model.w.size(); ++j) {
    if (model.w[j] != 0.0) out << j + 1 << ':' << format_double(model.w[j]) << '\n';
  }

  const auto& s = model.support;
  out << "support " << s.t_star.size() << '\n';
  std::size_t k2 = 0;
  for (std::size_t j = 0; j < s.t_star.size(); ++j) {
    const std::size_t i = s.t_star[j];
    const bool in_t2 = k2 < s.t2.size() && s.t2[k2] == i;
    if (in_t2) ++k2;
    out << i << ' ' << format_double(s.lambda_values[j]) << ' ' << (in_t2 ? 2 : 1) << '\n';
  }
  return out.str();
}

Model load_model(const std::string& text) {
  LineReader r(text);
  Model m;

  auto head = r.next("header");
  if (head.size() != 2 || head[0] != kMagic) r.fail("not a slidesvm model");
  auto version = parse_int(head[1]);
  if (!version || *version != kVersion) {
    r.fail("unsupported model version '" + std::string(head[1]) + "'");
  }

  const auto n = static_cast<std::size_t>(r.integer("n"));
  m.C = r.real("C");
  m.delta = r.real("delta");
  m.slide.epsilon = r.real("epsilon");
  m.slide.v = r.real("v");
  const long long conv = r.integer("converged");
  if (conv > 1) r.fail("converged must be 0 or 1");
  m.converged = conv == 1;
  m.iterations = static_cast<std::size_t>(r.integer("iterations"));
  m.tol = r.real("tol");
  m.b = r.real("b");
  m.config().validate();

  m.w.assign(n, 0.0);
  const auto nnz = static_cast<std::size_t>(r.integer("w"));
  if (nnz > n) r.fail("more weights than dimensions");
  std::size_t prev = 0;
  for (std::size_t j = 0; j < nnz; ++j) {
    auto t = r.next("weight entry");
    if (t.size() != 1) r.fail("expected '<index>:<value>'");
    const auto colon = t[0].find(':');
    if (colon == std::string_view::npos) r.fail("expected '<index>:<value>'");
    auto idx = parse_int(t[0].substr(0, colon));
    auto val = parse_double(t[0].substr(colon + 1));
    if (!idx || !val) r.fail("bad weight entry");
    if (*idx < 1 || static_cast<std::size_t>(*idx) > n) r.fail("weight index outside dimension n");
    if (static_cast<std::size_t>(*idx) <= prev) r.fail("weight indices must increase");
    prev = static_cast<std::size_t>(*idx);
    m.w[prev - 1] = *val;
  }

  const auto ns = static_cast<std::size_t>(r.integer("support"));
  for (std::size_t j = 0; j < ns; ++j) {
    auto t = r.next("support entry");
    if (t.size() != 3) r.fail("expected '<index> <lambda> <1|2>'");
    auto idx = parse_int(t[0]);
    auto lam = parse_double(t[1]);
    auto cls = parse_int(t[2]);
    if (!idx || *idx < 0 || !lam || !cls || (*cls != 1 && *cls != 2)) r.fail("bad support entry");
    const auto i = static_cast<std::size_t>(*idx);
    if (!m.support.t_star.empty() && i <= m.support.t_star.back()) {
      r.fail("support indices must increase");
    }
    m.support.t_star.push_back(i);
    m.support.lambda_values.push_back(*lam);
    (*cls == 2 ? m.support.t2 : m.support.t1).push_back(i);
  }
  return m;
}

void save_model_file(const Model& model, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open " + path + " for writing");
  out << save_model(model);
  if (!out) throw std::runtime_error("write failed: " + path);
}

Model load_model_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return load_model(ss.str());
}

}  // namespace slidesvm
