#include "slidesvm/admm.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "slidesvm/text_format.hpp"

namespace slidesvm {

using RowMatrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

Problem::Problem(const Dataset& ds)
    : a_(RowMatrix::Zero(static_cast<Eigen::Index>(ds.size()),
                         static_cast<Eigen::Index>(ds.dim()))),
      y_(static_cast<Eigen::Index>(ds.size())) {
  for (std::size_t i = 0; i < ds.size(); ++i) {
    const auto r = static_cast<Eigen::Index>(i);
    const double yi = ds.label(i);
    y_(r) = yi;
    for (const auto& e : ds.row(i)) a_(r, static_cast<Eigen::Index>(e.index)) = yi * e.value;
  }
}

std::vector<std::size_t> WorkingSet::t1() const {
  std::vector<std::size_t> out;
  for (std::size_t j = 0; j < members.size(); ++j) {
    if (!ramp[j]) out.push_back(members[j]);
  }
  return out;
}

std::vector<std::size_t> WorkingSet::t2() const {
  std::vector<std::size_t> out;
  for (std::size_t j = 0; j < members.size(); ++j) {
    if (ramp[j]) out.push_back(members[j]);
  }
  return out;
}

AdmmState AdmmState::initial(const Problem& problem) {
  const auto m = static_cast<Eigen::Index>(problem.samples());
  const auto n = static_cast<Eigen::Index>(problem.features());
  AdmmState s;
  s.w = Eigen::VectorXd::Zero(n);
  s.b = 0.0;
  s.u = Eigen::VectorXd::Ones(m);
  s.lambda = Eigen::VectorXd::Zero(m);
  return s;
}

double Residuals::max() const { return std::max({e1, e2, e3, e4}); }

namespace {

// Each helper takes aw = A w for the w it works with, so one sweep needs a
// single product with A.

Eigen::VectorXd z_from(const Eigen::VectorXd& aw, double b,
                       const Eigen::VectorXd& lambda, const Problem& problem,
                       const TrainConfig& cfg) {
  return (1.0 - aw.array() - b * problem.y().array() - lambda.array() / cfg.delta).matrix();
}

double b_from(const Eigen::VectorXd& u_next, const Eigen::VectorXd& aw_next,
              const Eigen::VectorXd& lambda, const Problem& problem,
              const TrainConfig& cfg) {
  if (problem.samples() == 0) throw std::invalid_argument("update_b: no samples");
  const Eigen::VectorXd t =
      (1.0 - u_next.array() - aw_next.array() - lambda.array() / cfg.delta).matrix();
  return problem.y().dot(t) / static_cast<double>(problem.samples());
}

Eigen::VectorXd lambda_from(const AdmmState& state, const Eigen::VectorXd& u_next,
                            const Eigen::VectorXd& aw_next, double b_next,
                            const Problem& problem, const TrainConfig& cfg) {
  Eigen::VectorXd next = Eigen::VectorXd::Zero(state.lambda.size());
  const double step = cfg.eta * cfg.delta;
  for (std::size_t i : state.working_set.members) {
    const auto r = static_cast<Eigen::Index>(i);
    const double res = u_next(r) + aw_next(r) + b_next * problem.y()(r) - 1.0;
    next(r) = state.lambda(r) + step * res;
  }
  return next;
}

Residuals residuals_from(const AdmmState& state, const Eigen::VectorXd& aw,
                         const Problem& problem, const TrainConfig& cfg) {
  Residuals r;
  const auto& T = state.working_set.members;
  Eigen::VectorXd grad = state.w;
  double ylam = 0.0;
  for (std::size_t i : T) {
    const auto ri = static_cast<Eigen::Index>(i);
    grad.noalias() += state.lambda(ri) * problem.A().row(ri).transpose();
    ylam += problem.y()(ri) * state.lambda(ri);
  }
  r.e1 = grad.norm() / (1.0 + state.w.norm());
  r.e2 = std::abs(ylam) / (1.0 + static_cast<double>(T.size()));

  const double m = static_cast<double>(problem.samples());
  const Eigen::VectorXd feas =
      (1.0 - state.u.array() - aw.array() - state.b * problem.y().array()).matrix();
  r.e3 = m > 0 ? feas.norm() / std::sqrt(m) : 0.0;

  const double gc = cfg.gamma_c();
  double sq = 0.0;
  for (Eigen::Index i = 0; i < state.u.size(); ++i) {
    const double s = state.u(i) - state.lambda(i) / cfg.delta;
    const double d = state.u(i) - prox_slide(s, gc, cfg.slide).value;
    sq += d * d;
  }
  r.e4 = std::sqrt(sq) / (1.0 + state.u.norm());
  return r;
}

double objective_from(const Eigen::VectorXd& w, double b, const Eigen::VectorXd& aw,
                      const Problem& problem, const TrainConfig& cfg) {
  double loss = 0.0;
  for (Eigen::Index i = 0; i < aw.size(); ++i) {
    loss += slide_loss(1.0 - aw(i) - b * problem.y()(i), cfg.slide);
  }
  return 0.5 * w.squaredNorm() + cfg.C * loss;
}

std::vector<Eigen::Index> as_index(const std::vector<std::size_t>& v) {
  return {v.begin(), v.end()};
}

}  // namespace

Eigen::VectorXd compute_z(const AdmmState& state, const Problem& problem,
                          const TrainConfig& cfg) {
  const Eigen::VectorXd aw = problem.A() * state.w;
  return z_from(aw, state.b, state.lambda, problem, cfg);
}

WorkingSet select_working_set(const Eigen::VectorXd& z,
                              const Eigen::VectorXd& lambda,
                              const TrainConfig& cfg) {
  const SlideParams& p = cfg.slide;
  const double gc = cfg.gamma_c();
  const double eps = p.epsilon;
  const double upper = prox_tie_point(gc, p);
  WorkingSet ws;

  if (cfg.ramp_regime()) {
    const double ramp_start = gc / p.width() + eps;
    for (Eigen::Index i = 0; i < z.size(); ++i) {
      const double zi = z(i);
      if (zi <= eps) continue;
      if (zi < ramp_start) {
        ws.members.push_back(static_cast<std::size_t>(i));
        ws.ramp.push_back(0);
      } else if (zi < upper || (zi == upper && lambda(i) != 0.0)) {
        ws.members.push_back(static_cast<std::size_t>(i));
        ws.ramp.push_back(1);
      }
    }
    return ws;
  }

  for (Eigen::Index i = 0; i < z.size(); ++i) {
    const double zi = z(i);
    if (zi <= eps) continue;
    if (zi < upper || (zi == upper && lambda(i) != 0.0)) {
      ws.members.push_back(static_cast<std::size_t>(i));
      ws.ramp.push_back(0);
    }
  }
  return ws;
}

Eigen::VectorXd update_u(const Eigen::VectorXd& z, const WorkingSet& ws,
                         const TrainConfig& cfg) {
  Eigen::VectorXd u = z;
  const double shift = cfg.gamma_c() / cfg.slide.width();
  for (std::size_t j = 0; j < ws.members.size(); ++j) {
    const auto i = static_cast<Eigen::Index>(ws.members[j]);
    u(i) = ws.ramp[j] ? z(i) - shift : cfg.slide.epsilon;
  }
  return u;
}

Eigen::VectorXd update_w(const AdmmState& state, const Eigen::VectorXd& u_next,
                         const Problem& problem, const TrainConfig& cfg,
                         WSolve solve) {
  const auto n = static_cast<Eigen::Index>(problem.features());
  const auto& T = state.working_set.members;
  if (T.empty()) return Eigen::VectorXd::Zero(n);

  const auto rows = as_index(T);
  const Eigen::MatrixXd AT = problem.A()(rows, Eigen::all);
  Eigen::VectorXd r(static_cast<Eigen::Index>(T.size()));
  for (Eigen::Index j = 0; j < r.size(); ++j) {
    const Eigen::Index i = rows[static_cast<std::size_t>(j)];
    r(j) = state.lambda(i) / cfg.delta + u_next(i) + state.b * problem.y()(i) - 1.0;
  }

  const double delta = cfg.delta;
  if (solve == WSolve::automatic) {
    solve = static_cast<std::size_t>(n) <= T.size() ? WSolve::direct : WSolve::woodbury;
  }

  if (solve == WSolve::direct) {
    Eigen::MatrixXd M = Eigen::MatrixXd::Identity(n, n);
    M.selfadjointView<Eigen::Lower>().rankUpdate(AT.transpose(), delta);
    Eigen::LLT<Eigen::MatrixXd, Eigen::Lower> llt(M);
    if (llt.info() != Eigen::Success) {
      throw std::runtime_error("update_w: factorization of I + delta A_T'A_T failed");
    }
    return llt.solve(-delta * (AT.transpose() * r));
  }

  const auto t = static_cast<Eigen::Index>(T.size());
  Eigen::MatrixXd K = Eigen::MatrixXd::Identity(t, t);
  K.selfadjointView<Eigen::Lower>().rankUpdate(AT, delta);
  Eigen::LLT<Eigen::MatrixXd, Eigen::Lower> llt(K);
  if (llt.info() != Eigen::Success) {
    throw std::runtime_error("update_w: factorization of I + delta A_T A_T' failed");
  }
  const Eigen::VectorXd q = llt.solve(r);
  return -delta * (AT.transpose() * q);
}

double update_b(const Eigen::VectorXd& u_next, const Eigen::VectorXd& w_next,
                const Eigen::VectorXd& lambda, const Problem& problem,
                const TrainConfig& cfg) {
  const Eigen::VectorXd aw = problem.A() * w_next;
  return b_from(u_next, aw, lambda, problem, cfg);
}

Eigen::VectorXd update_lambda(const AdmmState& state, const Eigen::VectorXd& u_next,
                              const Eigen::VectorXd& w_next, double b_next,
                              const Problem& problem, const TrainConfig& cfg) {
  const Eigen::VectorXd aw = problem.A() * w_next;
  return lambda_from(state, u_next, aw, b_next, problem, cfg);
}

Residuals residuals(const AdmmState& state, const Problem& problem,
                    const TrainConfig& cfg) {
  const Eigen::VectorXd aw = problem.A() * state.w;
  return residuals_from(state, aw, problem, cfg);
}

namespace {

// One sweep. `aw` holds A w for the incoming state and is overwritten with
// A w for the returned one.
AdmmState sweep(const AdmmState& state, Eigen::VectorXd& aw,
                const Problem& problem, const TrainConfig& cfg) {
  const Eigen::VectorXd z = z_from(aw, state.b, state.lambda, problem, cfg);

  AdmmState next;
  next.working_set = select_working_set(z, state.lambda, cfg);
  next.u = update_u(z, next.working_set, cfg);

  AdmmState current = state;
  current.working_set = next.working_set;
  next.w = update_w(current, next.u, problem, cfg);
  aw.noalias() = problem.A() * next.w;
  next.b = b_from(next.u, aw, state.lambda, problem, cfg);
  next.lambda = lambda_from(current, next.u, aw, next.b, problem, cfg);
  next.k = state.k + 1;
  return next;
}

}  // namespace

AdmmState admm_step(const AdmmState& state, const Problem& problem,
                    const TrainConfig& cfg) {
  Eigen::VectorXd aw = problem.A() * state.w;
  return sweep(state, aw, problem, cfg);
}

double primal_objective(const Eigen::VectorXd& w, double b, const Problem& problem,
                        const TrainConfig& cfg) {
  const Eigen::VectorXd aw = problem.A() * w;
  return objective_from(w, b, aw, problem, cfg);
}

TrainResult train(const Problem& problem, const TrainConfig& cfg) {
  cfg.validate();
  if (problem.samples() == 0) throw std::invalid_argument("train: empty dataset");

  TrainDiagnostics diag;
  AdmmState state = AdmmState::initial(problem);
  Eigen::VectorXd aw = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(problem.samples()));
  diag.history.reserve(std::min<std::size_t>(cfg.max_iter, 4096));

  while (state.k < cfg.max_iter) {
    state = sweep(state, aw, problem, cfg);
    IterationRecord rec;
    rec.k = state.k;
    rec.working_set_size = state.working_set.size();
    rec.residuals = residuals_from(state, aw, problem, cfg);
    rec.objective = objective_from(state.w, state.b, aw, problem, cfg);
    diag.history.push_back(rec);
    if (rec.residuals.max() < cfg.tol) {
      diag.converged = true;
      break;
    }
  }
  diag.iterations = state.k;

  TrainResult result;
  Model& model = result.model;
  model.w.assign(state.w.data(), state.w.data() + state.w.size());
  model.b = state.b;
  model.slide = cfg.slide;
  model.C = cfg.C;
  model.delta = cfg.delta;
  model.tol = cfg.tol;
  model.support = extract_support_vectors(
      std::span<const double>(state.lambda.data(), static_cast<std::size_t>(state.lambda.size())),
      cfg);
  model.converged = diag.converged;
  model.iterations = diag.iterations;
  diag.final_state = std::move(state);
  result.diagnostics = std::move(diag);
  return result;
}

TrainResult train(const Dataset& ds, const TrainConfig& cfg) {
  return train(Problem(ds), cfg);
}

void write_diagnostics_csv(const TrainDiagnostics& diag, std::ostream& out) {
  out << "k,working_set_size,e1,e2,e3,e4,objective\n";
  for (const auto& rec : diag.history) {
    out << rec.k << ',' << rec.working_set_size << ',' << format_double(rec.residuals.e1)
        << ',' << format_double(rec.residuals.e2) << ',' << format_double(rec.residuals.e3)
        << ',' << format_double(rec.residuals.e4) << ',' << format_double(rec.objective)
        << '\n';
  }
}

bool StationarityReport::passes(double tau) const {
  return std::all_of(defects.begin(), defects.end(), [tau](double d) { return d <= tau; });
}

StationarityReport check_proximal_stationarity(
    const Eigen::VectorXd& w, double b, const Eigen::VectorXd& u,
    const Eigen::VectorXd& lambda, double gamma, const Problem& problem,
    double C, const SlideParams& p) {
  if (!(gamma > 0.0)) throw std::invalid_argument("stationarity check: gamma must be positive");
  StationarityReport rep;
  rep.defects[0] = (w + problem.A().transpose() * lambda).norm();
  rep.defects[1] = std::abs(problem.y().dot(lambda));
  rep.defects[2] =
      (u.array() + (problem.A() * w).array() + b * problem.y().array() - 1.0).matrix().norm();

  const double gc = gamma * C;
  double sq = 0.0;
  for (Eigen::Index i = 0; i < u.size(); ++i) {
    const ProxResult pr = prox_slide(u(i) - gamma * lambda(i), gc, p);
    double d = std::abs(u(i) - pr.value);
    if (pr.alternate) d = std::min(d, std::abs(u(i) - *pr.alternate));
    sq += d * d;
  }
  rep.defects[3] = std::sqrt(sq);
  return rep;
}

}  // namespace slidesvm
