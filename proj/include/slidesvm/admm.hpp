#ifndef SLIDESVM_ADMM_HPP
#define SLIDESVM_ADMM_HPP

#include <Eigen/Dense>
#include <array>
#include <cstddef>
#include <ostream>
#include <vector>

#include "slidesvm/dataset.hpp"
#include "slidesvm/model.hpp"
#include "slidesvm/train_config.hpp"

namespace slidesvm {

// Dense view of a training set used by the solver: rows of A are y_i x_i.
class Problem {
 public:
  explicit Problem(const Dataset& ds);

  std::size_t samples() const { return static_cast<std::size_t>(a_.rows()); }
  std::size_t features() const { return static_cast<std::size_t>(a_.cols()); }
  const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>& A() const {
    return a_;
  }
  const Eigen::VectorXd& y() const { return y_; }

 private:
  Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor> a_;
  Eigen::VectorXd y_;
};

// Working set T_k, sorted ascending. In the ramp regime `ramp[j]` marks
// members of T^2 (shifted by C/(delta (v - eps))); the rest are T^1 and
// are pinned to eps. In the flat regime every member is pinned.
struct WorkingSet {
  std::vector<std::size_t> members;
  std::vector<char> ramp;

  std::size_t size() const { return members.size(); }
  bool empty() const { return members.empty(); }
  std::vector<std::size_t> t1() const;
  std::vector<std::size_t> t2() const;
  bool operator==(const WorkingSet&) const = default;
};

struct AdmmState {
  Eigen::VectorXd w;
  double b = 0.0;
  Eigen::VectorXd u;
  Eigen::VectorXd lambda;
  std::size_t k = 0;
  WorkingSet working_set;

  // w = 0, b = 0, lambda = 0, u = 1: the constraint u + Aw + by = 1 holds.
  static AdmmState initial(const Problem& problem);
};

struct Residuals {
  double e1 = 0.0;
  double e2 = 0.0;
  double e3 = 0.0;
  double e4 = 0.0;
  double max() const;
};

// z = 1 - A w - b y - lambda / delta.
Eigen::VectorXd compute_z(const AdmmState& state, const Problem& problem,
                          const TrainConfig& cfg);

WorkingSet select_working_set(const Eigen::VectorXd& z,
                              const Eigen::VectorXd& lambda,
                              const TrainConfig& cfg);

Eigen::VectorXd update_u(const Eigen::VectorXd& z, const WorkingSet& ws,
                         const TrainConfig& cfg);

enum class WSolve { automatic, direct, woodbury };

// Solves (I + delta A_T' A_T) w = -delta A_T' r_T with
// r = lambda/delta + u_next + b y - 1 over T = state.working_set.
// `direct` factors the n x n system, `woodbury` the |T| x |T| one;
// `automatic` picks direct when n <= |T|.
Eigen::VectorXd update_w(const AdmmState& state, const Eigen::VectorXd& u_next,
                         const Problem& problem, const TrainConfig& cfg,
                         WSolve solve = WSolve::automatic);

// b = <y, 1 - u - A w - lambda/delta> / m.
double update_b(const Eigen::VectorXd& u_next, const Eigen::VectorXd& w_next,
                const Eigen::VectorXd& lambda, const Problem& problem,
                const TrainConfig& cfg);

// Dual step on the working set; zero elsewhere.
Eigen::VectorXd update_lambda(const AdmmState& state, const Eigen::VectorXd& u_next,
                              const Eigen::VectorXd& w_next, double b_next,
                              const Problem& problem, const TrainConfig& cfg);

// Termination residuals e1..e4 of `state`, using state.working_set.
Residuals residuals(const AdmmState& state, const Problem& problem,
                    const TrainConfig& cfg);

// One sweep: working set from z, then u, w, b, lambda.
AdmmState admm_step(const AdmmState& state, const Problem& problem,
                    const TrainConfig& cfg);

struct IterationRecord {
  std::size_t k = 0;
  std::size_t working_set_size = 0;
  Residuals residuals;
  double objective = 0.0;
};

struct TrainDiagnostics {
  std::vector<IterationRecord> history;
  AdmmState final_state;
  std::size_t iterations = 0;
  bool converged = false;
};

struct TrainResult {
  Model model;
  TrainDiagnostics diagnostics;
};

// 1/2 |w|^2 + C * sum slide_loss(1 - A w - b y).
double primal_objective(const Eigen::VectorXd& w, double b, const Problem& problem,
                        const TrainConfig& cfg);

// Runs sweeps from the initial state until every residual is below tol or
// max_iter sweeps are done. Non-convergence is reported, not thrown; the
// final iterate is returned.
TrainResult train(const Problem& problem, const TrainConfig& cfg);
TrainResult train(const Dataset& ds, const TrainConfig& cfg);

void write_diagnostics_csv(const TrainDiagnostics& diag, std::ostream& out);

// Defects of the four proximal-stationarity conditions with the full A:
// |w + A' lambda|, |<y, lambda>|, |u + A w + b y - 1| and the distance of u
// to Prox_{gamma C L}(u - gamma lambda) (nearest minimizer at ties).
struct StationarityReport {
  std::array<double, 4> defects{};
  bool passes(double tau) const;
};

StationarityReport check_proximal_stationarity(
    const Eigen::VectorXd& w, double b, const Eigen::VectorXd& u,
    const Eigen::VectorXd& lambda, double gamma, const Problem& problem,
    double C, const SlideParams& p);

}  // namespace slidesvm

#endif  // SLIDESVM_ADMM_HPP
