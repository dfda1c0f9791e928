#include "expen/solvers.hpp"

#include "expen/error.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <optional>
#include <sstream>

namespace expen {

void SolverConfig::validate() const {
  if (!(delta > 0.0 && delta <= sigma && sigma <= 0.5)) {
    std::ostringstream os;
    os << "SolverConfig: need 0 < delta <= sigma <= 1/2, got delta=" << delta
       << " sigma=" << sigma;
    throw Error(ErrorCode::InvalidArgument, os.str());
  }
  if (!(grad_tol >= 0.0) || max_iters < 0 || !(initial_step > 0.0)) {
    throw Error(ErrorCode::InvalidArgument,
                "SolverConfig: grad_tol, max_iters and initial_step must be nonnegative/positive");
  }
}

const char* to_string(Termination t) noexcept {
  switch (t) {
    case Termination::GradTol: return "grad_tol";
    case Termination::MaxIters: return "max_iters";
    case Termination::LineSearchFailure: return "line_search_failure";
  }
  return "unknown";
}

namespace {

constexpr double kRestartTol = 1e-12;
constexpr double kStepBound = 1.0 / 24.0;

enum class Update { FletcherReeves, SteepestDescent };

// Memoizes the last penalty evaluation along the current search line so the
// accepted line-search point does not need to be re-evaluated.
class LineCache {
 public:
  LineCache(const ExPenModel& model, const Matrix& x, const Matrix& d)
      : model_(model), x_(x), d_(d) {}

  LineSample operator()(double t) {
    point_ = x_ + t * d_;
    eval_ = model_.evaluate(point_);
    t_ = t;
    return {eval_.value, inner(eval_.gradient, d_)};
  }

  bool holds(double t) const { return t_ && *t_ == t; }
  Matrix& point() { return point_; }
  PenaltyEval& eval() { return eval_; }

 private:
  const ExPenModel& model_;
  const Matrix& x_;
  const Matrix& d_;
  std::optional<double> t_;
  Matrix point_;
  PenaltyEval eval_;
};

SolverReport run(const ExPenModel& model, const Matrix& x0, const SolverConfig& config,
                 const IterationObserver& observer, Update update) {
  config.validate();
  require_shape(x0, model.rows(), model.cols(), "solver initial point");
  require_finite(x0, "solver initial point");

  SolverReport report;
  report.beta = model.beta();

  const auto start = std::chrono::steady_clock::now();

  Matrix x = x0;
  PenaltyEval current = model.evaluate(x);
  if (!std::isfinite(current.value) || !current.gradient.allFinite()) {
    throw Error(ErrorCode::Numerical, "solver: penalty is not finite at the initial point");
  }
  double gnorm = current.gradient.norm();

  auto record = [&](Index k, double step, double dir_norm, double zterm) {
    if (!config.trace_enabled) return;
    IterTrace row;
    row.k = k;
    row.h_val = current.value;
    row.grad_h_norm = gnorm;
    row.feas = feasibility(x);
    row.fval = model.objective().value(x);
    row.step = step;
    row.dir_norm = dir_norm;
    row.zoutendijk_term = zterm;
    report.trace.push_back(row);
  };
  record(0, 0.0, 0.0, 0.0);

  Matrix direction = -current.gradient;
  double tau = 0.0;
  double prev_step = 0.0;
  double prev_slope = 0.0;
  report.termination = Termination::MaxIters;

  Index k = 0;
  if (gnorm <= config.grad_tol) {
    report.termination = Termination::GradTol;
  }
  while (report.termination != Termination::GradTol && k < config.max_iters) {
    double slope = inner(current.gradient, direction);
    bool restarted = false;
    if (slope >= -kRestartTol * gnorm * direction.norm()) {
      direction = -current.gradient;
      slope = -gnorm * gnorm;
      tau = 0.0;
      if (k > 0) {
        restarted = true;
        ++report.restarts;
      }
    }
    if (!(slope < 0.0)) report.descent_held = false;

    if (observer) observer(IterationState{k, x, current.gradient, direction, tau, restarted});

    double trial = config.initial_step;
    if (k > 0) trial = std::clamp(prev_step * prev_slope / slope, 1e-12, 1e6);

    LineCache line(model, x, direction);
    LineSearchResult ls;
    try {
      ls = strong_wolfe(std::ref(line), LineSample{current.value, slope}, config, trial);
    } catch (const Error& e) {
      if (e.code() != ErrorCode::LineSearchFailure && e.code() != ErrorCode::NonDescent) throw;
      report.termination = Termination::LineSearchFailure;
      report.failure_message = e.what();
      break;
    }
    if (!line.holds(ls.step)) line(ls.step);

    const double dir_norm = direction.norm();
    if (ls.step * dir_norm > kStepBound) report.step_bound_held = false;

    const double old_sq = gnorm * gnorm;
    x = std::move(line.point());
    current = std::move(line.eval());
    gnorm = current.gradient.norm();
    ++k;
    record(k, ls.step, dir_norm, slope * slope / (dir_norm * dir_norm));

    if (gnorm <= config.grad_tol) {
      report.termination = Termination::GradTol;
      break;
    }

    tau = update == Update::FletcherReeves ? gnorm * gnorm / old_sq : 0.0;
    direction = -current.gradient + tau * direction;
    prev_step = ls.step;
    prev_slope = slope;
  }

  report.wall_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

  report.iterations = k;
  report.h_value = current.value;
  report.certificate = stationarity_report(model, x);
  report.final_point = project_stiefel(x);
  report.fval = model.objective().value(report.final_point);
  report.stationarity = report.certificate.projected_riem_grad_norm;
  report.feasibility = feasibility(report.final_point);
  report.last_iterate = std::move(x);
  return report;
}

}  // namespace

SolverReport frcg_solve(const ExPenModel& model, const Matrix& x0, const SolverConfig& config,
                        const IterationObserver& observer) {
  return run(model, x0, config, observer, Update::FletcherReeves);
}

SolverReport gd_solve(const ExPenModel& model, const Matrix& x0, const SolverConfig& config,
                      const IterationObserver& observer) {
  return run(model, x0, config, observer, Update::SteepestDescent);
}

}  // namespace expen
