#pragma once

// Unconstrained solvers for the penalty model: strong Wolfe line search,
// Fletcher-Reeves nonlinear CG, and steepest descent as a baseline.

#include "expen/linalg.hpp"
#include "expen/model.hpp"
#include "expen/stiefel.hpp"

#include <functional>
#include <string>
#include <vector>

namespace expen {

struct SolverConfig {
  double delta = 1e-4;  // sufficient decrease
  double sigma = 0.4;   // curvature, delta <= sigma <= 1/2
  double grad_tol = 1e-3;
  Index max_iters = 10000;
  double initial_step = 1.0;
  bool trace_enabled = false;

  /// Throws InvalidArgument unless 0 < delta <= sigma <= 1/2 and the
  /// remaining fields are positive.
  void validate() const;
};

// ---------------------------------------------------------------------------
// Line search

struct LineSample {
  double phi = 0.0;   // phi(t)
  double dphi = 0.0;  // phi'(t)
};

using LineFunction = std::function<LineSample(double)>;

struct LineSearchResult {
  double step = 0.0;
  LineSample at_step;
  int evaluations = 0;
};

/// Finds t > 0 with
///   phi(t) <= phi(0) + delta t phi'(0)   and   |phi'(t)| <= -sigma phi'(0),
/// starting from `initial_step` and doubling until a bracket is found, then
/// zooming with safeguarded cubic interpolation. The accepted step is always
/// the last point passed to `f`.
///
/// Throws NonDescent if phi'(0) >= 0 and LineSearchFailure after 60 zoom
/// iterations or once the trial step exceeds 1e10.
LineSearchResult strong_wolfe(const LineFunction& f, LineSample at_zero,
                              const SolverConfig& config, double initial_step);

double strong_wolfe(const std::function<double(double)>& phi,
                    const std::function<double(double)>& dphi,
                    const SolverConfig& config);

// ---------------------------------------------------------------------------
// Solvers

enum class Termination { GradTol, MaxIters, LineSearchFailure };

const char* to_string(Termination t) noexcept;

/// Trace row k describes X_k. `step`, `dir_norm` and `zoutendijk_term` refer
/// to the step that produced X_k and are zero for k = 0.
struct IterTrace {
  Index k = 0;
  double h_val = 0.0;
  double grad_h_norm = 0.0;
  double feas = 0.0;
  double fval = 0.0;  // f(X_k) at the raw iterate
  double step = 0.0;
  double dir_norm = 0.0;
  double zoutendijk_term = 0.0;  // <grad h, D>^2 / ||D||^2
};

/// Snapshot handed to an observer once the search direction for iteration k
/// is fixed. `tau` is the ratio used to build `direction` (0 at k = 0 or
/// after a restart).
struct IterationState {
  Index k;
  const Matrix& x;
  const Matrix& gradient;
  const Matrix& direction;
  double tau;
  bool restarted;
};

using IterationObserver = std::function<void(const IterationState&)>;

struct SolverReport {
  Matrix final_point;   // P_S of the last iterate
  Matrix last_iterate;  // raw iterate before projection
  double fval = 0.0;    // f(final_point)
  Index iterations = 0;
  double stationarity = 0.0;  // ||grad f(final_point)||_F
  double feasibility = 0.0;   // of final_point
  double wall_seconds = 0.0;
  Termination termination = Termination::MaxIters;
  std::string failure_message;

  double beta = 0.0;
  double h_value = 0.0;                 // h(last_iterate)
  StationarityReport certificate;       // at last_iterate
  Index restarts = 0;
  bool descent_held = true;             // <grad h(X_k), D_k> < 0 for every k
  bool step_bound_held = true;          // eta_k ||D_k||_F <= 1/24 for every k
  std::vector<IterTrace> trace;
};

/// Fletcher-Reeves CG on h with restart to steepest descent whenever the
/// direction stops being a strict descent direction.
SolverReport frcg_solve(const ExPenModel& model, const Matrix& x0,
                        const SolverConfig& config,
                        const IterationObserver& observer = {});

SolverReport gd_solve(const ExPenModel& model, const Matrix& x0,
                      const SolverConfig& config,
                      const IterationObserver& observer = {});

}  // namespace expen
