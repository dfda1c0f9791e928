/*
 * C interface to the ExPen penalty library.
 *
 * Matrices cross this boundary as row-major arrays of doubles: an n x p
 * matrix occupies n*p values with entry (i, j) at index i*p + j.
 *
 * Every function returns an expen_status. On failure the thread-local
 * message from expen_last_error() describes the cause. Handles are opaque
 * and must be released with the matching *_free function; freeing NULL is
 * a no-op.
 */
#ifndef EXPEN_H
#define EXPEN_H

#include <stddef.h>
#include <stdint.h>

#if defined(EXPEN_BUILDING_LIBRARY)
#define EXPEN_API __attribute__((visibility("default")))
#else
#define EXPEN_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum expen_status {
  EXPEN_OK = 0,
  EXPEN_ERR_INVALID_ARGUMENT = 1,
  EXPEN_ERR_DIMENSION = 2,
  EXPEN_ERR_NUMERICAL = 3,
  EXPEN_ERR_CAPABILITY = 4,
  EXPEN_ERR_PRECONDITION = 5,
  EXPEN_ERR_DEGENERATE_PROJECTION = 6,
  EXPEN_ERR_SINGULAR = 7,
  EXPEN_ERR_LINE_SEARCH = 8,
  EXPEN_ERR_NON_DESCENT = 9,
  EXPEN_ERR_IO = 10,
  EXPEN_ERR_INTERNAL = 11
} expen_status;

typedef enum expen_termination {
  EXPEN_TERM_GRAD_TOL = 0,
  EXPEN_TERM_MAX_ITERS = 1,
  EXPEN_TERM_LINE_SEARCH_FAILURE = 2
} expen_termination;

typedef enum expen_solver_kind { EXPEN_SOLVER_FRCG = 0, EXPEN_SOLVER_GD = 1 } expen_solver_kind;
typedef enum expen_problem_kind { EXPEN_PROBLEM_NLEIG = 0, EXPEN_PROBLEM_BROCKETT = 1 } expen_problem_kind;
typedef enum expen_brockett_instance {
  EXPEN_BROCKETT_RANDOM = 0,
  EXPEN_BROCKETT_DIAGONAL = 1
} expen_brockett_instance;
typedef enum expen_format { EXPEN_FORMAT_CSV = 0, EXPEN_FORMAT_JSON = 1, EXPEN_FORMAT_BOTH = 2 } expen_format;

typedef struct expen_objective expen_objective;
typedef struct expen_model expen_model;
typedef struct expen_report expen_report;

EXPEN_API const char* expen_last_error(void);
EXPEN_API const char* expen_status_string(expen_status status);

/* ---- objectives ------------------------------------------------------- */

EXPEN_API expen_status expen_objective_nleig(size_t n, size_t p, double alpha,
                                             expen_objective** out);
/* B is n x n, C is p x p; both symmetric. */
EXPEN_API expen_status expen_objective_brockett(size_t n, size_t p, const double* b,
                                                const double* c, expen_objective** out);
EXPEN_API expen_status expen_objective_brockett_random(size_t n, size_t p, uint64_t seed,
                                                       expen_objective** out);
EXPEN_API expen_status expen_objective_brockett_diagonal(size_t n, size_t p,
                                                         expen_objective** out);
EXPEN_API expen_status expen_objective_constant(size_t n, size_t p, double value,
                                                expen_objective** out);
EXPEN_API void expen_objective_free(expen_objective* obj);

EXPEN_API expen_status expen_objective_dims(const expen_objective* obj, size_t* n, size_t* p);
EXPEN_API expen_status expen_objective_value(const expen_objective* obj, const double* x,
                                             double* out);
EXPEN_API expen_status expen_objective_gradient(const expen_objective* obj, const double* x,
                                                double* out);

/* ---- penalty model ---------------------------------------------------- */

/* The model keeps its own copy of the objective. */
EXPEN_API expen_status expen_model_create(const expen_objective* obj, double beta,
                                          expen_model** out);
/* beta = ||grad f(x0)||_F / 10 */
EXPEN_API expen_status expen_model_create_default_beta(const expen_objective* obj,
                                                       const double* x0, expen_model** out);
EXPEN_API void expen_model_free(expen_model* model);

EXPEN_API expen_status expen_model_beta(const expen_model* model, double* out);
EXPEN_API expen_status expen_model_value(const expen_model* model, const double* x, double* out);
EXPEN_API expen_status expen_model_gradient(const expen_model* model, const double* x,
                                            double* out);
EXPEN_API expen_status expen_model_hess_vec(const expen_model* model, const double* x,
                                            const double* d, double* out);

/* ---- Stiefel utilities ------------------------------------------------ */

EXPEN_API expen_status expen_random_stiefel(size_t n, size_t p, uint64_t seed, double* out);
EXPEN_API expen_status expen_project_stiefel(size_t n, size_t p, const double* x, double* out);
EXPEN_API expen_status expen_feasibility(size_t n, size_t p, const double* x, double* out);

typedef struct expen_stationarity {
  double grad_h_norm;
  double feasibility;
  double projected_riem_grad_norm;
  double certified_bound;
  int in_certified_region;
} expen_stationarity;

EXPEN_API expen_status expen_stationarity_report(const expen_model* model, const double* x,
                                                 expen_stationarity* out);

/* ---- solvers ---------------------------------------------------------- */

typedef struct expen_solver_config {
  double delta;
  double sigma;
  double grad_tol;
  uint64_t max_iters;
  double initial_step;
  int trace_enabled;
  expen_solver_kind solver;
} expen_solver_config;

EXPEN_API void expen_solver_config_default(expen_solver_config* config);
EXPEN_API expen_status expen_solve(const expen_model* model, const double* x0,
                                   const expen_solver_config* config, expen_report** out);
EXPEN_API void expen_report_free(expen_report* report);

typedef struct expen_report_summary {
  double fval;
  uint64_t iterations;
  double stationarity;
  double feasibility;
  double wall_seconds;
  expen_termination termination;
  double beta;
  double h_value;
  double grad_h_norm;
  double iterate_feasibility;
  uint64_t restarts;
  int descent_held;
  int step_bound_held;
} expen_report_summary;

EXPEN_API expen_status expen_report_get_summary(const expen_report* report,
                                                expen_report_summary* out);
/* Projected final point, n*p values. */
EXPEN_API expen_status expen_report_get_final_point(const expen_report* report, double* out);

typedef struct expen_trace_row {
  uint64_t k;
  double h_val;
  double grad_h_norm;
  double feas;
  double fval;
  double step;
  double dir_norm;
} expen_trace_row;

EXPEN_API expen_status expen_report_trace_length(const expen_report* report, size_t* out);
EXPEN_API expen_status expen_report_trace_row(const expen_report* report, size_t index,
                                              expen_trace_row* out);

/* ---- benchmark protocol ----------------------------------------------- */

typedef struct expen_run_spec {
  expen_problem_kind problem;
  uint64_t n;
  uint64_t p;
  double alpha;
  uint64_t seed;
  uint64_t repeats;
  int has_beta;
  double beta;
  double grad_tol;
  uint64_t max_iters;
  expen_solver_kind solver;
  expen_brockett_instance instance;
  int trace;
} expen_run_spec;

typedef struct expen_table_row {
  char solver[32];
  double fval;
  double iteration;
  double stationarity;
  double feasibility;
  double cpu_seconds;
} expen_table_row;

typedef struct expen_bench_outcome {
  expen_table_row row;
  double f_ref;
  uint64_t failures;
  uint64_t repeats;
} expen_bench_outcome;

EXPEN_API void expen_run_spec_default(expen_run_spec* spec);

/* Runs the protocol and, when out_dir is non-NULL, writes the table and
 * trace files there. include_timing = 0 writes zero timings. */
EXPEN_API expen_status expen_benchmark_run(const expen_run_spec* spec, const char* out_dir,
                                           expen_format format, int include_timing,
                                           expen_bench_outcome* out);

#ifdef __cplusplus
}
#endif

#endif /* EXPEN_H */
