#include "expen/expen.h"

#include "expen/bench.hpp"
#include "expen/error.hpp"
#include "expen/model.hpp"
#include "expen/problems.hpp"
#include "expen/solvers.hpp"
#include "expen/stiefel.hpp"

#include <cstring>
#include <exception>
#include <new>
#include <string>

struct expen_objective {
  expen::SmoothObjective impl;
};

struct expen_model {
  expen::ExPenModel impl;
};

struct expen_report {
  expen::SolverReport impl;
};

namespace {

using expen::Index;
using expen::Matrix;

thread_local std::string g_last_error;

expen_status status_of(expen::ErrorCode code) {
  switch (code) {
    case expen::ErrorCode::InvalidArgument: return EXPEN_ERR_INVALID_ARGUMENT;
    case expen::ErrorCode::Dimension: return EXPEN_ERR_DIMENSION;
    case expen::ErrorCode::Numerical: return EXPEN_ERR_NUMERICAL;
    case expen::ErrorCode::Capability: return EXPEN_ERR_CAPABILITY;
    case expen::ErrorCode::Precondition: return EXPEN_ERR_PRECONDITION;
    case expen::ErrorCode::DegenerateProjection: return EXPEN_ERR_DEGENERATE_PROJECTION;
    case expen::ErrorCode::SingularMatrix: return EXPEN_ERR_SINGULAR;
    case expen::ErrorCode::LineSearchFailure: return EXPEN_ERR_LINE_SEARCH;
    case expen::ErrorCode::NonDescent: return EXPEN_ERR_NON_DESCENT;
    case expen::ErrorCode::Io: return EXPEN_ERR_IO;
  }
  return EXPEN_ERR_INTERNAL;
}

template <typename F>
expen_status guarded(F&& body) {
  g_last_error.clear();
  try {
    body();
    return EXPEN_OK;
  } catch (const expen::Error& e) {
    g_last_error = e.what();
    return status_of(e.code());
  } catch (const std::bad_alloc&) {
    g_last_error = "out of memory";
    return EXPEN_ERR_INTERNAL;
  } catch (const std::exception& e) {
    g_last_error = e.what();
    return EXPEN_ERR_INTERNAL;
  }
}

void require(bool ok, const char* what) {
  if (!ok) throw expen::Error(expen::ErrorCode::InvalidArgument, what);
}

Matrix read_matrix(const double* data, Index n, Index p) {
  require(data != nullptr, "null matrix pointer");
  Matrix m(n, p);
  for (Index i = 0; i < n; ++i)
    for (Index j = 0; j < p; ++j) m(i, j) = data[i * p + j];
  return m;
}

void write_matrix(const Matrix& m, double* out) {
  require(out != nullptr, "null output pointer");
  const Index p = m.cols();
  for (Index i = 0; i < m.rows(); ++i)
    for (Index j = 0; j < p; ++j) out[i * p + j] = m(i, j);
}

expen_termination termination_of(expen::Termination t) {
  switch (t) {
    case expen::Termination::GradTol: return EXPEN_TERM_GRAD_TOL;
    case expen::Termination::MaxIters: return EXPEN_TERM_MAX_ITERS;
    case expen::Termination::LineSearchFailure: return EXPEN_TERM_LINE_SEARCH_FAILURE;
  }
  return EXPEN_TERM_LINE_SEARCH_FAILURE;
}

template <typename T>
void emit_handle(T** out, expen::SmoothObjective obj) {
  *out = new T{std::move(obj)};
}

}  // namespace

extern "C" {

const char* expen_last_error(void) { return g_last_error.c_str(); }

const char* expen_status_string(expen_status status) {
  switch (status) {
    case EXPEN_OK: return "ok";
    case EXPEN_ERR_INVALID_ARGUMENT: return expen::to_string(expen::ErrorCode::InvalidArgument);
    case EXPEN_ERR_DIMENSION: return expen::to_string(expen::ErrorCode::Dimension);
    case EXPEN_ERR_NUMERICAL: return expen::to_string(expen::ErrorCode::Numerical);
    case EXPEN_ERR_CAPABILITY: return expen::to_string(expen::ErrorCode::Capability);
    case EXPEN_ERR_PRECONDITION: return expen::to_string(expen::ErrorCode::Precondition);
    case EXPEN_ERR_DEGENERATE_PROJECTION:
      return expen::to_string(expen::ErrorCode::DegenerateProjection);
    case EXPEN_ERR_SINGULAR: return expen::to_string(expen::ErrorCode::SingularMatrix);
    case EXPEN_ERR_LINE_SEARCH: return expen::to_string(expen::ErrorCode::LineSearchFailure);
    case EXPEN_ERR_NON_DESCENT: return expen::to_string(expen::ErrorCode::NonDescent);
    case EXPEN_ERR_IO: return expen::to_string(expen::ErrorCode::Io);
    case EXPEN_ERR_INTERNAL: return "internal error";
  }
  return "unknown status";
}

expen_status expen_objective_nleig(size_t n, size_t p, double alpha, expen_objective** out) {
  return guarded([&] {
    require(out != nullptr, "null output handle");
    emit_handle(out, expen::nleig_make(static_cast<Index>(n), static_cast<Index>(p), alpha));
  });
}

expen_status expen_objective_brockett(size_t n, size_t p, const double* b, const double* c,
                                      expen_objective** out) {
  return guarded([&] {
    require(out != nullptr, "null output handle");
    const Index nn = static_cast<Index>(n);
    const Index pp = static_cast<Index>(p);
    emit_handle(out, expen::brockett_make(read_matrix(b, nn, nn), read_matrix(c, pp, pp)));
  });
}

expen_status expen_objective_brockett_random(size_t n, size_t p, uint64_t seed,
                                             expen_objective** out) {
  return guarded([&] {
    require(out != nullptr, "null output handle");
    emit_handle(out, expen::brockett_random(static_cast<Index>(n), static_cast<Index>(p), seed));
  });
}

expen_status expen_objective_brockett_diagonal(size_t n, size_t p, expen_objective** out) {
  return guarded([&] {
    require(out != nullptr, "null output handle");
    emit_handle(out, expen::brockett_diagonal(static_cast<Index>(n), static_cast<Index>(p)));
  });
}

expen_status expen_objective_constant(size_t n, size_t p, double value, expen_objective** out) {
  return guarded([&] {
    require(out != nullptr, "null output handle");
    emit_handle(out,
                expen::constant_objective(static_cast<Index>(n), static_cast<Index>(p), value));
  });
}

void expen_objective_free(expen_objective* obj) { delete obj; }

expen_status expen_objective_dims(const expen_objective* obj, size_t* n, size_t* p) {
  return guarded([&] {
    require(obj && n && p, "null argument");
    *n = static_cast<size_t>(obj->impl.n);
    *p = static_cast<size_t>(obj->impl.p);
  });
}

expen_status expen_objective_value(const expen_objective* obj, const double* x, double* out) {
  return guarded([&] {
    require(obj && out, "null argument");
    *out = obj->impl.value(read_matrix(x, obj->impl.n, obj->impl.p));
  });
}

expen_status expen_objective_gradient(const expen_objective* obj, const double* x, double* out) {
  return guarded([&] {
    require(obj != nullptr, "null objective");
    write_matrix(obj->impl.gradient(read_matrix(x, obj->impl.n, obj->impl.p)), out);
  });
}

expen_status expen_model_create(const expen_objective* obj, double beta, expen_model** out) {
  return guarded([&] {
    require(obj && out, "null argument");
    *out = new expen_model{expen::ExPenModel(obj->impl, beta)};
  });
}

expen_status expen_model_create_default_beta(const expen_objective* obj, const double* x0,
                                             expen_model** out) {
  return guarded([&] {
    require(obj && out, "null argument");
    const Matrix x = read_matrix(x0, obj->impl.n, obj->impl.p);
    *out = new expen_model{expen::ExPenModel::with_default_beta(obj->impl, x)};
  });
}

void expen_model_free(expen_model* model) { delete model; }

expen_status expen_model_beta(const expen_model* model, double* out) {
  return guarded([&] {
    require(model && out, "null argument");
    *out = model->impl.beta();
  });
}

expen_status expen_model_value(const expen_model* model, const double* x, double* out) {
  return guarded([&] {
    require(model && out, "null argument");
    *out = model->impl.value(read_matrix(x, model->impl.rows(), model->impl.cols()));
  });
}

expen_status expen_model_gradient(const expen_model* model, const double* x, double* out) {
  return guarded([&] {
    require(model != nullptr, "null model");
    write_matrix(model->impl.gradient(read_matrix(x, model->impl.rows(), model->impl.cols())),
                 out);
  });
}

expen_status expen_model_hess_vec(const expen_model* model, const double* x, const double* d,
                                  double* out) {
  return guarded([&] {
    require(model != nullptr, "null model");
    const Index n = model->impl.rows();
    const Index p = model->impl.cols();
    write_matrix(model->impl.hess_vec(read_matrix(x, n, p), read_matrix(d, n, p)), out);
  });
}

expen_status expen_random_stiefel(size_t n, size_t p, uint64_t seed, double* out) {
  return guarded([&] {
    write_matrix(
        expen::random_stiefel(expen::RandomSpec{static_cast<Index>(n), static_cast<Index>(p), seed}),
        out);
  });
}

expen_status expen_project_stiefel(size_t n, size_t p, const double* x, double* out) {
  return guarded([&] {
    write_matrix(
        expen::project_stiefel(read_matrix(x, static_cast<Index>(n), static_cast<Index>(p))),
        out);
  });
}

expen_status expen_feasibility(size_t n, size_t p, const double* x, double* out) {
  return guarded([&] {
    require(out != nullptr, "null output pointer");
    *out = expen::feasibility(read_matrix(x, static_cast<Index>(n), static_cast<Index>(p)));
  });
}

expen_status expen_stationarity_report(const expen_model* model, const double* x,
                                       expen_stationarity* out) {
  return guarded([&] {
    require(model && out, "null argument");
    const auto r = expen::stationarity_report(
        model->impl, read_matrix(x, model->impl.rows(), model->impl.cols()));
    out->grad_h_norm = r.grad_h_norm;
    out->feasibility = r.feasibility;
    out->projected_riem_grad_norm = r.projected_riem_grad_norm;
    out->certified_bound = r.certified_bound;
    out->in_certified_region = r.in_certified_region ? 1 : 0;
  });
}

void expen_solver_config_default(expen_solver_config* config) {
  if (!config) return;
  const expen::SolverConfig d;
  config->delta = d.delta;
  config->sigma = d.sigma;
  config->grad_tol = d.grad_tol;
  config->max_iters = static_cast<uint64_t>(d.max_iters);
  config->initial_step = d.initial_step;
  config->trace_enabled = d.trace_enabled ? 1 : 0;
  config->solver = EXPEN_SOLVER_FRCG;
}

expen_status expen_solve(const expen_model* model, const double* x0,
                         const expen_solver_config* config, expen_report** out) {
  return guarded([&] {
    require(model && config && out, "null argument");
    expen::SolverConfig c;
    c.delta = config->delta;
    c.sigma = config->sigma;
    c.grad_tol = config->grad_tol;
    c.max_iters = static_cast<Index>(config->max_iters);
    c.initial_step = config->initial_step;
    c.trace_enabled = config->trace_enabled != 0;
    const Matrix x = read_matrix(x0, model->impl.rows(), model->impl.cols());
    expen::SolverReport report = config->solver == EXPEN_SOLVER_GD
                                     ? expen::gd_solve(model->impl, x, c)
                                     : expen::frcg_solve(model->impl, x, c);
    *out = new expen_report{std::move(report)};
  });
}

void expen_report_free(expen_report* report) { delete report; }

expen_status expen_report_get_summary(const expen_report* report, expen_report_summary* out) {
  return guarded([&] {
    require(report && out, "null argument");
    const expen::SolverReport& r = report->impl;
    out->fval = r.fval;
    out->iterations = static_cast<uint64_t>(r.iterations);
    out->stationarity = r.stationarity;
    out->feasibility = r.feasibility;
    out->wall_seconds = r.wall_seconds;
    out->termination = termination_of(r.termination);
    out->beta = r.beta;
    out->h_value = r.h_value;
    out->grad_h_norm = r.certificate.grad_h_norm;
    out->iterate_feasibility = r.certificate.feasibility;
    out->restarts = static_cast<uint64_t>(r.restarts);
    out->descent_held = r.descent_held ? 1 : 0;
    out->step_bound_held = r.step_bound_held ? 1 : 0;
  });
}

expen_status expen_report_get_final_point(const expen_report* report, double* out) {
  return guarded([&] {
    require(report != nullptr, "null report");
    write_matrix(report->impl.final_point, out);
  });
}

expen_status expen_report_trace_length(const expen_report* report, size_t* out) {
  return guarded([&] {
    require(report && out, "null argument");
    *out = report->impl.trace.size();
  });
}

expen_status expen_report_trace_row(const expen_report* report, size_t index,
                                    expen_trace_row* out) {
  return guarded([&] {
    require(report && out, "null argument");
    require(index < report->impl.trace.size(), "trace index out of range");
    const expen::IterTrace& t = report->impl.trace[index];
    out->k = static_cast<uint64_t>(t.k);
    out->h_val = t.h_val;
    out->grad_h_norm = t.grad_h_norm;
    out->feas = t.feas;
    out->fval = t.fval;
    out->step = t.step;
    out->dir_norm = t.dir_norm;
  });
}

void expen_run_spec_default(expen_run_spec* spec) {
  if (!spec) return;
  const expen::bench::RunSpec d;
  spec->problem = EXPEN_PROBLEM_NLEIG;
  spec->n = static_cast<uint64_t>(d.n);
  spec->p = static_cast<uint64_t>(d.p);
  spec->alpha = d.alpha;
  spec->seed = d.seed;
  spec->repeats = static_cast<uint64_t>(d.repeats);
  spec->has_beta = 0;
  spec->beta = 0.0;
  spec->grad_tol = d.grad_tol;
  spec->max_iters = static_cast<uint64_t>(d.max_iters);
  spec->solver = EXPEN_SOLVER_FRCG;
  spec->instance = EXPEN_BROCKETT_RANDOM;
  spec->trace = 0;
}

expen_status expen_benchmark_run(const expen_run_spec* spec, const char* out_dir,
                                 expen_format format, int include_timing,
                                 expen_bench_outcome* out) {
  namespace bench = expen::bench;
  return guarded([&] {
    require(spec != nullptr, "null run spec");
    bench::RunSpec s;
    s.problem = spec->problem == EXPEN_PROBLEM_BROCKETT ? bench::ProblemKind::Brockett
                                                        : bench::ProblemKind::Nleig;
    s.n = static_cast<Index>(spec->n);
    s.p = static_cast<Index>(spec->p);
    s.alpha = spec->alpha;
    s.seed = spec->seed;
    s.repeats = static_cast<Index>(spec->repeats);
    if (spec->has_beta) s.beta_override = spec->beta;
    s.grad_tol = spec->grad_tol;
    s.max_iters = static_cast<Index>(spec->max_iters);
    s.solver = spec->solver == EXPEN_SOLVER_GD ? bench::SolverKind::Gd : bench::SolverKind::FrCg;
    s.instance = spec->instance == EXPEN_BROCKETT_DIAGONAL ? bench::BrockettInstance::Diagonal
                                                           : bench::BrockettInstance::Random;
    s.trace = spec->trace != 0;

    const bench::BenchmarkResult result = bench::run_benchmark(s);
    if (out_dir != nullptr) {
      bench::OutputOptions options;
      options.format = format == EXPEN_FORMAT_CSV    ? bench::OutputFormat::Csv
                       : format == EXPEN_FORMAT_JSON ? bench::OutputFormat::Json
                                                     : bench::OutputFormat::Both;
      options.include_timing = include_timing != 0;
      bench::emit_outputs(result, out_dir, options);
    }
    if (out != nullptr) {
      std::memset(out, 0, sizeof *out);
      std::strncpy(out->row.solver, result.row.solver.c_str(), sizeof out->row.solver - 1);
      out->row.fval = result.row.fval;
      out->row.iteration = result.row.iteration;
      out->row.stationarity = result.row.stationarity;
      out->row.feasibility = result.row.feasibility;
      out->row.cpu_seconds = include_timing ? result.row.cpu_seconds : 0.0;
      out->f_ref = result.f_ref;
      out->failures = static_cast<uint64_t>(result.failures);
      out->repeats = static_cast<uint64_t>(result.runs.size());
    }
  });
}

}  // extern "C"
