#include "expen/bench.hpp"

#include "expen/error.hpp"
#include "expen/problems.hpp"

#include "json.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>

namespace expen::bench {
namespace {

using nlohmann::json;

constexpr std::uint64_t kProblemStream = 0x9E3779B97F4A7C15ULL;

TableRow scrub_timing(TableRow row, const OutputOptions& options) {
  if (!options.include_timing) row.cpu_seconds = 0.0;
  return row;
}

json row_to_json(const TableRow& row) {
  return json{{"solver", row.solver},
              {"fval", row.fval},
              {"iteration", row.iteration},
              {"stationarity", row.stationarity},
              {"feasibility", row.feasibility},
              {"cpu_seconds", row.cpu_seconds}};
}

void write_file(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCode::Io, "cannot open " + path.string() + " for writing");
  out << text;
  out.flush();
  if (!out) throw Error(ErrorCode::Io, "failed writing " + path.string());
}

const char* problem_name(ProblemKind kind) {
  return kind == ProblemKind::Nleig ? "nleig" : "brockett";
}

}  // namespace

void RunSpec::validate() const {
  std::ostringstream os;
  if (p < 1 || n < p) {
    os << "need n >= p >= 1, got n=" << n << " p=" << p;
  } else if (repeats < 1) {
    os << "repeats must be >= 1, got " << repeats;
  } else if (!(alpha >= 0.0) || !std::isfinite(alpha)) {
    os << "alpha must be finite and >= 0, got " << alpha;
  } else if (beta_override && !(*beta_override > 0.0 && std::isfinite(*beta_override))) {
    os << "beta must be positive, got " << *beta_override;
  } else if (!(grad_tol >= 0.0)) {
    os << "grad-tol must be >= 0, got " << grad_tol;
  } else if (max_iters < 0) {
    os << "max-iters must be >= 0, got " << max_iters;
  } else {
    return;
  }
  throw Error(ErrorCode::InvalidArgument, "invalid run spec: " + os.str());
}

SmoothObjective make_problem(const RunSpec& spec) {
  switch (spec.problem) {
    case ProblemKind::Nleig:
      return nleig_make(spec.n, spec.p, spec.alpha);
    case ProblemKind::Brockett:
      if (spec.instance == BrockettInstance::Diagonal) return brockett_diagonal(spec.n, spec.p);
      return brockett_random(spec.n, spec.p, spec.seed ^ kProblemStream);
  }
  throw Error(ErrorCode::InvalidArgument, "unknown problem kind");
}

std::string solver_label(SolverKind kind) {
  return kind == SolverKind::FrCg ? "ExPen-CG" : "ExPen-GD";
}

BenchmarkResult run_benchmark(const RunSpec& spec) {
  spec.validate();
  const SmoothObjective objective = make_problem(spec);

  SolverConfig config;
  config.grad_tol = spec.grad_tol;
  config.max_iters = spec.max_iters;
  config.trace_enabled = spec.trace;

  BenchmarkResult result;
  result.spec = spec;
  result.row.solver = solver_label(spec.solver);
  result.f_ref = std::numeric_limits<double>::infinity();

  for (Index r = 0; r < spec.repeats; ++r) {
    const std::uint64_t seed = spec.seed + static_cast<std::uint64_t>(r);
    const Matrix x0 = random_stiefel(RandomSpec{spec.n, spec.p, seed});
    const double beta = spec.beta_override ? *spec.beta_override
                                           : ExPenModel::default_beta(objective, x0);
    const ExPenModel model(objective, beta);

    RepeatOutcome outcome;
    outcome.seed = seed;
    outcome.report = spec.solver == SolverKind::FrCg ? frcg_solve(model, x0, config)
                                                     : gd_solve(model, x0, config);
    if (outcome.report.termination == Termination::LineSearchFailure) ++result.failures;
    result.f_ref = std::min(result.f_ref, outcome.report.fval);
    result.runs.push_back(std::move(outcome));
  }

  const double count = static_cast<double>(result.runs.size());
  for (const RepeatOutcome& run : result.runs) {
    result.row.fval += run.report.fval / count;
    result.row.iteration += static_cast<double>(run.report.iterations) / count;
    result.row.stationarity += run.report.stationarity / count;
    result.row.feasibility += run.report.feasibility / count;
    result.row.cpu_seconds += run.report.wall_seconds / count;
  }
  return result;
}

std::string format_float(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.9g", v);
  return buf;
}

std::string table_csv(const std::vector<TableRow>& rows) {
  std::string out = kTableHeader;
  out += '\n';
  for (const TableRow& row : rows) {
    out += row.solver + ',' + format_float(row.fval) + ',' + format_float(row.iteration) + ',' +
           format_float(row.stationarity) + ',' + format_float(row.feasibility) + ',' +
           format_float(row.cpu_seconds) + '\n';
  }
  return out;
}

std::string trace_csv(const std::vector<IterTrace>& trace, double f_ref) {
  std::string out = kTraceHeader;
  out += '\n';
  for (const IterTrace& t : trace) {
    out += std::to_string(t.k) + ',' + format_float(t.h_val) + ',' +
           format_float(t.grad_h_norm) + ',' + format_float(t.feas) + ',' +
           format_float(t.fval - f_ref) + '\n';
  }
  return out;
}

std::string table_json(const BenchmarkResult& result, const OutputOptions& options) {
  const RunSpec& spec = result.spec;
  json doc;
  doc["rows"] = json::array({row_to_json(scrub_timing(result.row, options))});
  doc["f_ref"] = result.f_ref;
  doc["failures"] = result.failures;

  json s{{"problem", problem_name(spec.problem)},
         {"n", spec.n},
         {"p", spec.p},
         {"seed", spec.seed},
         {"repeats", spec.repeats},
         {"grad_tol", spec.grad_tol},
         {"max_iters", spec.max_iters},
         {"solver", spec.solver == SolverKind::FrCg ? "frcg" : "gd"}};
  if (spec.problem == ProblemKind::Nleig) s["alpha"] = spec.alpha;
  if (spec.problem == ProblemKind::Brockett) {
    s["instance"] = spec.instance == BrockettInstance::Diagonal ? "diagonal" : "random";
  }
  s["beta"] = spec.beta_override ? json(*spec.beta_override) : json(nullptr);
  doc["spec"] = s;

  json runs = json::array();
  for (const RepeatOutcome& run : result.runs) {
    const SolverReport& r = run.report;
    runs.push_back({{"seed", run.seed},
                    {"beta", r.beta},
                    {"termination", to_string(r.termination)},
                    {"iterations", r.iterations},
                    {"fval", r.fval},
                    {"stationarity", r.stationarity},
                    {"feasibility", r.feasibility},
                    {"wall_seconds", options.include_timing ? r.wall_seconds : 0.0},
                    {"h", r.h_value},
                    {"grad_h_norm", r.certificate.grad_h_norm},
                    {"iterate_feasibility", r.certificate.feasibility},
                    {"certified_bound", r.certificate.certified_bound},
                    {"in_certified_region", r.certificate.in_certified_region},
                    {"descent_held", r.descent_held},
                    {"step_bound_held", r.step_bound_held},
                    {"restarts", r.restarts}});
  }
  doc["runs"] = std::move(runs);
  return doc.dump(2) + "\n";
}

std::vector<TableRow> rows_from_json(const std::string& text) {
  std::vector<TableRow> rows;
  try {
    const json doc = json::parse(text);
    for (const json& j : doc.at("rows")) {
      TableRow row;
      row.solver = j.at("solver").get<std::string>();
      row.fval = j.at("fval").get<double>();
      row.iteration = j.at("iteration").get<double>();
      row.stationarity = j.at("stationarity").get<double>();
      row.feasibility = j.at("feasibility").get<double>();
      row.cpu_seconds = j.at("cpu_seconds").get<double>();
      rows.push_back(std::move(row));
    }
  } catch (const json::exception& e) {
    throw Error(ErrorCode::InvalidArgument, std::string("malformed table JSON: ") + e.what());
  }
  return rows;
}

std::vector<std::filesystem::path> emit_outputs(const BenchmarkResult& result,
                                                const std::filesystem::path& dir,
                                                const OutputOptions& options) {
  if (result.runs.empty()) throw Error(ErrorCode::InvalidArgument, "emit_outputs: no rows");
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw Error(ErrorCode::Io, "cannot create " + dir.string() + ": " + ec.message());

  std::vector<std::filesystem::path> written;
  if (options.format != OutputFormat::Json) {
    const auto path = dir / "table.csv";
    write_file(path, table_csv({scrub_timing(result.row, options)}));
    written.push_back(path);
  }
  if (options.format != OutputFormat::Csv) {
    const auto path = dir / "table.json";
    write_file(path, table_json(result, options));
    written.push_back(path);
  }
  if (result.spec.trace) {
    for (std::size_t r = 0; r < result.runs.size(); ++r) {
      const auto path = dir / ("trace_r" + std::to_string(r) + ".csv");
      write_file(path, trace_csv(result.runs[r].report.trace, result.f_ref));
      written.push_back(path);
    }
    const auto path = dir / "trace_meta.json";
    write_file(path, json{{"f_ref", result.f_ref}, {"fval_gap", "f(X_k) - f_ref"}}.dump(2) + "\n");
    written.push_back(path);
  }
  return written;
}

}  // namespace expen::bench
