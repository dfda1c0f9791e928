#pragma once

// Benchmark protocol: random Stiefel starts, beta from the initial gradient,
// solve, project, average over repeats, and write table/trace files.

#include "expen/model.hpp"
#include "expen/solvers.hpp"

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace expen::bench {

enum class ProblemKind { Nleig, Brockett };
enum class BrockettInstance { Random, Diagonal };
enum class SolverKind { FrCg, Gd };
enum class OutputFormat { Csv, Json, Both };

struct RunSpec {
  ProblemKind problem = ProblemKind::Nleig;
  Index n = 250;
  Index p = 50;
  double alpha = 1.0;
  std::uint64_t seed = 0;
  Index repeats = 10;
  std::optional<double> beta_override;
  double grad_tol = 1e-3;
  Index max_iters = 10000;
  SolverKind solver = SolverKind::FrCg;
  BrockettInstance instance = BrockettInstance::Random;
  bool trace = false;

  /// Throws Error(InvalidArgument) on n < p, p < 1, repeats < 1 and similar.
  void validate() const;
};

/// Averaged outcome over repeats.
struct TableRow {
  std::string solver;
  double fval = 0.0;
  double iteration = 0.0;
  double stationarity = 0.0;
  double feasibility = 0.0;
  double cpu_seconds = 0.0;

  bool operator==(const TableRow&) const = default;
};

struct RepeatOutcome {
  std::uint64_t seed = 0;  // seed of the initial point
  SolverReport report;
};

struct BenchmarkResult {
  RunSpec spec;
  TableRow row;
  std::vector<RepeatOutcome> runs;
  double f_ref = 0.0;  // best projected fval over repeats
  Index failures = 0;  // repeats ending in LineSearchFailure

  bool all_failed() const { return failures == static_cast<Index>(runs.size()); }
};

SmoothObjective make_problem(const RunSpec& spec);
std::string solver_label(SolverKind kind);

/// Repeat r starts from random_stiefel(seed + r). The random Brockett matrices
/// are drawn from a stream derived from `seed` but distinct from the starts.
BenchmarkResult run_benchmark(const RunSpec& spec);

struct OutputOptions {
  OutputFormat format = OutputFormat::Both;
  /// When false, timing columns are written as 0 so that reruns are
  /// byte-identical.
  bool include_timing = true;
};

inline constexpr const char* kTableHeader =
    "solver,fval,iteration,stationarity,feasibility,cpu_seconds";
inline constexpr const char* kTraceHeader = "k,h,grad_h_norm,feasibility,fval_gap";

/// %.9g
std::string format_float(double v);

std::string table_csv(const std::vector<TableRow>& rows);
std::string trace_csv(const std::vector<IterTrace>& trace, double f_ref);

std::string table_json(const BenchmarkResult& result, const OutputOptions& options);
/// Reads back the rows written by table_json.
std::vector<TableRow> rows_from_json(const std::string& text);

/// Writes table.csv and/or table.json, plus trace_r<r>.csv per repeat and
/// trace_meta.json when the run was traced. Returns the written paths.
std::vector<std::filesystem::path> emit_outputs(const BenchmarkResult& result,
                                                const std::filesystem::path& dir,
                                                const OutputOptions& options);

}  // namespace expen::bench
