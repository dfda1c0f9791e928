#include "doctest.h"

#include "expen/expen.h"

#include <cmath>
#include <cstring>
#include <filesystem>
#include <string>
#include <vector>

namespace {

double frob_dot(const std::vector<double>& a, const std::vector<double>& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

struct ObjectiveHandle {
  expen_objective* ptr = nullptr;
  ~ObjectiveHandle() { expen_objective_free(ptr); }
};
struct ModelHandle {
  expen_model* ptr = nullptr;
  ~ModelHandle() { expen_model_free(ptr); }
};
struct ReportHandle {
  expen_report* ptr = nullptr;
  ~ReportHandle() { expen_report_free(ptr); }
};

}  // namespace

TEST_CASE("status strings and freeing null") {
  CHECK(std::string(expen_status_string(EXPEN_OK)) == "ok");
  CHECK(std::strlen(expen_status_string(EXPEN_ERR_DEGENERATE_PROJECTION)) > 0);
  expen_objective_free(nullptr);
  expen_model_free(nullptr);
  expen_report_free(nullptr);
}

TEST_CASE("invalid arguments report status and message") {
  expen_objective* obj = nullptr;
  CHECK(expen_objective_nleig(2, 3, 1.0, &obj) == EXPEN_ERR_DIMENSION);
  CHECK(obj == nullptr);
  CHECK(std::strlen(expen_last_error()) > 0);
  CHECK(expen_objective_nleig(4, 2, 1.0, nullptr) == EXPEN_ERR_INVALID_ARGUMENT);
  CHECK(expen_objective_nleig(4, 2, -1.0, &obj) == EXPEN_ERR_INVALID_ARGUMENT);

  ObjectiveHandle c;
  REQUIRE(expen_objective_constant(3, 2, 0.0, &c.ptr) == EXPEN_OK);
  expen_model* model = nullptr;
  CHECK(expen_model_create(c.ptr, 0.0, &model) == EXPEN_ERR_INVALID_ARGUMENT);
  CHECK(model == nullptr);
}

TEST_CASE("row-major layout at the boundary") {
  // B = diag(1, 2, 3), C = diag(2, 1); X has rows (1, 0), (0, 0), (0, 1).
  ObjectiveHandle obj;
  REQUIRE(expen_objective_brockett_diagonal(3, 2, &obj.ptr) == EXPEN_OK);
  size_t n = 0, p = 0;
  REQUIRE(expen_objective_dims(obj.ptr, &n, &p) == EXPEN_OK);
  CHECK(n == 3);
  CHECK(p == 2);
  const std::vector<double> x{1, 0, 0, 0, 0, 1};
  double f = 0.0;
  REQUIRE(expen_objective_value(obj.ptr, x.data(), &f) == EXPEN_OK);
  CHECK(f == doctest::Approx(0.5 * (1.0 * 2.0 + 3.0 * 1.0)));
  std::vector<double> g(6);
  REQUIRE(expen_objective_gradient(obj.ptr, x.data(), g.data()) == EXPEN_OK);
  // grad = B X C, row-major.
  const std::vector<double> expected{2, 0, 0, 0, 0, 3};
  for (int i = 0; i < 6; ++i) CHECK(g[i] == doctest::Approx(expected[i]));
}

TEST_CASE("explicit Brockett data and symmetry check") {
  const std::vector<double> b{2, 1, 0, 1, 3, 0, 0, 0, 1};
  const std::vector<double> c{1, 0, 0, 2};
  ObjectiveHandle obj;
  REQUIRE(expen_objective_brockett(3, 2, b.data(), c.data(), &obj.ptr) == EXPEN_OK);
  const std::vector<double> asym{2, 1, 0, 0, 3, 0, 0, 0, 1};
  expen_objective* bad = nullptr;
  CHECK(expen_objective_brockett(3, 2, asym.data(), c.data(), &bad) ==
        EXPEN_ERR_PRECONDITION);
}

TEST_CASE("model oracles through the C API") {
  ObjectiveHandle obj;
  REQUIRE(expen_objective_nleig(6, 2, 1.0, &obj.ptr) == EXPEN_OK);
  ModelHandle model;
  REQUIRE(expen_model_create(obj.ptr, 2.5, &model.ptr) == EXPEN_OK);
  double beta = 0.0;
  REQUIRE(expen_model_beta(model.ptr, &beta) == EXPEN_OK);
  CHECK(beta == 2.5);

  std::vector<double> x(12);
  REQUIRE(expen_random_stiefel(6, 2, 3, x.data()) == EXPEN_OK);
  double feas = 1.0;
  REQUIRE(expen_feasibility(6, 2, x.data(), &feas) == EXPEN_OK);
  CHECK(feas <= 1e-13);

  for (double& v : x) v *= 1.1;
  std::vector<double> d(12);
  for (int i = 0; i < 12; ++i) d[i] = std::sin(1.0 + i);
  const double nd = std::sqrt(frob_dot(d, d));
  for (double& v : d) v /= nd;

  std::vector<double> g(12), hv(12), gp(12), gm(12);
  REQUIRE(expen_model_gradient(model.ptr, x.data(), g.data()) == EXPEN_OK);
  REQUIRE(expen_model_hess_vec(model.ptr, x.data(), d.data(), hv.data()) == EXPEN_OK);

  const double t = 1e-6;
  std::vector<double> xp(x), xm(x);
  for (int i = 0; i < 12; ++i) {
    xp[i] += t * d[i];
    xm[i] -= t * d[i];
  }
  double hp = 0.0, hm = 0.0;
  REQUIRE(expen_model_value(model.ptr, xp.data(), &hp) == EXPEN_OK);
  REQUIRE(expen_model_value(model.ptr, xm.data(), &hm) == EXPEN_OK);
  const double fd = (hp - hm) / (2 * t);
  CHECK(std::abs(fd - frob_dot(g, d)) <= 1e-5 * (1.0 + std::sqrt(frob_dot(g, g))));

  REQUIRE(expen_model_gradient(model.ptr, xp.data(), gp.data()) == EXPEN_OK);
  REQUIRE(expen_model_gradient(model.ptr, xm.data(), gm.data()) == EXPEN_OK);
  double err = 0.0;
  for (int i = 0; i < 12; ++i) {
    const double e = (gp[i] - gm[i]) / (2 * t) - hv[i];
    err += e * e;
  }
  CHECK(std::sqrt(err) <= 1e-4 * (1.0 + std::sqrt(frob_dot(hv, hv))));

  expen_stationarity st{};
  REQUIRE(expen_stationarity_report(model.ptr, x.data(), &st) == EXPEN_OK);
  CHECK(st.certified_bound == doctest::Approx(2.0 * st.grad_h_norm));
  CHECK(st.grad_h_norm == doctest::Approx(std::sqrt(frob_dot(g, g))));
}

TEST_CASE("default beta and projection") {
  ObjectiveHandle obj;
  REQUIRE(expen_objective_brockett_random(5, 2, 7, &obj.ptr) == EXPEN_OK);
  std::vector<double> x(10);
  REQUIRE(expen_random_stiefel(5, 2, 1, x.data()) == EXPEN_OK);
  std::vector<double> g(10);
  REQUIRE(expen_objective_gradient(obj.ptr, x.data(), g.data()) == EXPEN_OK);
  ModelHandle model;
  REQUIRE(expen_model_create_default_beta(obj.ptr, x.data(), &model.ptr) == EXPEN_OK);
  double beta = 0.0;
  REQUIRE(expen_model_beta(model.ptr, &beta) == EXPEN_OK);
  CHECK(beta == doctest::Approx(std::sqrt(frob_dot(g, g)) / 10.0));

  std::vector<double> y(10), q(10);
  for (int i = 0; i < 10; ++i) y[i] = 2.0 * x[i];
  REQUIRE(expen_project_stiefel(5, 2, y.data(), q.data()) == EXPEN_OK);
  for (int i = 0; i < 10; ++i) CHECK(q[i] == doctest::Approx(x[i]).epsilon(1e-12));

  const std::vector<double> zero(10, 0.0);
  CHECK(expen_project_stiefel(5, 2, zero.data(), q.data()) == EXPEN_ERR_DEGENERATE_PROJECTION);
}

TEST_CASE("solve, report and trace") {
  ObjectiveHandle obj;
  REQUIRE(expen_objective_brockett_diagonal(3, 2, &obj.ptr) == EXPEN_OK);
  ModelHandle model;
  REQUIRE(expen_model_create(obj.ptr, 10.0, &model.ptr) == EXPEN_OK);
  std::vector<double> x0(6);
  REQUIRE(expen_random_stiefel(3, 2, 4, x0.data()) == EXPEN_OK);

  expen_solver_config cfg;
  expen_solver_config_default(&cfg);
  CHECK(cfg.delta == 1e-4);
  CHECK(cfg.sigma == 0.4);
  CHECK(cfg.grad_tol == 1e-3);
  CHECK(cfg.max_iters == 10000);
  cfg.grad_tol = 1e-7;
  cfg.trace_enabled = 1;

  ReportHandle report;
  REQUIRE(expen_solve(model.ptr, x0.data(), &cfg, &report.ptr) == EXPEN_OK);
  expen_report_summary s{};
  REQUIRE(expen_report_get_summary(report.ptr, &s) == EXPEN_OK);
  CHECK(s.termination == EXPEN_TERM_GRAD_TOL);
  CHECK(s.feasibility <= 1e-12);
  CHECK(s.beta == 10.0);
  CHECK(s.descent_held == 1);

  std::vector<double> xf(6);
  REQUIRE(expen_report_get_final_point(report.ptr, xf.data()) == EXPEN_OK);
  double f = 0.0;
  REQUIRE(expen_objective_value(obj.ptr, xf.data(), &f) == EXPEN_OK);
  CHECK(f == doctest::Approx(s.fval).epsilon(1e-14));

  size_t len = 0;
  REQUIRE(expen_report_trace_length(report.ptr, &len) == EXPEN_OK);
  CHECK(len == s.iterations + 1);
  expen_trace_row first{}, last{};
  REQUIRE(expen_report_trace_row(report.ptr, 0, &first) == EXPEN_OK);
  REQUIRE(expen_report_trace_row(report.ptr, len - 1, &last) == EXPEN_OK);
  CHECK(first.k == 0);
  CHECK(last.h_val <= first.h_val);
  expen_trace_row none{};
  CHECK(expen_report_trace_row(report.ptr, len, &none) == EXPEN_ERR_INVALID_ARGUMENT);

  cfg.sigma = 2.0;
  expen_report* bad = nullptr;
  CHECK(expen_solve(model.ptr, x0.data(), &cfg, &bad) == EXPEN_ERR_INVALID_ARGUMENT);
  CHECK(bad == nullptr);
}

TEST_CASE("benchmark through the C API") {
  expen_run_spec spec;
  expen_run_spec_default(&spec);
  CHECK(spec.n == 250);
  CHECK(spec.p == 50);
  CHECK(spec.repeats == 10);
  spec.problem = EXPEN_PROBLEM_BROCKETT;
  spec.instance = EXPEN_BROCKETT_DIAGONAL;
  spec.n = 4;
  spec.p = 2;
  spec.repeats = 3;
  spec.has_beta = 1;
  spec.beta = 10.0;
  spec.grad_tol = 1e-7;

  const auto dir = std::filesystem::temp_directory_path() / "expen_capi_bench";
  std::filesystem::remove_all(dir);
  expen_bench_outcome out{};
  REQUIRE(expen_benchmark_run(&spec, dir.string().c_str(), EXPEN_FORMAT_BOTH, 0, &out) ==
          EXPEN_OK);
  CHECK(std::string(out.row.solver) == "ExPen-CG");
  CHECK(out.repeats == 3);
  CHECK(out.failures == 0);
  CHECK(out.row.cpu_seconds == 0.0);
  CHECK(out.f_ref <= out.row.fval + 1e-12);
  CHECK(std::filesystem::exists(dir / "table.csv"));
  CHECK(std::filesystem::exists(dir / "table.json"));
  std::filesystem::remove_all(dir);

  spec.repeats = 0;
  CHECK(expen_benchmark_run(&spec, nullptr, EXPEN_FORMAT_CSV, 1, &out) ==
        EXPEN_ERR_INVALID_ARGUMENT);
}
