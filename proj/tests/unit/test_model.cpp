#include "doctest.h"

#include "expen/error.hpp"
#include "expen/model.hpp"
#include "expen/problems.hpp"
#include "expen/stiefel.hpp"
#include "expen/verify.hpp"
#include "helpers.hpp"

#include <atomic>
#include <memory>

using namespace expen;
using expen::testing::gaussian;
using expen::testing::rel_diff;

namespace {

Matrix scalar(double v) { return Matrix::Constant(1, 1, v); }

// f(y) = y on 1x1 matrices.
SmoothObjective identity_1x1() { return linear_objective(scalar(1.0)); }

}  // namespace

TEST_CASE("apen_map examples") {
  const Matrix q = random_stiefel({7, 3, 1});
  CHECK((apen_map(q) - q).norm() <= 1e-14);
  CHECK(apen_map(Matrix::Zero(4, 2)).norm() == 0.0);
  CHECK(apen_map(scalar(2.0))(0, 0) == -1.0);
}

TEST_CASE("jx_apply examples") {
  const Matrix x = random_stiefel({6, 3, 2});
  const Matrix d = tangent_project(x, gaussian(6, 3, 3));
  CHECK((jx_apply(x, d) - d).norm() <= 1e-14 * (1.0 + d.norm()));
  CHECK(jx_apply(x, Matrix::Zero(6, 3)).norm() == 0.0);
  CHECK_THROWS_AS(jx_apply(x, Matrix::Zero(5, 3)), Error);
}

TEST_CASE("jx_apply is the derivative of apen_map (first-order Taylor)") {
  const Matrix x = gaussian(6, 3, 4, 0.5);
  const Matrix d = gaussian(6, 3, 5);
  const Matrix jd = jx_apply(x, d);
  auto remainder = [&](double t) {
    return ((apen_map(x + t * d) - apen_map(x)) / t - jd).norm();
  };
  const double r1 = remainder(1e-3);
  const double r2 = remainder(1e-4);
  // O(t): a tenfold smaller step gives a tenfold smaller remainder.
  CHECK(r1 / r2 == doctest::Approx(10.0).epsilon(0.05));
  CHECK(r2 <= 1e-3 * jd.norm());
}

TEST_CASE("expen_value examples") {
  const SmoothObjective nleig = nleig_make(8, 3, 1.0);
  const ExPenModel model(nleig, 5.0);
  const Matrix q = random_stiefel({8, 3, 6});
  CHECK(rel_diff(model.value(q), nleig.value(q)) <= 1e-12);

  const ExPenModel zero(constant_objective(4, 1), 3.0);
  CHECK(zero.value(Matrix::Zero(4, 1)) == doctest::Approx(0.75));

  const ExPenModel scalar_model(identity_1x1(), 4.0);
  CHECK(scalar_model.value(scalar(2.0)) == doctest::Approx(8.0).epsilon(1e-15));
}

TEST_CASE("expen_grad examples") {
  const SmoothObjective nleig = nleig_make(8, 3, 1.0);
  const ExPenModel model(nleig, 5.0);
  const Matrix q = random_stiefel({8, 3, 7});
  const Matrix g = nleig.gradient(q);
  const Matrix riem = g - q * sym(q.transpose() * g);
  CHECK(rel_diff(model.gradient(q), riem) <= 1e-12);

  const ExPenModel flat(constant_objective(5, 2, 3.0), 2.0);
  CHECK(flat.gradient(Matrix::Zero(5, 2)).norm() == 0.0);

  const ExPenModel scalar_model(identity_1x1(), 4.0);
  CHECK(scalar_model.gradient(scalar(2.0))(0, 0) == doctest::Approx(19.5).epsilon(1e-15));
  // the same value by central differences
  const double h = 1e-6;
  const double fd =
      (scalar_model.value(scalar(2.0 + h)) - scalar_model.value(scalar(2.0 - h))) / (2 * h);
  CHECK(fd == doctest::Approx(19.5).epsilon(1e-8));
}

TEST_CASE("evaluate shares one objective gradient call between value and gradient") {
  auto grads = std::make_shared<std::atomic<int>>(0);
  SmoothObjective obj = nleig_make(10, 3, 1.0);
  auto inner_grad = obj.gradient;
  obj.gradient = [grads, inner_grad](const Matrix& x) {
    ++*grads;
    return inner_grad(x);
  };
  const ExPenModel model(obj, 2.0);
  const Matrix x = gaussian(10, 3, 8, 0.3);
  const PenaltyEval e = model.evaluate(x);
  CHECK(grads->load() == 1);
  CHECK(rel_diff(e.value, model.value(x)) <= 1e-15);
  CHECK(rel_diff(e.gradient, model.gradient(x)) <= 1e-15);
}

TEST_CASE("expen_hess_vec examples") {
  SUBCASE("constant f at the origin collapses to -beta D") {
    const ExPenModel model(constant_objective(4, 2), 7.0);
    const Matrix d = gaussian(4, 2, 9);
    CHECK((model.hess_vec(Matrix::Zero(4, 2), d) + 7.0 * d).norm() <= 1e-14 * d.norm());
  }
  SUBCASE("tangent quadratic form equals the Riemannian Hessian form") {
    const SmoothObjective obj = nleig_make(7, 2, 1.0);
    const ExPenModel model(obj, 3.0);
    const Matrix x = random_stiefel({7, 2, 10});
    for (std::uint64_t s = 0; s < 5; ++s) {
      const Matrix d = tangent_project(x, gaussian(7, 2, 20 + s));
      const double lhs = inner(d, model.hess_vec(x, d));
      const double rhs = riemannian_hess_quadform(obj, x, d);
      CHECK(rel_diff(lhs, rhs) <= 1e-12);
    }
  }
  SUBCASE("matches central differences of the gradient") {
    const ExPenModel model(nleig_make(6, 3, 1.0), 4.0);
    const Matrix x = gaussian(6, 3, 11, 0.4);
    const auto report = verify::fd_hessvec_check(
        [&](const Matrix& y) { return model.gradient(y); },
        [&](const Matrix& y, const Matrix& d) { return model.hess_vec(y, d); }, x, 10, 3,
        1e-5);
    CHECK(report.passed);
  }
  SUBCASE("missing Hessian oracle is a capability error") {
    SmoothObjective obj = nleig_make(5, 2, 1.0);
    obj.hess_vec = nullptr;
    const ExPenModel model(obj, 1.0);
    try {
      model.hess_vec(Matrix::Zero(5, 2), Matrix::Zero(5, 2));
      FAIL("expected an exception");
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::Capability);
    }
  }
}

TEST_CASE("model construction") {
  CHECK_THROWS_AS(ExPenModel(constant_objective(3, 2), 0.0), Error);
  CHECK_THROWS_AS(ExPenModel(constant_objective(3, 2), -1.0), Error);
  const SmoothObjective obj = nleig_make(9, 2, 1.0);
  const Matrix x0 = random_stiefel({9, 2, 12});
  const ExPenModel m = ExPenModel::with_default_beta(obj, x0);
  CHECK(m.beta() == doctest::Approx(obj.gradient(x0).norm() / 10.0));
  CHECK_THROWS_AS(m.value(Matrix::Zero(8, 2)), Error);
}

TEST_CASE("Hessian bilinear form is symmetric") {
  const ExPenModel model(nleig_make(8, 3, 1.0), 6.0);
  for (std::uint64_t s = 0; s < 10; ++s) {
    const Matrix x = gaussian(8, 3, 30 + s, 0.4);
    const Matrix d1 = gaussian(8, 3, 40 + s);
    const Matrix d2 = gaussian(8, 3, 50 + s);
    const double a = inner(d1, model.hess_vec(x, d2));
    const double b = inner(d2, model.hess_vec(x, d1));
    CHECK(std::abs(a - b) <= 1e-8 * (std::abs(a) + std::abs(b)));
  }
}

TEST_CASE("gradient dominates the scaled infeasibility near the manifold") {
  const SmoothObjective obj = brockett_random(9, 3, 13);
  const Matrix q0 = random_stiefel({9, 3, 14});
  const double beta = 100.0 * (1.0 + obj.gradient(q0).norm());
  const ExPenModel model(obj, beta);
  int sampled = 0;
  for (std::uint64_t s = 0; s < 40; ++s) {
    const Matrix q = random_stiefel({9, 3, 100 + s});
    const Matrix x = q + gaussian(9, 3, 200 + s, 0.02);
    const double feas = feasibility(x);
    if (feas > 1.0 / 6.0) continue;
    ++sampled;
    CHECK(model.gradient(x).norm() >= 0.25 * beta * feas);
  }
  CHECK(sampled >= 30);
}
