#include "expen/error.hpp"
#include "expen/solvers.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace expen {
namespace {

constexpr int kMaxZoom = 60;
constexpr double kMaxStep = 1e10;
// Relative rounding level of phi values.
constexpr double kPhiNoise = 1e-14;

struct Bracket {
  double t;
  LineSample s;
};

// Minimizer of the cubic matching phi and phi' at both ends, kept away from
// the endpoints; falls back to bisection.
double interpolate(const Bracket& lo, const Bracket& hi) {
  const double a = lo.t;
  const double b = hi.t;
  const double mid = 0.5 * (a + b);
  const double width = std::abs(b - a);
  if (!std::isfinite(hi.s.phi) || !std::isfinite(hi.s.dphi)) return mid;

  const double d1 = lo.s.dphi + hi.s.dphi - 3.0 * (lo.s.phi - hi.s.phi) / (a - b);
  const double disc = d1 * d1 - lo.s.dphi * hi.s.dphi;
  if (!(disc >= 0.0)) return mid;
  const double d2 = std::copysign(std::sqrt(disc), b - a);
  const double denom = hi.s.dphi - lo.s.dphi + 2.0 * d2;
  if (denom == 0.0) return mid;
  const double t = b - (b - a) * (hi.s.dphi + d2 - d1) / denom;

  const double left = std::min(a, b) + 0.1 * width;
  const double right = std::max(a, b) - 0.1 * width;
  if (!std::isfinite(t) || t < left || t > right) return mid;
  return t;
}

[[noreturn]] void fail(const std::string& why) {
  throw Error(ErrorCode::LineSearchFailure, "strong_wolfe: " + why);
}

}  // namespace

LineSearchResult strong_wolfe(const LineFunction& f, LineSample at_zero,
                              const SolverConfig& config, double initial_step) {
  const double phi0 = at_zero.phi;
  const double slope0 = at_zero.dphi;
  if (!(slope0 < 0.0)) {
    std::ostringstream os;
    os << "strong_wolfe: phi'(0) = " << slope0 << " is not a descent slope";
    throw Error(ErrorCode::NonDescent, os.str());
  }
  if (!(initial_step > 0.0) || !std::isfinite(initial_step)) {
    throw Error(ErrorCode::InvalidArgument, "strong_wolfe: initial step must be positive");
  }

  const double delta = config.delta;
  const double curvature_bound = -config.sigma * slope0;
  int evaluations = 0;

  // phi(b) - phi(a). Differences below the rounding level of phi are replaced
  // by the trapezoid estimate from the derivatives.
  const double noise = kPhiNoise * (1.0 + std::abs(phi0));
  auto rise = [&](const Bracket& a, const Bracket& b) {
    const double d = b.s.phi - a.s.phi;
    if (std::abs(d) > noise) return d;
    return 0.5 * (b.t - a.t) * (a.s.dphi + b.s.dphi);
  };
  const Bracket origin{0.0, at_zero};
  auto sufficient = [&](const Bracket& b) { return rise(origin, b) <= delta * b.t * slope0; };

  auto zoom = [&](Bracket lo, Bracket hi) -> LineSearchResult {
    for (int j = 0; j < kMaxZoom; ++j) {
      const double t = interpolate(lo, hi);
      const LineSample s = f(t);
      ++evaluations;
      const Bracket cur{t, s};
      if (!std::isfinite(s.phi) || !sufficient(cur) || rise(lo, cur) >= 0.0) {
        hi = cur;
        continue;
      }
      if (std::abs(s.dphi) <= curvature_bound) return {t, s, evaluations};
      if (s.dphi * (hi.t - lo.t) >= 0.0) hi = lo;
      lo = cur;
    }
    fail("zoom did not converge in 60 iterations");
  };

  Bracket prev = origin;
  double t = initial_step;
  for (int i = 0;; ++i) {
    if (t > kMaxStep) fail("step exceeded 1e10 without bracketing");
    const LineSample s = f(t);
    ++evaluations;
    const Bracket cur{t, s};
    if (!std::isfinite(s.phi) || !sufficient(cur) || (i > 0 && rise(prev, cur) >= 0.0)) {
      return zoom(prev, cur);
    }
    if (std::abs(s.dphi) <= curvature_bound) return {t, s, evaluations};
    if (s.dphi >= 0.0) return zoom(cur, prev);
    prev = cur;
    t *= 2.0;
  }
}

double strong_wolfe(const std::function<double(double)>& phi,
                    const std::function<double(double)>& dphi,
                    const SolverConfig& config) {
  const LineFunction f = [&](double t) { return LineSample{phi(t), dphi(t)}; };
  return strong_wolfe(f, LineSample{phi(0.0), dphi(0.0)}, config, config.initial_step).step;
}

}  // namespace expen
