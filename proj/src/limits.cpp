#include "emalg/limits.hpp"

#include <cmath>
#include <sstream>

namespace emalg {

double AbsoluteSchedule::epsilon(int k) const {
  return start * std::pow(ratio, k);
}

void validate_schedule(const AbsoluteSchedule& sched) {
  if (!std::isfinite(sched.start) || sched.start <= 0.0)
    throw std::invalid_argument("schedule start must be positive and finite");
  if (!(sched.ratio > 0.0 && sched.ratio < 1.0))
    throw std::invalid_argument("schedule ratio must lie in (0, 1)");
  if (sched.max_steps < 3)
    throw std::invalid_argument(
        "schedule needs at least 3 steps to see two consecutive residuals");
}

ConvergenceReport limit_along_schedule(const std::function<Point(double)>& f,
                                       const AbsoluteSchedule& sched, double tol,
                                       const MetricFn& metric) {
  validate_schedule(sched);
  if (!std::isfinite(tol) || tol <= 0.0)
    throw std::invalid_argument("limit tolerance must be positive and finite");

  ConvergenceReport rep;
  rep.tol = tol;
  rep.iterates.push_back(f(sched.epsilon(0)));
  int consecutive = 0;
  for (int k = 1; k < sched.max_steps; ++k) {
    rep.iterates.push_back(f(sched.epsilon(k)));
    const double r = metric(rep.iterates[k - 1], rep.iterates[k]);
    rep.residuals.push_back(r);
    consecutive = (r < tol) ? consecutive + 1 : 0;
    if (consecutive >= 2) {
      rep.converged = true;
      break;
    }
  }
  rep.steps_used = static_cast<int>(rep.iterates.size());
  if (rep.converged) rep.limit = rep.iterates.back();
  return rep;
}

ConvergenceReport emergent_sigma(const AlgebraHandle& alg,
                                 const AbsoluteSchedule& sched, const Point& e,
                                 const Point& y, const Point& z, double tol) {
  return limit_along_schedule(
      [&](double eps) { return approx_sigma(alg, Scalar(eps), e, y, z); }, sched,
      tol, alg.metric);
}

ConvergenceReport emergent_delta(const AlgebraHandle& alg,
                                 const AbsoluteSchedule& sched, const Point& e,
                                 const Point& y, const Point& z, double tol) {
  return limit_along_schedule(
      [&](double eps) { return approx_delta(alg, Scalar(eps), e, y, z); }, sched,
      tol, alg.metric);
}

ConvergenceReport emergent_inv(const AlgebraHandle& alg,
                               const AbsoluteSchedule& sched, const Point& e,
                               const Point& y, double tol) {
  return limit_along_schedule(
      [&](double eps) { return approx_inv(alg, Scalar(eps), e, y); }, sched, tol,
      alg.metric);
}

ConvergenceReport infinitesimal_circ(const AlgebraHandle& alg,
                                     const AbsoluteSchedule& sched, const Point& e,
                                     Scalar a, const Point& x, const Point& y,
                                     double tol) {
  return limit_along_schedule(
      [&](double c) { return relative_circ(alg, e, Scalar(c), a, x, y); }, sched,
      tol, alg.metric);
}

namespace {

Point require_limit(ConvergenceReport rep, const char* op) {
  if (!rep.converged) {
    std::ostringstream os;
    os << "tangent group " << op << " limit did not converge (last residual "
       << (rep.residuals.empty() ? 0.0 : rep.residuals.back()) << " after "
       << rep.steps_used << " steps)";
    throw TangentConstructionError(os.str(), std::move(rep));
  }
  return *rep.limit;
}

}  // namespace

ConicalGroupSpec tangent_conical_group(const AlgebraHandle& alg,
                                       const AbsoluteSchedule& sched,
                                       const Point& e, double tol) {
  validate_schedule(sched);

  // Probe convergence before handing out the group, so an ill-behaved
  // instance fails at construction rather than on first use.
  Sampler probe(0x7a4Ce57ULL);
  for (int i = 0; i < 3; ++i) {
    const Point p = alg.sample(probe);
    const Point q = alg.sample(probe);
    require_limit(emergent_sigma(alg, sched, e, p, q, tol), "multiplication");
    require_limit(emergent_inv(alg, sched, e, p, tol), "inverse");
  }

  ConicalGroupSpec g;
  g.neutral = e;
  g.mul = [alg, sched, e, tol](const Point& x, const Point& y) -> Point {
    return require_limit(emergent_sigma(alg, sched, e, x, y, tol),
                         "multiplication");
  };
  g.inverse = [alg, sched, e, tol](const Point& x) -> Point {
    return require_limit(emergent_inv(alg, sched, e, x, tol), "inverse");
  };
  g.scale = [alg, e](double a, const Point& x) -> Point {
    return circ(alg, Scalar(a), e, x);
  };
  return g;
}

}  // namespace emalg
