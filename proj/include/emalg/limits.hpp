#pragma once

#include <functional>
#include <optional>
#include <vector>

#include "emalg/algebra.hpp"
#include "emalg/instances.hpp"

namespace emalg {

// Geometric schedule eps_k = start * ratio^k, k = 0 .. max_steps-1. The
// default floor is 0.5 * 0.5^47, about 3.6e-15, deep enough that every
// convergent family settles to its floating-point plateau.
struct AbsoluteSchedule {
  double start = 0.5;
  double ratio = 0.5;
  int max_steps = 48;

  double epsilon(int k) const;
};

void validate_schedule(const AbsoluteSchedule& sched);

// Trace of one limit evaluation. residuals[k] = metric(f(eps_k), f(eps_{k+1}));
// convergence means two consecutive residuals below tol. limit is set only
// when converged. Iterates are kept so a run can be re-checked offline.
struct ConvergenceReport {
  bool converged = false;
  int steps_used = 0;  // number of evaluations of f
  double tol = 0.0;
  std::vector<double> residuals;
  std::vector<Point> iterates;
  std::optional<Point> limit;
};

// Drives f along the schedule until the stopping rule fires or the schedule
// is exhausted. No extrapolation: the reported limit is the last iterate.
ConvergenceReport limit_along_schedule(const std::function<Point(double)>& f,
                                       const AbsoluteSchedule& sched, double tol,
                                       const MetricFn& metric);

// Emergent operations: limits of the approximate ones as the scale tends
// to zero.
ConvergenceReport emergent_sigma(const AlgebraHandle& alg,
                                 const AbsoluteSchedule& sched, const Point& e,
                                 const Point& y, const Point& z, double tol);
ConvergenceReport emergent_delta(const AlgebraHandle& alg,
                                 const AbsoluteSchedule& sched, const Point& e,
                                 const Point& y, const Point& z, double tol);
ConvergenceReport emergent_inv(const AlgebraHandle& alg,
                               const AbsoluteSchedule& sched, const Point& e,
                               const Point& y, double tol);

// c -> 0 limit of the relative operation x circ^e_{a,c} y at fixed a.
ConvergenceReport infinitesimal_circ(const AlgebraHandle& alg,
                                     const AbsoluteSchedule& sched, const Point& e,
                                     Scalar a, const Point& x, const Point& y,
                                     double tol);

// Construction failure that carries the offending limit trace.
struct TangentConstructionError : ConstructionError {
  TangentConstructionError(const std::string& msg, ConvergenceReport rep)
      : ConstructionError(msg), report(std::move(rep)) {}
  ConvergenceReport report;
};

// Packages the emergent operations at base point e as a group: mul is the
// emergent sum, inverse the emergent inverse, scale the dilation at e.
// Convergence is probed on a few internally seeded samples up front; any
// non-convergent probe (or later call) raises TangentConstructionError with
// the trace attached.
ConicalGroupSpec tangent_conical_group(const AlgebraHandle& alg,
                                       const AbsoluteSchedule& sched,
                                       const Point& e, double tol);

}  // namespace emalg
