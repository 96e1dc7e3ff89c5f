#pragma once

#include "emalg/algebra.hpp"
#include "emalg/limits.hpp"

namespace emalg {

// Fixed-point problem S = Sigma^base(target, base circ_epsilon S): the
// non-commutative geometric series summed at base with ratio epsilon.
struct GeomSeriesProblem {
  AlgebraHandle alg;
  Point base;
  Point target;
  double epsilon = 0.5;  // must lie in (0, 1)
  double tol = 1e-9;
  int max_iter = 200;
};

// Picard iteration S_{n+1} = Sigma^base(target, base circ_eps S_n) from
// S_0 = target. Uses the instance's exact emergent sum when available and
// the limit of approximate sums otherwise. Stops when two consecutive
// successive residuals drop below tol; the trace mirrors ConvergenceReport.
ConvergenceReport solve_dilation_equation(const GeomSeriesProblem& p);

// Unipotent partial sums of the series with dilator E = diag(e, ..., e^n):
//   S_m = prod_{k=0..m} E^{-k} x E^{k}.
// Closed form (x E^{-1})^m x E^m versus the stable factor-by-factor
// product. The closed form guards every intermediate; any entry magnitude
// beyond 1e100 raises NumericRangeError.
Point unipotent_partial_sum(const Point& x, double e, int m);
Point unipotent_partial_sum_iter(const Point& x, double e, int m);

struct CommutatorReport {
  Point y;
  bool converged = false;
  int factors_used = 0;
  double residual = 0.0;  // metric gap of y E^{-1} y^{-1} E from x
};

// Solves y E^{-1} y^{-1} E = x for unipotent x by accumulating the series
// factors until they reach the identity. The infinite product telescopes,
// so the defect is pure floating-point noise; converged means the defect is
// below 10 * tol.
CommutatorReport solve_commutator(const Point& x, double e, double tol = 1e-9,
                                  int max_m = 200);

}  // namespace emalg
