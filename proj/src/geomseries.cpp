#include "emalg/geomseries.hpp"

#include <cmath>
#include <sstream>

#include "emalg/instances.hpp"

namespace emalg {

namespace {

constexpr double kEntryGuard = 1e100;

void require_ratio(double e) {
  if (!(e > 0.0 && e < 1.0))
    throw std::invalid_argument("series ratio must lie in (0, 1)");
}

void require_order(int m) {
  if (m < 0 || m > 200)
    throw std::invalid_argument("partial sum order must lie in [0, 200]");
}

void guard_entries(const Point& m, const char* where) {
  if (m.cwiseAbs().maxCoeff() > kEntryGuard) {
    std::ostringstream os;
    os << "intermediate entry magnitude exceeded 1e100 in " << where;
    throw NumericRangeError(os.str());
  }
}

}  // namespace

ConvergenceReport solve_dilation_equation(const GeomSeriesProblem& p) {
  require_ratio(p.epsilon);
  if (!std::isfinite(p.tol) || p.tol <= 0.0)
    throw std::invalid_argument("solver tolerance must be positive and finite");
  if (p.max_iter < 3)
    throw std::invalid_argument("solver needs at least 3 iterations");
  require_same_shape(p.base, p.target);

  const auto sigma = [&](const Point& y, const Point& z) -> Point {
    if (p.alg.sigma_exact) return p.alg.sigma_exact(p.base, y, z);
    auto rep = emergent_sigma(p.alg, AbsoluteSchedule{}, p.base, y, z, p.tol);
    if (!rep.converged)
      throw TangentConstructionError(
          "emergent sum inside the series solver did not converge",
          std::move(rep));
    return *rep.limit;
  };

  ConvergenceReport rep;
  rep.tol = p.tol;
  rep.iterates.push_back(p.target);
  int consecutive = 0;
  for (int n = 1; n < p.max_iter; ++n) {
    const Point& prev = rep.iterates.back();
    Point next = sigma(p.target, circ(p.alg, Scalar(p.epsilon), p.base, prev));
    const double r = dist(p.alg, prev, next);
    rep.iterates.push_back(std::move(next));
    rep.residuals.push_back(r);
    consecutive = (r < p.tol) ? consecutive + 1 : 0;
    if (consecutive >= 2) {
      rep.converged = true;
      break;
    }
  }
  rep.steps_used = static_cast<int>(rep.iterates.size());
  if (rep.converged) rep.limit = rep.iterates.back();
  return rep;
}

Point unipotent_partial_sum(const Point& x, double e, int m) {
  require_unipotent(x);
  require_ratio(e);
  require_order(m);
  const int n = static_cast<int>(x.rows());

  // A = x E^{-1} is not unipotent; its powers are where entries blow up.
  Point einv = Point::Zero(n, n);
  Point em = Point::Zero(n, n);
  for (int i = 0; i < n; ++i) {
    einv(i, i) = std::pow(e, -(i + 1));
    em(i, i) = std::pow(e, static_cast<double>(m) * (i + 1));
  }
  guard_entries(einv, "the closed-form partial sum");

  const Point a = x * einv;
  Point p = Point::Identity(n, n);
  for (int k = 0; k < m; ++k) {
    p = p * a;
    guard_entries(p, "the closed-form partial sum");
  }
  p = p * x;
  guard_entries(p, "the closed-form partial sum");
  Point out = p * em;
  // The product is unitriangular exactly; pow rounding on the diagonal
  // factors is the only leak, so snap the diagonal back after checking it
  // drifted by no more than rounding.
  for (int i = 0; i < n; ++i) {
    if (std::abs(out(i, i) - 1.0) > 1e-8)
      throw NumericRangeError("closed-form partial sum lost its unit diagonal");
    out(i, i) = 1.0;
    for (int j = 0; j < i; ++j) out(i, j) = 0.0;
  }
  return out;
}

Point unipotent_partial_sum_iter(const Point& x, double e, int m) {
  require_unipotent(x);
  require_ratio(e);
  require_order(m);

  Point acc = x;  // the k = 0 factor
  for (int k = 1; k <= m; ++k) {
    acc = acc * dilator_conjugate(x, e, k);
    guard_entries(acc, "the factored partial sum");
  }
  return acc;
}

CommutatorReport solve_commutator(const Point& x, double e, double tol,
                                  int max_m) {
  require_unipotent(x);
  require_ratio(e);
  if (!std::isfinite(tol) || tol <= 0.0)
    throw std::invalid_argument("tolerance must be positive and finite");
  if (max_m < 1) throw std::invalid_argument("max_m must be positive");
  const int n = static_cast<int>(x.rows());

  CommutatorReport out;
  out.y = x;
  out.factors_used = 0;
  for (int k = 1; k <= max_m; ++k) {
    const Point factor = dilator_conjugate(x, e, k);
    out.y = out.y * factor;
    out.factors_used = k;
    if ((factor - Point::Identity(n, n)).norm() < tol) break;
  }
  // Defining equation y E^{-1} y^{-1} E = x, with the conjugation done
  // entrywise to keep the unipotent shape exact.
  const Point lhs = out.y * dilator_conjugate(unipotent_inverse(out.y), e, 1);
  out.residual = (lhs - x).norm();
  out.converged = out.residual < 10.0 * tol;
  return out;
}

}  // namespace emalg
