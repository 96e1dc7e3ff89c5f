#pragma once

#include <functional>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

#include "emalg/errors.hpp"
#include "emalg/sampling.hpp"
#include "emalg/scalar.hpp"

namespace emalg {

// One dense type carries every instance: n-vectors as n x 1 matrices,
// unipotent group elements as n x n, sphere points as unit 3 x 1.
using Point = Eigen::MatrixXd;

enum class CarrierKind { VectorSpace, Unipotent, Sphere, Conical };

using CircFn = std::function<Point(double, const Point&, const Point&)>;
using MetricFn = std::function<double(const Point&, const Point&)>;
using PointSamplerFn = std::function<Point(Sampler&)>;
using ChartExpFn = std::function<Point(const Point&, const Point&)>;
using ChartLogFn = std::function<Point(const Point&, const Point&)>;
using SigmaExactFn = std::function<Point(const Point&, const Point&, const Point&)>;
using TernaryAtScaleFn =
    std::function<Point(double, const Point&, const Point&, const Point&)>;
using BinaryAtScaleFn = std::function<Point(double, const Point&, const Point&)>;

// Immutable bundle describing one dilation structure: the indexed family
// circ, the metric realizing its uniformity, and a seeded in-domain point
// sampler. bullet is never stored; it is circ at the reciprocal scalar.
struct AlgebraHandle {
  CarrierKind kind = CarrierKind::VectorSpace;
  std::string name;  // instance descriptor, e.g. "vector:3"
  CircFn circ;
  MetricFn metric;
  PointSamplerFn sample;
  Point origin;  // canonical base point: 0, the identity, or the north pole

  // Optional extras. chart_exp/chart_log exist on instances with a geodesic
  // chart (sphere, flat vector chart); sigma_exact is the exact emergent
  // sum available on group-like carriers, Sigma^e(v, w) = v . e^{-1} . w.
  ChartExpFn chart_exp;
  ChartLogFn chart_log;
  SigmaExactFn sigma_exact;

  // Optional fused evaluators for the approximate operations at one scale.
  // Each must equal the composed circ/bullet expression in exact arithmetic;
  // the point of fusing is numerical: composing through bullet divides a
  // rounded intermediate by the scale, so the composed forms drown in
  // amplified rounding noise once the scale is small, while a fused form can
  // cancel the renormalization algebraically and stay accurate at any scale.
  TernaryAtScaleFn sigma_at_scale;
  TernaryAtScaleFn delta_at_scale;
  BinaryAtScaleFn inv_at_scale;
};

inline void require_same_shape(const Point& x, const Point& y) {
  if (x.rows() != y.rows() || x.cols() != y.cols())
    throw std::invalid_argument("points have mismatched shapes");
}

// x circ_a y
inline Point circ(const AlgebraHandle& alg, Scalar a, const Point& x, const Point& y) {
  require_same_shape(x, y);
  return alg.circ(a.value(), x, y);
}

// x bullet_a y = x circ_{1/a} y
inline Point bullet(const AlgebraHandle& alg, Scalar a, const Point& x, const Point& y) {
  return circ(alg, a.reciprocal(), x, y);
}

inline double dist(const AlgebraHandle& alg, const Point& x, const Point& y) {
  require_same_shape(x, y);
  return alg.metric(x, y);
}

// Approximate difference based at x: (x circ_a y) bullet_a (x circ_a z),
// spelled out through circ/bullet. No limit is taken here; the emergent
// version lives in limits.hpp.
inline Point approx_delta_composed(const AlgebraHandle& alg, Scalar a,
                                   const Point& x, const Point& y,
                                   const Point& z) {
  return bullet(alg, a, circ(alg, a, x, y), circ(alg, a, x, z));
}

// Approximate sum based at x: x bullet_a ((x circ_a y) circ_a z).
inline Point approx_sigma_composed(const AlgebraHandle& alg, Scalar a,
                                   const Point& x, const Point& y,
                                   const Point& z) {
  return bullet(alg, a, x, circ(alg, a, circ(alg, a, x, y), z));
}

// Approximate inverse of y based at x: (x circ_a y) bullet_a x.
inline Point approx_inv_composed(const AlgebraHandle& alg, Scalar a,
                                 const Point& x, const Point& y) {
  return bullet(alg, a, circ(alg, a, x, y), x);
}

// Scale-indexed approximate operations as used by the limit machinery.
// These prefer an instance's fused evaluator when it carries one and fall
// back to the composed expression otherwise; both routes compute the same
// group word, so tests pin their agreement at moderate scales.
inline Point approx_delta(const AlgebraHandle& alg, Scalar a, const Point& x,
                          const Point& y, const Point& z) {
  if (alg.delta_at_scale) {
    require_same_shape(x, y);
    require_same_shape(x, z);
    return alg.delta_at_scale(a.value(), x, y, z);
  }
  return approx_delta_composed(alg, a, x, y, z);
}

inline Point approx_sigma(const AlgebraHandle& alg, Scalar a, const Point& x,
                          const Point& y, const Point& z) {
  if (alg.sigma_at_scale) {
    require_same_shape(x, y);
    require_same_shape(x, z);
    return alg.sigma_at_scale(a.value(), x, y, z);
  }
  return approx_sigma_composed(alg, a, x, y, z);
}

inline Point approx_inv(const AlgebraHandle& alg, Scalar a, const Point& x,
                        const Point& y) {
  if (alg.inv_at_scale) {
    require_same_shape(x, y);
    return alg.inv_at_scale(a.value(), x, y);
  }
  return approx_inv_composed(alg, a, x, y);
}

// Left-distributivity residual term
//   LIN_{a,b}(x, y, z) = y bullet_b (x bullet_a ((x circ_a y) circ_b (x circ_a z))).
// Equals z exactly iff x circ_a distributes over circ_b at these arguments;
// two of its degeneracies are identities in every instance:
// LIN(x, x, z) = z and LIN(x, y, y) = y.
inline Point lin_term(const AlgebraHandle& alg, Scalar a, Scalar b, const Point& x,
                      const Point& y, const Point& z) {
  const Point u = circ(alg, a, x, y);
  const Point w = circ(alg, a, x, z);
  return bullet(alg, b, y, bullet(alg, a, x, circ(alg, b, u, w)));
}

// Right-distributivity residual term
//   COLIN_{a,b}(x, y, z) = (x circ_a y) bullet_b ((x circ_b z) circ_a (y circ_b z)).
// Equals z exactly iff circ_a distributes over circ_b from the right.
inline Point colin_term(const AlgebraHandle& alg, Scalar a, Scalar b, const Point& x,
                        const Point& y, const Point& z) {
  const Point u = circ(alg, a, x, y);
  const Point p = circ(alg, b, x, z);
  const Point q = circ(alg, b, y, z);
  return bullet(alg, b, u, circ(alg, a, p, q));
}

// Metric gap between the two sides of the medial (shuffle) law
//   (x circ_a y) circ_b (u circ_a v)  =  (x circ_b u) circ_a (y circ_b v).
inline double shuffle_residual(const AlgebraHandle& alg, Scalar a, Scalar b,
                               const Point& x, const Point& y, const Point& u,
                               const Point& v) {
  const Point lhs = circ(alg, b, circ(alg, a, x, y), circ(alg, a, u, v));
  const Point rhs = circ(alg, a, circ(alg, b, x, u), circ(alg, b, y, v));
  return dist(alg, lhs, rhs);
}

// Dilation family rescaled to live near e:
//   x circ^e_{a,c} y = e bullet_c ((e circ_c x) circ_a (e circ_c y)).
// Its c -> 0 limit is the infinitesimal operation at e.
inline Point relative_circ(const AlgebraHandle& alg, const Point& e, Scalar c,
                           Scalar a, const Point& x, const Point& y) {
  return bullet(alg, c, e, circ(alg, a, circ(alg, c, e, x), circ(alg, c, e, y)));
}

}  // namespace emalg
