#pragma once

#include <cstdint>
#include <functional>
#include <string>

#include "emalg/algebra.hpp"

namespace emalg {

// Group with a compatible one-parameter family of automorphisms scale(a, .)
// for a in (0, oo). scale must satisfy scale(a, scale(b, x)) = scale(ab, x)
// and distribute over mul; make_conical checks both on samples.
struct ConicalGroupSpec {
  std::function<Point(const Point&, const Point&)> mul;
  std::function<Point(const Point&)> inverse;
  Point neutral;
  std::function<Point(double, const Point&)> scale;
};

// Tangent vector in a chart: vec based at base. On the sphere vec must be
// orthogonal to base (enforced to 1e-9 by consumers).
struct TangentVector {
  Point base;
  Point vec;
};

// Diagonal dilator diag(e, e^2, ..., e^n) driving the unipotent dilations.
struct DiagonalDilator {
  double scale = 0.5;
  int dim = 2;
  Point matrix() const;
};

// --- shipped instances ---------------------------------------------------

// R^n with x circ_a y = x + a(y - x), Euclidean metric, box sampler.
// Valid n in [1, 16].
AlgebraHandle make_vector_space(int n, double box_halfwidth = 1.0);

// Upper unitriangular n x n matrices with
//   x circ_e y = x . E^{-1} (x^{-1} y) E,  E = diag(e, ..., e^n),
// Frobenius metric, entrywise-box sampler on the strict upper triangle.
// Valid n in [2, 8]. The conjugation is entrywise, (M)_ij -> M_ij e^(j-i),
// so unit diagonal and zero lower triangle are preserved exactly.
AlgebraHandle make_unipotent(int n, double entry_bound = 1.0);

// Unit sphere S^2 with x circ_a y = exp_x(a log_x y), angular metric,
// sampler confined to a geodesic cap around the north pole so that (act)
// chains with a, b up to 4 stay inside the chart.
AlgebraHandle make_sphere(double cap_radius = 0.35);

// Dilation structure induced on a conical group:
//   x circ_a y = x . scale(a, x^{-1} y).
// The spec is validated on check_count sampled tuples (associativity,
// neutral, inverses, scale composition/distribution); the first violation
// raises ConstructionError naming the axiom.
AlgebraHandle make_conical(const ConicalGroupSpec& spec, MetricFn metric,
                           PointSamplerFn sampler, std::string name = "conical",
                           std::uint64_t check_seed = 0x5eedC0DEULL,
                           int check_count = 64, double check_tol = 1e-9);

// Group data behind the shipped carriers, for feeding make_conical or the
// dichotomy checks directly.
ConicalGroupSpec vector_group_spec(int n);
ConicalGroupSpec unipotent_group_spec(int n);

// The induced operation of a conical group, without handle validation.
Point conical_circ(const ConicalGroupSpec& spec, double a, const Point& x,
                   const Point& y);

// --- sphere chart --------------------------------------------------------

// exp_x(v) = cos|v| x + sin|v| v/|v|; requires |v| < pi and v ⊥ x.
Point sphere_exp(const Point& x, const Point& v);

// log_x(y): tangent vector of length angle(x, y); refuses pairs closer than
// 0.1 rad to antipodal, where the chart degenerates.
Point sphere_log(const Point& x, const Point& y);

// Total angular metric; never throws.
double sphere_dist(const Point& x, const Point& y);

// --- unipotent helpers (shared with the series solver) --------------------

bool is_unipotent(const Point& m);
void require_unipotent(const Point& m);

// Exact inverse by back substitution; unit diagonal and zero lower
// triangle come out exact.
Point unipotent_inverse(const Point& m);

// E^{-k} m E^{k} for E = diag(e, ..., e^n), computed entrywise as
// m_ij e^{k(j-i)} without forming E.
Point dilator_conjugate(const Point& m, double e, int k);

}  // namespace emalg
