#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "emalg/algebra.hpp"
#include "emalg/instances.hpp"
#include "emalg/limits.hpp"

namespace emalg {

// Box parameters for the shipped carriers; used when a campaign has to
// build samplers itself (dichotomy checks infer the carrier from shapes).
struct DomainBounds {
  double vector_halfwidth = 1.0;
  double unipotent_entry = 1.0;
  double sphere_cap = 0.35;
};

// Seeded campaign description. Identical specs yield bit-identical sample
// streams and therefore bit-identical reports.
struct SampleSpec {
  std::uint64_t seed = 42;
  int count = 1000;
  double scalar_lo = 0.25;  // dilation coefficients drawn log-uniformly
  double scalar_hi = 4.0;
  DomainBounds bounds;
};

// Outcome of one property campaign. passed ⇔ max_residual < tolerance.
// Draws rejected by an instance's chart (DomainError) are skipped and
// counted, never silently dropped.
struct PropertyReport {
  std::string property;
  std::string instance;
  double max_residual = 0.0;
  std::string argmax_sample;
  int count = 0;
  int skipped = 0;
  double tolerance = 0.0;
  bool passed = false;
  std::string note;
};

enum class DistributivityKind { LIN, COLIN, SHUFFLE };

std::string to_string(DistributivityKind kind);
DistributivityKind parse_distributivity_kind(const std::string& name);

// Idempotence, the two cancellation laws, scale composition and the unit
// scalar, all on one sample stream; reports the max residual across them.
PropertyReport check_axioms(const AlgebraHandle& alg, const SampleSpec& s,
                            double tol);

// Convergence suite: circ(eps, x, y) -> x measured at the schedule floor
// (which must reach 1e-7), plus Cauchy behavior of the Sigma and Delta
// limit sequences. A non-convergent sample is recorded as a failure with
// its inputs.
PropertyReport check_em(const AlgebraHandle& alg, const AbsoluteSchedule& sched,
                        const SampleSpec& s, double tol);

// Max residual of the chosen distributivity family over the sample stream.
PropertyReport check_distributivity(const AlgebraHandle& alg,
                                    DistributivityKind kind, const SampleSpec& s,
                                    double tol);

// Builds the tangent group at e, re-derives the dilation family from it via
// the group formula x . scale(a, x^{-1} y), and reports the max distance to
// the instance's own circ. Equality is meaningful only on instances whose
// LIN suite passes; for others the report is informational (noted).
PropertyReport theorem1_roundtrip(const AlgebraHandle& alg, const Point& e,
                                  const AbsoluteSchedule& sched,
                                  const SampleSpec& s, double tol);

// Evaluates commutativity of mul, COLIN and SHUFFLE of the induced algebra
// on one stream and asserts the three verdicts agree (all pass or all
// fail). Disagreement yields a failed report naming the mismatched pair.
PropertyReport theorem2_dichotomy(const ConicalGroupSpec& spec, MetricFn metric,
                                  const SampleSpec& s, double tol);

// Distance between the two sides of the commutator identity
//   COLIN_{a,1/b}(e, e bullet_a y, z) = [y circ_b e, z circ_a e] . z,
// the left side via colin_term on the induced algebra, the right side
// directly from spec.mul. Exact in every conical group, commutative or not.
double commutator_identity_check(const ConicalGroupSpec& spec, MetricFn metric,
                                 Scalar a, Scalar b, const Point& y,
                                 const Point& z);

// For every handle whose COLIN suite passes, asserts its LIN suite passes
// too. On passing vector-space handles additionally checks the reflection
// identity y circ_b e = e circ_{1-b} y for b sampled in (0, 1).
PropertyReport colin_implies_lin_witness(const std::vector<AlgebraHandle>& handles,
                                         const SampleSpec& s, double tol);

// One rung of Schild's ladder: midpoint double-geodesic transport of w
// along v, renormalized back into the tangent space at x. On a flat
// instance the result equals w exactly; the defect on a curved instance
// scales as a^2.
TangentVector schild_ladder(const AlgebraHandle& alg, const Point& x,
                            const TangentVector& v, const TangentVector& w,
                            Scalar a);

struct CurvatureScaling {
  std::vector<double> a_used;
  std::vector<double> gaps;           // aligned with a_used
  std::vector<double> excluded_a;     // gap underflowed 1e-13, dropped from fit
  std::vector<double> excluded_gaps;  // the underflowed values, for the record
  double slope = 0.0;
  bool slope_defined = false;
  bool flat = false;  // every gap underflowed
  std::string note;
};

// Least-squares slope of log(gap) vs log(a), gap(a) = |w - r^a_x(v,w)| in
// the tangent space. Requires at least 4 strictly decreasing a values and
// orthonormal v, w.
CurvatureScaling curvature_scaling(const AlgebraHandle& alg, const Point& x,
                                   const TangentVector& v, const TangentVector& w,
                                   const std::vector<double>& a_values);

}  // namespace emalg
