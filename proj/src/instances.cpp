#include "emalg/instances.hpp"

#include <cmath>
#include <sstream>
#include <utility>

namespace emalg {

namespace {

constexpr double kPi = 3.14159265358979323846;

// Angular separation below which sphere_log refuses to invert the chart.
constexpr double kAntipodalCutoff = 0.1;

void require_positive_finite(double v, const char* what) {
  if (!std::isfinite(v) || v <= 0.0) {
    std::ostringstream os;
    os << what << " must be positive and finite, got " << v;
    throw std::invalid_argument(os.str());
  }
}

void require_unit_sphere_point(const Point& x) {
  if (x.rows() != 3 || x.cols() != 1)
    throw std::invalid_argument("sphere point must be a 3 x 1 column");
  if (std::abs(x.col(0).norm() - 1.0) > 1e-9)
    throw std::invalid_argument("sphere point must have unit norm");
}

double frobenius(const Point& x, const Point& y) { return (x - y).norm(); }

}  // namespace

Point DiagonalDilator::matrix() const {
  require_positive_finite(scale, "dilator scale");
  if (dim < 1) throw std::invalid_argument("dilator dim must be at least 1");
  Point d = Point::Zero(dim, dim);
  for (int i = 0; i < dim; ++i) d(i, i) = std::pow(scale, i + 1);
  return d;
}

// --- vector space ----------------------------------------------------------

AlgebraHandle make_vector_space(int n, double box_halfwidth) {
  if (n < 1 || n > 16)
    throw std::invalid_argument("vector space dimension must be in [1, 16]");
  require_positive_finite(box_halfwidth, "box halfwidth");

  AlgebraHandle h;
  h.kind = CarrierKind::VectorSpace;
  h.name = "vector:" + std::to_string(n);
  h.circ = [](double a, const Point& x, const Point& y) -> Point {
    return x + a * (y - x);
  };
  h.metric = frobenius;
  h.sample = [n, box_halfwidth](Sampler& s) { return s.box_vector(n, box_halfwidth); };
  h.origin = Point::Zero(n, 1);
  h.chart_exp = [](const Point& x, const Point& v) -> Point { return x + v; };
  h.chart_log = [](const Point& x, const Point& y) -> Point { return y - x; };
  h.sigma_exact = [](const Point& e, const Point& v, const Point& w) -> Point {
    return v - e + w;
  };
  // Fused approximate operations. The composed circ/bullet route divides a
  // rounded intermediate by a, turning absolute rounding of order 1e-16 into
  // noise of order 1e-16/a at deep scales; expanding the affine words cancels
  // that division exactly.
  h.sigma_at_scale = [](double a, const Point& x, const Point& y,
                        const Point& z) -> Point {
    return x + (1.0 - a) * (y - x) + (z - x);
  };
  h.delta_at_scale = [](double a, const Point& x, const Point& y,
                        const Point& z) -> Point {
    return x + a * (y - x) + (z - y);
  };
  h.inv_at_scale = [](double a, const Point& x, const Point& y) -> Point {
    return x - (1.0 - a) * (y - x);
  };
  return h;
}

// --- unipotent group -------------------------------------------------------

bool is_unipotent(const Point& m) {
  if (m.rows() != m.cols() || m.rows() < 1) return false;
  for (int i = 0; i < m.rows(); ++i) {
    if (m(i, i) != 1.0) return false;
    for (int j = 0; j < i; ++j)
      if (m(i, j) != 0.0) return false;
  }
  return true;
}

void require_unipotent(const Point& m) {
  if (!is_unipotent(m))
    throw std::invalid_argument(
        "matrix is not upper unitriangular (unit diagonal, zero below)");
}

Point unipotent_inverse(const Point& m) {
  require_unipotent(m);
  // Back substitution keeps the unit diagonal and zero lower triangle exact.
  return m.triangularView<Eigen::Upper>().solve(
      Point::Identity(m.rows(), m.cols()));
}

Point dilator_conjugate(const Point& m, double e, int k) {
  require_unipotent(m);
  require_positive_finite(e, "dilator scale");
  Point out = m;
  const int n = static_cast<int>(m.rows());
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      out(i, j) *= std::pow(e, static_cast<double>(k) * (j - i));
  return out;
}

AlgebraHandle make_unipotent(int n, double entry_bound) {
  if (n < 2 || n > 8)
    throw std::invalid_argument("unipotent dimension must be in [2, 8]");
  require_positive_finite(entry_bound, "entry bound");

  AlgebraHandle h;
  h.kind = CarrierKind::Unipotent;
  h.name = "unipotent:" + std::to_string(n);
  h.circ = [](double e, const Point& x, const Point& y) -> Point {
    require_unipotent(x);
    require_unipotent(y);
    return x * dilator_conjugate(unipotent_inverse(x) * y, e, 1);
  };
  h.metric = frobenius;
  h.sample = [n, entry_bound](Sampler& s) {
    Point m = Point::Identity(n, n);
    for (int i = 0; i < n; ++i)
      for (int j = i + 1; j < n; ++j) m(i, j) = s.uniform(-entry_bound, entry_bound);
    return m;
  };
  h.origin = Point::Identity(n, n);
  h.sigma_exact = [](const Point& e, const Point& v, const Point& w) -> Point {
    return v * (unipotent_inverse(e) * w);
  };
  // Fused approximate operations, kept in the frame of the base point. Every
  // intermediate below has entry (i, j) in the single scale class a^(j - i),
  // so products mix terms of one magnitude and the final renormalization is
  // an exact entrywise rescale. The composed route multiplies back into
  // absolute coordinates first, flooring each entry at absolute rounding that
  // the renormalization then amplifies by a^-(j - i).
  h.sigma_at_scale = [](double a, const Point& x, const Point& y,
                        const Point& z) -> Point {
    const Point xi = unipotent_inverse(x);
    const Point p = dilator_conjugate(xi * y, a, 1);
    const Point q = dilator_conjugate(unipotent_inverse(p) * (xi * z), a, 1);
    return x * dilator_conjugate(p * q, a, -1);
  };
  h.delta_at_scale = [](double a, const Point& x, const Point& y,
                        const Point& z) -> Point {
    const Point xi = unipotent_inverse(x);
    const Point p = dilator_conjugate(xi * y, a, 1);
    const Point r = dilator_conjugate(xi * z, a, 1);
    return x * (p * dilator_conjugate(unipotent_inverse(p) * r, a, -1));
  };
  h.inv_at_scale = [](double a, const Point& x, const Point& y) -> Point {
    const Point p = dilator_conjugate(unipotent_inverse(x) * y, a, 1);
    return x * (p * dilator_conjugate(unipotent_inverse(p), a, -1));
  };
  return h;
}

// --- sphere ----------------------------------------------------------------

double sphere_dist(const Point& x, const Point& y) {
  require_unit_sphere_point(x);
  require_unit_sphere_point(y);
  const double c = x.col(0).dot(y.col(0));
  const double s = (y - c * x).norm();
  return std::atan2(s, c);
}

Point sphere_exp(const Point& x, const Point& v) {
  require_unit_sphere_point(x);
  if (v.rows() != 3 || v.cols() != 1)
    throw std::invalid_argument("tangent vector must be a 3 x 1 column");
  const double along = x.col(0).dot(v.col(0));
  // Reject genuinely skew input but tolerate rounding residue: callers that
  // renormalize a logarithm by 1/eps hand back tangents whose defect along
  // the base is that rounding amplified, approaching 1e-7 before the limit
  // stopping rules fire. The residue is stripped below either way.
  if (std::abs(along) > 1e-6 * std::max(1.0, v.norm()))
    throw std::invalid_argument("tangent vector is not orthogonal to its base");
  const Point u = v - along * x;  // strip rounding residue
  const double t = u.norm();
  if (t >= kPi) throw DomainError("exponential argument reaches the cut locus");
  if (t < 1e-300) return x;
  Point y = std::cos(t) * x + (std::sin(t) / t) * u;
  y /= y.col(0).norm();
  return y;
}

Point sphere_log(const Point& x, const Point& y) {
  require_unit_sphere_point(x);
  require_unit_sphere_point(y);
  const double c = x.col(0).dot(y.col(0));
  const Point perp = y - c * x;
  const double s = perp.norm();
  const double theta = std::atan2(s, c);
  if (theta > kPi - kAntipodalCutoff)
    throw DomainError("logarithm within 0.1 rad of the cut locus");
  if (s < 1e-300) return Point::Zero(3, 1);
  return (theta / s) * perp;
}

AlgebraHandle make_sphere(double cap_radius) {
  require_positive_finite(cap_radius, "cap radius");
  if (cap_radius >= kPi / 2)
    throw std::invalid_argument("cap radius must stay below pi/2");

  AlgebraHandle h;
  h.kind = CarrierKind::Sphere;
  h.name = "sphere";
  h.circ = [](double a, const Point& x, const Point& y) -> Point {
    return sphere_exp(x, a * sphere_log(x, y));
  };
  h.metric = sphere_dist;
  h.sample = [cap_radius](Sampler& s) {
    // Area-uniform on the geodesic cap around the north pole.
    const double c = 1.0 - s.unit() * (1.0 - std::cos(cap_radius));
    const double r = std::sqrt(std::max(0.0, 1.0 - c * c));
    const double phi = s.uniform(0.0, 2.0 * kPi);
    Point p(3, 1);
    p(0, 0) = r * std::cos(phi);
    p(1, 0) = r * std::sin(phi);
    p(2, 0) = c;
    return p;
  };
  h.origin = (Point(3, 1) << 0.0, 0.0, 1.0).finished();
  h.chart_exp = sphere_exp;
  h.chart_log = sphere_log;
  // Closed form of the emergent sum: chart addition at e. The approximate
  // sums converge to it at rate O(eps); having it exact lets solvers avoid
  // the 1e-16/eps cancellation floor of deep finite-scale evaluations.
  h.sigma_exact = [](const Point& e, const Point& v, const Point& w) -> Point {
    return sphere_exp(e, sphere_log(e, v) + sphere_log(e, w));
  };
  return h;
}

// --- conical groups ----------------------------------------------------------

Point conical_circ(const ConicalGroupSpec& spec, double a, const Point& x,
                   const Point& y) {
  return spec.mul(x, spec.scale(a, spec.mul(spec.inverse(x), y)));
}

ConicalGroupSpec vector_group_spec(int n) {
  if (n < 1 || n > 16)
    throw std::invalid_argument("vector space dimension must be in [1, 16]");
  ConicalGroupSpec g;
  g.mul = [](const Point& x, const Point& y) -> Point { return x + y; };
  g.inverse = [](const Point& x) -> Point { return -x; };
  g.neutral = Point::Zero(n, 1);
  g.scale = [](double a, const Point& x) -> Point { return a * x; };
  return g;
}

ConicalGroupSpec unipotent_group_spec(int n) {
  if (n < 2 || n > 8)
    throw std::invalid_argument("unipotent dimension must be in [2, 8]");
  ConicalGroupSpec g;
  g.mul = [](const Point& x, const Point& y) -> Point {
    require_unipotent(x);
    require_unipotent(y);
    return x * y;
  };
  g.inverse = unipotent_inverse;
  g.neutral = Point::Identity(n, n);
  g.scale = [](double a, const Point& x) -> Point {
    return dilator_conjugate(x, a, 1);
  };
  return g;
}

AlgebraHandle make_conical(const ConicalGroupSpec& spec, MetricFn metric,
                           PointSamplerFn sampler, std::string name,
                           std::uint64_t check_seed, int check_count,
                           double check_tol) {
  if (!spec.mul || !spec.inverse || !spec.scale)
    throw std::invalid_argument("conical group spec has missing callables");
  if (!metric || !sampler)
    throw std::invalid_argument("make_conical needs a metric and a sampler");
  if (check_count < 1) throw std::invalid_argument("check count must be positive");
  require_positive_finite(check_tol, "check tolerance");

  const auto fail = [](const char* axiom, double residual) {
    std::ostringstream os;
    os << "conical group spec violates " << axiom << " (residual " << residual
       << ")";
    throw ConstructionError(os.str());
  };
  const auto gap = [](const Point& p, const Point& q) { return (p - q).norm(); };

  Sampler s(check_seed);
  const Point& e = spec.neutral;
  for (int i = 0; i < check_count; ++i) {
    const Point x = sampler(s);
    const Point y = sampler(s);
    const Point z = sampler(s);
    const double a = s.log_uniform(0.25, 4.0);
    const double b = s.log_uniform(0.25, 4.0);

    double r = gap(spec.mul(spec.mul(x, y), z), spec.mul(x, spec.mul(y, z)));
    if (r > check_tol) fail("associativity", r);
    r = gap(spec.mul(e, x), x);
    if (r > check_tol) fail("left neutral", r);
    r = gap(spec.mul(x, e), x);
    if (r > check_tol) fail("right neutral", r);
    r = gap(spec.mul(spec.inverse(x), x), e);
    if (r > check_tol) fail("left inverse", r);
    r = gap(spec.mul(x, spec.inverse(x)), e);
    if (r > check_tol) fail("right inverse", r);
    r = gap(spec.scale(a, spec.scale(b, x)), spec.scale(a * b, x));
    if (r > check_tol) fail("scale composition", r);
    r = gap(spec.scale(a, e), e);
    if (r > check_tol) fail("scale of neutral", r);
    r = gap(spec.scale(a, spec.mul(x, y)),
            spec.mul(spec.scale(a, x), spec.scale(a, y)));
    if (r > check_tol) fail("scale distributing over mul", r);
    r = gap(spec.scale(a, spec.inverse(x)), spec.inverse(spec.scale(a, x)));
    if (r > check_tol) fail("scale commuting with inverse", r);
  }

  AlgebraHandle h;
  h.kind = CarrierKind::Conical;
  h.name = std::move(name);
  h.circ = [spec](double a, const Point& x, const Point& y) -> Point {
    return conical_circ(spec, a, x, y);
  };
  h.metric = std::move(metric);
  h.sample = std::move(sampler);
  h.origin = spec.neutral;
  h.sigma_exact = [spec](const Point& e0, const Point& v, const Point& w) -> Point {
    return spec.mul(v, spec.mul(spec.inverse(e0), w));
  };
  return h;
}

}  // namespace emalg
