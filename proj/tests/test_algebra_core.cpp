#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <vector>

#include "emalg/algebra.hpp"
#include "emalg/instances.hpp"
#include "oracle_helpers.hpp"

using namespace emalg;

TEST_CASE("Scalar enforces strict positivity and finiteness") {
  CHECK_THROWS_AS(Scalar(0.0), std::invalid_argument);
  CHECK_THROWS_AS(Scalar(-1.0), std::invalid_argument);
  CHECK_THROWS_AS(Scalar(std::numeric_limits<double>::infinity()),
                  std::invalid_argument);
  CHECK_THROWS_AS(Scalar(std::numeric_limits<double>::quiet_NaN()),
                  std::invalid_argument);
  CHECK(Scalar(2.5).value() == 2.5);
  CHECK(Scalar(4.0).reciprocal().value() == 0.25);
  CHECK((Scalar(2.0) * Scalar(8.0)).value() == 16.0);
}

TEST_CASE("user_scalar restricts to the interface band") {
  CHECK_THROWS_AS(user_scalar(1e-7), std::invalid_argument);
  CHECK_THROWS_AS(user_scalar(1e7), std::invalid_argument);
  CHECK(user_scalar(1e-6).value() == 1e-6);
  CHECK(user_scalar(1e6).value() == 1e6);
  // Internal Scalar still accepts values below the band (limit schedules).
  CHECK(Scalar(1e-12).value() == 1e-12);
}

TEST_CASE("Sampler streams are reproducible and in range") {
  Sampler a(12345), b(12345), c(54321);
  bool identical = true, all_in_range = true, differs = false;
  for (int i = 0; i < 256; ++i) {
    const double va = a.unit(), vb = b.unit(), vc = c.unit();
    identical = identical && (va == vb);
    all_in_range = all_in_range && va >= 0.0 && va < 1.0;
    differs = differs || (va != vc);
  }
  CHECK(identical);
  CHECK(all_in_range);
  CHECK(differs);
}

TEST_CASE("log_uniform stays inside its interval") {
  Sampler s(9);
  for (int i = 0; i < 200; ++i) {
    const double v = s.log_uniform(0.25, 4.0);
    CHECK(v >= 0.25);
    CHECK(v <= 4.0);
  }
}

TEST_CASE("mismatched carriers are rejected") {
  const AlgebraHandle v3 = make_vector_space(3);
  const Point x = Point::Zero(3, 1), y = Point::Zero(2, 1);
  CHECK_THROWS_AS(circ(v3, Scalar(0.5), x, y), std::invalid_argument);
  CHECK_THROWS_AS(dist(v3, x, y), std::invalid_argument);
}

TEST_CASE("bullet is circ at the reciprocal scalar") {
  const AlgebraHandle v = make_vector_space(4);
  const AlgebraHandle u = make_unipotent(3);
  Sampler s(77);
  for (int i = 0; i < 50; ++i) {
    const Scalar a(s.log_uniform(0.25, 4.0));
    {
      const Point x = v.sample(s), y = v.sample(s);
      CHECK(dist(v, bullet(v, a, x, y), circ(v, a.reciprocal(), x, y)) == 0.0);
    }
    {
      const Point x = u.sample(s), y = u.sample(s);
      CHECK(dist(u, bullet(u, a, x, y), circ(u, a.reciprocal(), x, y)) == 0.0);
    }
  }
}

TEST_CASE("approximate operations match the affine expansions") {
  const AlgebraHandle v = make_vector_space(5);
  Sampler s(101);
  for (int i = 0; i < 100; ++i) {
    const Scalar a(s.log_uniform(0.25, 4.0));
    const Point x = v.sample(s), y = v.sample(s), z = v.sample(s);
    // The raw circ/bullet composition and the dispatched form (fused here)
    // must both land on the independently expanded affine words.
    CHECK(dist(v, approx_delta_composed(v, a, x, y, z),
               oracle::vec_delta(a.value(), x, y, z)) < 1e-14);
    CHECK(dist(v, approx_sigma_composed(v, a, x, y, z),
               oracle::vec_sigma(a.value(), x, y, z)) < 1e-14);
    CHECK(dist(v, approx_inv_composed(v, a, x, y),
               oracle::vec_inv(a.value(), x, y)) < 1e-14);
    CHECK(dist(v, approx_delta(v, a, x, y, z),
               oracle::vec_delta(a.value(), x, y, z)) < 1e-14);
    CHECK(dist(v, approx_sigma(v, a, x, y, z),
               oracle::vec_sigma(a.value(), x, y, z)) < 1e-14);
    CHECK(dist(v, approx_inv(v, a, x, y), oracle::vec_inv(a.value(), x, y)) <
          1e-14);
  }
}

TEST_CASE("fused approximate operations agree with the composed route") {
  // The fused evaluators are reassociations of the same group words; where
  // the composed route is still numerically clean they must coincide. The
  // composed unipotent route loses roughly a^-(n - 1) digits to amplified
  // rounding, which caps how deep each comparison can go.
  Sampler s(211);
  struct Case {
    AlgebraHandle alg;
    std::vector<double> scales;
    double tol;
  };
  const Case cases[] = {
      {make_vector_space(4), {4.0, 1.0, 0.1, 1e-3, 1e-5}, 1e-9},
      {make_unipotent(3), {4.0, 1.0, 0.3, 0.05, 1e-2, 1e-3}, 1e-8},
      {make_unipotent(5), {4.0, 1.0, 0.3, 0.05}, 1e-8},
  };
  for (const auto& c : cases) {
    REQUIRE(static_cast<bool>(c.alg.sigma_at_scale));
    REQUIRE(static_cast<bool>(c.alg.delta_at_scale));
    REQUIRE(static_cast<bool>(c.alg.inv_at_scale));
    for (const double av : c.scales) {
      const Scalar a(av);
      for (int i = 0; i < 20; ++i) {
        const Point x = c.alg.sample(s), y = c.alg.sample(s), z = c.alg.sample(s);
        CHECK(dist(c.alg, approx_sigma(c.alg, a, x, y, z),
                   approx_sigma_composed(c.alg, a, x, y, z)) < c.tol);
        CHECK(dist(c.alg, approx_delta(c.alg, a, x, y, z),
                   approx_delta_composed(c.alg, a, x, y, z)) < c.tol);
        CHECK(dist(c.alg, approx_inv(c.alg, a, x, y),
                   approx_inv_composed(c.alg, a, x, y)) < c.tol);
      }
    }
  }
}

TEST_CASE("distributivity terms vanish on a vector space") {
  const AlgebraHandle v = make_vector_space(3);
  Sampler s(11);
  for (int i = 0; i < 100; ++i) {
    const Scalar a(s.log_uniform(0.25, 4.0)), b(s.log_uniform(0.25, 4.0));
    const Point x = v.sample(s), y = v.sample(s), z = v.sample(s);
    const Point u = v.sample(s), w = v.sample(s);
    CHECK(dist(v, lin_term(v, a, b, x, y, z), z) < 1e-14);
    CHECK(dist(v, colin_term(v, a, b, x, y, z), z) < 1e-14);
    CHECK(shuffle_residual(v, a, b, x, y, u, w) < 1e-14);
  }
}

TEST_CASE("lin_term degeneracies are identities on every instance") {
  // LIN(x, x, z) = z and LIN(x, y, y) = y follow from idempotence and the
  // cancellation laws alone, so they hold even where LIN itself fails.
  const AlgebraHandle instances[] = {make_vector_space(2), make_unipotent(4),
                                     make_sphere()};
  for (const auto& alg : instances) {
    Sampler s(23);
    int checked = 0;
    for (int i = 0; i < 40; ++i) {
      const Scalar a(s.log_uniform(0.25, 4.0)), b(s.log_uniform(0.25, 4.0));
      const Point x = alg.sample(s), y = alg.sample(s);
      try {
        const Point lxx = lin_term(alg, a, b, x, x, y);
        const Point lyy = lin_term(alg, a, b, x, y, y);
        CHECK(dist(alg, lxx, y) < 1e-12);
        CHECK(dist(alg, lyy, y) < 1e-12);
        ++checked;
      } catch (const DomainError&) {
        // Sphere draws can push the nested word past the cut locus at large
        // scalars; those draws prove nothing either way.
      }
    }
    CHECK(checked >= 20);
  }
}

TEST_CASE("relative operation is scale-independent on a vector space") {
  const AlgebraHandle v = make_vector_space(3);
  Sampler s(31);
  for (int i = 0; i < 60; ++i) {
    const Scalar a(s.log_uniform(0.25, 4.0)), c(s.log_uniform(0.25, 4.0));
    const Point e = v.sample(s), x = v.sample(s), y = v.sample(s);
    CHECK(dist(v, relative_circ(v, e, c, a, x, y), circ(v, a, x, y)) < 1e-12);
  }
}

TEST_CASE("relative operation is scale-independent on conical groups") {
  const AlgebraHandle u = make_unipotent(3);
  Sampler s(37);
  for (int i = 0; i < 60; ++i) {
    const Scalar a(s.log_uniform(0.25, 4.0));
    const Scalar c1(s.log_uniform(0.25, 4.0)), c2(s.log_uniform(0.25, 4.0));
    const Point e = u.sample(s), x = u.sample(s), y = u.sample(s);
    CHECK(dist(u, relative_circ(u, e, c1, a, x, y),
               relative_circ(u, e, c2, a, x, y)) < 1e-12);
  }
}

TEST_CASE("shuffle residual is symmetric under swapping the two scalars") {
  // Swapping a and b maps the medial law to itself with (x,y,u,v) relabeled
  // to (x,u,y,v); the residual must agree.
  const AlgebraHandle u = make_unipotent(3);
  Sampler s(41);
  for (int i = 0; i < 40; ++i) {
    const Scalar a(s.log_uniform(0.25, 4.0)), b(s.log_uniform(0.25, 4.0));
    const Point x = u.sample(s), y = u.sample(s), p = u.sample(s), q = u.sample(s);
    const double lhs = shuffle_residual(u, a, b, x, y, p, q);
    const double rhs = shuffle_residual(u, b, a, x, p, y, q);
    CHECK(lhs == doctest::Approx(rhs).epsilon(1e-12));
  }
}
