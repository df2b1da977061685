#include <doctest.h>

#include <cmath>

#include "confbc/gaussian_bounds.hpp"

using namespace confbc;

namespace {

double half_log(double x) { return 0.5 * std::log(1.0 + x) / std::log(2.0); }

double rhs_of(const ConstraintPolytope& p, const std::string& label) {
  for (const auto& c : p.constraints())
    if (c.label == label) return c.rhs;
  FAIL("no row " << label);
  return 0;
}

GaussianBc mirror(double P, double c12, double c21) {
  return std::get<GaussianBc>(example_channel("g-mirror", {0.2, P, c12, c21}));
}

}  // namespace

TEST_CASE("psi") {
  CHECK(psi(0.0) == 0.0);
  CHECK(psi(1.0) == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(psi(3.0) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(std::isinf(psi(kInf)));
  CHECK_THROWS_AS(psi(-1.0), InfoError);
  Rng rng(2);
  for (int i = 0; i < 200; ++i) {
    const double x = 10 * rng.uniform(), y = 10 * rng.uniform(), t = rng.uniform();
    CHECK(psi(x) == doctest::Approx(half_log(x)).epsilon(1e-14));
    CHECK(psi(t * x + (1 - t) * y) >= t * psi(x) + (1 - t) * psi(y) - 1e-14);
  }
}

TEST_CASE("outer rows at perfectly anti-correlated noise") {
  const GaussianBc g = mirror(1.0, 0.2, 0.3);
  const ConstraintPolytope p = outer_polytope_g(g, 0.0, 0.0);
  CHECK(rhs_of(p, "R0+R1:split-a") == doctest::Approx(0.5 + 0.3).epsilon(1e-14));
  CHECK(rhs_of(p, "R0+R2:cloud") == doctest::Approx(0.5 + 0.2).epsilon(1e-14));
  // kappa is infinite: every kappa row is absent
  for (const char* label : {"R1:kappa-beta", "R2:kappa-alpha", "sum:kappa-beta", "sum:kappa-alpha", "sum:cut"})
    CHECK(std::isinf(rhs_of(p, label)));
  CHECK(std::isinf(rhs_of(outer_polytope_g(g, 0.7, 0.2), "sum:cut")));
}

TEST_CASE("outer rows with finite kappa") {
  const GaussianBc g{1.0, 0.5, 0.3, 4.0, 0.2, 0.7};
  const double kap = kappa(1.0, 0.5, 0.3);
  const ConstraintPolytope p = outer_polytope_g(g, 0.25, 0.5);
  CHECK(rhs_of(p, "sum:cut") == doctest::Approx(half_log(kap * 4.0)).epsilon(1e-14));
  CHECK(rhs_of(p, "R1:kappa-beta") ==
        doctest::Approx(half_log(0.5 * kap * 4.0) + half_log(0.5 * 0.25 * 4 / (0.5 * 0.25 * 4 + 1))).epsilon(1e-14));
  CHECK(rhs_of(p, "R0+R1:split-a") == doctest::Approx(half_log(0.75 * 4 / (0.25 * 4 + 1)) + 0.7).epsilon(1e-14));
  CHECK_THROWS_AS(outer_polytope_g(GaussianBc{0.5, 1.0, 0.3, 1.0, 0, 0}, 0, 0), PreconditionError);
  CHECK_THROWS_AS(outer_polytope_g(g, 1.5, 0), InfoError);
}

TEST_CASE("outer envelope grows with power") {
  const Eigen::MatrixXd dirs = fan_3d(64);
  const RegionEnvelope lo = outer_envelope_g(GaussianBc{1.0, 0.5, 0.3, 1.0, 0.2, 0.7}, 0.05, dirs);
  const RegionEnvelope hi = outer_envelope_g(GaussianBc{1.0, 0.5, 0.3, 2.0, 0.2, 0.7}, 0.05, dirs);
  CHECK(envelope_dominates(hi, lo).dominated(1e-12));
}

TEST_CASE("capacity with perfectly correlated noise") {
  const Eigen::MatrixXd dirs = normalized_rows(canonical_directions_2d());
  const GaussianBc g = mirror(1.0, 1.0, 1.0);
  const RegionEnvelope e = beta_envelope([&](double b) { return capacity_t7_polytope(g, b); }, 1e-3, dirs);
  CHECK(e.along(rates(1, 0)) == doctest::Approx(psi(1.0) + 1.0).epsilon(1e-12));
  CHECK(e.along(rates(1, 1)) == doctest::Approx(1.5).epsilon(1e-12));

  // noise only at receiver 2: R0 limited by C12, sum by the direct link
  const auto n2 = std::get<GaussianBc>(example_channel("g-noise-at-2", {0.2, 3.0, 0.4, 0.6}));
  const RegionEnvelope e2 = beta_envelope([&](double b) { return capacity_t7_polytope(n2, b); }, 1e-3, dirs);
  CHECK(e2.along(rates(1, 0)) == doctest::Approx(0.4).epsilon(1e-12));
  CHECK(e2.along(rates(1, 1)) == doctest::Approx(1.0 + 0.6).epsilon(1e-12));
  const auto n1 = std::get<GaussianBc>(example_channel("g-noise-at-1", {0.2, 3.0, 0.4, 0.6}));
  const RegionEnvelope e1 = beta_envelope([&](double b) { return capacity_t7_polytope(n1, b); }, 1e-3, dirs);
  CHECK(e1.along(rates(1, 1)) == doctest::Approx(0.6).epsilon(1e-12));

  CHECK_THROWS_AS(capacity_t7_polytope(GaussianBc{1.0, 0.5, 0.3, 1.0, 0, 0}, 0.5), PreconditionError);
  // lambda = b/a is the degraded case
  CHECK_THROWS_AS(capacity_t7_polytope(GaussianBc{1.0, 1.0, 1.0, 1.0, 0, 0}, 0.5), PreconditionError);
}

TEST_CASE("one-sided capacity with perfectly correlated noise") {
  const GaussianBc g{1.0, 0.5, 1.0, 4.0, 0.0, 0.3};
  const ConstraintPolytope top = capacity_t8_polytope(g, 1.0);
  CHECK(support(top, rates(1, 0, 1)) == doctest::Approx(0.0).epsilon(1e-15));
  CHECK(support(top, rates(0, 1, 0)) == doctest::Approx(half_log(4.0) + 0.3).epsilon(1e-14));
  const ConstraintPolytope bottom = capacity_t8_polytope(g, 0.0);
  CHECK(support(bottom, rates(1, 0, 1)) == doctest::Approx(0.5).epsilon(1e-14));
  CHECK(support(bottom, rates(1, 1, 1)) == doctest::Approx(0.5 + 0.3).epsilon(1e-14));
  CHECK_THROWS_AS(capacity_t8_polytope(GaussianBc{1.0, 0.5, 1.0, 4.0, 0.1, 0.3}, 0.5), PreconditionError);
}

TEST_CASE("half-bit regions") {
  const GaussianBc g{1.0, 1.0, 0.0, 2.0, 0.1, 0.3};
  CHECK(half_bit_coefficient(g) == doctest::Approx(1.5).epsilon(1e-15));
  const ConstraintPolytope lo = approx_t9_polytope(g, 0.5);
  CHECK(rhs_of(lo, "R0+R1:Y1") == doctest::Approx(half_log(2.0)).epsilon(1e-15));
  GaussianBc wide = g;
  wide.c21 = 0.8;
  CHECK(rhs_of(approx_t9_polytope(wide, 0.5), "R0+R1:Y1") == doctest::Approx(half_log(2.0) + 0.3).epsilon(1e-14));
  CHECK(rhs_of(lo, "R0+R1:half-bit") == doctest::Approx(half_log(3.0)).epsilon(1e-14));
  CHECK_THROWS_AS(approx_t9_polytope(mirror(1, 0, 0), 0.5), PreconditionError);
  CHECK_THROWS_AS(approx_t10_polytope(g, 0.5), PreconditionError);  // C12 != 0
  GaussianBc one_sided = g;
  one_sided.c12 = 0.0;
  CHECK(support(approx_t10_polytope(one_sided, 1.0), rates(1, 0, 1)) == doctest::Approx(0.0).epsilon(1e-15));
}

TEST_CASE("decode-and-forward region") {
  const GaussianBc g{1.0, 0.5, 0.3, 4.0, 0.2, 0.7};
  const ConstraintPolytope p = df_inner_polytope(g, 0.0);
  CHECK(support(p, rates(1, 0, 1)) == doctest::Approx(half_log(1.0) + 0.2).epsilon(1e-14));
  CHECK(support(p, rates(1, 1, 1)) == doctest::Approx(std::min(half_log(4.0), half_log(1.0) + 0.2)).epsilon(1e-14));
  CHECK(support(df_inner_polytope(g, 1.0), rates(1, 1, 1)) == doctest::Approx(half_log(4.0)).epsilon(1e-14));
}

TEST_CASE("decode-and-forward lies inside the outer bound") {
  const Eigen::MatrixXd dirs = fan_3d(64);
  Rng rng(9);
  for (int i = 0; i < 6; ++i) {
    double a = 4 * rng.uniform() - 2, b = 4 * rng.uniform() - 2;
    if (std::abs(a) < std::abs(b)) std::swap(a, b);
    const GaussianBc g{a, b, 1.8 * rng.uniform() - 0.9, 5 * rng.uniform() + 0.1, rng.uniform(), rng.uniform()};
    const RegionEnvelope df = beta_envelope([&](double s) { return df_inner_polytope(g, s); }, 0.05, dirs);
    CHECK(envelope_dominates(outer_envelope_g(g, 0.05, dirs), df).dominated(1e-12));
  }
}

TEST_CASE("gap bounds") {
  CHECK(gap_bound_t11(0.0) == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(gap_bound_t11(0.5) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(gap_bound_t11(-0.5) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(gap_bound_t11_aligned(std::sqrt(0.5)) == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(std::isinf(gap_bound_t11(1.0)));
  CHECK_THROWS_AS(gap_bound_t11(1.2), InfoError);
  for (double l = -0.95; l < 0.96; l += 0.05) CHECK(gap_bound_t11_aligned(l) <= gap_bound_t11(l) + 1e-15);
}

TEST_CASE("gap certificates") {
  const GapCertificate aligned = gap_certificate(GaussianBc{1.0, 0.5, 0.3, 4.0, 0.2, 0.7}, 1e-2);
  CHECK(aligned.rows.size() == 14);
  CHECK(aligned.holds());
  const GapCertificate crossed = gap_certificate(GaussianBc{1.0, 0.5, -0.3, 4.0, 0.2, 0.7}, 1e-2);
  CHECK(crossed.rows.size() == 12);
  CHECK(crossed.holds());
  for (const RowGap& r : crossed.rows) {
    CHECK(r.slack() >= -1e-9);
    CHECK(r.worst_beta >= 0.0);
    CHECK(r.worst_beta <= 1.0);
  }
  // lambda = b/a: decode-and-forward meets the outer bound row by row
  for (const RowGap& r : gap_certificate(GaussianBc{2.0, 1.0, 0.5, 1.0, 0.3, 0.4}, 1e-2).rows)
    if (r.theorem == "t11") CHECK(r.gap <= 1e-9);
  CHECK_THROWS_AS(gap_certificate(mirror(1, 0, 0), 1e-2), PreconditionError);
}

TEST_CASE("vanishing power leaves the links") {
  const Eigen::MatrixXd dirs = normalized_rows(canonical_directions_2d());
  const GaussianBc g = mirror(1e-6, 0.8, 0.4);
  const RegionEnvelope e = beta_envelope([&](double b) { return capacity_t7_polytope(g, b); }, 1e-3, dirs);
  CHECK(e.along(rates(1, 0)) == doctest::Approx(0.4).epsilon(1e-6));
  CHECK(e.along(rates(1, 1)) == doctest::Approx(0.4).epsilon(1e-5));
}

TEST_CASE("unit grid") {
  const auto g = unit_grid(0.3);
  CHECK(g.front() == 0.0);
  CHECK(g.back() == 1.0);
  CHECK(g.size() == 5);
  CHECK(unit_grid(1e-3).size() == 1001);
  CHECK_THROWS_AS(unit_grid(0.0), InfoError);
}
