#include <doctest.h>

#include <cmath>
#include <functional>

#include "confbc/dm_bounds.hpp"

using namespace confbc;

namespace {

double h2(double p) { return p <= 0 || p >= 1 ? 0.0 : -p * std::log2(p) - (1 - p) * std::log2(1 - p); }

double entropy_of(const Eigen::VectorXd& p) {
  double s = 0;
  for (double v : p)
    if (v > 0) s -= v * std::log2(v);
  return s;
}

// I(X;Y) from an input law and a row-stochastic matrix, by direct summation.
double mi_oracle(const Eigen::VectorXd& px, const Eigen::MatrixXd& w) {
  double s = 0;
  const Eigen::VectorXd py = (px.transpose() * w).transpose();
  for (int x = 0; x < px.size(); ++x)
    for (int y = 0; y < w.cols(); ++y)
      if (px[x] > 0 && w(x, y) > 0) s += px[x] * w(x, y) * std::log2(w(x, y) / py[y]);
  return s;
}

double rhs_of(const ConstraintPolytope& p, const std::string& label) {
  for (const auto& c : p.constraints())
    if (c.label == label) return c.rhs;
  FAIL("no row " << label);
  return 0;
}

DmBroadcastChannel ex1(double c12, double c21) {
  return std::get<DmBroadcastChannel>(example_channel("dm-ex1", {0.2, 1.0, c12, c21}));
}

DmBroadcastChannel ex2(double c12, double c21) {
  return std::get<DmBroadcastChannel>(example_channel("dm-ex2", {0.2, 1.0, c12, c21}));
}

// Joint over U,V,W,X from a mass function.
JointPmf aux_law(int u, int v, int w, int x, const std::function<double(int, int, int, int)>& m) {
  Eigen::VectorXd e(u * v * w * x);
  int k = 0;
  for (int a = 0; a < u; ++a)
    for (int b = 0; b < v; ++b)
      for (int c = 0; c < w; ++c)
        for (int d = 0; d < x; ++d) e[k++] = m(a, b, c, d);
  return JointPmf({"U", "V", "W", "X"}, {u, v, w, x}, e);
}

Conditional identity(int n, int blocks = 1) {
  Eigen::MatrixXd t = Eigen::MatrixXd::Zero(n * blocks, n);
  for (int r = 0; r < n * blocks; ++r) t(r, r % n) = 1.0;
  return Conditional{t};
}

double support_gap(const ConstraintPolytope& a, const ConstraintPolytope& b, const Eigen::MatrixXd& dirs) {
  double m = 0;
  for (Eigen::Index i = 0; i < dirs.rows(); ++i) {
    const double x = support(a, dirs.row(i).transpose()), y = support(b, dirs.row(i).transpose());
    if (std::isinf(x) && x == y) continue;
    m = std::max(m, std::abs(x - y));
  }
  return m;
}

DmBroadcastChannel random_channel(Rng& rng, double c12, double c21) {
  return DmBroadcastChannel(2, 2, 2, rng.random_conditional(2, 4).table, c12, c21);
}

}  // namespace

TEST_CASE("outer bound rows with constant auxiliaries") {
  const auto ch = ex1(0.3, 0.5);
  const OuterAux aux{JointPmf({"U", "V", "X"}, {1, 1, 2}, Eigen::Vector2d(0.5, 0.5))};
  const ConstraintPolytope p = outer_polytope(ch, aux);
  CHECK(rhs_of(p, "R0+R1:U") == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(rhs_of(p, "R0+R2:V") == doctest::Approx(0.3).epsilon(1e-12));
  // X = Y1 xor Y2 on this channel, so the cut-set row is H(X)
  CHECK(rhs_of(p, "sum:cut") == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("outer bound on a noiseless channel with U = V = X") {
  Eigen::MatrixXd t = Eigen::MatrixXd::Zero(2, 4);
  t(0, 0) = 1;  // (y1,y2) = (0,0)
  t(1, 3) = 1;  // (1,1)
  const DmBroadcastChannel ch(2, 2, 2, t, 0, 0);
  Eigen::VectorXd e = Eigen::VectorXd::Zero(8);
  e[0] = 0.3;  // u = v = x = 0
  e[7] = 0.7;
  const ConstraintPolytope p = outer_polytope(ch, OuterAux{JointPmf({"U", "V", "X"}, {2, 2, 2}, e)});
  CHECK(rhs_of(p, "R0+R1:U") == doctest::Approx(h2(0.3)).epsilon(1e-12));
  CHECK(rhs_of(p, "R1:X|Y2,V") == doctest::Approx(h2(0.3)).epsilon(1e-12));
  CHECK(rhs_of(p, "sum:V+links") == doctest::Approx(h2(0.3)).epsilon(1e-12));
  CHECK(rhs_of(p, "sum:cut") == doctest::Approx(h2(0.3)).epsilon(1e-12));
}

TEST_CASE("outer envelope sum rate and grid nesting") {
  const auto ch = ex1(0.0, 0.9);
  const Eigen::MatrixXd dirs = normalized_rows(canonical_directions_2d());
  const RegionEnvelope coarse = outer_envelope(ch, 0.5, dirs);
  CHECK(coarse.along(Eigen::Vector2d(1, 1)) == doctest::Approx(1.0).epsilon(1e-9));
  const RegionEnvelope fine = outer_envelope(ch, 0.25, dirs);
  // every point of the 1/2 grid lies on the 1/4 grid
  CHECK(envelope_dominates(fine, coarse).dominated(1e-12));
  CHECK_THROWS_AS(outer_envelope(ch, 0.05, dirs), GridTooLargeError);
  CHECK_THROWS_AS(outer_envelope(ch, 0.75, dirs), InfoError);
}

TEST_CASE("first inner bound with U = X and every other auxiliary constant") {
  Rng rng(5);
  for (int i = 0; i < 20; ++i) {
    const DmBroadcastChannel ch = random_channel(rng, 0.3, 0.2);
    const Eigen::VectorXd px = rng.dirichlet(2);
    AuxFactorization f{aux_law(2, 1, 1, 2, [&](int u, int, int, int x) { return u == x ? px[x] : 0.0; }),
                       Conditional::trivial(4), Conditional::trivial(2)};
    const ConstraintPolytope p = inner1_polytope(ch, f);
    const double i1 = mi_oracle(px, ch.marginal_y1());
    CHECK(support(p, Eigen::Vector3d(1, 1, 1)) == doctest::Approx(i1).epsilon(1e-10));
    CHECK(support(p, Eigen::Vector3d(1, 1, 0)) == doctest::Approx(i1).epsilon(1e-10));
    CHECK(support(p, Eigen::Vector3d(0, 0, 1)) == doctest::Approx(std::min(0.3, i1)).epsilon(1e-10));
  }
}

TEST_CASE("capacity substitution turns the first inner bound into the capacity region") {
  Rng rng(8);
  const Eigen::MatrixXd dirs = fan_2d(61);
  for (const auto& ch : {ex1(0.3, 0.5), ex2(0.0, 0.9), ex2(0.2, 0.1)}) {
    for (int i = 0; i < 20; ++i) {
      const Eigen::MatrixXd pvx = grid_table(rng.dirichlet(4), 2, 2);
      const ConstraintPolytope in = project_r2_zero(inner1_polytope(ch, capacity_substitution(ch, pvx)));
      CHECK(support_gap(in, theorem4_polytope(ch, pvx), dirs) < 1e-9);
    }
  }
}

TEST_CASE("split of the 1->2 link") {
  Rng rng(13);
  const DmBroadcastChannel ch = random_channel(rng, 0.4, 0.3);
  const AuxFactorization f = random_factorization(rng, ch, 2, 2, 2, 2, 2, false, true);
  InnerTerms t = inner_terms(ch, f);
  // at alpha1 = 0 nothing of the link is spent on compression
  const InnerRows a = inner1_alpha_rows(t, 0.4, 0.3, 0.0, LinkTerm::clipped);
  t.i1 = 0.0;
  const InnerRows b = inner1_alpha_rows(t, 0.4, 0.3, 0.0, LinkTerm::clipped);
  CHECK(a.r02 == b.r02);
  CHECK(a.sum_b == b.sum_b);
  CHECK(a.binning_slack == b.binning_slack);
  CHECK_THROWS_AS(inner1_alpha_rows(t, 0.4, 0.3, 1.5, LinkTerm::clipped), InfoError);
}

TEST_CASE("optimal split") {
  Rng rng(17);
  const DmBroadcastChannel ch = random_channel(rng, 0.4, 0.3);
  AuxFactorization f = random_factorization(rng, ch, 2, 2, 2, 2, 2, false, true);
  // Yh1 independent of everything
  AuxFactorization quiet = f;
  quiet.q1 = Conditional::trivial(f.q1.parent_configs());
  CHECK(alpha1_star(ch, quiet) == 0.0);
  const InnerTerms t = inner_terms(ch, f);
  REQUIRE(t.alpha1_num > 1e-6);
  CHECK(alpha1_star(t, t.alpha1_num / 2) == 1.0);
  const DmBroadcastChannel wide(2, 2, 2, ch.transition, 2 * t.alpha1_num, 0.3);
  CHECK(alpha1_star(wide, f) == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(alpha1_star(t, 0.0) == 0.0);
}

TEST_CASE("sweeping the split never beats the optimal split") {
  Rng rng(19);
  const Eigen::MatrixXd dirs = fan_3d(64);
  for (int i = 0; i < 10; ++i) {
    const DmBroadcastChannel ch = random_channel(rng, 0.2 + 0.05 * i, 0.3);
    const AuxFactorization f = random_factorization(rng, ch, 2, 2, 2, 2, 2, false, true);
    const InnerTerms t = inner_terms(ch, f);
    const RegionEnvelope best = envelope_of(inner1_polytope(t, ch.c12, ch.c21), dirs);
    for (int k = 0; k <= 10; ++k) {
      const ConstraintPolytope p = inner1_alpha_rows(t, ch.c12, ch.c21, k / 10.0, LinkTerm::raw).polytope("a");
      CHECK(envelope_dominates(best, envelope_of(p, dirs)).dominated(1e-9));
    }
    const ConstraintPolytope at_star =
        inner1_alpha_rows(t, ch.c12, ch.c21, alpha1_star(t, ch.c12), LinkTerm::raw).polytope("a");
    CHECK(envelope_dominates(envelope_of(at_star, dirs), best).dominated(1e-9));
  }
}

TEST_CASE("idle quantizers: clipped rows equal raw rows of the reduced code") {
  Rng rng(23);
  const Eigen::MatrixXd dirs = fan_3d(64);
  for (int i = 0; i < 20; ++i) {
    const DmBroadcastChannel ch = random_channel(rng, 0.05 * i, 0.02 * i);
    const AuxFactorization f = random_factorization(rng, ch, 2, 2, 2, 3, 3, false, true);
    const double alpha = (i % 5) / 4.0;
    const ConstraintPolytope clipped = inner1_alpha_polytope(ch, f, alpha, LinkTerm::clipped);
    const ConstraintPolytope raw = inner1_alpha_polytope(ch, drop_idle_quantizers(ch, f, alpha), alpha, LinkTerm::raw);
    CHECK(support_gap(clipped, raw, dirs) < 1e-9);
  }
}

TEST_CASE("second inner bound") {
  Rng rng(29);
  const DmBroadcastChannel ch = random_channel(rng, 0.0, 0.4);
  const Eigen::MatrixXd pvx = rng.random_conditional(1, 6).table;
  // W constant, Yh1 and Yh2 constant
  AuxFactorization f{aux_law(1, 3, 1, 2, [&](int, int v, int, int x) { return pvx(0, v * 2 + x); }),
                     Conditional::trivial(2), Conditional::trivial(2)};
  const InnerTerms t = inner_terms(ch, f);
  const InnerRows r = inner2_alpha_rows(t, 0.0, 0.4, 0.5, LinkTerm::clipped);
  const JointPmf j = compose_joint(ch, f);
  CHECK(r.r02 == doctest::Approx(mutual_information(j, {"V"}, {"Y2"})).epsilon(1e-12));

  const AuxFactorization g = random_factorization(rng, ch, 2, 2, 2, 2, 2, true, true);
  InnerTerms u = inner_terms(ch, g);
  const InnerRows a = inner2_alpha_rows(u, 0.0, 0.4, 0.0, LinkTerm::clipped);
  u.i2 = 0.0;
  const InnerRows b = inner2_alpha_rows(u, 0.0, 0.4, 0.0, LinkTerm::clipped);
  CHECK(a.r01 == b.r01);
  CHECK(a.sum_a == b.sum_a);
  CHECK(alpha2_star(u, 0.0) == 0.0);
  // q2 may depend on w here
  CHECK_NOTHROW(inner2_polytope(ch, g));
  CHECK_THROWS_AS(inner1_polytope(ch, g), PreconditionError);
}

TEST_CASE("capacity region rows on the first example") {
  for (double q : {0.1, 0.3, 0.5, 0.8}) {
    const auto ch = ex1(0.3, 0.5);
    Eigen::MatrixXd pvx(1, 2);
    pvx << 1 - q, q;
    const ConstraintPolytope p = theorem4_polytope(ch, pvx);
    const double ixy1 = h2((1 - q) * 0.8 + q * 0.2) - h2(0.2);
    CHECK(support(p, Eigen::Vector2d(1, 0)) == doctest::Approx(std::min(0.3, std::min(ixy1 + 0.5, h2(q)))));
    CHECK(support(p, Eigen::Vector2d(1, 1)) == doctest::Approx(std::min(ixy1 + 0.5, h2(q))).epsilon(1e-12));
  }
}

TEST_CASE("capacity region rows on the second example") {
  Rng rng(31);
  const auto ch = ex2(0.2, 0.4);
  const Eigen::MatrixXd w2 = ch.marginal_y2();
  for (int i = 0; i < 10; ++i) {
    const Eigen::MatrixXd pvx = grid_table(rng.dirichlet(6), 3, 2);
    const Eigen::VectorXd pv = pvx.rowwise().sum();
    double h_x_v = entropy_of(pvx.reshaped<Eigen::RowMajor>()) - entropy_of(pv);
    double i_v_y2 = 0;
    const Eigen::VectorXd px = pvx.colwise().sum().transpose();
    i_v_y2 = entropy_of((px.transpose() * w2).transpose());
    for (int v = 0; v < 3; ++v)
      if (pv[v] > 0) i_v_y2 -= pv[v] * entropy_of((pvx.row(v) / pv[v] * w2).transpose());
    const ConstraintPolytope p = theorem4_polytope(ch, pvx);
    // X = Y1 xor Y2, so I(X;Y1,Y2|V) = H(X|V)
    CHECK(rhs_of(p, "R0+R1:joint|V") == doctest::Approx(h_x_v + i_v_y2 + 0.2).epsilon(1e-10));
    CHECK(rhs_of(p, "R0:V") == doctest::Approx(i_v_y2 + 0.2).epsilon(1e-10));
    CHECK(rhs_of(p, "R0+R1:cut") == doctest::Approx(entropy_of(px)).epsilon(1e-10));
  }
}

TEST_CASE("capacity envelope with constant V is limited by the 1->2 link") {
  const auto ch = ex1(0.1, 0.9);
  const RegionEnvelope env = theorem4_envelope(ch, 1, 0.01, normalized_rows(canonical_directions_2d()));
  CHECK(env.along(Eigen::Vector2d(1, 0)) == doctest::Approx(0.1).epsilon(1e-12));
  CHECK(env.along(Eigen::Vector2d(1, 1)) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("one-sided capacity region") {
  const auto ch = ex1(0.0, 0.25);
  Eigen::MatrixXd pvx(1, 2);
  pvx << 0.5, 0.5;
  const ConstraintPolytope p = theorem5_polytope(ch, pvx);
  const double ixy1 = 1.0 - h2(0.2);
  CHECK(support(p, Eigen::Vector3d(0, 0, 1)) == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(support(p, Eigen::Vector3d(0, 1, 0)) == doctest::Approx(std::min(ixy1 + 0.25, 1.0)).epsilon(1e-12));
  // C12 plays no part
  const ConstraintPolytope q = theorem5_polytope(ex1(0.7, 0.25), pvx);
  CHECK(support_gap(p, q, fan_3d(64)) == 0.0);

  const DmBroadcastChannel noisy(2, 2, 2, Eigen::MatrixXd::Constant(2, 4, 0.25), 0, 0);
  CHECK_THROWS_AS(theorem5_polytope(noisy, pvx), PreconditionError);
  CHECK_THROWS_AS(theorem4_polytope(noisy, pvx), PreconditionError);
}

TEST_CASE("primitive relay closed forms") {
  Rng rng(37);
  for (int i = 0; i < 10; ++i) {
    const DmBroadcastChannel base = random_channel(rng, 0, 0);
    const Eigen::VectorXd px = rng.dirichlet(2);
    const Eigen::MatrixXd pwx = px.transpose();
    const double ixy2 = mi_oracle(px, base.marginal_y2());
    const double cut = mi_oracle(px, base.transition);
    // silent relay
    const DmBroadcastChannel c1(2, 2, 2, base.transition, 0.5, 0);
    CHECK(primitive_relay_rate(c1, pwx, Conditional::trivial(2)) == doctest::Approx(ixy2).epsilon(1e-10));
    // a link wider than H(Y1|Y2) forwards Y1 losslessly: the cut-set rate
    const DmBroadcastChannel c2(2, 2, 2, base.transition, 1.0, 0);
    CHECK(primitive_relay_rate(c2, pwx, identity(2)) == doctest::Approx(cut).epsilon(1e-10));
    // no link, lossless forwarding: I(X;Y2) - H(Y1|X,Y2)
    const DmBroadcastChannel c3(2, 2, 2, base.transition, 0.0, 0);
    double h_y1_xy2 = 0;
    for (int x = 0; x < 2; ++x)
      h_y1_xy2 += px[x] * (entropy_of(base.transition.row(x).transpose()) -
                           entropy_of(base.marginal_y2().row(x).transpose()));
    CHECK(primitive_relay_rate(c3, pwx, identity(2)) == doctest::Approx(ixy2 - h_y1_xy2).epsilon(1e-10));
  }
}

TEST_CASE("partial-rate system projects onto the split region") {
  Rng rng(41);
  const Eigen::MatrixXd dirs = fan_3d(64);
  for (int i = 0; i < 5; ++i) {
    const DmBroadcastChannel ch = random_channel(rng, 0.3, 0.2);
    const AuxFactorization f = random_factorization(rng, ch, 2, 2, 2, 2, 2, false, true);
    const double alpha = i / 4.0;
    const LinearSystem s = appendixB_system(ch, f, alpha);
    CHECK(s.variables.size() == 9);
    const ConstraintPolytope projected = to_polytope(fm_eliminate(s, appendixB_partial_rates()));
    const ConstraintPolytope direct = inner1_alpha_polytope(ch, f, alpha, LinkTerm::clipped);
    CHECK(support_gap(projected, direct, dirs) < 1e-9);
  }
}

TEST_CASE("inner regions respect the cut-set and single-receiver limits") {
  Rng rng(43);
  for (int i = 0; i < 30; ++i) {
    const DmBroadcastChannel ch = random_channel(rng, 0.1 * (i % 4), 0.1 * (i % 3));
    const AuxFactorization f = random_factorization(rng, ch, 2, 2, 2, 2, 2, false, true);
    const Eigen::VectorXd px = compose_joint(ch, f).marginal({"X"}).entries();
    const double cut = mi_oracle(px, ch.transition);
    for (const ConstraintPolytope& p : {inner1_polytope(ch, f), inner2_polytope(ch, f)}) {
      CHECK(support(p, Eigen::Vector3d(1, 1, 1)) <= cut + 1e-10);
      CHECK(support(p, Eigen::Vector3d(1, 1, 0)) <= mi_oracle(px, ch.marginal_y1()) + ch.c21 + 1e-10);
      CHECK(support(p, Eigen::Vector3d(1, 0, 1)) <= mi_oracle(px, ch.marginal_y2()) + ch.c12 + 1e-10);
    }
  }
}
