#include "confbc/gaussian_bounds.hpp"

#include <algorithm>
#include <cmath>
#include <functional>

namespace confbc {

namespace {

void check_unit(double v, const char* what) {
  if (!(v >= 0.0 && v <= 1.0)) throw InfoError(std::string(what) + " must lie in [0,1]");
}

// s * kappa * P. An infinite kappa stays infinite even at s = 0: the rows
// it feeds are absent, which gives the closure of the union as s -> 0+.
double scaled_snr(double s, double kap, double power) {
  if (std::isinf(kap)) return kInf;
  return s * kap * power;
}

// psi((1-s) g^2 P / (s g^2 P + 1))
double psi_split(double gain, double s, double power) {
  const double g2p = gain * gain * power;
  return psi((1.0 - s) * g2p / (s * g2p + 1.0));
}

void require_stronger_first(const GaussianBc& ch, const char* what) {
  if (!ch.first_is_stronger())
    throw PreconditionError(std::string(what) +
                    ": requires |a| >= |b|; relabel the receivers so the stronger one is receiver 1");
}

void require_perfect_correlation(const GaussianBc& ch, const char* what) {
  if (!ch.perfectly_correlated())
    throw PreconditionError(std::string(what) + ": requires |lambda| = 1; use the half-bit regions for |lambda| < 1");
  if (ch.degraded_correlation())
    throw PreconditionError(std::string(what) + ": requires lambda != b/a (the channel is degraded)");
}

void require_imperfect_correlation(const GaussianBc& ch, const char* what) {
  if (ch.perfectly_correlated())
    throw PreconditionError(std::string(what) + ": requires |lambda| < 1; use the exact regions at |lambda| = 1");
}

double clip_half(double c) { return std::max(0.0, c - 0.5); }

}  // namespace

double psi(double x) {
  if (std::isnan(x) || x < 0.0) throw InfoError("psi: argument must be >= 0");
  if (std::isinf(x)) return kInf;
  return 0.5 * std::log2(1.0 + x);
}

void GaussianRegionParams::validate() const {
  channel.validate();
  check_unit(alpha, "alpha");
  check_unit(beta, "beta");
}

double psi_b(const GaussianBc& ch, double beta) {
  check_unit(beta, "beta");
  return psi_split(ch.b, beta, ch.power);
}

double half_bit_coefficient(const GaussianBc& ch) {
  const double l2 = ch.lambda * ch.lambda;
  return (ch.a * ch.a + ch.b * ch.b - 2.0 * ch.lambda * ch.a * ch.b + (1.0 - l2) * ch.a * ch.a) /
         (2.0 * (1.0 - l2));
}

std::vector<double> unit_grid(double step) {
  if (!(step > 0.0 && step <= 1.0)) throw InfoError("grid step must lie in (0,1]");
  const auto n = static_cast<int>(std::llround(std::ceil(1.0 / step - 1e-9)));
  std::vector<double> g(std::size_t(n) + 1);
  for (int i = 0; i <= n; ++i) g[std::size_t(i)] = std::min(1.0, double(i) * step);
  g.back() = 1.0;
  return g;
}

ConstraintPolytope outer_polytope_g(const GaussianBc& ch, double alpha, double beta) {
  ch.validate();
  require_stronger_first(ch, "outer_polytope_g");
  check_unit(alpha, "alpha");
  check_unit(beta, "beta");
  const double P = ch.power, kap = kappa(ch.a, ch.b, ch.lambda);
  const double psi1 = psi(scaled_snr(alpha, kap, P)), psi2 = psi(scaled_snr(beta, kap, P));
  const double pb = psi_b(ch, beta);
  const double pa_alpha = psi_split(ch.a, alpha, P);
  ConstraintPolytope p = ConstraintPolytope::rate_space(3);
  p.add("R0+R1:split-a", {1, 1, 0}, pa_alpha + ch.c21)
      .add("R1:kappa-beta", {0, 1, 0}, psi2 + pb)
      .add("R0+R2:cloud", {1, 0, 1}, pb + ch.c12)
      .add("R2:kappa-alpha", {0, 0, 1}, psi1 + psi_split(ch.b, alpha, P))
      .add("sum:links", {1, 1, 1}, psi(beta * ch.a * ch.a * P) + pb + ch.c12 + ch.c21)
      .add("sum:kappa-beta", {1, 1, 1}, psi2 + pb + ch.c12)
      .add("sum:kappa-alpha", {1, 1, 1}, psi1 + pa_alpha + ch.c21)
      .add("sum:cut", {1, 1, 1}, psi(scaled_snr(1.0, kap, P)));
  return p;
}

RegionEnvelope outer_envelope_g(const GaussianBc& ch, double param_step, const Eigen::MatrixXd& directions) {
  if (!(param_step > 0.0 && param_step <= 0.25)) throw InfoError("outer_envelope_g: param_step must lie in (0,0.25]");
  if (directions.cols() != 2 && directions.cols() != 3)
    throw InfoError("outer_envelope_g: directions must be 2-D (R2 = 0) or 3-D");
  const bool flat = directions.cols() == 2;
  EnvelopeAccumulator acc(directions);
  const auto grid = unit_grid(param_step);
  for (double alpha : grid)
    for (double beta : grid) {
      const ConstraintPolytope p = outer_polytope_g(ch, alpha, beta);
      acc.add(flat ? project_r2_zero(p) : p);
    }
  return acc.result();
}

ConstraintPolytope capacity_t7_polytope(const GaussianBc& ch, double beta) {
  ch.validate();
  require_perfect_correlation(ch, "capacity_t7_polytope");
  check_unit(beta, "beta");
  if (!ch.first_is_stronger()) beta = 0.0;
  const double P = ch.power, pb = psi_b(ch, beta);
  ConstraintPolytope p = ConstraintPolytope::rate_space(2);
  p.add("R0:cloud", {1, 0}, pb + ch.c12)
      .add("R0+R1:Y1", {1, 1}, psi(ch.a * ch.a * P) + ch.c21)
      .add("R0+R1:links", {1, 1}, psi(beta * ch.a * ch.a * P) + pb + ch.c12 + ch.c21);
  return p;
}

ConstraintPolytope capacity_t8_polytope(const GaussianBc& ch, double beta) {
  ch.validate();
  require_perfect_correlation(ch, "capacity_t8_polytope");
  require_stronger_first(ch, "capacity_t8_polytope");
  if (ch.c12 != 0.0) throw PreconditionError("capacity_t8_polytope: requires C12 = 0 (one-sided conferencing)");
  const double pb = psi_b(ch, beta);
  ConstraintPolytope p = ConstraintPolytope::rate_space(3);
  p.add("R0+R2:cloud", {1, 0, 1}, pb).add("sum:links", {1, 1, 1}, psi(beta * ch.a * ch.a * ch.power) + pb + ch.c21);
  return p;
}

ConstraintPolytope approx_t9_polytope(const GaussianBc& ch, double beta) {
  ch.validate();
  require_imperfect_correlation(ch, "approx_t9_polytope");
  require_stronger_first(ch, "approx_t9_polytope");
  const double P = ch.power, pb = psi_b(ch, beta), k2 = half_bit_coefficient(ch);
  const double a2p = ch.a * ch.a * P;
  ConstraintPolytope p = ConstraintPolytope::rate_space(2);
  p.add("R0:cloud", {1, 0}, pb + ch.c12)
      .add("R0+R1:Y1", {1, 1}, psi(a2p) + clip_half(ch.c21))
      .add("R0+R1:half-bit", {1, 1}, psi(k2 * P))
      .add("R0+R1:links", {1, 1}, psi(beta * a2p) + pb + clip_half(ch.c21) + ch.c12)
      .add("R0+R1:half-bit-beta", {1, 1}, psi(beta * k2 * P) + pb + ch.c12);
  return p;
}

ConstraintPolytope approx_t10_polytope(const GaussianBc& ch, double beta) {
  ch.validate();
  require_imperfect_correlation(ch, "approx_t10_polytope");
  require_stronger_first(ch, "approx_t10_polytope");
  if (ch.c12 != 0.0) throw PreconditionError("approx_t10_polytope: requires C12 = 0 (one-sided conferencing)");
  const double P = ch.power, pb = psi_b(ch, beta), k2 = half_bit_coefficient(ch);
  ConstraintPolytope p = ConstraintPolytope::rate_space(3);
  p.add("R0+R2:cloud", {1, 0, 1}, pb)
      .add("sum:half-bit", {1, 1, 1}, psi(k2 * P))
      .add("sum:links", {1, 1, 1}, psi(beta * ch.a * ch.a * P) + pb + clip_half(ch.c21))
      .add("sum:half-bit-beta", {1, 1, 1}, psi(beta * k2 * P) + pb);
  return p;
}

ConstraintPolytope df_inner_polytope(const GaussianBc& ch, double beta) {
  ch.validate();
  const double P = ch.power, pb = psi_b(ch, beta);
  ConstraintPolytope p = ConstraintPolytope::rate_space(3);
  p.add("R0+R2:cloud", {1, 0, 1}, pb + ch.c12)
      .add("sum:Y1", {1, 1, 1}, psi(ch.a * ch.a * P))
      .add("sum:df", {1, 1, 1}, psi(beta * ch.a * ch.a * P) + pb + ch.c12);
  return p;
}

double gap_bound_t11(double lambda) {
  if (!(std::abs(lambda) <= 1.0)) throw InfoError("gap_bound_t11: |lambda| must be <= 1");
  if (std::abs(lambda) == 1.0) return kInf;
  return 0.5 * std::log2(2.0 / (1.0 - std::abs(lambda)));
}

double gap_bound_t11_aligned(double lambda) {
  if (!(std::abs(lambda) <= 1.0)) throw InfoError("gap_bound_t11_aligned: |lambda| must be <= 1");
  if (std::abs(lambda) == 1.0) return kInf;
  return 0.5 * std::log2(2.0 / (1.0 - lambda * lambda));
}

double GapCertificate::max_excess() const {
  double m = -kInf;
  for (const auto& r : rows) m = std::max(m, r.gap - r.allowed);
  return m;
}

GapCertificate gap_certificate(const GaussianBc& ch, double param_step) {
  ch.validate();
  require_imperfect_correlation(ch, "gap_certificate");
  require_stronger_first(ch, "gap_certificate");
  const auto grid = unit_grid(param_step);
  const double P = ch.power, a2p = ch.a * ch.a * P;
  const double kap = kappa(ch.a, ch.b, ch.lambda), k2 = half_bit_coefficient(ch);

  // Outer rows as functions of (alpha, beta) for link capacities (c12, c21).
  using RowFn = std::function<double(double, double)>;
  GapCertificate cert;
  auto pair = [&](const std::string& thm, const std::string& name, double allowed, bool alpha_dependent,
                  const RowFn& outer, const RowFn& inner) {
    RowGap r{thm, name, allowed, -kInf, 0.0, 0.0};
    for (double beta : grid) {
      double best_outer = -kInf, arg_alpha = 0.0;
      if (alpha_dependent) {
        for (double alpha : grid) {
          const double v = outer(alpha, beta);
          if (v > best_outer) {
            best_outer = v;
            arg_alpha = alpha;
          }
        }
      } else {
        best_outer = outer(0.0, beta);
      }
      const double g = best_outer - inner(0.0, beta);
      if (g > r.gap) {
        r.gap = g;
        r.worst_alpha = arg_alpha;
        r.worst_beta = beta;
      }
    }
    cert.rows.push_back(r);
  };

  auto pb = [&](double beta) { return psi_b(ch, beta); };
  auto split_row = [&](double c21) {
    return [&, c21](double alpha, double) { return psi_split(ch.a, alpha, P) + c21; };
  };
  auto cloud_row = [&](double c12) { return [&, c12](double, double beta) { return pb(beta) + c12; }; };
  auto links_row = [&](double c12, double c21) {
    return [&, c12, c21](double, double beta) { return psi(beta * a2p) + pb(beta) + c12 + c21; };
  };
  auto kappa_beta_row = [&](double c12) {
    return [&, c12](double, double beta) { return psi(scaled_snr(beta, kap, P)) + pb(beta) + c12; };
  };
  const RowFn cut_row = [&](double, double) { return psi(kap * P); };
  const double c12 = ch.c12, c21 = ch.c21;

  // degraded message sets, bidirectional links
  pair("t9", "common:cloud", 0.5, false, cloud_row(c12), [&](double, double beta) { return pb(beta) + c12; });
  pair("t9", "R0+R1:Y1 vs split-a", 0.5, true, split_row(c21),
       [&](double, double) { return psi(a2p) + clip_half(c21); });
  pair("t9", "half-bit vs cut", 0.5, false, cut_row, [&](double, double) { return psi(k2 * P); });
  pair("t9", "links vs links", 0.5, false, links_row(c12, c21),
       [&](double, double beta) { return psi(beta * a2p) + pb(beta) + clip_half(c21) + c12; });
  pair("t9", "half-bit-beta vs kappa-beta", 0.5, false, kappa_beta_row(c12),
       [&](double, double beta) { return psi(beta * k2 * P) + pb(beta) + c12; });

  // one-sided conferencing: the 1->2 link is taken as absent
  pair("t10", "common:cloud", 0.5, false, cloud_row(0.0), [&](double, double beta) { return pb(beta); });
  pair("t10", "half-bit vs cut", 0.5, false, cut_row, [&](double, double) { return psi(k2 * P); });
  pair("t10", "links vs links", 0.5, false, links_row(0.0, c21),
       [&](double, double beta) { return psi(beta * a2p) + pb(beta) + clip_half(c21); });
  pair("t10", "half-bit-beta vs kappa-beta", 0.5, false, kappa_beta_row(0.0),
       [&](double, double beta) { return psi(beta * k2 * P) + pb(beta); });

  // decode-and-forward
  const RowFn df_y1 = [&](double, double) { return psi(a2p); };
  const RowFn df_split = [&](double, double beta) { return psi(beta * a2p) + pb(beta) + c12; };
  pair("t11", "common:cloud", 0.0, false, cloud_row(c12), [&](double, double beta) { return pb(beta) + c12; });
  const double bound = gap_bound_t11(ch.lambda);
  pair("t11", "Y1 vs cut", bound, false, cut_row, df_y1);
  pair("t11", "df vs kappa-beta", bound, false, kappa_beta_row(c12), df_split);
  if (ch.lambda * ch.a * ch.b >= 0.0) {
    const double aligned = gap_bound_t11_aligned(ch.lambda);
    pair("t11-aligned", "Y1 vs cut", aligned, false, cut_row, df_y1);
    pair("t11-aligned", "df vs kappa-beta", aligned, false, kappa_beta_row(c12), df_split);
  }
  return cert;
}

}  // namespace confbc
