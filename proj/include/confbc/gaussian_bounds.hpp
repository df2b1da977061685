// Closed-form regions for the scalar Gaussian BC with conferencing decoders.
#pragma once

#include <string>
#include <vector>

#include "confbc/channels.hpp"
#include "confbc/regions.hpp"

namespace confbc {

/// 0.5 log2(1 + x); psi(+inf) = +inf. Throws for negative x.
double psi(double x);

/// Power-split parameters of the Gaussian regions.
struct GaussianRegionParams {
  GaussianBc channel;
  double alpha = 0.0;
  double beta = 0.0;
  void validate() const;
};

/// psi((1-beta) b^2 P / (beta b^2 P + 1)), the cloud rate seen by receiver 2.
double psi_b(const GaussianBc& ch, double beta);

/// Eight rows over (R0,R1,R2). Rows whose value involves an infinite kappa
/// are kept with rhs +inf (absent). Requires |a| >= |b|.
ConstraintPolytope outer_polytope_g(const GaussianBc& ch, double alpha, double beta);
/// Union over an (alpha, beta) grid. Two-column directions give the R2 = 0
/// projection.
RegionEnvelope outer_envelope_g(const GaussianBc& ch, double param_step, const Eigen::MatrixXd& directions);

/// Exact region over (R0,R1) at |lambda| = 1, lambda != b/a.
/// With |a| < |b| beta is pinned to 0.
ConstraintPolytope capacity_t7_polytope(const GaussianBc& ch, double beta);
/// Exact region over (R0,R1,R2) at |lambda| = 1, lambda != b/a, C12 = 0.
ConstraintPolytope capacity_t8_polytope(const GaussianBc& ch, double beta);
/// Half-bit regions for |lambda| < 1: degraded message sets over (R0,R1),
/// and one-sided conferencing (C12 = 0) over (R0,R1,R2).
ConstraintPolytope approx_t9_polytope(const GaussianBc& ch, double beta);
ConstraintPolytope approx_t10_polytope(const GaussianBc& ch, double beta);
/// Decode-and-forward inner region over (R0,R1,R2).
ConstraintPolytope df_inner_polytope(const GaussianBc& ch, double beta);

/// (a^2 + b^2 - 2 lambda a b + (1 - lambda^2) a^2) / (2 (1 - lambda^2)).
double half_bit_coefficient(const GaussianBc& ch);

/// Envelope of a one-parameter family over beta = 0, step, ..., 1.
template <typename Family>
RegionEnvelope beta_envelope(Family&& family, double step, const Eigen::MatrixXd& directions);

/// Grid 0, step, ..., 1 with the last point exactly 1.
std::vector<double> unit_grid(double step);

/// 0.5 log2(2 / (1 - |lambda|)); +inf at |lambda| = 1.
double gap_bound_t11(double lambda);
/// 0.5 log2(2 / (1 - lambda^2)), available when lambda a b >= 0.
double gap_bound_t11_aligned(double lambda);

/// One paired-row comparison: outer row minus inner row at equal beta, the
/// outer row maximized over alpha where it depends on alpha.
struct RowGap {
  std::string theorem;
  std::string row_pair;
  double allowed = 0.0;     // the stated gap
  double gap = 0.0;         // worst outer - inner over the grid
  double worst_alpha = 0.0;
  double worst_beta = 0.0;
  double slack() const { return allowed - gap; }
};

struct GapCertificate {
  std::vector<RowGap> rows;
  /// max over rows of (gap - allowed); the claims hold when <= tolerance.
  double max_excess() const;
  bool holds(double tol = 1e-9) const { return max_excess() <= tol; }
};

/// Row-wise certificates for the half-bit regions (C12 taken as 0 for the
/// one-sided one) and for the decode-and-forward region, including the
/// aligned bound when lambda a b >= 0.
GapCertificate gap_certificate(const GaussianBc& ch, double param_step);

// ---------------------------------------------------------------------------

template <typename Family>
RegionEnvelope beta_envelope(Family&& family, double step, const Eigen::MatrixXd& directions) {
  EnvelopeAccumulator acc(directions);
  for (double beta : unit_grid(step)) acc.add(family(beta));
  return acc.result();
}

}  // namespace confbc
