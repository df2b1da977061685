// Discrete-channel rate regions: the outer bound, the two families of inner
// bounds (fixed split and optimal split of the conferencing link), the
// semi-deterministic capacity regions, the primitive relay rate and the
// partial-rate system whose projection gives the first inner bound.
#pragma once

#include "confbc/channels.hpp"
#include "confbc/regions.hpp"

namespace confbc {

/// P(u,v,w,x) P(yh1|u,w,y1) P(yh2|w,y2).
///
/// q1 rows are indexed by (u,w,y1), q2 rows by (w,y2), last index fastest.
/// The first inner bound needs q2 to ignore w; use lift_q2 to build that
/// from a plain P(yh2|y2).
struct AuxFactorization {
  JointPmf aux;  // variables U, V, W, X in that order
  Conditional q1;
  Conditional q2;

  int u_card() const { return aux.cards()[0]; }
  int v_card() const { return aux.cards()[1]; }
  int w_card() const { return aux.cards()[2]; }
  int x_card() const { return aux.cards()[3]; }
  int yh1_card() const { return int(q1.outcomes()); }
  int yh2_card() const { return int(q2.outcomes()); }

  /// Shapes and stochasticity against a channel.
  void validate(const DmBroadcastChannel& ch) const;
  /// True when every w-block of q2 is the same P(yh2|y2).
  bool q2_ignores_w(double tol = 1e-12) const;

  static Conditional lift_q2(const Conditional& yh2_given_y2, int w_card);
};

/// Joint over U,V,W,X,Y1,Y2,Yh1,Yh2.
JointPmf compose_joint(const DmBroadcastChannel& ch, const AuxFactorization& f);

/// Random factorization with Dirichlet masses everywhere. With
/// uv_independent the aux law is P(w)P(u|w)P(v|w)P(x|u,v,w), so
/// I(U;V|W) = 0 and the region is never empty.
AuxFactorization random_factorization(Rng& rng, const DmBroadcastChannel& ch, int u, int v, int w,
                                      int yh1, int yh2, bool q2_depends_on_w = false,
                                      bool uv_independent = false);

/// Degenerate choices used by the capacity theorems.
/// U = X, W = V, Yh1 constant, Yh2 = Y2, from a P(v,x) table (|V| x |X|).
AuxFactorization capacity_substitution(const DmBroadcastChannel& ch, const Eigen::MatrixXd& pvx);

// ---------------------------------------------------------------------------
// Outer bound

/// P(u,v,x) stored as a joint over U, V, X.
struct OuterAux {
  JointPmf aux;
};

ConstraintPolytope outer_polytope(const DmBroadcastChannel& ch, const OuterAux& aux);

/// Union over a simplex grid of P(u,v,x) with |U| = |V| = |X|+2.
RegionEnvelope outer_envelope(const DmBroadcastChannel& ch, double grid_step,
                              const Eigen::MatrixXd& directions);

/// Grid evaluations beyond this are refused.
inline constexpr std::size_t kMaxGridEvaluations = 100'000'000;

// ---------------------------------------------------------------------------
// Inner bounds

/// Every information quantity the inner bounds use, evaluated once.
struct InnerTerms {
  double uw_y1 = 0;       // I(U,W;Y1)
  double uw_y1yh2 = 0;    // I(U,W;Y1,Yh2)
  double u_y1_w = 0;      // I(U;Y1|W)
  double u_y1yh2_w = 0;   // I(U;Y1,Yh2|W)
  double vw_y2 = 0;       // I(V,W;Y2)
  double vw_yh1y2 = 0;    // I(V,W;Yh1,Y2)
  double v_y2_w = 0;      // I(V;Y2|W)
  double v_yh1y2_w = 0;   // I(V;Yh1,Y2|W)
  double uv_w = 0;        // I(U;V|W)
  double i1 = 0;          // I(Yh1;U,Y1|V,W,Y2)
  double i2 = 0;          // I(Yh2;Y2|U,W,Y1)
  double alpha1_num = 0;  // I(Yh1;U,Y1|W,Y2)
  double alpha2_num = 0;  // I(Yh2;Y2|W,Y1)
};

InnerTerms inner_terms(const DmBroadcastChannel& ch, const AuxFactorization& f);

/// The bracketed link terms either clipped at zero or taken as they are.
enum class LinkTerm { clipped, raw };

/// Right-hand sides of the five rows shared by every inner region:
/// R0+R1, R0+R2, two sum-rate rows, and 2R0+R1+R2.
///
/// binning_slack is a1 + b1 - I(U;V|W), the room left for the Marton bin
/// rates. When it is negative no bin rates exist and the region is empty;
/// polytope() then appends the row 0 <= binning_slack.
struct InnerRows {
  double r01 = 0, r02 = 0, sum_a = 0, sum_b = 0, twice_common = 0;
  double binning_slack = 0;
  ConstraintPolytope polytope(const std::string& tag) const;
};

/// First inner bound at the optimal split.
ConstraintPolytope inner1_polytope(const DmBroadcastChannel& ch, const AuxFactorization& f);
ConstraintPolytope inner1_polytope(const InnerTerms& t, double c12, double c21);
/// First inner bound at a fixed split alpha1 of the 1->2 link.
ConstraintPolytope inner1_alpha_polytope(const DmBroadcastChannel& ch, const AuxFactorization& f,
                                         double alpha1, LinkTerm form = LinkTerm::clipped);
InnerRows inner1_alpha_rows(const InnerTerms& t, double c12, double c21, double alpha1, LinkTerm form);
double alpha1_star(const InnerTerms& t, double c12);
double alpha1_star(const DmBroadcastChannel& ch, const AuxFactorization& f);

/// Second inner bound (roles of the links exchanged, q2 may depend on w).
ConstraintPolytope inner2_polytope(const DmBroadcastChannel& ch, const AuxFactorization& f);
ConstraintPolytope inner2_polytope(const InnerTerms& t, double c12, double c21);
ConstraintPolytope inner2_alpha_polytope(const DmBroadcastChannel& ch, const AuxFactorization& f,
                                         double alpha2, LinkTerm form = LinkTerm::clipped);
InnerRows inner2_alpha_rows(const InnerTerms& t, double c12, double c21, double alpha2, LinkTerm form);
double alpha2_star(const InnerTerms& t, double c21);
double alpha2_star(const DmBroadcastChannel& ch, const AuxFactorization& f);

/// Replaces each quantizer by a constant wherever its clipped link term is
/// negative at the given split. The raw-form region of the result equals
/// the clipped-form region of the input.
AuxFactorization drop_idle_quantizers(const DmBroadcastChannel& ch, const AuxFactorization& f,
                                      double alpha1);

// ---------------------------------------------------------------------------
// Semi-deterministic capacity regions

/// The information quantities of the capacity regions for one P(v,x).
struct CapacityTerms {
  double v_y2 = 0;      // I(V;Y2)
  double x_y1 = 0;      // I(X;Y1)
  double x_y1_v = 0;    // I(X;Y1|V)
  double x_y1y2_v = 0;  // I(X;Y1,Y2|V)
  double x_y1y2 = 0;    // I(X;Y1,Y2)
};

/// Direct evaluation from a |V| x |X| mass table.
CapacityTerms capacity_terms(const DmBroadcastChannel& ch, const Eigen::MatrixXd& pvx);

/// Region over (R0,R1). Without the joint row it is the cut-set comparator.
ConstraintPolytope theorem4_polytope(const DmBroadcastChannel& ch, const Eigen::MatrixXd& pvx,
                                     bool include_joint_row = true);
ConstraintPolytope theorem4_polytope(const CapacityTerms& t, double c12, double c21,
                                     bool include_joint_row = true);
/// Region over (R0,R1,R2) with one-sided conferencing (C12 ignored).
ConstraintPolytope theorem5_polytope(const DmBroadcastChannel& ch, const Eigen::MatrixXd& pvx);

/// Reshapes a flat grid point into a rows x cols mass table (row-major).
Eigen::MatrixXd grid_table(const Eigen::VectorXd& pt, int rows, int cols);

/// Union of theorem4 regions over a simplex grid of P(v,x).
RegionEnvelope theorem4_envelope(const DmBroadcastChannel& ch, int v_card, double grid_step,
                                 const Eigen::MatrixXd& directions, bool include_joint_row = true);

// ---------------------------------------------------------------------------

/// Largest known rate for the primitive relay channel: Y1 observed by the
/// relay, Y2 by the destination, C12 the relay link. pwx is |W| x |X|,
/// q1 rows are (w,y1).
double primitive_relay_rate(const DmBroadcastChannel& ch, const Eigen::MatrixXd& pwx,
                            const Conditional& q1);

/// Partial-rate system over R0,R1,R2,R10,R11,R20,R22,B1,B2 before projection.
LinearSystem appendixB_system(const DmBroadcastChannel& ch, const AuxFactorization& f, double alpha1);
LinearSystem appendixB_system(const InnerTerms& t, double c12, double c21, double alpha1);
/// The variables eliminated to reach the rate region.
VarList appendixB_partial_rates();

}  // namespace confbc
