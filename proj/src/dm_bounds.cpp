#include "confbc/dm_bounds.hpp"

#include <algorithm>
#include <cmath>

namespace confbc {

namespace {

const VarList kAuxNames{"U", "V", "W", "X"};

double clip(double v, LinkTerm form) { return form == LinkTerm::clipped ? std::max(0.0, v) : v; }

void check_alpha(double a, const char* what) {
  if (!(a >= 0.0 && a <= 1.0)) throw InfoError(std::string(what) + ": split must lie in [0,1]");
}

// Entropy in bits of an unnormalized nonnegative vector with total s.
double entropy_scaled(const Eigen::VectorXd& q, double s) {
  if (s <= 0.0) return 0.0;
  double h = 0.0;
  for (Eigen::Index i = 0; i < q.size(); ++i) {
    const double p = q[i] / s;
    if (p > 0.0) h -= p * std::log2(p);
  }
  return h;
}

// sum_x p(x) H(W(.|x))
double noise_entropy(const Eigen::VectorXd& px, const Eigen::MatrixXd& w) {
  double h = 0.0;
  for (Eigen::Index x = 0; x < px.size(); ++x)
    if (px[x] > 0.0) h += px[x] * entropy_scaled(w.row(x).transpose(), 1.0);
  return h;
}

// sum_v p(v) H(p(.|v) W)
double conditional_output_entropy(const Eigen::MatrixXd& pvx, const Eigen::MatrixXd& w) {
  double h = 0.0;
  for (Eigen::Index v = 0; v < pvx.rows(); ++v) {
    const double pv = pvx.row(v).sum();
    if (pv <= 0.0) continue;
    h += pv * entropy_scaled((pvx.row(v) * w).transpose(), pv);
  }
  return h;
}

JointPmf table_joint(const Eigen::MatrixXd& t, const std::string& row, const std::string& col) {
  Eigen::VectorXd e(t.size());
  for (Eigen::Index r = 0; r < t.rows(); ++r)
    for (Eigen::Index c = 0; c < t.cols(); ++c) e[r * t.cols() + c] = t(r, c);
  return JointPmf({row, col}, {int(t.rows()), int(t.cols())}, std::move(e));
}

}  // namespace

Eigen::MatrixXd grid_table(const Eigen::VectorXd& pt, int rows, int cols) {
  if (pt.size() != Eigen::Index(rows) * cols) throw InfoError("grid_table: point has wrong length");
  Eigen::MatrixXd t(rows, cols);
  for (int r = 0; r < rows; ++r) t.row(r) = pt.segment(Eigen::Index(r) * cols, cols).transpose();
  return t;
}

// ---------------------------------------------------------------------------

void AuxFactorization::validate(const DmBroadcastChannel& ch) const {
  if (aux.names() != kAuxNames) throw InfoError("factorization: aux must be over U, V, W, X");
  if (x_card() != ch.x_card) throw InfoError("factorization: |X| does not match the channel");
  if (q1.parent_configs() != Eigen::Index(u_card()) * w_card() * ch.y1_card)
    throw InfoError("factorization: q1 must have |U||W||Y1| rows");
  if (q2.parent_configs() != Eigen::Index(w_card()) * ch.y2_card)
    throw InfoError("factorization: q2 must have |W||Y2| rows");
  q1.validate("q1");
  q2.validate("q2");
}

bool AuxFactorization::q2_ignores_w(double tol) const {
  const Eigen::Index w = w_card();
  const Eigen::Index block = q2.parent_configs() / w;
  for (Eigen::Index k = 1; k < w; ++k)
    if ((q2.table.middleRows(k * block, block) - q2.table.topRows(block)).cwiseAbs().maxCoeff() > tol)
      return false;
  return true;
}

Conditional AuxFactorization::lift_q2(const Conditional& yh2_given_y2, int w_card) {
  if (w_card <= 0) throw InfoError("lift_q2: |W| must be positive");
  const Eigen::Index n = yh2_given_y2.parent_configs();
  Eigen::MatrixXd t(n * w_card, yh2_given_y2.outcomes());
  for (int w = 0; w < w_card; ++w) t.middleRows(w * n, n) = yh2_given_y2.table;
  return Conditional{t};
}

JointPmf compose_joint(const DmBroadcastChannel& ch, const AuxFactorization& f) {
  f.validate(ch);
  return f.aux.extend({"X"}, ch.law(), {"Y1", "Y2"}, {ch.y1_card, ch.y2_card})
      .extend({"U", "W", "Y1"}, f.q1, {"Yh1"}, {f.yh1_card()})
      .extend({"W", "Y2"}, f.q2, {"Yh2"}, {f.yh2_card()});
}

AuxFactorization random_factorization(Rng& rng, const DmBroadcastChannel& ch, int u, int v, int w,
                                      int yh1, int yh2, bool q2_depends_on_w, bool uv_independent) {
  JointPmf aux = rng.random_joint(kAuxNames, {u, v, w, ch.x_card});
  if (uv_independent) {
    const JointPmf pw = rng.random_joint({"W"}, {w});
    aux = pw.extend({"W"}, rng.random_conditional(w, u), {"U"}, {u})
              .extend({"W"}, rng.random_conditional(w, v), {"V"}, {v})
              .extend({"U", "V", "W"}, rng.random_conditional(Eigen::Index(u) * v * w, ch.x_card), {"X"},
                      {ch.x_card})
              .marginal(kAuxNames);
  }
  AuxFactorization f{std::move(aux), rng.random_conditional(Eigen::Index(u) * w * ch.y1_card, yh1),
                     Conditional{}};
  f.q2 = q2_depends_on_w ? rng.random_conditional(Eigen::Index(w) * ch.y2_card, yh2)
                         : AuxFactorization::lift_q2(rng.random_conditional(ch.y2_card, yh2), w);
  return f;
}

AuxFactorization capacity_substitution(const DmBroadcastChannel& ch, const Eigen::MatrixXd& pvx) {
  if (pvx.cols() != ch.x_card) throw InfoError("capacity_substitution: P(v,x) must have |X| columns");
  const int nx = ch.x_card, nv = int(pvx.rows());
  // U = X, inner V constant, W carries the outer V.
  Eigen::VectorXd e = Eigen::VectorXd::Zero(Eigen::Index(nx) * nv * nx);
  for (int x = 0; x < nx; ++x)
    for (int w = 0; w < nv; ++w) e[(Eigen::Index(x) * nv + w) * nx + x] = pvx(w, x);
  AuxFactorization f{JointPmf(kAuxNames, {nx, 1, nv, nx}, e),
                     Conditional::trivial(Eigen::Index(nx) * nv * ch.y1_card),
                     AuxFactorization::lift_q2(Conditional::identity(ch.y2_card), nv)};
  return f;
}

// ---------------------------------------------------------------------------

ConstraintPolytope outer_polytope(const DmBroadcastChannel& ch, const OuterAux& a) {
  if (a.aux.names() != VarList{"U", "V", "X"}) throw InfoError("outer_polytope: aux must be over U, V, X");
  if (a.aux.card("X") != ch.x_card) throw InfoError("outer_polytope: |X| does not match the channel");
  const JointPmf j = a.aux.extend({"X"}, ch.law(), {"Y1", "Y2"}, {ch.y1_card, ch.y2_card});
  auto mi = [&](const VarList& x, const VarList& y, const VarList& g = {}) {
    return mutual_information(j, x, y, g);
  };
  const double u_y1 = mi({"U"}, {"Y1"}), v_y2 = mi({"V"}, {"Y2"});
  const double x_y1 = mi({"X"}, {"Y1"}), x_y2 = mi({"X"}, {"Y2"});
  const double x_y1_y2v = mi({"X"}, {"Y1"}, {"Y2", "V"}), x_y2_y1v = mi({"X"}, {"Y2"}, {"Y1", "V"});
  const double x_y2_y1u = mi({"X"}, {"Y2"}, {"Y1", "U"}), x_y1_y2u = mi({"X"}, {"Y1"}, {"Y2", "U"});
  const double x_y1_v = mi({"X"}, {"Y1"}, {"V"}), x_y2_u = mi({"X"}, {"Y2"}, {"U"});
  const double cut = mi({"X"}, {"Y1", "Y2"});
  const double c12 = ch.c12, c21 = ch.c21;
  ConstraintPolytope p = ConstraintPolytope::rate_space(3);
  p.add("R0+R1:U", {1, 1, 0}, u_y1 + c21)
      .add("R1:X|Y2,V", {0, 1, 0}, x_y1_y2v + x_y2)
      .add("R1:X|Y1,V", {0, 1, 0}, x_y2_y1v + x_y1)
      .add("R0+R2:V", {1, 0, 1}, v_y2 + c12)
      .add("R2:X|Y1,U", {0, 0, 1}, x_y2_y1u + x_y1)
      .add("R2:X|Y2,U", {0, 0, 1}, x_y1_y2u + x_y2)
      .add("sum:V+links", {1, 1, 1}, x_y1_v + v_y2 + c12 + c21)
      .add("sum:U+links", {1, 1, 1}, x_y2_u + u_y1 + c12 + c21)
      .add("sum:V+C12", {1, 1, 1}, x_y1_y2v + x_y2 + c12)
      .add("sum:U+C21", {1, 1, 1}, x_y2_y1u + x_y1 + c21)
      .add("sum:cut", {1, 1, 1}, cut);
  return p;
}

RegionEnvelope outer_envelope(const DmBroadcastChannel& ch, double grid_step,
                              const Eigen::MatrixXd& directions) {
  if (!(grid_step > 0.0 && grid_step <= 0.5)) throw InfoError("outer_envelope: grid_step must lie in (0,0.5]");
  if (directions.cols() != 2 && directions.cols() != 3)
    throw InfoError("outer_envelope: directions must be 2-D (R2 = 0) or 3-D");
  const int k = ch.x_card + 2;
  const int cells = k * k * ch.x_card;
  const std::size_t n = simplex_grid_size(cells, grid_step);
  if (n > kMaxGridEvaluations)
    throw GridTooLargeError("outer_envelope: grid has " + std::to_string(n) +
                    " points, more than the limit of 1e8; use a coarser grid_step");
  const bool flat = directions.cols() == 2;
  return simplex_grid_envelopes(cells, grid_step, kMaxGridEvaluations, directions, 1,
                                [&](const Eigen::VectorXd& pt, std::vector<EnvelopeAccumulator>& acc) {
                                  OuterAux a{JointPmf({"U", "V", "X"}, {k, k, ch.x_card}, pt)};
                                  const ConstraintPolytope p = outer_polytope(ch, a);
                                  acc[0].add(flat ? project_r2_zero(p) : p);
                                })
      .front();
}

// ---------------------------------------------------------------------------

InnerTerms inner_terms(const DmBroadcastChannel& ch, const AuxFactorization& f) {
  const JointPmf j = compose_joint(ch, f);
  auto mi = [&](const VarList& x, const VarList& y, const VarList& g = {}) {
    return mutual_information(j, x, y, g);
  };
  InnerTerms t;
  t.uw_y1 = mi({"U", "W"}, {"Y1"});
  t.uw_y1yh2 = mi({"U", "W"}, {"Y1", "Yh2"});
  t.u_y1_w = mi({"U"}, {"Y1"}, {"W"});
  t.u_y1yh2_w = mi({"U"}, {"Y1", "Yh2"}, {"W"});
  t.vw_y2 = mi({"V", "W"}, {"Y2"});
  t.vw_yh1y2 = mi({"V", "W"}, {"Yh1", "Y2"});
  t.v_y2_w = mi({"V"}, {"Y2"}, {"W"});
  t.v_yh1y2_w = mi({"V"}, {"Yh1", "Y2"}, {"W"});
  t.uv_w = mi({"U"}, {"V"}, {"W"});
  t.i1 = mi({"Yh1"}, {"U", "Y1"}, {"V", "W", "Y2"});
  t.i2 = mi({"Yh2"}, {"Y2"}, {"U", "W", "Y1"});
  t.alpha1_num = mi({"Yh1"}, {"U", "Y1"}, {"W", "Y2"});
  t.alpha2_num = mi({"Yh2"}, {"Y2"}, {"W", "Y1"});
  return t;
}

ConstraintPolytope InnerRows::polytope(const std::string& tag) const {
  ConstraintPolytope p = ConstraintPolytope::rate_space(3);
  p.add(tag + ":R0+R1", {1, 1, 0}, r01)
      .add(tag + ":R0+R2", {1, 0, 1}, r02)
      .add(tag + ":sum-a", {1, 1, 1}, sum_a)
      .add(tag + ":sum-b", {1, 1, 1}, sum_b)
      .add(tag + ":2R0+R1+R2", {2, 1, 1}, twice_common);
  if (binning_slack < 0.0) p.add(tag + ":binning", {0, 0, 0}, binning_slack);
  return p;
}

InnerRows inner1_alpha_rows(const InnerTerms& t, double c12, double c21, double alpha1, LinkTerm form) {
  check_alpha(alpha1, "inner1_alpha");
  const double z1 = clip(alpha1 * c12 - t.i1, form);
  const double z2 = clip(c21 - t.i2, form);
  const double dfw = (1.0 - alpha1) * c12;
  const double a1 = std::min(t.u_y1_w + z2, t.u_y1yh2_w);
  const double a2 = std::min(t.uw_y1 + z2, t.uw_y1yh2);
  const double b1 = std::min(t.v_y2_w + z1, t.v_yh1y2_w);
  const double b2 = std::min(t.vw_y2 + z1 + dfw, t.vw_yh1y2 + dfw);
  return {a2, b2, a1 + b2 - t.uv_w, a2 + b1 - t.uv_w, a2 + b2 - t.uv_w, a1 + b1 - t.uv_w};
}

ConstraintPolytope inner1_polytope(const InnerTerms& t, double c12, double c21) {
  const double y1side = std::min(t.uw_y1 + c21 - t.i2, t.uw_y1yh2);
  const double y2side = t.vw_y2 + c12 - t.i1;
  InnerRows r;
  r.r01 = y1side;
  r.r02 = y2side;
  r.sum_a = std::min(t.u_y1_w + c21 - t.i2, t.u_y1yh2_w) + y2side - t.uv_w;
  r.sum_b = y1side + std::min(t.v_y2_w + c12 - t.i1, t.v_yh1y2_w) - t.uv_w;
  r.twice_common = y1side + y2side - t.uv_w;
  r.binning_slack = std::min(t.u_y1_w + c21 - t.i2, t.u_y1yh2_w) +
                    std::min(t.v_y2_w + c12 - t.i1, t.v_yh1y2_w) - t.uv_w;
  return r.polytope("inner1");
}

ConstraintPolytope inner1_polytope(const DmBroadcastChannel& ch, const AuxFactorization& f) {
  f.validate(ch);
  if (!f.q2_ignores_w()) throw PreconditionError("inner1_polytope: q2 must not depend on W");
  return inner1_polytope(inner_terms(ch, f), ch.c12, ch.c21);
}

ConstraintPolytope inner1_alpha_polytope(const DmBroadcastChannel& ch, const AuxFactorization& f,
                                         double alpha1, LinkTerm form) {
  f.validate(ch);
  if (!f.q2_ignores_w()) throw PreconditionError("inner1_alpha_polytope: q2 must not depend on W");
  return inner1_alpha_rows(inner_terms(ch, f), ch.c12, ch.c21, alpha1, form).polytope("inner1");
}

double alpha1_star(const InnerTerms& t, double c12) {
  if (c12 <= 0.0) return 0.0;
  return std::min(t.alpha1_num / c12, 1.0);
}

double alpha1_star(const DmBroadcastChannel& ch, const AuxFactorization& f) {
  return alpha1_star(inner_terms(ch, f), ch.c12);
}

InnerRows inner2_alpha_rows(const InnerTerms& t, double c12, double c21, double alpha2, LinkTerm form) {
  check_alpha(alpha2, "inner2_alpha");
  const double e1 = clip(c12 - t.i1, form);
  const double e2 = clip(alpha2 * c21 - t.i2, form);
  const double dfw = (1.0 - alpha2) * c21;
  const double a1 = std::min(t.u_y1_w + e2, t.u_y1yh2_w);
  const double a2 = std::min(t.uw_y1 + e2 + dfw, t.uw_y1yh2 + dfw);
  const double b1 = std::min(t.v_y2_w + e1, t.v_yh1y2_w);
  return {a2, t.vw_y2, a1 + t.vw_y2 - t.uv_w, a2 + b1 - t.uv_w, a2 + t.vw_y2 - t.uv_w, a1 + b1 - t.uv_w};
}

ConstraintPolytope inner2_polytope(const InnerTerms& t, double c12, double c21) {
  const double y1side = t.uw_y1 + c21 - t.i2;
  InnerRows r;
  r.r01 = y1side;
  r.r02 = t.vw_y2;
  r.sum_a = std::min(t.u_y1_w + c21 - t.i2, t.u_y1yh2_w) + t.vw_y2 - t.uv_w;
  r.sum_b = y1side + std::min(t.v_y2_w + c12 - t.i1, t.v_yh1y2_w) - t.uv_w;
  r.twice_common = y1side + t.vw_y2 - t.uv_w;
  r.binning_slack = std::min(t.u_y1_w + c21 - t.i2, t.u_y1yh2_w) +
                    std::min(t.v_y2_w + c12 - t.i1, t.v_yh1y2_w) - t.uv_w;
  return r.polytope("inner2");
}

ConstraintPolytope inner2_polytope(const DmBroadcastChannel& ch, const AuxFactorization& f) {
  return inner2_polytope(inner_terms(ch, f), ch.c12, ch.c21);
}

ConstraintPolytope inner2_alpha_polytope(const DmBroadcastChannel& ch, const AuxFactorization& f,
                                         double alpha2, LinkTerm form) {
  return inner2_alpha_rows(inner_terms(ch, f), ch.c12, ch.c21, alpha2, form).polytope("inner2");
}

double alpha2_star(const InnerTerms& t, double c21) {
  if (c21 <= 0.0) return 0.0;
  return std::min(t.alpha2_num / c21, 1.0);
}

double alpha2_star(const DmBroadcastChannel& ch, const AuxFactorization& f) {
  return alpha2_star(inner_terms(ch, f), ch.c21);
}

AuxFactorization drop_idle_quantizers(const DmBroadcastChannel& ch, const AuxFactorization& f,
                                      double alpha1) {
  check_alpha(alpha1, "drop_idle_quantizers");
  const InnerTerms t = inner_terms(ch, f);
  AuxFactorization g = f;
  if (alpha1 * ch.c12 - t.i1 < 0.0) g.q1 = Conditional::trivial(f.q1.parent_configs());
  if (ch.c21 - t.i2 < 0.0) g.q2 = Conditional::trivial(f.q2.parent_configs());
  return g;
}

// ---------------------------------------------------------------------------

CapacityTerms capacity_terms(const DmBroadcastChannel& ch, const Eigen::MatrixXd& pvx) {
  if (pvx.cols() != ch.x_card) throw InfoError("capacity_terms: P(v,x) must have |X| columns");
  const Eigen::MatrixXd w1 = ch.marginal_y1(), w2 = ch.marginal_y2();
  const Eigen::MatrixXd& w12 = ch.transition;
  const Eigen::VectorXd px = pvx.colwise().sum().transpose();
  const double n1 = noise_entropy(px, w1), n12 = noise_entropy(px, w12);
  CapacityTerms t;
  const double h_y2 = entropy_scaled((px.transpose() * w2).transpose(), 1.0);
  t.v_y2 = std::max(0.0, h_y2 - conditional_output_entropy(pvx, w2));
  t.x_y1 = std::max(0.0, entropy_scaled((px.transpose() * w1).transpose(), 1.0) - n1);
  t.x_y1_v = std::max(0.0, conditional_output_entropy(pvx, w1) - n1);
  t.x_y1y2_v = std::max(0.0, conditional_output_entropy(pvx, w12) - n12);
  t.x_y1y2 = std::max(0.0, entropy_scaled((px.transpose() * w12).transpose(), 1.0) - n12);
  return t;
}

ConstraintPolytope theorem4_polytope(const CapacityTerms& t, double c12, double c21, bool include_joint_row) {
  ConstraintPolytope p = ConstraintPolytope::rate_space(2);
  p.add("R0:V", {1, 0}, t.v_y2 + c12)
      .add("R0+R1:Y1", {1, 1}, t.x_y1 + c21)
      .add("R0+R1:V+links", {1, 1}, t.x_y1_v + t.v_y2 + c12 + c21);
  if (include_joint_row) p.add("R0+R1:joint|V", {1, 1}, t.x_y1y2_v + t.v_y2 + c12);
  p.add("R0+R1:cut", {1, 1}, t.x_y1y2);
  return p;
}

ConstraintPolytope theorem4_polytope(const DmBroadcastChannel& ch, const Eigen::MatrixXd& pvx,
                                     bool include_joint_row) {
  if (!is_semi_deterministic(ch).holds)
    throw PreconditionError("theorem4_polytope: channel is not semi-deterministic (Y2 != f(X,Y1))");
  return theorem4_polytope(capacity_terms(ch, pvx), ch.c12, ch.c21, include_joint_row);
}

ConstraintPolytope theorem5_polytope(const DmBroadcastChannel& ch, const Eigen::MatrixXd& pvx) {
  if (!is_semi_deterministic(ch).holds)
    throw PreconditionError("theorem5_polytope: channel is not semi-deterministic (Y2 != f(X,Y1))");
  const CapacityTerms t = capacity_terms(ch, pvx);
  ConstraintPolytope p = ConstraintPolytope::rate_space(3);
  p.add("R0+R2", {1, 0, 1}, t.v_y2)
      .add("sum:Y1", {1, 1, 1}, t.x_y1 + ch.c21)
      .add("sum:V", {1, 1, 1}, t.x_y1_v + t.v_y2 + ch.c21)
      .add("sum:joint|V", {1, 1, 1}, t.x_y1y2_v + t.v_y2)
      .add("sum:cut", {1, 1, 1}, t.x_y1y2);
  return p;
}

RegionEnvelope theorem4_envelope(const DmBroadcastChannel& ch, int v_card, double grid_step,
                                 const Eigen::MatrixXd& directions, bool include_joint_row) {
  if (!is_semi_deterministic(ch).holds)
    throw PreconditionError("theorem4_envelope: channel is not semi-deterministic (Y2 != f(X,Y1))");
  if (v_card <= 0) throw InfoError("theorem4_envelope: |V| must be positive");
  const int cells = v_card * ch.x_card;
  if (simplex_grid_size(cells, grid_step) > kMaxGridEvaluations)
    throw GridTooLargeError("theorem4_envelope: grid too large; use a coarser grid_step");
  return simplex_grid_envelopes(cells, grid_step, kMaxGridEvaluations, directions, 1,
                                [&](const Eigen::VectorXd& pt, std::vector<EnvelopeAccumulator>& acc) {
                                  const Eigen::MatrixXd pvx = grid_table(pt, v_card, ch.x_card);
                                  acc[0].add(theorem4_polytope(capacity_terms(ch, pvx), ch.c12, ch.c21,
                                                               include_joint_row));
                                })
      .front();
}

// ---------------------------------------------------------------------------

double primitive_relay_rate(const DmBroadcastChannel& ch, const Eigen::MatrixXd& pwx, const Conditional& q1) {
  if (pwx.cols() != ch.x_card) throw InfoError("primitive_relay_rate: P(w,x) must have |X| columns");
  if (q1.parent_configs() != pwx.rows() * ch.y1_card)
    throw InfoError("primitive_relay_rate: q1 must have |W||Y1| rows");
  q1.validate("q1");
  const JointPmf j = table_joint(pwx, "W", "X")
                         .extend({"X"}, ch.law(), {"Y1", "Y2"}, {ch.y1_card, ch.y2_card})
                         .extend({"W", "Y1"}, q1, {"Yh1"}, {int(q1.outcomes())});
  const double quant = mutual_information(j, {"Yh1"}, {"Y1"}, {"X", "W", "Y2"});
  const double w_y1 = mutual_information(j, {"W"}, {"Y1"});
  const double t1 = mutual_information(j, {"X"}, {"Y2"}) + ch.c12 - quant;
  const double t2 = w_y1 + mutual_information(j, {"X"}, {"Yh1", "Y2"}, {"W"});
  const double t3 = w_y1 + mutual_information(j, {"X"}, {"Y2"}, {"W"}) + ch.c12 - quant;
  return std::min({t1, t2, t3});
}

VarList appendixB_partial_rates() { return {"R10", "R11", "R20", "R22", "B1", "B2"}; }

LinearSystem appendixB_system(const InnerTerms& t, double c12, double c21, double alpha1) {
  check_alpha(alpha1, "appendixB_system");
  const double z1 = std::max(0.0, alpha1 * c12 - t.i1);
  const double z2 = std::max(0.0, c21 - t.i2);
  const double dfw = (1.0 - alpha1) * c12;
  const double a1 = std::min(t.u_y1_w + z2, t.u_y1yh2_w);
  const double a2 = std::min(t.uw_y1 + z2, t.uw_y1yh2);
  const double b1 = std::min(t.v_y2_w + z1, t.v_yh1y2_w);
  const double b2 = std::min(t.vw_y2 + z1 + dfw, t.vw_yh1y2 + dfw);

  LinearSystem s;
  s.variables = {"R0", "R1", "R2", "R10", "R11", "R20", "R22", "B1", "B2"};
  auto row = [&](std::initializer_list<std::pair<const char*, double>> terms, double rhs) {
    Eigen::VectorXd c = Eigen::VectorXd::Zero(9);
    for (const auto& [name, v] : terms) c[s.index_of(name)] += v;
    s.add(std::move(c), rhs);
  };
  // decoder 1: own satellite, then cloud (R00 = R0 + R10 + R20) plus satellite
  row({{"R11", 1}, {"B1", 1}}, a1);
  row({{"R0", 1}, {"R10", 1}, {"R20", 1}, {"R11", 1}, {"B1", 1}}, a2);
  // decoder 2
  row({{"R22", 1}, {"B2", 1}}, b1);
  row({{"R0", 1}, {"R10", 1}, {"R20", 1}, {"R22", 1}, {"B2", 1}}, b2);
  // Marton binning
  row({{"B1", -1}, {"B2", -1}}, -t.uv_w);
  // message splits as two inequalities each
  row({{"R1", 1}, {"R10", -1}, {"R11", -1}}, 0.0);
  row({{"R1", -1}, {"R10", 1}, {"R11", 1}}, 0.0);
  row({{"R2", 1}, {"R20", -1}, {"R22", -1}}, 0.0);
  row({{"R2", -1}, {"R20", 1}, {"R22", 1}}, 0.0);
  for (int i = 0; i < 9; ++i) s.add(-Eigen::VectorXd::Unit(9, i), 0.0);
  return s;
}

LinearSystem appendixB_system(const DmBroadcastChannel& ch, const AuxFactorization& f, double alpha1) {
  f.validate(ch);
  return appendixB_system(inner_terms(ch, f), ch.c12, ch.c21, alpha1);
}

}  // namespace confbc
