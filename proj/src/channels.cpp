#include "confbc/channels.hpp"

#include <cmath>

namespace confbc {

DmBroadcastChannel::DmBroadcastChannel(int x, int y1, int y2, Eigen::MatrixXd t, double c12_, double c21_)
    : x_card(x), y1_card(y1), y2_card(y2), transition(std::move(t)), c12(c12_), c21(c21_) {
  if (x <= 0 || y1 <= 0 || y2 <= 0) throw InfoError("channel: alphabet sizes must be positive");
  if (transition.rows() != x || transition.cols() != Eigen::Index(y1) * y2)
    throw InfoError("channel: transition must be |X| x (|Y1||Y2|)");
  Conditional{transition}.validate("channel transition");
  if (!(c12 >= 0.0) || !(c21 >= 0.0)) throw InfoError("channel: link capacities must be >= 0");
}

Eigen::MatrixXd DmBroadcastChannel::marginal_y1() const {
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(x_card, y1_card);
  for (int x = 0; x < x_card; ++x)
    for (int a = 0; a < y1_card; ++a)
      for (int b = 0; b < y2_card; ++b) m(x, a) += prob(x, a, b);
  return m;
}

Eigen::MatrixXd DmBroadcastChannel::marginal_y2() const {
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(x_card, y2_card);
  for (int x = 0; x < x_card; ++x)
    for (int a = 0; a < y1_card; ++a)
      for (int b = 0; b < y2_card; ++b) m(x, b) += prob(x, a, b);
  return m;
}

DmBroadcastChannel dm_from_noise(int x_card, const Eigen::VectorXd& pz, int y1_card, int y2_card,
                                 const std::function<int(int, int)>& y1_of,
                                 const std::function<int(int, int)>& y2_of, double c12, double c21) {
  Eigen::MatrixXd t = Eigen::MatrixXd::Zero(x_card, Eigen::Index(y1_card) * y2_card);
  for (int x = 0; x < x_card; ++x)
    for (Eigen::Index z = 0; z < pz.size(); ++z)
      t(x, y1_of(x, int(z)) * y2_card + y2_of(x, int(z))) += pz[z];
  return DmBroadcastChannel(x_card, y1_card, y2_card, std::move(t), c12, c21);
}

void GaussianBc::validate() const {
  if (!std::isfinite(a) || !std::isfinite(b)) throw InfoError("gaussian: gains must be finite");
  if (!(std::abs(lambda) <= 1.0)) throw InfoError("gaussian: |lambda| must be <= 1");
  if (!(power > 0.0)) throw InfoError("gaussian: power must be strictly positive");
  if (!(c12 >= 0.0) || !(c21 >= 0.0)) throw InfoError("gaussian: link capacities must be >= 0");
}

SemiDeterminism is_semi_deterministic(const DmBroadcastChannel& ch, double tol) {
  SemiDeterminism out;
  out.holds = true;
  out.map = Eigen::MatrixXi::Constant(ch.x_card, ch.y1_card, -1);
  for (int x = 0; x < ch.x_card; ++x) {
    for (int y1 = 0; y1 < ch.y1_card; ++y1) {
      double total = 0.0;
      for (int y2 = 0; y2 < ch.y2_card; ++y2) total += ch.prob(x, y1, y2);
      if (total <= tol) continue;
      int carrier = -1;
      for (int y2 = 0; y2 < ch.y2_card; ++y2) {
        if (std::abs(ch.prob(x, y1, y2) - total) <= tol) carrier = y2;
      }
      // every other y2 must be (numerically) empty
      bool single = carrier >= 0;
      for (int y2 = 0; y2 < ch.y2_card && single; ++y2)
        if (y2 != carrier && ch.prob(x, y1, y2) > tol) single = false;
      if (!single) {
        out.holds = false;
        out.map(x, y1) = -1;
      } else {
        out.map(x, y1) = carrier;
      }
    }
  }
  return out;
}

MoreCapableReport more_capable_evidence(const DmBroadcastChannel& ch, double grid_step) {
  if (!(grid_step > 0.0) || grid_step > 0.5)
    throw InfoError("more_capable_evidence: grid_step must lie in (0, 0.5]");
  MoreCapableReport rep;
  const Conditional w1{ch.marginal_y1()};
  const Conditional w2{ch.marginal_y2()};
  for_each_simplex_point(ch.x_card, grid_step, 100'000'000, [&](const Eigen::VectorXd& px) {
    JointPmf j({"X"}, {ch.x_card}, px);
    const auto j1 = j.extend({"X"}, w1, {"Y1"}, {ch.y1_card});
    const auto j2 = j.extend({"X"}, w2, {"Y2"}, {ch.y2_card});
    const double gap = mutual_information(j1, {"X"}, {"Y1"}) - mutual_information(j2, {"X"}, {"Y2"});
    ++rep.points;
    if (gap < rep.min_gap) {
      rep.min_gap = gap;
      rep.worst_input = px;
    }
  });
  return rep;
}

Eigen::MatrixXd bsc(double eps) {
  Eigen::MatrixXd m(2, 2);
  m << 1.0 - eps, eps, eps, 1.0 - eps;
  return m;
}

DmBroadcastChannel product_channel(const Eigen::MatrixXd& w1, const Eigen::MatrixXd& w2, double c12,
                                   double c21) {
  if (w1.rows() != w2.rows()) throw InfoError("product_channel: input alphabets differ");
  const int x = int(w1.rows()), n1 = int(w1.cols()), n2 = int(w2.cols());
  Eigen::MatrixXd t(x, n1 * n2);
  for (int i = 0; i < x; ++i)
    for (int a = 0; a < n1; ++a)
      for (int b = 0; b < n2; ++b) t(i, a * n2 + b) = w1(i, a) * w2(i, b);
  return DmBroadcastChannel(x, n1, n2, std::move(t), c12, c21);
}

AnyChannel example_channel(const std::string& name, const ExampleParams& prm) {
  if (name == "dm-ex1" || name == "dm-ex2") {
    if (!(prm.p >= 0.0 && prm.p <= 1.0)) throw InfoError("example_channel: p must lie in [0,1]");
    Eigen::VectorXd pz(2);
    pz << prm.p, 1.0 - prm.p;
    auto xor_map = [](int x, int z) { return x ^ z; };
    auto noise = [](int, int z) { return z; };
    if (name == "dm-ex1")  // Y1 = X xor Z, Y2 = Z
      return dm_from_noise(2, pz, 2, 2, xor_map, noise, prm.c12, prm.c21);
    return dm_from_noise(2, pz, 2, 2, noise, xor_map, prm.c12, prm.c21);  // Y1 = Z, Y2 = X xor Z
  }
  GaussianBc g;
  g.power = prm.power;
  g.c12 = prm.c12;
  g.c21 = prm.c21;
  if (name == "g-mirror") {  // Y1 = X + Z, Y2 = X - Z
    g.a = 1.0;
    g.b = 1.0;
    g.lambda = -1.0;
  } else if (name == "g-noise-at-2") {  // Y1 = X + Z, Y2 = Z
    g.a = 1.0;
    g.b = 0.0;
    g.lambda = 1.0;
  } else if (name == "g-noise-at-1") {  // Y1 = Z, Y2 = X + Z
    g.a = 0.0;
    g.b = 1.0;
    g.lambda = 1.0;
  } else {
    throw InfoError("unknown example channel '" + name +
                    "' (expected dm-ex1, dm-ex2, g-mirror, g-noise-at-2, g-noise-at-1)");
  }
  g.validate();
  return g;
}

}  // namespace confbc
