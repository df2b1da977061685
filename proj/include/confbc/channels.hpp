// Channel descriptions for the two-user broadcast channel with conferencing
// decoders, plus structural checks and the named example channels.
#pragma once

#include <cmath>
#include <functional>
#include <limits>
#include <optional>
#include <string>
#include <variant>

#include <Eigen/Dense>

#include "confbc/info.hpp"

namespace confbc {

/// Discrete memoryless BC: P(y1,y2|x) stored as an |X| x (|Y1|*|Y2|) matrix,
/// columns ordered (y1,y2) with y2 fastest.
struct DmBroadcastChannel {
  int x_card = 0;
  int y1_card = 0;
  int y2_card = 0;
  Eigen::MatrixXd transition;
  double c12 = 0.0;  // link from decoder 1 to decoder 2, bits/use
  double c21 = 0.0;  // link from decoder 2 to decoder 1, bits/use

  DmBroadcastChannel() = default;
  DmBroadcastChannel(int x, int y1, int y2, Eigen::MatrixXd t, double c12_, double c21_);

  double prob(int x, int y1, int y2) const { return transition(x, y1 * y2_card + y2); }
  Conditional law() const { return Conditional{transition}; }
  /// Marginal channel to one receiver, |X| x |Yk|.
  Eigen::MatrixXd marginal_y1() const;
  Eigen::MatrixXd marginal_y2() const;
};

/// Builds a channel from two output maps driven by a shared noise Z.
DmBroadcastChannel dm_from_noise(int x_card, const Eigen::VectorXd& pz, int y1_card, int y2_card,
                                 const std::function<int(int, int)>& y1_of,
                                 const std::function<int(int, int)>& y2_of, double c12, double c21);

/// Scalar Gaussian BC  Y1 = aX + Z1,  Y2 = bX + Z2,  E[Z1 Z2] = lambda.
struct GaussianBc {
  double a = 1.0;
  double b = 0.0;
  double lambda = 0.0;
  double power = 1.0;
  double c12 = 0.0;
  double c21 = 0.0;

  void validate() const;
  bool perfectly_correlated() const { return std::abs(lambda) == 1.0; }
  /// lambda == b/a, tested as lambda*a == b.
  bool degraded_correlation(double tol = 1e-12) const { return std::abs(lambda * a - b) <= tol; }
  /// |a| >= |b|: receiver 1 is the stronger one.
  bool first_is_stronger() const { return std::abs(a) >= std::abs(b); }
};

using AnyChannel = std::variant<DmBroadcastChannel, GaussianBc>;

struct SemiDeterminism {
  bool holds = false;
  /// f(x, y1) on the positive-probability domain; -1 where P(y1|x) = 0.
  Eigen::MatrixXi map;
};

/// Y2 = f(X, Y1)?
SemiDeterminism is_semi_deterministic(const DmBroadcastChannel& ch, double tol = 1e-12);

struct MoreCapableReport {
  double min_gap = std::numeric_limits<double>::infinity();  // min I(X;Y1) - I(X;Y2)
  Eigen::VectorXd worst_input;
  std::size_t points = 0;
  /// A negative minimum is a counterexample; a nonnegative one is grid
  /// evidence only.
  bool counterexample() const { return min_gap < 0.0; }
};

MoreCapableReport more_capable_evidence(const DmBroadcastChannel& ch, double grid_step);

/// Effective SNR coefficient (a^2 + b^2 - 2 lambda a b) / (1 - lambda^2). At
/// |lambda| = 1 it is a^2 when lambda a = b and +inf otherwise.
template <typename Scalar>
Scalar kappa(Scalar a, Scalar b, Scalar lambda) {
  using std::abs;
  const Scalar one(1);
  if (abs(lambda) >= one) {
    if (abs(lambda * a - b) <= Scalar(1e-12)) return a * a;
    return std::numeric_limits<Scalar>::infinity();
  }
  return (a * a + b * b - Scalar(2) * lambda * a * b) / (one - lambda * lambda);
}

/// Parameters for the named example channels.
struct ExampleParams {
  double p = 0.2;      // P(Z = 0) for the binary examples
  double power = 1.0;  // Gaussian P
  double c12 = 0.0;
  double c21 = 0.0;
};

/// dm-ex1, dm-ex2, g-mirror, g-noise-at-2, g-noise-at-1.
AnyChannel example_channel(const std::string& name, const ExampleParams& params);

/// Binary symmetric channel matrix with crossover `eps`.
Eigen::MatrixXd bsc(double eps);
/// Channel with independent outputs Y1 ~ W1(.|x), Y2 ~ W2(.|x).
DmBroadcastChannel product_channel(const Eigen::MatrixXd& w1, const Eigen::MatrixXd& w2,
                                   double c12, double c21);

}  // namespace confbc
