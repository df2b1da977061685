// Rate-region geometry: constraint polytopes, support functions, envelopes
// of unions, and Fourier-Motzkin projection of linear systems.
#pragma once

#include <cstdint>
#include <functional>
#include <limits>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "confbc/info.hpp"

namespace confbc {

inline constexpr double kFeasTol = 1e-9;
inline constexpr double kInf = std::numeric_limits<double>::infinity();

using RateVector = Eigen::VectorXd;

inline RateVector rates(double r0, double r1) { return (RateVector(2) << r0, r1).finished(); }
inline RateVector rates(double r0, double r1, double r2) {
  return (RateVector(3) << r0, r1, r2).finished();
}

/// coeffs . r <= rhs. An infinite rhs means the constraint is absent.
struct LinearConstraint {
  Eigen::VectorXd coeffs;
  double rhs = 0.0;
  std::string label;

  bool absent() const { return rhs == kInf; }
};

/// Intersection of linear constraints with the nonnegative orthant.
class ConstraintPolytope {
 public:
  ConstraintPolytope() = default;
  explicit ConstraintPolytope(VarList variables);

  static ConstraintPolytope rate_space(int dim);  // (R0,R1) or (R0,R1,R2)

  const VarList& variables() const { return variables_; }
  int dim() const { return int(variables_.size()); }
  const std::vector<LinearConstraint>& constraints() const { return constraints_; }

  ConstraintPolytope& add(std::string label, Eigen::VectorXd coeffs, double rhs);
  /// Convenience for rate polytopes: coefficients listed in variable order.
  ConstraintPolytope& add(std::string label, std::initializer_list<double> coeffs, double rhs);

  /// Bounded in every direction: each variable has a finite, positively
  /// weighted constraint and no coefficient is negative.
  bool bounded() const;
  bool nonnegative_coefficients() const;

  /// Extreme points (tolerance kFeasTol). Empty when the polytope is empty.
  std::vector<Eigen::VectorXd> vertices() const;

 private:
  VarList variables_;
  std::vector<LinearConstraint> constraints_;
};

/// max dir . r over the polytope; +inf when unbounded along dir, -inf when empty.
double support(const ConstraintPolytope& poly, const Eigen::VectorXd& dir);
bool contains(const ConstraintPolytope& poly, const RateVector& point, double tol);

/// R2 := 0, dropping rows that become vacuous.
ConstraintPolytope project_r2_zero(const ConstraintPolytope& poly);

/// Support values of a convex region on a fixed direction set.
struct RegionEnvelope {
  Eigen::MatrixXd directions;  // one unit direction per row
  Eigen::VectorXd values;

  int dim() const { return int(directions.cols()); }
  Eigen::Index size() const { return directions.rows(); }
  /// Support along an arbitrary (unnormalized) stored direction, rescaled
  /// by its norm. Throws if the direction is not part of the set.
  double along(const Eigen::VectorXd& raw) const;
};

/// Streaming pointwise-max accumulator used by every grid search. Rows of
/// the direction matrix are normalized on construction.
class EnvelopeAccumulator {
 public:
  explicit EnvelopeAccumulator(Eigen::MatrixXd directions);
  void add(const ConstraintPolytope& poly);
  void merge(const EnvelopeAccumulator& other);
  std::size_t count() const { return count_; }
  RegionEnvelope result() const;

 private:
  Eigen::MatrixXd directions_;
  Eigen::VectorXd values_;
  std::size_t count_ = 0;
};

RegionEnvelope envelope_of(const ConstraintPolytope& poly, const Eigen::MatrixXd& directions);

/// Worker threads for grid searches: hardware concurrency, capped by the
/// CONFBC_THREADS environment variable.
int worker_count();
/// Calls fn(i) for i in [0, n) on worker_count() threads, i dealt
/// round-robin. The first exception thrown is rethrown after joining.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& fn);

/// Runs fn over every point of a simplex grid, feeding `count` envelopes
/// on the same direction set. Points are dealt round-robin to workers and
/// the partial envelopes merged by pointwise max, so the result does not
/// depend on the number of workers.
using GridVisitor = std::function<void(const Eigen::VectorXd&, std::vector<EnvelopeAccumulator>&)>;
std::vector<RegionEnvelope> simplex_grid_envelopes(int cells, double step, std::size_t limit,
                                                   const Eigen::MatrixXd& directions, int count,
                                                   const GridVisitor& fn);
RegionEnvelope envelope_of_union(const std::vector<ConstraintPolytope>& polys,
                                 const Eigen::MatrixXd& directions);

struct DominanceReport {
  double max_violation = -kInf;  // max of inner - outer
  Eigen::Index worst_direction = -1;
  bool dominated(double slack) const { return max_violation <= slack; }
};

DominanceReport envelope_dominates(const RegionEnvelope& outer, const RegionEnvelope& inner);

/// Unit vectors (cos t, sin t) for t = 0 .. 90 degrees in `count` steps.
Eigen::MatrixXd fan_2d(int count = 181);
/// `count` quasi-uniform unit vectors in the nonnegative octant, followed by
/// the normalized facet normals (1,0,0) ... (2,1,1).
Eigen::MatrixXd fan_3d(int count = 512);
/// The eight facet normals used by the closed-form regions (unnormalized).
Eigen::MatrixXd canonical_directions_3d();
/// Canonical 2-D normals (1,0), (0,1), (1,1).
Eigen::MatrixXd canonical_directions_2d();
/// Same vectors normalized to unit length.
Eigen::MatrixXd normalized_rows(Eigen::MatrixXd m);
/// Uniformly random nonnegative unit directions.
Eigen::MatrixXd random_directions(Rng& rng, int count, int dim);

/// 2-D region boundary from its envelope: vertices of the intersection of
/// supporting half-planes, ordered by increasing R0 (origin excluded).
std::vector<Eigen::Vector2d> boundary_walk(const RegionEnvelope& env);

// ---------------------------------------------------------------------------
// Fourier-Motzkin elimination

struct Inequality {
  Eigen::VectorXd coeffs;  // sum coeffs_i x_i <= rhs
  double rhs = 0.0;
};

struct LinearSystem {
  VarList variables;
  std::vector<Inequality> rows;

  int index_of(const std::string& v) const;
  void add(Eigen::VectorXd coeffs, double rhs);
  /// A row 0 <= rhs with rhs < 0 is present.
  bool trivially_infeasible(double tol = kFeasTol) const;
  bool satisfied_by(const Eigen::VectorXd& x, double tol = kFeasTol) const;
};

/// Projects out one variable. Zero-coefficient rows are retained,
/// tautologies dropped, parallel rows reduced to the tightest one.
LinearSystem fm_eliminate(const LinearSystem& sys, const std::string& var);
/// Eliminates several variables in order, additionally discarding rows that
/// combine more original rows than the elimination depth allows (Chernikov).
LinearSystem fm_eliminate(const LinearSystem& sys, const VarList& vars);

/// Reads a system over rate variables as a polytope (orthant implied).
ConstraintPolytope to_polytope(const LinearSystem& sys);

}  // namespace confbc
