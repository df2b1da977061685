// Finite-alphabet distributions and information measures (bits).
#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace confbc {

/// Raised for malformed distributions, unknown variable names, shape mismatches.
class InfoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A bound or operation does not apply to the given channel.
class PreconditionError : public InfoError {
 public:
  using InfoError::InfoError;
};

/// A search grid would exceed its evaluation budget.
class GridTooLargeError : public InfoError {
 public:
  using InfoError::InfoError;
};

inline constexpr double kMassTol = 1e-12;
inline constexpr std::size_t kMaxJointCells = 10'000'000;

/// A single probability vector.
class Pmf {
 public:
  Pmf() = default;
  explicit Pmf(Eigen::VectorXd probs);

  const Eigen::VectorXd& probs() const { return probs_; }
  Eigen::Index size() const { return probs_.size(); }
  double operator[](Eigen::Index i) const { return probs_[i]; }

  static Pmf uniform(Eigen::Index n);
  static Pmf point_mass(Eigen::Index n, Eigen::Index at);

 private:
  Eigen::VectorXd probs_;
};

using VarList = std::vector<std::string>;

/// Row-stochastic conditional law: row = parent configuration (row-major over
/// the parents' alphabets, last parent fastest), column = child configuration.
struct Conditional {
  Eigen::MatrixXd table;

  Eigen::Index parent_configs() const { return table.rows(); }
  Eigen::Index outcomes() const { return table.cols(); }
  void validate(const char* what) const;

  static Conditional identity(Eigen::Index n);
  /// Constant output: the "empty" auxiliary with a one-letter alphabet.
  static Conditional trivial(Eigen::Index parents);
};

/// Dense joint mass over a product of finite alphabets. The last variable
/// varies fastest in the flat entry array.
class JointPmf {
 public:
  JointPmf(VarList names, std::vector<int> cards, Eigen::VectorXd entries);

  /// Builds a joint from a single Pmf over the product alphabet of `cards`.
  static JointPmf from_pmf(VarList names, std::vector<int> cards, const Pmf& p);

  const VarList& names() const { return names_; }
  const std::vector<int>& cards() const { return cards_; }
  const Eigen::VectorXd& entries() const { return entries_; }
  std::size_t num_vars() const { return names_.size(); }
  int index_of(const std::string& name) const;
  int card(const std::string& name) const { return cards_[index_of(name)]; }

  /// Marginal over `keep`, in the order given.
  JointPmf marginal(const VarList& keep) const;

  /// Appends children drawn from `cond` given `parents`. The children get the
  /// names/cards listed; their joint configuration indexes the columns of
  /// `cond` (last child fastest).
  JointPmf extend(const VarList& parents, const Conditional& cond,
                  const VarList& children, const std::vector<int>& child_cards) const;

 private:
  VarList names_;
  std::vector<int> cards_;
  Eigen::VectorXd entries_;
};

/// H(vars) in bits with 0 log 0 = 0.
double entropy(const JointPmf& p, const VarList& vars);
/// H(a | given).
double conditional_entropy(const JointPmf& p, const VarList& a, const VarList& given);
/// I(a; b | given) = H(a|g) + H(b|g) - H(a,b|g), clipped to 0 within -1e-12.
double mutual_information(const JointPmf& p, const VarList& a, const VarList& b,
                          const VarList& given = {});

/// Binary entropy function h(p).
double binary_entropy(double p);

/// Joint over (A,B,C) for the Markov chain A -> B -> C.
JointPmf chain(const Pmf& a, const Conditional& b_given_a, const Conditional& c_given_b);

/// Seeded splitmix64 generator; portable, so reports are reproducible across
/// standard libraries.
class Rng {
 public:
  explicit Rng(std::uint64_t seed);
  double uniform();                        // [0,1)
  Eigen::VectorXd dirichlet(Eigen::Index n);  // symmetric, unit concentration
  Conditional random_conditional(Eigen::Index parents, Eigen::Index outcomes);
  JointPmf random_joint(const VarList& names, const std::vector<int>& cards);

 private:
  std::uint64_t state_;
  std::uint64_t next();
};

/// Every probability vector of length `n` whose entries are multiples of
/// `step` (the last coordinate completes the sum). Deterministic
/// lexicographic order. Throws if more than `limit` points would be produced.
std::size_t simplex_grid_size(int n, double step);
void for_each_simplex_point(int n, double step, std::size_t limit,
                            const std::function<void(const Eigen::VectorXd&)>& fn);

}  // namespace confbc
