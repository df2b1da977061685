#include "confbc/info.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace confbc {

namespace {

void check_probs(const Eigen::VectorXd& v, const char* what) {
  if (v.size() == 0) throw InfoError(std::string(what) + ": empty distribution");
  if ((v.array() < 0.0).any() || !v.allFinite())
    throw InfoError(std::string(what) + ": negative or non-finite mass");
  if (std::abs(v.sum() - 1.0) > kMassTol * std::max<double>(1.0, double(v.size())))
    throw InfoError(std::string(what) + ": mass does not sum to 1");
}

std::size_t product(const std::vector<int>& cards) {
  std::size_t n = 1;
  for (int c : cards) {
    if (c <= 0) throw InfoError("alphabet sizes must be positive");
    n *= std::size_t(c);
    if (n > kMaxJointCells) throw InfoError("joint alphabet exceeds 1e7 cells");
  }
  return n;
}

// Sum of -p log2 p over the marginal on the variables flagged in `keep`.
double marginal_entropy(const JointPmf& p, const std::vector<bool>& keep) {
  const auto& cards = p.cards();
  const std::size_t k = cards.size();
  // Marginal stride for every variable (0 when summed out).
  std::vector<std::size_t> mstride(k, 0);
  std::size_t msize = 1;
  for (std::size_t i = k; i-- > 0;) {
    if (keep[i]) {
      mstride[i] = msize;
      msize *= std::size_t(cards[i]);
    }
  }
  const auto& e = p.entries();
  if (msize == std::size_t(e.size())) {
    double h = 0.0;
    for (Eigen::Index j = 0; j < e.size(); ++j)
      if (e[j] > 0.0) h -= e[j] * std::log2(e[j]);
    return h;
  }
  std::vector<double> m(msize, 0.0);
  std::vector<int> digit(k, 0);
  std::size_t midx = 0;
  for (Eigen::Index j = 0; j < e.size(); ++j) {
    m[midx] += e[j];
    // odometer increment, last variable fastest
    for (std::size_t i = k; i-- > 0;) {
      if (++digit[i] < cards[i]) {
        midx += mstride[i];
        break;
      }
      midx -= mstride[i] * std::size_t(cards[i] - 1);
      digit[i] = 0;
    }
  }
  double h = 0.0;
  for (double q : m)
    if (q > 0.0) h -= q * std::log2(q);
  return h;
}

std::vector<bool> flags_for(const JointPmf& p, const VarList& vars) {
  std::vector<bool> keep(p.num_vars(), false);
  for (const auto& v : vars) keep[p.index_of(v)] = true;
  return keep;
}

}  // namespace

Pmf::Pmf(Eigen::VectorXd probs) : probs_(std::move(probs)) { check_probs(probs_, "Pmf"); }

Pmf Pmf::uniform(Eigen::Index n) { return Pmf(Eigen::VectorXd::Constant(n, 1.0 / double(n))); }

Pmf Pmf::point_mass(Eigen::Index n, Eigen::Index at) {
  Eigen::VectorXd v = Eigen::VectorXd::Zero(n);
  v[at] = 1.0;
  return Pmf(std::move(v));
}

void Conditional::validate(const char* what) const {
  if (table.rows() == 0 || table.cols() == 0)
    throw InfoError(std::string(what) + ": empty conditional");
  if ((table.array() < 0.0).any() || !table.allFinite())
    throw InfoError(std::string(what) + ": negative or non-finite entry");
  for (Eigen::Index r = 0; r < table.rows(); ++r)
    if (std::abs(table.row(r).sum() - 1.0) > kMassTol * std::max<double>(1.0, double(table.cols())))
      throw InfoError(std::string(what) + ": row " + std::to_string(r) + " is not stochastic");
}

Conditional Conditional::identity(Eigen::Index n) {
  return Conditional{Eigen::MatrixXd::Identity(n, n)};
}

Conditional Conditional::trivial(Eigen::Index parents) {
  return Conditional{Eigen::MatrixXd::Ones(parents, 1)};
}

JointPmf::JointPmf(VarList names, std::vector<int> cards, Eigen::VectorXd entries)
    : names_(std::move(names)), cards_(std::move(cards)), entries_(std::move(entries)) {
  if (names_.size() != cards_.size()) throw InfoError("JointPmf: names/cards length mismatch");
  if (names_.empty()) throw InfoError("JointPmf: no variables");
  for (std::size_t i = 0; i < names_.size(); ++i)
    for (std::size_t j = i + 1; j < names_.size(); ++j)
      if (names_[i] == names_[j]) throw InfoError("JointPmf: duplicate variable " + names_[i]);
  if (product(cards_) != std::size_t(entries_.size()))
    throw InfoError("JointPmf: entry count does not match alphabet sizes");
  check_probs(entries_, "JointPmf");
}

JointPmf JointPmf::from_pmf(VarList names, std::vector<int> cards, const Pmf& p) {
  return JointPmf(std::move(names), std::move(cards), p.probs());
}

int JointPmf::index_of(const std::string& name) const {
  for (std::size_t i = 0; i < names_.size(); ++i)
    if (names_[i] == name) return int(i);
  throw InfoError("unknown variable " + name);
}

JointPmf JointPmf::marginal(const VarList& keep) const {
  if (keep.empty()) throw InfoError("marginal: empty variable list");
  const std::size_t k = cards_.size();
  std::vector<int> pos;
  for (const auto& v : keep) pos.push_back(index_of(v));
  std::vector<std::size_t> mstride(k, 0);
  std::vector<int> mcards;
  std::size_t msize = 1;
  for (std::size_t a = pos.size(); a-- > 0;) {
    if (mstride[pos[a]] != 0) throw InfoError("marginal: repeated variable");
    mstride[pos[a]] = msize;
    msize *= std::size_t(cards_[pos[a]]);
  }
  for (int i : pos) mcards.push_back(cards_[i]);
  Eigen::VectorXd m = Eigen::VectorXd::Zero(Eigen::Index(msize));
  std::vector<int> digit(k, 0);
  std::size_t midx = 0;
  for (Eigen::Index j = 0; j < entries_.size(); ++j) {
    m[Eigen::Index(midx)] += entries_[j];
    for (std::size_t i = k; i-- > 0;) {
      if (++digit[i] < cards_[i]) {
        midx += mstride[i];
        break;
      }
      midx -= mstride[i] * std::size_t(cards_[i] - 1);
      digit[i] = 0;
    }
  }
  m /= m.sum();
  return JointPmf(keep, std::move(mcards), std::move(m));
}

JointPmf JointPmf::extend(const VarList& parents, const Conditional& cond, const VarList& children,
                          const std::vector<int>& child_cards) const {
  cond.validate("extend");
  if (children.size() != child_cards.size()) throw InfoError("extend: children/cards mismatch");
  const std::size_t k = cards_.size();
  std::vector<std::size_t> pstride(k, 0);
  std::size_t psize = 1;
  for (std::size_t a = parents.size(); a-- > 0;) {
    int i = index_of(parents[a]);
    pstride[i] = psize;
    psize *= std::size_t(cards_[i]);
  }
  const std::size_t csize = product(child_cards);
  if (std::size_t(cond.parent_configs()) != psize || std::size_t(cond.outcomes()) != csize)
    throw InfoError("extend: conditional shape does not match parent/child alphabets");

  VarList names = names_;
  std::vector<int> cards = cards_;
  names.insert(names.end(), children.begin(), children.end());
  cards.insert(cards.end(), child_cards.begin(), child_cards.end());
  const std::size_t total = product(cards);

  Eigen::VectorXd out{Eigen::Index(total)};
  std::vector<int> digit(k, 0);
  std::size_t pidx = 0;
  for (Eigen::Index j = 0; j < entries_.size(); ++j) {
    const double pj = entries_[j];
    for (std::size_t c = 0; c < csize; ++c)
      out[Eigen::Index(std::size_t(j) * csize + c)] = pj * cond.table(Eigen::Index(pidx), Eigen::Index(c));
    for (std::size_t i = k; i-- > 0;) {
      if (++digit[i] < cards_[i]) {
        pidx += pstride[i];
        break;
      }
      pidx -= pstride[i] * std::size_t(cards_[i] - 1);
      digit[i] = 0;
    }
  }
  out /= out.sum();
  return JointPmf(std::move(names), std::move(cards), std::move(out));
}

double entropy(const JointPmf& p, const VarList& vars) {
  if (vars.empty()) throw InfoError("entropy: empty variable set");
  return std::max(0.0, marginal_entropy(p, flags_for(p, vars)));
}

double conditional_entropy(const JointPmf& p, const VarList& a, const VarList& given) {
  if (given.empty()) return entropy(p, a);
  auto both = flags_for(p, a);
  auto g = flags_for(p, given);
  for (std::size_t i = 0; i < both.size(); ++i) both[i] = both[i] || g[i];
  return marginal_entropy(p, both) - marginal_entropy(p, g);
}

double mutual_information(const JointPmf& p, const VarList& a, const VarList& b, const VarList& given) {
  if (a.empty() || b.empty()) throw InfoError("mutual_information: empty argument set");
  const auto fa = flags_for(p, a);
  const auto fb = flags_for(p, b);
  const auto fg = flags_for(p, given);
  for (std::size_t i = 0; i < fa.size(); ++i)
    if ((fa[i] && fb[i]) || (fa[i] && fg[i]) || (fb[i] && fg[i]))
      throw InfoError("mutual_information: argument sets overlap");
  std::vector<bool> ag(fa.size()), bg(fa.size()), abg(fa.size());
  for (std::size_t i = 0; i < fa.size(); ++i) {
    ag[i] = fa[i] || fg[i];
    bg[i] = fb[i] || fg[i];
    abg[i] = ag[i] || fb[i];
  }
  const double hg = given.empty() ? 0.0 : marginal_entropy(p, fg);
  const double v = marginal_entropy(p, ag) + marginal_entropy(p, bg) - marginal_entropy(p, abg) - hg;
  return (v < 0.0 && v > -kMassTol) ? 0.0 : v;
}

double binary_entropy(double p) {
  if (p <= 0.0 || p >= 1.0) return 0.0;
  return -p * std::log2(p) - (1.0 - p) * std::log2(1.0 - p);
}

JointPmf chain(const Pmf& a, const Conditional& b_given_a, const Conditional& c_given_b) {
  JointPmf j({"A"}, {int(a.size())}, a.probs());
  j = j.extend({"A"}, b_given_a, {"B"}, {int(b_given_a.outcomes())});
  return j.extend({"B"}, c_given_b, {"C"}, {int(c_given_b.outcomes())});
}

Rng::Rng(std::uint64_t seed) : state_(seed) {}

std::uint64_t Rng::next() {
  std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

double Rng::uniform() { return double(next() >> 11) * 0x1.0p-53; }

Eigen::VectorXd Rng::dirichlet(Eigen::Index n) {
  // Gamma(1) draws are exponentials.
  Eigen::VectorXd v(n);
  for (Eigen::Index i = 0; i < n; ++i) v[i] = -std::log1p(-uniform());
  double s = v.sum();
  if (s <= 0.0) return Eigen::VectorXd::Constant(n, 1.0 / double(n));
  return v / s;
}

Conditional Rng::random_conditional(Eigen::Index parents, Eigen::Index outcomes) {
  Conditional c{Eigen::MatrixXd(parents, outcomes)};
  for (Eigen::Index r = 0; r < parents; ++r) c.table.row(r) = dirichlet(outcomes).transpose();
  return c;
}

JointPmf Rng::random_joint(const VarList& names, const std::vector<int>& cards) {
  return JointPmf(names, cards, dirichlet(Eigen::Index(product(cards))));
}

std::size_t simplex_grid_size(int n, double step) {
  if (n <= 0) throw InfoError("simplex grid: dimension must be positive");
  if (!(step > 0.0) || step > 1.0) throw InfoError("simplex grid: step must lie in (0,1]");
  const long K = long(std::floor(1.0 / step + 1e-9));
  // C(K + n - 1, n - 1), saturating
  long double c = 1.0L;
  for (int i = 1; i <= n - 1; ++i) {
    c = c * (long double)(K + i) / (long double)i;
    if (c > 1e18L) return std::size_t(-1);
  }
  return std::size_t(std::llround(double(c)));
}

void for_each_simplex_point(int n, double step, std::size_t limit,
                            const std::function<void(const Eigen::VectorXd&)>& fn) {
  const std::size_t count = simplex_grid_size(n, step);
  if (count > limit)
    throw GridTooLargeError("simplex grid with " + std::to_string(count) +
                    " points exceeds the evaluation limit; use a coarser step");
  const int K = int(std::floor(1.0 / step + 1e-9));
  Eigen::VectorXd p(n);
  std::vector<int> k(std::size_t(n), 0);
  // enumerate k[0..n-2] with sum <= K, lexicographic
  while (true) {
    int used = 0;
    for (int i = 0; i + 1 < n; ++i) {
      p[i] = k[std::size_t(i)] * step;
      used += k[std::size_t(i)];
    }
    p[n - 1] = std::max(0.0, 1.0 - used * step);
    fn(p);
    if (n == 1) return;
    int i = n - 2;
    while (i >= 0) {
      int rest = 0;
      for (int j = 0; j < i; ++j) rest += k[std::size_t(j)];
      if (rest + k[std::size_t(i)] < K) {
        ++k[std::size_t(i)];
        break;
      }
      k[std::size_t(i)] = 0;
      --i;
    }
    if (i < 0) return;
  }
}

}  // namespace confbc
