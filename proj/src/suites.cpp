#include "confbc/suites.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <map>

namespace confbc {

namespace {

using Clock = std::chrono::steady_clock;

std::uint64_t case_seed(std::uint64_t base, std::size_t i) {
  return base * 0x9e3779b97f4a7c15ULL + 0x632be59bd9b4e019ULL * (std::uint64_t(i) + 1);
}

DmBroadcastChannel random_binary_channel(Rng& rng, double c12, double c21) {
  return DmBroadcastChannel(2, 2, 2, rng.random_conditional(2, 4).table, c12, c21);
}

/// |a - b| with equal infinities (including two empty regions) counted as 0.
double support_diff(double a, double b) {
  if (a == b) return 0.0;
  return std::abs(a - b);
}

double max_abs_diff(const RegionEnvelope& x, const RegionEnvelope& y) {
  double worst = 0.0;
  for (Eigen::Index i = 0; i < x.size(); ++i) worst = std::max(worst, support_diff(x.values[i], y.values[i]));
  return worst;
}

double max_of(const std::vector<double>& v) {
  double m = -kInf;
  for (double x : v) m = std::max(m, x);
  return m;
}

// I(X;Y) for a binary input with P(X=0) = q over the channel matrix w.
double binary_input_mi(double q, const Eigen::MatrixXd& w) {
  auto h = [](const Eigen::VectorXd& p) {
    double s = 0.0;
    for (Eigen::Index i = 0; i < p.size(); ++i)
      if (p[i] > 0.0) s -= p[i] * std::log2(p[i]);
    return s;
  };
  const Eigen::VectorXd out = q * w.row(0).transpose() + (1.0 - q) * w.row(1).transpose();
  return h(out) - q * h(w.row(0).transpose()) - (1.0 - q) * h(w.row(1).transpose());
}

// ---------------------------------------------------------------------------

SuiteReport info_properties(const SuiteConfig& cfg) {
  constexpr std::size_t kJoints = 1000;
  constexpr double kTol = 1e-10;
  struct Case {
    double chain = 0, mi_chain = 0, min_value = 0, symmetry = 0, processing = 0, ceiling = 0;
  };
  std::vector<Case> cases(kJoints);
  parallel_for(kJoints, [&](std::size_t i) {
    Rng rng(case_seed(cfg.seed, i));
    auto card = [&] { return 2 + int(rng.uniform() * 3.0); };
    const std::vector<int> cards{card(), card(), card()};
    const JointPmf p = rng.random_joint({"A", "B", "C"}, cards);
    Case& c = cases[i];
    const double h_a = entropy(p, {"A"});
    c.chain = std::abs(entropy(p, {"A", "B", "C"}) -
                       (h_a + conditional_entropy(p, {"B"}, {"A"}) + conditional_entropy(p, {"C"}, {"A", "B"})));
    const double i_ab = mutual_information(p, {"A"}, {"B"});
    c.mi_chain = std::abs(mutual_information(p, {"A"}, {"B", "C"}) - i_ab -
                          mutual_information(p, {"A"}, {"C"}, {"B"}));
    c.min_value = std::min({h_a, conditional_entropy(p, {"B"}, {"A", "C"}), i_ab,
                            mutual_information(p, {"A"}, {"C"}, {"B"}), mutual_information(p, {"A"}, {"B"}, {"C"})});
    c.symmetry = std::abs(i_ab - mutual_information(p, {"B"}, {"A"}));
    c.ceiling = h_a - std::log2(double(cards[0]));

    const JointPmf m = chain(Pmf(rng.dirichlet(cards[0])), rng.random_conditional(cards[0], cards[1]),
                             rng.random_conditional(cards[1], cards[2]));
    c.processing = mutual_information(m, {"A"}, {"C"}) -
                   std::min(mutual_information(m, {"A"}, {"B"}), mutual_information(m, {"B"}, {"C"}));
  });
  auto worst = [&](auto field) {
    double w = -kInf;
    for (const auto& c : cases) w = std::max(w, c.*field);
    return w;
  };
  double min_value = kInf;
  for (const auto& c : cases) min_value = std::min(min_value, c.min_value);
  SuiteReport r;
  r.checks.push_back(make_check("1000 joints: |H(A,B,C) - H(A) - H(B|A) - H(C|A,B)|", worst(&Case::chain),
                                Relation::at_most, kTol));
  r.checks.push_back(make_check("1000 joints: |I(A;B,C) - I(A;B) - I(A;C|B)|", worst(&Case::mi_chain),
                                Relation::at_most, kTol));
  r.checks.push_back(make_check("1000 joints: smallest entropy or (conditional) mutual information", min_value,
                                Relation::at_least, -kTol));
  r.checks.push_back(
      make_check("1000 joints: |I(A;B) - I(B;A)|", worst(&Case::symmetry), Relation::at_most, kTol));
  r.checks.push_back(
      make_check("1000 joints: H(A) - log2|A|", worst(&Case::ceiling), Relation::at_most, kTol));
  r.checks.push_back(make_check("1000 chains A-B-C: I(A;C) - min(I(A;B), I(B;C))", worst(&Case::processing),
                                Relation::at_most, kTol));
  return r;
}

// ---------------------------------------------------------------------------

SuiteReport fm_equivalence(const SuiteConfig& cfg) {
  constexpr std::size_t kCases = 100;
  constexpr double kTol = 1e-9;
  const std::vector<double> alphas{0.0, 0.5, 1.0};
  std::vector<double> worst(kCases * alphas.size(), 0.0);
  std::vector<int> nonempty(kCases * alphas.size(), 0);
  parallel_for(kCases, [&](std::size_t i) {
    Rng rng(case_seed(cfg.seed, i));
    const DmBroadcastChannel ch = random_binary_channel(rng, 0.3 + rng.uniform(), 0.3 + rng.uniform());
    // odd cases keep U and V independent given W so nonempty regions are well represented
    const AuxFactorization f = random_factorization(rng, ch, 2, 2, 2, 2, 2, false, i % 2 == 1);
    const InnerTerms t = inner_terms(ch, f);
    const Eigen::MatrixXd dirs = random_directions(rng, 50, 3);
    for (std::size_t k = 0; k < alphas.size(); ++k) {
      const double a = alphas[k];
      const ConstraintPolytope direct = inner1_alpha_rows(t, ch.c12, ch.c21, a, LinkTerm::clipped).polytope("inner1");
      const ConstraintPolytope projected =
          to_polytope(fm_eliminate(appendixB_system(t, ch.c12, ch.c21, a), appendixB_partial_rates()));
      const RegionEnvelope x = envelope_of(direct, dirs), y = envelope_of(projected, dirs);
      worst[i * alphas.size() + k] = max_abs_diff(x, y);
      nonempty[i * alphas.size() + k] = std::isfinite(x.values[0]) ? 1 : 0;
    }
  });
  const auto agree = std::count_if(worst.begin(), worst.end(), [&](double w) { return w <= kTol; });
  SuiteReport r;
  r.checks.push_back(make_check("300 cases x 50 directions: max |support(FM projection) - support(direct rows)|",
                                max_of(worst), Relation::at_most, kTol));
  r.checks.push_back(make_check("fraction of cases agreeing within 1e-9", double(agree) / double(worst.size()),
                                Relation::at_least, 1.0));
  r.checks.push_back(make_check("cases with a nonempty region", double(std::count(nonempty.begin(), nonempty.end(), 1)),
                                Relation::at_least, 150.0));
  return r;
}

// ---------------------------------------------------------------------------

SuiteReport alpha_star(const SuiteConfig& cfg) {
  constexpr std::size_t kCases = 100;
  constexpr int kAlphas = 21;
  constexpr double kTol = 1e-9;
  struct Case {
    double raw1 = -kInf, raw2 = -kInf, attain1 = -kInf, attain2 = -kInf, clipped1 = -kInf;
  };
  std::vector<Case> cases(kCases);
  const Eigen::MatrixXd dirs = fan_3d();
  parallel_for(kCases, [&](std::size_t i) {
    Rng rng(case_seed(cfg.seed, i));
    const DmBroadcastChannel ch = random_binary_channel(rng, 2.0 * rng.uniform(), 2.0 * rng.uniform());
    const bool indep = i % 2 == 1;
    const AuxFactorization f1 = random_factorization(rng, ch, 2, 2, 2, 2, 2, false, indep);
    const AuxFactorization f2 = random_factorization(rng, ch, 2, 2, 2, 2, 2, true, indep);
    const InnerTerms t1 = inner_terms(ch, f1), t2 = inner_terms(ch, f2);
    const RegionEnvelope best1 = envelope_of(inner1_polytope(t1, ch.c12, ch.c21), dirs);
    const RegionEnvelope best2 = envelope_of(inner2_polytope(t2, ch.c12, ch.c21), dirs);
    Case& c = cases[i];
    for (int k = 0; k < kAlphas; ++k) {
      const double a = k / double(kAlphas - 1);
      const RegionEnvelope e1 =
          envelope_of(inner1_alpha_rows(t1, ch.c12, ch.c21, a, LinkTerm::raw).polytope("a"), dirs);
      const RegionEnvelope e2 =
          envelope_of(inner2_alpha_rows(t2, ch.c12, ch.c21, a, LinkTerm::raw).polytope("a"), dirs);
      c.raw1 = std::max(c.raw1, envelope_dominates(best1, e1).max_violation);
      c.raw2 = std::max(c.raw2, envelope_dominates(best2, e2).max_violation);
      // clipped form at alpha = raw form with the idle quantizers replaced by constants
      const AuxFactorization g = drop_idle_quantizers(ch, f1, a);
      const RegionEnvelope dropped = envelope_of(inner1_polytope(inner_terms(ch, g), ch.c12, ch.c21), dirs);
      const RegionEnvelope clipped =
          envelope_of(inner1_alpha_rows(t1, ch.c12, ch.c21, a, LinkTerm::clipped).polytope("a"), dirs);
      c.clipped1 = std::max(c.clipped1, envelope_dominates(dropped, clipped).max_violation);
    }
    const RegionEnvelope s1 = envelope_of(
        inner1_alpha_rows(t1, ch.c12, ch.c21, alpha1_star(t1, ch.c12), LinkTerm::raw).polytope("a"), dirs);
    const RegionEnvelope s2 = envelope_of(
        inner2_alpha_rows(t2, ch.c12, ch.c21, alpha2_star(t2, ch.c21), LinkTerm::raw).polytope("a"), dirs);
    c.attain1 = envelope_dominates(s1, best1).max_violation;
    c.attain2 = envelope_dominates(s2, best2).max_violation;
  });
  auto worst = [&](auto field) {
    double w = -kInf;
    for (const auto& c : cases) w = std::max(w, c.*field);
    return w;
  };
  SuiteReport r;
  r.checks.push_back(make_check("first family, 100 x 21 alphas: max support excess over the alpha1* region",
                                worst(&Case::raw1), Relation::at_most, kTol));
  r.checks.push_back(make_check("second family, 100 x 21 alphas: max support excess over the alpha2* region",
                                worst(&Case::raw2), Relation::at_most, kTol));
  r.checks.push_back(make_check("region at alpha1* contains the optimal-split region (max shortfall)",
                                worst(&Case::attain1), Relation::at_most, kTol));
  r.checks.push_back(make_check("region at alpha2* contains the optimal-split region (max shortfall)",
                                worst(&Case::attain2), Relation::at_most, kTol));
  r.checks.push_back(make_check("clipped forms: max excess over the optimal region with idle quantizers dropped",
                                worst(&Case::clipped1), Relation::at_most, kTol));
  return r;
}

// ---------------------------------------------------------------------------

SuiteReport dm_example1(const SuiteConfig&) {
  constexpr double kGridTol = 2e-3;
  const Eigen::MatrixXd dirs = fan_2d();
  SuiteReport r;
  for (double c21 : {0.5, 0.9}) {
    const auto ch = std::get<DmBroadcastChannel>(example_channel("dm-ex1", {0.2, 1.0, 0.3, c21}));
    const RegionEnvelope env = theorem4_envelope(ch, 1, 1e-3, dirs);
    // 1-D oracle: max over P(X=0) of min(I(X;Y1) + C21, H(X))
    const Eigen::MatrixXd w1 = ch.marginal_y1();
    double oracle = 0.0;
    for (int k = 0; k <= 100000; ++k) {
      const double q = k / 100000.0;
      oracle = std::max(oracle, std::min(binary_input_mi(q, w1) + c21, binary_entropy(q)));
    }
    const std::string tag = "C21=" + format_double(c21) + ": ";
    r.checks.push_back(make_check(tag + "|R0 support - C12|", std::abs(env.along(rates(1, 0)) - 0.3),
                                  Relation::at_most, 1e-9));
    r.checks.push_back(make_check(tag + "|sum-rate support - 1-D sweep oracle|",
                                  std::abs(env.along(rates(1, 1)) - oracle), Relation::at_most, kGridTol));
  }
  // outer bound at C12 = 0.1, C21 = 0.9 reaches the cut-set value on the coarse grid
  const auto ch = std::get<DmBroadcastChannel>(example_channel("dm-ex1", {0.2, 1.0, 0.1, 0.9}));
  const RegionEnvelope outer = outer_envelope(ch, 0.5, canonical_directions_2d());
  r.checks.push_back(make_check("outer bound, C12=0.1, C21=0.9: |sum-rate support (R2=0) - 1|",
                                std::abs(outer.along(rates(1, 1)) - 1.0), Relation::at_most, 1e-9));
  // the capacity-achieving substitution turns the first inner bound into the capacity rows
  const auto ch5 = std::get<DmBroadcastChannel>(example_channel("dm-ex1", {0.2, 1.0, 0.3, 0.5}));
  double coincide = 0.0;
  for (int k = 0; k <= 100; ++k) {
    Eigen::MatrixXd pvx(1, 2);
    pvx << k / 100.0, 1.0 - k / 100.0;
    const ConstraintPolytope inner = project_r2_zero(inner1_polytope(ch5, capacity_substitution(ch5, pvx)));
    coincide = std::max(coincide, max_abs_diff(envelope_of(inner, dirs), envelope_of(theorem4_polytope(ch5, pvx), dirs)));
  }
  r.checks.push_back(make_check("101 input laws: max |inner1 (substituted, R2=0) - capacity region| support",
                                coincide, Relation::at_most, 1e-9));
  return r;
}

SuiteReport dm_fig3(const SuiteConfig&) {
  constexpr double kMargin = 0.01;
  const auto ch = std::get<DmBroadcastChannel>(example_channel("dm-ex2", {0.2, 1.0, 0.0, 0.9}));
  const Eigen::MatrixXd dirs = fan_2d();
  const int v_card = 3;
  const auto envs = simplex_grid_envelopes(
      v_card * ch.x_card, 0.02, kMaxGridEvaluations, dirs, 3,
      [&](const Eigen::VectorXd& pt, std::vector<EnvelopeAccumulator>& acc) {
        const CapacityTerms t = capacity_terms(ch, grid_table(pt, v_card, ch.x_card));
        acc[0].add(theorem4_polytope(t, 0.0, 0.9, true));
        acc[1].add(theorem4_polytope(t, 0.0, 0.9, false));
        acc[2].add(theorem4_polytope(t, 0.1, 0.9, true));
      });
  const RegionEnvelope& cap = envs[0];
  const RegionEnvelope& cut = envs[1];
  const RegionEnvelope& cap_linked = envs[2];
  SuiteReport r;
  r.checks.push_back(make_check("(0,0.9): capacity inside cut-set, max violation",
                                envelope_dominates(cut, cap).max_violation, Relation::at_most, 1e-9));
  r.checks.push_back(make_check("(0,0.9): largest cut-set margin over 181 directions",
                                (cut.values - cap.values).maxCoeff(), Relation::at_least, kMargin));
  r.checks.push_back(make_check("(0.1,0.9) contains (0,0.9), max violation",
                                envelope_dominates(cap_linked, cap).max_violation, Relation::at_most, 1e-9));
  r.checks.push_back(make_check("(0.1,0.9) over (0,0.9): largest gain over 181 directions",
                                (cap_linked.values - cap.values).maxCoeff(), Relation::at_least, kMargin));
  return r;
}

// ---------------------------------------------------------------------------

SuiteReport relay_largest_rate(const SuiteConfig& cfg) {
  constexpr std::size_t kCases = 100;
  std::vector<double> diff(kCases, 0.0);
  std::vector<int> compared(kCases, 0);
  parallel_for(kCases, [&](std::size_t i) {
    Rng rng(case_seed(cfg.seed, i));
    const DmBroadcastChannel ch = random_binary_channel(rng, 0.5 + rng.uniform(), 0.0);
    const int w_card = 2;
    const Eigen::VectorXd pw = rng.dirichlet(w_card * ch.x_card);
    Eigen::MatrixXd pwx = grid_table(pw, w_card, ch.x_card);
    const Conditional q1 = rng.random_conditional(w_card * ch.y1_card, ch.y1_card + 1);
    // U constant, V = X: the second receiver's private rate is the relay rate
    Eigen::VectorXd aux = Eigen::VectorXd::Zero(ch.x_card * w_card * ch.x_card);
    for (int v = 0; v < ch.x_card; ++v)
      for (int w = 0; w < w_card; ++w) aux[(v * w_card + w) * ch.x_card + v] = pwx(w, v);
    const AuxFactorization f{JointPmf({"U", "V", "W", "X"}, {1, ch.x_card, w_card, ch.x_card}, aux), q1,
                             Conditional::trivial(w_card * ch.y2_card)};
    const double r2 = support(inner1_polytope(ch, f), rates(0, 0, 1));
    if (std::isinf(r2)) return;  // no bin rates exist for this draw
    compared[i] = 1;
    diff[i] = std::abs(r2 - primitive_relay_rate(ch, pwx, q1));
  });
  SuiteReport r;
  r.checks.push_back(make_check("100 draws: max |R2 support of first inner bound - relay rate|", max_of(diff),
                                Relation::at_most, 1e-9));
  r.checks.push_back(make_check("draws compared (nonempty region)",
                                double(std::count(compared.begin(), compared.end(), 1)), Relation::at_least, 50.0));

  // closed-form cases
  Rng rng(case_seed(cfg.seed, kCases));
  DmBroadcastChannel ch = random_binary_channel(rng, 0.0, 0.0);
  Eigen::MatrixXd px(1, 2);
  px << 0.3, 0.7;
  const Eigen::MatrixXd w2 = ch.marginal_y2();
  const double i_xy2 = binary_input_mi(0.3, w2);
  r.checks.push_back(make_check("constant quantizer, C12=0: |rate - I(X;Y2)|",
                                std::abs(primitive_relay_rate(ch, px, Conditional::trivial(2)) - i_xy2),
                                Relation::at_most, 1e-12));
  ch.c12 = 100.0;
  r.checks.push_back(make_check("Yh1 = Y1, large C12: |rate - I(X;Y1,Y2)|",
                                std::abs(primitive_relay_rate(ch, px, Conditional::identity(2)) -
                                         binary_input_mi(0.3, ch.transition)),
                                Relation::at_most, 1e-12));
  // Y1 = X, Y2 = X xor Z with P(Z=0) = 0.2
  Eigen::MatrixXd t(2, 4);
  t << 0.2, 0.8, 0.0, 0.0, 0.0, 0.0, 0.8, 0.2;
  const DmBroadcastChannel y1_is_x(2, 2, 2, t, 0.25, 0.0);
  const double expected = std::min(binary_input_mi(0.3, y1_is_x.marginal_y2()) + 0.25, binary_entropy(0.3));
  r.checks.push_back(make_check("Y1 = X, Yh1 = Y1: |rate - min(I(X;Y2) + C12, H(X))|",
                                std::abs(primitive_relay_rate(y1_is_x, px, Conditional::identity(2)) - expected),
                                Relation::at_most, 1e-12));
  return r;
}

// ---------------------------------------------------------------------------

SuiteReport gauss_t7(const SuiteConfig&) {
  constexpr double kTol = 3e-3;
  const Eigen::MatrixXd dirs = fan_2d();
  SuiteReport r;
  for (double P : {0.5, 1.0, 4.0}) {
    const GaussianBc g{1.0, 0.5, 1.0, P, 0.2, 0.7};
    const RegionEnvelope exact =
        beta_envelope([&](double b) { return capacity_t7_polytope(g, b); }, 1e-3, dirs);
    const RegionEnvelope outer = outer_envelope_g(g, 1e-2, dirs);
    r.checks.push_back(make_check("P=" + format_double(P) + ": max |capacity - outer (R2=0)| over 181 directions",
                                  max_abs_diff(exact, outer), Relation::at_most, kTol));
  }
  const Eigen::MatrixXd canon = canonical_directions_2d();
  for (const char* name : {"g-noise-at-2", "g-noise-at-1"}) {
    const auto g = std::get<GaussianBc>(example_channel(name, {0.2, 3.0, 0.4, 0.6}));
    const RegionEnvelope e = beta_envelope([&](double b) { return capacity_t7_polytope(g, b); }, 1e-3, canon);
    const bool noise_at_2 = std::string(name) == "g-noise-at-2";
    const double r0 = noise_at_2 ? 0.4 : psi(3.0) + 0.4;
    const double sum = noise_at_2 ? psi(3.0) + 0.6 : 0.6;
    const double err = std::max(std::abs(e.along(rates(1, 0)) - std::min(r0, sum)), std::abs(e.along(rates(1, 1)) - sum));
    r.checks.push_back(make_check(std::string(name) + ", P=3: max error of R0 and sum-rate supports", err,
                                  Relation::at_most, 1e-9));
  }
  return r;
}

SuiteReport gauss_t8(const SuiteConfig&) {
  const GaussianBc g{1.0, 0.5, 1.0, 4.0, 0.0, 0.3};
  const Eigen::MatrixXd dirs = fan_3d();
  auto family = [&](double b) { return capacity_t8_polytope(g, b); };
  const RegionEnvelope exact = beta_envelope(family, 1e-3, dirs);
  SuiteReport r;
  r.checks.push_back(make_check("max |capacity - outer| over 520 directions (beta 1e-3, outer grid 1e-2)",
                                max_abs_diff(exact, outer_envelope_g(g, 1e-2, dirs)), Relation::at_most, 3e-3));
  const RegionEnvelope fine = beta_envelope(family, 1e-5, dirs);
  r.checks.push_back(make_check("max |beta step 1e-3 - beta step 1e-5| envelope", max_abs_diff(exact, fine),
                                Relation::at_most, 2e-3));
  const double b2p = 0.25 * 4.0;
  r.checks.push_back(make_check("beta=1: R0+R2 support", support(family(1.0), rates(1, 0, 1)), Relation::at_most, 1e-12));
  r.checks.push_back(make_check("beta=0: |R0+R2 support - psi(b^2 P)|",
                                std::abs(support(family(0.0), rates(1, 0, 1)) - psi(b2p)), Relation::at_most, 1e-12));
  return r;
}

SuiteReport gauss_gaps(const SuiteConfig& cfg) {
  constexpr std::size_t kTuples = 500;
  std::vector<std::map<std::string, double>> excess(kTuples);
  std::vector<int> aligned(kTuples, 0);
  parallel_for(kTuples, [&](std::size_t i) {
    Rng rng(case_seed(cfg.seed, i));
    double a = (2.0 * rng.uniform() - 1.0) * 3.0, b = (2.0 * rng.uniform() - 1.0) * 3.0;
    if (std::abs(a) < std::abs(b)) std::swap(a, b);
    const double lambda = (2.0 * rng.uniform() - 1.0) * 0.99;
    const double P = 100.0 * rng.uniform() + 1e-3;
    const GaussianBc g{a, b, lambda, P, 2.0 * rng.uniform(), 2.0 * rng.uniform()};
    aligned[i] = lambda * a * b >= 0.0 ? 1 : 0;
    for (const RowGap& row : gap_certificate(g, 1e-2).rows) {
      auto [it, fresh] = excess[i].emplace(row.theorem, row.gap - row.allowed);
      if (!fresh) it->second = std::max(it->second, row.gap - row.allowed);
    }
  });
  auto worst = [&](const std::string& th) {
    double w = -kInf;
    for (const auto& m : excess)
      if (auto it = m.find(th); it != m.end()) w = std::max(w, it->second);
    return w;
  };
  SuiteReport r;
  r.checks.push_back(make_check("500 tuples: max paired-row gap minus 1/2 bit (degraded message sets)", worst("t9"),
                                Relation::at_most, 1e-9));
  r.checks.push_back(make_check("500 tuples: max paired-row gap minus 1/2 bit (one-sided links)", worst("t10"),
                                Relation::at_most, 1e-9));
  r.checks.push_back(make_check("500 tuples: max paired-row gap minus 0.5 log2(2/(1-|lambda|))", worst("t11"),
                                Relation::at_most, 1e-9));
  r.checks.push_back(make_check("aligned tuples: max paired-row gap minus 0.5 log2(2/(1-lambda^2))",
                                worst("t11-aligned"), Relation::at_most, 1e-9));
  r.checks.push_back(make_check("tuples with lambda a b >= 0", double(std::count(aligned.begin(), aligned.end(), 1)),
                                Relation::at_least, 1.0));
  // lambda = b/a: decode-and-forward meets the outer bound row by row
  const GapCertificate coincide = gap_certificate(GaussianBc{2.0, 1.0, 0.5, 1.0, 0.3, 0.4}, 1e-2);
  double df_gap = -kInf;
  for (const RowGap& row : coincide.rows)
    if (row.theorem == "t11") df_gap = std::max(df_gap, row.gap);
  r.checks.push_back(make_check("a=2, b=1, lambda=0.5: largest decode-and-forward row gap", df_gap,
                                Relation::at_most, 1e-9));
  return r;
}

SuiteReport gauss_degraded(const SuiteConfig&) {
  const Eigen::MatrixXd dirs = normalized_rows(canonical_directions_3d());
  SuiteReport r;
  for (const GaussianBc& g : {GaussianBc{2.0, 1.0, 0.5, 1.0, 0.3, 0.4}, GaussianBc{1.0, -0.5, -0.5, 1.0, 0.3, 0.4}}) {
    const RegionEnvelope df = beta_envelope([&](double b) { return df_inner_polytope(g, b); }, 1e-2, dirs);
    const RegionEnvelope outer = outer_envelope_g(g, 1e-2, dirs);
    r.checks.push_back(make_check("a=" + format_double(g.a) + ", b=" + format_double(g.b) + ", lambda=" +
                                      format_double(g.lambda) + ": max |df - outer| over canonical directions",
                                  max_abs_diff(df, outer), Relation::at_most, 1e-6));
  }
  return r;
}

SuiteReport gauss_vanishing_power(const SuiteConfig&) {
  const Eigen::MatrixXd dirs = canonical_directions_2d();
  auto envelope = [&](double P, double c12, double c21) {
    const auto g = std::get<GaussianBc>(example_channel("g-mirror", {0.2, P, c12, c21}));
    return beta_envelope([&](double b) { return capacity_t7_polytope(g, b); }, 1e-3, dirs);
  };
  SuiteReport r;
  const RegionEnvelope unit = envelope(1.0, 1.0, 1.0);
  r.checks.push_back(make_check("P=1, C12=C21=1: |R0 support - 1.5|", std::abs(unit.along(rates(1, 0)) - 1.5),
                                Relation::at_most, 1e-9));
  r.checks.push_back(make_check("P=1, C12=C21=1: |sum-rate support - 1.5|", std::abs(unit.along(rates(1, 1)) - 1.5),
                                Relation::at_most, 1e-9));
  double prev = kInf, rise = -kInf, last = 0.0;
  for (int k = 0; k <= 6; ++k) {
    last = envelope(std::pow(10.0, -k), 1.0, 1.0).along(rates(1, 0));
    rise = std::max(rise, last - prev);
    prev = last;
  }
  r.checks.push_back(make_check("P = 1, 0.1, ..., 1e-6: largest increase of the R0 support", rise, Relation::at_most, 0.0));
  r.checks.push_back(make_check("P=1e-6: R0 support lower end", last, Relation::at_least, 0.999));
  r.checks.push_back(make_check("P=1e-6: R0 support upper end", last, Relation::at_most, 1.0 + 1e-6));
  const double uneven = envelope(1e-6, 0.8, 0.4).along(rates(1, 0));
  r.checks.push_back(make_check("P=1e-6, C12=0.8, C21=0.4: |R0 support - min(C12, C21)|", std::abs(uneven - 0.4),
                                Relation::at_most, 1e-6));
  return r;
}

using SuiteFn = SuiteReport (*)(const SuiteConfig&);

const std::vector<std::pair<std::string, SuiteFn>>& registry() {
  static const std::vector<std::pair<std::string, SuiteFn>> r{
      {"info-properties", info_properties},   {"fm-equivalence", fm_equivalence},
      {"alpha-star", alpha_star},             {"dm-example1", dm_example1},
      {"dm-fig3", dm_fig3},                   {"relay-largest-rate", relay_largest_rate},
      {"gauss-t7", gauss_t7},                 {"gauss-t8", gauss_t8},
      {"gauss-gaps", gauss_gaps},             {"gauss-degraded", gauss_degraded},
      {"gauss-vanishing-power", gauss_vanishing_power},
  };
  return r;
}

Json number_json(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  return v;
}

}  // namespace

SuiteCheck make_check(std::string description, double measured, Relation rel, double threshold) {
  SuiteCheck c{std::move(description), measured, threshold, rel, false};
  c.pass = rel == Relation::at_most ? measured <= threshold : measured >= threshold;  // NaN fails
  return c;
}

bool SuiteReport::pass() const {
  return !checks.empty() && std::all_of(checks.begin(), checks.end(), [](const SuiteCheck& c) { return c.pass; });
}

Json SuiteReport::to_json() const {
  Json list = Json::array();
  for (const auto& c : checks)
    list.push_back(Json{{"description", c.description},
                        {"measured", number_json(c.measured)},
                        {"threshold", number_json(c.threshold)},
                        {"relation", c.relation == Relation::at_most ? "<=" : ">="},
                        {"pass", c.pass}});
  return Json{{"suite", suite}, {"seed", seed}, {"checks", list}, {"pass", pass()}};
}

const std::vector<std::string>& suite_names() {
  static const std::vector<std::string> names = [] {
    std::vector<std::string> n;
    for (const auto& [name, fn] : registry()) n.push_back(name);
    return n;
  }();
  return names;
}

SuiteReport run_suite(const std::string& name, const SuiteConfig& config) {
  for (const auto& [n, fn] : registry()) {
    if (n != name) continue;
    const auto t0 = Clock::now();
    SuiteReport r = fn(config);
    r.suite = name;
    r.seed = config.seed;
    r.wall_time_seconds = std::chrono::duration<double>(Clock::now() - t0).count();
    return r;
  }
  std::string valid;
  for (const auto& n : suite_names()) valid += (valid.empty() ? "" : ", ") + n;
  throw UnknownSuiteError("unknown suite '" + name + "'; valid suites: " + valid);
}

}  // namespace confbc
