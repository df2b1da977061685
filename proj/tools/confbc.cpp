// confbc: rate regions of broadcast channels with conferencing decoders.
//
//   confbc region --channel ch.json --bound t7 --out region.csv [--svg r.svg]
//   confbc verify alpha-star --seed 7 --json report.json
//   confbc sweep --channel g.json --vary lambda --from -0.9 --to 0.9 --points 19 --metric sumrate-gap
//   confbc fm --system sys.json --eliminate B1,B2
//   confbc plot --in region.csv --svg region.svg
//
// Exit codes: 0 success, 1 failed verification or I/O error, 2 inapplicable
// bound or violated precondition, 3 malformed input, 4 grid too large.

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "confbc/suites.hpp"

using namespace confbc;

namespace {

constexpr int kExitFailed = 1;
constexpr int kExitPrecondition = 2;
constexpr int kExitFormat = 3;
constexpr int kExitGrid = 4;

struct RegionOptions {
  std::string channel;
  std::string bound = "outer";
  std::string factorization;
  double grid = 0.0;  // 0: per-bound default
  int dirs = 0;       // 0: 181 in 2-D, 512 in 3-D
  int r2 = -1;        // 0: project onto R2 = 0
  int v_card = 0;     // 0: |X|
  double alpha = -1.0;
  std::string out, svg, boundary;
};

const std::vector<std::string> kBounds{"outer", "inner1", "inner2", "t4", "t5",  "t7",
                                       "t8",    "t9",     "t10",    "df", "cutset-fig3"};

bool is_dm_bound(const std::string& b) {
  return b == "inner1" || b == "inner2" || b == "t4" || b == "t5" || b == "cutset-fig3";
}

bool is_planar_bound(const std::string& b) {
  return b == "t4" || b == "cutset-fig3" || b == "t7" || b == "t9";
}

/// Direction set with the canonical normals appended when missing.
Eigen::MatrixXd direction_set(int dim, int count) {
  Eigen::MatrixXd fan = dim == 2 ? fan_2d(count > 0 ? count : 181) : fan_3d(count > 0 ? count : 512);
  const Eigen::MatrixXd canon = normalized_rows(dim == 2 ? canonical_directions_2d() : canonical_directions_3d());
  std::vector<Eigen::RowVectorXd> extra;
  for (Eigen::Index c = 0; c < canon.rows(); ++c) {
    bool found = false;
    for (Eigen::Index i = 0; i < fan.rows() && !found; ++i)
      found = (fan.row(i) - canon.row(c)).cwiseAbs().maxCoeff() < 1e-12;
    if (!found) extra.push_back(canon.row(c));
  }
  Eigen::MatrixXd out(fan.rows() + Eigen::Index(extra.size()), dim);
  out.topRows(fan.rows()) = fan;
  for (std::size_t k = 0; k < extra.size(); ++k) out.row(fan.rows() + Eigen::Index(k)) = extra[k];
  return out;
}

RegionEnvelope dm_region(const DmBroadcastChannel& ch, const RegionOptions& o, const Eigen::MatrixXd& dirs) {
  const bool flat = dirs.cols() == 2;
  const int v_card = o.v_card > 0 ? o.v_card : ch.x_card;
  if (o.bound == "outer") return outer_envelope(ch, o.grid > 0 ? o.grid : 0.25, dirs);
  if (o.bound == "t4" || o.bound == "cutset-fig3") {
    if (!is_semi_deterministic(ch).holds)
      throw PreconditionError("bound " + o.bound + " needs Y2 to be a function of (X, Y1)");
    return theorem4_envelope(ch, v_card, o.grid > 0 ? o.grid : 0.01, dirs, o.bound == "t4");
  }
  if (o.bound == "t5") {
    if (!is_semi_deterministic(ch).holds) throw PreconditionError("bound t5 needs Y2 to be a function of (X, Y1)");
    const MoreCapableReport mc = more_capable_evidence(ch, 0.01);
    if (mc.counterexample())
      std::cerr << "warning: receiver 1 is not more capable (I(X;Y1) - I(X;Y2) = " << format_double(mc.min_gap)
                << " at some input); the t5 region is not known to be the capacity region\n";
    return simplex_grid_envelopes(v_card * ch.x_card, o.grid > 0 ? o.grid : 0.01, kMaxGridEvaluations, dirs, 1,
                                  [&](const Eigen::VectorXd& pt, std::vector<EnvelopeAccumulator>& acc) {
                                    const ConstraintPolytope p = theorem5_polytope(ch, grid_table(pt, v_card, ch.x_card));
                                    acc[0].add(flat ? project_r2_zero(p) : p);
                                  })
        .front();
  }
  // inner1 / inner2 at one factorization
  if (o.factorization.empty()) throw PreconditionError("bound " + o.bound + " needs --factorization");
  const AuxFactorization f = factorization_from_json(read_json_file(o.factorization), ch);
  ConstraintPolytope p;
  if (o.bound == "inner1")
    p = o.alpha >= 0 ? inner1_alpha_polytope(ch, f, o.alpha) : inner1_polytope(ch, f);
  else
    p = o.alpha >= 0 ? inner2_alpha_polytope(ch, f, o.alpha) : inner2_polytope(ch, f);
  return envelope_of(flat ? project_r2_zero(p) : p, dirs);
}

RegionEnvelope gaussian_region(const GaussianBc& g, const RegionOptions& o, const Eigen::MatrixXd& dirs) {
  const bool flat = dirs.cols() == 2;
  if (o.bound == "outer") return outer_envelope_g(g, o.grid > 0 ? o.grid : 1e-2, dirs);
  const double step = o.grid > 0 ? o.grid : 1e-3;
  auto family = [&](double beta) -> ConstraintPolytope {
    ConstraintPolytope p;
    if (o.bound == "t7") p = capacity_t7_polytope(g, beta);
    else if (o.bound == "t8") p = capacity_t8_polytope(g, beta);
    else if (o.bound == "t9") p = approx_t9_polytope(g, beta);
    else if (o.bound == "t10") p = approx_t10_polytope(g, beta);
    else p = df_inner_polytope(g, beta);
    return flat && p.dim() == 3 ? project_r2_zero(p) : p;
  };
  return beta_envelope(family, step, dirs);
}

RegionEnvelope compute_region(const AnyChannel& ch, const RegionOptions& o, const Eigen::MatrixXd& dirs) {
  if (std::find(kBounds.begin(), kBounds.end(), o.bound) == kBounds.end())
    throw PreconditionError("unknown bound '" + o.bound + "'");
  if (const auto* dm = std::get_if<DmBroadcastChannel>(&ch)) {
    if (!is_dm_bound(o.bound) && o.bound != "outer")
      throw PreconditionError("bound " + o.bound + " applies to Gaussian channels only");
    return dm_region(*dm, o, dirs);
  }
  if (is_dm_bound(o.bound)) throw PreconditionError("bound " + o.bound + " applies to discrete channels only");
  return gaussian_region(std::get<GaussianBc>(ch), o, dirs);
}

int region_dim(const RegionOptions& o) { return is_planar_bound(o.bound) || o.r2 == 0 ? 2 : 3; }

void print_canonical(const RegionEnvelope& env) {
  const Eigen::MatrixXd canon = env.dim() == 2 ? canonical_directions_2d() : canonical_directions_3d();
  for (Eigen::Index i = 0; i < canon.rows(); ++i) {
    std::string label;
    for (Eigen::Index k = 0; k < 3; ++k) label += (k ? "," : "") + format_double(k < canon.cols() ? canon(i, k) : 0.0);
    std::cout << "support (" << label << "): " << format_double(env.along(canon.row(i).transpose())) << "\n";
  }
}

int run_region(const RegionOptions& o) {
  if (o.r2 != -1 && o.r2 != 0) throw PreconditionError("--r2 accepts only 0");
  const AnyChannel ch = channel_from_json(read_json_file(o.channel));
  const int dim = region_dim(o);
  if (!o.svg.empty() && dim != 2) throw PreconditionError("--svg needs a 2-D region; add --r2 0");
  const RegionEnvelope env = compute_region(ch, o, direction_set(dim, o.dirs));
  if (!o.out.empty()) write_text_file(o.out, region_csv(env));
  if (dim == 2 && (!o.svg.empty() || !o.boundary.empty())) {
    const auto walk = boundary_walk(env);
    if (!o.svg.empty()) write_text_file(o.svg, boundary_svg(walk, o.bound));
    if (!o.boundary.empty()) write_text_file(o.boundary, boundary_csv(walk));
  }
  print_canonical(env);
  return 0;
}

int run_verify(const std::string& suite, std::uint64_t seed, const std::string& json_out) {
  const SuiteReport r = run_suite(suite, SuiteConfig{seed});
  for (const auto& c : r.checks)
    std::cout << (c.pass ? "PASS " : "FAIL ") << c.description << ": " << format_double(c.measured)
              << (c.relation == Relation::at_most ? " <= " : " >= ") << format_double(c.threshold) << "\n";
  std::cout << r.suite << ": " << (r.pass() ? "PASS" : "FAIL") << " (" << format_double(r.wall_time_seconds)
            << " s)\n";
  if (!json_out.empty()) write_text_file(json_out, r.to_json().dump(2) + "\n");
  return r.pass() ? 0 : kExitFailed;
}

struct SweepOptions {
  std::string channel, vary, metric = "dir-support", bound, dir = "1,0,0", out;
  double from = 0.0, to = 0.0, grid = 0.0;
  int points = 0;
};

Eigen::VectorXd parse_direction(const std::string& text) {
  std::vector<double> v;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    char* stop = nullptr;
    v.push_back(std::strtod(item.c_str(), &stop));
    if (item.empty() || *stop != '\0') throw PreconditionError("--dir: not a number: '" + item + "'");
  }
  if (v.size() == 2) v.push_back(0.0);
  if (v.size() != 3) throw PreconditionError("--dir needs two or three comma-separated values");
  return Eigen::Map<Eigen::VectorXd>(v.data(), 3);
}

int run_sweep(const SweepOptions& o) {
  if (!(std::isfinite(o.from) && std::isfinite(o.to))) throw PreconditionError("sweep range must be finite");
  if (o.points < 1 || o.from > o.to || (o.points > 1 && o.from == o.to))
    throw PreconditionError("sweep range is empty");
  if (o.points > 10000) throw PreconditionError("sweep range has more than 10^4 points");
  if (o.metric != "sumrate-gap" && o.metric != "dir-support")
    throw PreconditionError("--metric must be sumrate-gap or dir-support");
  const AnyChannel base = channel_from_json(read_json_file(o.channel));
  const Eigen::VectorXd dir = parse_direction(o.dir);

  std::string csv = o.vary + "," + o.metric + (o.metric == "sumrate-gap" ? ",gap_bound" : "") + "\n";
  for (int k = 0; k < o.points; ++k) {
    const double value = o.points == 1 ? o.from : o.from + (o.to - o.from) * k / double(o.points - 1);
    AnyChannel ch = base;
    std::visit(
        [&](auto& c) {
          if (o.vary == "c12") c.c12 = value;
          else if (o.vary == "c21") c.c21 = value;
          else if constexpr (std::is_same_v<std::decay_t<decltype(c)>, GaussianBc>) {
            if (o.vary == "lambda") c.lambda = value;
            else if (o.vary == "power") c.power = value;
            else throw PreconditionError("--vary must be lambda, power, c12 or c21");
            c.validate();
          } else {
            throw PreconditionError("--vary " + o.vary + " applies to Gaussian channels only");
          }
        },
        ch);
    std::string row = format_double(value) + ",";
    if (o.metric == "sumrate-gap") {
      const auto* g = std::get_if<GaussianBc>(&ch);
      if (!g) throw PreconditionError("sumrate-gap applies to Gaussian channels only");
      const Eigen::MatrixXd sum = rates(1, 1, 1).transpose();
      const double outer = outer_envelope_g(*g, o.grid > 0 ? o.grid : 1e-2, sum).along(rates(1, 1, 1));
      const double df =
          beta_envelope([&](double b) { return df_inner_polytope(*g, b); }, 1e-3, sum).along(rates(1, 1, 1));
      row += format_double(outer - df) + "," + format_double(gap_bound_t11(g->lambda));
    } else {
      RegionOptions ro;
      ro.bound = o.bound.empty() ? (std::holds_alternative<GaussianBc>(ch) ? "t7" : "t4") : o.bound;
      ro.grid = o.grid;
      const int dim = region_dim(ro);
      if (dim == 2 && dir[2] != 0.0) throw PreconditionError("bound " + ro.bound + " is 2-D; use a direction with dir2 = 0");
      const Eigen::VectorXd d = dim == 2 ? Eigen::VectorXd(dir.head(2)) : dir;
      row += format_double(compute_region(ch, ro, d.transpose()).along(d));
    }
    csv += row + "\n";
  }
  if (o.out.empty()) std::cout << csv;
  else write_text_file(o.out, csv);
  return 0;
}

int run_fm(const std::string& system, const std::vector<std::string>& vars, const std::string& out) {
  LinearSystem sys = system_from_json(read_json_file(system));
  for (const auto& v : vars) sys.index_of(v);  // throws on an unknown name
  const LinearSystem reduced = vars.size() == 1 ? fm_eliminate(sys, vars.front()) : fm_eliminate(sys, vars);
  const std::string text = system_to_json(reduced).dump(2) + "\n";
  if (out.empty()) std::cout << text;
  else write_text_file(out, text);
  return 0;
}

int run_plot(const std::string& in, const std::string& svg, const std::string& boundary) {
  std::ifstream f(in);
  if (!f) throw FormatError("cannot open " + in);
  std::stringstream ss;
  ss << f.rdbuf();
  const RegionEnvelope env = region_from_csv(ss.str());
  if (env.dim() != 2) throw PreconditionError("plot needs a 2-D region (dir2 = 0 on every row)");
  const auto walk = boundary_walk(env);
  write_text_file(svg, boundary_svg(walk, in));
  if (!boundary.empty()) write_text_file(boundary, boundary_csv(walk));
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Rate regions of two-user broadcast channels with conferencing decoders"};
  app.require_subcommand(1, 1);

  RegionOptions ro;
  auto* region = app.add_subcommand("region", "compute a region envelope and export it");
  region->add_option("--channel", ro.channel, "channel JSON file")->required();
  region->add_option("--bound", ro.bound, "outer, inner1, inner2, t4, t5, t7, t8, t9, t10, df or cutset-fig3");
  region->add_option("--grid", ro.grid, "grid step (distribution grid for discrete bounds, beta/alpha step otherwise)");
  region->add_option("--dirs", ro.dirs, "number of fan directions (181 in 2-D, 512 in 3-D)");
  region->add_option("--r2", ro.r2, "0: restrict to R2 = 0");
  region->add_option("--out", ro.out, "region CSV");
  region->add_option("--svg", ro.svg, "boundary SVG (2-D regions)");
  region->add_option("--boundary", ro.boundary, "boundary CSV (2-D regions)");
  region->add_option("--factorization", ro.factorization, "factorization JSON for inner1/inner2");
  region->add_option("--alpha", ro.alpha, "fixed link split for inner1/inner2 (default: optimal split)");
  region->add_option("--v-card", ro.v_card, "|V| for t4, t5 and cutset-fig3 (default |X|)");

  std::string suite, json_out;
  std::uint64_t seed = 1;
  auto* verify = app.add_subcommand("verify", "run a verification suite");
  verify->add_option("suite", suite, "suite name")->required();
  verify->add_option("--seed", seed, "random seed");
  verify->add_option("--json", json_out, "report JSON");

  SweepOptions so;
  auto* sweep = app.add_subcommand("sweep", "vary one channel parameter and tabulate a metric");
  sweep->add_option("--channel", so.channel, "channel JSON template")->required();
  sweep->add_option("--vary", so.vary, "lambda, power, c12 or c21")->required();
  sweep->add_option("--from", so.from, "first value")->required();
  sweep->add_option("--to", so.to, "last value")->required();
  sweep->add_option("--points", so.points, "number of values (at most 10^4)")->required();
  sweep->add_option("--metric", so.metric, "sumrate-gap or dir-support");
  sweep->add_option("--bound", so.bound, "bound for dir-support (t7 or t4 by default)");
  sweep->add_option("--dir", so.dir, "direction for dir-support, e.g. 1,0,0");
  sweep->add_option("--grid", so.grid, "grid step passed to the bound");
  sweep->add_option("--out", so.out, "CSV file (default stdout)");

  std::string system, fm_out;
  std::vector<std::string> eliminate;
  auto* fm = app.add_subcommand("fm", "Fourier-Motzkin elimination on a linear system");
  fm->add_option("--system", system, "system JSON")->required();
  fm->add_option("--eliminate", eliminate, "variables to eliminate, in order")->required()->delimiter(',');
  fm->add_option("--out", fm_out, "output JSON (default stdout)");

  std::string plot_in, plot_svg, plot_boundary;
  auto* plot = app.add_subcommand("plot", "draw a 2-D region CSV as SVG");
  plot->add_option("--in", plot_in, "region CSV")->required();
  plot->add_option("--svg", plot_svg, "SVG output")->required();
  plot->add_option("--boundary", plot_boundary, "boundary CSV output");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*region) return run_region(ro);
    if (*verify) return run_verify(suite, seed, json_out);
    if (*sweep) return run_sweep(so);
    if (*fm) return run_fm(system, eliminate, fm_out);
    if (*plot) return run_plot(plot_in, plot_svg, plot_boundary);
  } catch (const GridTooLargeError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitGrid;
  } catch (const FormatError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitFormat;
  } catch (const InfoError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitPrecondition;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitFailed;
  }
  return 0;
}
