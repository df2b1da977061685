#include "confbc/regions.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdlib>
#include <numbers>
#include <thread>

namespace confbc {

namespace {

constexpr double kBox = 1e7;  // stand-in for unboundedness on general systems

bool row_feasible(const ConstraintPolytope& poly, const Eigen::VectorXd& x) {
  for (Eigen::Index i = 0; i < x.size(); ++i)
    if (x[i] < -kFeasTol) return false;
  for (const auto& c : poly.constraints()) {
    if (c.absent()) continue;
    if (c.coeffs.dot(x) > c.rhs + kFeasTol * (1.0 + std::abs(c.rhs))) return false;
  }
  return true;
}

// Hyperplane list: finite constraints followed by the coordinate planes.
struct Planes {
  std::vector<Eigen::VectorXd> normals;
  std::vector<double> offsets;
};

Planes planes_of(const ConstraintPolytope& poly, bool boxed) {
  Planes p;
  const int d = poly.dim();
  for (const auto& c : poly.constraints()) {
    if (c.absent() || c.coeffs.isZero(0.0)) continue;
    p.normals.push_back(c.coeffs);
    p.offsets.push_back(c.rhs);
  }
  for (int i = 0; i < d; ++i) {
    p.normals.push_back(-Eigen::VectorXd::Unit(d, i));
    p.offsets.push_back(0.0);
    if (boxed) {
      p.normals.push_back(Eigen::VectorXd::Unit(d, i));
      p.offsets.push_back(kBox);
    }
  }
  return p;
}

template <int D>
void enumerate_fixed(const ConstraintPolytope& poly, const Planes& pl, std::vector<Eigen::VectorXd>& out) {
  using Mat = Eigen::Matrix<double, D, D>;
  using Vec = Eigen::Matrix<double, D, 1>;
  const int m = int(pl.normals.size());
  std::vector<int> idx(D);
  for (int i = 0; i < D; ++i) idx[std::size_t(i)] = i;
  if (m < D) return;
  while (true) {
    Mat a;
    Vec b;
    for (int r = 0; r < D; ++r) {
      a.row(r) = pl.normals[std::size_t(idx[std::size_t(r)])].transpose();
      b[r] = pl.offsets[std::size_t(idx[std::size_t(r)])];
    }
    Mat inv;
    bool ok = false;
    double det = 0.0;
    a.computeInverseAndDetWithCheck(inv, det, ok, 1e-13 * std::max(1.0, a.cwiseAbs().maxCoeff()));
    if (ok) {
      Eigen::VectorXd x = inv * b;
      if (x.allFinite() && row_feasible(poly, x)) out.push_back(x);
    }
    int k = D - 1;
    while (k >= 0 && idx[std::size_t(k)] == m - D + k) --k;
    if (k < 0) break;
    ++idx[std::size_t(k)];
    for (int j = k + 1; j < D; ++j) idx[std::size_t(j)] = idx[std::size_t(j - 1)] + 1;
  }
}

void enumerate_dynamic(const ConstraintPolytope& poly, const Planes& pl, std::vector<Eigen::VectorXd>& out) {
  const int d = poly.dim();
  const int m = int(pl.normals.size());
  if (m < d) return;
  std::vector<int> idx(static_cast<std::size_t>(d));
  for (int i = 0; i < d; ++i) idx[std::size_t(i)] = i;
  while (true) {
    Eigen::MatrixXd a(d, d);
    Eigen::VectorXd b(d);
    for (int r = 0; r < d; ++r) {
      a.row(r) = pl.normals[std::size_t(idx[std::size_t(r)])].transpose();
      b[r] = pl.offsets[std::size_t(idx[std::size_t(r)])];
    }
    Eigen::FullPivLU<Eigen::MatrixXd> lu(a);
    if (lu.isInvertible()) {
      Eigen::VectorXd x = lu.solve(b);
      if (x.allFinite() && row_feasible(poly, x)) out.push_back(x);
    }
    int k = d - 1;
    while (k >= 0 && idx[std::size_t(k)] == m - d + k) --k;
    if (k < 0) break;
    ++idx[std::size_t(k)];
    for (int j = k + 1; j < d; ++j) idx[std::size_t(j)] = idx[std::size_t(j - 1)] + 1;
  }
}

std::vector<Eigen::VectorXd> vertices_of(const ConstraintPolytope& poly, bool boxed) {
  std::vector<Eigen::VectorXd> out;
  const Planes pl = planes_of(poly, boxed);
  ConstraintPolytope check = poly;
  if (boxed)
    for (int i = 0; i < poly.dim(); ++i) check.add("box", Eigen::VectorXd::Unit(poly.dim(), i), kBox);
  switch (poly.dim()) {
    case 1: enumerate_fixed<1>(check, pl, out); break;
    case 2: enumerate_fixed<2>(check, pl, out); break;
    case 3: enumerate_fixed<3>(check, pl, out); break;
    default: enumerate_dynamic(check, pl, out); break;
  }
  return out;
}

void check_direction(const Eigen::VectorXd& dir, int dim) {
  if (dir.size() != dim) throw InfoError("support: direction has wrong dimension");
  if ((dir.array() < 0.0).any() || dir.isZero(0.0))
    throw InfoError("support: direction must be nonzero and nonnegative");
}

// Support with +inf / -inf conventions, given precomputed vertices.
double support_from(const ConstraintPolytope& poly, const std::vector<Eigen::VectorXd>& verts,
                    bool boxed, const Eigen::VectorXd& dir) {
  if (verts.empty()) return -kInf;
  double best = -kInf;
  const Eigen::VectorXd* arg = nullptr;
  for (const auto& v : verts) {
    const double s = dir.dot(v);
    if (s > best) {
      best = s;
      arg = &v;
    }
  }
  if (boxed) {
    for (Eigen::Index i = 0; i < dir.size(); ++i)
      if (dir[i] > 0.0 && (*arg)[i] >= 0.5 * kBox) return kInf;
  } else {
    for (Eigen::Index i = 0; i < dir.size(); ++i) {
      if (dir[i] <= 0.0) continue;
      bool covered = false;
      for (const auto& c : poly.constraints())
        if (!c.absent() && c.coeffs[i] > 0.0) covered = true;
      if (!covered) return kInf;
    }
  }
  return best;
}

}  // namespace

ConstraintPolytope::ConstraintPolytope(VarList variables) : variables_(std::move(variables)) {
  if (variables_.empty()) throw InfoError("polytope: no variables");
}

ConstraintPolytope ConstraintPolytope::rate_space(int dim) {
  if (dim == 2) return ConstraintPolytope({"R0", "R1"});
  if (dim == 3) return ConstraintPolytope({"R0", "R1", "R2"});
  throw InfoError("rate_space: dimension must be 2 or 3");
}

ConstraintPolytope& ConstraintPolytope::add(std::string label, Eigen::VectorXd coeffs, double rhs) {
  if (coeffs.size() != dim()) throw InfoError("polytope: constraint has wrong dimension");
  if (std::isnan(rhs) || rhs == -kInf) throw InfoError("polytope: invalid right-hand side");
  constraints_.push_back({std::move(coeffs), rhs, std::move(label)});
  return *this;
}

ConstraintPolytope& ConstraintPolytope::add(std::string label, std::initializer_list<double> coeffs,
                                            double rhs) {
  Eigen::VectorXd c(Eigen::Index(coeffs.size()));
  Eigen::Index i = 0;
  for (double v : coeffs) c[i++] = v;
  return add(std::move(label), std::move(c), rhs);
}

bool ConstraintPolytope::nonnegative_coefficients() const {
  for (const auto& c : constraints_)
    if ((c.coeffs.array() < 0.0).any()) return false;
  return true;
}

bool ConstraintPolytope::bounded() const {
  if (!nonnegative_coefficients()) return false;
  for (int i = 0; i < dim(); ++i) {
    bool covered = false;
    for (const auto& c : constraints_)
      if (!c.absent() && c.coeffs[i] > 0.0) covered = true;
    if (!covered) return false;
  }
  return true;
}

std::vector<Eigen::VectorXd> ConstraintPolytope::vertices() const {
  return vertices_of(*this, !nonnegative_coefficients());
}

double support(const ConstraintPolytope& poly, const Eigen::VectorXd& dir) {
  check_direction(dir, poly.dim());
  const bool boxed = !poly.nonnegative_coefficients();
  return support_from(poly, vertices_of(poly, boxed), boxed, dir);
}

bool contains(const ConstraintPolytope& poly, const RateVector& point, double tol) {
  if (tol < 0.0) throw InfoError("contains: tolerance must be >= 0");
  if (point.size() != poly.dim()) throw InfoError("contains: point has wrong dimension");
  if ((point.array() < -tol).any()) return false;
  for (const auto& c : poly.constraints()) {
    if (c.absent()) continue;
    if (c.coeffs.dot(point) > c.rhs + tol) return false;
  }
  return true;
}

ConstraintPolytope project_r2_zero(const ConstraintPolytope& poly) {
  if (poly.dim() != 3) throw InfoError("project_r2_zero: polytope must be over (R0,R1,R2)");
  ConstraintPolytope out({poly.variables()[0], poly.variables()[1]});
  for (const auto& c : poly.constraints()) {
    Eigen::VectorXd head = c.coeffs.head(2);
    if (head.isZero(0.0) && c.rhs >= 0.0) continue;  // vacuous at R2 = 0
    out.add(c.label, std::move(head), c.rhs);
  }
  return out;
}

double RegionEnvelope::along(const Eigen::VectorXd& raw) const {
  const double n = raw.norm();
  if (raw.size() != dim() || n == 0.0) throw InfoError("envelope: bad direction");
  const Eigen::VectorXd u = raw / n;
  for (Eigen::Index i = 0; i < size(); ++i)
    if ((directions.row(i).transpose() - u).cwiseAbs().maxCoeff() < 1e-12) return values[i] * n;
  throw InfoError("envelope: direction is not part of the direction set");
}

EnvelopeAccumulator::EnvelopeAccumulator(Eigen::MatrixXd directions)
    : directions_(std::move(directions)), values_(Eigen::VectorXd::Constant(directions_.rows(), -kInf)) {
  for (Eigen::Index i = 0; i < directions_.rows(); ++i) {
    const double n = directions_.row(i).norm();
    if (!(n > 0.0)) throw InfoError("envelope: zero direction");
    directions_.row(i) /= n;
  }
}

void EnvelopeAccumulator::add(const ConstraintPolytope& poly) {
  if (poly.dim() != directions_.cols()) throw InfoError("envelope: polytope dimension mismatch");
  const bool boxed = !poly.nonnegative_coefficients();
  const auto verts = vertices_of(poly, boxed);
  for (Eigen::Index i = 0; i < directions_.rows(); ++i) {
    const double s = support_from(poly, verts, boxed, directions_.row(i).transpose());
    values_[i] = std::max(values_[i], s);
  }
  ++count_;
}

void EnvelopeAccumulator::merge(const EnvelopeAccumulator& other) {
  values_ = values_.cwiseMax(other.values_);
  count_ += other.count_;
}

RegionEnvelope EnvelopeAccumulator::result() const { return {directions_, values_}; }

RegionEnvelope envelope_of(const ConstraintPolytope& poly, const Eigen::MatrixXd& directions) {
  EnvelopeAccumulator acc(directions);
  acc.add(poly);
  return acc.result();
}

int worker_count() {
  int n = int(std::thread::hardware_concurrency());
  if (n <= 0) n = 1;
  if (const char* cap = std::getenv("CONFBC_THREADS")) {
    const int c = std::atoi(cap);
    if (c > 0) n = std::min(n, c);
  }
  return n;
}

void parallel_for(std::size_t n, const std::function<void(std::size_t)>& fn) {
  const std::size_t workers = std::min<std::size_t>(std::size_t(worker_count()), std::max<std::size_t>(n, 1));
  std::vector<std::exception_ptr> errors(workers);
  auto work = [&](std::size_t w) {
    try {
      for (std::size_t i = w; i < n; i += workers) fn(i);
    } catch (...) {
      errors[w] = std::current_exception();
    }
  };
  if (workers == 1) {
    work(0);
  } else {
    std::vector<std::thread> pool;
    for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(work, w);
    for (auto& t : pool) t.join();
  }
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
}

std::vector<RegionEnvelope> simplex_grid_envelopes(int cells, double step, std::size_t limit,
                                                   const Eigen::MatrixXd& directions, int count,
                                                   const GridVisitor& fn) {
  if (count <= 0) throw InfoError("simplex_grid_envelopes: need at least one envelope");
  if (simplex_grid_size(cells, step) > limit)
    throw GridTooLargeError("grid with step " + std::to_string(step) + " over " + std::to_string(cells) +
                            " cells exceeds the evaluation limit; use a coarser step");
  const int workers = worker_count();
  const std::vector<EnvelopeAccumulator> fresh(static_cast<std::size_t>(count), EnvelopeAccumulator(directions));
  std::vector<std::vector<EnvelopeAccumulator>> parts(static_cast<std::size_t>(workers), fresh);
  std::vector<std::exception_ptr> errors(static_cast<std::size_t>(workers));
  auto work = [&](int w) {
    try {
      std::size_t idx = 0;
      for_each_simplex_point(cells, step, limit, [&](const Eigen::VectorXd& pt) {
        if (idx++ % std::size_t(workers) == std::size_t(w)) fn(pt, parts[std::size_t(w)]);
      });
    } catch (...) {
      errors[std::size_t(w)] = std::current_exception();
    }
  };
  if (workers == 1) {
    work(0);
  } else {
    std::vector<std::thread> pool;
    for (int w = 0; w < workers; ++w) pool.emplace_back(work, w);
    for (auto& t : pool) t.join();
  }
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
  std::vector<RegionEnvelope> out;
  for (int k = 0; k < count; ++k) {
    EnvelopeAccumulator acc = parts[0][std::size_t(k)];
    for (int w = 1; w < workers; ++w) acc.merge(parts[std::size_t(w)][std::size_t(k)]);
    out.push_back(acc.result());
  }
  return out;
}

RegionEnvelope envelope_of_union(const std::vector<ConstraintPolytope>& polys,
                                 const Eigen::MatrixXd& directions) {
  if (polys.empty()) throw InfoError("envelope_of_union: empty polytope list");
  EnvelopeAccumulator acc(directions);
  for (const auto& p : polys) {
    if (p.variables() != polys.front().variables())
      throw InfoError("envelope_of_union: polytopes do not share variables");
    acc.add(p);
  }
  return acc.result();
}

DominanceReport envelope_dominates(const RegionEnvelope& outer, const RegionEnvelope& inner) {
  if (outer.directions.rows() != inner.directions.rows() ||
      outer.directions.cols() != inner.directions.cols() ||
      !outer.directions.isApprox(inner.directions, 1e-12))
    throw InfoError("envelope_dominates: direction sets differ");
  DominanceReport rep;
  for (Eigen::Index i = 0; i < outer.size(); ++i) {
    const double o = outer.values[i], n = inner.values[i];
    double v;
    if (n == -kInf) v = -kInf;        // empty inner region
    else if (o == kInf) v = -kInf;
    else v = n - o;
    if (v > rep.max_violation || rep.worst_direction < 0) {
      rep.max_violation = v;
      rep.worst_direction = i;
    }
  }
  return rep;
}

Eigen::MatrixXd fan_2d(int count) {
  if (count < 2) throw InfoError("fan_2d: need at least two directions");
  Eigen::MatrixXd d(count, 2);
  for (int i = 0; i < count; ++i) {
    const double t = 0.5 * std::numbers::pi * double(i) / double(count - 1);
    d(i, 0) = std::cos(t);
    d(i, 1) = std::sin(t);
  }
  // exact axes
  d.row(0) << 1.0, 0.0;
  d.row(count - 1) << 0.0, 1.0;
  return d;
}

Eigen::MatrixXd canonical_directions_3d() {
  Eigen::MatrixXd c(8, 3);
  c << 1, 0, 0, 0, 1, 0, 0, 0, 1, 1, 1, 0, 1, 0, 1, 0, 1, 1, 1, 1, 1, 2, 1, 1;
  return c;
}

Eigen::MatrixXd canonical_directions_2d() {
  Eigen::MatrixXd c(3, 2);
  c << 1, 0, 0, 1, 1, 1;
  return c;
}

Eigen::MatrixXd normalized_rows(Eigen::MatrixXd m) {
  m.rowwise().normalize();
  return m;
}

Eigen::MatrixXd fan_3d(int count) {
  const Eigen::MatrixXd canon = normalized_rows(canonical_directions_3d());
  Eigen::MatrixXd d(count + canon.rows(), 3);
  const double golden = (1.0 + std::sqrt(5.0)) / 2.0;
  for (int i = 0; i < count; ++i) {
    const double z = 1.0 - (double(i) + 0.5) / double(count);
    const double r = std::sqrt(std::max(0.0, 1.0 - z * z));
    const double frac = double(i) / golden - std::floor(double(i) / golden);
    const double phi = 0.5 * std::numbers::pi * frac;
    d.row(i) << r * std::cos(phi), r * std::sin(phi), z;
  }
  d.bottomRows(canon.rows()) = canon;
  return d;
}

Eigen::MatrixXd random_directions(Rng& rng, int count, int dim) {
  Eigen::MatrixXd d(count, dim);
  for (int i = 0; i < count; ++i) {
    for (int j = 0; j < dim; ++j) d(i, j) = rng.uniform() + 1e-3;
    d.row(i).normalize();
  }
  return d;
}

std::vector<Eigen::Vector2d> boundary_walk(const RegionEnvelope& env) {
  if (env.dim() != 2) throw InfoError("boundary_walk: envelope must be 2-D");
  ConstraintPolytope hull({"R0", "R1"});
  for (Eigen::Index i = 0; i < env.size(); ++i)
    if (std::isfinite(env.values[i])) hull.add("h", env.directions.row(i).transpose(), env.values[i]);
  std::vector<Eigen::Vector2d> pts;
  double scale = 0.0;
  for (const auto& v : hull.vertices()) {
    pts.emplace_back(v[0], v[1]);
    scale = std::max(scale, v.cwiseAbs().maxCoeff());
  }
  if (scale == 0.0) return {};
  // Rounded support values (a CSV round trip) make every supporting line
  // cut a sliver vertex; merge anything closer than this.
  const double tol = 1e-7 * scale;
  for (auto& p : pts)
    for (int k = 0; k < 2; ++k)
      if (std::abs(p[k]) < tol) p[k] = 0.0;
  // R0 - R1 strictly increases along the boundary, so it orders the chain
  // even when roundoff splits a vertical edge.
  std::sort(pts.begin(), pts.end(), [](const Eigen::Vector2d& p, const Eigen::Vector2d& q) {
    const double dp = p[0] - p[1], dq = q[0] - q[1];
    if (dp != dq) return dp < dq;
    return p[0] + p[1] > q[0] + q[1];
  });
  // upper-right hull
  auto cross = [](const Eigen::Vector2d& o, const Eigen::Vector2d& a, const Eigen::Vector2d& b) {
    return (a - o).x() * (b - o).y() - (a - o).y() * (b - o).x();
  };
  std::vector<Eigen::Vector2d> walk;
  for (const auto& p : pts) {
    if (p.norm() <= tol) continue;
    if (!walk.empty() && (p - walk.back()).norm() <= tol) continue;
    while (walk.size() >= 2 && cross(walk[walk.size() - 2], walk.back(), p) >= -tol * scale) walk.pop_back();
    walk.push_back(p);
  }
  return walk;
}

// ---------------------------------------------------------------------------

int LinearSystem::index_of(const std::string& v) const {
  for (std::size_t i = 0; i < variables.size(); ++i)
    if (variables[i] == v) return int(i);
  throw InfoError("linear system: unknown variable " + v);
}

void LinearSystem::add(Eigen::VectorXd coeffs, double rhs) {
  if (coeffs.size() != Eigen::Index(variables.size()))
    throw InfoError("linear system: row has wrong dimension");
  rows.push_back({std::move(coeffs), rhs});
}

bool LinearSystem::trivially_infeasible(double tol) const {
  for (const auto& r : rows)
    if (r.coeffs.isZero(0.0) && r.rhs < -tol) return true;
  return false;
}

bool LinearSystem::satisfied_by(const Eigen::VectorXd& x, double tol) const {
  for (const auto& r : rows)
    if (r.coeffs.dot(x) > r.rhs + tol) return false;
  return true;
}

namespace {

struct TrackedRow {
  Eigen::VectorXd c;
  double rhs;
  std::vector<std::uint64_t> hist;
};

int popcount(const std::vector<std::uint64_t>& h) {
  int n = 0;
  for (auto w : h) n += std::popcount(w);
  return n;
}

// Scale so the largest |coefficient| is 1; rows then compare directly.
void normalize(TrackedRow& r) {
  const double m = r.c.cwiseAbs().maxCoeff();
  if (m > 0.0) {
    r.c /= m;
    r.rhs /= m;
  }
}

std::vector<TrackedRow> prune(std::vector<TrackedRow> rows) {
  std::vector<TrackedRow> out;
  bool infeasible_kept = false;
  for (auto& r : rows) {
    for (Eigen::Index i = 0; i < r.c.size(); ++i)
      if (std::abs(r.c[i]) < 1e-12) r.c[i] = 0.0;
    if (r.c.isZero(0.0)) {
      if (r.rhs >= -kFeasTol) continue;  // tautology
      if (infeasible_kept) continue;
      infeasible_kept = true;
      out.push_back(std::move(r));
      continue;
    }
    normalize(r);
    bool merged = false;
    for (auto& o : out) {
      if (!o.c.isZero(0.0) && (o.c - r.c).cwiseAbs().maxCoeff() < 1e-12) {
        if (r.rhs < o.rhs) o = r;
        merged = true;
        break;
      }
    }
    if (!merged) out.push_back(std::move(r));
  }
  return out;
}

std::vector<TrackedRow> eliminate_column(const std::vector<TrackedRow>& rows, Eigen::Index j,
                                         int depth, bool chernikov) {
  std::vector<const TrackedRow*> pos, neg;
  std::vector<TrackedRow> next;
  for (const auto& r : rows) {
    if (r.c[j] > 1e-12) pos.push_back(&r);
    else if (r.c[j] < -1e-12) neg.push_back(&r);
    else next.push_back(r);
  }
  for (const auto* p : pos) {
    for (const auto* n : neg) {
      TrackedRow comb;
      comb.hist = p->hist;
      for (std::size_t w = 0; w < comb.hist.size(); ++w) comb.hist[w] |= n->hist[w];
      if (chernikov && popcount(comb.hist) > depth + 1) continue;
      const double sp = 1.0 / p->c[j], sn = -1.0 / n->c[j];
      comb.c = p->c * sp + n->c * sn;
      comb.rhs = p->rhs * sp + n->rhs * sn;
      comb.c[j] = 0.0;
      next.push_back(std::move(comb));
    }
  }
  // drop the eliminated column
  for (auto& r : next) {
    Eigen::VectorXd c(r.c.size() - 1);
    c << r.c.head(j), r.c.tail(r.c.size() - j - 1);
    r.c = std::move(c);
  }
  return prune(std::move(next));
}

}  // namespace

LinearSystem fm_eliminate(const LinearSystem& sys, const std::string& var) {
  return fm_eliminate(sys, VarList{var});
}

LinearSystem fm_eliminate(const LinearSystem& sys, const VarList& vars) {
  const std::size_t words = (sys.rows.size() + 63) / 64;
  std::vector<TrackedRow> rows;
  for (std::size_t i = 0; i < sys.rows.size(); ++i) {
    if (sys.rows[i].rhs == kInf) continue;
    TrackedRow r{sys.rows[i].coeffs, sys.rows[i].rhs, std::vector<std::uint64_t>(words, 0)};
    r.hist[i / 64] |= std::uint64_t(1) << (i % 64);
    rows.push_back(std::move(r));
  }
  rows = prune(std::move(rows));
  VarList names = sys.variables;
  const bool chernikov = vars.size() > 1;
  int depth = 0;
  for (const auto& v : vars) {
    auto it = std::find(names.begin(), names.end(), v);
    if (it == names.end()) throw InfoError("fm_eliminate: unknown variable " + v);
    const auto j = Eigen::Index(it - names.begin());
    ++depth;
    rows = eliminate_column(rows, j, depth, chernikov);
    names.erase(it);
  }
  LinearSystem out;
  out.variables = names;
  for (auto& r : rows) out.rows.push_back({std::move(r.c), r.rhs});
  return out;
}

ConstraintPolytope to_polytope(const LinearSystem& sys) {
  ConstraintPolytope p(sys.variables);
  for (const auto& r : sys.rows) p.add("", r.coeffs, r.rhs);
  return p;
}

}  // namespace confbc
