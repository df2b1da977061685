#include "confbc/io.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdlib>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace confbc {

namespace {

double number(const Json& j, const char* key, bool required, double fallback = 0.0) {
  if (!j.contains(key)) {
    if (required) throw FormatError(std::string("missing field \"") + key + "\"");
    return fallback;
  }
  const Json& v = j.at(key);
  if (v.is_string()) {
    const std::string s = v.get<std::string>();
    if (s == "inf") return kInf;
    if (s == "-inf") return -kInf;
  }
  if (!v.is_number()) throw FormatError(std::string("field \"") + key + "\" must be a number");
  return v.get<double>();
}

int count(const Json& j, const char* key) {
  if (!j.contains(key) || !j.at(key).is_number_integer())
    throw FormatError(std::string("field \"") + key + "\" must be an integer");
  const int v = j.at(key).get<int>();
  if (v <= 0) throw FormatError(std::string("field \"") + key + "\" must be positive");
  return v;
}

Eigen::VectorXd vector_of(const Json& j, const std::string& what) {
  if (!j.is_array()) throw FormatError(what + " must be an array");
  Eigen::VectorXd v(Eigen::Index(j.size()));
  for (std::size_t i = 0; i < j.size(); ++i) {
    if (!j[i].is_number()) throw FormatError(what + " must contain numbers");
    v[Eigen::Index(i)] = j[i].get<double>();
  }
  return v;
}

Eigen::MatrixXd matrix_of(const Json& j, const std::string& what) {
  if (!j.is_array() || j.empty()) throw FormatError(what + " must be a non-empty array of rows");
  const std::size_t cols = j[0].is_array() ? j[0].size() : 0;
  if (cols == 0) throw FormatError(what + " rows must be non-empty arrays");
  Eigen::MatrixXd m(Eigen::Index(j.size()), Eigen::Index(cols));
  for (std::size_t r = 0; r < j.size(); ++r) {
    const Eigen::VectorXd row = vector_of(j[r], what + " row");
    if (std::size_t(row.size()) != cols) throw FormatError(what + " rows differ in length");
    m.row(Eigen::Index(r)) = row.transpose();
  }
  return m;
}

Json matrix_json(const Eigen::MatrixXd& m) {
  Json out = Json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    Json row = Json::array();
    for (Eigen::Index c = 0; c < m.cols(); ++c) row.push_back(m(r, c));
    out.push_back(row);
  }
  return out;
}

Json number_json(double v) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  return v;
}

}  // namespace

Json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw FormatError("cannot open " + path);
  try {
    return Json::parse(in);
  } catch (const Json::exception& e) {
    throw FormatError(path + ": " + e.what());
  }
}

void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << text;
}

AnyChannel channel_from_json(const Json& j) {
  if (!j.is_object() || !j.contains("type") || !j.at("type").is_string())
    throw FormatError("channel must be an object with a string \"type\"");
  const std::string type = j.at("type").get<std::string>();
  try {
    if (type == "dm") {
      const int x = count(j, "x_card");
      if (!j.contains("transition")) throw FormatError("missing field \"transition\"");
      const Eigen::MatrixXd t = matrix_of(j.at("transition"), "transition");
      if (t.rows() != x) throw FormatError("transition must have x_card rows");
      int y1 = 0, y2 = 0;
      if (j.contains("y1_card") || j.contains("y2_card")) {
        y1 = count(j, "y1_card");
        y2 = count(j, "y2_card");
      } else {
        const int side = int(std::lround(std::sqrt(double(t.cols()))));
        if (Eigen::Index(side) * side != t.cols())
          throw FormatError("transition row length is not a square; give y1_card and y2_card");
        y1 = y2 = side;
      }
      return DmBroadcastChannel(x, y1, y2, t, number(j, "c12", false), number(j, "c21", false));
    }
    if (type == "gaussian") {
      GaussianBc g;
      g.a = number(j, "a", true);
      g.b = number(j, "b", true);
      g.lambda = number(j, "lambda", true);
      g.power = number(j, "power", true);
      g.c12 = number(j, "c12", false);
      g.c21 = number(j, "c21", false);
      g.validate();
      return g;
    }
  } catch (const InfoError& e) {
    throw FormatError(e.what());
  } catch (const Json::exception& e) {
    throw FormatError(e.what());
  }
  throw FormatError("unknown channel type \"" + type + "\" (expected dm or gaussian)");
}

Json channel_to_json(const AnyChannel& ch) {
  if (const auto* dm = std::get_if<DmBroadcastChannel>(&ch)) {
    return Json{{"type", "dm"},           {"x_card", dm->x_card},
                {"y1_card", dm->y1_card}, {"y2_card", dm->y2_card},
                {"transition", matrix_json(dm->transition)},
                {"c12", dm->c12},         {"c21", dm->c21}};
  }
  const auto& g = std::get<GaussianBc>(ch);
  return Json{{"type", "gaussian"}, {"a", g.a},     {"b", g.b},    {"lambda", g.lambda},
              {"power", g.power},   {"c12", g.c12}, {"c21", g.c21}};
}

AuxFactorization factorization_from_json(const Json& j, const DmBroadcastChannel& ch) {
  if (!j.is_object() || !j.contains("cards") || !j.contains("aux") || !j.contains("q1") || !j.contains("q2"))
    throw FormatError("factorization needs cards, aux, q1 and q2");
  try {
    const Json& c = j.at("cards");
    const int u = count(c, "u"), v = count(c, "v"), w = count(c, "w"), x = count(c, "x");
    if (x != ch.x_card) throw FormatError("factorization x card does not match the channel");
    const Eigen::VectorXd aux = vector_of(j.at("aux"), "aux");
    Conditional q1{matrix_of(j.at("q1"), "q1")};
    Conditional q2{matrix_of(j.at("q2"), "q2")};
    if (q2.parent_configs() == ch.y2_card && w > 1) q2 = AuxFactorization::lift_q2(q2, w);
    AuxFactorization f{JointPmf({"U", "V", "W", "X"}, {u, v, w, x}, aux), q1, q2};
    f.validate(ch);
    return f;
  } catch (const InfoError& e) {
    throw FormatError(e.what());
  } catch (const Json::exception& e) {
    throw FormatError(e.what());
  }
}

Json factorization_to_json(const AuxFactorization& f) {
  Json aux = Json::array();
  for (Eigen::Index i = 0; i < f.aux.entries().size(); ++i) aux.push_back(f.aux.entries()[i]);
  return Json{{"cards", {{"u", f.u_card()}, {"v", f.v_card()}, {"w", f.w_card()}, {"x", f.x_card()}}},
              {"aux", aux},
              {"q1", matrix_json(f.q1.table)},
              {"q2", matrix_json(f.q2.table)}};
}

LinearSystem system_from_json(const Json& j) {
  if (!j.is_object() || !j.contains("variables") || !j.contains("rows"))
    throw FormatError("system needs variables and rows");
  try {
    LinearSystem sys;
    for (const auto& v : j.at("variables")) {
      if (!v.is_string()) throw FormatError("variable names must be strings");
      sys.variables.push_back(v.get<std::string>());
    }
    if (!j.at("rows").is_array()) throw FormatError("rows must be an array");
    for (const auto& r : j.at("rows")) {
      if (!r.is_object() || !r.contains("coeffs")) throw FormatError("each row needs coeffs and rhs");
      Eigen::VectorXd c = vector_of(r.at("coeffs"), "coeffs");
      if (std::size_t(c.size()) != sys.variables.size())
        throw FormatError("row length does not match the variable count");
      sys.add(std::move(c), number(r, "rhs", true));
    }
    return sys;
  } catch (const Json::exception& e) {
    throw FormatError(e.what());
  }
}

Json system_to_json(const LinearSystem& sys) {
  Json rows = Json::array();
  for (const auto& r : sys.rows) {
    Json c = Json::array();
    for (Eigen::Index i = 0; i < r.coeffs.size(); ++i) c.push_back(r.coeffs[i]);
    rows.push_back(Json{{"coeffs", c}, {"rhs", number_json(r.rhs)}});
  }
  return Json{{"variables", sys.variables}, {"rows", rows}};
}

std::string format_double(double v) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  if (v == 0.0) v = 0.0;  // no "-0"
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.9g", v);
  return buf;
}

std::string region_csv(const RegionEnvelope& env) {
  std::string out = "dir0,dir1,dir2,support\n";
  for (Eigen::Index i = 0; i < env.size(); ++i) {
    const double d2 = env.dim() >= 3 ? env.directions(i, 2) : 0.0;
    out += format_double(env.directions(i, 0)) + "," + format_double(env.directions(i, 1)) + "," +
           format_double(d2) + "," + format_double(env.values[i]) + "\n";
  }
  return out;
}

RegionEnvelope region_from_csv(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line) || line != "dir0,dir1,dir2,support")
    throw FormatError("region CSV must start with the header dir0,dir1,dir2,support");
  std::vector<std::array<double, 4>> rows;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::array<double, 4> v{};
    std::size_t pos = 0;
    for (int k = 0; k < 4; ++k) {
      const std::size_t end = k < 3 ? line.find(',', pos) : line.size();
      if (end == std::string::npos) throw FormatError("region CSV row needs four fields: " + line);
      const std::string field = line.substr(pos, end - pos);
      char* stop = nullptr;
      v[std::size_t(k)] = std::strtod(field.c_str(), &stop);
      if (field.empty() || *stop != '\0') throw FormatError("region CSV: not a number: '" + field + "'");
      pos = end + 1;
    }
    rows.push_back(v);
  }
  if (rows.empty()) throw FormatError("region CSV has no rows");
  const bool flat = std::all_of(rows.begin(), rows.end(), [](const auto& r) { return r[2] == 0.0; });
  const int dim = flat ? 2 : 3;
  RegionEnvelope env;
  env.directions.resize(Eigen::Index(rows.size()), dim);
  env.values.resize(Eigen::Index(rows.size()));
  for (std::size_t i = 0; i < rows.size(); ++i) {
    for (int k = 0; k < dim; ++k) env.directions(Eigen::Index(i), k) = rows[i][std::size_t(k)];
    env.values[Eigen::Index(i)] = rows[i][3];
  }
  return env;
}

std::string boundary_csv(const std::vector<Eigen::Vector2d>& walk) {
  std::string out = "R0,R1\n";
  for (const auto& p : walk) out += format_double(p.x()) + "," + format_double(p.y()) + "\n";
  return out;
}

std::string boundary_svg(const std::vector<Eigen::Vector2d>& walk, const std::string& title) {
  double xmax = 0.0, ymax = 0.0;
  for (const auto& p : walk) {
    xmax = std::max(xmax, p.x());
    ymax = std::max(ymax, p.y());
  }
  if (xmax <= 0.0) xmax = 1.0;
  if (ymax <= 0.0) ymax = 1.0;
  // plot area 400 x 400 with a 50 px margin; y grows upwards
  const double w = 400.0, h = 400.0, m = 50.0;
  auto sx = [&](double x) { return format_double(m + w * x / xmax); };
  auto sy = [&](double y) { return format_double(m + h - h * y / ymax); };
  std::ostringstream s;
  s << "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"0 0 500 500\">\n";
  s << "<title>" << title << "</title>\n";
  s << "<line x1=\"" << m << "\" y1=\"" << m + h << "\" x2=\"" << m + w << "\" y2=\"" << m + h
    << "\" stroke=\"black\"/>\n";
  s << "<line x1=\"" << m << "\" y1=\"" << m + h << "\" x2=\"" << m << "\" y2=\"" << m
    << "\" stroke=\"black\"/>\n";
  s << "<text x=\"" << m + w << "\" y=\"" << m + h + 30 << "\" text-anchor=\"end\">R0 (max "
    << format_double(xmax) << ")</text>\n";
  s << "<text x=\"" << m << "\" y=\"" << m - 15 << "\">R1 (max " << format_double(ymax) << ")</text>\n";
  s << "<polyline fill=\"none\" stroke=\"blue\" points=\"";
  for (std::size_t i = 0; i < walk.size(); ++i) s << (i ? " " : "") << sx(walk[i].x()) << "," << sy(walk[i].y());
  s << "\"/>\n</svg>\n";
  return s.str();
}

Json gap_certificate_json(const GapCertificate& cert) {
  Json out = Json::array();
  for (const auto& r : cert.rows) {
    out.push_back(Json{{"theorem", r.theorem},
                       {"row_pair", r.row_pair},
                       {"worst_params", {{"alpha", r.worst_alpha}, {"beta", r.worst_beta}}},
                       {"slack_bits", number_json(r.slack())},
                       {"allowed_bits", number_json(r.allowed)}});
  }
  return out;
}

}  // namespace confbc
