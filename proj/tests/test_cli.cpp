#include <doctest.h>

#include <sys/wait.h>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>

#include "confbc/gaussian_bounds.hpp"
#include "confbc/io.hpp"

using namespace confbc;

namespace {

struct Run {
  int code = -1;
  std::string out;
};

Run run(const std::string& args) {
  const std::string cmd = std::string(CONFBC_CLI) + " " + args + " 2>/dev/null";
  FILE* pipe = popen(cmd.c_str(), "r");
  REQUIRE(pipe != nullptr);
  Run r;
  char buf[4096];
  while (std::size_t n = std::fread(buf, 1, sizeof buf, pipe)) r.out.append(buf, n);
  const int status = pclose(pipe);
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

std::string data(const std::string& name) { return std::string(CONFBC_DATA) + "/channels/" + name; }

std::string slurp(const std::string& path) {
  std::ifstream f(path);
  std::stringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

// "support (a,b,c): v" lines printed by region
double printed_support(const std::string& out, const std::string& dir) {
  const std::string key = "support (" + dir + "): ";
  const auto pos = out.find(key);
  REQUIRE(pos != std::string::npos);
  return std::stod(out.substr(pos + key.size()));
}

std::vector<std::vector<double>> csv_rows(const std::string& text) {
  std::vector<std::vector<double>> rows;
  std::stringstream ss(text);
  std::string line;
  std::getline(ss, line);  // header
  while (std::getline(ss, line)) {
    std::vector<double> r;
    std::stringstream ls(line);
    std::string cell;
    while (std::getline(ls, cell, ',')) r.push_back(std::stod(cell));
    rows.push_back(r);
  }
  return rows;
}

double h2(double p) { return p <= 0 || p >= 1 ? 0.0 : -p * std::log2(p) - (1 - p) * std::log2(1 - p); }

}  // namespace

TEST_CASE("region on the anti-correlated gaussian channel") {
  const Run r = run("region --channel " + data("g-mirror.json") + " --bound t7");
  CHECK(r.code == 0);
  // psi(P) + C12 with P = 1, C12 = C21 = 1
  CHECK(printed_support(r.out, "1,0,0") == doctest::Approx(1.5).epsilon(1e-8));
  CHECK(printed_support(r.out, "1,1,0") == doctest::Approx(1.5).epsilon(1e-8));
}

TEST_CASE("region on the first discrete example") {
  const Run r = run("region --channel " + data("dm-ex1.json") + " --bound t4 --grid 0.01 --v-card 1");
  CHECK(r.code == 0);
  // V constant: max over P(x) of min(I(X;Y1) + C21, H(X)), attained at the uniform input
  CHECK(printed_support(r.out, "1,1,0") == doctest::Approx(std::min(1 - h2(0.2) + 0.5, 1.0)).epsilon(1e-8));
  CHECK(printed_support(r.out, "1,0,0") == doctest::Approx(0.3).epsilon(1e-8));
}

TEST_CASE("exit codes") {
  CHECK(run("region --channel " + data("g.json") + " --bound t7").code == 2);  // |lambda| < 1
  CHECK(run("region --channel " + data("dm-ex1.json") + " --bound t7").code == 2);
  CHECK(run("region --channel " + data("g.json") + " --bound nope").code == 2);
  {
    const std::string bad = "confbc_cli_bad.json";
    std::ofstream(bad) << "{ \"type\": \"dm\", ";
    CHECK(run("region --channel " + bad + " --bound t4").code == 3);
    std::remove(bad.c_str());
  }
  CHECK(run("region --channel " + data("dm-ex1.json") + " --bound outer --grid 0.05").code == 4);
  CHECK(run("verify no-such-suite").code == 2);
  CHECK(run("verify gauss-degraded").code == 0);
  CHECK(run("region").code != 0);
}

TEST_CASE("sweep of the correlation stays within the decode-and-forward gap") {
  const Run r = run("sweep --channel " + data("g.json") + " --vary lambda --from -0.9 --to 0.9 --points 7 --metric sumrate-gap");
  REQUIRE(r.code == 0);
  CHECK(r.out.rfind("lambda,sumrate-gap,gap_bound\n", 0) == 0);
  const auto rows = csv_rows(r.out);
  REQUIRE(rows.size() == 7);
  for (const auto& row : rows) {
    CHECK(row[1] >= -1e-9);
    CHECK(row[1] <= row[2] + 1e-9);
    CHECK(row[2] == doctest::Approx(gap_bound_t11(row[0])).epsilon(1e-8));
  }
}

TEST_CASE("sweep of the power and of a link") {
  const Run p = run("sweep --channel " + data("g-mirror.json") + " --vary power --from 0.5 --to 4 --points 4 --dir 1,1");
  REQUIRE(p.code == 0);
  const auto rows = csv_rows(p.out);
  REQUIRE(rows.size() == 4);
  for (std::size_t i = 1; i < rows.size(); ++i) CHECK(rows[i][1] >= rows[i - 1][1] - 1e-12);
  // sum rate min(psi(P) + C21, psi(P) + C12 + C21) = psi(P) + 1
  for (const auto& row : rows) CHECK(row[1] == doctest::Approx(psi(row[0]) + 1.0).epsilon(1e-6));

  const Run c = run("sweep --channel " + data("dm-ex1.json") + " --vary c21 --from 0 --to 1 --points 3 --bound t4 --dir 1,1");
  REQUIRE(c.code == 0);
  const auto crow = csv_rows(c.out);
  REQUIRE(crow.size() == 3);
  CHECK(crow[2][1] == doctest::Approx(1.0).epsilon(1e-8));

  CHECK(run("sweep --channel " + data("g.json") + " --vary power --from 2 --to 1 --points 3").code == 2);
  CHECK(run("sweep --channel " + data("dm-ex1.json") + " --vary power --from 1 --to 2 --points 3").code == 2);
}

TEST_CASE("fm on a user system") {
  const std::string path = "confbc_cli_system.json";
  std::ofstream(path) << R"({"variables":["R0","R1","B"],"rows":[{"coeffs":[1,0,1],"rhs":2},)"
                      << R"({"coeffs":[0,1,-1],"rhs":0.5},{"coeffs":[0,0,-1],"rhs":0}]})";
  const Run r = run("fm --system " + path + " --eliminate B");
  std::remove(path.c_str());
  REQUIRE(r.code == 0);
  const LinearSystem s = system_from_json(Json::parse(r.out));
  CHECK(s.variables == VarList{"R0", "R1"});
  CHECK(s.satisfied_by(Eigen::Vector2d(2.0, 0.5)));
  CHECK_FALSE(s.satisfied_by(Eigen::Vector2d(2.0, 0.6)));
}

TEST_CASE("exports are byte-stable and plot reproduces the boundary") {
  const std::string base = "region --channel " + data("dm-ex1.json") + " --bound t4 --grid 0.02";
  REQUIRE(run(base + " --out cli_a.csv --svg cli_a.svg --boundary cli_a_b.csv").code == 0);
  REQUIRE(run(base + " --out cli_b.csv").code == 0);
  CHECK(slurp("cli_a.csv") == slurp("cli_b.csv"));
  CHECK(slurp("cli_a.csv").rfind("dir0,dir1,dir2,support\n", 0) == 0);
  REQUIRE(run("plot --in cli_a.csv --svg cli_p.svg --boundary cli_p_b.csv").code == 0);
  const auto direct = csv_rows(slurp("cli_a_b.csv")), replot = csv_rows(slurp("cli_p_b.csv"));
  REQUIRE(direct.size() == replot.size());
  for (std::size_t i = 0; i < direct.size(); ++i) {
    CHECK(direct[i][0] == doctest::Approx(replot[i][0]).epsilon(1e-6));
    CHECK(direct[i][1] == doctest::Approx(replot[i][1]).epsilon(1e-6));
  }
  const std::string svg = slurp("cli_p.svg");
  CHECK(svg.find("<polyline") != std::string::npos);
  CHECK(svg.find("<polyline", svg.find("<polyline") + 1) == std::string::npos);
  // 3-D regions cannot be drawn
  CHECK(run("region --channel " + data("g.json") + " --bound outer --grid 0.1 --svg cli_x.svg").code == 2);
  for (const char* f : {"cli_a.csv", "cli_b.csv", "cli_a.svg", "cli_a_b.csv", "cli_p.svg", "cli_p_b.csv"}) std::remove(f);
}
