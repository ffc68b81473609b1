#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <charconv>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <limits>
#include <sstream>

#include <json.hpp>

#include "cli.hpp"

using namespace logplate::cli;

namespace {

struct Run {
  int rc;
  std::string out;
  std::string err;
};

Run run(std::vector<std::string> args) {
  std::ostringstream out;
  std::ostringstream err;
  const int rc = dispatch(args, out, err);
  return {rc, out.str(), err.str()};
}

std::vector<std::string> lines(const std::string& s) {
  std::vector<std::string> out;
  std::istringstream in(s);
  for (std::string l; std::getline(in, l);) out.push_back(l);
  return out;
}

std::vector<std::string> fields(const std::string& line) {
  std::vector<std::string> out;
  std::istringstream in(line);
  for (std::string f; std::getline(in, f, ',');) out.push_back(f);
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

}  // namespace

TEST_CASE("format_double round-trips") {
  for (double v : {0.0, 1.0, -2.5, 0.1, 1.0 / 3.0, 6.02214076e23, 5e-324, 769.9676179422298}) {
    const auto s = format_double(v);
    double back = 0.0;
    std::from_chars(s.data(), s.data() + s.size(), back);
    CHECK(back == v);
  }
  CHECK(format_double(0.1) == "0.1");
  CHECK(format_double(std::numeric_limits<double>::quiet_NaN()) == "nan");
}

TEST_CASE("parse_range") {
  const auto r = parse_range("0:800:17");
  CHECK(r.lo == 0.0);
  CHECK(r.hi == 800.0);
  CHECK(r.steps == 17);
  const auto v = r.linear();
  REQUIRE(v.size() == 17);
  CHECK(v[1] == doctest::Approx(50.0));
  CHECK(v.back() == 800.0);
  CHECK(parse_range("-2:2:1").linear() == std::vector<double>{-2.0});
  CHECK_THROWS(parse_range("1:2"));
  CHECK_THROWS(parse_range("a:2:3"));
  CHECK_THROWS(parse_range("0:1:0"));
}

TEST_CASE("classify reports region A and existence for N = 9, mu = 1") {
  const auto r = run({"classify", "--N", "9", "--lambda", "0", "--mu", "1"});
  REQUIRE(r.rc == 0);
  const auto j = nlohmann::json::parse(r.out);
  CHECK(j["region"] == "A");
  CHECK(j["exists"] == "Yes");
  CHECK(j["nonexistence"] == false);
  CHECK(j["n8_condition"].is_null());
}

TEST_CASE("eigen prints the clamped eigenvalue and the Sobolev level") {
  const auto r = run({"eigen", "--N", "5", "--grid-size", "1024"});
  REQUIRE(r.rc == 0);
  const auto j = nlohmann::json::parse(r.out);
  CHECK(j["lambda1"].get<double>() == doctest::Approx(769.963483).epsilon(1e-5));
  CHECK(j["p_crit"].get<double>() == 10.0);
  CHECK(j["cS"].get<double>() == doctest::Approx(0.4 * j["S_pow"].get<double>()));
}

TEST_CASE("verify-lemmas at N = 8 passes every check within one percent") {
  const auto r = run({"verify-lemmas", "--N", "8"});
  REQUIRE(r.rc == 0);
  const auto ls = lines(r.out);
  REQUIRE(!ls.empty());
  CHECK(ls.front() == "check,quantity,eps,measured,predicted,lower,upper,rel_error,pass");
  int fits = 0;
  int slopes = 0;
  for (const auto& l : ls) {
    const auto f = fields(l);
    REQUIRE(f.size() == 9);
    if (f[0] == "fit" && !f[7].empty()) {
      ++fits;
      CHECK(std::abs(std::stod(f[7])) <= 0.01);
      CHECK(f[8] == "pass");
    }
    if (f[0] == "slope") {
      ++slopes;
      CHECK(f[8] == "pass");
    }
  }
  CHECK(fits >= 1);
  CHECK(slopes >= 1);
}

TEST_CASE("solve is byte-deterministic and --out mirrors stdout") {
  const std::vector<std::string> args{"solve", "--N", "5", "--lambda", "600", "--mu", "1", "--grid-size", "256",
                                      "--tol", "1e-6"};
  const auto a = run(args);
  const auto b = run(args);
  REQUIRE(a.rc == 0);
  CHECK(a.out == b.out);
  const auto ls = lines(a.out);
  CHECK(ls.front() == "r,u");
  const auto summary = nlohmann::json::parse(ls.back());
  CHECK(summary["converged"] == true);
  CHECK(summary["certificate"]["branch"] == "Nminus");
  CHECK(ls.size() == 256 + 2);

  const auto path = std::filesystem::temp_directory_path() / "logplate_cli_solve.csv";
  auto with_out = args;
  with_out.push_back("--out");
  with_out.push_back(path.string());
  const auto c = run(with_out);
  REQUIRE(c.rc == 0);
  std::ifstream in(path, std::ios::binary);
  const std::string file((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  CHECK(file == a.out);
  std::filesystem::remove(path);
}

TEST_CASE("solve reports numerical failure with exit code 2") {
  const auto r = run({"solve", "--N", "5", "--lambda", "0", "--mu", "1", "--grid-size", "256", "--max-iter", "200"});
  CHECK(r.rc == 2);
  CHECK(!r.err.empty());
}

TEST_CASE("bad flags exit with 1") {
  CHECK(run({"solve", "--bogus"}).rc == 1);
  CHECK(run({"classify", "--N", "4", "--mu", "1"}).rc == 1);
  CHECK(run({"eigen", "--grid-size", "8"}).rc == 1);
  CHECK(run({"phase-diagram", "--lambda-range", "0:1"}).rc == 1);
  CHECK(run({"nonsense"}).rc == 1);
  CHECK(run({"--help"}).rc == 0);
}

TEST_CASE("phase-diagram rows follow lambda-major order") {
  const auto r = run({"phase-diagram", "--N", "5", "--lambda-range", "0:800:3", "--mu-range", "-2:2:2"});
  REQUIRE(r.rc == 0);
  const auto ls = lines(r.out);
  REQUIRE(ls.size() == 1 + 6);
  CHECK(ls[0] == "lambda,mu,region,exists,nonexists,n8_condition,f_min");
  const std::vector<std::pair<double, double>> expected{{0, -2}, {0, 2}, {400, -2}, {400, 2}, {800, -2}, {800, 2}};
  for (std::size_t k = 0; k < expected.size(); ++k) {
    const auto f = fields(ls[k + 1]);
    CHECK(std::stod(f[0]) == expected[k].first);
    CHECK(std::stod(f[1]) == expected[k].second);
  }
  CHECK(fields(ls[2])[2] == "A");
  CHECK(fields(ls[5])[3] == "NoPositive");
  // Parallel evaluation gives the same bytes.
  const auto s = run({"phase-diagram", "--N", "5", "--lambda-range", "0:800:3", "--mu-range", "-2:2:2", "--jobs", "4"});
  CHECK(s.out == r.out);
}

TEST_CASE("ineq reports every check as holding") {
  const auto r = run({"ineq", "--N", "5", "--points", "10000", "--corpus", "5"});
  REQUIRE(r.rc == 0);
  const auto ls = lines(r.out);
  CHECK(ls[0] == "check,parameter,value,location,expected,holds");
  int poincare = 0;
  for (std::size_t k = 1; k < ls.size(); ++k) {
    CHECK(ls[k].substr(ls[k].size() - 4) == "true");
    poincare += ls[k].rfind("poincare", 0) == 0;
  }
  CHECK(poincare >= 1);
}
