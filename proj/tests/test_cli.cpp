#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

#include <unistd.h>

#include "corpus.hpp"
#include "doctest.h"
#include "qdunkl/cli.hpp"
#include "qdunkl/lattice.hpp"

using namespace qdunkl;
using testing::random_compact;
using testing::rel_sup;

namespace {

struct Run {
  int code;
  std::string out, err;
};

Run run(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = run_cli(args, out, err);
  return {code, out.str(), err.str()};
}

/// The value printed after "<label> = " on the line starting with label.
cplx value_of(const std::string& text, const std::string& label) {
  std::istringstream is(text);
  std::string line;
  while (std::getline(is, line)) {
    if (line.rfind(label, 0) != 0) continue;
    const std::string v = line.substr(line.find(" = ") + 3);
    char* end = nullptr;
    const double re = std::strtod(v.c_str(), &end);
    std::string rest(end);
    if (rest.empty()) return re;
    const double sign = rest.find('-') != std::string::npos ? -1.0 : 1.0;
    rest = rest.substr(rest.find_first_of("+-") + 1);
    return {re, sign * std::strtod(rest.c_str(), nullptr)};
  }
  FAIL("no line starting with " << label << " in\n" << text);
  return 0.0;
}

std::string temp_path(const std::string& name) {
  return (std::filesystem::temp_directory_path() / ("qdunkl_cli_" + std::to_string(::getpid()) + "_" + name)).string();
}

}  // namespace

TEST_CASE("eval cross-checks the closed forms") {
  Run r = run({"eval", "jalpha", "1.3", "--alpha", "0.5"});
  REQUIRE(r.code == 0);
  CHECK(std::abs(value_of(r.out, "j_alpha") - value_of(r.out, "sin(x; q^2) / x")) < 1e-14);

  r = run({"eval", "jalpha", "--x", "-2.1", "--alpha", "-0.5"});
  REQUIRE(r.code == 0);
  CHECK(std::abs(value_of(r.out, "j_alpha") - value_of(r.out, "cos(x; q^2)")) < 1e-14);

  r = run({"eval", "psi", "--alpha", "-0.5", "--lambda", "2", "--x", "-0.7"});
  REQUIRE(r.code == 0);
  CHECK(std::abs(value_of(r.out, "psi") - value_of(r.out, "e(i lambda x; q^2)")) < 1e-14);
  CHECK(value_of(r.out, "truncation_error").real() < 1e-13);

  r = run({"eval", "qexp", "0", "1"});
  REQUIRE(r.code == 0);
  r = run({"eval", "qgamma", "1"});
  CHECK(std::abs(value_of(r.out, "qgamma") - 1.0) < 1e-15);

  r = run({"eval", "constants", "--alpha", "0.5"});
  REQUIRE(r.code == 0);
  CHECK(std::abs(value_of(r.out, "q").real() - (std::sqrt(5.0) - 1.0) / 2.0) < 1e-15);
  CHECK(std::abs(value_of(r.out, "C").real() - 1.0) < 1e-14);
  CHECK(r.out.find("window = [-28, 80]") != std::string::npos);

  r = run({"eval", "W", "--alpha", "0.5", "--t", "0.3"});
  CHECK(std::abs(value_of(r.out, "W") - 1.0) < 1e-15);
}

TEST_CASE("eval usage errors exit with 2") {
  CHECK(run({"eval", "zeta", "1"}).code == kExitUsage);
  CHECK(run({"eval", "qgamma", "1", "2"}).code == kExitUsage);
  CHECK(run({"eval", "qcos"}).code == kExitUsage);
  CHECK(run({"eval", "jalpha", "1"}).code == kExitUsage);
  CHECK(run({"eval", "jalpha", "1", "--alpha", "-0.7"}).code == kExitUsage);
  CHECK(run({"eval", "W", "--alpha", "-0.5", "--t", "0.3"}).code == kExitUsage);
  CHECK(run({"eval", "constants", "--k", "1", "--q", "0.5"}).code == kExitUsage);
  CHECK(run({"eval", "qcos", "1", "--q", "1.5"}).code == kExitUsage);
  CHECK(run({}).code == kExitUsage);
  CHECK(run({"frobnicate"}).code == kExitUsage);
  CHECK(run({"--help"}).code == kExitOk);
}

TEST_CASE("eval accepts a generic q") {
  const Run r = run({"eval", "constants", "--q", "0.5"});
  REQUIRE(r.code == 0);
  CHECK(r.out.find("k = none") != std::string::npos);
}

TEST_CASE("transform round trips through files") {
  std::mt19937 rng(7);
  const GridFunction f = random_compact(testing::standard_grid(), rng);
  const std::string in = temp_path("f.json"), a = temp_path("a.json"), b = temp_path("b.json");
  save_grid_function(in, f);

  SUBCASE("rubin applied twice and reflected") {
    REQUIRE(run({"transform", "rubin", in, a}).code == 0);
    const Run r = run({"transform", "rubin", a, b, "--negate", "--k", "1"});
    REQUIRE(r.code == 0);
    CHECK(r.out.find("tail estimate") != std::string::npos);
    CHECK(rel_sup(load_grid_function(b), f) < 1e-7);
  }
  SUBCASE("dunkl and its inverse") {
    for (const char* alpha : {"-0.5", "0", "1.5"}) {
      REQUIRE(run({"transform", "dunkl", in, a, "--alpha", alpha}).code == 0);
      REQUIRE(run({"transform", "dunkl-inverse", a, b, "--alpha", alpha}).code == 0);
      CHECK(rel_sup(load_grid_function(b), f) < 1e-7);
    }
  }
  SUBCASE("V and its inverse on both routes") {
    for (const char* route : {"direct", "decomposed"}) {
      REQUIRE(run({"transform", "V", in, a, "--alpha", "0.5", "--route", route}).code == 0);
      REQUIRE(run({"transform", "V-inverse", a, b, "--alpha", "0.5", "--route", route}).code == 0);
      CHECK(rel_sup(load_grid_function(b), f) < 1e-9);
    }
  }
  for (const std::string& p : {in, a, b}) std::filesystem::remove(p);
}

TEST_CASE("transform error exits") {
  const QGrid g = testing::standard_grid();
  const std::string in = temp_path("g.json"), out = temp_path("h.json"), bad = temp_path("bad.json");
  std::mt19937 rng(3);
  save_grid_function(in, random_compact(g, rng));

  CHECK(run({"transform", "dunkl", in, out}).code == kExitUsage);
  CHECK(run({"transform", "fourier", in, out}).code == kExitUsage);
  CHECK(run({"transform", "rubin", temp_path("missing.json"), out}).code == kExitUsage);
  CHECK(run({"transform", "R", in, out, "--alpha", "-0.5"}).code == kExitUsage);
  CHECK(run({"transform", "rubin", in, out, "--k", "2"}).code == kExitUsage);
  CHECK(run({"transform", "V", in, out, "--alpha", "0.5", "--route", "sideways"}).code == kExitUsage);
  {
    std::ofstream os(bad);
    os << "{\"q\": 0.6}";
  }
  CHECK(run({"transform", "rubin", bad, out}).code == kExitUsage);

  GridFunction flat(g);
  for (int n = g.n_lo(); n <= g.n_hi(); ++n) {
    flat.set(1, n, 1.0);
    flat.set(-1, n, 1.0);
  }
  save_grid_function(in, flat);
  CHECK(run({"transform", "rubin", in, out}).code == kExitNumeric);
  CHECK(run({"transform", "rubin", in, out, "--force"}).code == kExitOk);
  for (const std::string& p : {in, out, bad}) std::filesystem::remove(p);
}

TEST_CASE("verify reports are deterministic") {
  const std::vector<std::string> args = {"verify", "--alpha-list", "-0.5,0.5", "--only",
                                         "fourier.parity,bessel.eigen,dunkl.plancherel", "--seed", "11"};
  const Run a = run(args), b = run(args);
  REQUIRE(a.code == 0);
  CHECK(a.out == b.out);
  CHECK(a.out.find("\"runtime_ms\": null") != std::string::npos);
  CHECK(a.err.find("5 checks, 0 failed") != std::string::npos);

  std::vector<std::string> threaded = args;
  threaded.insert(threaded.end(), {"--threads", "1"});
  CHECK(run(threaded).out == a.out);

  std::vector<std::string> csv = args;
  csv.insert(csv.end(), {"--format", "csv"});
  const Run c = run(csv);
  CHECK(c.out.rfind("identity_id,anchor,alpha,residual,tolerance,pass,runtime_ms\n", 0) == 0);
}

TEST_CASE("verify exit codes") {
  CHECK(run({"verify", "--alpha-list=0", "--only", "bessel.eigen", "--tol", "1e-30"}).code == kExitFailure);
  CHECK(run({"verify", "--list"}).code == kExitOk);
  CHECK(run({"verify", "--window", "12"}).code == kExitUsage);
  CHECK(run({"verify", "--format", "xml"}).code == kExitUsage);
  CHECK(run({"verify", "--only", "no.such.identity"}).code == kExitUsage);
  CHECK(run({"verify", "--alpha-list", "-0.7", "--only", "bessel.eigen"}).code == kExitUsage);

  const std::string path = temp_path("report.json");
  const Run r = run({"verify", "--alpha-list", "1", "--window", "-28:80", "--only", "dunkl.eigen", "--report", path});
  CHECK(r.code == kExitOk);
  CHECK(r.out.find("1 checks, 0 failed") != std::string::npos);
  CHECK(std::filesystem::file_size(path) > 0);
  std::filesystem::remove(path);
}
