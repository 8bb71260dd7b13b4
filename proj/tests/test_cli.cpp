#include <doctest.h>

#include <cstdlib>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "cli.hpp"

namespace {

struct Result {
  int code;
  std::string out;
  std::string err;
};

Result run(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = chfn::cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

nlohmann::json parse(const Result& r) {
  return nlohmann::json::parse(r.out);
}

std::string first_line(const std::string& s) {
  return s.substr(0, s.find('\n'));
}

}  // namespace

TEST_CASE("verify-kac on a Laplace pair") {
  const auto r = run({"verify-kac", "--laplace", "0.3", "0.7"});
  REQUIRE(r.code == 0);
  const auto j = parse(r);
  CHECK(j["pass"] == true);
  CHECK(j["identity"]["max_residual"].get<double>() < 1e-10);
}

TEST_CASE("counterexample exit codes") {
  CHECK(run({"counterexample", "--kind", "mixture", "--a", "0.25"}).code == 0);
  CHECK(run({"counterexample", "--kind", "exp-diff"}).code == 0);
  const auto bad = run({"counterexample", "--kind", "gamma-drift", "--beta", "4", "--a1", "1",
                        "--a2", "1", "--b", "4.1"});
  CHECK(bad.code == 2);
  CHECK(bad.err.find("bound") != std::string::npos);
  CHECK(run({"counterexample", "--kind", "mixture", "--a", "0.6"}).code == 2);
}

TEST_CASE("usage errors exit with 2") {
  CHECK(run({"bogus"}).code == 2);
  CHECK(run({}).code == 2);
  CHECK(run({"pgf", "--lambda", "1", "--theta", "0.7"}).code == 2);
  CHECK(run({"verify-kac", "--format", "xml"}).code == 2);
  CHECK(run({"--help"}).code == 0);
}

TEST_CASE("invert rejects the quartic and accepts a Laplace law") {
  const auto q = run({"invert", "--num", "1", "--den", "1,0,1"});
  CHECK(q.code == 1);
  CHECK(parse(q)["pass"] == false);
  const auto l = run({"invert", "--num", "1", "--den", "1,2"});
  CHECK(l.code == 0);
  CHECK(parse(l)["pass"] == true);
}

TEST_CASE("classify verdicts") {
  CHECK(parse(run({"classify", "--pair", "laplace"}))["classification"]["kind"] == "laplace");
  CHECK(parse(run({"classify", "--pair", "exp-diff"}))["classification"]["kind"] == "drifted");
  const auto m = run({"classify", "--pair", "mixture"});
  CHECK(m.code == 0);
  CHECK(parse(m)["classification"]["kind"] == "not-gid");
}

TEST_CASE("csv output") {
  const auto pgf = run({"pgf", "--lambda", "1", "--theta", "0.25", "--format", "csv"});
  REQUIRE(pgf.code == 0);
  CHECK(pgf.out.rfind("# ", 0) == 0);
  const auto scan = run({"limit-scan", "--family", "power", "--format", "csv"});
  REQUIRE(scan.code == 0);
  CHECK(first_line(scan.out).find(",") != std::string::npos);
  const auto ind = run({"indecomposable", "--sigma2", "2", "--format", "csv"});
  CHECK(first_line(ind.out) == "key,value");
  CHECK(ind.out.find("kind,indecomposable-gaussian") != std::string::npos);
}

TEST_CASE("seeded output is deterministic and the seed matters") {
  const std::vector<std::string> base{"montecarlo", "--law", "exp-diff", "--samples", "20000"};
  auto with = [&](const char* seed) {
    auto a = base;
    a.insert(a.end(), {"--seed", seed});
    return run(a).out;
  };
  CHECK(with("5") == with("5"));
  CHECK(with("5") != with("6"));

  setenv("CHFN_SEED", "5", 1);
  const auto env = run(base).out;
  unsetenv("CHFN_SEED");
  CHECK(env == with("5"));
  CHECK(run(base).out == with("20240611"));

  setenv("CHFN_SEED", "x", 1);
  CHECK(run(base).code == 2);
  unsetenv("CHFN_SEED");
}
