#include <doctest.h>

#include <nlohmann/json.hpp>

#include "haarint/cli.hpp"
#include "test_util.hpp"

using namespace haarint;
using testutil::rf;
using nlohmann::json;

namespace {

CliResult run(std::initializer_list<std::string> args) {
  return runCli(std::vector<std::string>(args));
}

}  // namespace

TEST_CASE("integrate subcommand, text output") {
  CliResult r = run({"integrate", "abs(U[1,1])^2", "--measure", "U(d)"});
  CHECK(r.exitCode == 0);
  CHECK(r.out == "1 // d\n");

  CliResult tr4 = run({"integrate", "abs(tr(U))^4", "--measure", "U(10)"});
  CHECK(tr4.exitCode == 0);
  CHECK(tr4.out == "2\n");
}

TEST_CASE("integrate subcommand, json schema") {
  CliResult r =
      run({"integrate", "abs(U[1,1])^2", "--measure", "U(d)", "--format", "json"});
  REQUIRE(r.exitCode == 0);
  json j = json::parse(r.out);
  for (const char* key : {"result", "measure", "dimension", "engine", "elapsed_ms"})
    CHECK(j.contains(key));
  CHECK(j["measure"] == "U(d)");
  CHECK(j["dimension"] == "d");
  // text and JSON renderings are value-equivalent
  RationalFunction back = ratFromJson(j["result"]);
  CHECK(back == rf("1/d"));
}

TEST_CASE("rational JSON round trip") {
  for (const char* text : {"1/d", "2/(d*(d+1))", "-1/(d*(d^2-1))", "(d-1)/d^2", "d^2 + d"}) {
    RationalFunction r = rf(text);
    CHECK(ratFromJson(ratToJson(r)) == r);
  }
}

TEST_CASE("error exit codes") {
  // parse error -> 2
  CHECK(run({"integrate", "abs(U[1,1)^2", "--measure", "U(d)"}).exitCode == 2);
  // measure error -> 3
  CHECK(run({"integrate", "abs(U[1,1])^2", "--measure", "Sp(5)"}).exitCode == 3);
  CHECK(run({"integrate", "U[1,1] * A[1,1]", "--measure", "U(d)"}).exitCode == 3);
  // engine error (design order) -> 4
  CliResult design =
      run({"integrate", "abs(U[1,1])^6", "--measure", "Design(d,2)", "--format", "json"});
  CHECK(design.exitCode == 4);
  json err = json::parse(design.err);
  CHECK(err.contains("error"));
  CHECK(err["exit"] == 4);
  // pole on dim-override -> 4
  CHECK(run({"integrate", "U[1,1] * conj(U[1,2]) * U[2,2] * conj(U[2,1])", "--measure",
             "U(d)", "--dim-override", "1"})
            .exitCode == 4);
}

TEST_CASE("asymptotic subcommand") {
  CliResult r = run({"integrate", "abs(U[1,1])^4", "--measure", "U(d)", "--asymptotic", "4"});
  CHECK(r.exitCode == 0);
  CHECK(r.out == "2/d^2 - 2/d^3 + 2/d^4\n");

  CliResult raw =
      run({"asymptotic", "2*n/(n^2+1)", "--symbol", "n", "--order", "5"});
  CHECK(raw.exitCode == 0);
  CHECK(raw.out == "2/n - 2/n^3 + 2/n^5\n");
}

TEST_CASE("wg subcommand") {
  CliResult r = run({"wg", "U", "2"});
  CHECK(r.exitCode == 0);
  CHECK(r.out.find("[1,1]: 1 // d^2 - 1") != std::string::npos);
  CHECK(r.out.find("[2]: -1 // d^3 - d") != std::string::npos);

  CliResult o1 = run({"wg", "O", "1"});
  CHECK(o1.out.find("[1]: 1 // d") != std::string::npos);

  CliResult empty = run({"wg", "U", "0", "--format", "json"});
  CHECK(empty.exitCode == 0);
  json j = json::parse(empty.out);
  CHECK(j["result"].is_array());
  CHECK(j["result"].empty());
}

TEST_CASE("dim-override evaluates post hoc") {
  CliResult r = run({"integrate", "abs(U[1,1])^4", "--measure", "U(d)", "--dim-override",
                     "3", "--format", "json"});
  REQUIRE(r.exitCode == 0);
  json j = json::parse(r.out);
  CHECK(j["result"]["value"]["re"] == "1/6");
  CHECK(j["dim_override"] == 3);
}

TEST_CASE("hciz subcommand") {
  CliResult r = run({"hciz", "--a", "0,1", "--b", "0,1"});
  CHECK(r.exitCode == 0);
  // e - 1 = 1.718...
  CHECK(r.out.find("1.71828") != std::string::npos);
}

TEST_CASE("matrix results through the CLI") {
  CliResult r = run({"integrate", "U * U'", "--measure", "U(2)", "--format", "json"});
  REQUIRE(r.exitCode == 0);
  json j = json::parse(r.out);
  CHECK(j["result"]["type"] == "matrix");
  CHECK(j["result"]["entries"][0][0] == "1");
  CHECK(j["result"]["entries"][0][1] == "0");
}

TEST_CASE("bench subcommand smoke") {
  CliResult r = run({"bench", "ginue", "--samples", "3"});
  CHECK(r.exitCode == 0);
  CHECK(r.out.find("median_ms") != std::string::npos);
  CHECK(run({"bench", "unknown-suite"}).exitCode == 3);
}

TEST_CASE("cache-clear subcommand") {
  CliResult r = run({"cache-clear"});
  CHECK(r.exitCode == 0);
  CHECK(r.out.find("cache cleared") != std::string::npos);
}
