#include <sstream>

#include "commands.hpp"
#include "doctest.h"
#include "json.hpp"

using numvol::cli::run_cli;
using Json = nlohmann::json;

namespace {

struct Run {
  int code;
  std::string out;
  std::string err;
};

Run run(std::vector<std::string> args) {
  std::ostringstream out, err;
  int code = run_cli(args, out, err);
  return {code, out.str(), err.str()};
}

Json strip_clock(Json j) {
  j["manifest"].erase("wall_clock_seconds");
  return j;
}

}  // namespace

TEST_CASE("report on P1xP1") {
  auto r = run({"report", "--variety", "P1xP1", "--curve", "1,1"});
  REQUIRE(r.code == 0);
  auto j = Json::parse(r.out);
  CHECK(j["result"]["curve"]["vol_hat"]["value"].get<double>() == doctest::Approx(2.0).epsilon(1e-8));
  CHECK(j["result"]["curve"]["mobility_bound"]["value"].get<double>() == doctest::Approx(2048.0).epsilon(1e-8));
  CHECK(j["manifest"]["seed"] == 0);
  CHECK(j["manifest"]["variety"]["name"] == "P1xP1");
}

TEST_CASE("exact volume through the CLI") {
  auto r = run({"volume", "--variety", "Cutkosky", "--param", "d=2", "--class", "2,1"});
  REQUIRE(r.code == 0);
  auto j = Json::parse(r.out);
  CHECK(j["result"]["value"] == "21");
  CHECK(j["result"]["method"] == "tensor");
}

TEST_CASE("zariski command") {
  auto r = run({"zariski", "--variety", "F1", "--class", "1,1"});
  REQUIRE(r.code == 0);
  auto j = Json::parse(r.out);
  CHECK(j["result"]["positive"] == Json::array({"1", "0"}));
  CHECK(j["result"]["negative"][0]["curve"] == "E");
  CHECK(j["result"]["negative"][0]["coeff"] == "1");
}

TEST_CASE("bad input exits with code 2") {
  auto r = run({"volume", "--variety", "F1", "--class", "1,x"});
  CHECK(r.code == 2);
  CHECK(r.err.find("2") != std::string::npos);
  CHECK(run({"volume", "--variety", "NoSuchThing", "--class", "1"}).code == 2);
  CHECK(run({"cyclevol", "--variety", "F1", "--curve", "1,2,3"}).code == 2);
}

TEST_CASE("verify skips inapplicable pairs") {
  auto r = run({"verify", "--suite", "zariski", "--variety", "P3"});
  CHECK(r.code == 0);
  auto j = Json::parse(r.out);
  CHECK_FALSE(j["result"]["warnings"].empty());
  CHECK(run({"verify", "--suite", "example31"}).code == 0);
}

TEST_CASE("repeated runs are identical") {
  std::vector<std::string> args{"cyclevol", "--variety", "Bl2P2", "--curve", "3,1,1", "--seed", "5"};
  auto a = run(args), b = run(args);
  CHECK(strip_clock(Json::parse(a.out)) == strip_clock(Json::parse(b.out)));
}

TEST_CASE("sweep csv output") {
  auto r = run({"sweep", "--variety", "F1", "--gamma", "0,-1", "--ample", "2,-1", "--eps", "1e-3:1e-1:logsteps=4",
                "--format", "csv", "--starts", "4"});
  REQUIRE(r.code == 0);
  CHECK(r.out.rfind("eps,", 0) == 0);
  CHECK(std::count(r.out.begin(), r.out.end(), '\n') >= 5);
}
