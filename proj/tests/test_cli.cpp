#include <cstdio>
#include <fstream>
#include <sstream>

#include "cli.hpp"
#include "doctest.h"
#include "json.hpp"
#include "oracles.hpp"

namespace {

struct Run {
  int code;
  std::string out, err;
};

Run run(std::vector<std::string> args) {
  args.insert(args.begin(), "somf");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = somf::cli::run(int(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

}  // namespace

TEST_CASE("dims command") {
  auto r = run({"dims", "--level", "11", "--kmax", "12"});
  REQUIRE(r.code == 0);
  auto j = nlohmann::json::parse(r.out);
  bool seen = false;
  for (const auto& row : j["rows"])
    if (row["k"] == 4) {
      seen = true;
      CHECK(row["S"] == 2);
      CHECK(row["M"] == 4);
      CHECK(row["S2"] == 6);
      CHECK(row["M2"] == 12);
    }
  CHECK(seen);
  r = run({"dims", "--level", "11", "--k", "2"});
  CHECK(nlohmann::json::parse(r.out)["rows"][0]["S2"] == 2);
  r = run({"dims", "--level", "11", "--k", "3"});
  CHECK(r.code == 2);
  CHECK(r.err.find("even weight only") != std::string::npos);
  CHECK(r.err.find("Usage") != std::string::npos);
  r = run({"dims", "--level", "11", "--kmax", "6", "--format", "csv"});
  CHECK(r.out.rfind("N,k,S,M,E,S2,M2,H1,lower,upper\n11,2,1,2,1,2,6,6,2,3\n", 0) == 0);
  CHECK(run({"dims"}).code == 2);
  CHECK(run({}).code == 2);
  CHECK(run({"--help"}).code == 0);
}

TEST_CASE("series, eval and periods commands") {
  auto r = run({"series", "--series", "E", "--level", "1", "--s", "2,0", "--z", "0,1", "--cmax", "200"});
  REQUIRE(r.code == 0);
  auto j = nlohmann::json::parse(r.out);
  const double ref = oracle::eisenstein_fourier(0.0, 1.0, 2.0);
  CHECK(std::abs(j["result"]["value"][0].get<double>() - ref) <= j["result"]["tail_estimate"].get<double>());
  r = run({"series", "--series", "Q", "--level", "11", "--s", "0.2", "--z", "0,1"});
  CHECK(r.code == 2);
  CHECK(run({"series", "--series", "X"}).code == 2);
  CHECK(run({"series", "--z", "a,b"}).code == 2);

  r = run({"eval", "--form", "delta", "--z", "0,1"});
  REQUIRE(r.code == 0);
  CHECK(std::abs(nlohmann::json::parse(r.out)["value"][0].get<double>() - 0.0017853698506421) < 1e-15);
  CHECK(run({"eval", "--form", "delta", "--z", "0,0.001", "--order", "10"}).code == 2);
  CHECK(run({"eval", "--form", "nosuchform"}).code == 2);

  r = run({"periods", "--form", "delta", "--gamma", "0,-1,1,0", "--k", "12", "--base", "inf"});
  REQUIRE(r.code == 0);
  CHECK(nlohmann::json::parse(r.out)["coefficients"].size() == 11);
  CHECK(run({"periods", "--form", "delta", "--k", "4"}).code == 2);
  CHECK(run({"periods", "--form", "delta", "--gamma", "1,1,1,1"}).code == 2);
}

TEST_CASE("crossing command") {
  const std::string path = "test_cli_curve.csv";
  auto r = run({"crossing", "--rmin", "0.5", "--rmax", "2", "--steps", "31", "-o", path});
  REQUIRE(r.code == 0);
  std::ifstream f(path);
  std::string header, line;
  std::getline(f, header);
  CHECK(header == "r,re_K,im_K,P_reconstructed,P_oracle,abs_dev");
  int rows = 0;
  bool anchor = false;
  while (std::getline(f, line)) {
    ++rows;
    if (line.rfind("1,", 0) == 0) anchor = line.find(",0.5,0.5,0") != std::string::npos;
  }
  CHECK(rows == 31);
  CHECK(anchor);
  std::remove(path.c_str());
  CHECK(run({"crossing", "--rmin", "2", "--rmax", "1"}).code == 2);
  CHECK(run({"crossing", "--steps", "1"}).code == 2);
}

TEST_CASE("verify command") {
  auto r = run({"verify", "--suite", "crossing", "--format", "text"});
  CHECK(r.code == 0);
  CHECK(r.out.find("KNOWN") != std::string::npos);
  CHECK(r.err.find("known finding") != std::string::npos);
  CHECK(run({"verify", "--suite", "crossing", "--strict"}).code == 1);
  // a tolerance nobody meets makes the exit code 1 and lists the failure
  r = run({"verify", "--suite", "dims", "--tol", "crossing.curve=1e-30"});
  CHECK(r.code == 0);
  r = run({"verify", "--suite", "crossing", "--tol", "crossing.automorphy=1e-30"});
  CHECK(r.code == 1);
  CHECK(r.err.find("FAILED: K slashed") != std::string::npos);

  const std::string cfg = "test_cli.cfg";
  {
    std::ofstream f(cfg);
    f << "format = text\nseed = 3\n";
  }
  r = run({"verify", "--suite", "dims", "--config", cfg, "--format", "json"});
  REQUIRE(r.code == 0);
  auto j = nlohmann::json::parse(r.out);
  CHECK(j["config"]["seed"] == 3);
  {
    std::ofstream f(cfg);
    f << "bogus = 1\n";
  }
  CHECK(run({"verify", "--suite", "dims", "--config", cfg}).code == 2);
  std::remove(cfg.c_str());
  CHECK(run({"verify", "--suite", "nope"}).code == 2);
  CHECK(run({"verify", "--suite", "dims", "--seed", "x"}).code == 2);

  // repro mode is byte-identical
  CHECK(run({"verify", "--suite", "dims"}).out == run({"verify", "--suite", "dims"}).out);
}
