#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "zsect/cli.hpp"

using namespace zsect;
using nlohmann::json;

namespace {

struct Result {
  int code = 0;
  std::string out, err;
};

Result run(std::vector<std::string> args) {
  args.insert(args.begin(), "zsect");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  Result r;
  r.code = run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
  r.out = out.str();
  r.err = err.str();
  return r;
}

json body(const Result& r) {
  json j = json::parse(r.out);
  j.erase("timestamp");
  return j;
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream f(p);
  std::stringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

std::filesystem::path tmp(const std::string& name) { return std::filesystem::temp_directory_path() / ("zsect_test_" + name); }

}  // namespace

TEST_CASE("zeros as CSV") {
  const Result r = run({"zeros", "--family", "geometric", "--n", "3"});
  CHECK(r.code == 0);
  CHECK(r.out == "re,im,multiplicity\n-1,0,1\n0,1,1\n0,-1,1\ninf,inf,0\n");

  const Result o = run({"zeros", "--family", "explicit:0,0,1,1", "--n", "5"});
  CHECK(o.out == "re,im,multiplicity\n-1,0,1\n0,0,2\ninf,inf,2\n");

  const json j = json::parse(run({"zeros", "--family", "geometric", "--n", "3", "--format", "json"}).out);
  CHECK(j["tool"] == "zsect");
  CHECK(j["version"] == kToolVersion);
  CHECK(j["result"]["zeros"].size() == 3);
  CHECK(j["config"]["n"] == 3);
}

TEST_CASE("measure tables") {
  const Result r = run({"measure", "--family", "geometric", "--n", "3", "--t-grid", "0.9,1.1", "--m-max", "1"});
  CHECK(r.code == 0);
  CHECK(r.out.rfind("t,F\n0.9,0\n1.1,1\n\nm,weyl_re,weyl_im,weyl_abs\n1,", 0) == 0);
  const Result c = run({"measure", "--family", "geometric", "--n", "3", "--t-grid", "1,inf", "--compactified"});
  CHECK(c.out.rfind("x,F\n0.5,1\n1,1\n", 0) == 0);
  const json j = body(run({"measure", "--family", "geometric", "--n", "50", "--format", "json"}));
  CHECK(j["result"]["levy_distance_to_unit_circle"].get<double>() <= 1e-12);
  CHECK(j["result"]["mass_at_infinity"] == 0.0);
}

TEST_CASE("bounds and audit") {
  const Result r = run({"bounds", "--family", "explicit:1,1,1,1", "--n", "3"});
  CHECK(r.code == 0);
  const json j = json::parse(r.out);
  CHECK(j["result"]["cauchy"].get<double>() == doctest::Approx(1.8392867552141612));
  const Result a = run({"bounds", "--family", "random:gaussian_complex@4", "--n", "40", "--audit"});
  CHECK(a.code == 0);
  CHECK(json::parse(a.out)["result"]["audit"]["ok"] == true);
  // b_n = 0 gives an infinite Cauchy bound, serialised as a string.
  CHECK(json::parse(run({"bounds", "--family", "explicit:1", "--n", "2"}).out)["result"]["cauchy"] == "inf");
}

TEST_CASE("gauge subcommand") {
  const Result r = run({"gauge", "--family", "lacunary:2", "--horizon", "4096"});
  CHECK(r.code == 0);
  const json j = json::parse(r.out);
  CHECK(std::abs(j["result"]["Gamma_hat"].get<double>() - 0.5) <= 0.05);
  CHECK(j["config"]["horizon"] == 4096);
  const Result g = run({"gauge", "--family", "geometric", "--horizon", "256", "--grid", "0.1,0.5"});
  CHECK(json::parse(g.out)["result"]["gamma_grid"].size() == 2);
}

TEST_CASE("universal subcommand") {
  const auto coeffs = tmp("coeffs.csv");
  const Result r = run({"universal", "--steps", "1", "--targets", R"({"radii":[1.5,2]})", "--coeffs", coeffs.string()});
  CHECK(r.code == 0);
  const json s = json::parse(r.out)["result"]["steps"][0];
  CHECK(s["N"] == 12);
  CHECK(s["M"] == 7);
  CHECK(s["d"] == 26);
  CHECK(s["disk_audit"]["exactly_one"] == 14);
  const std::string csv = slurp(coeffs);
  CHECK(csv.rfind("k,re,im,log_abs\n0,1,0,0\n12,1,0,0\n", 0) == 0);
  std::filesystem::remove(coeffs);

  const auto tf = tmp("targets.json");
  std::ofstream(tf) << R"({"targets": [{"radii": ["3/2", "2"]}]})";
  const Result f = run({"universal", "--steps", "1", "--targets", tf.string()});
  CHECK(f.code == 0);
  CHECK(body(f)["result"] == body(r)["result"]);
  std::filesystem::remove(tf);
}

TEST_CASE("random subcommand and raw trials") {
  const auto raw = tmp("raw.csv");
  const Result r = run({"random", "--ensemble", "bernoulli:0.5", "--n", "32", "--trials", "20", "--seed", "3", "--t-grid",
                        "0.9,1.1", "--raw", raw.string(), "--symmetry", "0.8"});
  CHECK(r.code == 0);
  const json j = json::parse(r.out);
  CHECK(j["result"]["phi_hat"].size() == 2);
  CHECK(j["result"].contains("symmetry"));
  std::istringstream lines(slurp(raw));
  std::string line;
  int count = 0;
  std::getline(lines, line);
  CHECK(line == "trial,ok,F(0.9),F(1.1),weyl1_re,weyl1_im");
  while (std::getline(lines, line)) ++count;
  CHECK(count == 20);
  std::filesystem::remove(raw);
}

TEST_CASE("reproducible output independent of worker count") {
  const std::vector<std::vector<std::string>> configs{
      {"random", "--ensemble", "gaussian_complex", "--n", "40", "--trials", "30", "--seed", "9"},
      {"gauge", "--family", "carlson:0.3:0.6", "--horizon", "1024"},
      {"universal", "--steps", "2"},
  };
  for (auto c : configs) {
    auto c1 = c, c4 = c;
    c1.insert(c1.end(), {"--workers", "1"});
    c4.insert(c4.end(), {"--workers", "4"});
    const json a = body(run(c1)), b = body(run(c4)), d = body(run(c));
    CHECK(a == b);
    CHECK(a == d);
    CHECK(!a["config"].contains("workers"));
  }
}

TEST_CASE("output files") {
  const auto path = tmp("zeros.csv");
  const Result r = run({"zeros", "--family", "geometric", "--n", "3", "--out", path.string()});
  CHECK(r.code == 0);
  CHECK(r.out.empty());
  CHECK(slurp(path) == "re,im,multiplicity\n-1,0,1\n0,1,1\n0,-1,1\ninf,inf,0\n");
  std::filesystem::remove(path);
  CHECK(run({"zeros", "--family", "geometric", "--n", "3", "--out", "/nonexistent/dir/x.csv"}).code == 1);
}

TEST_CASE("exit codes") {
  CHECK(run({"--help"}).code == 0);
  CHECK(run({"--version"}).out == std::string(kToolVersion) + "\n");
  CHECK(run({}).code == 1);
  CHECK(run({"frobnicate"}).code == 1);
  CHECK(run({"zeros", "--family", "nonsense"}).code == 1);
  CHECK(run({"zeros", "--n", "notanumber"}).code == 1);
  CHECK(run({"zeros", "--format", "xml"}).code == 1);
  CHECK(run({"gauge", "--horizon", "10"}).code == 1);
  CHECK(run({"random", "--ensemble", "bernoulli:2"}).code == 1);
  CHECK(run({"universal", "--targets", R"({"radii":[0.5]})"}).code == 1);
  const Result e = run({"zeros", "--family", "nonsense"});
  CHECK(e.err.find("error:") == 0);
}
