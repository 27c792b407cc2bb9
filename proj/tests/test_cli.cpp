#include <doctest.h>

#include <array>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>
#include <sys/wait.h>

#include <json.hpp>

namespace fs = std::filesystem;

namespace {

struct Run {
  int code = -1;
  std::string out;
};

Run run(const std::string& args) {
  const std::string cmd = std::string(SCLAB_BINARY) + " " + args + " 2>&1";
  Run r;
  FILE* pipe = popen(cmd.c_str(), "r");
  REQUIRE(pipe != nullptr);
  std::array<char, 4096> buf{};
  std::size_t n = 0;
  while ((n = fread(buf.data(), 1, buf.size(), pipe)) > 0) r.out.append(buf.data(), n);
  const int status = pclose(pipe);
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

fs::path scratch() {
  const auto dir = fs::temp_directory_path() / "sclab_cli_test";
  fs::create_directories(dir);
  return dir;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  return {std::istreambuf_iterator<char>(in), {}};
}

}  // namespace

TEST_CASE("version and help") {
  CHECK(run("--version").out.find("0.1.0") != std::string::npos);
  CHECK(run("--help").code == 0);
  CHECK(run("no-such-command").code == 1);
}

TEST_CASE("resolvent on the explosive chain") {
  const auto r = run("resolvent --family birth_death --alpha 3 --radii 200,400");
  REQUIRE(r.code == 0);
  const auto j = nlohmann::json::parse(r.out);
  CHECK(j["command"] == "resolvent");
  CHECK(j["verdict"] == "incomplete");
  CHECK(j["deficiency"][1].get<double>() > 0.3);
  CHECK(j["input"]["fingerprint"].get<std::string>().rfind("fnv1a64:", 0) == 0);
}

TEST_CASE("generated graph with its degree metric is adapted") {
  const auto dir = scratch();
  const auto g = dir / "g.txt", m = dir / "m.txt";
  REQUIRE(run("family gen --kind random_graph --param n=25 --param p=0.25 --param seed=3 --out " +
              g.string() + " --metric-out " + m.string())
              .code == 0);
  const auto r = run("check-adapted --graph " + g.string() + " --metric " + m.string());
  REQUIRE(r.code == 0);
  CHECK(nlohmann::json::parse(r.out)["adaptedness"]["verdict"] == "adapted");
}

TEST_CASE("reports are byte-identical across runs") {
  const auto a = run("simulate --family birth_death --alpha 3 --trajectories 30 --seed 9");
  const auto b = run("simulate --family birth_death --alpha 3 --trajectories 30 --seed 9");
  CHECK(a.code == 0);
  CHECK(a.out == b.out);
  const auto dir = scratch();
  CHECK(run("volume --family lattice2d --r-max 8 --steps 8 --out " + (dir / "v1.json").string()).code == 0);
  CHECK(run("volume --family lattice2d --r-max 8 --steps 8 --out " + (dir / "v2.json").string()).code == 0);
  CHECK(slurp(dir / "v1.json") == slurp(dir / "v2.json"));
}

TEST_CASE("malformed input exits 1 with the line") {
  const auto bad = scratch() / "bad.txt";
  std::ofstream(bad) << "vertex 0 1\n# note\nedge 0 1 x\n";
  const auto r = run("check-adapted --graph " + bad.string());
  CHECK(r.code == 1);
  CHECK(r.out.find("line 3") != std::string::npos);
  CHECK(run("resolvent --family birth_death --lambda -1").code == 1);
}

TEST_CASE("verify-all passes") {
  const auto r = run("verify-all");
  CHECK(r.code == 0);
  const auto j = nlohmann::json::parse(r.out);
  for (const auto& s : j["suites"]) CHECK(s["passed"] == true);
}

TEST_CASE("metric-verify reports the identities") {
  const auto r = run("metric-verify --family anti_tree --alpha 2 --radius 3");
  CHECK(r.code == 0);
  const auto j = nlohmann::json::parse(r.out);
  CHECK(j["identity_residuals"]["max"].get<double>() <= 1e-12);
  CHECK(j["comparison_lemma"]["worst_distance_margin"].get<double>() >= -1e-12);
}
