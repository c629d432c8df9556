#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <gtest/gtest.h>
#include <json.hpp>

#include "satnls/cli.hpp"
#include "satnls/config.hpp"
#include "satnls/error.hpp"

using namespace satnls;
namespace fs = std::filesystem;

namespace {

fs::path tmp_root() {
  const char* env = std::getenv("SATNLS_TEST_TMP");
  return env ? fs::path(env) : fs::temp_directory_path() / "satnls_cli_test";
}

struct Result {
  int code;
  std::string out, err;
};

Result run(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

fs::path write_file(const std::string& name, const std::string& body) {
  fs::create_directories(tmp_root());
  const auto p = tmp_root() / name;
  std::ofstream(p) << body;
  return p;
}

std::string body(const fs::path& p) {
  std::ifstream in(p);
  std::string line, s;
  while (std::getline(in, line))
    if (line.empty() || line[0] != '#') s += line + '\n';
  return s;
}

std::string first_line(const fs::path& p) {
  std::ifstream in(p);
  std::string line;
  std::getline(in, line);
  return line;
}

}  // namespace

TEST(Config, TomlAndJsonAgree) {
  const auto t = write_file("a.toml", "seed = 4\n[model]\nb = 0.4\nalpha = 1.2\n[grid]\nR = 30\nN = 1501\n"
                                      "[dynamics]\ndelta = [1e-3, 5e-4]\n");
  const auto j = write_file("a.json", R"({"seed": 4, "model": {"b": 0.4, "alpha": 1.2}, "grid": {"R": 30, "N": 1501},
                                         "dynamics": {"delta": [0.001, 0.0005]}})");
  const auto a = load_config(t.string()), b = load_config(j.string());
  EXPECT_EQ(a.model.b, 0.4);
  EXPECT_EQ(a.N, 1501u);
  EXPECT_EQ(a.deltas.size(), 2u);
  EXPECT_EQ(config_hash(a), config_hash(b));
  RunConfig c = a;
  c.seed = 5;
  EXPECT_NE(config_hash(a), config_hash(c));
  c = a;
  c.out_dir = "elsewhere";
  EXPECT_EQ(config_hash(a), config_hash(c));
}

TEST(Config, RejectsUnknownKeysAndBrokenInvariants) {
  EXPECT_THROW(load_config(write_file("u.toml", "[model]\nbeta = 1\n").string()), DomainError);
  EXPECT_THROW(load_config(write_file("n.toml", "[grid]\nN = 4000\n").string()), DomainError);
  EXPECT_THROW(load_config(write_file("w.toml", "[trace]\nlo = 0.9\nhi = 0.5\n").string()), DomainError);
  EXPECT_THROW(load_config(write_file("bad.toml", "[model\n").string()), DomainError);
}

TEST(Cli, ParameterBreachesExitTwo) {
  const auto out = (tmp_root() / "breach").string();
  auto r = run({"--config", write_file("b.toml", "[model]\nb = 1.2\n").string(), "--out", out, "audit"});
  EXPECT_EQ(r.code, 2);
  EXPECT_NE(r.err.find("(b ∈ (0,1))"), std::string::npos) << r.err;
  r = run({"--config", write_file("al.toml", "[model]\nb = 0.5\nalpha = 1.6\n").string(), "--out", out, "audit"});
  EXPECT_EQ(r.code, 2);
  EXPECT_NE(r.err.find("α < 2 − b"), std::string::npos) << r.err;
}

TEST(Cli, MissingPrerequisitesExitThree) {
  const auto out = (tmp_root() / "prereq").string();
  fs::remove_all(out);
  auto r = run({"--out", out, "simulate"});
  EXPECT_EQ(r.code, 3);
  EXPECT_NE(r.err.find("satnls trace"), std::string::npos) << r.err;
  r = run({"--out", out, "trace"});
  EXPECT_EQ(r.code, 3);
  EXPECT_NE(r.err.find("satnls lambda-inf"), std::string::npos) << r.err;
}

TEST(Cli, PipelineAndDeterminism) {
  const auto cfg = write_file("pipe.toml", "[trace]\npoints = 12\n[dynamics]\nT = 0.5\nlambda_fractions = [0.5]\n");
  const auto out = (tmp_root() / "pipe").string();
  fs::remove_all(out);
  const std::vector<std::string> base{"--config", cfg.string(), "--out", out, "--seed", "3"};
  auto cmd = [&](const std::string& c) {
    auto a = base;
    a.push_back(c);
    return run(a);
  };
  EXPECT_EQ(cmd("audit").code, 0);
  EXPECT_EQ(cmd("lambda-inf").code, 0);
  EXPECT_EQ(cmd("solve").code, 0);
  EXPECT_EQ(cmd("trace").code, 0);
  EXPECT_EQ(cmd("spectrum").code, 0);
  EXPECT_EQ(cmd("slope").code, 0);
  EXPECT_EQ(cmd("waveguide").code, 0);
  EXPECT_EQ(cmd("simulate").code, 0);

  fs::path dir;
  for (const auto& e : fs::directory_iterator(out)) dir = e.path();
  const auto spec = nlohmann::json::parse(std::ifstream(dir / "spectrum.json"));
  ASSERT_EQ(spec["points"].size(), 12u);
  for (const auto& p : spec["points"]) {
    EXPECT_TRUE(p["pass_S1"].get<bool>());
    EXPECT_TRUE(p["pass_S2"].get<bool>());
  }
  const std::string hash = dir.filename().string().substr(4);
  EXPECT_EQ(spec["config_hash"], hash);
  for (const char* f : {"curve.csv", "dispersion.csv", "wave.csv", "phi_inf.csv", "points/point-000.csv"})
    EXPECT_EQ(first_line(dir / f).rfind("# config_hash=" + hash, 0), 0u) << f;

  const std::string curve = body(dir / "curve.csv"), disp = body(dir / "dispersion.csv");
  fs::path orbit;
  for (const auto& e : fs::directory_iterator(dir))
    if (e.path().filename().string().rfind("orbit-", 0) == 0) orbit = e.path();
  ASSERT_FALSE(orbit.empty());
  const std::string orb = body(orbit);
  EXPECT_EQ(cmd("trace").code, 0);
  EXPECT_EQ(cmd("waveguide").code, 0);
  EXPECT_EQ(cmd("simulate").code, 0);
  EXPECT_EQ(body(dir / "curve.csv"), curve);
  EXPECT_EQ(body(dir / "dispersion.csv"), disp);
  EXPECT_EQ(body(orbit), orb);
}
