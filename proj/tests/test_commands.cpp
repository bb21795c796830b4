#include "mgdesign/commands.hpp"
#include "mgdesign/trace_io.hpp"
#include "support.hpp"

#include <doctest.h>
#include <json.hpp>

#include <filesystem>
#include <fstream>
#include <sstream>

using namespace mgdesign;
namespace fs = std::filesystem;

namespace {

const fs::path kSource = MGDESIGN_SOURCE_DIR;

struct TempDir {
  fs::path path;
  explicit TempDir(const std::string& tag) : path(fs::temp_directory_path() / ("mgdesign_" + tag)) {
    fs::remove_all(path);
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
};

std::string slurp(const fs::path& p) {
  std::ifstream f(p, std::ios::binary);
  std::ostringstream s;
  s << f.rdbuf();
  return s.str();
}

std::vector<std::string> lines_of(const std::string& text) {
  std::vector<std::string> out;
  std::istringstream in(text);
  for (std::string line; std::getline(in, line);) out.push_back(line);
  return out;
}

// The small scenario with a cheaper solver, written next to the outputs.
fs::path quick_scenario(const fs::path& dir, std::size_t storage_count = 1) {
  auto j = nlohmann::json::parse(slurp(kSource / "scenarios/small.json"));
  j["solver"] = {{"n_nom", 20}, {"n_max", 80}, {"t_max", 15}};
  j["horizon"] = 4;
  if (storage_count > 1) {
    auto mg = j["microgrids"][0];
    mg.erase("id");
    j["microgrids"] = nlohmann::json::array();
    for (std::size_t i = 0; i < storage_count; ++i) j["microgrids"].push_back(mg);
    j["profiles"]["synthetic"]["base_mean"] = std::vector<double>(storage_count, 100.0);
    j["profiles"]["synthetic"]["res_peak"] = std::vector<double>(storage_count, 50.0);
    j["profiles"]["synthetic"]["base_amplitude"] = std::vector<double>(storage_count, 0.3);
    j["profiles"]["synthetic"]["res_floor"] = std::vector<double>(storage_count, 2.0);
  }
  const auto path = dir / "scenario.json";
  std::ofstream(path) << j.dump(2);
  return path;
}

}  // namespace

TEST_CASE("trace header") {
  CHECK(trace_header(reference_scenario()) ==
        "k,lambda,p_g_1,p_d_1,v_1,s_1,p_g_2,p_d_2,v_2,s_2,p_g_3,p_d_3,v_3,U_d,U_g,S_total,U_c,archive_size,fallback");
  CHECK(front_file_name(7) == "front_k007.jsonl");
  CHECK(format_number(0.1) == "0.1");
  CHECK(format_number(250) == "250");
}

TEST_CASE("simulate writes reproducible outputs") {
  TempDir tmp("cmd_sim");
  RunManifest m;
  m.scenario = quick_scenario(tmp.path);
  m.dump_front = true;
  m.seed = 5;
  std::ostringstream out, err;

  m.output_dir = tmp.path / "a";
  REQUIRE(cmd_simulate(m, out, err) == 0);
  m.output_dir = tmp.path / "b";
  REQUIRE(cmd_simulate(m, out, err) == 0);
  CHECK(err.str().empty());

  for (const char* name : {"trace.csv", "run.json", "front_k000.jsonl", "front_k003.jsonl"}) {
    CAPTURE(name);
    const auto a = slurp(tmp.path / "a" / name);
    CHECK_FALSE(a.empty());
    CHECK(a == slurp(tmp.path / "b" / name));
  }

  const auto trace = lines_of(slurp(tmp.path / "a/trace.csv"));
  REQUIRE(trace.size() == 5);
  CHECK(trace[0] == "k,lambda,p_g_1,p_d_1,v_1,s_1,U_d,U_g,S_total,U_c,archive_size,fallback");
  CHECK(trace[1].rfind("0,", 0) == 0);

  const auto meta = nlohmann::json::parse(slurp(tmp.path / "a/run.json"));
  CHECK(meta["seed"] == 5);
  CHECK(meta["horizon"] == 4);
  CHECK(meta["config_hash"].get<std::string>().size() == 16);

  const auto front = lines_of(slurp(tmp.path / "a/front_k002.jsonl"));
  REQUIRE_FALSE(front.empty());
  int knees = 0;
  for (std::size_t i = 0; i < front.size(); ++i) {
    const auto j = nlohmann::json::parse(front[i]);
    CHECK(j["k"] == 2);
    CHECK(j["entry"] == i);
    CHECK(j["antibody"].size() == 2);
    CHECK(j["objectives"].size() == 4);
    CHECK(j["objectives"][3] == 0.0);
    knees += j["knee"].get<bool>() ? 1 : 0;
  }
  CHECK(knees == 1);

  m.seed = 6;
  m.output_dir = tmp.path / "c";
  REQUIRE(cmd_simulate(m, out, err) == 0);
  CHECK(slurp(tmp.path / "c/trace.csv") != slurp(tmp.path / "a/trace.csv"));
}

TEST_CASE("horizon override") {
  TempDir tmp("cmd_horizon");
  RunManifest m;
  m.scenario = quick_scenario(tmp.path);
  m.output_dir = tmp.path / "out";
  std::ostringstream out, err;

  m.horizon = 0;
  CHECK(cmd_simulate(m, out, err) != 0);
  CHECK(err.str().find("error:") != std::string::npos);
  CHECK_FALSE(fs::exists(m.output_dir / "trace.csv"));

  m.horizon = 2;
  REQUIRE(cmd_simulate(m, out, err) == 0);
  CHECK(lines_of(slurp(m.output_dir / "trace.csv")).size() == 3);
}

TEST_CASE("bad scenario path or content") {
  TempDir tmp("cmd_bad");
  std::ofstream(tmp.path / "broken.json") << "{\"alpha\": 0.5}";
  RunManifest m;
  m.scenario = tmp.path / "broken.json";
  m.output_dir = tmp.path / "out";
  std::ostringstream out, err;
  CHECK(cmd_simulate(m, out, err) == 2);
  CHECK(cmd_verify(m, out, err) == 2);
  m.scenario = tmp.path / "absent.json";
  CHECK(cmd_solve(m, out, err) == 2);
}

TEST_CASE("solve writes one front file") {
  TempDir tmp("cmd_solve");
  RunManifest m;
  m.scenario = quick_scenario(tmp.path);
  m.output_dir = tmp.path / "out";
  m.step = 3;
  std::ostringstream out, err;
  REQUIRE(cmd_solve(m, out, err) == 0);
  CHECK(fs::exists(m.output_dir / "front_k003.jsonl"));
  m.step = 4;
  CHECK(cmd_solve(m, out, err) == 2);
}

TEST_CASE("verify skips when the grid exceeds its budget") {
  TempDir tmp("cmd_skip");
  RunManifest m;
  m.scenario = quick_scenario(tmp.path, 4);
  std::ostringstream out, err;
  CHECK(cmd_verify(m, out, err) == 0);
  CHECK(out.str().find("front-equivalence: SKIP") != std::string::npos);
  CHECK(out.str().find("moia-coverage: SKIP") != std::string::npos);
}

TEST_CASE("verify passes the equivalence check on the small scenario") {
  TempDir tmp("cmd_verify");
  RunManifest m;
  m.scenario = quick_scenario(tmp.path);
  std::ostringstream out, err;
  cmd_verify(m, out, err);
  CHECK(out.str().find("front-equivalence: PASS") != std::string::npos);
  CHECK(out.str().find("moia-coverage: ") != std::string::npos);
}
