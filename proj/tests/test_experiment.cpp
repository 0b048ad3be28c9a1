#include <doctest.h>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <sys/wait.h>

#include "infoperc/error.hpp"
#include "infoperc/experiment.hpp"

using namespace infoperc;
using nlohmann::json;
namespace fs = std::filesystem;

namespace {

fs::path scratch_dir(const std::string& name) {
  const auto dir = fs::temp_directory_path() / ("infoperc_test_" + name);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

int run_cli(const std::string& args) {
  const std::string cmd = std::string(INFOPERC_CLI_PATH) + " " + args + " >/dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

fs::path write_json(const fs::path& dir, const std::string& name, const json& j) {
  const auto file = dir / name;
  std::ofstream(file) << j.dump(2);
  return file;
}

json magnetization_config() {
  return {{"schema_version", 1},
          {"kind", "magnetization"},
          {"graph", {{"family", "cycle"}, {"n", 100}}},
          {"beta", 0.0},
          {"times", {{"start", 0.0}, {"stop", 2.0}, {"step", 0.5}}},
          {"replicas", 2000},
          {"seed", 7}};
}

}  // namespace

TEST_CASE("config parsing and validation") {
  const auto c = parse_config(magnetization_config());
  CHECK(c.kind == ExperimentKind::Magnetization);
  CHECK(c.graph.n == 100);
  CHECK(c.times == std::vector<double>{0.0, 0.5, 1.0, 1.5, 2.0});
  CHECK(c.seed == 7);

  auto j = magnetization_config();
  j["color"] = "blue";
  CHECK_THROWS_AS(parse_config(j), ConfigError);
  j = magnetization_config();
  j["beta"] = "hot";
  CHECK_THROWS_AS(parse_config(j), ConfigError);
  j = magnetization_config();
  j.erase("schema_version");
  CHECK_THROWS_AS(parse_config(j), ConfigError);
  j = magnetization_config();
  j["schema_version"] = 2;
  CHECK_THROWS_AS(parse_config(j), ConfigError);
  j = magnetization_config();
  j["graph"]["n"] = 2;
  CHECK_THROWS_AS(parse_config(j), ConfigError);
  j = magnetization_config();
  j["times"] = json::array({1.0, 0.5});
  CHECK_THROWS_AS(parse_config(j), ConfigError);
  j = magnetization_config();
  j["kind"] = "teleport";
  CHECK_THROWS_AS(parse_config(j), ConfigError);
  j = magnetization_config();
  j["graph"] = {{"family", "explicit"}, {"n", 3}, {"edges", {{0, 1}, {1, 1}}}};
  CHECK_THROWS_AS(parse_config(j), ConfigError);
  j["graph"] = {{"family", "explicit"}, {"n", 3}, {"edges", {{0, 1}, {1, 2}}}};
  CHECK(parse_config(j).graph.build().edge_count() == 2);
}

TEST_CASE("config hash") {
  auto a = parse_config(magnetization_config());
  auto b = a;
  b.workers = 4;
  b.out_dir = "elsewhere";
  CHECK(config_hash(a) == config_hash(b));
  CHECK(config_hash(a).size() == 16);
  b.seed = 8;
  CHECK(config_hash(a) != config_hash(b));
  CHECK(parse_config(a.to_json()).to_json() == a.to_json());
}

TEST_CASE("magnetization experiment reproduces exp(-t) and replays exactly") {
  auto c = parse_config(magnetization_config());
  c.workers = 1;
  const auto rec = run(c);
  const auto& t = rec.table("magnetization");
  REQUIRE(t.rows.size() == 5);
  for (const auto& r : t.rows) CHECK(std::abs(r[1] - std::exp(-r[0])) <= 3.0 * r[2] + 1e-15);
  c.workers = 3;
  const auto again = run(c);
  CHECK(again.table("magnetization").rows == t.rows);
  CHECK(again.config_hash == rec.config_hash);
  const auto plot = emit_plot_data(rec);
  REQUIRE(plot.size() == 5);
  CHECK(plot[0].series == "m_t");
  CHECK(plot[2].x == 1.0);
}

TEST_CASE("other experiment kinds") {
  json tv = {{"schema_version", 1}, {"kind", "tv"}, {"graph", {{"family", "cycle"}, {"n", 6}}},
             {"beta", 0.2},        {"times", {0.0, 1.0, 2.0}}, {"mode", "exact"}};
  const auto rec = run(parse_config(tv));
  CHECK(rec.table("tv_profile").rows.size() == 3);
  CHECK(emit_plot_data(rec).front().series == "tv");

  json mp = {{"schema_version", 1}, {"kind", "mp-check"}, {"sites", 3}, {"trials", 50}, {"seed", 2}};
  const auto m = run(parse_config(mp)).table("mp_check").rows.at(0);
  CHECK(m[2] == 0.0);
  CHECK(m[3] == 7.0);
  CHECK(m[4] == 7.0);

  json cl = {{"schema_version", 1}, {"kind", "clusters"}, {"graph", {{"family", "cycle"}, {"n", 16}}},
             {"beta", 0.2},        {"t_star", 2.0},        {"replicas", 3}};
  const auto crec = run(parse_config(cl));
  CHECK(crec.table("cluster_summary").rows.size() == 3);
  std::size_t roots = 0;
  for (const auto& line : crec.cluster_lines) roots += line.at("roots").size();
  CHECK(roots == 48);
  const auto hist = emit_plot_data(crec);
  double clusters = 0.0;
  for (const auto& p : hist) clusters += p.y;
  CHECK(clusters == double(crec.cluster_lines.size()));

  json zn = {{"schema_version", 1}, {"kind", "zn"}, {"graph", {{"family", "cycle"}, {"n", 64}}},
             {"beta", 0.2},        {"t_star", 2.0},  {"replicas", 50}};
  const auto z = run(parse_config(zn)).table("zn_summary").rows.at(0);
  CHECK(z[6] == doctest::Approx(std::exp(-(1.0 - std::tanh(0.4)) * 2.0)));
}

TEST_CASE("command line exit codes and outputs") {
  const auto dir = scratch_dir("cli");
  const auto good = write_json(dir, "mp.json", {{"schema_version", 1}, {"kind", "mp-check"}, {"trials", 20}});
  CHECK(run_cli("mp-check --config " + good.string() + " --out " + (dir / "ok").string() + " --seed 3") == 0);
  CHECK(fs::exists(dir / "ok" / "manifest.txt"));
  CHECK(fs::exists(dir / "ok" / "mp_check.csv"));
  std::ifstream manifest(dir / "ok" / "manifest.txt");
  std::stringstream text;
  text << manifest.rdbuf();
  CHECK(text.str().find("seed: 3") != std::string::npos);
  CHECK(text.str().find("config_hash: ") != std::string::npos);

  const auto bad = write_json(dir, "bad.json", {{"schema_version", 1}, {"kind", "mp-check"}, {"sites", 9}});
  CHECK(run_cli("mp-check --config " + bad.string() + " --out " + (dir / "bad").string()) == 2);
  CHECK_FALSE(fs::exists(dir / "bad"));
  std::ofstream(dir / "garbage.json") << "{ not json";
  CHECK(run_cli("mp-check --config " + (dir / "garbage.json").string() + " --out " + (dir / "g").string()) == 2);
  CHECK_FALSE(fs::exists(dir / "g"));
  CHECK(run_cli("tv --config " + good.string() + " --out " + (dir / "mismatch").string()) == 2);

  const auto cap = write_json(dir, "cap.json",
                              {{"schema_version", 1}, {"kind", "tv"}, {"graph", {{"family", "cycle"}, {"n", 13}}},
                               {"beta", 0.1}, {"times", {1.0}}, {"mode", "exact"}});
  CHECK(run_cli("tv --config " + cap.string() + " --out " + (dir / "cap").string()) == 3);

  const auto budget = write_json(dir, "budget.json",
                                 {{"schema_version", 1}, {"kind", "tm"}, {"graph", {{"family", "cycle"}, {"n", 100}}},
                                  {"beta", 0.0}, {"precision", 1e-4}, {"replicas", 16}, {"replica_budget", 64}});
  CHECK(run_cli("tm --config " + budget.string() + " --out " + (dir / "budget").string()) == 4);

  const auto hot = write_json(dir, "hot.json",
                              {{"schema_version", 1}, {"kind", "clusters"}, {"graph", {{"family", "torus"}, {"side", 6}, {"dim", 2}}},
                               {"beta", 1.5}, {"t_star", 20.0}, {"replicas", 1}, {"length_cap", 50.0}});
  CHECK(run_cli("clusters --config " + hot.string() + " --out " + (dir / "hot").string()) == 5);

  const auto zn = write_json(dir, "zn.json", {{"schema_version", 1}, {"kind", "zn"}});
  CHECK(run_cli("zn --config " + zn.string() + " --n 32 --beta 0.2 --tstar 1.5 --replicas 20 --out " +
                (dir / "zn").string()) == 0);
  CHECK(fs::exists(dir / "zn" / "zn_summary.csv"));
  CHECK(fs::exists(dir / "zn" / "clusters.jsonl"));
  fs::remove_all(dir);
}
