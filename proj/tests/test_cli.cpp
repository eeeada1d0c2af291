#include <doctest.h>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "causalprobe/serialize.hpp"

using namespace causalprobe;
namespace fs = std::filesystem;

namespace {

struct RunResult {
  int exit_code = -1;
  std::string output;  // stdout + stderr
};

RunResult run_cli(const std::string& args) {
  static int counter = 0;
  fs::path tmp = fs::temp_directory_path() /
                 ("causalprobe_cli_" + std::to_string(::getpid()) + "_" +
                  std::to_string(counter++) + ".out");
  std::string cmd = std::string(CAUSALPROBE_BIN_PATH) + " " + args + " > " +
                    tmp.string() + " 2>&1";
  int status = std::system(cmd.c_str());
  RunResult r;
  r.exit_code = WEXITSTATUS(status);
  std::ifstream in(tmp);
  std::ostringstream ss;
  ss << in.rdbuf();
  r.output = ss.str();
  fs::remove(tmp);
  return r;
}

fs::path scenario_dir() { return fs::path(CAUSALPROBE_SCENARIO_DIR); }

fs::path fresh_dir(const std::string& tag) {
  fs::path dir = fs::temp_directory_path() /
                 ("causalprobe_" + tag + "_" + std::to_string(::getpid()));
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

}  // namespace

TEST_CASE("eval prints the evaluated world, with and without do()") {
  fs::path hiker = scenario_dir() / "hiker.json";
  RunResult plain = run_cli("eval " + hiker.string() + " --set A=true");
  CHECK(plain.exit_code == 0);
  CHECK(plain.output.find("C") != std::string::npos);
  CHECK(plain.output.find("true") != std::string::npos);

  RunResult forced = run_cli("eval " + hiker.string() +
                             " --set A=true --do B=false --format json");
  CHECK(forced.exit_code == 0);
  auto j = ordered_json::parse(forced.output);
  CHECK(j["result"]["world"]["C"] == ordered_json(false));
}

TEST_CASE("malformed files exit nonzero with a diagnostic") {
  fs::path dir = fresh_dir("badfile");
  fs::path bad = dir / "broken.json";
  write_text_file(bad.string(), "{not json");
  RunResult r = run_cli("eval " + bad.string() + " --set A=true");
  CHECK(r.exit_code == 1);
  CHECK(r.output.find("error") != std::string::npos);
}

TEST_CASE("depend reports the hiker end-to-end failure") {
  fs::path hiker = scenario_dir() / "hiker.json";
  RunResult r = run_cli("depend " + hiker.string() +
                        " --cause A --effect C --format json");
  CHECK(r.exit_code == 0);
  auto j = ordered_json::parse(r.output);
  CHECK(j["result"]["holds"] == ordered_json(false));
  CHECK(j["result"]["condition_i"] == ordered_json(true));

  RunResult held = run_cli("depend " + hiker.string() +
                           " --cause B --effect C --format json");
  CHECK(ordered_json::parse(held.output)["result"]["holds"] ==
        ordered_json(true));
}

TEST_CASE("overdet finds the rock pair") {
  fs::path rocks = scenario_dir() / "rocks.json";
  RunResult r = run_cli("overdet " + rocks.string() +
                        " --effect B --kmax 2 --format json");
  CHECK(r.exit_code == 0);
  auto j = ordered_json::parse(r.output);
  REQUIRE(j["result"]["minimal_sets"].size() == 1);
  CHECK(j["result"]["minimal_sets"][0]["nodes"] ==
        ordered_json::array({"A1", "A2"}));
}

TEST_CASE("preempt walks the rounds on the preemption scenario") {
  fs::path prem = scenario_dir() / "preemption.json";
  RunResult r = run_cli("preempt " + prem.string() +
                        " --effect B --epsilon 0.25 --format json");
  CHECK(r.exit_code == 0);
  auto j = ordered_json::parse(r.output);
  REQUIRE(j["result"]["rounds"].size() == 3);
  CHECK(j["result"]["rounds"][0]["discovered"] == ordered_json::array({"A1"}));
  CHECK(j["result"]["rounds"][1]["discovered"] == ordered_json::array({"A2"}));
}

TEST_CASE("transitivity finds the billiards witness") {
  fs::path billiards = scenario_dir() / "billiards.json";
  RunResult r = run_cli("transitivity " + billiards.string() +
                        " --a A --b B --c C --search --format json");
  CHECK(r.exit_code == 0);
  auto j = ordered_json::parse(r.output);
  CHECK(j["result"]["verdict"] == ordered_json("transitive"));
  CHECK(j["result"].contains("witness"));

  RunResult table = run_cli("transitivity " + billiards.string() +
                            " --a A --b B --c C --search");
  CHECK(table.output.find("condition") != std::string::npos);
}

TEST_CASE("gen + circuit pipeline reproduces the set-search annotation") {
  fs::path dir = fresh_dir("pipeline");
  RunResult gen = run_cli("gen overdetermined " + dir.string());
  CHECK(gen.exit_code == 0);
  CHECK(fs::exists(dir / "overdetermined_net.json"));
  CHECK(fs::exists(dir / "overdetermined_context.json"));
  CHECK(fs::exists(dir / "overdetermined_scenario.json"));

  RunResult circuit = run_cli(
      "circuit " + (dir / "overdetermined_net.json").string() + " " +
      (dir / "overdetermined_context.json").string() +
      " --set-search 2 --out " + (dir / "circuit").string());
  CHECK(circuit.exit_code == 0);
  CHECK(fs::exists(dir / "circuit.json"));
  CHECK(fs::exists(dir / "circuit.dot"));
  CHECK(fs::exists(dir / "circuit_nodes.csv"));
  CHECK(fs::exists(dir / "circuit_edges.csv"));
  CHECK(circuit.output.find("faithfulness") != std::string::npos);

  auto j = ordered_json::parse(read_text_file((dir / "circuit.json").string()));
  bool found_a1 = false;
  for (const auto& node : j["nodes"])
    if (node["name"] == "x0" && node["provenance"] == "set-search")
      found_a1 = true;
  CHECK(found_a1);
}

TEST_CASE("circuit --expand adds the marked input on the nontransitive net") {
  fs::path dir = fresh_dir("expand");
  RunResult gen = run_cli("gen nontransitive " + dir.string());
  CHECK(gen.exit_code == 0);

  RunResult circuit = run_cli(
      "circuit " + (dir / "nontransitive_net.json").string() + " " +
      (dir / "nontransitive_context.json").string() + " --expand n0_0 --out " +
      (dir / "c").string());
  CHECK(circuit.exit_code == 0);
  auto j = ordered_json::parse(read_text_file((dir / "c.json").string()));
  bool expanded_a = false;
  for (const auto& node : j["nodes"])
    if (node["name"] == "x0" && node["provenance"] == "local-expansion")
      expanded_a = true;
  CHECK(expanded_a);
}

TEST_CASE("ie-compare tabulates the three estimators") {
  fs::path dir = fresh_dir("iecompare");
  run_cli("gen overdetermined " + dir.string());
  RunResult r = run_cli("ie-compare " +
                        (dir / "overdetermined_net.json").string() + " " +
                        (dir / "overdetermined_context.json").string() +
                        " --steps 16 --format csv");
  CHECK(r.exit_code == 0);
  CHECK(r.output.find("node,exact,linear,ig(16)") != std::string::npos);
  CHECK(r.output.find("x0,") != std::string::npos);
}

TEST_CASE("depend --chain prints the stepwise hiker chain") {
  fs::path hiker = scenario_dir() / "hiker.json";
  RunResult r = run_cli("depend " + hiker.string() +
                        " --cause A --effect C --chain --format json");
  CHECK(r.exit_code == 0);
  auto j = ordered_json::parse(r.output);
  CHECK(j["result"]["chain_found"] == ordered_json(true));
  CHECK(j["result"]["chain"] == ordered_json::array({"A", "B", "C"}));
}

TEST_CASE("transitivity --witness evaluates the supplied tuple") {
  fs::path hiker = scenario_dir() / "hiker.json";
  RunResult r = run_cli("transitivity " + hiker.string() +
                        " --a A --b B --c C "
                        "--witness true,false,true,false,true,false "
                        "--format json");
  CHECK(r.exit_code == 0);
  auto j = ordered_json::parse(r.output);
  CHECK(j["result"]["verdict"] == ordered_json("not-established"));
  auto conditions = j["result"]["conditions"];
  REQUIRE(conditions.size() == 5);
  CHECK(conditions[3] == ordered_json(true));
  CHECK(conditions[4] == ordered_json(false));  // the hiker failure point
}

TEST_CASE("transitivity --sufficient reports the bottleneck bypass") {
  fs::path hiker = scenario_dir() / "hiker.json";
  RunResult r = run_cli("transitivity " + hiker.string() +
                        " --a A --b B --c C --sufficient --format json");
  CHECK(r.exit_code == 0);
  auto j = ordered_json::parse(r.output);
  CHECK(j["result"]["conditions"][0] == ordered_json(true));
  CHECK(j["result"]["conditions"][1] == ordered_json(false));
}

TEST_CASE("export converts a circuit JSON to DOT") {
  fs::path dir = fresh_dir("export");
  run_cli("gen nontransitive " + dir.string());
  run_cli("circuit " + (dir / "nontransitive_net.json").string() + " " +
          (dir / "nontransitive_context.json").string() + " --out " +
          (dir / "c").string());
  RunResult dot = run_cli("export " + (dir / "c.json").string() +
                          " --format dot");
  CHECK(dot.exit_code == 0);
  CHECK(dot.output.rfind("digraph", 0) == 0);

  // JSON re-export round-trips byte-identically.
  RunResult json = run_cli("export " + (dir / "c.json").string() +
                           " --format json");
  CHECK(json.output == read_text_file((dir / "c.json").string()));
}

TEST_CASE("unknown generator lists the valid names") {
  fs::path dir = fresh_dir("badgen");
  RunResult r = run_cli("gen frobnicate " + dir.string());
  CHECK(r.exit_code == 1);
  CHECK(r.output.find("overdetermined") != std::string::npos);
  CHECK(r.output.find("succession") != std::string::npos);
}

TEST_CASE("identical command lines produce byte-identical reports") {
  fs::path hiker = scenario_dir() / "hiker.json";
  std::string cmd = "depend " + hiker.string() +
                    " --cause A --effect C --format json --no-timestamp";
  RunResult a = run_cli(cmd);
  RunResult b = run_cli(cmd);
  CHECK(a.exit_code == 0);
  CHECK(a.output == b.output);
  // Reports embed the resolved configuration.
  auto j = ordered_json::parse(a.output);
  CHECK(j.contains("config"));
  CHECK(j["config"]["cause"] == ordered_json("A"));
}

TEST_CASE("usage errors exit 1, caps exit 2") {
  RunResult usage = run_cli("depend");
  CHECK(usage.exit_code == 1);

  // 22 candidates at k_max 22 blows the 2^20 subset cap.
  fs::path dir = fresh_dir("cap");
  ordered_json j;
  j["variables"] = ordered_json::array();
  std::string expr;
  for (int i = 0; i < 22; ++i) {
    std::string name = "u" + std::to_string(i);
    j["variables"].push_back({{"name", name}, {"domain", "bool"}});
    expr += (i ? " or " : "") + name;
  }
  j["variables"].push_back({{"name", "B"}, {"domain", "bool"}});
  j["equations"] = ordered_json::array();
  j["equations"].push_back({{"target", "B"}, {"expr", expr}});
  ordered_json ctx = ordered_json::object();
  for (int i = 0; i < 22; ++i) ctx["u" + std::to_string(i)] = true;
  j["context"] = ctx;
  fs::path big = dir / "big.json";
  write_text_file(big.string(), j.dump(2));
  RunResult cap = run_cli("overdet " + big.string() +
                          " --effect B --kmax 22 --epsilon 0.5");
  CHECK(cap.exit_code == 2);
}
