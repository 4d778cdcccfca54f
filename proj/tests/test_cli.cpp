#include <doctest.h>

#include <sys/wait.h>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "freehardy/cli.hpp"

using namespace freehardy;
using nlohmann::json;

namespace {

struct Run {
  int code;
  std::string out;
  std::string err;
};

Run run(std::vector<std::string> args) {
  args.insert(args.begin(), "freehardy-cli");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

json report(const Run& r) { return json::parse(r.out); }

int exit_status(const std::string& args) {
  const std::string cmd = std::string(FREEHARDY_CLI_PATH) + " " + args + " > /dev/null 2>&1";
  const int raw = std::system(cmd.c_str());
  return WIFEXITED(raw) ? WEXITSTATUS(raw) : -1;
}

}  // namespace

TEST_CASE("ce-test on the free shift") {
  const Run r = run({"ce-test", "--expr", "z1", "--d", "2", "--N", "8"});
  CHECK(r.code == kExitOk);
  const json j = report(r);
  CHECK(j.at("schema_version") == 1);
  CHECK(j.at("command") == "ce-test");
  CHECK(j.at("verdict") == "CE");
  CHECK(j.at("result").at("by_gleason").at("gap_norm").get<double>() <= 1e-8);
  CHECK(j.at("config").at("N") == 8);
}

TEST_CASE("cayley of zero is the constant one") {
  const Run r = run({"cayley", "--expr", "0", "--d", "1"});
  CHECK(r.code == kExitOk);
  const json terms = report(r).at("result").at("series").at("terms");
  REQUIRE(terms.size() == 1);
  CHECK(terms[0].at("word").empty());
  CHECK(terms[0].at("re")[0][0] == 1.0);
  CHECK(terms[0].at("im")[0][0] == 0.0);
}

TEST_CASE("herglotz-verify residual") {
  const Run r = run({"herglotz-verify", "--expr", "0.5*z1", "--d", "1", "--N", "20"});
  CHECK(r.code == kExitOk);
  CHECK(report(r).at("result").at("max_residual").get<double>() <= 1e-6);
}

TEST_CASE("reports are deterministic") {
  for (const auto& args : std::vector<std::vector<std::string>>{
           {"eval", "--expr", "0.3*z1*z2 - 0.2*z2", "--d", "2", "--seed", "7"},
           {"gns", "--expr", "0.5*z1", "--d", "2", "--N", "3"},
           {"kernel-gram", "--kernel", "dbr-right", "--expr", "0.4*z1*z2", "--d", "2"},
           {"realize", "--expr", "0.8*z1*z2", "--d", "2", "--N", "5"}}) {
    const Run a = run(args), b = run(args);
    CHECK(a.code == kExitOk);
    CHECK(a.out == b.out);
    CHECK_FALSE(a.out.empty());
  }
  const Run s1 = run({"eval", "--expr", "z1", "--d", "1", "--seed", "1"});
  const Run s2 = run({"eval", "--expr", "z1", "--d", "1", "--seed", "2"});
  CHECK(s1.out != s2.out);
}

TEST_CASE("every subcommand produces a report") {
  const std::vector<std::vector<std::string>> cases = {
      {"eval", "--expr", "z1", "--d", "1"},
      {"schur-check", "--expr", "0.5*z1", "--d", "2"},
      {"cayley", "--expr", "0.5*z1", "--d", "2", "--deg", "4"},
      {"cayley", "--direction", "herglotz-to-schur", "--expr", "1 + z1", "--d", "1", "--deg", "4"},
      {"moments", "--expr", "0.5*z1", "--d", "2", "--deg", "3"},
      {"herglotz-verify", "--expr", "0.5*z1", "--d", "2", "--N", "10"},
      {"gns", "--expr", "0.5*z1", "--d", "1", "--N", "4"},
      {"cuntz-check", "--expr", "z1", "--d", "1", "--N", "6"},
      {"gleason-gap", "--expr", "0.5*z1", "--d", "1", "--N", "6"},
      {"realize", "--expr", "z1", "--d", "1", "--N", "4"},
      {"transfer-eval", "--expr", "z1", "--d", "1", "--N", "4"},
      {"complete-column", "--expr", "0.6*z1", "--d", "2", "--N", "5"},
      {"kernel-gram", "--kernel", "herglotz", "--expr", "0.5*z1", "--d", "2"},
  };
  for (const auto& args : cases) {
    CAPTURE(args[0]);
    const Run r = run(args);
    CHECK(r.code != kExitError);
    const json j = report(r);
    CHECK(j.at("command") == args[0]);
    CHECK(j.contains("config"));
    CHECK(j.contains("result"));
    CHECK(j.at("status") == r.code);
  }
}

TEST_CASE("negative verdicts and errors") {
  const Run schur = run({"schur-check", "--expr", "1.5*z1", "--d", "1"});
  CHECK(schur.code == kExitNegative);
  CHECK(report(schur).at("verdict") == "not-schur");

  const Run obstruction = run({"complete-column", "--expr", "z1", "--d", "1"});
  CHECK(obstruction.code == kExitNegative);
  CHECK(report(obstruction).at("error").at("kind") == "ce-obstruction");

  const Run half = run({"ce-test", "--expr", "0.5*z1", "--d", "1"});
  CHECK(half.code == kExitNegative);
  CHECK(report(half).at("verdict") == "not CE");

  const Run bad = run({"eval", "--expr", "z1 +", "--d", "1"});
  CHECK(bad.code == kExitError);
  CHECK(bad.err.find("position 4") != std::string::npos);

  CHECK(run({"eval", "--expr", "z3", "--d", "2"}).code == kExitError);
  CHECK(run({"no-such-command"}).code == kExitError);
  CHECK(run({"eval", "--d", "1"}).code == kExitError);
}

TEST_CASE("csv output and --out") {
  const Run csv = run({"gleason-gap", "--expr", "0.9*z1", "--d", "1", "--N", "6", "--format", "csv"});
  CHECK(csv.code == kExitNegative);
  CHECK(csv.out.rfind("N,gap\n", 0) == 0);

  const auto path = std::filesystem::temp_directory_path() / "freehardy_cli_test.json";
  std::filesystem::remove(path);
  const Run written = run({"cayley", "--expr", "0.5*z1", "--d", "1", "--out", path.string()});
  CHECK(written.code == kExitOk);
  std::ifstream in(path);
  REQUIRE(in.good());
  CHECK(json::parse(in).at("command") == "cayley");
  std::filesystem::remove(path);
}

TEST_CASE("input file and colligation file") {
  const auto dir = std::filesystem::temp_directory_path();
  const auto series = dir / "freehardy_cli_series.txt";
  std::ofstream(series) << "0.5*z1*z2";
  const Run r = run({"eval", "--input", series.string(), "--d", "2"});
  CHECK(r.code == kExitOk);

  const Run realized = run({"realize", "--expr", "z1", "--d", "1", "--N", "4"});
  const auto coll = dir / "freehardy_cli_colligation.json";
  std::ofstream(coll) << report(realized).at("result").at("colligation").dump();
  const Run t = run({"transfer-eval", "--colligation", coll.string(), "--count", "2"});
  CHECK(t.code == kExitOk);
  CHECK(report(t).at("result").at("values").size() >= 2);
  std::filesystem::remove(series);
  std::filesystem::remove(coll);
}

TEST_CASE("binary exit codes") {
  CHECK(exit_status("cayley --expr 0 --d 1") == 0);
  CHECK(exit_status("schur-check --expr '1.5*z1' --d 1") == 2);
  CHECK(exit_status("complete-column --expr z1 --d 1") == 2);
  CHECK(exit_status("eval --expr 'z1 +' --d 1") == 1);
  CHECK(exit_status("--help") == 0);
}
