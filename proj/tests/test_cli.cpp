#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "fincon/cli.hpp"
#include "fincon/json_io.hpp"

namespace fs = std::filesystem;

namespace {

const fs::path kData = FINCON_TEST_DATA_DIR;
const fs::path kGolden = FINCON_TEST_GOLDEN_DIR;

struct Run {
  int code = 0;
  std::string out;
  std::string err;
};

Run run(std::vector<std::string> args) {
  args.insert(args.begin(), "fincon");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  Run r;
  r.code = fincon::cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
  r.out = out.str();
  r.err = err.str();
  return r;
}

std::string data(const std::string& name) { return (kData / name).string(); }

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// Compares the JSON printed by a command with a checked-in golden file.
// FINCON_UPDATE_GOLDEN=1 rewrites the golden instead.
void check_golden(const std::string& name, std::vector<std::string> args) {
  args.push_back("--json");
  const Run r = run(args);
  REQUIRE(r.code == 0);
  const fs::path path = kGolden / (name + ".json");
  if (std::getenv("FINCON_UPDATE_GOLDEN")) {
    std::ofstream(path, std::ios::binary) << r.out;
    return;
  }
  REQUIRE(fs::exists(path));
  CHECK(r.out == slurp(path));
}

fincon::Json json_of(std::vector<std::string> args) {
  args.push_back("--json");
  const Run r = run(args);
  REQUIRE(r.code == 0);
  return fincon::Json::parse(r.out);
}

}  // namespace

TEST_CASE("decide on C5") {
  const Run r = run({"decide", data("c5.txt"), "--form", "ms"});
  CHECK(r.code == 0);
  CHECK(r.out.find("NoFiniteConvergence") != std::string::npos);
  const auto j = json_of({"decide", data("c5.txt")});
  CHECK(j["schema_version"] == 1);
  CHECK(j["verdict"]["status"] == "NoFiniteConvergence");
}

TEST_CASE("alpha on K5") {
  const auto j = json_of({"alpha", data("k5.col")});
  CHECK(j["alpha"] == 1);
  const auto o = json_of({"alpha", data("k5.col"), "--oracle"});
  CHECK(o["oracle"]["alpha"] == 1);
}

TEST_CASE("report on C4") {
  const auto j = json_of({"report", data("c4.txt"), "--rmax", "4"});
  CHECK(j["verdict"]["status"] == "FiniteConvergence");
  CHECK(j["numerics"]["min_attaining_level"] == 3);
  CHECK(j["consistency"]["consistent"] == true);
  CHECK(j["numerics"]["levels"].size() == 3);
}

TEST_CASE("report on C5 is consistent and never attains") {
  const auto j = json_of({"report", data("c5.txt"), "--rmax", "4"});
  CHECK(j["verdict"]["status"] == "NoFiniteConvergence");
  CHECK(j["numerics"]["min_attaining_level"].is_null());
  CHECK(j["consistency"]["consistent"] == true);
  CHECK(j["numerics"]["levels"][0]["value"].is_null());
}

TEST_CASE("report records levels past the cap as skipped") {
  const auto j = json_of({"report", data("k3.json"), "--rmax", "8"});
  CHECK(j["numerics"]["levels"].size() == 5);
  CHECK(j["numerics"]["skipped"].get<std::string>().find("cap") != std::string::npos);
}

TEST_CASE("exit codes") {
  const Run twins = run({"decide", data("k3.json"), "--form", "ms-e", "--edge", "1,2"});
  CHECK(twins.code == 2);
  CHECK(twins.err.find("precondition") != std::string::npos);

  const Run flag = run({"alpha", data("c5.txt"), "--no-such-flag"});
  CHECK(flag.code == 2);

  const Run missing = run({"alpha", data("does-not-exist.txt")});
  CHECK(missing.code == 2);
  CHECK(missing.err.find("cannot open") != std::string::npos);

  const Run cap = run({"level", data("c5.txt"), "--r", "7"});
  CHECK(cap.code == 2);
  CHECK(cap.err.find("cap exceeded") != std::string::npos);

  const Run parse = run({"alpha", data("loop.col")});
  CHECK(parse.code == 2);
  CHECK(parse.err.find("line 3") != std::string::npos);

  CHECK(run({}).code == 2);
  CHECK(run({"--help"}).code == 0);
}

TEST_CASE("decide with explicit edge values") {
  const auto j = json_of({"decide", data("c5.txt"), "--form", "ms-B", "--B", data("c5_twos.json")});
  CHECK(j["verdict"]["status"] == "FiniteConvergence");
  const auto e = json_of({"decide", data("c4.txt"), "--form", "ms-e", "--edge", "1,2"});
  CHECK(e["verdict"]["status"] == "FiniteConvergence");
}

TEST_CASE("level output round-trips through certify") {
  const fs::path tmp = fs::temp_directory_path() / "fincon_cli_level.json";
  const Run r = run({"level", data("k3.json"), "--r", "2", "--output", tmp.string()});
  REQUIRE(r.code == 0);
  const auto doc = fincon::Json::parse(slurp(tmp));
  CHECK(doc["result"]["attained"] == true);
  const fs::path cert = fs::temp_directory_path() / "fincon_cli_cert.json";
  std::ofstream(cert) << doc["result"]["certificate"].dump();
  const auto c = json_of({"certify", data("k3.json"), "--cert", cert.string()});
  CHECK(c["report"]["pass"] == true);
  fs::remove(tmp);
  fs::remove(cert);
}

TEST_CASE("identical runs give identical bytes") {
  const Run a = run({"sweep", data("c5.txt"), "--rmax", "3", "--json", "--certificates"});
  const Run b = run({"sweep", data("c5.txt"), "--rmax", "3", "--json", "--certificates", "--threads", "2"});
  CHECK(a.code == 0);
  CHECK(a.out == b.out);
}

TEST_CASE("golden documents") {
  check_golden("alpha_c5", {"alpha", data("c5.txt"), "--oracle"});
  check_golden("critical_c5", {"critical", data("c5.txt")});
  check_golden("twins_k3", {"twins", data("k3.json")});
  check_golden("contract_k5", {"contract", data("k5.col")});
  check_golden("decide_c5", {"decide", data("c5.txt")});
  check_golden("decide_c5_twos", {"decide", data("c5.txt"), "--form", "ms-B", "--B", data("c5_twos.json")});
  check_golden("kkt_c4", {"kkt", data("c4.txt"), "--point", data("c4_point.json")});
  check_golden("bound_c5", {"bound", data("c5.txt")});
  check_golden("level_k3", {"level", data("k3.json"), "--r", "2"});
  check_golden("report_c4", {"report", data("c4.txt"), "--rmax", "4"});
}
