#include <doctest.h>

#include <fstream>
#include <sstream>

#include "uukin/config.hpp"

using namespace uukin;

namespace {

std::vector<ConfigIssue> issues_of(const std::string& text, const std::vector<std::string>& ov = {}) {
  try {
    parse_config(text, ov);
  } catch (const ConfigError& e) {
    return e.issues();
  }
  return {};
}

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

TEST_CASE("empty text gives the defaults") {
  const RunConfig c = parse_config("");
  CHECK(c.scenario == Scenario::UU);
  CHECK(c.grid.n == 256);
  CHECK(c.grid.eps_min == 1e-4);
  CHECK(c.collision.occupancy_c == 1.0);
  CHECK(c.entries.empty());
}

TEST_CASE("negative grid size names the key") {
  const auto is = issues_of("# header\n\ngrid.n = -4\n");
  REQUIRE(is.size() == 1);
  CHECK(is[0].line == 3);
  CHECK(is[0].key == "grid.n");
  CHECK(is[0].reason.find("must be >= 2") != std::string::npos);
}

TEST_CASE("unknown keys, type mismatches and duplicates are all reported") {
  const auto is = issues_of("grid.nn = 3\ngrid.eps_min = abc\ncollision.symmetrize = maybe\ngrid.n = 8\ngrid.n = 9\n");
  REQUIRE(is.size() == 4);
  CHECK(is[0].reason == "unknown key");
  CHECK(is[1].key == "grid.eps_min");
  CHECK(is[2].key == "collision.symmetrize");
  CHECK(is[3].line == 5);
  CHECK(is[3].reason.find("duplicate") != std::string::npos);
}

TEST_CASE("cross-key constraints") {
  CHECK(issues_of("grid.eps_min = 5\ngrid.eps_max = 1\n").size() == 1);
  CHECK(issues_of("initial.z = 1.5\n").size() == 1);
  const auto seed = issues_of("scenario = memory\n");
  REQUIRE(seed.size() == 1);
  CHECK(seed[0].key == "seed");
  CHECK(issues_of("scenario = memory\nseed = 3\n").empty());
  CHECK(issues_of("scenario = validate\n").size() == 1);
  CHECK(issues_of("lattice.m = 4\n").size() == 1);
}

TEST_CASE("overrides apply after the file") {
  const RunConfig c = parse_config("grid.n = 64\n", {"grid.n=32", "scenario = scales"});
  CHECK(c.grid.n == 32);
  CHECK(c.scenario == Scenario::Scales);
  CHECK(issues_of("", {"grid.n"}).size() == 1);
}

TEST_CASE("comments and whitespace") {
  const RunConfig c = parse_config("  dynamics.rtol   =  1e-7   # tighter\n#grid.n = 3\n");
  CHECK(c.dynamics.control.rtol == 1e-7);
  CHECK(c.grid.n == 256);
}

TEST_CASE("blow-up recipe matches the recorded echo") {
  const RunConfig c = load_config(std::string(UUKIN_FIXTURE_DIR) + "/../../configs/uu_blowup.cfg");
  std::ostringstream out;
  for (const auto& [k, v] : config_echo(c)) out << k << " = " << v << "\n";
  CHECK(out.str() == slurp(std::string(UUKIN_FIXTURE_DIR) + "/uu_blowup.echo"));
}

TEST_CASE("echo re-parses to the same config") {
  const RunConfig a = parse_config("scenario = hierarchy\nseed = 5\nlattice.eps = 0.125\nbl.n = 15\n");
  std::ostringstream text;
  for (const auto& [k, v] : config_echo(a)) text << k << " = " << v << "\n";
  const RunConfig b = parse_config(text.str());
  CHECK(config_echo(a) == config_echo(b));
}
