#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <fstream>
#include <iterator>
#include <string>

#include "dgrid/error.hpp"
#include "dgrid/scenario.hpp"

using namespace dgrid;

namespace {

const std::filesystem::path kFixtures = DGRID_FIXTURES;

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  REQUIRE(in);
  return {std::istreambuf_iterator<char>(in), {}};
}

GridTopology grid() { return parse_topology(slurp(kFixtures / "grid.topo")); }

ScenarioOutcome run(const std::string& script, std::uint64_t seed = 1) {
  return run_scenario(grid(), script, seed, kFixtures);
}

std::size_t error_line(const std::string& script) {
  try {
    run(script);
  } catch (const ParseError& e) {
    return e.line();
  }
  return 0;
}

}  // namespace

TEST_CASE("survival script") {
  const auto out = run(slurp(kFixtures / "survive.scn"));
  CHECK(out.assertions_passed == 3);
  CHECK(out.assertions_failed == 0);
  const auto& put = out.events.front();
  CHECK(put.command == "put");
  CHECK(*put.find("status") == "ok");
  CHECK(*put.find("replicas") == "3");
  const auto input = slurp(kFixtures / "input.txt");
  CHECK(*put.find("bytes") == std::to_string(input.size()));
}

TEST_CASE("outage script") {
  const auto out = run(slurp(kFixtures / "outage.scn"));
  CHECK(out.assertions_failed == 0);
  CHECK(out.assertions_passed == 4);
}

TEST_CASE("failed assertions are counted") {
  const auto out = run("put x scheme=shamir size=10 place=1:e0 k=1 n=1\nget x cluster=east\nassert-unavailable\n"
                       "assert-hops 0\nassert-hops 5\nassert-total-hops 0\n");
  CHECK(out.assertions_passed == 2);
  CHECK(out.assertions_failed == 2);
}

TEST_CASE("identical seeds give identical output") {
  const auto script = slurp(kFixtures / "survive.scn");
  CHECK(render_outcome(run(script, 5)) == render_outcome(run(script, 5)));
  const auto text = render_outcome(run(script, 5));
  CHECK(text.find("assertions passed=3 failed=0\n") != std::string::npos);
  CHECK(text.find("storage e1 payload_bytes=") != std::string::npos);
}

TEST_CASE("put failure is reported, not thrown") {
  const auto out = run("fail e1\nput x scheme=shamir size=10 place=1:e1 k=1 n=1\n");
  CHECK(*out.events.back().find("status") == "failed");
}

TEST_CASE("script errors carry the line") {
  CHECK(error_line("metrics\nfrobnicate\n") == 2);
  CHECK(error_line("put x scheme=nope size=1 place=1:e0 k=1 n=1\n") == 1);
  CHECK(error_line("put x scheme=shamir place=1:e0 k=1 n=1\n") == 1);
  CHECK(error_line("put x scheme=shamir size=3 place=1:e0 k=2 n=1\n") == 1);
  CHECK(error_line("\n\nget missing cluster=east\n") == 3);
  CHECK(error_line("put x scheme=shamir size=3 place=1:e0 k=1 n=1\nget x cluster=mars\n") == 2);
  CHECK(error_line("fail e9\n") == 1);
  CHECK(error_line("put x scheme=shamir size=3 place=1:e0 k=1 n=1 colour=red\n") == 1);
  CHECK(error_line("put x scheme=shamir file=absent.bin place=1:e0 k=1 n=1\n") == 1);
  CHECK(error_line("assert-stored e9 0\n") == 1);
}
