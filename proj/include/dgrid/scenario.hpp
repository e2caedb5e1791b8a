#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "dgrid/gridsim.hpp"
#include "dgrid/topology.hpp"

namespace dgrid {

/// One output record of a scenario run: ordered key/value fields.
struct ScenarioEvent {
  struct Field {
    std::string key;
    std::string value;
    bool numeric = false;
  };
  std::string command;
  std::size_t line = 0;
  std::vector<Field> fields;

  const std::string* find(std::string_view key) const;
};

struct ScenarioOutcome {
  std::vector<ScenarioEvent> events;
  SimMetrics metrics;
  std::size_t assertions_passed = 0;
  std::size_t assertions_failed = 0;
};

/// Runs a scenario script against a fresh SimWorld(topology, seed).
///
///   put <name> scheme=<s> (size=<bytes> | file=<path>)
///       (plan=<path> | place=<i>:<node>[,<node>][;...] k=<k> n=<n>)
///       [from=<cluster>] [seed=<u64>]
///   get <name> cluster=<c> [as=<principal>]
///   grant <principal> <name>...
///   fail <node>...          restore <node>...
///   assert-success | assert-unavailable | assert-unauthorized   (last get)
///   assert-hops <n>         (last get)
///   assert-total-hops <n>   assert-stored <node> <bytes>
///   metrics
///
/// The owner principal may read every object it put. Relative paths resolve
/// against `base_dir`. Malformed commands throw ParseError with the line;
/// failed assertions are counted, not thrown.
ScenarioOutcome run_scenario(const GridTopology& topology, std::string_view script, std::uint64_t seed,
                             const std::filesystem::path& base_dir = ".");

/// `key=value` lines, one event per line, then the final metrics.
std::string render_outcome(const ScenarioOutcome& outcome);

}  // namespace dgrid
