#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>
#include <functional>
#include <limits>
#include <random>
#include <set>

#include "dgrid/allocation.hpp"
#include "dgrid/error.hpp"
#include "instances.hpp"
#include "oracles.hpp"

using namespace dgrid;

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

/// Access term recomputed by enumerating every k-subset of replicas.
double access_oracle(const GridTopology& t, const AllocationPlan& plan) {
  const auto d = instances::all_pairs(t);
  std::vector<std::pair<int, std::size_t>> replicas;
  for (const auto& [s, nodes] : plan.placements)
    for (const auto& n : nodes) replicas.emplace_back(s, t.node_index(n));
  double total = 0.0;
  for (const auto& c : t.clusters()) {
    const double demand = t.demand(c, plan.object);
    if (demand <= 0) continue;
    const std::size_t from = *t.attach_index(c);
    double best = kInf;
    for (const auto& subset : oracle::subsets(static_cast<int>(replicas.size()), plan.params.k)) {
      std::set<int> seen;
      double sum = 0.0;
      for (int r : subset) {
        seen.insert(replicas[static_cast<std::size_t>(r)].first);
        sum += d[from][replicas[static_cast<std::size_t>(r)].second];
      }
      if (static_cast<int>(seen.size()) == plan.params.k) best = std::min(best, sum);
    }
    total += demand * best;
  }
  return total;
}

/// Minimum summed attach distance over every legal intra-cluster placement.
double intra_oracle(const GridTopology& t, const std::string& cluster, const std::vector<int>& shares, int limit) {
  const auto d = instances::all_pairs(t);
  const std::size_t attach = *t.attach_index(cluster);
  const auto members = t.cluster_members(cluster);
  std::vector<std::set<int>> held(members.size());
  double best = kInf;
  std::function<void(std::size_t, double)> rec = [&](std::size_t r, double cost) {
    if (r == shares.size()) {
      best = std::min(best, cost);
      return;
    }
    for (std::size_t m = 0; m < members.size(); ++m) {
      if (held[m].contains(shares[r]) || static_cast<int>(held[m].size()) >= limit) continue;
      held[m].insert(shares[r]);
      rec(r + 1, cost + d[attach][members[m]]);
      held[m].erase(shares[r]);
    }
  };
  rec(0, 0.0);
  return best;
}

GridTopology star(double far_cost) {
  GridTopology t;
  t.add_cluster("S1");
  t.add_node({"a", "S1", 0, 0, 100});
  t.add_node({"b", "S1", 0, 0, 100});
  t.add_link("a", "b", far_cost);
  t.set_client("S1", "a");
  return t;
}

}  // namespace

TEST_CASE("plan_cost examples") {
  auto t = star(5);
  t.add_demand("S1", "obj", 2);
  const AllocationPlan local{"obj", {1, 1}, {{1, {"a"}}}};
  CHECK(plan_cost(t, local, {0, 1}).access == 0);
  const AllocationPlan remote{"obj", {1, 1}, {{1, {"b"}}}};
  CHECK(plan_cost(t, remote, {0, 1}).access == 10);
  const auto priced = plan_cost(t, remote, {0.5, 4});
  CHECK(priced.storage == 2);
  CHECK(priced.total == 12);

  const AllocationPlan short_plan{"obj", {2, 2}, {{1, {"a"}}}};
  CHECK_THROWS_AS(plan_cost(t, short_plan, {0, 1}), InfeasibleError);
  CHECK_THROWS_AS(plan_cost(t, local, {-1, 1}), ParameterError);
}

TEST_CASE("plan_cost matches the enumeration oracle") {
  std::mt19937 rng(41);
  for (int trial = 0; trial < 150; ++trial) {
    const auto t = instances::random_grid(rng, {2 + trial % 2, 3, false});
    const int n = 1 + static_cast<int>(rng() % 3);
    const int k = 1 + static_cast<int>(rng() % static_cast<unsigned>(n));
    AllocationPlan plan{"obj", {k, n}, {}};
    for (int s = 1; s <= n; ++s)
      for (const auto& node : t.nodes())
        if (rng() % 3 == 0 || s <= k) {
          plan.placements[s].insert(node.id);
          if (rng() % 2) break;
        }
    REQUIRE(plan_cost(t, plan, {0, 1}).access == doctest::Approx(access_oracle(t, plan)));
  }
}

TEST_CASE("classify_scenario") {
  GridTopology t;
  for (const char* c : {"S1", "S2", "S3"}) {
    t.add_cluster(c);
    t.add_node({std::string(c) + "n", c, 0, 0, 10});
  }
  const AllocationPlan fig{"A", {2, 2}, {{1, {"S1n", "S2n"}}, {2, {"S2n", "S3n"}}}};
  CHECK(classify_scenario(t, fig) == Scenario::partially_replicated);
  const AllocationPlan full{"A", {2, 2}, {{1, {"S1n", "S2n", "S3n"}}, {2, {"S1n", "S2n", "S3n"}}}};
  CHECK(classify_scenario(t, full) == Scenario::fully_replicated);
  const AllocationPlan single{"A", {2, 2}, {{1, {"S1n"}}, {2, {"S3n"}}}};
  CHECK(classify_scenario(t, single) == Scenario::unreplicated);
  CHECK(scenario_name(Scenario::partially_replicated) == "partially_replicated");
}

TEST_CASE("full replication is always classified as such") {
  std::mt19937 rng(2);
  for (int trial = 0; trial < 50; ++trial) {
    const auto t = instances::random_grid(rng, {1 + trial % 4, 2, false});
    AllocationPlan plan{"obj", {2, 3}, {}};
    for (int s = 1; s <= 3; ++s)
      for (const auto& c : t.clusters()) plan.placements[s].insert(t.nodes()[t.cluster_members(c)[0]].id);
    CHECK(classify_scenario(t, plan) == Scenario::fully_replicated);
  }
}

TEST_CASE("inter_cluster_allocate examples") {
  SUBCASE("one cluster, budget = k") {
    auto t = star(1);
    t.add_demand("S1", "obj", 1);
    const auto a = inter_cluster_allocate(t, "obj", {2, 3}, {1, 1}, 2, 2);
    CHECK(a == ClusterAssignment{{1, {"S1"}}, {2, {"S1"}}});
  }
  SUBCASE("zero-demand cluster stays empty") {
    auto t = star(1);
    t.add_cluster("S2");
    t.add_node({"c", "S2", 0, 0, 100});
    t.add_node({"d", "S2", 0, 0, 100});
    t.add_link("b", "c", 3);
    t.set_client("S2", "c");
    t.add_demand("S1", "obj", 4);
    const auto a = inter_cluster_allocate(t, "obj", {2, 3}, {0.1, 1}, 6);
    for (const auto& [s, clusters] : a) CHECK(std::find(clusters.begin(), clusters.end(), "S2") == clusters.end());
  }
  SUBCASE("budget below k") {
    auto t = star(1);
    t.add_demand("S1", "obj", 1);
    CHECK_THROWS_AS(inter_cluster_allocate(t, "obj", {3, 3}, {0, 1}, 2), InfeasibleError);
  }
}

TEST_CASE("intra_cluster_allocate") {
  GridTopology t;
  t.add_cluster("c");
  t.add_node({"a", "c", 0, 0, 10});
  t.add_node({"b", "c", 0, 0, 10});
  t.add_link("a", "b", 2);
  t.set_client("c", "a");
  CHECK(intra_cluster_allocate(t, "c", {1}, {0, 1}) == NodePlacement{{1, {"a"}}});
  const auto two = intra_cluster_allocate(t, "c", {1, 2}, {0, 1});
  CHECK(two.at(1).size() + two.at(2).size() == 2);
  CHECK(two.at(1) != two.at(2));
  CHECK_THROWS_AS(intra_cluster_allocate(t, "c", {1, 2, 3}, {0, 1}), InfeasibleError);
  CHECK_THROWS_AS(intra_cluster_allocate(t, "c", {1, 1, 1}, {0, 1}, 3), InfeasibleError);
  CHECK_THROWS_AS(intra_cluster_allocate(t, "zz", {1}, {0, 1}), ReferenceError);
}

TEST_CASE("intra_cluster_allocate matches the exhaustive oracle") {
  std::mt19937 rng(8);
  for (int trial = 0; trial < 200; ++trial) {
    const int m = 2 + static_cast<int>(rng() % 5);
    const auto t = instances::random_grid(rng, {1, m, false});
    const int limit = 1 + static_cast<int>(rng() % 2);
    std::vector<int> shares;
    const int count = 1 + static_cast<int>(rng() % static_cast<unsigned>(std::min(m * limit, 5)));
    for (int i = 0; i < count; ++i) shares.push_back(1 + static_cast<int>(rng() % 3));
    const double expect = intra_oracle(t, "c0", shares, limit);
    if (expect == kInf) {
      REQUIRE_THROWS_AS(intra_cluster_allocate(t, "c0", shares, {0, 1}, limit), InfeasibleError);
      continue;
    }
    const auto placement = intra_cluster_allocate(t, "c0", shares, {0, 1}, limit);
    const auto d = instances::all_pairs(t);
    double cost = 0.0;
    std::map<std::string, std::set<int>> per_node;
    std::size_t placed = 0;
    for (const auto& [s, nodes] : placement)
      for (const auto& n : nodes) {
        cost += d[0][t.node_index(n)];
        REQUIRE(per_node[n].insert(s).second);
        ++placed;
      }
    for (const auto& [n, held] : per_node) REQUIRE(static_cast<int>(held.size()) <= limit);
    REQUIRE(placed == shares.size());
    REQUIRE(cost == doctest::Approx(expect));
  }
}

TEST_CASE("optimal_allocate") {
  GridTopology t;
  t.add_cluster("c");
  t.add_node({"only", "c", 0, 0, 10});
  t.set_client("c", "only");
  t.add_demand("c", "obj", 1);
  const auto plan = optimal_allocate(t, "obj", {1, 1}, {1, 1}, 3);
  CHECK(plan.placements == std::map<int, std::set<std::string>>{{1, {"only"}}});
  CHECK_THROWS_AS(optimal_allocate(t, "obj", {2, 2}, {1, 1}, 1), InfeasibleError);
  CHECK_THROWS_AS(optimal_allocate(t, "obj", {2, 4}, {1, 1}, 4), TooLargeError);
}

TEST_CASE("greedy never beats the oracle") {
  std::mt19937 rng(55);
  for (int trial = 0; trial < 60; ++trial) {
    // Greedy seeds k shares in one cluster, so every cluster can hold k.
    const int clusters = 1 + trial % 3;
    const int m = clusters == 3 ? 2 : 3;
    const auto t = instances::random_grid(rng, {clusters, m, false});
    const int n = 1 + static_cast<int>(rng() % 3);
    const int k = std::min(m, 1 + static_cast<int>(rng() % static_cast<unsigned>(n)));
    const CostModel model{0.05 * static_cast<double>(rng() % 10), 1};
    const std::size_t budget = static_cast<std::size_t>(k) + rng() % 3;
    const auto greedy = allocate(t, "obj", {k, n}, model, budget);
    const auto exact = optimal_allocate(t, "obj", {k, n}, model, budget);
    check_plan(t, greedy, model);
    check_plan(t, exact, model);
    REQUIRE(greedy.replica_count() <= budget);
    REQUIRE(plan_cost(t, greedy, model).total >= plan_cost(t, exact, model).total - 1e-9);
  }
}

TEST_CASE("two-level decomposition is self-consistent") {
  std::mt19937 rng(90);
  for (int trial = 0; trial < 60; ++trial) {
    const auto t = instances::random_grid(rng, {2 + trial % 3, 3, true});
    const CostModel model{0.1, 1};
    const ShareParams params{2, 3};
    const auto assignment = inter_cluster_allocate(t, "obj", params, model, 6);
    const auto plan = allocate(t, "obj", params, model, 6);
    check_plan(t, plan, model);
    REQUIRE(plan_cost(t, plan, model).total ==
            doctest::Approx(inter_cluster_cost(t, "obj", params, model, assignment).total));
  }
}

TEST_CASE("cost monotonicity in replicas") {
  std::mt19937 rng(61);
  for (int trial = 0; trial < 100; ++trial) {
    const auto t = instances::random_grid(rng, {2, 3, false});
    AllocationPlan plan{"obj", {2, 3}, {{1, {"c0n0"}}, {2, {"c1n0"}}}};
    const double before0 = plan_cost(t, plan, {0, 1}).total;
    const double before1 = plan_cost(t, plan, {0.3, 1}).storage;
    const int s = 1 + static_cast<int>(rng() % 3);
    const auto& extra = t.nodes()[rng() % t.node_count()].id;
    if (!plan.placements[s].insert(extra).second) continue;
    CHECK(plan_cost(t, plan, {0, 1}).total <= before0 + 1e-12);
    CHECK(plan_cost(t, plan, {0.3, 1}).storage > before1);
  }
}

TEST_CASE("replan follows changed demand") {
  auto t = star(5);
  t.add_cluster("S2");
  t.add_node({"c", "S2", 0, 0, 100});
  t.add_link("b", "c", 5);
  t.set_client("S2", "c");
  auto t1 = t;
  t1.add_demand("S1", "obj", 1);
  const auto first = allocate(t1, "obj", {1, 1}, {0.1, 1}, 1);
  CHECK(first.placements.at(1) == std::set<std::string>{"a"});
  auto t2 = t;
  t2.add_demand("S2", "obj", 1);
  const auto second = replan(t2, first, {0.1, 1}, 1);
  CHECK(second.placements.at(1) == std::set<std::string>{"c"});
}

TEST_CASE("plan documents") {
  const AllocationPlan plan{"obj", {2, 3}, {{1, {"x", "y"}}, {2, {"z"}}, {3, {}}}};
  const auto parsed = parse_plan(render_plan(plan));
  CHECK(parsed.object == "obj");
  CHECK(parsed.params == plan.params);
  CHECK(parsed.placements.at(1) == plan.placements.at(1));
  CHECK(parsed.placements.at(2) == plan.placements.at(2));
  CHECK_THROWS_AS(parse_plan("plan obj\nparams 3 2\n"), ParseError);
  CHECK_THROWS_AS(parse_plan("params 1 1\n"), ParseError);
  CHECK_THROWS_AS(parse_plan("plan obj\nparams 1 2\nshare 3 x\n"), ParseError);
}

TEST_CASE("check_plan") {
  auto t = star(1);
  CHECK_NOTHROW(check_plan(t, {"o", {1, 2}, {{1, {"a"}}, {2, {"b"}}}}, {0, 1}));
  CHECK_THROWS_AS(check_plan(t, {"o", {1, 2}, {{1, {"a"}}, {2, {"a"}}}}, {0, 1}), PlacementError);
  CHECK_NOTHROW(check_plan(t, {"o", {1, 2}, {{1, {"a"}}, {2, {"a"}}}}, {0, 1}, 2));
  CHECK_THROWS_AS(check_plan(t, {"o", {1, 2}, {{1, {"a"}}, {2, {"a"}}}}, {0, 60}, 2), PlacementError);
  CHECK_THROWS_AS(check_plan(t, {"o", {1, 2}, {{1, {"nope"}}}}, {0, 1}), PlacementError);
  CHECK_THROWS_AS(check_plan(t, {"o", {1, 2}, {{3, {"a"}}}}, {0, 1}), PlacementError);
}
