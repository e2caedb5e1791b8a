#pragma once

#include <cstddef>
#include <map>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "dgrid/share.hpp"
#include "dgrid/topology.hpp"

namespace dgrid {

/// Share index -> nodes holding a replica of that share.
struct AllocationPlan {
  std::string object;  // demand key in the topology
  ShareParams params;
  std::map<int, std::set<std::string>> placements;

  std::size_t replica_count() const;
  std::size_t distinct_shares() const;

  friend bool operator==(const AllocationPlan&, const AllocationPlan&) = default;
};

/// Linear storage price plus demand-weighted access distance.
struct CostModel {
  double alpha = 0.0;       // cost per stored byte
  double share_size = 1.0;  // bytes per share replica

  void validate() const;
};

struct CostBreakdown {
  double access = 0.0;
  double storage = 0.0;
  double total = 0.0;
};

enum class Scenario { fully_replicated, partially_replicated, unreplicated };
std::string_view scenario_name(Scenario s);

/// access = sum over clusters c of demand(c) times the summed distance from
/// c's attach node to its k nearest distinct shares; storage = alpha *
/// share_size * replicas. Throws InfeasibleError if a demanding cluster
/// cannot reach k distinct shares, ReferenceError for unknown nodes.
CostBreakdown plan_cost(const GridTopology& topo, const AllocationPlan& plan, const CostModel& model);

/// Clusters are the sites: fully replicated when every share has a replica
/// in every cluster, unreplicated when every share has exactly one replica.
Scenario classify_scenario(const GridTopology& topo, const AllocationPlan& plan);

/// Throws PlacementError unless every node exists, share indices are in
/// [1, n], no node holds more than `limit` distinct shares and stored bytes
/// fit each node's capacity.
void check_plan(const GridTopology& topo, const AllocationPlan& plan, const CostModel& model,
                int limit = 1);

/// Share index -> clusters receiving one replica each.
using ClusterAssignment = std::map<int, std::vector<std::string>>;
/// Share index -> nodes receiving one replica each.
using NodePlacement = std::map<int, std::vector<std::string>>;

/// Cost of a cluster-level assignment with each replica located at its
/// cluster's attach node.
CostBreakdown inter_cluster_cost(const GridTopology& topo, std::string_view object, ShareParams params,
                                 const CostModel& model, const ClusterAssignment& assignment);

/// Greedy marginal-gain placement of share replicas onto clusters.
///
/// Seeds shares 1..k in the cluster minimizing demand-weighted attach-node
/// distance, then repeatedly adds the (share, cluster) replica that lowers
/// inter_cluster_cost the most until `budget` replicas are placed or no
/// addition helps. Ties go to the smaller share index, then the smaller
/// cluster id. A cluster accepts at most one replica per share and at most
/// as many replicas as its nodes have slots under `limit`.
ClusterAssignment inter_cluster_allocate(const GridTopology& topo, std::string_view object,
                                         ShareParams params, const CostModel& model, std::size_t budget,
                                         int limit = 1);

/// Places a multiset of share replicas on the nodes of one cluster,
/// minimizing summed distance from the cluster's attach node. No node gets
/// two replicas of one share or more than `limit` distinct shares; ties go
/// to the smaller node id.
NodePlacement intra_cluster_allocate(const GridTopology& topo, std::string_view cluster,
                                     const std::vector<int>& shares_to_place, const CostModel& model,
                                     int limit = 1);

/// inter_cluster_allocate followed by intra_cluster_allocate per cluster.
AllocationPlan allocate(const GridTopology& topo, std::string_view object, ShareParams params,
                        const CostModel& model, std::size_t budget, int limit = 1);

/// Re-runs allocate() for an existing plan's object, e.g. after demand changed.
AllocationPlan replan(const GridTopology& topo, const AllocationPlan& previous, const CostModel& model,
                      std::size_t budget, int limit = 1);

/// Exhaustive minimum-total-cost plan over every placement of at most
/// `budget` replicas that respects check_plan() constraints and holds at
/// least k distinct shares. Limited to 8 nodes, n <= 3, budget <= 6
/// (TooLargeError beyond).
AllocationPlan optimal_allocate(const GridTopology& topo, std::string_view object, ShareParams params,
                                const CostModel& model, std::size_t budget, int limit = 1);

constexpr std::size_t kOracleMaxNodes = 8;
constexpr int kOracleMaxShares = 3;
constexpr std::size_t kOracleMaxBudget = 6;

/// Plan document:
///   plan <object>
///   params <k> <n>
///   share <index> <node> [<node> ...]
std::string render_plan(const AllocationPlan& plan);
AllocationPlan parse_plan(std::string_view text);

}  // namespace dgrid
