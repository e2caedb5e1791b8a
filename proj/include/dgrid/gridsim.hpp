#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "dgrid/allocation.hpp"
#include "dgrid/random.hpp"
#include "dgrid/routing.hpp"
#include "dgrid/share.hpp"
#include "dgrid/topology.hpp"

namespace dgrid {

/// Static bearer token.
struct AccessToken {
  std::string principal;
  std::set<ObjectId> authorized_objects;
};

struct PartitionSpec {
  Scheme scheme = Scheme::shamir;
  ShareParams params;
};

struct SimMetrics {
  std::uint64_t total_hops = 0;
  std::map<LinkKey, std::uint64_t> per_link_traffic;            // share transfers per link
  std::map<std::string, std::uint64_t> storage_bytes_per_node;  // payload bytes
  std::map<std::string, std::uint64_t> header_bytes_per_node;   // header + key share bytes
  std::uint64_t node_contacts = 0;                              // storage nodes asked for a share

  friend bool operator==(const SimMetrics&, const SimMetrics&) = default;
};

struct Retrieval {
  Bytes data;
  std::uint64_t hops = 0;
  std::vector<std::pair<int, std::string>> sources;  // (share index, node)
};

/// Logical-time, single-threaded simulation of storage nodes on a grid.
///
/// Failed nodes neither store nor serve shares; they still forward packets.
/// Every share transfer (ingest -> holder on put, holder -> client attach
/// node on get) is routed with route_packet() using one world-wide stream
/// seeded by the constructor seed, with per-(src, dst) flow state.
class SimWorld {
 public:
  SimWorld(GridTopology topology, std::uint64_t seed);

  /// Partitions `object` and stores every planned replica. `seed` drives
  /// Shamir coefficients and sealed keys. Shares enter at the attach node of
  /// `ingest_cluster` (default: the first declared cluster with one).
  /// Throws PlacementError for unknown/down nodes, capacity overflow, a
  /// plan/spec mismatch or an unreachable holder.
  ObjectId put_object(ByteView object, PartitionSpec spec, const AllocationPlan& plan, std::uint64_t seed,
                      std::optional<std::string_view> ingest_cluster = std::nullopt);

  /// Fetches the k nearest distinct shares on up nodes to `cluster`'s attach
  /// node and reconstructs. Throws AuthorizationError before contacting any
  /// node, UnavailableError when fewer than k distinct shares are reachable.
  Bytes get_object(const ObjectId& id, std::string_view cluster, const AccessToken& token);
  Retrieval retrieve(const ObjectId& id, std::string_view cluster, const AccessToken& token);

  /// Idempotent. ReferenceError for unknown nodes (nothing changes then).
  void fail_nodes(std::span<const std::string> nodes);
  void restore_nodes(std::span<const std::string> nodes);

  const SimMetrics& metrics() const { return metrics_; }
  std::uint64_t clock() const { return clock_; }
  bool is_down(std::string_view node) const;
  const GridTopology& topology() const { return topology_; }

 private:
  struct StoredObject {
    PartitionSpec spec;
    std::uint64_t length = 0;
  };

  std::uint64_t transfer(const std::string& from, const std::string& to);

  GridTopology topology_;
  ChaChaStream routing_rng_;
  std::vector<std::map<std::pair<ObjectId, int>, Share>> stores_;  // by node position
  std::vector<std::uint64_t> used_bytes_;
  std::set<std::size_t> down_;
  std::map<ObjectId, StoredObject> objects_;
  std::map<std::pair<std::string, std::string>, FlowState> flows_;
  SimMetrics metrics_;
  std::uint64_t clock_ = 0;
};

}  // namespace dgrid
