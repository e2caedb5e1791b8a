#pragma once

#include <cstddef>
#include <cstdint>
#include <limits>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <Eigen/Core>

namespace dgrid {

struct GridNode {
  std::string id;
  std::string cluster;
  double fail_p = 0.0;
  double comp_p = 0.0;
  std::uint64_t capacity = 0;

  friend bool operator==(const GridNode&, const GridNode&) = default;
};

/// Undirected weighted link; endpoints stored with a < b.
struct Link {
  std::string a;
  std::string b;
  double cost = 1.0;

  friend bool operator==(const Link&, const Link&) = default;
};

/// Clustered peer-to-peer grid: nodes labelled with clusters, undirected
/// weighted links (inter-cluster connectivity is ordinary links between
/// border nodes), one client attach node per cluster and per-cluster demand
/// for named objects.
///
/// Built incrementally through the add_* members, each of which validates
/// against what has been declared so far and throws ReferenceError or
/// ParameterError. Treat as immutable once built.
class GridTopology {
 public:
  struct Neighbor {
    std::size_t node;
    double cost;
  };

  void add_cluster(std::string id);
  void add_node(GridNode node);
  void add_link(std::string_view a, std::string_view b, double cost);
  void set_client(std::string_view cluster, std::string_view node);
  void add_demand(std::string_view cluster, std::string_view object, double frequency);

  const std::vector<std::string>& clusters() const { return clusters_; }
  const std::vector<GridNode>& nodes() const { return nodes_; }
  const std::vector<Link>& links() const { return links_; }
  const std::map<std::string, std::string>& client_attach() const { return attach_; }
  const std::map<std::pair<std::string, std::string>, double>& demands() const { return demand_; }

  std::size_t node_count() const { return nodes_.size(); }
  bool has_cluster(std::string_view id) const;
  std::optional<std::size_t> find_node(std::string_view id) const;
  /// Throws ReferenceError for an unknown id.
  std::size_t node_index(std::string_view id) const;
  const GridNode& node(std::string_view id) const { return nodes_[node_index(id)]; }

  /// Neighbors sorted by node id.
  const std::vector<Neighbor>& neighbors(std::size_t node) const { return adjacency_[node]; }
  std::vector<std::size_t> cluster_members(std::string_view cluster) const;
  std::optional<std::size_t> attach_index(std::string_view cluster) const;
  /// Requests per unit time from `cluster` for `object`; zero if undeclared.
  double demand(std::string_view cluster, std::string_view object) const;

  /// Structural equality, insensitive to declaration order.
  friend bool operator==(const GridTopology& x, const GridTopology& y);

 private:
  std::vector<std::string> clusters_;
  std::vector<GridNode> nodes_;
  std::map<std::string, std::size_t, std::less<>> index_;
  std::vector<Link> links_;
  std::vector<std::vector<Neighbor>> adjacency_;
  std::map<std::string, std::string> attach_;
  std::map<std::pair<std::string, std::string>, double> demand_;
};

/// Parses the line-oriented topology format:
///   cluster <id>
///   node <id> <cluster> <fail_p> <comp_p> <capacity_bytes>
///   link <nodeA> <nodeB> <cost>
///   client <cluster> <attach_node>
///   demand <cluster> <object_id> <freq>
/// `#` starts a comment. References must be declared on an earlier line.
/// Throws ParseError (syntax) or SemanticError (dangling/duplicate).
GridTopology parse_topology(std::string_view text);

/// Canonical rendering; parse_topology(render_topology(t)) == t.
std::string render_topology(const GridTopology& topo);

constexpr double kUnreachable = std::numeric_limits<double>::infinity();
constexpr std::size_t kNoHops = std::numeric_limits<std::size_t>::max();

/// Dijkstra from `source`; kUnreachable where no path exists.
std::vector<double> shortest_distances(const GridTopology& topo, std::size_t source);

/// All-pairs shortest path costs indexed by node position.
Eigen::MatrixXd distance_matrix(const GridTopology& topo);

/// Shortest-path cost; 0 for a == b. Throws UnreachableError if disconnected.
double distance(const GridTopology& topo, std::string_view a, std::string_view b);

/// BFS hop counts to `dst` by node position; kNoHops where unreachable.
std::vector<std::size_t> hop_distances(const GridTopology& topo, std::size_t dst);

/// Hop counts to `dst`, ignoring weights; unreachable nodes are absent.
std::map<std::string, std::size_t> hop_distance_map(const GridTopology& topo, std::string_view dst);

}  // namespace dgrid
