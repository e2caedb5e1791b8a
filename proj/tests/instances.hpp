#pragma once

// Seeded random grid instances shared by the unit tests and the acceptance
// runner.

#include <cmath>
#include <limits>
#include <random>
#include <string>
#include <vector>

#include "dgrid/topology.hpp"

namespace instances {

struct GridShape {
  int clusters = 2;
  int nodes_per_cluster = 2;
  bool zero_intra = false;  // intra-cluster links cost 0
  double max_prob = 0.5;
  std::uint64_t capacity = 1000;
};

inline std::string cluster_id(int c) { return "c" + std::to_string(c); }
inline std::string node_id(int c, int i) { return "c" + std::to_string(c) + "n" + std::to_string(i); }

/// Connected grid: each cluster is a chain plus random chords, clusters are
/// joined by one border link to an earlier cluster. Attach node is the first
/// node of each cluster; at least one cluster demands "obj".
inline dgrid::GridTopology random_grid(std::mt19937& rng, const GridShape& shape) {
  std::uniform_real_distribution<double> prob(0.0, shape.max_prob);
  std::uniform_int_distribution<int> small(0, 3);
  dgrid::GridTopology t;
  for (int c = 0; c < shape.clusters; ++c) {
    t.add_cluster(cluster_id(c));
    for (int i = 0; i < shape.nodes_per_cluster; ++i)
      t.add_node({node_id(c, i), cluster_id(c), prob(rng), prob(rng), shape.capacity});
    auto intra = [&] { return shape.zero_intra ? 0.0 : static_cast<double>(1 + small(rng)); };
    for (int i = 1; i < shape.nodes_per_cluster; ++i) t.add_link(node_id(c, i - 1), node_id(c, i), intra());
    for (int i = 0; i + 2 < shape.nodes_per_cluster; ++i)
      if (rng() % 3 == 0) t.add_link(node_id(c, i), node_id(c, i + 2), intra());
    t.set_client(cluster_id(c), node_id(c, 0));
    if (c > 0) {
      const int other = static_cast<int>(rng() % static_cast<unsigned>(c));
      t.add_link(node_id(other, static_cast<int>(rng() % static_cast<unsigned>(shape.nodes_per_cluster))),
                 node_id(c, static_cast<int>(rng() % static_cast<unsigned>(shape.nodes_per_cluster))),
                 static_cast<double>(2 + small(rng)));
    }
  }
  bool any = false;
  for (int c = 0; c < shape.clusters; ++c) {
    const int d = small(rng);
    if (d > 0 || (c + 1 == shape.clusters && !any)) {
      t.add_demand(cluster_id(c), "obj", d > 0 ? d : 1);
      any = true;
    }
  }
  return t;
}

/// Floyd-Warshall on the topology's link list, indexed by node position.
inline std::vector<std::vector<double>> all_pairs(const dgrid::GridTopology& t) {
  const std::size_t n = t.node_count();
  const double inf = std::numeric_limits<double>::infinity();
  std::vector<std::vector<double>> d(n, std::vector<double>(n, inf));
  for (std::size_t i = 0; i < n; ++i) d[i][i] = 0.0;
  for (const auto& l : t.links()) {
    const auto a = t.node_index(l.a), b = t.node_index(l.b);
    d[a][b] = d[b][a] = std::min(d[a][b], l.cost);
  }
  for (std::size_t m = 0; m < n; ++m)
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) d[i][j] = std::min(d[i][j], d[i][m] + d[m][j]);
  return d;
}

}  // namespace instances
