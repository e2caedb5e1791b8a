#include "dgrid/topology.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <queue>
#include <tuple>

#include "dgrid/error.hpp"
#include "text.hpp"

namespace dgrid {
namespace {

bool valid_probability(double p) { return p >= 0.0 && p <= 1.0; }

}  // namespace

void GridTopology::add_cluster(std::string id) {
  if (has_cluster(id)) throw ReferenceError("duplicate cluster '" + id + "'");
  clusters_.push_back(std::move(id));
}

void GridTopology::add_node(GridNode node) {
  if (index_.contains(node.id)) throw ReferenceError("duplicate node '" + node.id + "'");
  if (!has_cluster(node.cluster))
    throw ReferenceError("node '" + node.id + "' references undeclared cluster '" + node.cluster + "'");
  if (!valid_probability(node.fail_p) || !valid_probability(node.comp_p))
    throw ParameterError("node '" + node.id + "' probabilities must lie in [0, 1]");
  index_.emplace(node.id, nodes_.size());
  nodes_.push_back(std::move(node));
  adjacency_.emplace_back();
}

void GridTopology::add_link(std::string_view a, std::string_view b, double cost) {
  const auto ia = find_node(a);
  const auto ib = find_node(b);
  if (!ia) throw ReferenceError("link references undeclared node '" + std::string(a) + "'");
  if (!ib) throw ReferenceError("link references undeclared node '" + std::string(b) + "'");
  if (*ia == *ib) throw ReferenceError("self-loop on node '" + std::string(a) + "'");
  if (!(cost >= 0.0) || !std::isfinite(cost)) throw ParameterError("link cost must be finite and non-negative");
  for (const auto& nb : adjacency_[*ia])
    if (nb.node == *ib)
      throw ReferenceError("duplicate link " + std::string(a) + " - " + std::string(b));

  Link link{std::string(a), std::string(b), cost};
  if (link.b < link.a) std::swap(link.a, link.b);
  links_.push_back(std::move(link));

  auto insert_sorted = [this](std::size_t from, std::size_t to, double c) {
    auto& adj = adjacency_[from];
    auto pos = std::lower_bound(adj.begin(), adj.end(), to, [this](const Neighbor& n, std::size_t t) {
      return nodes_[n.node].id < nodes_[t].id;
    });
    adj.insert(pos, Neighbor{to, c});
  };
  insert_sorted(*ia, *ib, cost);
  insert_sorted(*ib, *ia, cost);
}

void GridTopology::set_client(std::string_view cluster, std::string_view node) {
  if (!has_cluster(cluster)) throw ReferenceError("client references undeclared cluster '" + std::string(cluster) + "'");
  const auto idx = find_node(node);
  if (!idx) throw ReferenceError("client references undeclared node '" + std::string(node) + "'");
  if (nodes_[*idx].cluster != cluster)
    throw ReferenceError("attach node '" + std::string(node) + "' is not in cluster '" + std::string(cluster) + "'");
  if (!attach_.emplace(std::string(cluster), std::string(node)).second)
    throw ReferenceError("cluster '" + std::string(cluster) + "' already has a client attach node");
}

void GridTopology::add_demand(std::string_view cluster, std::string_view object, double frequency) {
  if (!has_cluster(cluster)) throw ReferenceError("demand references undeclared cluster '" + std::string(cluster) + "'");
  if (!(frequency >= 0.0) || !std::isfinite(frequency)) throw ParameterError("demand must be finite and non-negative");
  if (!demand_.emplace(std::make_pair(std::string(cluster), std::string(object)), frequency).second)
    throw ReferenceError("duplicate demand for '" + std::string(object) + "' in cluster '" + std::string(cluster) + "'");
}

bool GridTopology::has_cluster(std::string_view id) const {
  return std::find(clusters_.begin(), clusters_.end(), id) != clusters_.end();
}

std::optional<std::size_t> GridTopology::find_node(std::string_view id) const {
  if (auto it = index_.find(id); it != index_.end()) return it->second;
  return std::nullopt;
}

std::size_t GridTopology::node_index(std::string_view id) const {
  if (auto idx = find_node(id)) return *idx;
  throw ReferenceError("unknown node '" + std::string(id) + "'");
}

std::vector<std::size_t> GridTopology::cluster_members(std::string_view cluster) const {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < nodes_.size(); ++i)
    if (nodes_[i].cluster == cluster) out.push_back(i);
  return out;
}

std::optional<std::size_t> GridTopology::attach_index(std::string_view cluster) const {
  auto it = attach_.find(std::string(cluster));
  if (it == attach_.end()) return std::nullopt;
  return find_node(it->second);
}

double GridTopology::demand(std::string_view cluster, std::string_view object) const {
  auto it = demand_.find(std::make_pair(std::string(cluster), std::string(object)));
  return it == demand_.end() ? 0.0 : it->second;
}

bool operator==(const GridTopology& x, const GridTopology& y) {
  auto sorted = [](auto v, auto key) {
    std::sort(v.begin(), v.end(), [&](const auto& p, const auto& q) { return key(p) < key(q); });
    return v;
  };
  auto node_key = [](const GridNode& n) { return n.id; };
  auto link_key = [](const Link& l) { return std::tie(l.a, l.b); };
  auto id_key = [](const std::string& s) { return s; };
  return sorted(x.clusters_, id_key) == sorted(y.clusters_, id_key) &&
         sorted(x.nodes_, node_key) == sorted(y.nodes_, node_key) &&
         sorted(x.links_, link_key) == sorted(y.links_, link_key) && x.attach_ == y.attach_ &&
         x.demand_ == y.demand_;
}

GridTopology parse_topology(std::string_view input) {
  GridTopology topo;
  for (const auto& l : text::tokenize(input)) {
    const auto directive = l.words[0];
    try {
      if (directive == "cluster") {
        text::need_arity(l, 2, 2);
        topo.add_cluster(std::string(l.words[1]));
      } else if (directive == "node") {
        text::need_arity(l, 6, 6);
        topo.add_node(GridNode{std::string(l.words[1]), std::string(l.words[2]),
                               text::need_double(l, 3, "fail_p"), text::need_double(l, 4, "comp_p"),
                               text::need_u64(l, 5, "capacity")});
      } else if (directive == "link") {
        text::need_arity(l, 4, 4);
        topo.add_link(l.words[1], l.words[2], text::need_double(l, 3, "cost"));
      } else if (directive == "client") {
        text::need_arity(l, 3, 3);
        topo.set_client(l.words[1], l.words[2]);
      } else if (directive == "demand") {
        text::need_arity(l, 4, 4);
        topo.add_demand(l.words[1], l.words[2], text::need_double(l, 3, "frequency"));
      } else {
        throw ParseError(l.number, "unknown directive '" + std::string(directive) + "'");
      }
    } catch (const ReferenceError& e) {
      throw SemanticError(l.number, e.what());
    } catch (const ParameterError& e) {
      throw ParseError(l.number, e.what());
    }
  }
  return topo;
}

std::string render_topology(const GridTopology& topo) {
  std::string out;
  for (const auto& c : topo.clusters()) out += "cluster " + c + "\n";
  for (const auto& n : topo.nodes())
    out += "node " + n.id + " " + n.cluster + " " + text::format_double(n.fail_p) + " " +
           text::format_double(n.comp_p) + " " + std::to_string(n.capacity) + "\n";
  for (const auto& l : topo.links()) out += "link " + l.a + " " + l.b + " " + text::format_double(l.cost) + "\n";
  for (const auto& [cluster, node] : topo.client_attach()) out += "client " + cluster + " " + node + "\n";
  for (const auto& [key, freq] : topo.demands())
    out += "demand " + key.first + " " + key.second + " " + text::format_double(freq) + "\n";
  return out;
}

std::vector<double> shortest_distances(const GridTopology& topo, std::size_t source) {
  std::vector<double> dist(topo.node_count(), kUnreachable);
  using Entry = std::pair<double, std::size_t>;
  std::priority_queue<Entry, std::vector<Entry>, std::greater<>> queue;
  dist[source] = 0.0;
  queue.emplace(0.0, source);
  while (!queue.empty()) {
    const auto [d, u] = queue.top();
    queue.pop();
    if (d > dist[u]) continue;
    for (const auto& nb : topo.neighbors(u)) {
      const double nd = d + nb.cost;
      if (nd < dist[nb.node]) {
        dist[nb.node] = nd;
        queue.emplace(nd, nb.node);
      }
    }
  }
  return dist;
}

Eigen::MatrixXd distance_matrix(const GridTopology& topo) {
  const auto n = static_cast<Eigen::Index>(topo.node_count());
  Eigen::MatrixXd m(n, n);
  for (Eigen::Index i = 0; i < n; ++i)
    m.row(i) = Eigen::Map<const Eigen::RowVectorXd>(shortest_distances(topo, static_cast<std::size_t>(i)).data(), n);
  return m;
}

double distance(const GridTopology& topo, std::string_view a, std::string_view b) {
  const std::size_t ia = topo.node_index(a);
  const std::size_t ib = topo.node_index(b);
  const double d = shortest_distances(topo, ia)[ib];
  if (d == kUnreachable)
    throw UnreachableError("no path between '" + std::string(a) + "' and '" + std::string(b) + "'");
  return d;
}

std::vector<std::size_t> hop_distances(const GridTopology& topo, std::size_t dst) {
  std::vector<std::size_t> hops(topo.node_count(), kNoHops);
  std::deque<std::size_t> frontier{dst};
  hops[dst] = 0;
  while (!frontier.empty()) {
    const std::size_t u = frontier.front();
    frontier.pop_front();
    for (const auto& nb : topo.neighbors(u)) {
      if (hops[nb.node] != kNoHops) continue;
      hops[nb.node] = hops[u] + 1;
      frontier.push_back(nb.node);
    }
  }
  return hops;
}

std::map<std::string, std::size_t> hop_distance_map(const GridTopology& topo, std::string_view dst) {
  const auto hops = hop_distances(topo, topo.node_index(dst));
  std::map<std::string, std::size_t> out;
  for (std::size_t i = 0; i < hops.size(); ++i)
    if (hops[i] != kNoHops) out.emplace(topo.nodes()[i].id, hops[i]);
  return out;
}

}  // namespace dgrid
