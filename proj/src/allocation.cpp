#include "dgrid/allocation.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "dgrid/error.hpp"
#include "text.hpp"

namespace dgrid {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

struct DemandSite {
  std::size_t attach;
  double demand;
};

std::vector<DemandSite> demand_sites(const GridTopology& topo, std::string_view object) {
  std::vector<DemandSite> sites;
  for (const auto& c : topo.clusters()) {
    const double d = topo.demand(c, object);
    if (d <= 0.0) continue;
    const auto attach = topo.attach_index(c);
    if (!attach) throw InfeasibleError("cluster '" + c + "' has demand but no client attach node");
    sites.push_back({*attach, d});
  }
  return sites;
}

// Summed distance from `from` to the k nearest distinct shares; kInf when
// fewer than k shares are reachable. `holders[s]` lists node positions.
double nearest_k(const Eigen::MatrixXd& dist, std::size_t from,
                 const std::vector<std::vector<std::size_t>>& holders, int k) {
  std::vector<double> best;
  best.reserve(holders.size());
  for (const auto& nodes : holders) {
    double b = kInf;
    for (auto v : nodes) b = std::min(b, dist(static_cast<Eigen::Index>(from), static_cast<Eigen::Index>(v)));
    if (b < kInf) best.push_back(b);
  }
  if (static_cast<int>(best.size()) < k) return kInf;
  std::partial_sort(best.begin(), best.begin() + k, best.end());
  return std::accumulate(best.begin(), best.begin() + k, 0.0);
}

double access_cost(const Eigen::MatrixXd& dist, const std::vector<DemandSite>& sites,
                   const std::vector<std::vector<std::size_t>>& holders, int k) {
  double access = 0.0;
  for (const auto& site : sites) {
    const double d = nearest_k(dist, site.attach, holders, k);
    if (d == kInf) return kInf;
    access += site.demand * d;
  }
  return access;
}

int node_slots(const GridNode& node, const CostModel& model, int limit) {
  const double fit = std::floor(static_cast<double>(node.capacity) / model.share_size);
  return static_cast<int>(std::min<double>(limit, fit));
}

bool improves(double candidate, double incumbent) {
  if (incumbent == kInf) return candidate < kInf;
  return candidate < incumbent - 1e-12 * std::max(1.0, std::abs(incumbent));
}

void check_inputs(ShareParams params, const CostModel& model, int limit) {
  params.validate();
  model.validate();
  if (limit < 1) throw ParameterError("per-node share limit must be at least 1");
}

}  // namespace

std::size_t AllocationPlan::replica_count() const {
  std::size_t total = 0;
  for (const auto& [index, nodes] : placements) total += nodes.size();
  return total;
}

std::size_t AllocationPlan::distinct_shares() const {
  return static_cast<std::size_t>(
      std::count_if(placements.begin(), placements.end(), [](const auto& p) { return !p.second.empty(); }));
}

void CostModel::validate() const {
  if (!(alpha >= 0.0) || !std::isfinite(alpha)) throw ParameterError("alpha must be finite and non-negative");
  if (!(share_size > 0.0) || !std::isfinite(share_size)) throw ParameterError("share size must be positive");
}

std::string_view scenario_name(Scenario s) {
  switch (s) {
    case Scenario::fully_replicated: return "fully_replicated";
    case Scenario::partially_replicated: return "partially_replicated";
    case Scenario::unreplicated: return "unreplicated";
  }
  return "unknown";
}

CostBreakdown plan_cost(const GridTopology& topo, const AllocationPlan& plan, const CostModel& model) {
  model.validate();
  std::vector<std::vector<std::size_t>> holders;
  for (const auto& [index, nodes] : plan.placements) {
    auto& h = holders.emplace_back();
    for (const auto& id : nodes) h.push_back(topo.node_index(id));
  }
  const auto sites = demand_sites(topo, plan.object);
  CostBreakdown cost;
  if (!sites.empty()) {
    cost.access = access_cost(distance_matrix(topo), sites, holders, plan.params.k);
    if (cost.access == kInf)
      throw InfeasibleError("a demanding cluster cannot reach " + std::to_string(plan.params.k) +
                            " distinct shares");
  }
  cost.storage = model.alpha * model.share_size * static_cast<double>(plan.replica_count());
  cost.total = cost.access + cost.storage;
  return cost;
}

Scenario classify_scenario(const GridTopology& topo, const AllocationPlan& plan) {
  bool full = true;
  bool single = true;
  for (int s = 1; s <= plan.params.n; ++s) {
    const auto it = plan.placements.find(s);
    const std::size_t copies = it == plan.placements.end() ? 0 : it->second.size();
    if (copies != 1) single = false;
    for (const auto& cluster : topo.clusters()) {
      bool present = false;
      if (it != plan.placements.end())
        for (const auto& node : it->second)
          if (topo.node(node).cluster == cluster) present = true;
      if (!present) full = false;
    }
  }
  if (full) return Scenario::fully_replicated;
  if (single) return Scenario::unreplicated;
  return Scenario::partially_replicated;
}

void check_plan(const GridTopology& topo, const AllocationPlan& plan, const CostModel& model, int limit) {
  std::map<std::string, int> per_node;
  for (const auto& [index, nodes] : plan.placements) {
    if (index < 1 || index > plan.params.n)
      throw PlacementError("share index " + std::to_string(index) + " outside [1, n]");
    for (const auto& id : nodes) {
      if (!topo.find_node(id)) throw PlacementError("plan references unknown node '" + id + "'");
      ++per_node[id];
    }
  }
  for (const auto& [id, count] : per_node) {
    if (count > limit)
      throw PlacementError("node '" + id + "' holds " + std::to_string(count) + " distinct shares, limit " +
                           std::to_string(limit));
    if (static_cast<double>(count) * model.share_size > static_cast<double>(topo.node(id).capacity))
      throw PlacementError("node '" + id + "' lacks capacity for " + std::to_string(count) + " shares");
  }
}

CostBreakdown inter_cluster_cost(const GridTopology& topo, std::string_view object, ShareParams params,
                                 const CostModel& model, const ClusterAssignment& assignment) {
  CostBreakdown cost;
  std::vector<std::vector<std::size_t>> holders;
  std::size_t replicas = 0;
  for (const auto& [index, clusters] : assignment) {
    auto& h = holders.emplace_back();
    for (const auto& c : clusters) {
      const auto attach = topo.attach_index(c);
      if (!attach) throw InfeasibleError("cluster '" + c + "' has no attach node");
      h.push_back(*attach);
      ++replicas;
    }
  }
  const auto sites = demand_sites(topo, object);
  if (!sites.empty()) {
    cost.access = access_cost(distance_matrix(topo), sites, holders, params.k);
    if (cost.access == kInf) throw InfeasibleError("assignment unreachable from a demanding cluster");
  }
  cost.storage = model.alpha * model.share_size * static_cast<double>(replicas);
  cost.total = cost.access + cost.storage;
  return cost;
}

ClusterAssignment inter_cluster_allocate(const GridTopology& topo, std::string_view object, ShareParams params,
                                         const CostModel& model, std::size_t budget, int limit) {
  check_inputs(params, model, limit);
  if (budget < static_cast<std::size_t>(params.k))
    throw InfeasibleError("budget " + std::to_string(budget) + " is below threshold k=" + std::to_string(params.k));

  struct Candidate {
    std::string id;
    std::size_t attach;
    int slots;
  };
  std::vector<Candidate> candidates;
  std::vector<std::string> ids = topo.clusters();
  std::sort(ids.begin(), ids.end());
  for (const auto& c : ids) {
    const auto attach = topo.attach_index(c);
    if (!attach) continue;
    int slots = 0;
    for (auto v : topo.cluster_members(c)) slots += node_slots(topo.nodes()[v], model, limit);
    if (slots > 0) candidates.push_back({c, *attach, slots});
  }

  const auto sites = demand_sites(topo, object);
  const Eigen::MatrixXd dist = distance_matrix(topo);
  const auto n = static_cast<std::size_t>(params.n);
  const double replica_price = model.alpha * model.share_size;

  // holders[s - 1] = attach positions of the clusters holding share s
  std::vector<std::vector<std::size_t>> holders(n);
  std::vector<std::vector<bool>> holds(n, std::vector<bool>(candidates.size(), false));
  std::vector<int> used(candidates.size(), 0);

  std::size_t seed = candidates.size();
  double seed_cost = kInf;
  for (std::size_t c = 0; c < candidates.size(); ++c) {
    if (candidates[c].slots < params.k) continue;
    double cost = 0.0;
    for (const auto& site : sites)
      cost += site.demand * dist(static_cast<Eigen::Index>(site.attach), static_cast<Eigen::Index>(candidates[c].attach));
    if (improves(cost, seed_cost)) {
      seed_cost = cost;
      seed = c;
    }
  }
  if (seed == candidates.size())
    throw InfeasibleError("no cluster can hold k shares and be reached by every demanding cluster");
  for (int s = 0; s < params.k; ++s) {
    holders[static_cast<std::size_t>(s)].push_back(candidates[seed].attach);
    holds[static_cast<std::size_t>(s)][seed] = true;
  }
  used[seed] = params.k;
  std::size_t placed = static_cast<std::size_t>(params.k);
  double current = access_cost(dist, sites, holders, params.k) + replica_price * static_cast<double>(placed);

  while (placed < budget) {
    double best = current;
    std::size_t best_share = n, best_cluster = 0;
    for (std::size_t s = 0; s < n; ++s) {
      for (std::size_t c = 0; c < candidates.size(); ++c) {
        if (holds[s][c] || used[c] >= candidates[c].slots) continue;
        holders[s].push_back(candidates[c].attach);
        const double cost =
            access_cost(dist, sites, holders, params.k) + replica_price * static_cast<double>(placed + 1);
        holders[s].pop_back();
        if (improves(cost, best)) {
          best = cost;
          best_share = s;
          best_cluster = c;
        }
      }
    }
    if (best_share == n) break;
    holders[best_share].push_back(candidates[best_cluster].attach);
    holds[best_share][best_cluster] = true;
    ++used[best_cluster];
    ++placed;
    current = best;
  }

  ClusterAssignment out;
  for (std::size_t s = 0; s < n; ++s)
    for (std::size_t c = 0; c < candidates.size(); ++c)
      if (holds[s][c]) out[static_cast<int>(s) + 1].push_back(candidates[c].id);
  return out;
}

NodePlacement intra_cluster_allocate(const GridTopology& topo, std::string_view cluster,
                                     const std::vector<int>& shares_to_place, const CostModel& model, int limit) {
  model.validate();
  if (limit < 1) throw ParameterError("per-node share limit must be at least 1");
  if (!topo.has_cluster(cluster)) throw ReferenceError("unknown cluster '" + std::string(cluster) + "'");
  const auto attach = topo.attach_index(cluster);
  if (!attach) throw InfeasibleError("cluster '" + std::string(cluster) + "' has no attach node");

  const auto dist = shortest_distances(topo, *attach);
  struct Slot {
    std::size_t node;
    double dist;
    int slots;
  };
  std::vector<Slot> nodes;
  for (auto v : topo.cluster_members(cluster)) {
    const int slots = node_slots(topo.nodes()[v], model, limit);
    if (slots > 0 && dist[v] < kUnreachable) nodes.push_back({v, dist[v], slots});
  }
  std::sort(nodes.begin(), nodes.end(), [&](const Slot& a, const Slot& b) {
    if (a.dist != b.dist) return a.dist < b.dist;
    return topo.nodes()[a.node].id < topo.nodes()[b.node].id;
  });

  std::map<int, int> remaining;
  for (int s : shares_to_place) ++remaining[s];

  // Fill the nearest node first, taking the shares with the most copies
  // still to place; this keeps the leftover multiset placeable on distinct
  // nodes whenever any placement exists.
  NodePlacement out;
  std::size_t left = shares_to_place.size();
  for (const auto& slot : nodes) {
    if (left == 0) break;
    std::vector<std::pair<int, int>> order(remaining.begin(), remaining.end());
    std::stable_sort(order.begin(), order.end(), [](const auto& a, const auto& b) { return a.second > b.second; });
    int taken = 0;
    for (const auto& [share, count] : order) {
      if (taken == slot.slots || count == 0) break;
      out[share].push_back(topo.nodes()[slot.node].id);
      --remaining[share];
      --left;
      ++taken;
    }
  }
  if (left != 0)
    throw InfeasibleError("cluster '" + std::string(cluster) + "' lacks nodes or capacity for " +
                          std::to_string(shares_to_place.size()) + " replicas");
  return out;
}

AllocationPlan allocate(const GridTopology& topo, std::string_view object, ShareParams params,
                        const CostModel& model, std::size_t budget, int limit) {
  const auto assignment = inter_cluster_allocate(topo, object, params, model, budget, limit);
  std::map<std::string, std::vector<int>> per_cluster;
  for (const auto& [share, clusters] : assignment)
    for (const auto& c : clusters) per_cluster[c].push_back(share);

  AllocationPlan plan{std::string(object), params, {}};
  for (const auto& [cluster, shares] : per_cluster)
    for (const auto& [share, nodes] : intra_cluster_allocate(topo, cluster, shares, model, limit))
      plan.placements[share].insert(nodes.begin(), nodes.end());
  return plan;
}

AllocationPlan replan(const GridTopology& topo, const AllocationPlan& previous, const CostModel& model,
                      std::size_t budget, int limit) {
  return allocate(topo, previous.object, previous.params, model, budget, limit);
}

AllocationPlan optimal_allocate(const GridTopology& topo, std::string_view object, ShareParams params,
                                const CostModel& model, std::size_t budget, int limit) {
  check_inputs(params, model, limit);
  if (topo.node_count() > kOracleMaxNodes || params.n > kOracleMaxShares || budget > kOracleMaxBudget)
    throw TooLargeError("exhaustive allocation is limited to 8 nodes, n <= 3 and budget <= 6");
  if (budget < static_cast<std::size_t>(params.k))
    throw InfeasibleError("budget " + std::to_string(budget) + " is below threshold k=" + std::to_string(params.k));

  const auto sites = demand_sites(topo, object);
  const Eigen::MatrixXd dist = distance_matrix(topo);
  const double replica_price = model.alpha * model.share_size;

  std::vector<std::size_t> order(topo.node_count());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(),
            [&](std::size_t a, std::size_t b) { return topo.nodes()[a].id < topo.nodes()[b].id; });

  // Candidate (share, node) pairs in (share index, node id) order.
  std::vector<std::pair<int, std::size_t>> pairs;
  std::vector<int> slots(topo.node_count());
  for (std::size_t v = 0; v < topo.node_count(); ++v) slots[v] = node_slots(topo.nodes()[v], model, limit);
  for (int s = 0; s < params.n; ++s)
    for (auto v : order)
      if (slots[v] > 0) pairs.emplace_back(s, v);

  std::vector<std::vector<std::size_t>> holders(static_cast<std::size_t>(params.n));
  std::vector<int> used(topo.node_count(), 0);
  std::vector<std::size_t> chosen, best_chosen;
  double best = kInf;

  auto evaluate = [&] {
    int distinct = 0;
    for (const auto& h : holders) distinct += h.empty() ? 0 : 1;
    if (distinct < params.k) return;
    const double access = access_cost(dist, sites, holders, params.k);
    if (access == kInf) return;
    const double total = access + replica_price * static_cast<double>(chosen.size());
    if (improves(total, best)) {
      best = total;
      best_chosen = chosen;
    }
  };

  // Combinations enumerated by size, then lexicographically.
  auto recurse = [&](auto&& self, std::size_t start, std::size_t remaining) -> void {
    if (remaining == 0) {
      evaluate();
      return;
    }
    for (std::size_t p = start; p + remaining <= pairs.size(); ++p) {
      const auto [s, v] = pairs[p];
      if (used[v] >= slots[v]) continue;
      ++used[v];
      holders[static_cast<std::size_t>(s)].push_back(v);
      chosen.push_back(p);
      self(self, p + 1, remaining - 1);
      chosen.pop_back();
      holders[static_cast<std::size_t>(s)].pop_back();
      --used[v];
    }
  };
  for (std::size_t size = 1; size <= budget; ++size) recurse(recurse, 0, size);

  if (best == kInf) throw InfeasibleError("no placement within budget satisfies every demanding cluster");
  AllocationPlan plan{std::string(object), params, {}};
  for (auto p : best_chosen) plan.placements[pairs[p].first + 1].insert(topo.nodes()[pairs[p].second].id);
  return plan;
}

std::string render_plan(const AllocationPlan& plan) {
  std::string out = "plan " + plan.object + "\n";
  out += "params " + std::to_string(plan.params.k) + " " + std::to_string(plan.params.n) + "\n";
  for (const auto& [index, nodes] : plan.placements) {
    if (nodes.empty()) continue;
    out += "share " + std::to_string(index);
    for (const auto& id : nodes) out += " " + id;
    out += "\n";
  }
  return out;
}

AllocationPlan parse_plan(std::string_view input) {
  const auto lines = text::tokenize(input);
  AllocationPlan plan;
  bool have_object = false, have_params = false;
  for (const auto& l : lines) {
    const auto key = l.words[0];
    if (key == "plan") {
      text::need_arity(l, 2, 2);
      if (have_object) throw ParseError(l.number, "duplicate 'plan' line");
      plan.object = std::string(l.words[1]);
      have_object = true;
    } else if (key == "params") {
      text::need_arity(l, 3, 3);
      plan.params.k = static_cast<int>(std::min<std::uint64_t>(text::need_u64(l, 1, "k"), 256));
      plan.params.n = static_cast<int>(std::min<std::uint64_t>(text::need_u64(l, 2, "n"), 256));
      if (plan.params.k < 1 || plan.params.k > plan.params.n || plan.params.n > 255)
        throw ParseError(l.number, "invalid (k, n)");
      have_params = true;
    } else if (key == "share") {
      if (!have_params) throw ParseError(l.number, "'share' before 'params'");
      text::need_arity(l, 3, l.words.size());
      const auto index = text::need_u64(l, 1, "share index");
      if (index < 1 || index > static_cast<std::uint64_t>(plan.params.n))
        throw ParseError(l.number, "share index outside [1, n]");
      auto& nodes = plan.placements[static_cast<int>(index)];
      if (!nodes.empty()) throw ParseError(l.number, "duplicate share line");
      for (std::size_t i = 2; i < l.words.size(); ++i)
        if (!nodes.emplace(l.words[i]).second) throw ParseError(l.number, "node listed twice");
    } else {
      throw ParseError(l.number, "unknown plan key '" + std::string(key) + "'");
    }
  }
  if (!have_object || !have_params)
    throw ParseError(lines.empty() ? 1 : lines.back().number, "plan lacks 'plan' or 'params' line");
  return plan;
}

}  // namespace dgrid
