#include "dgrid/routing.hpp"

#include <algorithm>

#include "dgrid/error.hpp"

namespace dgrid {

LinkKey link_key(const std::string& a, const std::string& b) {
  return a < b ? LinkKey{a, b} : LinkKey{b, a};
}

std::vector<std::string> route_packet(const GridTopology& topo, FlowState& flow, ChaChaStream& rng) {
  return route_packet(topo, flow, rng, hop_distances(topo, topo.node_index(flow.dst)));
}

std::vector<std::string> route_packet(const GridTopology& topo, FlowState& flow, ChaChaStream& rng,
                                      const std::vector<std::size_t>& hops) {
  const std::size_t src = topo.node_index(flow.src);
  const std::size_t dst = topo.node_index(flow.dst);
  if (hops[src] == kNoHops)
    throw UnreachableError("'" + flow.dst + "' is unreachable from '" + flow.src + "'");

  ++flow.packets_sent;
  std::vector<std::string> path;
  if (src == dst) return path;

  std::vector<std::size_t> candidates;
  std::size_t at = src;
  path.push_back(topo.nodes()[at].id);
  while (at != dst) {
    candidates.clear();
    for (const auto& nb : topo.neighbors(at))
      if (hops[nb.node] != kNoHops && hops[nb.node] < hops[at]) candidates.push_back(nb.node);

    if (at == src && candidates.size() >= 2 && flow.last_first_hop) {
      const auto excluded = std::find_if(candidates.begin(), candidates.end(), [&](std::size_t c) {
        return topo.nodes()[c].id == *flow.last_first_hop;
      });
      if (excluded != candidates.end()) candidates.erase(excluded);
    }
    at = candidates[rng.next_below(candidates.size())];
    if (path.size() == 1) flow.last_first_hop = topo.nodes()[at].id;
    path.push_back(topo.nodes()[at].id);
  }
  return path;
}

std::map<LinkKey, double> link_exposure(const GridTopology& topo, FlowState flow, std::uint64_t packet_count,
                                        std::uint64_t seed) {
  if (packet_count == 0) throw ParameterError("packet count must be positive");
  ChaChaStream rng(seed);
  const auto hops = hop_distances(topo, topo.node_index(flow.dst));
  std::map<LinkKey, std::uint64_t> crossings;
  for (std::uint64_t p = 0; p < packet_count; ++p) {
    const auto path = route_packet(topo, flow, rng, hops);
    for (std::size_t i = 1; i < path.size(); ++i) ++crossings[link_key(path[i - 1], path[i])];
  }
  std::map<LinkKey, double> out;
  for (const auto& [link, count] : crossings)
    out.emplace(link, static_cast<double>(count) / static_cast<double>(packet_count));
  return out;
}

}  // namespace dgrid
