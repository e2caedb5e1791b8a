#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "dgrid/random.hpp"
#include "dgrid/topology.hpp"

namespace dgrid {

struct FlowState {
  std::string src;
  std::string dst;
  std::optional<std::string> last_first_hop;  // source's next hop for the previous packet
  std::uint64_t packets_sent = 0;
};

/// Randomized downhill routing of one packet.
///
/// Every hop moves to a neighbor strictly closer (in hops) to the
/// destination, chosen uniformly from `rng`. At the source the previous
/// packet's first hop is excluded whenever at least two candidates exist, so
/// consecutive packets of a flow never share a first link. Returns the node
/// sequence src..dst (empty when src == dst) and updates `flow`.
/// Throws UnreachableError when dst cannot be reached.
std::vector<std::string> route_packet(const GridTopology& topo, FlowState& flow, ChaChaStream& rng);

/// Same, with hop distances to flow.dst already computed.
std::vector<std::string> route_packet(const GridTopology& topo, FlowState& flow, ChaChaStream& rng,
                                      const std::vector<std::size_t>& hops_to_dst);

/// Undirected link key with first < second.
using LinkKey = std::pair<std::string, std::string>;
LinkKey link_key(const std::string& a, const std::string& b);

/// Routes `packet_count` packets of `flow` with a stream seeded by `seed` and
/// returns the fraction of packets that crossed each link.
std::map<LinkKey, double> link_exposure(const GridTopology& topo, FlowState flow, std::uint64_t packet_count,
                                        std::uint64_t seed);

}  // namespace dgrid
