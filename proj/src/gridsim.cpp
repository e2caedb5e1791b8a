#include "dgrid/gridsim.hpp"

#include <algorithm>

#include "dgrid/erasure.hpp"
#include "dgrid/error.hpp"
#include "dgrid/fragmentation.hpp"
#include "dgrid/shamir.hpp"
#include "dgrid/share_format.hpp"

namespace dgrid {
namespace {

std::vector<Share> partition(ByteView object, const PartitionSpec& spec, std::uint64_t seed) {
  switch (spec.scheme) {
    case Scheme::shamir: return split(object, spec.params, seed);
    case Scheme::rs_systematic: return encode(object, spec.params);
    case Scheme::rs_sealed: return sealed_encode(object, spec.params, seed);
    case Scheme::fragment:
      if (spec.params.k != spec.params.n) throw PlacementError("fragment families need k = n");
      return fragment(object, even_scheme(object.size(), spec.params.n));
  }
  throw PlacementError("unknown scheme");
}

Bytes rebuild(Scheme scheme, std::span<const Share> shares) {
  switch (scheme) {
    case Scheme::shamir: return reconstruct(shares);
    case Scheme::rs_systematic: return decode(shares);
    case Scheme::rs_sealed: return sealed_decode(shares);
    case Scheme::fragment: return reassemble(shares);
  }
  throw InconsistencyError("unknown scheme");
}

}  // namespace

SimWorld::SimWorld(GridTopology topology, std::uint64_t seed)
    : topology_(std::move(topology)),
      routing_rng_(seed),
      stores_(topology_.node_count()),
      used_bytes_(topology_.node_count(), 0) {}

bool SimWorld::is_down(std::string_view node) const { return down_.contains(topology_.node_index(node)); }

std::uint64_t SimWorld::transfer(const std::string& from, const std::string& to) {
  auto [it, inserted] = flows_.try_emplace({from, to}, FlowState{from, to, std::nullopt, 0});
  const auto path = route_packet(topology_, it->second, routing_rng_);
  for (std::size_t i = 1; i < path.size(); ++i) ++metrics_.per_link_traffic[link_key(path[i - 1], path[i])];
  const std::uint64_t hops = path.empty() ? 0 : path.size() - 1;
  metrics_.total_hops += hops;
  return hops;
}

ObjectId SimWorld::put_object(ByteView object, PartitionSpec spec, const AllocationPlan& plan, std::uint64_t seed,
                              std::optional<std::string_view> ingest_cluster) {
  ++clock_;
  spec.params.validate();
  if (plan.params != spec.params) throw PlacementError("plan (k, n) differs from the partition parameters");

  std::optional<std::size_t> ingest;
  if (ingest_cluster) {
    ingest = topology_.attach_index(*ingest_cluster);
    if (!ingest) throw PlacementError("ingest cluster '" + std::string(*ingest_cluster) + "' has no attach node");
  } else {
    for (const auto& c : topology_.clusters())
      if ((ingest = topology_.attach_index(c))) break;
    if (!ingest) throw PlacementError("topology has no client attach node to ingest from");
  }
  const std::string& ingest_id = topology_.nodes()[*ingest].id;
  const auto hops = hop_distances(topology_, *ingest);

  auto shares = partition(object, spec, seed);
  const ObjectId id = shares.front().object_id;
  if (objects_.contains(id)) throw PlacementError("object " + to_hex(id) + " is already stored");

  // Validate the whole plan before storing anything.
  std::vector<std::uint64_t> extra(topology_.node_count(), 0);
  for (const auto& [index, nodes] : plan.placements) {
    if (index < 1 || index > spec.params.n) throw PlacementError("plan share index outside [1, n]");
    for (const auto& node : nodes) {
      const auto v = topology_.find_node(node);
      if (!v) throw PlacementError("plan references unknown node '" + node + "'");
      if (down_.contains(*v)) throw PlacementError("plan places a share on down node '" + node + "'");
      if (hops[*v] == kNoHops) throw PlacementError("node '" + node + "' is unreachable from the ingest node");
      extra[*v] += shares[static_cast<std::size_t>(index - 1)].payload.size();
    }
  }
  for (std::size_t v = 0; v < extra.size(); ++v)
    if (used_bytes_[v] + extra[v] > topology_.nodes()[v].capacity)
      throw PlacementError("node '" + topology_.nodes()[v].id + "' lacks capacity");

  for (const auto& [index, nodes] : plan.placements) {
    const Share& share = shares[static_cast<std::size_t>(index - 1)];
    for (const auto& node : nodes) {
      const std::size_t v = topology_.node_index(node);
      transfer(ingest_id, node);
      stores_[v][{id, index}] = share;
      used_bytes_[v] += share.payload.size();
      metrics_.storage_bytes_per_node[node] += share.payload.size();
      metrics_.header_bytes_per_node[node] += kShareHeaderBytes + share.key_share.size();
    }
  }
  objects_[id] = StoredObject{spec, object.size()};
  return id;
}

Retrieval SimWorld::retrieve(const ObjectId& id, std::string_view cluster, const AccessToken& token) {
  ++clock_;
  if (!token.authorized_objects.contains(id))
    throw AuthorizationError("principal '" + token.principal + "' may not read " + to_hex(id));
  const auto obj = objects_.find(id);
  if (obj == objects_.end()) throw UnavailableError("object " + to_hex(id) + " is not stored");
  if (!topology_.has_cluster(cluster)) throw ReferenceError("unknown cluster '" + std::string(cluster) + "'");
  const auto attach = topology_.attach_index(cluster);
  if (!attach) throw ReferenceError("cluster '" + std::string(cluster) + "' has no attach node");

  // Nearest up holder of each share index, by weighted distance then node id.
  const auto dist = shortest_distances(topology_, *attach);
  struct Source {
    double dist;
    int index;
    std::size_t node;
  };
  std::map<int, Source> nearest;
  for (std::size_t v = 0; v < stores_.size(); ++v) {
    if (down_.contains(v) || dist[v] == kUnreachable) continue;
    for (auto it = stores_[v].lower_bound({id, 0}); it != stores_[v].end() && it->first.first == id; ++it) {
      const int index = it->first.second;
      const Source candidate{dist[v], index, v};
      auto [pos, inserted] = nearest.emplace(index, candidate);
      if (!inserted &&
          (candidate.dist < pos->second.dist ||
           (candidate.dist == pos->second.dist && topology_.nodes()[v].id < topology_.nodes()[pos->second.node].id)))
        pos->second = candidate;
    }
  }
  std::vector<Source> ranked;
  for (const auto& [index, s] : nearest) ranked.push_back(s);
  std::sort(ranked.begin(), ranked.end(), [](const Source& a, const Source& b) {
    return a.dist != b.dist ? a.dist < b.dist : a.index < b.index;
  });

  const int k = obj->second.spec.params.k;
  if (static_cast<int>(ranked.size()) < k)
    throw UnavailableError("only " + std::to_string(ranked.size()) + " distinct shares reachable, need " +
                           std::to_string(k));

  Retrieval result;
  std::vector<Share> fetched;
  const std::string& attach_id = topology_.nodes()[*attach].id;
  for (int i = 0; i < k; ++i) {
    const Source& s = ranked[static_cast<std::size_t>(i)];
    const std::string& holder = topology_.nodes()[s.node].id;
    ++metrics_.node_contacts;
    result.hops += transfer(holder, attach_id);
    result.sources.emplace_back(s.index, holder);
    fetched.push_back(stores_[s.node].at({id, s.index}));
  }
  result.data = rebuild(obj->second.spec.scheme, fetched);
  return result;
}

Bytes SimWorld::get_object(const ObjectId& id, std::string_view cluster, const AccessToken& token) {
  return retrieve(id, cluster, token).data;
}

void SimWorld::fail_nodes(std::span<const std::string> nodes) {
  ++clock_;
  std::vector<std::size_t> idx;
  for (const auto& n : nodes) idx.push_back(topology_.node_index(n));
  down_.insert(idx.begin(), idx.end());
}

void SimWorld::restore_nodes(std::span<const std::string> nodes) {
  ++clock_;
  std::vector<std::size_t> idx;
  for (const auto& n : nodes) idx.push_back(topology_.node_index(n));
  for (auto v : idx) down_.erase(v);
}

}  // namespace dgrid
