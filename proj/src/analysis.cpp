#include "dgrid/analysis.hpp"

#include <bitset>
#include <cmath>
#include <set>
#include <vector>

#include "dgrid/error.hpp"
#include "dgrid/random.hpp"

namespace dgrid {
namespace {

using ShareMask = std::bitset<256>;

struct Holder {
  ShareMask shares;
  double comp_p;
  double fail_p;
};

std::vector<Holder> holders_of(const AllocationPlan& plan, const ThreatModel& threat) {
  std::map<std::string, ShareMask> masks;
  for (const auto& [index, nodes] : plan.placements)
    for (const auto& id : nodes) masks[id].set(static_cast<std::size_t>(index));

  std::vector<Holder> out;
  for (const auto& [id, mask] : masks) {
    const auto c = threat.comp_p.find(id);
    const auto f = threat.fail_p.find(id);
    if (c == threat.comp_p.end() || f == threat.fail_p.end())
      throw ReferenceError("threat model has no probabilities for node '" + id + "'");
    out.push_back({mask, c->second, f->second});
  }
  return out;
}

// Probability that the nodes selected with per-node probability `p` jointly
// hold at least k distinct shares, by recursion over include/exclude.
template <typename Prob>
double threshold_probability(const std::vector<Holder>& holders, int k, Prob p) {
  const auto k_bits = static_cast<std::size_t>(k);
  auto recurse = [&](auto&& self, std::size_t i, const ShareMask& held, double weight) -> double {
    if (weight == 0.0) return 0.0;
    // Every completion of this prefix succeeds; their weights sum to `weight`.
    if (held.count() >= k_bits) return weight;
    if (i == holders.size()) return 0.0;
    const double pi = p(holders[i]);
    return self(self, i + 1, held | holders[i].shares, weight * pi) +
           self(self, i + 1, held, weight * (1.0 - pi));
  };
  return recurse(recurse, 0, ShareMask{}, 1.0);
}

std::vector<Holder> exact_holders(const AllocationPlan& plan, const ThreatModel& threat) {
  threat.validate();
  auto holders = holders_of(plan, threat);
  if (holders.size() > kExactMaxNodes)
    throw TooLargeError("plan spans " + std::to_string(holders.size()) +
                        " nodes; exact enumeration is limited to 20 (use Monte Carlo)");
  return holders;
}

}  // namespace

ThreatModel ThreatModel::from_topology(const GridTopology& topo, int k) {
  ThreatModel t;
  t.k = k;
  for (const auto& n : topo.nodes()) {
    t.comp_p[n.id] = n.comp_p;
    t.fail_p[n.id] = n.fail_p;
  }
  return t;
}

void ThreatModel::validate() const {
  if (k < 1) throw ParameterError("threshold k must be at least 1");
  for (const auto* m : {&comp_p, &fail_p})
    for (const auto& [id, p] : *m)
      if (!(p >= 0.0 && p <= 1.0)) throw ParameterError("probability for node '" + id + "' outside [0, 1]");
}

std::string_view method_name(Method m) { return m == Method::exact ? "exact" : "monte_carlo"; }

double breach_prob_exact(const AllocationPlan& plan, const ThreatModel& threat) {
  const auto holders = exact_holders(plan, threat);
  return threshold_probability(holders, threat.k, [](const Holder& h) { return h.comp_p; });
}

double availability_exact(const AllocationPlan& plan, const ThreatModel& threat) {
  const auto holders = exact_holders(plan, threat);
  return threshold_probability(holders, threat.k, [](const Holder& h) { return 1.0 - h.fail_p; });
}

AnalysisReport analyze_exact(const AllocationPlan& plan, const ThreatModel& threat) {
  AnalysisReport r;
  r.method = Method::exact;
  r.breach_prob = breach_prob_exact(plan, threat);
  r.availability = availability_exact(plan, threat);
  return r;
}

AnalysisReport monte_carlo(const AllocationPlan& plan, const ThreatModel& threat, std::uint64_t trials,
                           std::uint64_t seed) {
  threat.validate();
  if (trials < 1) throw ParameterError("Monte Carlo needs at least one trial");
  const auto holders = holders_of(plan, threat);
  const auto k_bits = static_cast<std::size_t>(threat.k);
  const ChaChaStream base(seed);

  std::uint64_t breaches = 0, available = 0;
  for (std::uint64_t t = 0; t < trials; ++t) {
    ChaChaStream rng = base.fork(t);
    ShareMask stolen, surviving;
    for (const auto& h : holders) {
      if (rng.bernoulli(h.comp_p)) stolen |= h.shares;
      if (!rng.bernoulli(h.fail_p)) surviving |= h.shares;
    }
    if (stolen.count() >= k_bits) ++breaches;
    if (surviving.count() >= k_bits) ++available;
  }

  const double n = static_cast<double>(trials);
  auto stderr_of = [n](double p) { return std::sqrt(p * (1.0 - p) / n); };
  AnalysisReport r;
  r.method = Method::monte_carlo;
  r.trials = trials;
  r.breach_prob = static_cast<double>(breaches) / n;
  r.availability = static_cast<double>(available) / n;
  r.breach_stderr = stderr_of(r.breach_prob);
  r.availability_stderr = stderr_of(r.availability);
  return r;
}

}  // namespace dgrid
