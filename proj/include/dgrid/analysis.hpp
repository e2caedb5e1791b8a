#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>

#include "dgrid/allocation.hpp"
#include "dgrid/topology.hpp"

namespace dgrid {

/// Independent per-node Bernoulli compromise and failure, threshold k.
struct ThreatModel {
  std::map<std::string, double> comp_p;
  std::map<std::string, double> fail_p;
  int k = 1;

  static ThreatModel from_topology(const GridTopology& topo, int k);
  void validate() const;
};

enum class Method { exact, monte_carlo };
std::string_view method_name(Method m);

struct AnalysisReport {
  double breach_prob = 0.0;
  double availability = 0.0;
  Method method = Method::exact;
  std::uint64_t trials = 0;                   // monte_carlo only
  std::optional<double> breach_stderr;        // monte_carlo only
  std::optional<double> availability_stderr;  // monte_carlo only

  friend bool operator==(const AnalysisReport&, const AnalysisReport&) = default;
};

/// Nodes a plan may span for exact enumeration.
constexpr std::size_t kExactMaxNodes = 20;

/// P[compromised nodes jointly hold >= k distinct share indices], summed over
/// all compromise subsets of the plan's nodes. TooLargeError past 20 nodes.
double breach_prob_exact(const AllocationPlan& plan, const ThreatModel& threat);

/// P[surviving nodes jointly hold >= k distinct share indices].
double availability_exact(const AllocationPlan& plan, const ThreatModel& threat);

AnalysisReport analyze_exact(const AllocationPlan& plan, const ThreatModel& threat);

/// Sampled estimate. Trial t draws, per plan node in id order, a compromise
/// then a failure indicator from the stream (seed, t), so reports are
/// reproducible and independent of evaluation order.
AnalysisReport monte_carlo(const AllocationPlan& plan, const ThreatModel& threat, std::uint64_t trials,
                           std::uint64_t seed);

}  // namespace dgrid
