#ifndef FAIRTASK_PIPELINE_HPP_
#define FAIRTASK_PIPELINE_HPP_

#include <cstdint>
#include <span>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "fairtask/allocation.hpp"
#include "fairtask/geo.hpp"
#include "fairtask/metrics.hpp"
#include "fairtask/nomination.hpp"
#include "fairtask/offers.hpp"
#include "fairtask/types.hpp"

namespace fairtask {

struct PipelineConfig {
  OfferPolicy policy;
  Allocator allocator = Allocator::f_aware;
  double base_acceptance = 0.9;
  double rho = 1.0;
  std::uint64_t seed = 1;
  bool keep_sessions = false;  // retain full OfferSessions for tracing

  void validate() const;
};

/// Workers already offered each task; never shrinks.
using OfferedMemory = std::unordered_map<TaskId, std::unordered_set<WorkerId>>;

struct PassOutcome {
  AssignmentGraph graph;
  AssignmentResult result;
  std::vector<OfferSession> sessions;  // only with keep_sessions
  double allocation_seconds = 0.0;
};

/// One nominate -> offer -> allocate pass over `tasks` against the
/// availabilities in `index`. Acceptances and allocations land in
/// `ledgers`; offer tallies in `stats`. With `memory`, nominees that already
/// received a task are skipped and new offers are remembered.
///
/// In unicast mode a nominee whose acceptances already fill her capacity is
/// skipped, so every acceptance stays allocatable.
PassOutcome run_matching_pass(std::span<const Task* const> tasks,
                              const TemporalIndex& index,
                              const DistanceMetric& metric,
                              const PipelineConfig& config,
                              LedgerBook& ledgers, AcceptanceSampler& sampler,
                              OfferStats& stats, OfferedMemory* memory,
                              std::uint64_t allocation_seed);

struct RunOutcome {
  MetricsReport report;
  AssignmentResult assignments;
  std::vector<OfferSession> sessions;
  LedgerBook ledgers;
  double allocation_seconds = 0.0;
};

/// Offline two-phase run: all tasks and availabilities known up front,
/// tasks offered in id order, then a single allocation.
RunOutcome run_offline(const Instance& instance, const PipelineConfig& config,
                       const DistanceMetric& metric);

/// Sub-stream tags for derive_seed.
enum SeedTag : std::uint64_t {
  kAcceptanceStream = 0xacce97,
  kAllocatorStream = 0xa110c,
  kDatasetStream = 0xda7a,
};

}  // namespace fairtask

#endif  // FAIRTASK_PIPELINE_HPP_
