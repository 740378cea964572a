#ifndef FAIRTASK_ALLOCATION_HPP_
#define FAIRTASK_ALLOCATION_HPP_

#include <cstdint>
#include <map>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "fairtask/metrics.hpp"
#include "fairtask/nomination.hpp"
#include "fairtask/types.hpp"

namespace fairtask {

struct CandidateEdge {
  WorkerId worker = 0;
  double beta = 0.0;  // worker-dependent movement, km
  SatisfyingPair pair;
};

struct TaskNode {
  TaskId id = 0;
  Money reward;
  double alpha = 0.0;
  std::vector<CandidateEdge> candidates;  // acceptance order
};

/// Task-to-candidate bipartite graph. Worker capacities and LARs live in the
/// LedgerBook passed alongside; every edge must match a recorded acceptance.
struct AssignmentGraph {
  std::vector<TaskNode> tasks;  // arrival order
};

struct AssignmentResult {
  std::map<TaskId, WorkerId> assignments;
  std::set<TaskId> unallocated;

  friend bool operator==(const AssignmentResult&, const AssignmentResult&) =
      default;
};

enum class Allocator { f_aware, random, laf, nearest, mcf };

std::string_view to_string(Allocator allocator);
/// Throws std::invalid_argument on an unknown name.
Allocator parse_allocator(std::string_view name);

// Every allocator writes its assignments into `ledgers` (allocated reward,
// residual capacity, travelled km) as it goes.

/// Tasks by ascending candidate count (then id); each goes to the
/// capacitated candidate with the lowest LAR, ties to the larger LAR
/// denominator, then the smaller worker id.
AssignmentResult f_aware(const AssignmentGraph& g, LedgerBook& ledgers);

/// Uniform choice among capacitated candidates, tasks in arrival order.
AssignmentResult random_alloc(const AssignmentGraph& g, LedgerBook& ledgers,
                              std::uint64_t seed);

/// Fewest current allocations first, ties by worker id.
AssignmentResult laf_alloc(const AssignmentGraph& g, LedgerBook& ledgers);

/// Smallest beta first, ties by worker id.
AssignmentResult nearest_alloc(const AssignmentGraph& g, LedgerBook& ledgers);

/// Maximum number of allocations; among maximum assignments, minimal total
/// beta in whole meters. Solved as min-cost max-flow.
AssignmentResult mcf_alloc(const AssignmentGraph& g, LedgerBook& ledgers);

AssignmentResult allocate(Allocator allocator, const AssignmentGraph& g,
                          LedgerBook& ledgers, std::uint64_t seed);

/// Post-hoc check of the candidacy and capacity constraints. `capacities`
/// are the residual capacities before allocation. Returns one message per
/// violation; empty means the result is feasible.
std::vector<std::string> check_constraints(const AssignmentGraph& g,
                                           const AssignmentResult& result,
                                           const std::vector<int>& capacities);

}  // namespace fairtask

#endif  // FAIRTASK_ALLOCATION_HPP_
