#include "fairtask/allocation.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <stdexcept>
#include <unordered_map>

#include "fairtask/min_cost_flow.hpp"
#include "fairtask/random.hpp"

namespace fairtask {
namespace {

void assign(const TaskNode& node, const CandidateEdge& edge,
            LedgerBook& ledgers, AssignmentResult& result) {
  ledgers.at(edge.worker)
      .record_allocation(node.id, node.reward, node.alpha + edge.beta);
  result.assignments.emplace(node.id, edge.worker);
}

bool has_capacity(const LedgerBook& ledgers, WorkerId w) {
  return ledgers.at(w).residual_capacity() > 0;
}

// Walks tasks in arrival order and lets `better(a, b)` pick among the
// capacitated candidates of each.
template <class Better>
AssignmentResult greedy_in_arrival_order(const AssignmentGraph& g,
                                         LedgerBook& ledgers, Better better) {
  AssignmentResult result;
  for (const TaskNode& node : g.tasks) {
    const CandidateEdge* pick = nullptr;
    for (const CandidateEdge& e : node.candidates) {
      if (!has_capacity(ledgers, e.worker)) continue;
      if (pick == nullptr || better(e, *pick)) pick = &e;
    }
    if (pick) {
      assign(node, *pick, ledgers, result);
    } else {
      result.unallocated.insert(node.id);
    }
  }
  return result;
}

}  // namespace

std::string_view to_string(Allocator allocator) {
  switch (allocator) {
    case Allocator::f_aware:
      return "f_aware";
    case Allocator::random:
      return "random";
    case Allocator::laf:
      return "laf";
    case Allocator::nearest:
      return "nearest";
    case Allocator::mcf:
      return "mcf";
  }
  return "unknown";
}

Allocator parse_allocator(std::string_view name) {
  if (name == "f_aware" || name == "f-aware") return Allocator::f_aware;
  if (name == "random") return Allocator::random;
  if (name == "laf") return Allocator::laf;
  if (name == "nearest") return Allocator::nearest;
  if (name == "mcf") return Allocator::mcf;
  throw std::invalid_argument("unknown allocator '" + std::string(name) +
                              "'");
}

AssignmentResult f_aware(const AssignmentGraph& g, LedgerBook& ledgers) {
  // Bucket by degree keeping arrival order; within a bucket the ids are
  // usually ascending already, so most buckets are forward scans of the graph.
  std::vector<std::vector<std::uint32_t>> buckets;
  for (std::size_t i = 0; i < g.tasks.size(); ++i) {
    const std::size_t degree = g.tasks[i].candidates.size();
    if (degree >= buckets.size()) buckets.resize(degree + 1);
    buckets[degree].push_back(static_cast<std::uint32_t>(i));
  }
  const auto by_id = [&](std::uint32_t a, std::uint32_t b) {
    return g.tasks[a].id < g.tasks[b].id;
  };
  std::vector<std::uint32_t> order;
  order.reserve(g.tasks.size());
  for (auto& bucket : buckets) {
    if (!std::is_sorted(bucket.begin(), bucket.end(), by_id)) {
      std::sort(bucket.begin(), bucket.end(), by_id);
    }
    order.insert(order.end(), bucket.begin(), bucket.end());
  }

  std::vector<std::pair<TaskId, WorkerId>> picks;
  std::vector<TaskId> missed;
  picks.reserve(g.tasks.size());
  for (std::uint32_t index : order) {
    const TaskNode& node = g.tasks[index];
    // The first capacitated worker of the LAR-sorted candidate list is the
    // minimum under the same ordering, so one scan suffices.
    const CandidateEdge* pick = nullptr;
    LarRatio pick_lar;
    for (const CandidateEdge& e : node.candidates) {
      const WorkerLedger& ledger = ledgers.at(e.worker);
      if (ledger.residual_capacity() <= 0) continue;
      const LarRatio lar = ledger.lar_ratio();
      bool take = pick == nullptr;
      if (!take) {
        const auto cmp = compare_value(lar, pick_lar);
        if (cmp < 0) {
          take = true;
        } else if (cmp == 0) {
          take = lar.counted > pick_lar.counted ||
                 (lar.counted == pick_lar.counted && e.worker < pick->worker);
        }
      }
      if (take) {
        pick = &e;
        pick_lar = lar;
      }
    }
    if (pick) {
      ledgers.at(pick->worker)
          .record_allocation(node.id, node.reward, node.alpha + pick->beta);
      picks.emplace_back(node.id, pick->worker);
    } else {
      missed.push_back(node.id);
    }
  }

  // Filling the ordered containers in key order makes each insert O(1).
  std::sort(picks.begin(), picks.end());
  std::sort(missed.begin(), missed.end());
  AssignmentResult result;
  for (const auto& [task, worker] : picks) {
    result.assignments.emplace_hint(result.assignments.end(), task, worker);
  }
  for (TaskId task : missed) result.unallocated.emplace_hint(result.unallocated.end(), task);
  return result;
}

AssignmentResult random_alloc(const AssignmentGraph& g, LedgerBook& ledgers,
                              std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  AssignmentResult result;
  std::vector<const CandidateEdge*> open;
  for (const TaskNode& node : g.tasks) {
    open.clear();
    for (const CandidateEdge& e : node.candidates) {
      if (has_capacity(ledgers, e.worker)) open.push_back(&e);
    }
    if (open.empty()) {
      result.unallocated.insert(node.id);
      continue;
    }
    assign(node, *open[bounded_index(rng, open.size())], ledgers, result);
  }
  return result;
}

AssignmentResult laf_alloc(const AssignmentGraph& g, LedgerBook& ledgers) {
  return greedy_in_arrival_order(
      g, ledgers, [&](const CandidateEdge& a, const CandidateEdge& b) {
        const int ca = ledgers.at(a.worker).allocated_count();
        const int cb = ledgers.at(b.worker).allocated_count();
        if (ca != cb) return ca < cb;
        return a.worker < b.worker;
      });
}

AssignmentResult nearest_alloc(const AssignmentGraph& g, LedgerBook& ledgers) {
  return greedy_in_arrival_order(
      g, ledgers, [](const CandidateEdge& a, const CandidateEdge& b) {
        if (a.beta != b.beta) return a.beta < b.beta;
        return a.worker < b.worker;
      });
}

AssignmentResult mcf_alloc(const AssignmentGraph& g, LedgerBook& ledgers) {
  // Node layout: source, tasks, referenced workers, sink.
  std::unordered_map<WorkerId, std::size_t> worker_node;
  std::vector<WorkerId> workers;
  for (const TaskNode& node : g.tasks) {
    for (const CandidateEdge& e : node.candidates) {
      if (worker_node.emplace(e.worker, 0).second) workers.push_back(e.worker);
    }
  }
  std::sort(workers.begin(), workers.end());
  const std::size_t source = 0;
  const std::size_t first_worker = 1 + g.tasks.size();
  for (std::size_t i = 0; i < workers.size(); ++i) {
    worker_node[workers[i]] = first_worker + i;
  }
  const std::size_t sink = first_worker + workers.size();

  MinCostFlow flow(sink + 1);
  std::vector<std::vector<std::size_t>> edge_of(g.tasks.size());
  for (std::size_t t = 0; t < g.tasks.size(); ++t) {
    flow.add_edge(source, 1 + t, 1, 0);
    for (const CandidateEdge& e : g.tasks[t].candidates) {
      const auto meters = static_cast<MinCostFlow::Cost>(
          std::llround(std::max(0.0, e.beta) * 1000.0));
      edge_of[t].push_back(
          flow.add_edge(1 + t, worker_node.at(e.worker), 1, meters));
    }
  }
  for (std::size_t i = 0; i < workers.size(); ++i) {
    const int cap = std::max(0, ledgers.at(workers[i]).residual_capacity());
    flow.add_edge(first_worker + i, sink, cap, 0);
  }
  flow.solve(source, sink);

  AssignmentResult result;
  for (std::size_t t = 0; t < g.tasks.size(); ++t) {
    const TaskNode& node = g.tasks[t];
    const CandidateEdge* pick = nullptr;
    for (std::size_t j = 0; j < node.candidates.size(); ++j) {
      if (flow.flow_on(edge_of[t][j]) > 0) pick = &node.candidates[j];
    }
    if (pick) {
      assign(node, *pick, ledgers, result);
    } else {
      result.unallocated.insert(node.id);
    }
  }
  return result;
}

AssignmentResult allocate(Allocator allocator, const AssignmentGraph& g,
                          LedgerBook& ledgers, std::uint64_t seed) {
  switch (allocator) {
    case Allocator::f_aware:
      return f_aware(g, ledgers);
    case Allocator::random:
      return random_alloc(g, ledgers, seed);
    case Allocator::laf:
      return laf_alloc(g, ledgers);
    case Allocator::nearest:
      return nearest_alloc(g, ledgers);
    case Allocator::mcf:
      return mcf_alloc(g, ledgers);
  }
  throw std::invalid_argument("unknown allocator");
}

std::vector<std::string> check_constraints(const AssignmentGraph& g,
                                           const AssignmentResult& result,
                                           const std::vector<int>& capacities) {
  std::vector<std::string> errors;
  std::unordered_map<WorkerId, int> load;
  std::size_t seen = 0;
  for (const TaskNode& node : g.tasks) {
    const auto it = result.assignments.find(node.id);
    const bool unallocated = result.unallocated.count(node.id) > 0;
    if (it == result.assignments.end()) {
      if (!unallocated) {
        errors.push_back("task " + std::to_string(node.id) +
                         " is neither assigned nor unallocated");
      }
      continue;
    }
    ++seen;
    if (unallocated) {
      errors.push_back("task " + std::to_string(node.id) +
                       " is both assigned and unallocated");
    }
    const WorkerId w = it->second;
    const bool candidate =
        std::any_of(node.candidates.begin(), node.candidates.end(),
                    [&](const CandidateEdge& e) { return e.worker == w; });
    if (!candidate) {
      errors.push_back("task " + std::to_string(node.id) +
                       " assigned to non-candidate worker " +
                       std::to_string(w));
    }
    ++load[w];
  }
  if (seen != result.assignments.size()) {
    errors.push_back("result assigns tasks outside the graph");
  }
  for (const auto& [w, n] : load) {
    const int cap = w < capacities.size() ? capacities[w] : 0;
    if (n > cap) {
      errors.push_back("worker " + std::to_string(w) + " holds " +
                       std::to_string(n) + " tasks over capacity " +
                       std::to_string(cap));
    }
  }
  return errors;
}

}  // namespace fairtask
