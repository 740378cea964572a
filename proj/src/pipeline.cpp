#include "fairtask/pipeline.hpp"

#include <algorithm>
#include <chrono>
#include <stdexcept>

#include "fairtask/random.hpp"

namespace fairtask {

void PipelineConfig::validate() const {
  policy.validate();
  if (!(base_acceptance >= 0.0 && base_acceptance <= 1.0)) {
    throw std::invalid_argument("base_acceptance must lie in [0, 1]");
  }
  if (!(rho >= 0.0 && rho <= 1.0)) {
    throw std::invalid_argument("rho must lie in [0, 1]");
  }
}

PassOutcome run_matching_pass(std::span<const Task* const> tasks,
                              const TemporalIndex& index,
                              const DistanceMetric& metric,
                              const PipelineConfig& config,
                              LedgerBook& ledgers, AcceptanceSampler& sampler,
                              OfferStats& stats, OfferedMemory* memory,
                              std::uint64_t allocation_seed) {
  PassOutcome out;
  const bool unicast = config.policy.mode == OfferMode::unicast;
  for (const Task* task : tasks) {
    std::vector<Nominee> nominees =
        nominee_list(*task, index, metric, config.base_acceptance);
    std::unordered_set<WorkerId>* offered_before = nullptr;
    if (memory) offered_before = &(*memory)[task->id];
    std::erase_if(nominees, [&](const Nominee& n) {
      if (offered_before && offered_before->count(n.worker)) return true;
      if (unicast) {
        const WorkerLedger& l = ledgers.at(n.worker);
        return l.accepted().size() >= static_cast<std::size_t>(l.capacity());
      }
      return false;
    });
    if (nominees.empty()) continue;

    OfferSession session =
        run_offer_rounds(*task, std::move(nominees), config.policy, sampler);
    ++stats.sessions;
    stats.k_sum += session.k;
    if (!session.candidates.empty()) {
      ++stats.answered_sessions;
      stats.answered_rounds_sum += session.rounds_waited;
    }
    if (offered_before) {
      offered_before->insert(session.offered.begin(), session.offered.end());
    }

    if (!session.candidates.empty()) {
      TaskNode node;
      node.id = task->id;
      node.reward = task->reward;
      node.alpha = session.nominees.front().alpha;
      node.candidates.reserve(session.candidates.size());
      // Candidates are a prefix-ordered subset of the nominee list.
      for (const Nominee& n : session.nominees) {
        if (std::find(session.candidates.begin(), session.candidates.end(),
                      n.worker) == session.candidates.end()) {
          continue;
        }
        ledgers.at(n.worker).record_acceptance(task->id, task->reward);
        node.candidates.push_back({n.worker, n.beta, n.pair});
      }
      out.graph.tasks.push_back(std::move(node));
    }
    if (config.keep_sessions) out.sessions.push_back(std::move(session));
  }

  const auto start = std::chrono::steady_clock::now();
  out.result = allocate(config.allocator, out.graph, ledgers, allocation_seed);
  out.allocation_seconds = std::chrono::duration<double>(
                               std::chrono::steady_clock::now() - start)
                               .count();
  return out;
}

RunOutcome run_offline(const Instance& instance, const PipelineConfig& config,
                       const DistanceMetric& metric) {
  config.validate();
  validate(instance);

  std::vector<const Task*> tasks;
  tasks.reserve(instance.tasks.size());
  for (const Task& t : instance.tasks) tasks.push_back(&t);
  std::stable_sort(tasks.begin(), tasks.end(),
                   [](const Task* a, const Task* b) { return a->id < b->id; });

  const TemporalIndex index = TemporalIndex::from_workers(instance.workers);
  RunOutcome run;
  run.ledgers = LedgerBook(instance.workers);
  KeyedAcceptanceSampler sampler(derive_seed(config.seed, kAcceptanceStream));
  OfferStats stats;
  PassOutcome pass = run_matching_pass(
      tasks, index, metric, config, run.ledgers, sampler, stats, nullptr,
      derive_seed(config.seed, kAllocatorStream));

  run.assignments = std::move(pass.result);
  // Tasks that never reached the allocator are unallocated too.
  for (const Task& t : instance.tasks) {
    if (!run.assignments.assignments.count(t.id)) {
      run.assignments.unallocated.insert(t.id);
    }
  }
  run.sessions = std::move(pass.sessions);
  run.allocation_seconds = pass.allocation_seconds;
  run.report =
      summarize(run.ledgers, instance.tasks.size(), stats, config.rho);
  return run;
}

}  // namespace fairtask
