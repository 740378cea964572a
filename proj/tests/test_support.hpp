#ifndef FAIRTASK_TESTS_TEST_SUPPORT_HPP_
#define FAIRTASK_TESTS_TEST_SUPPORT_HPP_

// Random instance generators and brute-force oracles shared by the unit
// tests and the acceptance runner. The oracles deliberately avoid the
// library's indexes and solvers.

#include <algorithm>
#include <cstdint>
#include <limits>
#include <map>
#include <optional>
#include <random>
#include <tuple>
#include <vector>

#include "fairtask/allocation.hpp"
#include "fairtask/geo.hpp"
#include "fairtask/nomination.hpp"
#include "fairtask/online.hpp"
#include "fairtask/types.hpp"

namespace fairtask::testing {

/// Random bipartite graph with at most `max_tasks` tasks and `max_workers`
/// workers; capacities in [0, max_capacity].
struct SmallGraph {
  AssignmentGraph graph;
  std::vector<Worker> workers;
  std::vector<int> capacities;
};

inline SmallGraph random_small_graph(std::mt19937_64& rng, int max_tasks,
                                     int max_workers, int max_capacity,
                                     double edge_prob = 0.4) {
  std::uniform_int_distribution<int> ntasks(0, max_tasks);
  std::uniform_int_distribution<int> nworkers(1, max_workers);
  std::uniform_int_distribution<int> cap(0, max_capacity);
  std::uniform_int_distribution<int> reward(1, 5000);
  std::uniform_real_distribution<double> beta(0.0, 10.0);
  std::bernoulli_distribution edge(edge_prob);

  SmallGraph g;
  const int nw = nworkers(rng);
  for (int w = 0; w < nw; ++w) {
    Worker worker;
    worker.id = static_cast<WorkerId>(w);
    worker.capacity = cap(rng);
    g.capacities.push_back(worker.capacity);
    g.workers.push_back(worker);
  }
  const int nt = ntasks(rng);
  for (int t = 0; t < nt; ++t) {
    TaskNode node;
    node.id = static_cast<TaskId>(t);
    node.reward = Money{reward(rng)};
    node.alpha = 1.0;
    std::vector<WorkerId> order;
    for (int w = 0; w < nw; ++w) {
      if (edge(rng)) order.push_back(static_cast<WorkerId>(w));
    }
    std::shuffle(order.begin(), order.end(), rng);
    for (WorkerId w : order) {
      node.candidates.push_back({w, beta(rng), {w, w}});
    }
    g.graph.tasks.push_back(std::move(node));
  }
  return g;
}

/// Exhaustive maximum number of allocatable tasks, by memoized enumeration
/// over (task index, residual capacities).
inline std::size_t brute_force_max_allocations(const AssignmentGraph& g,
                                               const std::vector<int>& caps) {
  std::map<std::pair<std::size_t, std::vector<int>>, std::size_t> memo;
  auto rec = [&](auto& self, std::size_t i, std::vector<int>& residual) -> std::size_t {
    if (i == g.tasks.size()) return 0;
    auto key = std::make_pair(i, residual);
    if (auto it = memo.find(key); it != memo.end()) return it->second;
    std::size_t best = self(self, i + 1, residual);
    for (const CandidateEdge& e : g.tasks[i].candidates) {
      if (residual[e.worker] > 0) {
        --residual[e.worker];
        best = std::max(best, 1 + self(self, i + 1, residual));
        ++residual[e.worker];
      }
    }
    memo.emplace(std::move(key), best);
    return best;
  };
  std::vector<int> residual = caps;
  return rec(rec, 0, residual);
}

/// Nominee list computed by scanning every availability pair of every
/// worker, with no index.
inline std::vector<Nominee> brute_force_nominees(const Task& t,
                                                 const std::vector<Worker>& workers,
                                                 const DistanceMetric& metric,
                                                 double base) {
  std::vector<Nominee> out;
  for (const Worker& w : workers) {
    std::optional<std::tuple<double, AvailabilityId, AvailabilityId>> best;
    MovementCost best_cost;
    for (const Availability& p : w.availabilities) {
      if (!satisfies(t.source_period, t.source_loc, p, metric)) continue;
      for (const Availability& q : w.availabilities) {
        if (!satisfies(t.dest_period, t.dest_loc, q, metric)) continue;
        const MovementCost c = movement_cost(t, p, q, metric);
        const auto key = std::make_tuple(c.beta, p.id, q.id);
        if (!best || key < *best) {
          best = key;
          best_cost = c;
        }
      }
    }
    if (!best) continue;
    Nominee n;
    n.worker = w.id;
    n.pair = {std::get<1>(*best), std::get<2>(*best)};
    n.alpha = best_cost.alpha;
    n.beta = std::max(best_cost.beta, best_cost.alpha);
    n.acceptance_prob = acceptance_probability(n.alpha, n.beta, base);
    out.push_back(n);
  }
  std::sort(out.begin(), out.end(), [](const Nominee& a, const Nominee& b) {
    if (a.acceptance_prob != b.acceptance_prob) {
      return a.acceptance_prob > b.acceptance_prob;
    }
    return a.worker < b.worker;
  });
  return out;
}

/// Planar instance on a [0, extent]^2 grid with timestamps in [0, horizon].
inline Instance random_planar_instance(std::mt19937_64& rng, int tasks,
                                       int workers, int avail_per_worker,
                                       double extent = 10.0,
                                       Timestamp horizon = 100) {
  std::uniform_real_distribution<double> coord(0.0, extent);
  std::uniform_int_distribution<Timestamp> when(0, horizon);
  std::uniform_int_distribution<Timestamp> len(0, horizon / 4);
  std::uniform_real_distribution<double> radius(0.5, extent / 2);
  std::uniform_int_distribution<int> cap(0, 3);
  std::uniform_int_distribution<int> reward(100, 5000);

  Instance inst;
  AvailabilityId next_avail = 0;
  for (int w = 0; w < workers; ++w) {
    Worker worker;
    worker.id = static_cast<WorkerId>(w);
    worker.capacity = cap(rng);
    for (int a = 0; a < avail_per_worker; ++a) {
      Availability av;
      av.id = next_avail++;
      av.worker_id = worker.id;
      const Timestamp b = when(rng);
      av.period = {b, b + len(rng)};
      av.center = {coord(rng), coord(rng)};
      av.radius_km = radius(rng);
      worker.availabilities.push_back(av);
    }
    inst.workers.push_back(std::move(worker));
  }
  for (int i = 0; i < tasks; ++i) {
    Task t;
    t.id = static_cast<TaskId>(i);
    const Timestamp s = when(rng);
    t.source_period = {s, s + len(rng)};
    const Timestamp d = t.source_period.begin + len(rng);
    t.dest_period = {d, d + len(rng)};
    t.source_loc = {coord(rng), coord(rng)};
    t.dest_loc = {coord(rng), coord(rng)};
    t.reward = Money{reward(rng)};
    inst.tasks.push_back(t);
  }
  return inst;
}

/// Stream where every event arrives before any period ends, plus a window
/// long enough to hold all of it.
struct AdvanceBooking {
  EventStream stream;
  int window_minutes = 1;
};

inline AdvanceBooking advance_booking(const Instance& inst) {
  Timestamp min_begin = std::numeric_limits<Timestamp>::max();
  Timestamp max_begin = std::numeric_limits<Timestamp>::min();
  Timestamp min_end = std::numeric_limits<Timestamp>::max();
  auto see = [&](const TimePeriod& p) {
    min_begin = std::min(min_begin, p.begin);
    max_begin = std::max(max_begin, p.begin);
    min_end = std::min(min_end, p.end);
  };
  for (const Task& t : inst.tasks) see(t.source_period);
  for (const Worker& w : inst.workers) {
    for (const Availability& a : w.availabilities) see(a.period);
  }
  AdvanceBooking out;
  out.window_minutes = static_cast<int>((max_begin - min_begin) / 60 + 1);
  const Timestamp lead =
      std::max<Timestamp>(0, min_begin + 60 * out.window_minutes - min_end);
  out.stream = make_event_stream(inst, lead);
  return out;
}

}  // namespace fairtask::testing

#endif  // FAIRTASK_TESTS_TEST_SUPPORT_HPP_
