#include "fairtask/nomination.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>
#include <tuple>

namespace fairtask {
namespace {

std::vector<IntervalTree<Availability>::Item> to_items(
    std::vector<Availability> availabilities) {
  std::vector<IntervalTree<Availability>::Item> items;
  items.reserve(availabilities.size());
  for (auto& a : availabilities) {
    items.push_back({a.period, std::move(a)});
  }
  return items;
}

struct StepHit {
  const Availability* availability;
  double dist;  // center to the step location
};

bool by_worker_then_id(const StepHit& a, const StepHit& b) {
  return std::tie(a.availability->worker_id, a.availability->id) <
         std::tie(b.availability->worker_id, b.availability->id);
}

double pair_beta(const StepHit& r, const StepHit& d,
                 const DistanceMetric& metric) {
  if (r.availability->id == d.availability->id) return r.dist + d.dist;
  return 2.0 * r.dist + 2.0 * d.dist +
         metric.distance(r.availability->center, d.availability->center);
}

}  // namespace

TemporalIndex::TemporalIndex(std::vector<Availability> availabilities)
    : tree_(to_items(std::move(availabilities))) {}

TemporalIndex TemporalIndex::from_workers(std::span<const Worker> workers) {
  std::vector<Availability> all;
  for (const auto& w : workers) {
    all.insert(all.end(), w.availabilities.begin(), w.availabilities.end());
  }
  return TemporalIndex(std::move(all));
}

std::vector<const Availability*> TemporalIndex::query(
    const TimePeriod& period) const {
  std::vector<const Availability*> out;
  for_each_overlapping(period, [&](const Availability& a) { out.push_back(&a); });
  return out;
}

bool satisfies(const TimePeriod& step_period, const GeoPoint& step_loc,
               const Availability& a, const DistanceMetric& metric) {
  return step_period.overlaps(a.period) &&
         metric.within(a.center, step_loc, a.radius_km);
}

MovementCost movement_cost(const Task& t, const Availability& receive,
                           const Availability& deliver,
                           const DistanceMetric& metric) {
  MovementCost c;
  c.alpha = metric.distance(t.source_loc, t.dest_loc);
  const double to_source = metric.distance(receive.center, t.source_loc);
  const double from_dest = metric.distance(t.dest_loc, deliver.center);
  if (receive.id == deliver.id) {
    c.beta = to_source + from_dest;
  } else {
    c.beta = 2.0 * to_source + 2.0 * from_dest +
             metric.distance(receive.center, deliver.center);
  }
  return c;
}

std::optional<SatisfyingPair> nominate(const Task& t, const Worker& w,
                                       const DistanceMetric& metric) {
  std::optional<SatisfyingPair> best;
  double best_beta = std::numeric_limits<double>::infinity();
  for (const auto& p : w.availabilities) {
    if (!satisfies(t.source_period, t.source_loc, p, metric)) continue;
    for (const auto& q : w.availabilities) {
      if (!satisfies(t.dest_period, t.dest_loc, q, metric)) continue;
      const double beta = movement_cost(t, p, q, metric).beta;
      const SatisfyingPair cand{p.id, q.id};
      if (!best || beta < best_beta ||
          (beta == best_beta && std::tie(cand.receive, cand.deliver) <
                                    std::tie(best->receive, best->deliver))) {
        best = cand;
        best_beta = beta;
      }
    }
  }
  return best;
}

double acceptance_probability(double alpha, double beta,
                              double base_acceptance) {
  if (!(base_acceptance >= 0.0 && base_acceptance <= 1.0)) {
    throw std::invalid_argument("base acceptance must lie in [0, 1]");
  }
  if (alpha > beta) {
    if (alpha - beta > 1e-9 * std::max(1.0, alpha)) {
      throw std::invalid_argument(
          "alpha " + std::to_string(alpha) + " exceeds beta " +
          std::to_string(beta) + "; distance breaks the triangle inequality");
    }
    return base_acceptance;
  }
  return std::exp(alpha - beta) * base_acceptance;
}

void sort_nominees(std::vector<Nominee>& nominees) {
  std::sort(nominees.begin(), nominees.end(),
            [](const Nominee& a, const Nominee& b) {
              if (a.acceptance_prob != b.acceptance_prob) {
                return a.acceptance_prob > b.acceptance_prob;
              }
              return a.worker < b.worker;
            });
}

std::vector<Nominee> nominee_list(const Task& t, const TemporalIndex& index,
                                  const DistanceMetric& metric,
                                  double base_acceptance) {
  std::vector<StepHit> receive;
  std::vector<StepHit> deliver;
  index.for_each_overlapping(t.source_period, [&](const Availability& a) {
    if (metric.within(a.center, t.source_loc, a.radius_km)) {
      receive.push_back({&a, metric.distance(a.center, t.source_loc)});
    }
  });
  if (receive.empty()) return {};
  index.for_each_overlapping(t.dest_period, [&](const Availability& a) {
    if (metric.within(a.center, t.dest_loc, a.radius_km)) {
      deliver.push_back({&a, metric.distance(t.dest_loc, a.center)});
    }
  });
  if (deliver.empty()) return {};

  std::sort(receive.begin(), receive.end(), by_worker_then_id);
  std::sort(deliver.begin(), deliver.end(), by_worker_then_id);

  const double alpha = metric.distance(t.source_loc, t.dest_loc);
  std::vector<Nominee> out;
  auto r = receive.begin();
  auto d = deliver.begin();
  while (r != receive.end() && d != deliver.end()) {
    const WorkerId rw = r->availability->worker_id;
    const WorkerId dw = d->availability->worker_id;
    if (rw < dw) {
      ++r;
      continue;
    }
    if (dw < rw) {
      ++d;
      continue;
    }
    auto r_end = r;
    while (r_end != receive.end() && r_end->availability->worker_id == rw) {
      ++r_end;
    }
    auto d_end = d;
    while (d_end != deliver.end() && d_end->availability->worker_id == rw) {
      ++d_end;
    }
    // Lists are id-sorted, so strict improvement keeps the smallest ids on
    // ties.
    Nominee best;
    best.worker = rw;
    best.beta = std::numeric_limits<double>::infinity();
    for (auto ri = r; ri != r_end; ++ri) {
      for (auto di = d; di != d_end; ++di) {
        const double beta = pair_beta(*ri, *di, metric);
        if (beta < best.beta) {
          best.beta = beta;
          best.pair = {ri->availability->id, di->availability->id};
        }
      }
    }
    best.alpha = alpha;
    best.acceptance_prob =
        acceptance_probability(alpha, best.beta, base_acceptance);
    // Rounding on collinear points can leave beta a hair below alpha.
    best.beta = std::max(best.beta, alpha);
    out.push_back(best);
    r = r_end;
    d = d_end;
  }
  sort_nominees(out);
  return out;
}

}  // namespace fairtask
