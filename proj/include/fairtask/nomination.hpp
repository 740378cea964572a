#ifndef FAIRTASK_NOMINATION_HPP_
#define FAIRTASK_NOMINATION_HPP_

#include <optional>
#include <span>
#include <vector>

#include "fairtask/geo.hpp"
#include "fairtask/interval_tree.hpp"
#include "fairtask/types.hpp"

namespace fairtask {

/// Availabilities covering the receive and deliver steps of one task.
/// Both ids may name the same availability.
struct SatisfyingPair {
  AvailabilityId receive = 0;
  AvailabilityId deliver = 0;

  bool single() const { return receive == deliver; }
  friend bool operator==(const SatisfyingPair&, const SatisfyingPair&) =
      default;
};

struct MovementCost {
  double alpha = 0.0;  // source to destination, worker independent
  double beta = 0.0;   // worker's extra travel
};

struct Nominee {
  WorkerId worker = 0;
  SatisfyingPair pair;
  double alpha = 0.0;
  double beta = 0.0;
  double acceptance_prob = 0.0;

  friend bool operator==(const Nominee&, const Nominee&) = default;
};

/// Availabilities indexed on their time periods.
class TemporalIndex {
 public:
  TemporalIndex() = default;
  explicit TemporalIndex(std::vector<Availability> availabilities);
  /// Indexes every availability of every worker.
  static TemporalIndex from_workers(std::span<const Worker> workers);

  std::vector<const Availability*> query(const TimePeriod& period) const;

  template <class Visitor>
  void for_each_overlapping(const TimePeriod& period, Visitor&& visit) const {
    tree_.for_each_overlapping(
        period, [&](const auto& item) { visit(item.value); });
  }

  std::size_t size() const { return tree_.size(); }

 private:
  IntervalTree<Availability> tree_;
};

/// Step (period, location) is covered by the availability: periods
/// intersect and the location lies in the closed disk.
bool satisfies(const TimePeriod& step_period, const GeoPoint& step_loc,
               const Availability& a, const DistanceMetric& metric);

MovementCost movement_cost(const Task& t, const Availability& receive,
                           const Availability& deliver,
                           const DistanceMetric& metric);

/// Beta-minimizing satisfying pair of the worker's availabilities, or
/// nullopt. Ties go to the smallest (receive id, deliver id).
std::optional<SatisfyingPair> nominate(const Task& t, const Worker& w,
                                       const DistanceMetric& metric);

/// e^(alpha - beta) * base. Throws std::invalid_argument when alpha exceeds
/// beta beyond rounding, or base is outside [0, 1].
double acceptance_probability(double alpha, double beta,
                              double base_acceptance);

/// Sorts by acceptance probability descending, then worker id ascending.
void sort_nominees(std::vector<Nominee>& nominees);

/// Every worker with a satisfying pair, sorted by sort_nominees.
std::vector<Nominee> nominee_list(const Task& t, const TemporalIndex& index,
                                  const DistanceMetric& metric,
                                  double base_acceptance);

}  // namespace fairtask

#endif  // FAIRTASK_NOMINATION_HPP_
