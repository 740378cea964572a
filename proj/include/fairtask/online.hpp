#ifndef FAIRTASK_ONLINE_HPP_
#define FAIRTASK_ONLINE_HPP_

#include <map>
#include <variant>
#include <vector>

#include "fairtask/geo.hpp"
#include "fairtask/metrics.hpp"
#include "fairtask/pipeline.hpp"
#include "fairtask/types.hpp"

namespace fairtask {

struct TaskArrival {
  Task task;
};

struct AvailabilityArrival {
  Availability availability;
};

struct Event {
  Timestamp time = 0;
  std::variant<TaskArrival, AvailabilityArrival> payload;
};

/// Timestamped arrivals in nondecreasing time order.
struct EventStream {
  std::vector<Event> events;

  /// Throws std::invalid_argument on a decreasing timestamp.
  void validate() const;
};

/// Each task and availability arrives `lead_seconds` before its period
/// starts. Ties go availabilities first, then by id.
EventStream make_event_stream(const Instance& instance,
                              Timestamp lead_seconds = 0);

struct AssignmentLogEntry {
  Timestamp time = 0;
  TaskId task = 0;
  WorkerId worker = 0;
  SatisfyingPair pair;
};

struct OnlineOutcome {
  MetricsReport report;
  AssignmentResult assignments;
  std::vector<AssignmentLogEntry> log;
  std::vector<OfferSession> sessions;
  LedgerBook ledgers;
  std::size_t passes = 0;
};

/// Event-driven simulator of the windowed two-phase pipeline.
///
/// Pending tasks and live availabilities sit in windows. A task leaves on
/// allocation or once its source period has ended; an availability leaves
/// once its period has ended. With a positive window, matching passes fire
/// every window_minutes from the first event; the last pass is the first
/// boundary at or after the final event. With a zero window, a task arrival
/// is matched at once and an availability arrival re-matches every parked
/// task. A task is never offered to the same worker twice.
class OnlineEngine {
 public:
  /// `workers` supplies capacities; their availabilities are ignored and
  /// must arrive through the stream.
  OnlineEngine(std::span<const Worker> workers, PipelineConfig config,
               const DistanceMetric& metric, int window_minutes);

  /// Single use: the engine's state moves into the outcome.
  OnlineOutcome run(const EventStream& stream);

 private:
  void ingest(const Event& event);
  void expire(Timestamp now);
  void match(Timestamp now);

  PipelineConfig config_;
  const DistanceMetric& metric_;
  int window_minutes_;

  std::map<TaskId, Task> pending_;
  std::map<AvailabilityId, Availability> live_;
  OfferedMemory memory_;
  KeyedAcceptanceSampler sampler_;
  OfferStats stats_;
  OnlineOutcome out_;
  std::size_t total_tasks_ = 0;
};

/// Windowed run; dispatches to instant mode when window_minutes is 0.
OnlineOutcome advance(const EventStream& stream,
                      std::span<const Worker> workers,
                      const PipelineConfig& config,
                      const DistanceMetric& metric, int window_minutes);

OnlineOutcome advance_instant(const EventStream& stream,
                              std::span<const Worker> workers,
                              const PipelineConfig& config,
                              const DistanceMetric& metric);

}  // namespace fairtask

#endif  // FAIRTASK_ONLINE_HPP_
