#include "fairtask/online.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>

#include "fairtask/random.hpp"

namespace fairtask {

void EventStream::validate() const {
  for (std::size_t i = 1; i < events.size(); ++i) {
    if (events[i].time < events[i - 1].time) {
      throw std::invalid_argument("event stream is not time ordered at index " +
                                  std::to_string(i));
    }
  }
}

EventStream make_event_stream(const Instance& instance,
                              Timestamp lead_seconds) {
  struct Keyed {
    Timestamp time;
    int kind;  // 0 availability, 1 task
    std::uint32_t id;
    Event event;
  };
  std::vector<Keyed> keyed;
  for (const Worker& w : instance.workers) {
    for (const Availability& a : w.availabilities) {
      const Timestamp t = a.period.begin - lead_seconds;
      keyed.push_back({t, 0, a.id, Event{t, AvailabilityArrival{a}}});
    }
  }
  for (const Task& task : instance.tasks) {
    const Timestamp t = task.source_period.begin - lead_seconds;
    keyed.push_back({t, 1, task.id, Event{t, TaskArrival{task}}});
  }
  std::sort(keyed.begin(), keyed.end(), [](const Keyed& a, const Keyed& b) {
    if (a.time != b.time) return a.time < b.time;
    if (a.kind != b.kind) return a.kind < b.kind;
    return a.id < b.id;
  });
  EventStream stream;
  stream.events.reserve(keyed.size());
  for (auto& k : keyed) stream.events.push_back(std::move(k.event));
  return stream;
}

OnlineEngine::OnlineEngine(std::span<const Worker> workers,
                           PipelineConfig config, const DistanceMetric& metric,
                           int window_minutes)
    : config_(std::move(config)),
      metric_(metric),
      window_minutes_(window_minutes),
      sampler_(derive_seed(config_.seed, kAcceptanceStream)) {
  config_.validate();
  if (window_minutes < 0) {
    throw std::invalid_argument("window length must be nonnegative");
  }
  out_.ledgers = LedgerBook(workers);
}

void OnlineEngine::ingest(const Event& event) {
  if (const auto* t = std::get_if<TaskArrival>(&event.payload)) {
    validate(t->task);
    if (!pending_.emplace(t->task.id, t->task).second) {
      throw std::invalid_argument("duplicate task id " +
                                  std::to_string(t->task.id));
    }
    ++total_tasks_;
    out_.assignments.unallocated.insert(t->task.id);
  } else {
    const Availability& a = std::get<AvailabilityArrival>(event.payload).availability;
    validate(a);
    if (a.worker_id >= out_.ledgers.size()) {
      throw std::invalid_argument("availability " + std::to_string(a.id) +
                                  " names unknown worker " +
                                  std::to_string(a.worker_id));
    }
    live_[a.id] = a;
  }
}

void OnlineEngine::expire(Timestamp now) {
  std::erase_if(pending_,
                [&](const auto& kv) { return kv.second.source_period.end < now; });
  std::erase_if(live_, [&](const auto& kv) { return kv.second.period.end < now; });
}

void OnlineEngine::match(Timestamp now) {
  if (pending_.empty()) return;
  std::vector<Availability> live;
  live.reserve(live_.size());
  for (const auto& [id, a] : live_) live.push_back(a);
  const TemporalIndex index(std::move(live));

  std::vector<const Task*> tasks;
  tasks.reserve(pending_.size());
  for (const auto& [id, t] : pending_) tasks.push_back(&t);

  PassOutcome pass = run_matching_pass(
      tasks, index, metric_, config_, out_.ledgers, sampler_, stats_, &memory_,
      derive_seed(config_.seed, kAllocatorStream + out_.passes));
  ++out_.passes;

  for (const TaskNode& node : pass.graph.tasks) {
    const auto it = pass.result.assignments.find(node.id);
    if (it == pass.result.assignments.end()) continue;
    const auto edge =
        std::find_if(node.candidates.begin(), node.candidates.end(),
                     [&](const CandidateEdge& e) { return e.worker == it->second; });
    out_.log.push_back({now, node.id, it->second, edge->pair});
    out_.assignments.assignments.emplace(node.id, it->second);
    out_.assignments.unallocated.erase(node.id);
    pending_.erase(node.id);
  }
  if (config_.keep_sessions) {
    std::move(pass.sessions.begin(), pass.sessions.end(),
              std::back_inserter(out_.sessions));
  }
}

OnlineOutcome OnlineEngine::run(const EventStream& stream) {
  stream.validate();
  const auto& events = stream.events;

  if (window_minutes_ == 0) {
    for (const Event& e : events) {
      expire(e.time);
      ingest(e);
      if (const auto* t = std::get_if<TaskArrival>(&e.payload)) {
        // Only the newcomer is matched; parked tasks wait for a new
        // availability.
        auto parked = std::move(pending_);
        pending_.clear();
        pending_.insert(parked.extract(t->task.id));
        match(e.time);
        for (auto& kv : parked) pending_.insert(std::move(kv));
      } else {
        match(e.time);
      }
    }
  } else if (!events.empty()) {
    const Timestamp window = static_cast<Timestamp>(window_minutes_) * 60;
    Timestamp boundary = events.front().time + window;
    std::size_t next = 0;
    while (true) {
      while (next < events.size() && events[next].time <= boundary) {
        ingest(events[next++]);
      }
      expire(boundary);
      match(boundary);
      if (next == events.size()) break;
      boundary += window;
    }
  }

  OnlineOutcome result = std::move(out_);
  result.report =
      summarize(result.ledgers, total_tasks_, stats_, config_.rho);
  return result;
}

OnlineOutcome advance(const EventStream& stream,
                      std::span<const Worker> workers,
                      const PipelineConfig& config,
                      const DistanceMetric& metric, int window_minutes) {
  OnlineEngine engine(workers, config, metric, window_minutes);
  return engine.run(stream);
}

OnlineOutcome advance_instant(const EventStream& stream,
                              std::span<const Worker> workers,
                              const PipelineConfig& config,
                              const DistanceMetric& metric) {
  return advance(stream, workers, config, metric, 0);
}

}  // namespace fairtask
