#include "fairtask/types.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace fairtask {

Money Money::from_dollars(double dollars) {
  return Money{static_cast<std::int64_t>(std::llround(dollars * 100.0))};
}

void validate(const TimePeriod& period) {
  if (!period.valid()) {
    throw std::invalid_argument("time period ends before it begins: [" +
                                std::to_string(period.begin) + ", " +
                                std::to_string(period.end) + "]");
  }
}

void validate(const GeoPoint& point) {
  if (!point.valid()) {
    throw std::invalid_argument("coordinate out of range: (" +
                                std::to_string(point.lat) + ", " +
                                std::to_string(point.lon) + ")");
  }
}

void validate(const Task& task) {
  validate(task.source_period);
  validate(task.dest_period);
  validate(task.source_loc);
  validate(task.dest_loc);
  if (task.reward.cents < 0) {
    throw std::invalid_argument("task " + std::to_string(task.id) +
                                " has a negative reward");
  }
}

void validate(const Availability& availability) {
  validate(availability.period);
  validate(availability.center);
  if (!(availability.radius_km > 0.0)) {
    throw std::invalid_argument("availability " +
                                std::to_string(availability.id) +
                                " has a non-positive radius");
  }
}

void validate(const Worker& worker) {
  if (worker.capacity < 0) {
    throw std::invalid_argument("worker " + std::to_string(worker.id) +
                                " has a negative capacity");
  }
  for (const auto& a : worker.availabilities) {
    if (a.worker_id != worker.id) {
      throw std::invalid_argument("availability " + std::to_string(a.id) +
                                  " does not belong to worker " +
                                  std::to_string(worker.id));
    }
    validate(a);
  }
}

void validate(const Instance& instance) {
  for (const auto& t : instance.tasks) validate(t);
  for (std::size_t i = 0; i < instance.workers.size(); ++i) {
    if (instance.workers[i].id != i) {
      throw std::invalid_argument("worker ids must be dense indices; slot " +
                                  std::to_string(i) + " holds worker " +
                                  std::to_string(instance.workers[i].id));
    }
    validate(instance.workers[i]);
  }
}

}  // namespace fairtask
