#ifndef FAIRTASK_TYPES_HPP_
#define FAIRTASK_TYPES_HPP_

#include <compare>
#include <cstdint>
#include <string>
#include <vector>

namespace fairtask {

/// Seconds since the Unix epoch.
using Timestamp = std::int64_t;

using TaskId = std::uint32_t;
using WorkerId = std::uint32_t;
using AvailabilityId = std::uint32_t;

/// Monetary amount held in integer cents so ledgers never drift.
struct Money {
  std::int64_t cents = 0;

  static Money from_dollars(double dollars);
  double dollars() const { return static_cast<double>(cents) / 100.0; }

  Money& operator+=(Money other) {
    cents += other.cents;
    return *this;
  }
  friend Money operator+(Money a, Money b) { return Money{a.cents + b.cents}; }
  friend auto operator<=>(Money, Money) = default;
};

/// Closed interval [begin, end].
struct TimePeriod {
  Timestamp begin = 0;
  Timestamp end = 0;

  bool valid() const { return begin <= end; }
  Timestamp length() const { return end - begin; }
  bool contains(Timestamp t) const { return begin <= t && t <= end; }
  // Touching endpoints count as overlap.
  bool overlaps(const TimePeriod& other) const {
    return begin <= other.end && other.begin <= end;
  }
  friend bool operator==(const TimePeriod&, const TimePeriod&) = default;
};

struct GeoPoint {
  double lat = 0.0;
  double lon = 0.0;

  bool valid() const {
    return lat >= -90.0 && lat <= 90.0 && lon >= -180.0 && lon <= 180.0;
  }
  friend bool operator==(const GeoPoint&, const GeoPoint&) = default;
};

/// Two-step delivery job: receive at the source, deliver at the destination.
struct Task {
  TaskId id = 0;
  TimePeriod source_period;
  GeoPoint source_loc;
  TimePeriod dest_period;
  GeoPoint dest_loc;
  Money reward;

  friend bool operator==(const Task&, const Task&) = default;
};

/// A worker's declared willingness to serve inside a disk during a period.
struct Availability {
  AvailabilityId id = 0;
  WorkerId worker_id = 0;
  TimePeriod period;
  GeoPoint center;
  double radius_km = 0.0;

  friend bool operator==(const Availability&, const Availability&) = default;
};

struct Worker {
  WorkerId id = 0;
  std::vector<Availability> availabilities;
  int capacity = 0;
  std::string label;  // external user id, if any

  friend bool operator==(const Worker&, const Worker&) = default;
};

/// Tasks and workers of one problem instance. Worker ids are dense
/// indices (workers[i].id == i).
struct Instance {
  std::vector<Task> tasks;
  std::vector<Worker> workers;
};

// Each throws std::invalid_argument describing the first broken invariant.
void validate(const TimePeriod& period);
void validate(const GeoPoint& point);
void validate(const Task& task);
void validate(const Availability& availability);
void validate(const Worker& worker);
void validate(const Instance& instance);

}  // namespace fairtask

#endif  // FAIRTASK_TYPES_HPP_
