#ifndef FAIRTASK_DATA_HPP_
#define FAIRTASK_DATA_HPP_

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <random>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "fairtask/types.hpp"

namespace fairtask {

/// One taxi-trip style row.
struct TripRecord {
  Timestamp pickup_time = 0;
  GeoPoint pickup;
  Timestamp dropoff_time = 0;
  GeoPoint dropoff;
  Money fare;

  friend bool operator==(const TripRecord&, const TripRecord&) = default;
};

/// One check-in style row.
struct CheckinRecord {
  std::string user_id;
  Timestamp time = 0;
  GeoPoint location;

  friend bool operator==(const CheckinRecord&, const CheckinRecord&) = default;
};

/// Malformed input. `line()` is 1-based and counts the header.
class DataError : public std::runtime_error {
 public:
  DataError(std::size_t line, const std::string& message);
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

struct RowError {
  std::size_t line = 0;
  std::string message;
};

struct ReadOptions {
  bool skip_bad_rows = false;
  std::vector<RowError>* errors = nullptr;  // collects skipped rows
};

/// "YYYY-MM-DDTHH:MM:SS" (a space may replace the T; a trailing Z is
/// accepted), always UTC. Throws std::invalid_argument.
Timestamp parse_timestamp(std::string_view text);
std::string format_timestamp(Timestamp t);

/// Columns: pickup_time, pickup_lat, pickup_lon, dropoff_time, dropoff_lat,
/// dropoff_lon, fare (any order). Rows with a negative fare, coordinates out
/// of range or a drop-off before the pick-up are rejected.
std::vector<TripRecord> read_trips(std::istream& in,
                                   const ReadOptions& options = {});
void write_trips(std::ostream& out, std::span<const TripRecord> trips);

/// Columns: user_id, time, lat, lon.
std::vector<CheckinRecord> read_checkins(std::istream& in,
                                         const ReadOptions& options = {});
void write_checkins(std::ostream& out,
                    std::span<const CheckinRecord> checkins);

enum class CapacityMode { derived, fixed };

struct DatasetConfig {
  double delta_t_hours = 2.0;  // mean period length
  bool fixed_delta_t = false;  // use the mean for every record
  double radius_mean_coefficient = 1.0;
  CapacityMode capacity_mode = CapacityMode::derived;
  int fixed_capacity = 0;
  std::uint64_t seed = 1;

  void validate() const;
};

/// [p, p + delta_t]. Throws std::invalid_argument unless delta_t > 0.
TimePeriod widen(Timestamp p, Timestamp delta_t);

struct TripStats {
  double mean_km = 0.0;
  double std_km = 0.0;
};

/// Mean and population std of haversine pick-up to drop-off distances.
TripStats trip_distance_stats(std::span<const TripRecord> trips);

/// Period length for one record: Normal(mean, mean / 4) clamped to at least
/// one second, or the mean itself when fixed.
Timestamp sample_delta_t(const DatasetConfig& config, std::mt19937_64& rng);

/// Task i gets id i; both periods are widened by one per-record sample.
std::vector<Task> load_tasks(std::span<const TripRecord> trips,
                             const DatasetConfig& config,
                             std::mt19937_64& rng);

/// One worker per distinct user id, in first-appearance order; availability
/// ids follow row order. Radius ~ Normal(mean * coefficient, std), redrawn
/// until positive. Capacities are left at 0.
std::vector<Worker> load_availabilities(std::span<const CheckinRecord> checkins,
                                        const TripStats& stats,
                                        const DatasetConfig& config,
                                        std::mt19937_64& rng);

/// Derived: round(Normal(tasks / workers, mean / 4)) clamped at 0.
/// Fixed: config.fixed_capacity for everyone.
void assign_capacities(std::vector<Worker>& workers, std::size_t total_tasks,
                       const DatasetConfig& config, std::mt19937_64& rng);

/// Applies the whole adaptation with sub-streams derived from config.seed.
Instance build_instance(std::span<const TripRecord> trips,
                        std::span<const CheckinRecord> checkins,
                        const DatasetConfig& config);

/// Same, with radius statistics supplied by the caller.
Instance build_instance(std::span<const TripRecord> trips,
                        std::span<const CheckinRecord> checkins,
                        const TripStats& stats, const DatasetConfig& config);

struct SynthParams {
  std::size_t tasks = 2000;
  std::size_t workers = 100;
  std::size_t checkins_per_worker = 20;
  GeoPoint south_west{40.70, -74.02};
  GeoPoint north_east{40.88, -73.93};
  Timestamp start = 1335830400;  // 2012-05-01T00:00:00Z
  Timestamp span_seconds = 7 * 24 * 3600;
  double speed_kmh = 20.0;
  double base_fare = 2.50;
  double fare_per_km = 1.56;
  std::uint64_t seed = 1;
};

struct RawData {
  std::vector<TripRecord> trips;
  std::vector<CheckinRecord> checkins;
};

/// Uniform trip endpoints and check-ins inside the box and time span.
/// Coordinates carry 6 decimals and fares whole cents, so the records
/// survive a CSV round trip unchanged.
RawData synth_raw(const SynthParams& params);

/// synth_raw followed by build_instance. With zero tasks the radius
/// statistics come from a reference sample of trips over the same extents.
Instance synth_workload(const SynthParams& params, const DatasetConfig& config);

}  // namespace fairtask

#endif  // FAIRTASK_DATA_HPP_
