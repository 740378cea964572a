#include "fairtask/data.hpp"

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <istream>
#include <map>
#include <optional>
#include <ostream>
#include <unordered_map>

#include "fairtask/geo.hpp"
#include "fairtask/random.hpp"

namespace fairtask {
namespace {

enum StreamTag : std::uint64_t {
  kTaskPeriods = 1,
  kRadii = 2,
  kCapacities = 3,
  kSynthTrips = 4,
  kSynthCheckins = 5,
};

constexpr std::size_t kReferenceTrips = 1000;

// Splits one CSV line; double quotes group fields and "" escapes a quote.
std::vector<std::string> split_csv(std::string_view line) {
  std::vector<std::string> fields(1);
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (quoted) {
      if (c == '"' && i + 1 < line.size() && line[i + 1] == '"') {
        fields.back() += '"';
        ++i;
      } else if (c == '"') {
        quoted = false;
      } else {
        fields.back() += c;
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      fields.emplace_back();
    } else {
      fields.back() += c;
    }
  }
  return fields;
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) {
    s.remove_suffix(1);
  }
  return s;
}

double parse_double(std::string_view text, const char* column) {
  text = trim(text);
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc() || ptr != text.data() + text.size() || !std::isfinite(v)) {
    throw std::invalid_argument(std::string("bad number in column ") + column +
                                ": '" + std::string(text) + "'");
  }
  return v;
}

std::string csv_escape(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

std::string format_coord(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6f", v);
  return buf;
}

std::string format_money(Money m) {
  char buf[32];
  const std::int64_t abs = m.cents < 0 ? -m.cents : m.cents;
  std::snprintf(buf, sizeof buf, "%s%lld.%02lld", m.cents < 0 ? "-" : "",
                static_cast<long long>(abs / 100),
                static_cast<long long>(abs % 100));
  return buf;
}

// Header-driven reader: maps required column names to positions, then hands
// each data row to `parse_row`, which throws std::invalid_argument on a bad
// row.
template <class Record, class ParseRow>
std::vector<Record> read_table(std::istream& in,
                               const std::vector<std::string>& columns,
                               const ReadOptions& options, ParseRow parse_row) {
  std::string line;
  if (!std::getline(in, line)) throw DataError(1, "missing header row");
  const auto header = split_csv(line);
  std::vector<std::size_t> pos;
  for (const auto& col : columns) {
    const auto it = std::find_if(header.begin(), header.end(), [&](const std::string& h) {
      return trim(h) == col;
    });
    if (it == header.end()) throw DataError(1, "missing column '" + col + "'");
    pos.push_back(static_cast<std::size_t>(it - header.begin()));
  }
  const std::size_t needed = *std::max_element(pos.begin(), pos.end()) + 1;

  std::vector<Record> out;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    try {
      const auto fields = split_csv(line);
      if (fields.size() < needed) {
        throw std::invalid_argument("expected at least " + std::to_string(needed) +
                                    " fields, found " + std::to_string(fields.size()));
      }
      std::vector<std::string_view> row;
      row.reserve(pos.size());
      for (std::size_t p : pos) row.emplace_back(fields[p]);
      out.push_back(parse_row(row));
    } catch (const std::invalid_argument& e) {
      if (!options.skip_bad_rows) throw DataError(line_no, e.what());
      if (options.errors) options.errors->push_back({line_no, e.what()});
    }
  }
  return out;
}

GeoPoint parse_point(std::string_view lat, std::string_view lon,
                     const char* lat_col, const char* lon_col) {
  GeoPoint p{parse_double(lat, lat_col), parse_double(lon, lon_col)};
  if (!p.valid()) throw std::invalid_argument("coordinate out of range");
  return p;
}

double round6(double v) { return std::round(v * 1e6) / 1e6; }

}  // namespace

DataError::DataError(std::size_t line, const std::string& message)
    : std::runtime_error("line " + std::to_string(line) + ": " + message),
      line_(line) {}

Timestamp parse_timestamp(std::string_view text) {
  text = trim(text);
  if (!text.empty() && (text.back() == 'Z' || text.back() == 'z')) {
    text.remove_suffix(1);
  }
  int y = 0, mo = 0, d = 0, h = 0, mi = 0, s = 0;
  char sep = 0;
  char tail = 0;
  const std::string buf(text);
  const int n = std::sscanf(buf.c_str(), "%4d-%2d-%2d%c%2d:%2d:%2d%c", &y, &mo,
                            &d, &sep, &h, &mi, &s, &tail);
  if (n != 7 || (sep != 'T' && sep != ' ') || h > 23 || mi > 59 || s > 59 ||
      h < 0 || mi < 0 || s < 0) {
    throw std::invalid_argument("bad timestamp '" + buf + "'");
  }
  using namespace std::chrono;
  const year_month_day ymd{year{y}, month{static_cast<unsigned>(mo)},
                           day{static_cast<unsigned>(d)}};
  if (!ymd.ok()) throw std::invalid_argument("bad date '" + buf + "'");
  const auto days = sys_days(ymd).time_since_epoch().count();
  return static_cast<Timestamp>(days) * 86400 + h * 3600 + mi * 60 + s;
}

std::string format_timestamp(Timestamp t) {
  using namespace std::chrono;
  const auto day_count = static_cast<int>(
      t >= 0 ? t / 86400 : -((-t + 86399) / 86400));
  const Timestamp rem = t - static_cast<Timestamp>(day_count) * 86400;
  const year_month_day ymd{sys_days{days{day_count}}};
  char buf[32];
  std::snprintf(buf, sizeof buf, "%04d-%02u-%02uT%02d:%02d:%02d",
                static_cast<int>(ymd.year()), static_cast<unsigned>(ymd.month()),
                static_cast<unsigned>(ymd.day()), static_cast<int>(rem / 3600),
                static_cast<int>(rem % 3600 / 60), static_cast<int>(rem % 60));
  return buf;
}

std::vector<TripRecord> read_trips(std::istream& in, const ReadOptions& options) {
  static const std::vector<std::string> kColumns = {
      "pickup_time", "pickup_lat", "pickup_lon", "dropoff_time",
      "dropoff_lat", "dropoff_lon", "fare"};
  return read_table<TripRecord>(in, kColumns, options, [](const auto& row) {
    TripRecord r;
    r.pickup_time = parse_timestamp(row[0]);
    r.pickup = parse_point(row[1], row[2], "pickup_lat", "pickup_lon");
    r.dropoff_time = parse_timestamp(row[3]);
    r.dropoff = parse_point(row[4], row[5], "dropoff_lat", "dropoff_lon");
    const double fare = parse_double(row[6], "fare");
    if (fare < 0.0) throw std::invalid_argument("negative fare");
    r.fare = Money::from_dollars(fare);
    if (r.dropoff_time < r.pickup_time) {
      throw std::invalid_argument("drop-off precedes pick-up");
    }
    return r;
  });
}

void write_trips(std::ostream& out, std::span<const TripRecord> trips) {
  out << "pickup_time,pickup_lat,pickup_lon,dropoff_time,dropoff_lat,"
         "dropoff_lon,fare\n";
  for (const auto& r : trips) {
    out << format_timestamp(r.pickup_time) << ',' << format_coord(r.pickup.lat)
        << ',' << format_coord(r.pickup.lon) << ','
        << format_timestamp(r.dropoff_time) << ','
        << format_coord(r.dropoff.lat) << ',' << format_coord(r.dropoff.lon)
        << ',' << format_money(r.fare) << '\n';
  }
}

std::vector<CheckinRecord> read_checkins(std::istream& in,
                                         const ReadOptions& options) {
  static const std::vector<std::string> kColumns = {"user_id", "time", "lat",
                                                    "lon"};
  return read_table<CheckinRecord>(in, kColumns, options, [](const auto& row) {
    CheckinRecord r;
    r.user_id = std::string(trim(row[0]));
    if (r.user_id.empty()) throw std::invalid_argument("empty user_id");
    r.time = parse_timestamp(row[1]);
    r.location = parse_point(row[2], row[3], "lat", "lon");
    return r;
  });
}

void write_checkins(std::ostream& out,
                    std::span<const CheckinRecord> checkins) {
  out << "user_id,time,lat,lon\n";
  for (const auto& r : checkins) {
    out << csv_escape(r.user_id) << ',' << format_timestamp(r.time) << ','
        << format_coord(r.location.lat) << ',' << format_coord(r.location.lon)
        << '\n';
  }
}

void DatasetConfig::validate() const {
  if (!(delta_t_hours > 0.0)) throw std::invalid_argument("delta_t must be positive");
  if (!(radius_mean_coefficient > 0.0)) {
    throw std::invalid_argument("radius coefficient must be positive");
  }
  if (capacity_mode == CapacityMode::fixed && fixed_capacity < 0) {
    throw std::invalid_argument("fixed capacity must be nonnegative");
  }
}

TimePeriod widen(Timestamp p, Timestamp delta_t) {
  if (delta_t <= 0) throw std::invalid_argument("delta_t must be positive");
  return {p, p + delta_t};
}

TripStats trip_distance_stats(std::span<const TripRecord> trips) {
  TripStats s;
  if (trips.empty()) return s;
  double sum = 0.0;
  for (const auto& r : trips) sum += haversine_km(r.pickup, r.dropoff);
  s.mean_km = sum / static_cast<double>(trips.size());
  double ss = 0.0;
  for (const auto& r : trips) {
    const double d = haversine_km(r.pickup, r.dropoff) - s.mean_km;
    ss += d * d;
  }
  s.std_km = std::sqrt(ss / static_cast<double>(trips.size()));
  return s;
}

Timestamp sample_delta_t(const DatasetConfig& config, std::mt19937_64& rng) {
  const double mean = config.delta_t_hours * 3600.0;
  if (config.fixed_delta_t) return std::max<Timestamp>(1, std::llround(mean));
  std::normal_distribution<double> dist(mean, mean / 4.0);
  return std::max<Timestamp>(1, std::llround(dist(rng)));
}

std::vector<Task> load_tasks(std::span<const TripRecord> trips,
                             const DatasetConfig& config,
                             std::mt19937_64& rng) {
  config.validate();
  std::vector<Task> tasks;
  tasks.reserve(trips.size());
  for (std::size_t i = 0; i < trips.size(); ++i) {
    const TripRecord& r = trips[i];
    const Timestamp dt = sample_delta_t(config, rng);
    Task t;
    t.id = static_cast<TaskId>(i);
    t.source_period = widen(r.pickup_time, dt);
    t.source_loc = r.pickup;
    t.dest_period = widen(r.dropoff_time, dt);
    t.dest_loc = r.dropoff;
    t.reward = r.fare;
    tasks.push_back(t);
  }
  return tasks;
}

std::vector<Worker> load_availabilities(std::span<const CheckinRecord> checkins,
                                        const TripStats& stats,
                                        const DatasetConfig& config,
                                        std::mt19937_64& rng) {
  config.validate();
  std::vector<Worker> workers;
  if (checkins.empty()) return workers;
  const double mean = stats.mean_km * config.radius_mean_coefficient;
  if (!(mean > 0.0) && !(stats.std_km > 0.0)) {
    throw std::invalid_argument(
        "trip statistics give no positive radius distribution");
  }
  std::normal_distribution<double> radius(mean, stats.std_km);
  std::unordered_map<std::string, WorkerId> by_user;
  for (std::size_t i = 0; i < checkins.size(); ++i) {
    const CheckinRecord& r = checkins[i];
    auto [it, fresh] =
        by_user.emplace(r.user_id, static_cast<WorkerId>(workers.size()));
    if (fresh) {
      Worker w;
      w.id = it->second;
      w.label = r.user_id;
      workers.push_back(std::move(w));
    }
    Availability a;
    a.id = static_cast<AvailabilityId>(i);
    a.worker_id = it->second;
    a.period = widen(r.time, sample_delta_t(config, rng));
    a.center = r.location;
    do {
      a.radius_km = radius(rng);
    } while (!(a.radius_km > 0.0));
    workers[it->second].availabilities.push_back(a);
  }
  return workers;
}

void assign_capacities(std::vector<Worker>& workers, std::size_t total_tasks,
                       const DatasetConfig& config, std::mt19937_64& rng) {
  if (workers.empty()) return;
  if (config.capacity_mode == CapacityMode::fixed) {
    for (auto& w : workers) w.capacity = config.fixed_capacity;
    return;
  }
  const double mean =
      static_cast<double>(total_tasks) / static_cast<double>(workers.size());
  std::normal_distribution<double> dist(mean, mean / 4.0);
  for (auto& w : workers) {
    w.capacity = static_cast<int>(std::max<long long>(0, std::llround(dist(rng))));
  }
}

Instance build_instance(std::span<const TripRecord> trips,
                        std::span<const CheckinRecord> checkins,
                        const DatasetConfig& config) {
  return build_instance(trips, checkins, trip_distance_stats(trips), config);
}

Instance build_instance(std::span<const TripRecord> trips,
                        std::span<const CheckinRecord> checkins,
                        const TripStats& stats, const DatasetConfig& config) {
  config.validate();
  std::mt19937_64 task_rng(derive_seed(config.seed, kTaskPeriods));
  std::mt19937_64 radius_rng(derive_seed(config.seed, kRadii));
  std::mt19937_64 capacity_rng(derive_seed(config.seed, kCapacities));
  Instance inst;
  inst.tasks = load_tasks(trips, config, task_rng);
  inst.workers = load_availabilities(checkins, stats, config, radius_rng);
  assign_capacities(inst.workers, inst.tasks.size(), config, capacity_rng);
  return inst;
}

RawData synth_raw(const SynthParams& params) {
  if (params.span_seconds <= 0) throw std::invalid_argument("empty time span");
  if (!(params.speed_kmh > 0.0)) throw std::invalid_argument("speed must be positive");
  validate(params.south_west);
  validate(params.north_east);

  std::uniform_real_distribution<double> lat(params.south_west.lat,
                                             params.north_east.lat);
  std::uniform_real_distribution<double> lon(params.south_west.lon,
                                             params.north_east.lon);
  std::uniform_int_distribution<Timestamp> when(
      params.start, params.start + params.span_seconds);

  RawData raw;
  std::mt19937_64 trip_rng(derive_seed(params.seed, kSynthTrips));
  raw.trips.reserve(params.tasks);
  for (std::size_t i = 0; i < params.tasks; ++i) {
    TripRecord r;
    r.pickup = {round6(lat(trip_rng)), round6(lon(trip_rng))};
    r.dropoff = {round6(lat(trip_rng)), round6(lon(trip_rng))};
    r.pickup_time = when(trip_rng);
    const double km = haversine_km(r.pickup, r.dropoff);
    r.dropoff_time =
        r.pickup_time + std::llround(km / params.speed_kmh * 3600.0);
    r.fare = Money::from_dollars(params.base_fare + params.fare_per_km * km);
    raw.trips.push_back(r);
  }
  std::sort(raw.trips.begin(), raw.trips.end(),
            [](const TripRecord& a, const TripRecord& b) {
              return a.pickup_time < b.pickup_time;
            });

  std::mt19937_64 checkin_rng(derive_seed(params.seed, kSynthCheckins));
  raw.checkins.reserve(params.workers * params.checkins_per_worker);
  for (std::size_t w = 0; w < params.workers; ++w) {
    for (std::size_t c = 0; c < params.checkins_per_worker; ++c) {
      CheckinRecord r;
      r.user_id = std::to_string(w);
      r.location = {round6(lat(checkin_rng)), round6(lon(checkin_rng))};
      r.time = when(checkin_rng);
      raw.checkins.push_back(std::move(r));
    }
  }
  return raw;
}

Instance synth_workload(const SynthParams& params, const DatasetConfig& config) {
  const RawData raw = synth_raw(params);
  if (!raw.trips.empty()) return build_instance(raw.trips, raw.checkins, config);
  // No trips to measure: take radius statistics from a reference sample
  // drawn with the same geometry.
  SynthParams reference = params;
  reference.tasks = kReferenceTrips;
  reference.workers = 0;
  const TripStats stats = trip_distance_stats(synth_raw(reference).trips);
  return build_instance(raw.trips, raw.checkins, stats, config);
}

}  // namespace fairtask
