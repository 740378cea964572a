#include "fairtask/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <exception>
#include <fstream>
#include <map>
#include <mutex>
#include <ostream>
#include <set>
#include <thread>

#include "fairtask/geo.hpp"
#include "fairtask/online.hpp"
#include "fairtask/pipeline.hpp"

namespace fairtask {

namespace {

using nlohmann::json;

constexpr std::size_t kDefaultSweepSeeds = 10;

void check_keys(const json& j, const char* where,
                std::initializer_list<const char*> allowed) {
  if (!j.is_object()) {
    throw ConfigError(std::string(where) + ": expected an object");
  }
  for (const auto& [key, _] : j.items()) {
    if (std::none_of(allowed.begin(), allowed.end(),
                     [&](const char* a) { return key == a; })) {
      throw ConfigError(std::string(where) + ": unknown key '" + key + "'");
    }
  }
}

GeoPoint point_from_json(const json& j, const char* where) {
  if (!j.is_array() || j.size() != 2) {
    throw ConfigError(std::string(where) + ": expected [lat, lon]");
  }
  return {j[0].get<double>(), j[1].get<double>()};
}

std::vector<std::uint64_t> effective_seeds(const ExperimentConfig& config,
                                           bool sweep) {
  if (!config.seeds.empty()) return config.seeds;
  if (!sweep) return {1};
  std::vector<std::uint64_t> seeds(kDefaultSweepSeeds);
  for (std::size_t i = 0; i < seeds.size(); ++i) seeds[i] = i + 1;
  return seeds;
}

RawData read_input(const InputPaths& paths, bool skip_bad_rows) {
  RawData raw;
  ReadOptions options;
  options.skip_bad_rows = skip_bad_rows;
  std::ifstream trips(paths.tasks);
  if (!trips) throw ConfigError("cannot open task file '" + paths.tasks + "'");
  std::ifstream checkins(paths.checkins);
  if (!checkins) {
    throw ConfigError("cannot open availability file '" + paths.checkins + "'");
  }
  try {
    raw.trips = read_trips(trips, options);
  } catch (const DataError& e) {
    throw ConfigError(paths.tasks + ": " + e.what());
  }
  try {
    raw.checkins = read_checkins(checkins, options);
  } catch (const DataError& e) {
    throw ConfigError(paths.checkins + ": " + e.what());
  }
  return raw;
}

ExperimentConfig apply_sweep_value(const ExperimentConfig& base, double value) {
  ExperimentConfig c = base;
  switch (base.sweep->axis) {
    case SweepAxis::epsilon:
      c.policy.epsilon = value;
      break;
    case SweepAxis::theta:
      c.policy.theta = value;
      break;
    case SweepAxis::window_min:
      c.window_min = static_cast<int>(std::llround(value));
      break;
    case SweepAxis::capacity:
      c.dataset.capacity_mode = CapacityMode::fixed;
      c.dataset.fixed_capacity = static_cast<int>(std::llround(value));
      break;
    case SweepAxis::task_count:
      if (c.synth) c.synth->tasks = static_cast<std::size_t>(std::llround(value));
      break;
    case SweepAxis::radius_coefficient:
      c.dataset.radius_mean_coefficient = value;
      break;
    case SweepAxis::rho:
      c.rho = value;
      break;
  }
  return c;
}

// `preloaded` holds the parsed input files when the config reads from disk.
RunRecord run_cell(const ExperimentConfig& config, const RawData* preloaded,
                   std::optional<double> sweep_value, Allocator allocator,
                   std::uint64_t seed, bool trace) {
  RunRecord rec;
  rec.sweep_value = sweep_value;
  rec.allocator = allocator;
  rec.seed = seed;
  rec.effective = config;

  DatasetConfig dataset = config.dataset;
  dataset.seed = seed;
  Instance instance;
  try {
    if (config.synth) {
      SynthParams params = *config.synth;
      params.seed = seed;
      instance = synth_workload(params, dataset);
    } else {
      RawData local;
      const RawData& raw =
          preloaded ? *preloaded
                    : (local = read_input(*config.input, config.skip_bad_rows));
      std::span<const TripRecord> trips = raw.trips;
      if (config.sweep && config.sweep->axis == SweepAxis::task_count &&
          sweep_value) {
        trips = trips.first(std::min<std::size_t>(
            trips.size(), static_cast<std::size_t>(std::llround(*sweep_value))));
      }
      instance = build_instance(trips, raw.checkins, dataset);
    }
  } catch (const std::invalid_argument& e) {
    throw ConfigError(std::string("bad input: ") + e.what());
  }

  rec.task_count = instance.tasks.size();
  rec.worker_count = instance.workers.size();
  if (allocator == Allocator::mcf &&
      instance.tasks.size() > config.mcf_size_guard) {
    throw ConfigError("MCF refused: " + std::to_string(instance.tasks.size()) +
                      " tasks exceed the guard of " +
                      std::to_string(config.mcf_size_guard) +
                      "; raise --mcf-guard or choose another --algo");
  }

  PipelineConfig pc;
  pc.policy = config.policy;
  pc.allocator = allocator;
  pc.base_acceptance = config.base_acceptance;
  pc.rho = config.rho;
  pc.seed = seed;
  pc.keep_sessions = trace;

  const HaversineMetric metric;
  if (config.window_min) {
    const EventStream stream = make_event_stream(instance);
    OnlineOutcome out =
        advance(stream, instance.workers, pc, metric, *config.window_min);
    rec.report = std::move(out.report);
    rec.assignments = std::move(out.assignments);
    rec.sessions = std::move(out.sessions);
  } else {
    RunOutcome out = run_offline(instance, pc, metric);
    rec.report = std::move(out.report);
    rec.assignments = std::move(out.assignments);
    rec.sessions = std::move(out.sessions);
    rec.allocation_seconds = out.allocation_seconds;
  }
  return rec;
}

MeanStd mean_std(const std::vector<double>& xs) {
  MeanStd m;
  if (xs.empty()) return m;
  double sum = 0.0;
  for (double x : xs) sum += x;
  m.mean = sum / static_cast<double>(xs.size());
  double sq = 0.0;
  for (double x : xs) sq += (x - m.mean) * (x - m.mean);
  m.std = std::sqrt(sq / static_cast<double>(xs.size()));
  return m;
}

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

}  // namespace

std::string_view to_string(SweepAxis axis) {
  switch (axis) {
    case SweepAxis::epsilon: return "epsilon";
    case SweepAxis::theta: return "theta";
    case SweepAxis::window_min: return "window_min";
    case SweepAxis::capacity: return "capacity";
    case SweepAxis::task_count: return "task_count";
    case SweepAxis::radius_coefficient: return "radius_coefficient";
    case SweepAxis::rho: return "rho";
  }
  return "?";
}

SweepAxis parse_sweep_axis(std::string_view name) {
  for (SweepAxis a : {SweepAxis::epsilon, SweepAxis::theta,
                      SweepAxis::window_min, SweepAxis::capacity,
                      SweepAxis::task_count, SweepAxis::radius_coefficient,
                      SweepAxis::rho}) {
    if (to_string(a) == name) return a;
  }
  throw ConfigError("unknown sweep parameter '" + std::string(name) + "'");
}

void ExperimentConfig::validate() const {
  if (input.has_value() == synth.has_value()) {
    throw ConfigError(
        "exactly one of input files or synthetic parameters is required");
  }
  if (input && (input->tasks.empty() || input->checkins.empty())) {
    throw ConfigError("both a task file and an availability file are required");
  }
  if (synth && (synth->tasks == 0 || synth->workers == 0)) {
    throw ConfigError("synthetic workload needs tasks and workers");
  }
  if (allocators.empty()) throw ConfigError("no allocator selected");
  if (window_min && *window_min < 0) {
    throw ConfigError("window_min must be non-negative");
  }
  if (!(rho >= 0.0)) throw ConfigError("rho must be non-negative");
  if (!(base_acceptance >= 0.0 && base_acceptance <= 1.0)) {
    throw ConfigError("base_acceptance must lie in [0, 1]");
  }
  try {
    policy.validate();
    dataset.validate();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
  if (sweep) {
    if (sweep->values.empty()) throw ConfigError("sweep has no values");
    for (double v : sweep->values) {
      if (!std::isfinite(v)) throw ConfigError("sweep value is not finite");
      ExperimentConfig applied = apply_sweep_value(*this, v);
      applied.sweep.reset();
      applied.validate();
    }
  }
}

ExperimentConfig config_from_json(const json& j) {
  ExperimentConfig c;
  try {
    check_keys(j, "config",
               {"input", "synth", "dataset", "allocators", "algo", "policy",
                "rho", "base_acceptance", "window_min", "sweep", "seeds",
                "seed", "mcf_size_guard", "skip_bad_rows", "jobs"});
    if (j.contains("input")) {
      const json& in = j.at("input");
      check_keys(in, "input", {"tasks", "checkins"});
      c.input = InputPaths{in.at("tasks").get<std::string>(),
                           in.at("checkins").get<std::string>()};
    }
    if (j.contains("synth")) {
      const json& s = j.at("synth");
      check_keys(s, "synth",
                 {"tasks", "workers", "checkins_per_worker", "south_west",
                  "north_east", "start", "days", "speed_kmh", "base_fare",
                  "fare_per_km"});
      SynthParams p;
      if (s.contains("tasks")) p.tasks = s.at("tasks").get<std::size_t>();
      if (s.contains("workers")) p.workers = s.at("workers").get<std::size_t>();
      if (s.contains("checkins_per_worker")) {
        p.checkins_per_worker = s.at("checkins_per_worker").get<std::size_t>();
      }
      if (s.contains("south_west")) {
        p.south_west = point_from_json(s.at("south_west"), "synth.south_west");
      }
      if (s.contains("north_east")) {
        p.north_east = point_from_json(s.at("north_east"), "synth.north_east");
      }
      if (s.contains("start")) {
        p.start = parse_timestamp(s.at("start").get<std::string>());
      }
      if (s.contains("days")) {
        p.span_seconds =
            static_cast<Timestamp>(std::llround(s.at("days").get<double>() * 86400.0));
      }
      if (s.contains("speed_kmh")) p.speed_kmh = s.at("speed_kmh").get<double>();
      if (s.contains("base_fare")) p.base_fare = s.at("base_fare").get<double>();
      if (s.contains("fare_per_km")) {
        p.fare_per_km = s.at("fare_per_km").get<double>();
      }
      c.synth = p;
    }
    if (j.contains("dataset")) {
      const json& d = j.at("dataset");
      check_keys(d, "dataset",
                 {"delta_t_hours", "fixed_delta_t", "radius_coefficient",
                  "capacity"});
      if (d.contains("delta_t_hours")) {
        c.dataset.delta_t_hours = d.at("delta_t_hours").get<double>();
      }
      if (d.contains("fixed_delta_t")) {
        c.dataset.fixed_delta_t = d.at("fixed_delta_t").get<bool>();
      }
      if (d.contains("radius_coefficient")) {
        c.dataset.radius_mean_coefficient = d.at("radius_coefficient").get<double>();
      }
      if (d.contains("capacity")) {
        const json& cap = d.at("capacity");
        if (cap.is_string()) {
          if (cap.get<std::string>() != "derived") {
            throw ConfigError("dataset.capacity must be \"derived\" or an integer");
          }
          c.dataset.capacity_mode = CapacityMode::derived;
        } else {
          c.dataset.capacity_mode = CapacityMode::fixed;
          c.dataset.fixed_capacity = cap.get<int>();
        }
      }
    }
    if (j.contains("allocators") && j.contains("algo")) {
      throw ConfigError("give either 'allocators' or 'algo', not both");
    }
    if (j.contains("allocators") || j.contains("algo")) {
      c.allocators.clear();
      const json& a = j.contains("allocators") ? j.at("allocators") : j.at("algo");
      if (a.is_string()) {
        c.allocators.push_back(parse_allocator(a.get<std::string>()));
      } else {
        for (const auto& name : a) {
          c.allocators.push_back(parse_allocator(name.get<std::string>()));
        }
      }
    }
    if (j.contains("policy")) {
      const json& p = j.at("policy");
      check_keys(p, "policy", {"epsilon", "theta", "mode", "max_rounds"});
      if (p.contains("epsilon")) c.policy.epsilon = p.at("epsilon").get<double>();
      if (p.contains("theta")) c.policy.theta = p.at("theta").get<double>();
      if (p.contains("mode")) {
        c.policy.mode = parse_offer_mode(p.at("mode").get<std::string>());
      }
      if (p.contains("max_rounds") && !p.at("max_rounds").is_null()) {
        c.policy.max_rounds = p.at("max_rounds").get<std::size_t>();
      }
    }
    if (j.contains("rho")) c.rho = j.at("rho").get<double>();
    if (j.contains("base_acceptance")) {
      c.base_acceptance = j.at("base_acceptance").get<double>();
    }
    if (j.contains("window_min") && !j.at("window_min").is_null()) {
      c.window_min = j.at("window_min").get<int>();
    }
    if (j.contains("sweep")) {
      const json& s = j.at("sweep");
      check_keys(s, "sweep", {"parameter", "values"});
      SweepSpec spec;
      spec.axis = parse_sweep_axis(s.at("parameter").get<std::string>());
      spec.values = s.at("values").get<std::vector<double>>();
      c.sweep = std::move(spec);
    }
    if (j.contains("seeds") && j.contains("seed")) {
      throw ConfigError("give either 'seeds' or 'seed', not both");
    }
    if (j.contains("seeds")) {
      c.seeds = j.at("seeds").get<std::vector<std::uint64_t>>();
      if (c.seeds.empty()) throw ConfigError("seed list is empty");
    }
    if (j.contains("seed")) c.seeds = {j.at("seed").get<std::uint64_t>()};
    if (j.contains("mcf_size_guard")) {
      c.mcf_size_guard = j.at("mcf_size_guard").get<std::size_t>();
    }
    if (j.contains("skip_bad_rows")) {
      c.skip_bad_rows = j.at("skip_bad_rows").get<bool>();
    }
    if (j.contains("jobs")) c.jobs = j.at("jobs").get<std::size_t>();
  } catch (const json::exception& e) {
    throw ConfigError(std::string("config: ") + e.what());
  } catch (const std::invalid_argument& e) {
    throw ConfigError(std::string("config: ") + e.what());
  }
  return c;
}

json config_to_json(const ExperimentConfig& c) {
  json j;
  if (c.input) j["input"] = {{"tasks", c.input->tasks}, {"checkins", c.input->checkins}};
  if (c.synth) {
    const SynthParams& p = *c.synth;
    j["synth"] = {{"tasks", p.tasks},
                  {"workers", p.workers},
                  {"checkins_per_worker", p.checkins_per_worker},
                  {"south_west", {p.south_west.lat, p.south_west.lon}},
                  {"north_east", {p.north_east.lat, p.north_east.lon}},
                  {"start", format_timestamp(p.start)},
                  {"days", static_cast<double>(p.span_seconds) / 86400.0},
                  {"speed_kmh", p.speed_kmh},
                  {"base_fare", p.base_fare},
                  {"fare_per_km", p.fare_per_km}};
  }
  json dataset = {{"delta_t_hours", c.dataset.delta_t_hours},
                  {"fixed_delta_t", c.dataset.fixed_delta_t},
                  {"radius_coefficient", c.dataset.radius_mean_coefficient}};
  if (c.dataset.capacity_mode == CapacityMode::fixed) {
    dataset["capacity"] = c.dataset.fixed_capacity;
  } else {
    dataset["capacity"] = "derived";
  }
  j["dataset"] = std::move(dataset);
  json algos = json::array();
  for (Allocator a : c.allocators) algos.push_back(std::string(to_string(a)));
  j["allocators"] = std::move(algos);
  json policy = {{"epsilon", c.policy.epsilon},
                 {"theta", c.policy.theta},
                 {"mode", std::string(to_string(c.policy.mode))}};
  policy["max_rounds"] =
      c.policy.max_rounds ? json(*c.policy.max_rounds) : json(nullptr);
  j["policy"] = std::move(policy);
  j["rho"] = c.rho;
  j["base_acceptance"] = c.base_acceptance;
  j["window_min"] = c.window_min ? json(*c.window_min) : json(nullptr);
  if (c.sweep) {
    j["sweep"] = {{"parameter", std::string(to_string(c.sweep->axis))},
                  {"values", c.sweep->values}};
  }
  if (!c.seeds.empty()) j["seeds"] = c.seeds;
  j["mcf_size_guard"] = c.mcf_size_guard;
  j["skip_bad_rows"] = c.skip_bad_rows;
  j["jobs"] = c.jobs;
  return j;
}

RunRecord run_experiment(const ExperimentConfig& config, Allocator allocator,
                         std::uint64_t seed, bool trace) {
  config.validate();
  return run_cell(config, nullptr, std::nullopt, allocator, seed, trace);
}

std::vector<RunRecord> run_sweep(const ExperimentConfig& config) {
  config.validate();
  const std::vector<std::uint64_t> seeds = effective_seeds(config, true);

  struct Cell {
    std::optional<double> value;
    Allocator allocator;
    std::uint64_t seed;
  };
  std::vector<Cell> cells;
  std::vector<std::optional<double>> values;
  if (config.sweep) {
    values.assign(config.sweep->values.begin(), config.sweep->values.end());
  } else {
    values.push_back(std::nullopt);
  }
  for (const auto& v : values) {
    for (Allocator a : config.allocators) {
      for (std::uint64_t s : seeds) cells.push_back({v, a, s});
    }
  }

  std::optional<RawData> raw;
  if (config.input) raw = read_input(*config.input, config.skip_bad_rows);

  std::vector<RunRecord> records(cells.size());
  std::size_t jobs = config.jobs;
  if (jobs == 0) jobs = std::max(1u, std::thread::hardware_concurrency());
  jobs = std::min(jobs, cells.size());

  std::atomic<std::size_t> next{0};
  std::atomic<bool> failed{false};
  std::exception_ptr error;
  std::mutex error_mutex;
  auto worker = [&] {
    for (;;) {
      const std::size_t i = next.fetch_add(1);
      if (i >= cells.size() || failed.load()) return;
      try {
        const Cell& cell = cells[i];
        const ExperimentConfig effective =
            cell.value ? apply_sweep_value(config, *cell.value) : config;
        records[i] = run_cell(effective, raw ? &*raw : nullptr, cell.value,
                              cell.allocator, cell.seed, false);
      } catch (...) {
        std::lock_guard lock(error_mutex);
        if (!error) error = std::current_exception();
        failed.store(true);
        return;
      }
    }
  };
  if (jobs <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(jobs);
    for (std::size_t t = 0; t < jobs; ++t) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }
  if (error) std::rethrow_exception(error);
  return records;
}

void write_report_csv_header(std::ostream& out) {
  out << "sweep_param,sweep_value,algo,seed,mode,window_min,offer_mode,"
         "epsilon,theta,rho,base_acceptance,delta_t_hours,fixed_delta_t,"
         "radius_coefficient,capacity,task_count,worker_count,tar,unfairness,"
         "ar,objective,avg_k,avg_wait_rounds,allocated_tasks,accepted_offers,"
         "offer_sessions\n";
}

void write_report_csv_row(std::ostream& out, const RunRecord& r) {
  const ExperimentConfig& c = r.effective;
  out << (c.sweep ? to_string(c.sweep->axis) : std::string_view{}) << ','
      << (r.sweep_value ? fmt(*r.sweep_value) : std::string{}) << ','
      << to_string(r.allocator) << ',' << r.seed << ','
      << (c.window_min ? "online" : "offline") << ','
      << (c.window_min ? std::to_string(*c.window_min) : std::string{}) << ','
      << to_string(c.policy.mode) << ',' << fmt(c.policy.epsilon) << ','
      << fmt(c.policy.theta) << ',' << fmt(c.rho) << ','
      << fmt(c.base_acceptance) << ',' << fmt(c.dataset.delta_t_hours) << ','
      << (c.dataset.fixed_delta_t ? "true" : "false") << ','
      << fmt(c.dataset.radius_mean_coefficient) << ','
      << (c.dataset.capacity_mode == CapacityMode::fixed
              ? std::to_string(c.dataset.fixed_capacity)
              : std::string("derived"))
      << ',' << r.task_count << ',' << r.worker_count << ','
      << fmt(r.report.tar) << ',' << fmt(r.report.unfairness) << ','
      << fmt(r.report.ar) << ',' << fmt(r.report.objective) << ','
      << fmt(r.report.avg_k) << ',' << fmt(r.report.avg_wait_rounds) << ','
      << r.report.allocated_tasks << ',' << r.report.accepted_offers << ','
      << r.report.offer_sessions << '\n';
}

std::vector<CellSummary> summarize_cells(const std::vector<RunRecord>& records) {
  std::vector<CellSummary> cells;
  std::vector<std::vector<const RunRecord*>> groups;
  for (const RunRecord& r : records) {
    auto it = std::find_if(cells.begin(), cells.end(), [&](const CellSummary& c) {
      return c.sweep_value == r.sweep_value && c.allocator == r.allocator;
    });
    if (it == cells.end()) {
      cells.push_back({r.sweep_value, r.allocator, 0, {}, {}, {}, {}, {}, {}});
      groups.emplace_back();
      it = cells.end() - 1;
    }
    groups[static_cast<std::size_t>(it - cells.begin())].push_back(&r);
  }
  for (std::size_t i = 0; i < cells.size(); ++i) {
    const auto& g = groups[i];
    auto collect = [&](double MetricsReport::*field) {
      std::vector<double> xs;
      xs.reserve(g.size());
      for (const RunRecord* r : g) xs.push_back(r->report.*field);
      return mean_std(xs);
    };
    cells[i].runs = g.size();
    cells[i].tar = collect(&MetricsReport::tar);
    cells[i].unfairness = collect(&MetricsReport::unfairness);
    cells[i].ar = collect(&MetricsReport::ar);
    cells[i].objective = collect(&MetricsReport::objective);
    cells[i].avg_k = collect(&MetricsReport::avg_k);
    cells[i].avg_wait_rounds = collect(&MetricsReport::avg_wait_rounds);
  }
  return cells;
}

void write_summary_csv(std::ostream& out, std::optional<SweepAxis> axis,
                       const std::vector<CellSummary>& cells) {
  out << "sweep_param,sweep_value,algo,runs,tar_mean,tar_std,unfairness_mean,"
         "unfairness_std,ar_mean,ar_std,objective_mean,objective_std,"
         "avg_k_mean,avg_k_std,avg_wait_rounds_mean,avg_wait_rounds_std\n";
  for (const CellSummary& c : cells) {
    out << (axis ? to_string(*axis) : std::string_view{}) << ','
        << (c.sweep_value ? fmt(*c.sweep_value) : std::string{}) << ','
        << to_string(c.allocator) << ',' << c.runs;
    for (const MeanStd& m : {c.tar, c.unfairness, c.ar, c.objective, c.avg_k,
                             c.avg_wait_rounds}) {
      out << ',' << fmt(m.mean) << ',' << fmt(m.std);
    }
    out << '\n';
  }
}

}  // namespace fairtask
