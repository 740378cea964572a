// Command-line harness: generate synthetic inputs, run one configuration,
// sweep a parameter, or dump offer traces.

#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "fairtask/data.hpp"
#include "fairtask/experiment.hpp"
#include "fairtask/serialize.hpp"

namespace {

using fairtask::ConfigError;
using fairtask::ExperimentConfig;

struct Overrides {
  std::string config_path;
  std::string tasks_file;
  std::string checkins_file;
  std::optional<std::size_t> synth_tasks;
  std::optional<std::size_t> synth_workers;
  std::vector<std::string> algos;
  std::optional<double> epsilon;
  std::optional<double> theta;
  std::string mode;
  std::optional<double> rho;
  std::optional<double> base_acceptance;
  std::optional<int> window_min;
  bool offline = false;
  std::optional<double> delta_t_hours;
  bool fixed_delta_t = false;
  std::optional<double> radius_coefficient;
  std::string capacity;
  std::vector<std::uint64_t> seeds;
  std::optional<std::size_t> mcf_guard;
  bool skip_bad_rows = false;
  std::optional<std::size_t> jobs;
  std::string sweep_param;
  std::vector<double> sweep_values;
};

struct Output {
  std::string out;
  std::string format = "csv";
};

void add_common(CLI::App* cmd, Overrides& o, Output& out) {
  cmd->add_option("--config", o.config_path, "JSON experiment config file")
      ->check(CLI::ExistingFile);
  cmd->add_option("--tasks", o.tasks_file, "trip CSV file");
  cmd->add_option("--checkins", o.checkins_file, "check-in CSV file");
  cmd->add_option("--synth-tasks", o.synth_tasks, "synthetic task count");
  cmd->add_option("--synth-workers", o.synth_workers, "synthetic worker count");
  cmd->add_option("--algo", o.algos,
                  "allocator(s): f_aware, random, laf, nearest, mcf")
      ->delimiter(',');
  cmd->add_option("--epsilon", o.epsilon, "response-probability threshold");
  cmd->add_option("--theta", o.theta, "assignment-ratio threshold");
  cmd->add_option("--mode", o.mode, "offer mode: unicast, multicast, broadcast");
  cmd->add_option("--rho", o.rho, "fairness weight in the objective");
  cmd->add_option("--base-acceptance", o.base_acceptance,
                  "acceptance probability of a zero-detour offer");
  cmd->add_option("--window-min", o.window_min,
                  "online window in minutes (0 = instant); offline if absent");
  cmd->add_flag("--offline", o.offline, "force the offline pipeline");
  cmd->add_option("--delta-t-hours", o.delta_t_hours, "mean period length");
  cmd->add_flag("--fixed-delta-t", o.fixed_delta_t,
                "use the mean period length for every record");
  cmd->add_option("--radius-coefficient", o.radius_coefficient,
                  "scale of the mean availability radius");
  cmd->add_option("--capacity", o.capacity, "'derived' or a fixed integer");
  cmd->add_option("--seed", o.seeds, "seed(s), comma separated")->delimiter(',');
  cmd->add_option("--mcf-guard", o.mcf_guard, "largest task count MCF accepts");
  cmd->add_flag("--skip-bad-rows", o.skip_bad_rows,
                "drop malformed CSV rows instead of aborting");
  cmd->add_option("--out", out.out, "output file (default stdout)");
  cmd->add_option("--format", out.format, "output format")
      ->check(CLI::IsMember({"csv", "json"}));
}

ExperimentConfig build_config(const Overrides& o) {
  ExperimentConfig c;
  if (!o.config_path.empty()) {
    std::ifstream in(o.config_path);
    nlohmann::json j;
    try {
      in >> j;
    } catch (const nlohmann::json::exception& e) {
      throw ConfigError(o.config_path + ": " + e.what());
    }
    c = fairtask::config_from_json(j);
  }
  try {
    if (!o.tasks_file.empty() || !o.checkins_file.empty()) {
      c.input = fairtask::InputPaths{o.tasks_file, o.checkins_file};
      c.synth.reset();
    }
    if (o.synth_tasks || o.synth_workers) {
      if (!c.synth) c.synth.emplace();
      if (o.synth_tasks) c.synth->tasks = *o.synth_tasks;
      if (o.synth_workers) c.synth->workers = *o.synth_workers;
      c.input.reset();
    }
    if (!o.algos.empty()) {
      c.allocators.clear();
      for (const auto& a : o.algos) c.allocators.push_back(fairtask::parse_allocator(a));
    }
    if (o.epsilon) c.policy.epsilon = *o.epsilon;
    if (o.theta) c.policy.theta = *o.theta;
    if (!o.mode.empty()) c.policy.mode = fairtask::parse_offer_mode(o.mode);
    if (o.rho) c.rho = *o.rho;
    if (o.base_acceptance) c.base_acceptance = *o.base_acceptance;
    if (o.window_min) c.window_min = *o.window_min;
    if (o.offline) c.window_min.reset();
    if (o.delta_t_hours) c.dataset.delta_t_hours = *o.delta_t_hours;
    if (o.fixed_delta_t) c.dataset.fixed_delta_t = true;
    if (o.radius_coefficient) c.dataset.radius_mean_coefficient = *o.radius_coefficient;
    if (!o.capacity.empty()) {
      if (o.capacity == "derived") {
        c.dataset.capacity_mode = fairtask::CapacityMode::derived;
      } else {
        c.dataset.capacity_mode = fairtask::CapacityMode::fixed;
        c.dataset.fixed_capacity = std::stoi(o.capacity);
      }
    }
    if (!o.seeds.empty()) c.seeds = o.seeds;
    if (o.mcf_guard) c.mcf_size_guard = *o.mcf_guard;
    if (o.skip_bad_rows) c.skip_bad_rows = true;
    if (o.jobs) c.jobs = *o.jobs;
    if (!o.sweep_param.empty()) {
      fairtask::SweepSpec spec;
      spec.axis = fairtask::parse_sweep_axis(o.sweep_param);
      spec.values = o.sweep_values;
      if (spec.values.empty() && c.sweep) spec.values = c.sweep->values;
      c.sweep = spec;
    } else if (!o.sweep_values.empty()) {
      if (!c.sweep) throw ConfigError("--values needs --param");
      c.sweep->values = o.sweep_values;
    }
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  } catch (const std::out_of_range& e) {
    throw ConfigError(e.what());
  }
  c.validate();
  return c;
}

// Writes through `out.out` or stdout.
template <typename F>
void emit(const Output& out, F&& write) {
  if (out.out.empty()) {
    write(std::cout);
    return;
  }
  std::ofstream file(out.out);
  if (!file) throw ConfigError("cannot write '" + out.out + "'");
  write(file);
}

int cmd_run(const Overrides& o, const Output& out, const std::string& trace_path) {
  const ExperimentConfig c = build_config(o);
  if (c.allocators.size() != 1) throw ConfigError("run takes a single --algo");
  const std::uint64_t seed = c.seeds.empty() ? 1 : c.seeds.front();
  const fairtask::RunRecord rec = fairtask::run_experiment(
      c, c.allocators.front(), seed, !trace_path.empty());
  if (!trace_path.empty()) {
    emit(Output{trace_path, "json"}, [&](std::ostream& os) {
      os << nlohmann::json(rec.sessions).dump(2) << '\n';
    });
  }
  emit(out, [&](std::ostream& os) {
    if (out.format == "json") {
      nlohmann::json j = {{"config", fairtask::config_to_json(rec.effective)},
                          {"algo", std::string(fairtask::to_string(rec.allocator))},
                          {"seed", rec.seed},
                          {"task_count", rec.task_count},
                          {"worker_count", rec.worker_count},
                          {"report", rec.report}};
      os << j.dump(2) << '\n';
    } else {
      fairtask::write_report_csv_header(os);
      fairtask::write_report_csv_row(os, rec);
    }
  });
  return 0;
}

int cmd_trace(const Overrides& o, const Output& out, const std::string& trace_path,
              const std::string& assignments_path) {
  const ExperimentConfig c = build_config(o);
  if (c.allocators.size() != 1) throw ConfigError("trace takes a single --algo");
  const std::uint64_t seed = c.seeds.empty() ? 1 : c.seeds.front();
  const fairtask::RunRecord rec =
      fairtask::run_experiment(c, c.allocators.front(), seed, true);
  emit(out, [&](std::ostream& os) {
    nlohmann::json j = {{"report", rec.report}, {"sessions", rec.sessions}};
    os << j.dump(2) << '\n';
  });
  if (!trace_path.empty()) {
    Output t{trace_path, "json"};
    emit(t, [&](std::ostream& os) {
      nlohmann::json j = rec.sessions;
      os << j.dump(2) << '\n';
    });
  }
  if (!assignments_path.empty()) {
    Output a{assignments_path, "csv"};
    emit(a, [&](std::ostream& os) {
      fairtask::write_assignments_csv(os, rec.assignments);
    });
  }
  return 0;
}

int cmd_sweep(const Overrides& o, const Output& out, const std::string& summary) {
  const ExperimentConfig c = build_config(o);
  const std::vector<fairtask::RunRecord> records = fairtask::run_sweep(c);
  const auto cells = fairtask::summarize_cells(records);
  const std::optional<fairtask::SweepAxis> axis =
      c.sweep ? std::optional(c.sweep->axis) : std::nullopt;
  emit(out, [&](std::ostream& os) {
    if (out.format == "json") {
      nlohmann::json rows = nlohmann::json::array();
      for (const auto& r : records) {
        rows.push_back({{"sweep_value", r.sweep_value ? nlohmann::json(*r.sweep_value)
                                                      : nlohmann::json(nullptr)},
                        {"algo", std::string(fairtask::to_string(r.allocator))},
                        {"seed", r.seed},
                        {"task_count", r.task_count},
                        {"worker_count", r.worker_count},
                        {"report", r.report}});
      }
      os << nlohmann::json{{"config", fairtask::config_to_json(c)}, {"runs", rows}}
                .dump(2)
         << '\n';
    } else {
      fairtask::write_report_csv_header(os);
      for (const auto& r : records) fairtask::write_report_csv_row(os, r);
    }
  });
  if (!summary.empty()) {
    Output s{summary, "csv"};
    emit(s, [&](std::ostream& os) { fairtask::write_summary_csv(os, axis, cells); });
  } else {
    fairtask::write_summary_csv(std::cerr, axis, cells);
  }
  return 0;
}

int cmd_generate(const fairtask::SynthParams& params, const std::string& dir) {
  const fairtask::RawData raw = fairtask::synth_raw(params);
  const std::string trips_path = dir + "/trips.csv";
  const std::string checkins_path = dir + "/checkins.csv";
  std::ofstream trips(trips_path);
  std::ofstream checkins(checkins_path);
  if (!trips || !checkins) throw ConfigError("cannot write into '" + dir + "'");
  fairtask::write_trips(trips, raw.trips);
  fairtask::write_checkins(checkins, raw.checkins);
  std::cerr << "wrote " << raw.trips.size() << " trips to " << trips_path
            << " and " << raw.checkins.size() << " check-ins to "
            << checkins_path << '\n';
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Fair task allocation simulator"};
  app.require_subcommand(1);

  fairtask::SynthParams synth;
  std::string gen_dir = ".";
  auto* gen = app.add_subcommand("generate", "write synthetic trips.csv and checkins.csv");
  gen->add_option("--tasks", synth.tasks, "number of trips");
  gen->add_option("--workers", synth.workers, "number of distinct users");
  gen->add_option("--checkins-per-worker", synth.checkins_per_worker);
  gen->add_option("--seed", synth.seed);
  gen->add_option("--out", gen_dir, "output directory")->check(CLI::ExistingDirectory);

  Overrides run_o, sweep_o, trace_o;
  Output run_out, sweep_out, trace_out;
  auto* run = app.add_subcommand("run", "run one configuration and print its report");
  add_common(run, run_o, run_out);

  std::string summary_path;
  auto* sweep = app.add_subcommand("sweep", "sweep one parameter across allocators and seeds");
  add_common(sweep, sweep_o, sweep_out);
  sweep->add_option("--param", sweep_o.sweep_param,
                    "epsilon, theta, window_min, capacity, task_count, "
                    "radius_coefficient or rho");
  sweep->add_option("--values", sweep_o.sweep_values, "comma separated values")
      ->delimiter(',');
  sweep->add_option("--jobs", sweep_o.jobs, "worker threads (0 = all cores)");
  sweep->add_option("--summary", summary_path,
                    "mean/std summary CSV (default stderr)");

  std::string trace_path, assignments_path;
  auto* trace = app.add_subcommand("trace", "run one configuration and dump offer sessions");
  add_common(trace, trace_o, trace_out);
  trace->add_option("--trace", trace_path, "also write the sessions array here");
  trace->add_option("--assignments", assignments_path, "assignment CSV output");
  run->add_option("--trace", trace_path, "write offer sessions as JSON here");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*gen) return cmd_generate(synth, gen_dir);
    if (*run) return cmd_run(run_o, run_out, trace_path);
    if (*sweep) return cmd_sweep(sweep_o, sweep_out, summary_path);
    if (*trace) return cmd_trace(trace_o, trace_out, trace_path, assignments_path);
  } catch (const ConfigError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
