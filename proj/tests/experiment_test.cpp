#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <sys/wait.h>

#include <gtest/gtest.h>

#include "fairtask/experiment.hpp"

namespace fairtask {
namespace {

ExperimentConfig small_synth(std::size_t tasks = 300, std::size_t workers = 30) {
  ExperimentConfig c;
  SynthParams p;
  p.tasks = tasks;
  p.workers = workers;
  p.checkins_per_worker = 15;
  p.span_seconds = 2 * 24 * 3600;
  c.synth = p;
  return c;
}

std::string sweep_csv(const ExperimentConfig& config) {
  std::ostringstream out;
  write_report_csv_header(out);
  for (const RunRecord& r : run_sweep(config)) write_report_csv_row(out, r);
  return out.str();
}

TEST(RunExperimentTest, UnicastGivesFullArAndZeroUnfairness) {
  ExperimentConfig c = small_synth();
  c.policy.mode = OfferMode::unicast;
  for (Allocator a : {Allocator::f_aware, Allocator::random, Allocator::laf,
                      Allocator::nearest, Allocator::mcf}) {
    for (std::uint64_t seed : {1u, 2u, 3u}) {
      const RunRecord r = run_experiment(c, a, seed);
      EXPECT_EQ(r.report.ar, 1.0) << to_string(a);
      EXPECT_EQ(r.report.unfairness, 0.0) << to_string(a);
      EXPECT_GT(r.report.allocated_tasks, 0u);
    }
  }
}

TEST(RunExperimentTest, ZeroRhoObjectiveIsTar) {
  ExperimentConfig c = small_synth();
  c.rho = 0.0;
  const RunRecord r = run_experiment(c, Allocator::f_aware, 5);
  EXPECT_EQ(r.report.objective, r.report.tar);
}

TEST(RunExperimentTest, SameConfigAndSeedGiveIdenticalReports) {
  ExperimentConfig c = small_synth();
  for (std::optional<int> window : {std::optional<int>{}, std::optional<int>{10}}) {
    c.window_min = window;
    const RunRecord a = run_experiment(c, Allocator::f_aware, 11);
    const RunRecord b = run_experiment(c, Allocator::f_aware, 11);
    EXPECT_EQ(a.report, b.report);
    EXPECT_EQ(a.assignments, b.assignments);
  }
}

TEST(RunExperimentTest, TraceKeepsOneSessionPerOfferedTask) {
  const RunRecord r = run_experiment(small_synth(), Allocator::f_aware, 2, true);
  EXPECT_EQ(r.sessions.size(), r.report.offer_sessions);
  EXPECT_GT(r.sessions.size(), 0u);
}

TEST(RunExperimentTest, McfAboveTheGuardIsRefused) {
  ExperimentConfig c = small_synth(300);
  c.mcf_size_guard = 299;
  try {
    run_experiment(c, Allocator::mcf, 1);
    FAIL() << "expected ConfigError";
  } catch (const ConfigError& e) {
    EXPECT_NE(std::string(e.what()).find("--mcf-guard"), std::string::npos);
  }
  EXPECT_NO_THROW(run_experiment(c, Allocator::f_aware, 1));
  c.mcf_size_guard = 300;
  EXPECT_NO_THROW(run_experiment(c, Allocator::mcf, 1));
}

TEST(RunExperimentTest, UnreadableInputIsAConfigError) {
  ExperimentConfig c;
  c.input = InputPaths{"/nonexistent/trips.csv", "/nonexistent/checkins.csv"};
  EXPECT_THROW(run_experiment(c, Allocator::f_aware, 1), ConfigError);
}

TEST(RunExperimentTest, FileInputMatchesSynthesizedInput) {
  const ExperimentConfig synth = small_synth(200, 20);
  SynthParams p = *synth.synth;
  p.seed = 4;
  const RawData raw = synth_raw(p);
  const auto dir = std::filesystem::temp_directory_path() / "fairtask_experiment_test";
  std::filesystem::create_directories(dir);
  {
    std::ofstream trips(dir / "trips.csv");
    write_trips(trips, raw.trips);
    std::ofstream checkins(dir / "checkins.csv");
    write_checkins(checkins, raw.checkins);
  }
  ExperimentConfig file;
  file.input = InputPaths{(dir / "trips.csv").string(), (dir / "checkins.csv").string()};
  const RunRecord from_file = run_experiment(file, Allocator::f_aware, 4);
  const RunRecord from_synth = run_experiment(synth, Allocator::f_aware, 4);
  EXPECT_EQ(from_file.report, from_synth.report);
  std::filesystem::remove_all(dir);
}

TEST(ConfigTest, ExactlyOneInputSource) {
  ExperimentConfig c;
  EXPECT_THROW(c.validate(), ConfigError);
  c = small_synth();
  EXPECT_NO_THROW(c.validate());
  c.input = InputPaths{"a", "b"};
  EXPECT_THROW(c.validate(), ConfigError);
}

TEST(ConfigTest, EmptySeedListIsAConfigError) {
  const nlohmann::json j = {{"synth", {{"tasks", 10}}}, {"seeds", nlohmann::json::array()}};
  EXPECT_THROW(config_from_json(j), ConfigError);
}

TEST(ConfigTest, EmptySweepValuesAreAConfigError) {
  ExperimentConfig c = small_synth();
  c.sweep = SweepSpec{SweepAxis::theta, {}};
  EXPECT_THROW(c.validate(), ConfigError);
}

TEST(ConfigTest, UnknownKeysAreRejected) {
  EXPECT_THROW(config_from_json({{"synth", {{"tasks", 10}}}, {"colour", "red"}}),
               ConfigError);
  EXPECT_THROW(config_from_json({{"synth", {{"taskz", 10}}}}), ConfigError);
  EXPECT_THROW(config_from_json({{"synth", {{"tasks", 10}}},
                                 {"sweep", {{"parameter", "speed"}, {"values", {1}}}}}),
               ConfigError);
}

TEST(ConfigTest, JsonRoundTrip) {
  const nlohmann::json j = nlohmann::json::parse(R"({
    "synth": {"tasks": 500, "workers": 40, "checkins_per_worker": 12,
              "start": "2012-05-01T00:00:00", "days": 3},
    "dataset": {"delta_t_hours": 1.5, "fixed_delta_t": true,
                "radius_coefficient": 2, "capacity": 7},
    "allocators": ["f_aware", "mcf"],
    "policy": {"epsilon": 0.9, "theta": 0.2, "mode": "multicast", "max_rounds": 40},
    "rho": 0.5, "base_acceptance": 0.8, "window_min": 15,
    "sweep": {"parameter": "epsilon", "values": [0.5, 0.8]},
    "seeds": [3, 4], "mcf_size_guard": 1000, "jobs": 2
  })");
  const ExperimentConfig c = config_from_json(j);
  EXPECT_EQ(c.synth->tasks, 500u);
  EXPECT_EQ(c.synth->span_seconds, 3 * 86400);
  EXPECT_EQ(c.dataset.capacity_mode, CapacityMode::fixed);
  EXPECT_EQ(c.dataset.fixed_capacity, 7);
  EXPECT_EQ(c.allocators, (std::vector<Allocator>{Allocator::f_aware, Allocator::mcf}));
  EXPECT_EQ(c.window_min, 15);
  EXPECT_EQ(c.seeds, (std::vector<std::uint64_t>{3, 4}));
  const nlohmann::json back = config_to_json(c);
  EXPECT_EQ(config_to_json(config_from_json(back)), back);
}

TEST(SweepTest, ThetaSweepDoesNotRaiseAverageK) {
  ExperimentConfig c = small_synth(400, 40);
  c.sweep = SweepSpec{SweepAxis::theta, {0.2, 0.4}};
  c.seeds = {1, 2, 3};
  const auto records = run_sweep(c);
  ASSERT_EQ(records.size(), 6u);
  for (std::size_t s = 0; s < 3; ++s) {
    EXPECT_GE(records[s].report.avg_k, records[3 + s].report.avg_k);
  }
  const auto cells = summarize_cells(records);
  ASSERT_EQ(cells.size(), 2u);
  EXPECT_GE(cells[0].avg_k.mean, cells[1].avg_k.mean);
}

TEST(SweepTest, McfCapacitySweepIsWeaklyIncreasing) {
  ExperimentConfig c = small_synth(250, 25);
  c.allocators = {Allocator::mcf};
  c.sweep = SweepSpec{SweepAxis::capacity, {1, 2, 4, 8, 16}};
  c.seeds = {1, 2};
  const auto records = run_sweep(c);
  ASSERT_EQ(records.size(), 10u);
  for (std::size_t v = 1; v < 5; ++v) {
    for (std::size_t s = 0; s < 2; ++s) {
      EXPECT_GE(records[v * 2 + s].report.tar, records[(v - 1) * 2 + s].report.tar)
          << "capacity " << *records[v * 2 + s].sweep_value;
    }
  }
}

TEST(SweepTest, RowsComeBackInConfigOrder) {
  ExperimentConfig c = small_synth(150, 15);
  c.allocators = {Allocator::laf, Allocator::f_aware};
  c.sweep = SweepSpec{SweepAxis::epsilon, {0.5, 0.9}};
  c.seeds = {7, 8};
  c.jobs = 3;
  const auto records = run_sweep(c);
  ASSERT_EQ(records.size(), 8u);
  std::size_t i = 0;
  for (double v : {0.5, 0.9}) {
    for (Allocator a : {Allocator::laf, Allocator::f_aware}) {
      for (std::uint64_t s : {7u, 8u}) {
        EXPECT_EQ(*records[i].sweep_value, v);
        EXPECT_EQ(records[i].allocator, a);
        EXPECT_EQ(records[i].seed, s);
        EXPECT_EQ(records[i].effective.policy.epsilon, v);
        ++i;
      }
    }
  }
}

TEST(SweepTest, DefaultSeedsAreOneToTen) {
  ExperimentConfig c = small_synth(60, 8);
  c.sweep = SweepSpec{SweepAxis::rho, {0.0}};
  const auto records = run_sweep(c);
  ASSERT_EQ(records.size(), 10u);
  for (std::size_t i = 0; i < 10; ++i) EXPECT_EQ(records[i].seed, i + 1);
}

TEST(SweepTest, IdenticalConfigGivesIdenticalCsv) {
  ExperimentConfig c = small_synth(200, 20);
  c.allocators = {Allocator::f_aware, Allocator::random};
  c.sweep = SweepSpec{SweepAxis::window_min, {0, 5}};
  c.seeds = {1, 2};
  c.jobs = 1;
  const std::string serial = sweep_csv(c);
  c.jobs = 4;
  EXPECT_EQ(sweep_csv(c), serial);
  EXPECT_EQ(sweep_csv(c), serial);
}

TEST(SweepTest, CsvRowsEchoTheConfiguration) {
  ExperimentConfig c = small_synth(80, 10);
  c.sweep = SweepSpec{SweepAxis::task_count, {40}};
  c.seeds = {3};
  const std::string csv = sweep_csv(c);
  std::istringstream in(csv);
  std::string header;
  std::string row;
  std::getline(in, header);
  std::getline(in, row);
  EXPECT_EQ(header.rfind("sweep_param,sweep_value,algo,seed,mode,window_min,", 0), 0u);
  EXPECT_EQ(row.rfind("task_count,40,f_aware,3,offline,", 0), 0u);
  const auto commas = [](const std::string& s) { return std::count(s.begin(), s.end(), ','); };
  EXPECT_EQ(commas(header), commas(row));
}

TEST(SummaryTest, MeanAndStdPerCell) {
  std::vector<RunRecord> records(3);
  const double tars[] = {0.5, 0.7, 0.9};
  for (int i = 0; i < 3; ++i) {
    records[i].sweep_value = 1.0;
    records[i].seed = i;
    records[i].report.tar = tars[i];
  }
  const auto cells = summarize_cells(records);
  ASSERT_EQ(cells.size(), 1u);
  EXPECT_EQ(cells[0].runs, 3u);
  EXPECT_NEAR(cells[0].tar.mean, 0.7, 1e-12);
  EXPECT_NEAR(cells[0].tar.std, std::sqrt(0.08 / 3.0), 1e-12);
}

#ifdef FAIRTASK_CLI_PATH
int run_cli(const std::string& args) {
  const std::string cmd =
      std::string(FAIRTASK_CLI_PATH) + " " + args + " > /dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

TEST(CliTest, ExitCodes) {
  EXPECT_EQ(run_cli("run --synth-tasks 100 --synth-workers 10"), 0);
  EXPECT_EQ(run_cli("run --synth-tasks 100 --synth-workers 10 --algo mcf --mcf-guard 50"), 2);
  EXPECT_EQ(run_cli("run --tasks /nonexistent.csv --checkins /nonexistent.csv"), 2);
  EXPECT_EQ(run_cli("run --synth-tasks 100 --epsilon 1.5"), 2);
  EXPECT_NE(run_cli("frobnicate"), 0);
}
#endif

}  // namespace
}  // namespace fairtask
