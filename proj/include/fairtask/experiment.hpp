#ifndef FAIRTASK_EXPERIMENT_HPP_
#define FAIRTASK_EXPERIMENT_HPP_

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"

#include "fairtask/allocation.hpp"
#include "fairtask/data.hpp"
#include "fairtask/metrics.hpp"
#include "fairtask/offers.hpp"

namespace fairtask {

/// Invalid experiment configuration or input.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class SweepAxis {
  epsilon,
  theta,
  window_min,
  capacity,
  task_count,
  radius_coefficient,
  rho
};

std::string_view to_string(SweepAxis axis);
SweepAxis parse_sweep_axis(std::string_view name);

struct SweepSpec {
  SweepAxis axis = SweepAxis::theta;
  std::vector<double> values;
};

struct InputPaths {
  std::string tasks;
  std::string checkins;
};

struct ExperimentConfig {
  std::optional<InputPaths> input;
  std::optional<SynthParams> synth;
  DatasetConfig dataset;
  std::vector<Allocator> allocators{Allocator::f_aware};
  OfferPolicy policy;
  double rho = 1.0;
  double base_acceptance = 0.9;
  std::optional<int> window_min;  // empty: offline
  std::optional<SweepSpec> sweep;
  std::vector<std::uint64_t> seeds;  // empty: 1 for run, 1..10 for sweep
  std::size_t mcf_size_guard = 40000;
  bool skip_bad_rows = false;
  std::size_t jobs = 0;  // sweep worker threads; 0 picks the core count

  /// Throws ConfigError.
  void validate() const;
};

/// Reads the declarative config file format (see README). Unknown keys are
/// rejected. Throws ConfigError.
ExperimentConfig config_from_json(const nlohmann::json& j);
nlohmann::json config_to_json(const ExperimentConfig& config);

/// One executed (sweep value, allocator, seed) cell.
struct RunRecord {
  std::optional<double> sweep_value;
  Allocator allocator = Allocator::f_aware;
  std::uint64_t seed = 0;
  ExperimentConfig effective;  // config with the sweep value applied
  std::size_t task_count = 0;
  std::size_t worker_count = 0;
  MetricsReport report;
  AssignmentResult assignments;
  std::vector<OfferSession> sessions;  // only when traced
  double allocation_seconds = 0.0;
};

/// Loads or synthesizes the instance and runs the offline pipeline or the
/// online engine. Throws ConfigError on bad config, unreadable files or an
/// MCF run above the size guard.
RunRecord run_experiment(const ExperimentConfig& config, Allocator allocator,
                         std::uint64_t seed, bool trace = false);

/// Cross product of sweep values x allocators x seeds, in that nesting
/// order. Cells run on a bounded thread pool; rows come back in config
/// order.
std::vector<RunRecord> run_sweep(const ExperimentConfig& config);

/// Fixed column set; every row echoes its configuration.
void write_report_csv_header(std::ostream& out);
void write_report_csv_row(std::ostream& out, const RunRecord& record);

struct MeanStd {
  double mean = 0.0;
  double std = 0.0;
};

/// Aggregate over seeds of one (sweep value, allocator) cell.
struct CellSummary {
  std::optional<double> sweep_value;
  Allocator allocator = Allocator::f_aware;
  std::size_t runs = 0;
  MeanStd tar, unfairness, ar, objective, avg_k, avg_wait_rounds;
};

std::vector<CellSummary> summarize_cells(const std::vector<RunRecord>& records);
void write_summary_csv(std::ostream& out, std::optional<SweepAxis> axis,
                       const std::vector<CellSummary>& cells);

}  // namespace fairtask

#endif  // FAIRTASK_EXPERIMENT_HPP_
