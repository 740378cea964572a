#ifndef FAIRTASK_METRICS_HPP_
#define FAIRTASK_METRICS_HPP_

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "fairtask/types.hpp"

namespace fairtask {

/// Exact local assignment ratio: allocated / counted, both in cents.
/// A zero denominator stands for "never accepted anything" and reads as 1.
struct LarRatio {
  std::int64_t allocated = 0;
  std::int64_t counted = 0;

  double value() const;
  /// Three-way comparison by value using integer cross-multiplication.
  friend std::strong_ordering compare_value(const LarRatio& a,
                                            const LarRatio& b);
};

struct LedgerEntry {
  TaskId task = 0;
  Money reward;

  friend bool operator==(const LedgerEntry&, const LedgerEntry&) = default;
};

/// Running accepted/allocated tallies of one worker.
///
/// Acceptances are kept in chronological order; only the first `capacity`
/// of them count toward the LAR denominator. The allocated sum is clamped to
/// the counted sum when read, so LAR never leaves [0, 1].
class WorkerLedger {
 public:
  WorkerLedger() = default;
  WorkerLedger(WorkerId worker, int capacity);

  void record_acceptance(TaskId task, Money reward);
  /// Throws std::logic_error when the worker has no residual capacity.
  void record_allocation(TaskId task, Money reward, double movement_km = 0.0);

  WorkerId worker_id() const { return worker_; }
  int capacity() const { return capacity_; }
  int residual_capacity() const { return capacity_ - allocated_count(); }
  int allocated_count() const { return static_cast<int>(allocated_.size()); }

  const std::vector<LedgerEntry>& accepted() const { return accepted_; }
  const std::vector<LedgerEntry>& allocated() const { return allocated_; }

  /// Incrementally maintained ratio.
  LarRatio lar_ratio() const;
  Money allocated_reward() const { return allocated_sum_; }
  Money counted_reward() const { return counted_sum_; }
  double travelled_km() const { return travelled_km_; }

 private:
  WorkerId worker_ = 0;
  int capacity_ = 0;
  std::vector<LedgerEntry> accepted_;
  std::vector<LedgerEntry> allocated_;
  Money allocated_sum_;
  Money counted_sum_;
  double travelled_km_ = 0.0;
};

/// Ledgers for a dense worker id range.
class LedgerBook {
 public:
  LedgerBook() = default;
  explicit LedgerBook(std::span<const Worker> workers);

  WorkerLedger& at(WorkerId worker) { return ledgers_.at(worker); }
  const WorkerLedger& at(WorkerId worker) const { return ledgers_.at(worker); }
  std::size_t size() const { return ledgers_.size(); }

  auto begin() const { return ledgers_.begin(); }
  auto end() const { return ledgers_.end(); }

 private:
  std::vector<WorkerLedger> ledgers_;
};

/// LAR recomputed from the ledger's entry lists.
LarRatio lar_ratio(const WorkerLedger& ledger);
double lar(const WorkerLedger& ledger);

/// Coefficient of variation (population sigma over mean).
/// Throws std::domain_error on an empty list or zero mean.
double unfairness(std::span<const double> lar_values);

/// Throws std::domain_error when total_tasks is 0.
double tar(std::size_t allocated_count, std::size_t total_tasks);

/// 1.0 when both counts are zero.
double ar(std::size_t allocated_count, std::size_t total_accepted_offers);

double objective(double tar, double unfairness, double rho);

struct MetricsReport {
  double tar = 0.0;
  double unfairness = 0.0;
  double ar = 1.0;
  double objective = 0.0;
  double avg_k = 0.0;
  double avg_wait_rounds = 0.0;
  std::vector<double> lar_values;
  std::vector<double> earnings_per_km;

  std::size_t total_tasks = 0;
  std::size_t allocated_tasks = 0;
  std::size_t accepted_offers = 0;
  std::size_t offer_sessions = 0;

  friend bool operator==(const MetricsReport&, const MetricsReport&) = default;
};

/// Offer-phase tallies accumulated while a pipeline runs.
struct OfferStats {
  std::size_t sessions = 0;
  std::size_t k_sum = 0;
  std::size_t answered_sessions = 0;
  std::size_t answered_rounds_sum = 0;
};

/// Builds the report from the final ledgers. Workers with no counted
/// acceptance are left out of the LAR set.
MetricsReport summarize(const LedgerBook& ledgers, std::size_t total_tasks,
                        const OfferStats& offers, double rho);

}  // namespace fairtask

#endif  // FAIRTASK_METRICS_HPP_
