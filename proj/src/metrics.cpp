#include "fairtask/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>

namespace fairtask {

double LarRatio::value() const {
  if (counted == 0) return 1.0;
  return static_cast<double>(std::min(allocated, counted)) /
         static_cast<double>(counted);
}

__extension__ using Int128 = __int128;

std::strong_ordering compare_value(const LarRatio& a, const LarRatio& b) {
  // Normalize: empty denominators read as 1/1, numerators clamp at the
  // denominator.
  const Int128 an = a.counted == 0 ? 1 : std::min(a.allocated, a.counted);
  const Int128 ad = a.counted == 0 ? 1 : a.counted;
  const Int128 bn = b.counted == 0 ? 1 : std::min(b.allocated, b.counted);
  const Int128 bd = b.counted == 0 ? 1 : b.counted;
  const Int128 lhs = an * bd;
  const Int128 rhs = bn * ad;
  if (lhs < rhs) return std::strong_ordering::less;
  if (lhs > rhs) return std::strong_ordering::greater;
  return std::strong_ordering::equal;
}

WorkerLedger::WorkerLedger(WorkerId worker, int capacity)
    : worker_(worker), capacity_(capacity) {
  if (capacity < 0) {
    throw std::invalid_argument("negative capacity for worker " +
                                std::to_string(worker));
  }
}

void WorkerLedger::record_acceptance(TaskId task, Money reward) {
  if (accepted_.size() < static_cast<std::size_t>(capacity_)) {
    counted_sum_ += reward;
  }
  accepted_.push_back({task, reward});
}

void WorkerLedger::record_allocation(TaskId task, Money reward,
                                     double movement_km) {
  if (residual_capacity() <= 0) {
    throw std::logic_error("worker " + std::to_string(worker_) +
                           " has no residual capacity for task " +
                           std::to_string(task));
  }
  allocated_.push_back({task, reward});
  allocated_sum_ += reward;
  travelled_km_ += movement_km;
}

LarRatio WorkerLedger::lar_ratio() const {
  return {allocated_sum_.cents, counted_sum_.cents};
}

LedgerBook::LedgerBook(std::span<const Worker> workers) {
  ledgers_.reserve(workers.size());
  for (std::size_t i = 0; i < workers.size(); ++i) {
    if (workers[i].id != i) {
      throw std::invalid_argument("ledger book needs dense worker ids");
    }
    ledgers_.emplace_back(workers[i].id, workers[i].capacity);
  }
}

LarRatio lar_ratio(const WorkerLedger& ledger) {
  const std::size_t counted_n =
      std::min(ledger.accepted().size(),
               static_cast<std::size_t>(ledger.capacity()));
  LarRatio r;
  for (std::size_t i = 0; i < counted_n; ++i) {
    r.counted += ledger.accepted()[i].reward.cents;
  }
  for (const auto& e : ledger.allocated()) r.allocated += e.reward.cents;
  return r;
}

double lar(const WorkerLedger& ledger) { return lar_ratio(ledger).value(); }

double unfairness(std::span<const double> lar_values) {
  if (lar_values.empty()) {
    throw std::domain_error("unfairness undefined on an empty LAR set");
  }
  const double n = static_cast<double>(lar_values.size());
  const double mean =
      std::accumulate(lar_values.begin(), lar_values.end(), 0.0) / n;
  if (mean == 0.0) {
    throw std::domain_error("unfairness undefined for a zero-mean LAR set");
  }
  double ss = 0.0;
  for (double v : lar_values) ss += (v - mean) * (v - mean);
  return std::sqrt(ss / n) / mean;
}

double tar(std::size_t allocated_count, std::size_t total_tasks) {
  if (total_tasks == 0) {
    throw std::domain_error("TAR undefined without tasks");
  }
  if (allocated_count > total_tasks) {
    throw std::invalid_argument("more allocated tasks than tasks");
  }
  return static_cast<double>(allocated_count) /
         static_cast<double>(total_tasks);
}

double ar(std::size_t allocated_count, std::size_t total_accepted_offers) {
  if (total_accepted_offers == 0) return 1.0;
  return static_cast<double>(allocated_count) /
         static_cast<double>(total_accepted_offers);
}

double objective(double tar, double unfairness, double rho) {
  return tar * std::exp(-rho * unfairness);
}

MetricsReport summarize(const LedgerBook& ledgers, std::size_t total_tasks,
                        const OfferStats& offers, double rho) {
  MetricsReport r;
  r.total_tasks = total_tasks;
  for (const auto& ledger : ledgers) {
    r.allocated_tasks += ledger.allocated().size();
    r.accepted_offers += ledger.accepted().size();
    if (ledger.counted_reward().cents > 0) {
      r.lar_values.push_back(ledger.lar_ratio().value());
    }
    if (!ledger.allocated().empty() && ledger.travelled_km() > 0.0) {
      r.earnings_per_km.push_back(ledger.allocated_reward().dollars() /
                                  ledger.travelled_km());
    }
  }
  r.tar = total_tasks == 0 ? 0.0 : tar(r.allocated_tasks, total_tasks);
  r.ar = ar(r.allocated_tasks, r.accepted_offers);

  // Empty or constant LAR sets report zero unfairness; the CV is undefined
  // only at zero mean, where every value is also equal.
  const bool constant =
      r.lar_values.empty() ||
      std::all_of(r.lar_values.begin(), r.lar_values.end(),
                  [&](double v) { return v == r.lar_values.front(); });
  r.unfairness = constant ? 0.0 : unfairness(r.lar_values);
  r.objective = objective(r.tar, r.unfairness, rho);

  r.offer_sessions = offers.sessions;
  r.avg_k = offers.sessions == 0 ? 0.0
                                 : static_cast<double>(offers.k_sum) /
                                       static_cast<double>(offers.sessions);
  r.avg_wait_rounds =
      offers.answered_sessions == 0
          ? 0.0
          : static_cast<double>(offers.answered_rounds_sum) /
                static_cast<double>(offers.answered_sessions);
  return r;
}

}  // namespace fairtask
