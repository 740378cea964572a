#include "fairtask/serialize.hpp"

#include <ostream>

namespace fairtask {

void to_json(nlohmann::json& j, const MetricsReport& r) {
  j = nlohmann::json{
      {"tar", r.tar},
      {"unfairness", r.unfairness},
      {"ar", r.ar},
      {"objective", r.objective},
      {"avg_k", r.avg_k},
      {"avg_wait_rounds", r.avg_wait_rounds},
      {"total_tasks", r.total_tasks},
      {"allocated_tasks", r.allocated_tasks},
      {"accepted_offers", r.accepted_offers},
      {"offer_sessions", r.offer_sessions},
      {"lar_values", r.lar_values},
      {"earnings_per_km", r.earnings_per_km},
  };
}

void to_json(nlohmann::json& j, const Nominee& n) {
  j = nlohmann::json{{"worker_id", n.worker},
                     {"receive_availability", n.pair.receive},
                     {"deliver_availability", n.pair.deliver},
                     {"alpha_km", n.alpha},
                     {"beta_km", n.beta},
                     {"acceptance_prob", n.acceptance_prob}};
}

void to_json(nlohmann::json& j, const OfferSession& s) {
  j = nlohmann::json{{"task_id", s.task},
                     {"k", s.k},
                     {"rounds_waited", s.rounds_waited},
                     {"nominees", s.nominees},
                     {"offered", s.offered},
                     {"candidates", s.candidates}};
}

void to_json(nlohmann::json& j, const AssignmentResult& r) {
  auto rows = nlohmann::json::array();
  for (const auto& [task, worker] : r.assignments) {
    rows.push_back({{"task_id", task}, {"worker_id", worker}});
  }
  j = nlohmann::json{{"assignments", std::move(rows)},
                     {"unallocated", r.unallocated}};
}

void write_assignments_csv(std::ostream& out, const AssignmentResult& r) {
  out << "task_id,worker_id\n";
  for (const auto& [task, worker] : r.assignments) {
    out << task << ',' << worker << '\n';
  }
}

}  // namespace fairtask
