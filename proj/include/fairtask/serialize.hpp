#ifndef FAIRTASK_SERIALIZE_HPP_
#define FAIRTASK_SERIALIZE_HPP_

#include <iosfwd>

#include "json.hpp"

#include "fairtask/allocation.hpp"
#include "fairtask/metrics.hpp"
#include "fairtask/nomination.hpp"
#include "fairtask/offers.hpp"

namespace fairtask {

void to_json(nlohmann::json& j, const MetricsReport& r);
void to_json(nlohmann::json& j, const Nominee& n);
void to_json(nlohmann::json& j, const OfferSession& s);
/// {"assignments": [{"task_id", "worker_id"}...], "unallocated": [...]}
void to_json(nlohmann::json& j, const AssignmentResult& r);

/// `task_id,worker_id` rows, task id ascending.
void write_assignments_csv(std::ostream& out, const AssignmentResult& r);

}  // namespace fairtask

#endif  // FAIRTASK_SERIALIZE_HPP_
