#include "fairtask/offers.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>

#include "fairtask/random.hpp"

namespace fairtask {
namespace {

void check_k(std::size_t k, std::size_t n) {
  if (k < 1 || k > n) {
    throw std::invalid_argument("batch size " + std::to_string(k) +
                                " outside [1, " + std::to_string(n) + "]");
  }
}

}  // namespace

std::string_view to_string(OfferMode mode) {
  switch (mode) {
    case OfferMode::unicast:
      return "unicast";
    case OfferMode::multicast:
      return "multicast";
    case OfferMode::broadcast:
      return "broadcast";
  }
  return "unknown";
}

OfferMode parse_offer_mode(std::string_view name) {
  if (name == "unicast") return OfferMode::unicast;
  if (name == "multicast") return OfferMode::multicast;
  if (name == "broadcast") return OfferMode::broadcast;
  throw std::invalid_argument("unknown offer mode '" + std::string(name) +
                              "'");
}

void OfferPolicy::validate() const {
  if (!(epsilon > 0.0 && epsilon <= 1.0)) {
    throw std::invalid_argument("epsilon must lie in (0, 1]");
  }
  if (!(theta >= 0.0 && theta <= 1.0)) {
    throw std::invalid_argument("theta must lie in [0, 1]");
  }
  if (max_rounds && *max_rounds == 0) {
    throw std::invalid_argument("max_rounds must be positive");
  }
}

double response_probability(std::size_t k, std::span<const Nominee> nominees) {
  check_k(k, nominees.size());
  double all_refuse = 1.0;
  for (std::size_t i = 0; i < k; ++i) {
    all_refuse *= 1.0 - nominees[i].acceptance_prob;
  }
  return 1.0 - all_refuse;
}

double expected_ar_lower_bound(std::size_t k,
                               std::span<const Nominee> nominees) {
  check_k(k, nominees.size());
  double sum = 0.0;
  for (std::size_t i = 0; i < k; ++i) sum += nominees[i].acceptance_prob;
  return 1.0 / sum;
}

std::size_t select_k(std::span<const Nominee> nominees,
                     const OfferPolicy& policy) {
  const std::size_t n = nominees.size();
  if (n == 0) throw std::invalid_argument("cannot size a batch for no nominees");
  if (policy.mode == OfferMode::unicast) return 1;
  if (policy.mode == OfferMode::broadcast) return n;

  // One pass over prefixes: P(k) is nondecreasing and E(k) nonincreasing,
  // so k_low is the first prefix reaching epsilon and k_up the last prefix
  // keeping E at or above theta.
  std::size_t k_low = 0;  // 0: no prefix reaches epsilon
  std::size_t k_up = 0;   // 0: even k = 1 breaks theta
  double all_refuse = 1.0;
  double sum = 0.0;
  for (std::size_t k = 1; k <= n; ++k) {
    all_refuse *= 1.0 - nominees[k - 1].acceptance_prob;
    sum += nominees[k - 1].acceptance_prob;
    if (k_low == 0 && 1.0 - all_refuse >= policy.epsilon) k_low = k;
    if (1.0 / sum >= policy.theta) k_up = k;
  }
  if (k_low == 0) return n;
  return std::max(k_low, k_up);
}

double KeyedAcceptanceSampler::uniform(TaskId task, WorkerId worker) const {
  std::uint64_t h = mix64(seed_);
  h = mix64(h ^ (static_cast<std::uint64_t>(task) << 1));
  h = mix64(h ^ (static_cast<std::uint64_t>(worker) << 1 | 1));
  return to_unit(h);
}

bool KeyedAcceptanceSampler::accepts(TaskId task, const Nominee& nominee) {
  return uniform(task, nominee.worker) < nominee.acceptance_prob;
}

OfferSession run_offer_rounds(const Task& t, std::vector<Nominee> nominees,
                              const OfferPolicy& policy,
                              AcceptanceSampler& sampler) {
  OfferSession s;
  s.task = t.id;
  s.k = select_k(nominees, policy);
  s.nominees = std::move(nominees);
  const std::size_t n = s.nominees.size();
  s.offered.reserve(std::min(n, s.k));

  std::size_t next = 0;
  while (next < n && s.candidates.empty()) {
    if (policy.max_rounds && s.rounds_waited >= *policy.max_rounds) break;
    const std::size_t batch_end = std::min(n, next + s.k);
    for (; next < batch_end; ++next) {
      const Nominee& nominee = s.nominees[next];
      s.offered.push_back(nominee.worker);
      if (sampler.accepts(t.id, nominee)) s.candidates.push_back(nominee.worker);
    }
    ++s.rounds_waited;
  }
  return s;
}

}  // namespace fairtask
