#ifndef FAIRTASK_OFFERS_HPP_
#define FAIRTASK_OFFERS_HPP_

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "fairtask/nomination.hpp"
#include "fairtask/types.hpp"

namespace fairtask {

enum class OfferMode { unicast, multicast, broadcast };

std::string_view to_string(OfferMode mode);
/// Throws std::invalid_argument on an unknown name.
OfferMode parse_offer_mode(std::string_view name);

struct OfferPolicy {
  double epsilon = 0.8;  // threshold of probability of response
  double theta = 0.4;    // assignment-ratio threshold
  OfferMode mode = OfferMode::multicast;
  /// Cap on batches per session; unbounded when empty.
  std::optional<std::size_t> max_rounds;

  /// Throws std::invalid_argument unless 0 < epsilon <= 1 and
  /// 0 <= theta <= 1.
  void validate() const;
};

/// Offer history of one task.
struct OfferSession {
  TaskId task = 0;
  std::vector<Nominee> nominees;
  std::size_t k = 0;
  std::size_t rounds_waited = 0;
  std::vector<WorkerId> offered;
  std::vector<WorkerId> candidates;  // acceptance order
};

/// Probability that at least one of the first k nominees accepts.
/// Throws std::invalid_argument unless 1 <= k <= |nominees|.
double response_probability(std::size_t k, std::span<const Nominee> nominees);

/// 1 / (R_1 + ... + R_k), a lower bound on the expected assignment ratio.
/// May exceed 1. Same range check as response_probability.
double expected_ar_lower_bound(std::size_t k,
                               std::span<const Nominee> nominees);

/// Largest k meeting both the response and assignment-ratio thresholds.
/// On conflict the response threshold wins; when no k reaches epsilon, all
/// nominees are offered at once. Throws on an empty list.
std::size_t select_k(std::span<const Nominee> nominees,
                     const OfferPolicy& policy);

/// Source of accept/reject decisions.
class AcceptanceSampler {
 public:
  virtual ~AcceptanceSampler() = default;
  virtual bool accepts(TaskId task, const Nominee& nominee) = 0;
};

/// Independent decisions drawn from a stream keyed by
/// (seed, task id, worker id): the same triple always decides the same way.
class KeyedAcceptanceSampler final : public AcceptanceSampler {
 public:
  explicit KeyedAcceptanceSampler(std::uint64_t seed) : seed_(seed) {}
  bool accepts(TaskId task, const Nominee& nominee) override;
  /// Uniform draw in [0, 1) for the key.
  double uniform(TaskId task, WorkerId worker) const;

 private:
  std::uint64_t seed_;
};

/// Offers the task to successive batches of k nominees until a batch yields
/// a candidate or the list is exhausted. Throws on an empty list.
OfferSession run_offer_rounds(const Task& t, std::vector<Nominee> nominees,
                              const OfferPolicy& policy,
                              AcceptanceSampler& sampler);

}  // namespace fairtask

#endif  // FAIRTASK_OFFERS_HPP_
