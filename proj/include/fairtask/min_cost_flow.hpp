#ifndef FAIRTASK_MIN_COST_FLOW_HPP_
#define FAIRTASK_MIN_COST_FLOW_HPP_

#include <cstddef>
#include <cstdint>
#include <vector>

namespace fairtask {

/// Min-cost max-flow by successive shortest paths.
///
/// Dijkstra runs on reduced costs (Johnson potentials), so edge costs must
/// be nonnegative when added. Each search stops once the sink is settled;
/// unsettled nodes get the sink distance as their potential update, which
/// keeps every residual reduced cost nonnegative.
class MinCostFlow {
 public:
  using Flow = std::int64_t;
  using Cost = std::int64_t;

  struct Result {
    Flow flow = 0;
    Cost cost = 0;
  };

  explicit MinCostFlow(std::size_t nodes);

  /// Returns the edge handle for flow_on().
  std::size_t add_edge(std::size_t from, std::size_t to, Flow capacity,
                       Cost cost);

  Result solve(std::size_t source, std::size_t sink);

  Flow flow_on(std::size_t edge) const;

 private:
  struct Edge {
    std::size_t to;
    std::size_t rev;  // index of the reverse edge in graph_[to]
    Flow capacity;
    Cost cost;
  };

  std::vector<std::vector<Edge>> graph_;
  std::vector<std::pair<std::size_t, std::size_t>> handles_;
  std::vector<Flow> original_capacity_;
};

}  // namespace fairtask

#endif  // FAIRTASK_MIN_COST_FLOW_HPP_
