#include "fairtask/min_cost_flow.hpp"

#include <algorithm>
#include <functional>
#include <limits>
#include <queue>
#include <stdexcept>

namespace fairtask {

MinCostFlow::MinCostFlow(std::size_t nodes) : graph_(nodes) {}

std::size_t MinCostFlow::add_edge(std::size_t from, std::size_t to,
                                  Flow capacity, Cost cost) {
  if (from >= graph_.size() || to >= graph_.size()) {
    throw std::out_of_range("edge endpoint outside the flow network");
  }
  if (capacity < 0 || cost < 0) {
    throw std::invalid_argument("edge capacity and cost must be nonnegative");
  }
  const std::size_t fwd = graph_[from].size();
  const std::size_t bwd = graph_[to].size() + (from == to ? 1 : 0);
  graph_[from].push_back({to, bwd, capacity, cost});
  graph_[to].push_back({from, fwd, 0, -cost});
  handles_.emplace_back(from, fwd);
  original_capacity_.push_back(capacity);
  return handles_.size() - 1;
}

MinCostFlow::Flow MinCostFlow::flow_on(std::size_t edge) const {
  const auto [node, idx] = handles_.at(edge);
  return original_capacity_[edge] - graph_[node][idx].capacity;
}

MinCostFlow::Result MinCostFlow::solve(std::size_t source, std::size_t sink) {
  constexpr Cost kInf = std::numeric_limits<Cost>::max() / 4;
  const std::size_t n = graph_.size();
  std::vector<Cost> potential(n, 0);
  std::vector<Cost> dist(n);
  std::vector<bool> settled(n);
  std::vector<std::size_t> prev_node(n);
  std::vector<std::size_t> prev_edge(n);
  Result result;

  using Entry = std::pair<Cost, std::size_t>;
  std::priority_queue<Entry, std::vector<Entry>, std::greater<>> heap;

  while (true) {
    std::fill(dist.begin(), dist.end(), kInf);
    std::fill(settled.begin(), settled.end(), false);
    dist[source] = 0;
    heap.push({0, source});
    while (!heap.empty()) {
      const auto [d, u] = heap.top();
      heap.pop();
      if (settled[u]) continue;
      settled[u] = true;
      if (u == sink) break;
      for (std::size_t i = 0; i < graph_[u].size(); ++i) {
        const Edge& e = graph_[u][i];
        if (e.capacity <= 0 || settled[e.to]) continue;
        const Cost nd = d + e.cost + potential[u] - potential[e.to];
        if (nd < dist[e.to]) {
          dist[e.to] = nd;
          prev_node[e.to] = u;
          prev_edge[e.to] = i;
          heap.push({nd, e.to});
        }
      }
    }
    while (!heap.empty()) heap.pop();
    if (!settled[sink]) break;

    const Cost sink_dist = dist[sink];
    for (std::size_t v = 0; v < n; ++v) {
      potential[v] += settled[v] ? dist[v] : sink_dist;
    }

    Flow push = std::numeric_limits<Flow>::max();
    for (std::size_t v = sink; v != source; v = prev_node[v]) {
      push = std::min(push, graph_[prev_node[v]][prev_edge[v]].capacity);
    }
    for (std::size_t v = sink; v != source; v = prev_node[v]) {
      Edge& e = graph_[prev_node[v]][prev_edge[v]];
      e.capacity -= push;
      graph_[v][e.rev].capacity += push;
      result.cost += push * e.cost;
    }
    result.flow += push;
  }
  return result;
}

}  // namespace fairtask
