#ifndef FAIRTASK_INTERVAL_TREE_HPP_
#define FAIRTASK_INTERVAL_TREE_HPP_

#include <algorithm>
#include <cstddef>
#include <vector>

#include "fairtask/types.hpp"

namespace fairtask {

/// Static interval tree over closed time periods.
///
/// Items are sorted by period begin and laid out as an implicit balanced
/// BST (node = midpoint of its range). Each node caches the largest end in
/// its subtree, so an overlap query prunes subtrees ending before the query
/// and stops descending right once begins pass the query end.
/// Query cost is O(log n + hits).
template <class T>
class IntervalTree {
 public:
  struct Item {
    TimePeriod period;
    T value;
  };

  IntervalTree() = default;

  explicit IntervalTree(std::vector<Item> items) : items_(std::move(items)) {
    std::stable_sort(items_.begin(), items_.end(),
                     [](const Item& a, const Item& b) {
                       return a.period.begin < b.period.begin;
                     });
    max_end_.resize(items_.size());
    if (!items_.empty()) build(0, items_.size());
  }

  std::size_t size() const { return items_.size(); }
  bool empty() const { return items_.empty(); }

  /// Calls visit(item) for every item whose period intersects `query`.
  template <class Visitor>
  void for_each_overlapping(const TimePeriod& query, Visitor&& visit) const {
    if (!items_.empty()) walk(0, items_.size(), query, visit);
  }

  std::vector<const Item*> query(const TimePeriod& period) const {
    std::vector<const Item*> out;
    for_each_overlapping(period, [&](const Item& it) { out.push_back(&it); });
    return out;
  }

  const std::vector<Item>& items() const { return items_; }

 private:
  Timestamp build(std::size_t lo, std::size_t hi) {
    const std::size_t mid = lo + (hi - lo) / 2;
    Timestamp m = items_[mid].period.end;
    if (lo < mid) m = std::max(m, build(lo, mid));
    if (mid + 1 < hi) m = std::max(m, build(mid + 1, hi));
    max_end_[mid] = m;
    return m;
  }

  template <class Visitor>
  void walk(std::size_t lo, std::size_t hi, const TimePeriod& q,
            Visitor& visit) const {
    while (lo < hi) {
      const std::size_t mid = lo + (hi - lo) / 2;
      if (max_end_[mid] < q.begin) return;
      if (lo < mid) walk(lo, mid, q, visit);
      const Item& it = items_[mid];
      // Everything right of mid begins no earlier than it.
      if (it.period.begin > q.end) return;
      if (it.period.end >= q.begin) visit(it);
      lo = mid + 1;
    }
  }

  std::vector<Item> items_;
  std::vector<Timestamp> max_end_;
};

}  // namespace fairtask

#endif  // FAIRTASK_INTERVAL_TREE_HPP_
