#include <random>
#include <vector>

#include <gtest/gtest.h>

#include "fairtask/allocation.hpp"
#include "fairtask/metrics.hpp"
#include "test_support.hpp"

namespace fairtask {
namespace {

struct Fixture {
  std::vector<Worker> workers;
  AssignmentGraph graph;

  explicit Fixture(const std::vector<int>& capacities) {
    for (std::size_t i = 0; i < capacities.size(); ++i) {
      Worker w;
      w.id = static_cast<WorkerId>(i);
      w.capacity = capacities[i];
      workers.push_back(w);
    }
  }

  void task(TaskId id, std::vector<std::pair<WorkerId, double>> edges,
            int reward = 1000) {
    TaskNode node;
    node.id = id;
    node.reward = Money{reward};
    node.alpha = 1.0;
    for (auto [w, beta] : edges) node.candidates.push_back({w, beta, {w, w}});
    graph.tasks.push_back(node);
  }

  LedgerBook book() const { return LedgerBook(workers); }

  std::vector<int> caps() const {
    std::vector<int> c;
    for (const auto& w : workers) c.push_back(w.capacity);
    return c;
  }
};

constexpr Allocator kAll[] = {Allocator::f_aware, Allocator::random,
                              Allocator::laf, Allocator::nearest,
                              Allocator::mcf};

TEST(FAwareTest, LowDegreeTaskGoesFirst) {
  // Workers 1 and 2; slot 0 is unused.
  Fixture f({0, 1, 1});
  f.task(2, {{1, 1.0}, {2, 1.0}});
  f.task(1, {{1, 1.0}});
  auto book = f.book();
  const auto r = f_aware(f.graph, book);
  EXPECT_EQ(r.assignments.at(1), 1u);
  EXPECT_EQ(r.assignments.at(2), 2u);
  EXPECT_TRUE(r.unallocated.empty());
  EXPECT_DOUBLE_EQ(tar(r.assignments.size(), 2), 1.0);
  EXPECT_EQ(testing::brute_force_max_allocations(f.graph, f.caps()), 2u);
}

TEST(FAwareTest, ZeroCapacityCandidate) {
  Fixture f({0});
  f.task(0, {{0, 1.0}});
  auto book = f.book();
  const auto r = f_aware(f.graph, book);
  EXPECT_TRUE(r.assignments.empty());
  EXPECT_EQ(r.unallocated, std::set<TaskId>{0});
}

TEST(FAwareTest, SharedCandidateWithRoom) {
  Fixture f({2});
  f.task(0, {{0, 1.0}});
  f.task(1, {{0, 1.0}});
  auto book = f.book();
  const auto r = f_aware(f.graph, book);
  EXPECT_EQ(r.assignments.size(), 2u);
  EXPECT_EQ(r.assignments.at(0), 0u);
  EXPECT_EQ(r.assignments.at(1), 0u);
}

TEST(FAwareTest, PrefersLowestLar) {
  Fixture f({3, 3});
  f.task(9, {{0, 1.0}, {1, 1.0}});
  auto book = f.book();
  book.at(0).record_acceptance(100, Money{500});
  book.at(0).record_allocation(100, Money{500});
  book.at(1).record_acceptance(101, Money{500});
  const auto r = f_aware(f.graph, book);
  EXPECT_EQ(r.assignments.at(9), 1u);
}

TEST(FAwareTest, EqualLarPrefersLargerDenominator) {
  Fixture f({3, 3});
  f.task(9, {{0, 1.0}, {1, 1.0}});
  auto book = f.book();
  book.at(0).record_acceptance(100, Money{100});
  book.at(1).record_acceptance(101, Money{900});
  const auto r = f_aware(f.graph, book);
  EXPECT_EQ(r.assignments.at(9), 1u);
}

TEST(FAwareTest, FullTieGoesToLowerWorkerId) {
  Fixture f({1, 1});
  f.task(0, {{1, 1.0}, {0, 1.0}});
  auto book = f.book();
  EXPECT_EQ(f_aware(f.graph, book).assignments.at(0), 0u);
}

TEST(FAwareTest, LedgerRecomputationMatches) {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 200; ++trial) {
    auto g = testing::random_small_graph(rng, 30, 8, 4, 0.3);
    LedgerBook book(g.workers);
    for (const TaskNode& node : g.graph.tasks) {
      for (const CandidateEdge& e : node.candidates) {
        book.at(e.worker).record_acceptance(node.id, node.reward);
      }
    }
    f_aware(g.graph, book);
    for (const WorkerLedger& l : book) {
      const LarRatio inc = l.lar_ratio();
      const LarRatio full = lar_ratio(l);
      EXPECT_EQ(inc.allocated, full.allocated);
      EXPECT_EQ(inc.counted, full.counted);
    }
  }
}

TEST(RandomAllocTest, SingleCandidateMatchesFAware) {
  Fixture f({1, 2, 1});
  f.task(0, {{0, 1.0}});
  f.task(1, {{1, 1.0}});
  f.task(2, {{1, 1.0}});
  f.task(3, {{2, 1.0}});
  f.task(4, {{2, 1.0}});
  auto a = f.book();
  auto b = f.book();
  EXPECT_EQ(random_alloc(f.graph, a, 3).assignments,
            f_aware(f.graph, b).assignments);
}

TEST(RandomAllocTest, NoCandidates) {
  Fixture f({1});
  f.task(0, {});
  auto book = f.book();
  const auto r = random_alloc(f.graph, book, 1);
  EXPECT_EQ(r.unallocated, std::set<TaskId>{0});
}

TEST(RandomAllocTest, SeedReplay) {
  std::mt19937_64 rng(1);
  const auto g = testing::random_small_graph(rng, 40, 10, 3, 0.5);
  LedgerBook a(g.workers);
  LedgerBook b(g.workers);
  EXPECT_EQ(random_alloc(g.graph, a, 99), random_alloc(g.graph, b, 99));
}

TEST(LafTest, FewestAllocationsWins) {
  Fixture f({0, 5, 5});
  f.task(10, {{1, 1.0}, {2, 1.0}});
  auto book = f.book();
  for (TaskId t = 0; t < 3; ++t) book.at(1).record_allocation(t, Money{1});
  book.at(2).record_allocation(3, Money{1});
  EXPECT_EQ(laf_alloc(f.graph, book).assignments.at(10), 2u);
}

TEST(LafTest, FreshGraphTakesLowestId) {
  Fixture f({2, 2, 2});
  f.task(0, {{2, 1.0}, {1, 1.0}});
  auto book = f.book();
  EXPECT_EQ(laf_alloc(f.graph, book).assignments.at(0), 1u);
}

TEST(LafTest, IdenticalTasksAlternate) {
  Fixture f({5, 5});
  for (TaskId t = 0; t < 6; ++t) f.task(t, {{0, 1.0}, {1, 1.0}});
  auto book = f.book();
  const auto r = laf_alloc(f.graph, book);
  for (TaskId t = 0; t < 6; ++t) EXPECT_EQ(r.assignments.at(t), t % 2);
}

TEST(NearestTest, SmallestBetaWins) {
  Fixture f({0, 1, 1});
  f.task(0, {{2, 5.0}, {1, 2.0}});
  auto book = f.book();
  EXPECT_EQ(nearest_alloc(f.graph, book).assignments.at(0), 1u);
}

TEST(NearestTest, EqualBetaTakesLowerId) {
  Fixture f({0, 1, 1});
  f.task(0, {{2, 3.0}, {1, 3.0}});
  auto book = f.book();
  EXPECT_EQ(nearest_alloc(f.graph, book).assignments.at(0), 1u);
}

TEST(NearestTest, SaturatedNearestFallsBack) {
  Fixture f({1, 1, 1});
  f.task(0, {{0, 1.0}});
  f.task(1, {{0, 1.0}, {1, 4.0}, {2, 3.0}});
  auto book = f.book();
  const auto r = nearest_alloc(f.graph, book);
  EXPECT_EQ(r.assignments.at(0), 0u);
  EXPECT_EQ(r.assignments.at(1), 2u);
}

TEST(McfTest, ThreeTasksTwoWorkers) {
  Fixture f({0, 1, 1});
  f.task(1, {{1, 1.0}});
  f.task(2, {{1, 1.0}, {2, 1.0}});
  f.task(3, {{2, 1.0}});
  auto book = f.book();
  const auto r = mcf_alloc(f.graph, book);
  EXPECT_EQ(r.assignments.size(), 2u);
  EXPECT_EQ(r.unallocated.size(), 1u);
  EXPECT_EQ(testing::brute_force_max_allocations(f.graph, f.caps()), 2u);
}

TEST(McfTest, EmptyGraph) {
  Fixture f({1});
  auto book = f.book();
  const auto r = mcf_alloc(f.graph, book);
  EXPECT_TRUE(r.assignments.empty());
  EXPECT_TRUE(r.unallocated.empty());
}

TEST(McfTest, PrefersCheaperEdgesAtEqualFlow) {
  Fixture f({1, 1});
  f.task(0, {{0, 9.0}, {1, 1.0}});
  auto book = f.book();
  EXPECT_EQ(mcf_alloc(f.graph, book).assignments.at(0), 1u);
}

TEST(McfTest, MatchesBruteForceAndDominatesHeuristics) {
  std::mt19937_64 rng(2718);
  for (int trial = 0; trial < 200; ++trial) {
    const auto g = testing::random_small_graph(rng, 10, 6, 3);
    const std::size_t best = testing::brute_force_max_allocations(g.graph, g.capacities);
    LedgerBook book(g.workers);
    const auto mcf = mcf_alloc(g.graph, book);
    ASSERT_EQ(mcf.assignments.size(), best) << "trial " << trial;
    for (Allocator a : kAll) {
      LedgerBook other(g.workers);
      const auto r = allocate(a, g.graph, other, static_cast<std::uint64_t>(trial));
      EXPECT_LE(r.assignments.size(), best) << to_string(a);
    }
  }
}

TEST(AllocatorTest, ConstraintsHoldOnRandomGraphs) {
  std::mt19937_64 rng(314);
  for (int trial = 0; trial < 300; ++trial) {
    const auto g = testing::random_small_graph(rng, 40, 10, 4, 0.3);
    for (Allocator a : kAll) {
      LedgerBook book(g.workers);
      const auto r = allocate(a, g.graph, book, 7);
      EXPECT_TRUE(check_constraints(g.graph, r, g.capacities).empty())
          << to_string(a) << " trial " << trial;
      std::size_t ledger_total = 0;
      for (const WorkerLedger& l : book) {
        ledger_total += static_cast<std::size_t>(l.allocated_count());
        EXPECT_GE(l.residual_capacity(), 0);
      }
      EXPECT_EQ(ledger_total, r.assignments.size());
    }
  }
}

TEST(AllocatorTest, CheckConstraintsFlagsViolations) {
  Fixture f({1, 1});
  f.task(0, {{0, 1.0}});
  f.task(1, {{0, 1.0}});
  AssignmentResult bad;
  bad.assignments = {{0, 0}, {1, 0}};
  EXPECT_FALSE(check_constraints(f.graph, bad, f.caps()).empty());
  AssignmentResult wrong;
  wrong.assignments = {{0, 1}};
  wrong.unallocated = {1};
  EXPECT_FALSE(check_constraints(f.graph, wrong, f.caps()).empty());
}

TEST(AllocatorTest, FAwareDeterministicAndBeatsRandomOnAverage) {
  std::mt19937_64 rng(55);
  double f_total = 0.0;
  double r_total = 0.0;
  for (int trial = 0; trial < 200; ++trial) {
    const auto g = testing::random_small_graph(rng, 40, 10, 3, 0.3);
    LedgerBook a(g.workers);
    LedgerBook b(g.workers);
    const auto first = f_aware(g.graph, a);
    EXPECT_EQ(first, f_aware(g.graph, b));
    f_total += static_cast<double>(first.assignments.size());
    for (std::uint64_t seed = 0; seed < 5; ++seed) {
      LedgerBook c(g.workers);
      r_total += static_cast<double>(random_alloc(g.graph, c, seed).assignments.size()) / 5.0;
    }
  }
  EXPECT_GE(f_total, r_total);
}

TEST(AllocatorTest, ParseNames) {
  EXPECT_EQ(parse_allocator("f-aware"), Allocator::f_aware);
  EXPECT_EQ(parse_allocator("mcf"), Allocator::mcf);
  for (Allocator a : kAll) EXPECT_EQ(parse_allocator(to_string(a)), a);
  EXPECT_THROW(parse_allocator("hungarian"), std::invalid_argument);
}

}  // namespace
}  // namespace fairtask
