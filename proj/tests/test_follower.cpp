#include <doctest.h>

#include <algorithm>

#include "cdflp/reaction.hpp"
#include "support/fixtures.hpp"

using namespace cdflp;
using cdflp::testing::ex1;
using cdflp::testing::make_instance;
using cdflp::testing::make_schedule;

// Independent count: schedules per period = sum of binomials up to budget,
// raised to the number of periods.
static std::int64_t schedule_count_oracle(int locations, int budget, int periods) {
  auto binom = [](int n, int k) {
    std::int64_t r = 1;
    for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
    return r;
  };
  std::int64_t perPeriod = 0;
  for (int k = 0; k <= std::min(budget, locations); ++k) perPeriod += binom(locations, k);
  std::int64_t total = 1;
  for (int t = 0; t < periods; ++t) total *= perPeriod;
  return total;
}

TEST_CASE("enumerate_schedules order and counts") {
  Instance inst = ex1();
  inst.periodCount = 1;
  ScheduleEnumerator en(inst, 1);
  REQUIRE(en.count() == 3);
  CHECK(en.at(0) == make_schedule({{}}));
  CHECK(en.at(1) == make_schedule({{0}}));
  CHECK(en.at(2) == make_schedule({{1}}));

  Instance two = ex1();
  CHECK(ScheduleEnumerator(two, 1).count() == 9);
  CHECK(ScheduleEnumerator(two, 1).count() == schedule_count_oracle(2, 1, 2));

  Instance three = make_instance(3, 2, {{1, 1}}, {{0}}, Rational(1, 2));
  CHECK(ScheduleEnumerator(three, 2).count() == 49);
  CHECK(ScheduleEnumerator(three, 2).count() == schedule_count_oracle(3, 2, 2));
}

TEST_CASE("enumeration yields each schedule exactly once and index_of inverts at") {
  Instance inst = make_instance(3, 2, {{1, 1}}, {{0}}, Rational(1, 2));
  ScheduleEnumerator en(inst, 2);
  std::vector<Schedule> all;
  en.for_each([&](const Schedule& s) { all.push_back(s); });
  REQUIRE(static_cast<std::int64_t>(all.size()) == en.count());
  for (std::size_t i = 0; i < all.size(); ++i) {
    CHECK(en.index_of(all[i]) == static_cast<std::int64_t>(i));
    for (std::size_t k = i + 1; k < all.size(); ++k) CHECK(!(all[i] == all[k]));
  }
}

TEST_CASE("enumeration cap raises cap_exceeded_error") {
  Instance inst = make_instance(9, 5, {{1, 1, 1, 1, 1}}, {{0}}, Rational(1, 2));
  ScheduleEnumerator en(inst, 1);
  CHECK_THROWS_AS(check_enumeration_cap(en.count(), 20000), cap_exceeded_error);
}

TEST_CASE("best_response on ex1") {
  Instance inst = ex1();
  Schedule y = make_schedule({{0}, {1}});
  auto rs = best_response(inst, y);
  CHECK(rs.bestFollowerValue == Rational(11, 2));
  CHECK(rs.optimisticSchedule == make_schedule({{1}, {1}}));
  CHECK(rs.optimisticOutcome.followerProfit == Rational(11, 2));
  CHECK(rs.pessimisticOutcome.followerProfit == Rational(11, 2));
  CHECK(rs.optimisticOutcome.leaderProfit >= rs.pessimisticOutcome.leaderProfit);
}

TEST_CASE("best_response when the leader blocks everything at rho = 1") {
  // Single location considered by the only customer; the leader sits on it
  // every period, so the follower earns nothing and the first tie is the
  // all-empty schedule.
  Instance inst = make_instance(1, 2, {{3, 3}}, {{0}}, Rational(1));
  Schedule y = make_schedule({{0}, {0}});
  auto rs = best_response(inst, y);
  CHECK(rs.bestFollowerValue == Rational(0));
  CHECK(rs.optimisticSchedule == empty_schedule(inst));
}

TEST_CASE("best_response with an empty consideration set") {
  Instance inst = make_instance(2, 2, {{5, 5}}, {std::vector<int>{}}, Rational(1, 2));
  ScheduleEnumerator en(inst, 1);
  for (std::int64_t i = 0; i < en.count(); ++i)
    CHECK(best_response(inst, en.at(i)).bestFollowerValue == Rational(0));
}

TEST_CASE("follower_optimal_set on ex1 contains the best response") {
  Instance inst = ex1();
  Schedule y = make_schedule({{0}, {1}});
  auto optima = follower_optimal_set(inst, y);
  Schedule zstar = make_schedule({{1}, {1}});
  bool found = false;
  for (const auto& [z, outcome] : optima) {
    CHECK(outcome.followerProfit == Rational(11, 2));
    if (z == zstar) found = true;
  }
  CHECK(found);
}

TEST_CASE("follower_optimal_set degenerates to every schedule when nothing is capturable") {
  Instance inst = make_instance(2, 1, {{7}}, {std::vector<int>{}}, Rational(1, 2));
  auto optima = follower_optimal_set(inst, empty_schedule(inst));
  CHECK(optima.size() == 3);  // all schedules tie at zero
}

TEST_CASE("copying the leader is in the optimal set whenever copying is optimal") {
  Instance inst = ex1();
  inst.rho = Rational(0);
  ScheduleEnumerator en(inst, 1);
  for (std::int64_t i = 0; i < en.count(); ++i) {
    Schedule y = en.at(i);
    Rational copyValue = simulate_outcome(inst, y, y).followerProfit;
    auto optima = follower_optimal_set(inst, y);
    if (copyValue == optima.front().second.followerProfit) {
      bool found = false;
      for (const auto& [z, outcome] : optima)
        if (z == y) found = true;
      CHECK(found);
    }
  }
}

TEST_CASE("no follower schedule beats the best response") {
  Instance inst = ex1();
  ScheduleEnumerator en(inst, 1);
  for (std::int64_t i = 0; i < en.count(); ++i) {
    Schedule y = en.at(i);
    auto rs = best_response(inst, y);
    auto optima = follower_optimal_set(inst, y);
    CHECK(static_cast<std::int64_t>(optima.size()) == rs.optimalCount);
    for (std::int64_t k = 0; k < en.count(); ++k)
      CHECK(simulate_outcome(inst, y, en.at(k)).followerProfit <= rs.bestFollowerValue);
    // Both tie-break picks are members of the optimal set.
    bool optFound = false, pessFound = false;
    for (const auto& [z, outcome] : optima) {
      if (z == rs.optimisticSchedule) optFound = true;
      if (z == rs.pessimisticSchedule) pessFound = true;
    }
    CHECK(optFound);
    CHECK(pessFound);
  }
}

TEST_CASE("best_response is invariant under customer relabeling") {
  Instance inst = make_instance(2, 2, {{2, 2}, {3, 3}, {1, 5}}, {{0, 1}, {1}, {1, 0}},
                                Rational(1, 2));
  Instance permuted = inst;
  std::vector<int> perm = {2, 0, 1};  // new j <- old perm[j]
  for (int j = 0; j < 3; ++j) {
    permuted.demands[j] = inst.demands[perm[j]];
    permuted.rankings[j] = inst.rankings[perm[j]];
  }
  ScheduleEnumerator en(inst, 1);
  for (std::int64_t i = 0; i < en.count(); ++i) {
    auto a = best_response(inst, en.at(i));
    auto b = best_response(permuted, en.at(i));
    CHECK(a.bestFollowerValue == b.bestFollowerValue);
    CHECK(a.optimisticSchedule == b.optimisticSchedule);
    CHECK(a.pessimisticSchedule == b.pessimisticSchedule);
    CHECK(a.optimalCount == b.optimalCount);
  }
}
