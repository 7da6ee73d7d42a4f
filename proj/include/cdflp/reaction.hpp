#pragma once

#include <utility>
#include <vector>

#include "cdflp/enumerate.hpp"
#include "cdflp/simulate.hpp"

namespace cdflp {

// The follower's best-response picture against a fixed leader schedule:
// the optimal value, the reaction most favourable to the leader among the
// optima, the reaction least favourable, and how many optima exist.
// Residual ties (equal follower AND leader profit) break by enumeration
// order, first wins, so every run is deterministic.
struct ReactionSummary {
  Rational bestFollowerValue;
  Schedule optimisticSchedule;
  JointOutcome optimisticOutcome;
  Schedule pessimisticSchedule;
  JointOutcome pessimisticOutcome;
  std::int64_t optimalCount = 0;
};

// Exhaustively evaluates every budget-feasible follower schedule. Exact
// rational comparison keeps the optimum and both tie-breaks unambiguous.
inline ReactionSummary best_response(const Instance& inst, const Schedule& y,
                                     std::int64_t cap = kDefaultScheduleCap) {
  ScheduleEnumerator en(inst, inst.followerBudget);
  check_enumeration_cap(en.count(), cap);

  ReactionSummary best;
  std::int64_t optIndex = 0, pessIndex = 0;
  Rational optLeader, pessLeader;
  for (std::int64_t i = 0; i < en.count(); ++i) {
    ProfitPair p = profit_pair(inst, y, en.at(i));
    if (i == 0 || p.follower > best.bestFollowerValue) {
      best.bestFollowerValue = p.follower;
      best.optimalCount = 1;
      optIndex = pessIndex = i;
      optLeader = pessLeader = p.leader;
      continue;
    }
    if (p.follower == best.bestFollowerValue) {
      ++best.optimalCount;
      if (p.leader > optLeader) {
        optLeader = p.leader;
        optIndex = i;
      }
      if (p.leader < pessLeader) {
        pessLeader = p.leader;
        pessIndex = i;
      }
    }
  }
  best.optimisticSchedule = en.at(optIndex);
  best.optimisticOutcome = simulate_outcome(inst, y, best.optimisticSchedule);
  best.pessimisticSchedule = en.at(pessIndex);
  best.pessimisticOutcome = simulate_outcome(inst, y, best.pessimisticSchedule);
  return best;
}

// Every follower schedule attaining the optimal follower profit, in
// enumeration order, with its outcome.
inline std::vector<std::pair<Schedule, JointOutcome>> follower_optimal_set(
    const Instance& inst, const Schedule& y, std::int64_t cap = kDefaultScheduleCap) {
  ScheduleEnumerator en(inst, inst.followerBudget);
  check_enumeration_cap(en.count(), cap);

  Rational best;
  for (std::int64_t i = 0; i < en.count(); ++i) {
    Rational value = profit_pair(inst, y, en.at(i)).follower;
    if (i == 0 || value > best) best = value;
  }
  std::vector<std::pair<Schedule, JointOutcome>> optima;
  for (std::int64_t i = 0; i < en.count(); ++i) {
    Schedule z = en.at(i);
    JointOutcome outcome = simulate_outcome(inst, y, z);
    if (outcome.followerProfit == best) optima.emplace_back(std::move(z), std::move(outcome));
  }
  return optima;
}

}  // namespace cdflp
