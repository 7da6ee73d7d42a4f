#pragma once

#include <functional>
#include <optional>

#include "cdflp/reaction.hpp"
#include "cdflp/solver.hpp"

namespace cdflp {

// A behavioural stance toward the follower: tie-breaking plus the revenue
// splitting factor believed to hold.
struct ScenarioAssumption {
  SolveVariant behaviour = SolveVariant::Optimistic;  // optimistic or pessimistic
  Rational rho;
};

// Percentage of the optimal profit lost by planning with the heuristic.
// Undefined (not applicable) when the optimal profit is zero.
inline std::optional<Rational> opportunity_gap(const Rational& optimal,
                                               const Rational& heuristic) {
  if (heuristic < Rational(0) || heuristic > optimal)
    throw std::invalid_argument("opportunity_gap: heuristic value out of [0, optimal]");
  if (optimal == Rational(0)) return std::nullopt;
  return Rational(100) * (optimal - heuristic) / optimal;
}

// Joint profit under cooperation relative to the competitive total.
inline std::optional<Rational> price_of_competition(const Rational& cooperativeJoint,
                                                    const Rational& competitiveLeader,
                                                    const Rational& competitiveFollower) {
  Rational total = competitiveLeader + competitiveFollower;
  if (total == Rational(0)) return std::nullopt;
  return cooperativeJoint / total;
}

using BilevelSolver = std::function<BilevelSolution(const Instance&, SolveVariant)>;

inline BilevelSolver oracle_solver(std::int64_t cap = kDefaultScheduleCap) {
  return [cap](const Instance& inst, SolveVariant variant) {
    return brute_force_oracle(inst, variant, cap);
  };
}

// Revenue retained when planning under one assumption but facing another
// ground truth, as a percentage of what planning under the truth would earn.
// The assumption shapes only the leader schedule; the follower reacts, and
// the denominator solves, under the ground-truth behaviour and rho.
inline std::optional<Rational> resilience_ratio(const Instance& inst,
                                                const ScenarioAssumption& assumption,
                                                const ScenarioAssumption& truth,
                                                const BilevelSolver& solver,
                                                std::int64_t cap = kDefaultScheduleCap) {
  Instance assumed = inst;
  assumed.rho = assumption.rho;
  Schedule plannedLeader = solver(assumed, assumption.behaviour).yStar;

  Instance actual = inst;
  actual.rho = truth.rho;
  ReactionSummary rs = best_response(actual, plannedLeader, cap);
  const Rational realized = truth.behaviour == SolveVariant::Optimistic
                                ? rs.optimisticOutcome.leaderProfit
                                : rs.pessimisticOutcome.leaderProfit;

  const Rational attainable = solver(actual, truth.behaviour).leaderProfit;
  if (attainable == Rational(0)) return std::nullopt;
  return Rational(100) * realized / attainable;
}

struct ServiceQuality {
  Rational avgCaptures;                       // events per customer
  std::optional<Rational> demandCapturedPct;  // not applicable with zero total demand
};

inline ServiceQuality service_quality(const JointOutcome& outcome, const Instance& inst) {
  std::int64_t captured = 0;
  for (const auto& ev : outcome.events) captured += ev.capturedDemand;
  std::int64_t total = 0;
  for (int j = 0; j < inst.customerCount; ++j)
    for (int t = 1; t <= inst.periodCount; ++t) total += inst.demand(j, t);

  ServiceQuality q;
  q.avgCaptures = Rational(static_cast<std::int64_t>(outcome.events.size())) /
                  Rational(inst.customerCount);
  if (total > 0) q.demandCapturedPct = Rational(100) * Rational(captured) / Rational(total);
  return q;
}

// Report row: one (instance, metric, exact value, decimal rendering) line.
inline std::string metrics_csv_header() { return "instance,metric,num,den,decimal"; }

inline std::string metrics_csv_row(const std::string& instance, const std::string& metric,
                                   const std::optional<Rational>& value) {
  if (!value) return instance + "," + metric + ",,,n/a";
  return instance + "," + metric + "," + std::to_string(value->num()) + "," +
         std::to_string(value->den()) + "," + std::to_string(value->to_double());
}

}  // namespace cdflp
