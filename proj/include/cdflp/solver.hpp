#pragma once

#include <cmath>
#include <optional>
#include <string>
#include <vector>

#include "cdflp/backend.hpp"
#include "cdflp/reaction.hpp"
#include "cdflp/search.hpp"

#include <json.hpp>

namespace cdflp {

enum class SolveVariant { Optimistic, Pessimistic, Cooperative, MonopolisticHeuristic };
enum class CutFamily { Tailored, Tightened };
enum class MasterMode { Search, Model };

struct SolveStats {
  std::int64_t tailoredCuts = 0;
  std::int64_t tightenedCuts = 0;
  std::int64_t noGoodCuts = 0;
  std::int64_t candidatesExamined = 0;
  std::int64_t followerSolves = 0;
};

struct BilevelSolution {
  SolveVariant variant = SolveVariant::Optimistic;
  Schedule yStar;
  Schedule zStar;
  Rational leaderProfit;
  Rational followerProfit;
  SolveStats stats;
  bool proofOfOptimality = false;
};

// A generated cut together with the integer-feasible pair it was produced
// against; kept for trace dumps and validity audits.
struct CutTraceEntry {
  GeneratedCut cut;
  Schedule rejectedLeader;
  Schedule rejectedFollower;
};

struct SolverConfig {
  std::int64_t scheduleCap = kDefaultScheduleCap;
  std::int64_t candidateBudget = 0;            // 0 = unlimited, else abort past it
  bool bothCutFamilies = false;                // extension: emit tailored and tightened together
  std::vector<CutTraceEntry>* cutTrace = nullptr;
};

namespace detail {

inline SearchLimits to_search_limits(const SolverConfig& config) {
  SearchLimits limits;
  limits.scheduleCap = config.scheduleCap;
  limits.candidateBudget = config.candidateBudget;
  return limits;
}

// Reaction chosen to seed value-function cuts: the follower-optimal schedule
// most favourable to the leader, residual ties by enumeration order.
inline Schedule optimistic_choice(const std::vector<std::pair<Schedule, JointOutcome>>& optima) {
  std::size_t best = 0;
  for (std::size_t k = 1; k < optima.size(); ++k)
    if (optima[k].second.leaderProfit > optima[best].second.leaderProfit) best = k;
  return optima[best].first;
}

inline Rational min_leader_profit(const std::vector<std::pair<Schedule, JointOutcome>>& optima) {
  Rational low = optima.front().second.leaderProfit;
  for (const auto& [z, outcome] : optima)
    if (outcome.leaderProfit < low) low = outcome.leaderProfit;
  return low;
}

struct CutEmitter {
  const Instance& inst;
  CutFamily family;
  const SolverConfig& config;
  SolveStats& stats;
  std::vector<GeneratedCut>* searchCuts = nullptr;   // search mode sink
  std::vector<LinearBlock>* modelBlocks = nullptr;   // model mode sink
  std::vector<Schedule> tightenedSources;            // z* per tightened cut emitted

  void emit_value_function(const Schedule& yPrime, const Schedule& zStar,
                           const Schedule& zPrime) {
    if (family == CutFamily::Tailored || config.bothCutFamilies)
      push(make_tailored_cut(inst, yPrime, zStar), yPrime, zPrime);
    if (family == CutFamily::Tightened || config.bothCutFamilies)
      push(make_tightened_cut(inst, zStar, yPrime), yPrime, zPrime);
  }

  void emit_no_good(const Schedule& yPrime, const Schedule& zPrime) {
    push(make_no_good_cut(inst, yPrime, zPrime), yPrime, zPrime);
  }

 private:
  void push(GeneratedCut cut, const Schedule& yPrime, const Schedule& zPrime) {
    switch (cut.kind) {
      case CutKind::Tailored: ++stats.tailoredCuts; break;
      case CutKind::Tightened:
        ++stats.tightenedCuts;
        tightenedSources.push_back(cut.sourceFollower);
        break;
      case CutKind::NoGood: ++stats.noGoodCuts; break;
    }
    if (config.cutTrace) config.cutTrace->push_back({cut, yPrime, zPrime});
    if (modelBlocks) {
      std::string tag = "_c" + std::to_string(stats.tailoredCuts + stats.tightenedCuts +
                                              stats.noGoodCuts);
      modelBlocks->push_back(materialize(cut, tag));
    }
    if (searchCuts) searchCuts->push_back(std::move(cut));
  }
};

// Runs the callback loop over a master. The acceptor implements the
// per-incumbent test of the optimistic callback, or its pessimistic
// adaptation when `pessimistic` is set.
template <typename EmitBlocks>
inline std::optional<MasterCandidate> run_callback_master(
    const Instance& inst, bool pessimistic, CutEmitter& emitter, SolveStats& stats,
    const SolverConfig& config, EmitBlocks&& runMaster) {
  auto decide = [&](const MasterCandidate& cand) -> AcceptorDecision {
    auto optima = follower_optimal_set(inst, cand.y, config.scheduleCap);
    ++stats.followerSolves;
    const Rational bestValue = optima.front().second.followerProfit;
    if (cand.followerValue != bestValue) {
      emitter.emit_value_function(cand.y, optimistic_choice(optima), cand.z);
      return AcceptorDecision::Reject;
    }
    if (pessimistic && cand.leaderValue != min_leader_profit(optima)) {
      emitter.emit_no_good(cand.y, cand.z);
      return AcceptorDecision::Reject;
    }
    return AcceptorDecision::Accept;
  };
  return runMaster(decide);
}

}  // namespace detail

inline BilevelSolution solve_bilevel(const Instance& inst, SolveVariant variant,
                                     CutFamily family, MasterMode mode,
                                     const SolverConfig& config = {}) {
  if (variant != SolveVariant::Optimistic && variant != SolveVariant::Pessimistic)
    throw std::invalid_argument("solve_bilevel: variant must be optimistic or pessimistic");
  const bool pessimistic = variant == SolveVariant::Pessimistic;

  BilevelSolution solution;
  solution.variant = variant;
  SolveStats& stats = solution.stats;

  detail::CutEmitter emitter{inst, family, config, stats, nullptr, nullptr, {}};
  std::optional<MasterCandidate> accepted;

  if (mode == MasterMode::Search) {
    std::vector<GeneratedCut> cuts;
    emitter.searchCuts = &cuts;
    accepted = detail::run_callback_master(
        inst, pessimistic, emitter, stats, config, [&](auto&& decide) {
          SearchOutcome outcome =
              search_solve(inst, cuts, decide, detail::to_search_limits(config));
          stats.candidatesExamined = outcome.candidatesExamined;
          return outcome.accepted;
        });
  } else {
    std::vector<LinearBlock> pendingBlocks;
    emitter.modelBlocks = &pendingBlocks;
    AbstractModel model = build_high_point_model(inst);
    accepted = detail::run_callback_master(
        inst, pessimistic, emitter, stats, config, [&](auto&& decide) {
          LazyHook hook = [&](const MasterCandidate& cand,
                              double backendFollowerValue) -> LazyHookResult {
            Rational exact = profit_pair(inst, cand.y, cand.z).follower;
            if (std::abs(backendFollowerValue - exact.to_double()) > kBackendTolerance)
              throw tolerance_violation_error(
                  "model incumbent follower value disagrees with exact simulation");
            ++stats.candidatesExamined;
            pendingBlocks.clear();
            if (decide(cand) == AcceptorDecision::Accept) return {true, {}};
            return {false, std::move(pendingBlocks)};
          };
          return std::optional<MasterCandidate>(
              model_solve(inst, model, hook, detail::to_search_limits(config)));
        });
  }

  if (!accepted)
    throw std::logic_error("solve_bilevel: master exhausted without a bilevel feasible point");

  solution.yStar = accepted->y;
  solution.zStar = accepted->z;
  solution.leaderProfit = accepted->leaderValue;
  solution.followerProfit = accepted->followerValue;
  solution.proofOfOptimality = true;
  return solution;
}

inline BilevelSolution solve_optimistic(const Instance& inst, CutFamily family, MasterMode mode,
                                        const SolverConfig& config = {}) {
  return solve_bilevel(inst, SolveVariant::Optimistic, family, mode, config);
}

inline BilevelSolution solve_pessimistic(const Instance& inst, CutFamily family, MasterMode mode,
                                         const SolverConfig& config = {}) {
  return solve_bilevel(inst, SolveVariant::Pessimistic, family, mode, config);
}

// Ground-truth reference: evaluates the follower reaction for every leader
// schedule and keeps the best leader value under the requested tie-breaking.
// Leader-side ties resolve to the lexicographically smallest schedule.
inline BilevelSolution brute_force_oracle(const Instance& inst, SolveVariant variant,
                                          std::int64_t cap = kDefaultScheduleCap) {
  if (variant != SolveVariant::Optimistic && variant != SolveVariant::Pessimistic)
    throw std::invalid_argument("brute_force_oracle: variant must be optimistic or pessimistic");
  ScheduleEnumerator leaders(inst, inst.leaderBudget);
  ScheduleEnumerator followers(inst, inst.followerBudget);
  check_enumeration_cap(leaders.count(), cap);
  check_enumeration_cap(followers.count(), cap);

  BilevelSolution best;
  best.variant = variant;
  bool first = true;
  for (std::int64_t yi = 0; yi < leaders.count(); ++yi) {
    Schedule y = leaders.at(yi);
    ReactionSummary rs = best_response(inst, y, cap);
    ++best.stats.followerSolves;
    const JointOutcome& outcome =
        variant == SolveVariant::Optimistic ? rs.optimisticOutcome : rs.pessimisticOutcome;
    if (first || outcome.leaderProfit > best.leaderProfit) {
      best.yStar = y;
      best.zStar = variant == SolveVariant::Optimistic ? rs.optimisticSchedule
                                                       : rs.pessimisticSchedule;
      best.leaderProfit = outcome.leaderProfit;
      best.followerProfit = outcome.followerProfit;
      first = false;
    }
  }
  best.stats.candidatesExamined = leaders.count();
  best.proofOfOptimality = true;
  return best;
}

// Joint-profit maximum over all feasible schedule pairs; ties resolve to the
// lexicographically smallest (y, z).
inline BilevelSolution solve_cooperative(const Instance& inst,
                                         std::int64_t cap = kDefaultScheduleCap) {
  ScheduleEnumerator leaders(inst, inst.leaderBudget);
  ScheduleEnumerator followers(inst, inst.followerBudget);
  check_enumeration_cap(leaders.count(), cap);
  check_enumeration_cap(followers.count(), cap);

  BilevelSolution best;
  best.variant = SolveVariant::Cooperative;
  Rational bestJoint;
  bool first = true;
  for (std::int64_t yi = 0; yi < leaders.count(); ++yi) {
    Schedule y = leaders.at(yi);
    for (std::int64_t zi = 0; zi < followers.count(); ++zi) {
      Schedule z = followers.at(zi);
      ProfitPair p = profit_pair(inst, y, z);
      Rational joint = p.leader + p.follower;
      ++best.stats.candidatesExamined;
      if (first || joint > bestJoint) {
        bestJoint = joint;
        best.yStar = y;
        best.zStar = z;
        best.leaderProfit = p.leader;
        best.followerProfit = p.follower;
        first = false;
      }
    }
  }
  best.proofOfOptimality = true;
  return best;
}

// Plans as if the follower did not exist, then suffers the reaction under
// the given ground-truth tie-breaking.
inline BilevelSolution monopolistic_heuristic(const Instance& inst, SolveVariant truthVariant,
                                              std::int64_t cap = kDefaultScheduleCap) {
  if (truthVariant != SolveVariant::Optimistic && truthVariant != SolveVariant::Pessimistic)
    throw std::invalid_argument("monopolistic_heuristic: truth must be optimistic or pessimistic");
  ScheduleEnumerator leaders(inst, inst.leaderBudget);
  check_enumeration_cap(leaders.count(), cap);

  Schedule bestY = empty_schedule(inst);
  Rational bestValue;
  bool first = true;
  const Schedule nobody = empty_schedule(inst);
  for (std::int64_t yi = 0; yi < leaders.count(); ++yi) {
    Schedule y = leaders.at(yi);
    Rational value = profit_pair(inst, y, nobody).leader;
    if (first || value > bestValue) {
      bestValue = value;
      bestY = y;
      first = false;
    }
  }

  ReactionSummary rs = best_response(inst, bestY, cap);
  const JointOutcome& outcome =
      truthVariant == SolveVariant::Optimistic ? rs.optimisticOutcome : rs.pessimisticOutcome;

  BilevelSolution solution;
  solution.variant = SolveVariant::MonopolisticHeuristic;
  solution.yStar = bestY;
  solution.zStar = truthVariant == SolveVariant::Optimistic ? rs.optimisticSchedule
                                                            : rs.pessimisticSchedule;
  solution.leaderProfit = outcome.leaderProfit;
  solution.followerProfit = outcome.followerProfit;
  solution.stats.candidatesExamined = leaders.count();
  solution.stats.followerSolves = 1;
  solution.proofOfOptimality = false;
  return solution;
}

// ---- JSON ----

inline std::string variant_name(SolveVariant v) {
  switch (v) {
    case SolveVariant::Optimistic: return "optimistic";
    case SolveVariant::Pessimistic: return "pessimistic";
    case SolveVariant::Cooperative: return "cooperative";
    case SolveVariant::MonopolisticHeuristic: return "monopolistic-heuristic";
  }
  return "?";
}

inline nlohmann::json solution_to_json(const BilevelSolution& s) {
  nlohmann::json j;
  j["variant"] = variant_name(s.variant);
  j["y"] = schedule_to_json(s.yStar);
  j["z"] = schedule_to_json(s.zStar);
  j["leaderProfit"] = rational_to_json(s.leaderProfit);
  j["followerProfit"] = rational_to_json(s.followerProfit);
  j["stats"] = {{"tailoredCuts", s.stats.tailoredCuts},
                {"tightenedCuts", s.stats.tightenedCuts},
                {"noGoodCuts", s.stats.noGoodCuts},
                {"candidatesExamined", s.stats.candidatesExamined},
                {"followerSolves", s.stats.followerSolves}};
  j["proofOfOptimality"] = s.proofOfOptimality;
  return j;
}

}  // namespace cdflp
