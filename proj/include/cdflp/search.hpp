#pragma once

#include <algorithm>
#include <functional>
#include <optional>
#include <vector>

#include "cdflp/cuts.hpp"
#include "cdflp/enumerate.hpp"
#include "cdflp/simulate.hpp"

namespace cdflp {

struct solve_aborted_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// An integer-feasible master point: both schedules with their exact
// simulated profits and the point's position in the descending stream.
struct MasterCandidate {
  Schedule y;
  Schedule z;
  Rational leaderValue;
  Rational followerValue;
  std::int64_t pairRank = 0;
};

enum class AcceptorDecision { Accept, Reject };

struct SearchLimits {
  std::int64_t scheduleCap = kDefaultScheduleCap;  // per player
  std::int64_t pairCap = 4000000;                  // materialized pair scores
  std::int64_t candidateBudget = 0;                // 0 = unlimited acceptor calls
};

struct SearchOutcome {
  std::optional<MasterCandidate> accepted;
  std::int64_t candidatesExamined = 0;  // survivors handed to the acceptor
  std::int64_t pairsTotal = 0;
};

// Bundled master: scores every budget-feasible (y, z) pair exactly, then
// walks them in descending leader profit (ties by schedule-lexicographic
// pair order). Pairs violating an installed cut are skipped; survivors go to
// the acceptor, which may install further cuts into `cuts` before deciding.
// The first accepted candidate therefore maximizes the leader profit over
// all pairs admitted by the cuts in force when they were visited.
template <typename Acceptor>
SearchOutcome search_solve(const Instance& inst, std::vector<GeneratedCut>& cuts,
                           Acceptor&& acceptor, const SearchLimits& limits = {}) {
  ScheduleEnumerator leaders(inst, inst.leaderBudget);
  ScheduleEnumerator followers(inst, inst.followerBudget);
  check_enumeration_cap(leaders.count(), limits.scheduleCap);
  check_enumeration_cap(followers.count(), limits.scheduleCap);
  if (leaders.count() > limits.pairCap / followers.count())
    throw cap_exceeded_error("search_solve: pair space exceeds " +
                             std::to_string(limits.pairCap));

  struct Scored {
    Rational leaderValue;
    Rational followerValue;
    std::int64_t yIndex;
    std::int64_t zIndex;
  };
  std::vector<Scored> scored;
  scored.reserve(static_cast<std::size_t>(leaders.count() * followers.count()));
  for (std::int64_t yi = 0; yi < leaders.count(); ++yi) {
    Schedule y = leaders.at(yi);
    for (std::int64_t zi = 0; zi < followers.count(); ++zi) {
      ProfitPair p = profit_pair(inst, y, followers.at(zi));
      scored.push_back({p.leader, p.follower, yi, zi});
    }
  }
  std::stable_sort(scored.begin(), scored.end(), [](const Scored& a, const Scored& b) {
    if (a.leaderValue != b.leaderValue) return b.leaderValue < a.leaderValue;
    if (a.yIndex != b.yIndex) return a.yIndex < b.yIndex;
    return a.zIndex < b.zIndex;
  });

  SearchOutcome outcome;
  outcome.pairsTotal = static_cast<std::int64_t>(scored.size());
  std::vector<bool> visited(scored.size(), false);

  for (std::size_t rank = 0; rank < scored.size(); ++rank) {
    const Scored& s = scored[rank];
    MasterCandidate cand{leaders.at(s.yIndex), followers.at(s.zIndex), s.leaderValue,
                         s.followerValue, static_cast<std::int64_t>(rank)};
    bool cutOff = false;
    for (const auto& cut : cuts)
      if (!cut_admits(cut, cand.y, cand.z, cand.followerValue)) {
        cutOff = true;
        break;
      }
    if (cutOff) continue;

    std::size_t pairId =
        static_cast<std::size_t>(s.yIndex) * static_cast<std::size_t>(followers.count()) +
        static_cast<std::size_t>(s.zIndex);
    if (visited[pairId]) throw std::logic_error("search_solve: candidate revisited");
    visited[pairId] = true;

    ++outcome.candidatesExamined;
    if (limits.candidateBudget > 0 && outcome.candidatesExamined > limits.candidateBudget)
      throw solve_aborted_error("search_solve: candidate budget exhausted");
    if (acceptor(cand) == AcceptorDecision::Accept) {
      outcome.accepted = std::move(cand);
      return outcome;
    }
  }
  return outcome;  // space exhausted, nothing accepted
}

}  // namespace cdflp
