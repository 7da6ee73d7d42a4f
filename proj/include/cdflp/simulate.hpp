#pragma once

#include <optional>
#include <stdexcept>
#include <vector>

#include "cdflp/instance.hpp"

namespace cdflp {

enum class CaptureOwner { LeaderOnly, FollowerOnly, Shared };

// One customer capture: at `period`, customer `customer` patronizes
// `location`, collecting the demand spawned since its previous capture
// (periods windowStart+1 .. period). windowStart == 0 means never captured
// before.
struct CaptureEvent {
  int customer = 0;
  int period = 0;
  int location = 0;
  CaptureOwner owner = CaptureOwner::LeaderOnly;
  int windowStart = 0;
  std::int64_t capturedDemand = 0;
  Rational leaderShare;
  Rational followerShare;
};

struct JointOutcome {
  std::vector<CaptureEvent> events;
  Rational leaderProfit;
  Rational followerProfit;
  std::vector<std::int64_t> unmetDemandAtEnd;  // per customer

  friend bool operator==(const JointOutcome& a, const JointOutcome& b) {
    if (a.leaderProfit != b.leaderProfit || a.followerProfit != b.followerProfit) return false;
    if (a.unmetDemandAtEnd != b.unmetDemandAtEnd) return false;
    if (a.events.size() != b.events.size()) return false;
    for (std::size_t k = 0; k < a.events.size(); ++k) {
      const auto& x = a.events[k];
      const auto& y = b.events[k];
      if (x.customer != y.customer || x.period != y.period || x.location != y.location ||
          x.owner != y.owner || x.windowStart != y.windowStart ||
          x.capturedDemand != y.capturedDemand || x.leaderShare != y.leaderShare ||
          x.followerShare != y.followerShare)
        return false;
    }
    return true;
  }
};

// Demand of customer j spawned in periods windowStart+1 .. period.
inline std::int64_t accumulated_demand(const Instance& inst, int customer, int windowStart,
                                       int period) {
  if (customer < 0 || customer >= inst.customerCount)
    throw std::out_of_range("accumulated_demand: customer out of range");
  if (windowStart < 0 || period > inst.periodCount || windowStart >= period)
    throw std::out_of_range("accumulated_demand: bad window");
  std::int64_t total = 0;
  for (int s = windowStart + 1; s <= period; ++s) total += inst.demand(customer, s);
  return total;
}

// First location of customer j's ranking present in `open` (which must be
// sorted). Strict rankings make the answer unique; nullopt when the customer
// considers none of the open locations.
inline std::optional<int> preferred_open_location(const Instance& inst, int customer,
                                                  const std::vector<int>& open) {
  for (int loc : inst.rankings[customer])
    if (std::binary_search(open.begin(), open.end(), loc)) return loc;
  return std::nullopt;
}

// Plays the fixed schedules forward period by period. Each period, every
// customer patronizes the most preferred open location across both players
// (if any), collecting all demand spawned since its last capture. Co-located
// captures split the contribution rho / (1 - rho).
inline JointOutcome simulate_outcome(const Instance& inst, const Schedule& y, const Schedule& z) {
  if (!y.budget_feasible(inst.leaderBudget))
    throw std::invalid_argument("simulate_outcome: leader schedule exceeds budget");
  if (!z.budget_feasible(inst.followerBudget))
    throw std::invalid_argument("simulate_outcome: follower schedule exceeds budget");
  if (y.periods() != inst.periodCount || z.periods() != inst.periodCount)
    throw std::invalid_argument("simulate_outcome: schedule horizon mismatch");

  JointOutcome out;
  std::vector<int> lastCapture(inst.customerCount, 0);

  for (int t = 1; t <= inst.periodCount; ++t) {
    for (int j = 0; j < inst.customerCount; ++j) {
      auto iL = preferred_open_location(inst, j, y.at(t));
      auto iF = preferred_open_location(inst, j, z.at(t));
      std::optional<int> chosen;
      if (iL && iF)
        chosen = inst.rank_of(j, *iL) <= inst.rank_of(j, *iF) ? *iL : *iF;
      else if (iL)
        chosen = *iL;
      else if (iF)
        chosen = *iF;
      if (!chosen) continue;

      CaptureEvent ev;
      ev.customer = j;
      ev.period = t;
      ev.location = *chosen;
      ev.windowStart = lastCapture[j];
      ev.capturedDemand = accumulated_demand(inst, j, ev.windowStart, t);
      const bool inY = y.opens(*chosen, t);
      const bool inZ = z.opens(*chosen, t);
      const Rational value = Rational(inst.rewards[*chosen]) * Rational(ev.capturedDemand);
      if (inY && inZ) {
        ev.owner = CaptureOwner::Shared;
        ev.leaderShare = inst.rho * value;
        ev.followerShare = (Rational(1) - inst.rho) * value;
      } else if (inY) {
        ev.owner = CaptureOwner::LeaderOnly;
        ev.leaderShare = value;
      } else {
        ev.owner = CaptureOwner::FollowerOnly;
        ev.followerShare = value;
      }
      out.leaderProfit += ev.leaderShare;
      out.followerProfit += ev.followerShare;
      out.events.push_back(ev);
      lastCapture[j] = t;
    }
  }

  out.unmetDemandAtEnd.resize(inst.customerCount, 0);
  for (int j = 0; j < inst.customerCount; ++j)
    if (lastCapture[j] < inst.periodCount)
      out.unmetDemandAtEnd[j] = accumulated_demand(inst, j, lastCapture[j], inst.periodCount);

  return out;
}

struct ProfitPair {
  Rational leader;
  Rational follower;
};

// Profits only, on integer accumulators: exact capture values split into
// leader-only, follower-only, and shared pots, with the rho split applied
// once at the end. Same walk as simulate_outcome without the event records;
// the two paths are cross-checked in the test suite.
inline ProfitPair profit_pair(const Instance& inst, const Schedule& y, const Schedule& z) {
  if (!y.budget_feasible(inst.leaderBudget))
    throw std::invalid_argument("profit_pair: leader schedule exceeds budget");
  if (!z.budget_feasible(inst.followerBudget))
    throw std::invalid_argument("profit_pair: follower schedule exceeds budget");
  if (y.periods() != inst.periodCount || z.periods() != inst.periodCount)
    throw std::invalid_argument("profit_pair: schedule horizon mismatch");

  std::int64_t leaderOnly = 0, followerOnly = 0, shared = 0;
  auto checkedAdd = [](std::int64_t& acc, std::int64_t v) {
    if (__builtin_add_overflow(acc, v, &acc)) throw std::overflow_error("profit_pair: overflow");
  };
  std::vector<std::int64_t> pending(inst.customerCount, 0);
  for (int t = 1; t <= inst.periodCount; ++t) {
    for (int j = 0; j < inst.customerCount; ++j) {
      checkedAdd(pending[j], inst.demand(j, t));
      auto iL = preferred_open_location(inst, j, y.at(t));
      auto iF = preferred_open_location(inst, j, z.at(t));
      std::optional<int> chosen;
      if (iL && iF)
        chosen = inst.rank_of(j, *iL) <= inst.rank_of(j, *iF) ? *iL : *iF;
      else if (iL)
        chosen = *iL;
      else if (iF)
        chosen = *iF;
      if (!chosen) continue;
      std::int64_t value = 0;
      if (__builtin_mul_overflow(inst.rewards[*chosen], pending[j], &value))
        throw std::overflow_error("profit_pair: overflow");
      pending[j] = 0;
      const bool inY = y.opens(*chosen, t);
      const bool inZ = z.opens(*chosen, t);
      if (inY && inZ)
        checkedAdd(shared, value);
      else if (inY)
        checkedAdd(leaderOnly, value);
      else
        checkedAdd(followerOnly, value);
    }
  }
  ProfitPair p;
  p.leader = Rational(leaderOnly) + inst.rho * Rational(shared);
  p.follower = Rational(followerOnly) + (Rational(1) - inst.rho) * Rational(shared);
  return p;
}

inline Rational leader_profit(const Instance& inst, const Schedule& y, const Schedule& z) {
  return profit_pair(inst, y, z).leader;
}

inline Rational follower_profit(const Instance& inst, const Schedule& y, const Schedule& z) {
  return profit_pair(inst, y, z).follower;
}

}  // namespace cdflp
