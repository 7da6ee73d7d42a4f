#pragma once

#include <vector>

#include "cdflp/instance.hpp"

namespace cdflp::testing {

// Two locations, two customers, two periods, rho = 1/2. Customer a considers
// both locations (0 preferred), customer b only location 1.
inline Instance ex1() {
  Instance inst;
  inst.name = "ex1";
  inst.locationCount = 2;
  inst.customerCount = 2;
  inst.periodCount = 2;
  inst.rewards = {1, 1};
  inst.demands = {{2, 2}, {3, 3}};
  inst.rankings = {{0, 1}, {1}};
  inst.rho = Rational(1, 2);
  return inst;
}

inline Instance make_instance(int locations, int periods,
                              std::vector<std::vector<std::int64_t>> demands,
                              std::vector<std::vector<int>> rankings, Rational rho,
                              std::vector<std::int64_t> rewards = {}) {
  Instance inst;
  inst.locationCount = locations;
  inst.customerCount = static_cast<int>(demands.size());
  inst.periodCount = periods;
  inst.demands = std::move(demands);
  inst.rankings = std::move(rankings);
  inst.rho = rho;
  inst.rewards = rewards.empty() ? std::vector<std::int64_t>(locations, 1) : std::move(rewards);
  return inst;
}

inline Schedule make_schedule(std::vector<std::vector<int>> open) {
  Schedule s;
  s.open = std::move(open);
  for (auto& p : s.open) std::sort(p.begin(), p.end());
  return s;
}

}  // namespace cdflp::testing
