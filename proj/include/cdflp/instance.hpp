#pragma once

#include <algorithm>
#include <cstdint>
#include <set>
#include <string>
#include <vector>

#include "cdflp/rational.hpp"

#include <json.hpp>

namespace cdflp {

// A competitive dynamic facility location instance under cumulative demand.
// Locations and customers are 0-based ids; periods run 1..periodCount.
// rankings[j] lists the locations customer j is willing to patronize, most
// preferred first; locations absent from the list are worse than no service.
struct Instance {
  int locationCount = 0;
  int customerCount = 0;
  int periodCount = 0;
  std::vector<std::int64_t> rewards;                // per location, > 0
  std::vector<std::vector<std::int64_t>> demands;   // [customer][period-1], >= 0
  std::vector<std::vector<int>> rankings;           // [customer] -> consideration set
  Rational rho;                                     // leader's share on co-location
  int leaderBudget = 1;                             // facilities per period
  int followerBudget = 1;
  std::string name;
  std::uint64_t seed = 0;

  // Position of location i in customer j's ranking, -1 if not considered.
  int rank_of(int customer, int location) const {
    const auto& pref = rankings[customer];
    for (int r = 0; r < static_cast<int>(pref.size()); ++r)
      if (pref[r] == location) return r;
    return -1;
  }

  bool considers(int customer, int location) const { return rank_of(customer, location) >= 0; }

  std::int64_t demand(int customer, int period) const { return demands[customer][period - 1]; }
};

// One player's open locations per period. open[t-1] is the sorted set of
// location ids held during period t; it may be empty.
struct Schedule {
  std::vector<std::vector<int>> open;

  explicit Schedule(int periods = 0) : open(periods) {}

  const std::vector<int>& at(int period) const { return open[period - 1]; }
  std::vector<int>& at(int period) { return open[period - 1]; }
  int periods() const { return static_cast<int>(open.size()); }

  bool opens(int location, int period) const {
    const auto& s = open[period - 1];
    return std::binary_search(s.begin(), s.end(), location);
  }

  bool budget_feasible(int budget) const {
    for (const auto& s : open)
      if (static_cast<int>(s.size()) > budget) return false;
    return true;
  }

  friend bool operator==(const Schedule& a, const Schedule& b) { return a.open == b.open; }
  friend bool operator!=(const Schedule& a, const Schedule& b) { return !(a == b); }
};

inline Schedule empty_schedule(const Instance& inst) { return Schedule(inst.periodCount); }

struct ValidationError {
  std::string message;
};

// Checks every structural invariant and returns one entry per violation,
// naming the offending customer/location index. Empty result means valid.
inline std::vector<ValidationError> validate_instance(const Instance& inst) {
  std::vector<ValidationError> errors;
  auto fail = [&](std::string msg) { errors.push_back({std::move(msg)}); };

  if (inst.locationCount <= 0) fail("locationCount must be positive");
  if (inst.customerCount <= 0) fail("customerCount must be positive");
  if (inst.periodCount <= 0) fail("periodCount must be positive");
  if (inst.leaderBudget <= 0) fail("leaderBudget must be positive");
  if (inst.followerBudget <= 0) fail("followerBudget must be positive");

  if (static_cast<int>(inst.rewards.size()) != inst.locationCount)
    fail("rewards has " + std::to_string(inst.rewards.size()) + " entries, expected " +
         std::to_string(inst.locationCount));
  for (std::size_t i = 0; i < inst.rewards.size(); ++i)
    if (inst.rewards[i] <= 0)
      fail("location " + std::to_string(i) + ": reward must be strictly positive");

  if (static_cast<int>(inst.demands.size()) != inst.customerCount)
    fail("demands has " + std::to_string(inst.demands.size()) + " rows, expected " +
         std::to_string(inst.customerCount));
  for (std::size_t j = 0; j < inst.demands.size(); ++j) {
    if (static_cast<int>(inst.demands[j].size()) != inst.periodCount)
      fail("customer " + std::to_string(j) + ": demand row has " +
           std::to_string(inst.demands[j].size()) + " periods, expected " +
           std::to_string(inst.periodCount));
    for (std::size_t t = 0; t < inst.demands[j].size(); ++t)
      if (inst.demands[j][t] < 0)
        fail("customer " + std::to_string(j) + ": negative demand at period " +
             std::to_string(t + 1));
  }

  if (static_cast<int>(inst.rankings.size()) != inst.customerCount)
    fail("rankings has " + std::to_string(inst.rankings.size()) + " rows, expected " +
         std::to_string(inst.customerCount));
  for (std::size_t j = 0; j < inst.rankings.size(); ++j) {
    std::set<int> seen;
    for (int loc : inst.rankings[j]) {
      if (loc < 0 || loc >= inst.locationCount)
        fail("customer " + std::to_string(j) + ": invalid location id " + std::to_string(loc) +
             " in ranking");
      else if (!seen.insert(loc).second)
        fail("customer " + std::to_string(j) + ": duplicate location " + std::to_string(loc) +
             " in ranking");
    }
  }

  if (inst.rho < Rational(0) || inst.rho > Rational(1)) fail("splittingFactor out of [0,1]");

  return errors;
}

inline bool is_valid(const Instance& inst) { return validate_instance(inst).empty(); }

// ---- JSON (format "cdflp-1") ----

inline nlohmann::json rational_to_json(const Rational& r) {
  return nlohmann::json{{"num", r.num()}, {"den", r.den()}};
}

inline Rational rational_from_json(const nlohmann::json& j) {
  return Rational(j.at("num").get<std::int64_t>(), j.at("den").get<std::int64_t>());
}

inline nlohmann::json instance_to_json(const Instance& inst) {
  nlohmann::json j;
  j["version"] = "cdflp-1";
  j["name"] = inst.name;
  j["seed"] = inst.seed;
  j["periods"] = inst.periodCount;
  j["rewards"] = inst.rewards;
  j["demands"] = inst.demands;
  j["rankings"] = inst.rankings;
  j["rho"] = rational_to_json(inst.rho);
  j["leaderBudget"] = inst.leaderBudget;
  j["followerBudget"] = inst.followerBudget;
  return j;
}

inline Instance instance_from_json(const nlohmann::json& j) {
  if (j.at("version").get<std::string>() != "cdflp-1")
    throw std::runtime_error("unsupported instance format version: " +
                             j.at("version").get<std::string>());
  Instance inst;
  inst.name = j.value("name", std::string{});
  inst.seed = j.value("seed", std::uint64_t{0});
  inst.periodCount = j.at("periods").get<int>();
  inst.rewards = j.at("rewards").get<std::vector<std::int64_t>>();
  inst.demands = j.at("demands").get<std::vector<std::vector<std::int64_t>>>();
  inst.rankings = j.at("rankings").get<std::vector<std::vector<int>>>();
  inst.rho = rational_from_json(j.at("rho"));
  inst.leaderBudget = j.value("leaderBudget", 1);
  inst.followerBudget = j.value("followerBudget", 1);
  inst.locationCount = static_cast<int>(inst.rewards.size());
  inst.customerCount = static_cast<int>(inst.demands.size());
  return inst;
}

inline nlohmann::json schedule_to_json(const Schedule& s) {
  return nlohmann::json(s.open);
}

inline Schedule schedule_from_json(const nlohmann::json& j) {
  Schedule s;
  s.open = j.get<std::vector<std::vector<int>>>();
  for (auto& periodSet : s.open) std::sort(periodSet.begin(), periodSet.end());
  return s;
}

}  // namespace cdflp
