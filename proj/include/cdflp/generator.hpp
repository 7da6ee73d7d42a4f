#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "cdflp/instance.hpp"

#include <json.hpp>

namespace cdflp {

// splitmix64; the fixed-point generator behind every random attribute, so
// instances reproduce bit-for-bit across platforms and languages.
inline std::uint64_t splitmix64_next(std::uint64_t& state) {
  std::uint64_t z = (state += 0x9E3779B97F4A7C15ULL);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

inline std::uint64_t fnv1a64(std::string_view text) {
  std::uint64_t h = 1469598103934665603ULL;
  for (char c : text) {
    h ^= static_cast<unsigned char>(c);
    h *= 1099511628211ULL;
  }
  return h;
}

class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t state) : state_(state) {}
  std::uint64_t next() { return splitmix64_next(state_); }
  // 53-bit mantissa uniform in [0, 1).
  double next_unit() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }
  std::uint64_t next_below(std::uint64_t n) { return next() % n; }

 private:
  std::uint64_t state_;
};

// Sub-stream derivation: the stream for a given purpose is splitmix64 seeded
// with fnv1a64(purpose) XOR seed. Draw order within each stream is fixed and
// documented at the call sites below.
inline SplitMix64 purpose_stream(std::string_view purpose, std::uint64_t seed) {
  return SplitMix64(fnv1a64(purpose) ^ seed);
}

enum class RewardScheme { Identical, Inverse };
enum class DemandScheme { Constant, Sparse };

struct GenConfig {
  std::string name = "synthetic";
  int customerCount = 40;       // must be even; half become candidate sites
  int periodCount = 3;
  double maxTravelMinutes = 30;
  RewardScheme rewardScheme = RewardScheme::Identical;
  DemandScheme demandScheme = DemandScheme::Constant;
  Rational rho = Rational(1, 2);
  std::uint64_t seed = 1;
  std::int64_t populationLo = 1;
  std::int64_t populationHi = 30;
  double areaKm = 30.0;
  double speedKmh = 40.0;
};

inline std::vector<ValidationError> validate_config(const GenConfig& cfg) {
  std::vector<ValidationError> errors;
  auto fail = [&](std::string m) { errors.push_back({std::move(m)}); };
  if (cfg.customerCount <= 0 || cfg.customerCount % 2 != 0)
    fail("customerCount must be positive and even");
  if (cfg.periodCount <= 0) fail("periodCount must be positive");
  if (cfg.maxTravelMinutes <= 0) fail("maxTravelMinutes must be positive");
  if (cfg.populationLo <= 0) fail("populationRange low bound must be positive");
  if (cfg.populationLo > cfg.populationHi) fail("populationRange must satisfy lo <= hi");
  if (cfg.areaKm <= 0) fail("areaKm must be positive");
  if (cfg.speedKmh <= 0) fail("speedKmh must be positive");
  if (cfg.rho < Rational(0) || cfg.rho > Rational(1)) fail("rho out of [0,1]");
  return errors;
}

// Reward of a site under the inverse scheme: locations considered by many
// customers pay more rent and return less per unit. A site nobody considers
// never enters any outcome; it gets the identical-scheme reward.
inline std::int64_t inverse_reward(int locationCount, std::int64_t considerers) {
  if (considerers == 0) return locationCount;
  return (locationCount + considerers - 1) / considerers;
}

// Planar synthetic instance: customers uniform in a square, half of them
// (seeded shuffle, then sorted by index) doubling as candidate sites,
// rankings by travel time within the reachability cut-off (ties by site id),
// rewards and spawning demands per the configured schemes.
inline Instance generate_synthetic(const GenConfig& cfg) {
  {
    auto errors = validate_config(cfg);
    if (!errors.empty()) throw std::invalid_argument("generate_synthetic: " + errors[0].message);
  }
  const int J = cfg.customerCount;
  const int I = J / 2;
  const int T = cfg.periodCount;

  // Stream "points": x then y per customer, in customer order.
  std::vector<double> xs(J), ys(J);
  {
    SplitMix64 rng = purpose_stream("points", cfg.seed);
    for (int j = 0; j < J; ++j) {
      xs[j] = rng.next_unit() * cfg.areaKm;
      ys[j] = rng.next_unit() * cfg.areaKm;
    }
  }

  // Stream "populations": one draw per customer, in customer order.
  std::vector<std::int64_t> population(J);
  {
    SplitMix64 rng = purpose_stream("populations", cfg.seed);
    const std::uint64_t span =
        static_cast<std::uint64_t>(cfg.populationHi - cfg.populationLo + 1);
    for (int j = 0; j < J; ++j)
      population[j] = cfg.populationLo + static_cast<std::int64_t>(rng.next_below(span));
  }

  // Stream "site-shuffle": Fisher-Yates over the customer indices; the first
  // half become sites, listed in ascending customer order.
  std::vector<int> siteOwner(J);
  {
    for (int j = 0; j < J; ++j) siteOwner[j] = j;
    SplitMix64 rng = purpose_stream("site-shuffle", cfg.seed);
    for (int j = J - 1; j >= 1; --j)
      std::swap(siteOwner[j],
                siteOwner[static_cast<int>(rng.next_below(static_cast<std::uint64_t>(j) + 1))]);
    siteOwner.resize(I);
    std::sort(siteOwner.begin(), siteOwner.end());
  }

  auto travelMinutes = [&](int site, int customer) {
    const double dx = xs[siteOwner[site]] - xs[customer];
    const double dy = ys[siteOwner[site]] - ys[customer];
    return std::sqrt(dx * dx + dy * dy) / cfg.speedKmh * 60.0;
  };

  Instance inst;
  inst.locationCount = I;
  inst.customerCount = J;
  inst.periodCount = T;
  inst.rho = cfg.rho;
  inst.seed = cfg.seed;
  inst.name = cfg.name + "-s" + std::to_string(cfg.seed);

  inst.rankings.resize(J);
  for (int j = 0; j < J; ++j) {
    std::vector<std::pair<double, int>> reachable;
    for (int i = 0; i < I; ++i) {
      double minutes = travelMinutes(i, j);
      if (minutes <= cfg.maxTravelMinutes) reachable.emplace_back(minutes, i);
    }
    std::sort(reachable.begin(), reachable.end());
    for (const auto& [minutes, i] : reachable) inst.rankings[j].push_back(i);
  }

  inst.rewards.resize(I);
  if (cfg.rewardScheme == RewardScheme::Identical) {
    for (int i = 0; i < I; ++i) inst.rewards[i] = I;
  } else {
    for (int i = 0; i < I; ++i) {
      std::int64_t considerers = 0;
      for (int j = 0; j < J; ++j)
        if (inst.considers(j, i)) ++considerers;
      inst.rewards[i] = inverse_reward(I, considerers);
    }
  }

  inst.demands.assign(J, std::vector<std::int64_t>(T, 0));
  if (cfg.demandScheme == DemandScheme::Constant) {
    for (int j = 0; j < J; ++j)
      for (int t = 0; t < T; ++t) inst.demands[j][t] = population[j];
  } else {
    // Stream "demands": customer-major, then period.
    SplitMix64 rng = purpose_stream("demands", cfg.seed);
    for (int j = 0; j < J; ++j)
      for (int t = 0; t < T; ++t)
        inst.demands[j][t] = static_cast<std::int64_t>(
            rng.next_below(static_cast<std::uint64_t>(population[j]) + 1));
  }

  return inst;
}

// ---- config JSON and sweep manifest ----

inline GenConfig config_from_json(const nlohmann::json& j) {
  GenConfig cfg;
  cfg.name = j.value("name", cfg.name);
  cfg.customerCount = j.at("customers").get<int>();
  cfg.periodCount = j.at("periods").get<int>();
  cfg.maxTravelMinutes = j.value("maxTravelMinutes", cfg.maxTravelMinutes);
  const std::string reward = j.value("rewardScheme", std::string("identical"));
  if (reward == "identical")
    cfg.rewardScheme = RewardScheme::Identical;
  else if (reward == "inverse")
    cfg.rewardScheme = RewardScheme::Inverse;
  else
    throw std::runtime_error("unknown rewardScheme: " + reward);
  const std::string demand = j.value("demandScheme", std::string("constant"));
  if (demand == "constant")
    cfg.demandScheme = DemandScheme::Constant;
  else if (demand == "sparse")
    cfg.demandScheme = DemandScheme::Sparse;
  else
    throw std::runtime_error("unknown demandScheme: " + demand);
  if (j.contains("rho")) cfg.rho = rational_from_json(j.at("rho"));
  cfg.seed = j.value("seed", cfg.seed);
  if (j.contains("populationRange")) {
    cfg.populationLo = j.at("populationRange").at(0).get<std::int64_t>();
    cfg.populationHi = j.at("populationRange").at(1).get<std::int64_t>();
  }
  cfg.areaKm = j.value("areaKm", cfg.areaKm);
  cfg.speedKmh = j.value("speedKmh", cfg.speedKmh);
  return cfg;
}

inline nlohmann::json config_to_json(const GenConfig& cfg) {
  return nlohmann::json{
      {"name", cfg.name},
      {"customers", cfg.customerCount},
      {"periods", cfg.periodCount},
      {"maxTravelMinutes", cfg.maxTravelMinutes},
      {"rewardScheme", cfg.rewardScheme == RewardScheme::Identical ? "identical" : "inverse"},
      {"demandScheme", cfg.demandScheme == DemandScheme::Constant ? "constant" : "sparse"},
      {"rho", rational_to_json(cfg.rho)},
      {"seed", cfg.seed},
      {"populationRange", {cfg.populationLo, cfg.populationHi}},
      {"areaKm", cfg.areaKm},
      {"speedKmh", cfg.speedKmh}};
}

inline std::string manifest_header() {
  return "name,seed,customers,locations,periods,maxTravelMinutes,rewardScheme,demandScheme,"
         "rho,file";
}

inline std::string manifest_row(const GenConfig& cfg, const Instance& inst,
                                const std::string& file) {
  std::string row = inst.name + "," + std::to_string(cfg.seed) + "," +
                    std::to_string(inst.customerCount) + "," +
                    std::to_string(inst.locationCount) + "," +
                    std::to_string(inst.periodCount) + "," +
                    std::to_string(cfg.maxTravelMinutes) + "," +
                    (cfg.rewardScheme == RewardScheme::Identical ? "identical" : "inverse") +
                    "," +
                    (cfg.demandScheme == DemandScheme::Constant ? "constant" : "sparse") + "," +
                    cfg.rho.to_string() + "," + file;
  return row;
}

}  // namespace cdflp
