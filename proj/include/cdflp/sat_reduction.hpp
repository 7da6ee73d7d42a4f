#pragma once

#include <array>
#include <istream>
#include <sstream>
#include <string>
#include <vector>

#include "cdflp/solver.hpp"

namespace cdflp {

// A 3CNF formula split into k existentially and n-k universally quantified
// variables. Literals are signed 1-based variable indices.
struct SatFormula {
  int existCount = 0;  // k
  int varCount = 0;    // n
  std::vector<std::array<int, 3>> clauses;
};

inline std::vector<ValidationError> validate_formula(const SatFormula& f) {
  std::vector<ValidationError> errors;
  auto fail = [&](std::string m) { errors.push_back({std::move(m)}); };
  if (f.existCount < 1) fail("existential set must be non-empty");
  if (f.existCount >= f.varCount) fail("universal set must be non-empty");
  for (std::size_t c = 0; c < f.clauses.size(); ++c)
    for (int lit : f.clauses[c])
      if (lit == 0 || lit < -f.varCount || lit > f.varCount)
        fail("clause " + std::to_string(c) + ": literal " + std::to_string(lit) +
             " out of range");
  return errors;
}

// Text format: first line "k n m", then m lines of 3 signed literals.
inline SatFormula parse_formula(std::istream& in) {
  SatFormula f;
  std::size_t m = 0;
  if (!(in >> f.existCount >> f.varCount >> m))
    throw std::runtime_error("formula: bad header, expected 'k n m'");
  f.clauses.resize(m);
  for (std::size_t c = 0; c < m; ++c)
    if (!(in >> f.clauses[c][0] >> f.clauses[c][1] >> f.clauses[c][2]))
      throw std::runtime_error("formula: clause " + std::to_string(c) + " truncated");
  auto errors = validate_formula(f);
  if (!errors.empty()) throw std::runtime_error("formula: " + errors[0].message);
  return f;
}

inline SatFormula parse_formula(const std::string& text) {
  std::istringstream in(text);
  return parse_formula(in);
}

// Gadget location ids, four per variable. Variables are 1-based.
namespace gadget {

inline int location(int var, bool lowerLevel, bool assignsTrue) {
  return 4 * (var - 1) + (lowerLevel ? 2 : 0) + (assignsTrue ? 0 : 1);
}

inline constexpr std::int64_t m1(std::int64_t m) { return 3 * m + 3; }
inline constexpr std::int64_t m2(std::int64_t m) { return 2 * m + 2; }
inline constexpr std::int64_t m3(std::int64_t m) { return m + 1; }

}  // namespace gadget

// Builds the decision-gadget instance for a quantified formula. One period
// per variable; four locations per variable (both levels x both literals);
// customers encode literal choices, level consistency, and clauses. Returns
// the instance together with the profit threshold that answers the
// existential question.
inline std::pair<Instance, Rational> reduce_eafa3sat(const SatFormula& f) {
  {
    auto errors = validate_formula(f);
    if (!errors.empty()) throw std::invalid_argument("reduce_eafa3sat: " + errors[0].message);
  }
  const int n = f.varCount;
  const std::int64_t m = static_cast<std::int64_t>(f.clauses.size());
  const std::int64_t M1 = gadget::m1(m), M2 = gadget::m2(m), M3 = gadget::m3(m);

  Instance inst;
  inst.name = "eafa3sat-k" + std::to_string(f.existCount) + "-n" + std::to_string(n) + "-m" +
              std::to_string(m);
  inst.periodCount = n;
  inst.locationCount = 4 * n;
  inst.customerCount = 4 * n + static_cast<int>(m);
  inst.rewards.assign(inst.locationCount, 1);
  inst.rho = Rational(1, 2);
  inst.demands.assign(inst.customerCount, std::vector<std::int64_t>(n, 0));
  inst.rankings.resize(inst.customerCount);

  auto spike = [&](int customer, int period, std::int64_t amount) {
    inst.demands[customer][period - 1] = amount;
  };

  // Literal-customers: two per variable, [x_s = true] then [x_s = false].
  // The mover with assignment priority for the variable ranks first.
  for (int s = 1; s <= n; ++s) {
    const bool existential = s <= f.existCount;
    const int trueCustomer = 2 * (s - 1);
    const int falseCustomer = trueCustomer + 1;
    if (existential) {
      inst.rankings[trueCustomer] = {gadget::location(s, false, true),
                                     gadget::location(s, true, false)};
      inst.rankings[falseCustomer] = {gadget::location(s, false, false),
                                      gadget::location(s, true, true)};
    } else {
      inst.rankings[trueCustomer] = {gadget::location(s, true, true),
                                     gadget::location(s, false, false)};
      inst.rankings[falseCustomer] = {gadget::location(s, true, false),
                                      gadget::location(s, false, true)};
    }
    spike(trueCustomer, s, M1);
    spike(falseCustomer, s, M1);
  }

  // Level-customers: upper then lower per variable, true preferred to false.
  for (int s = 1; s <= n; ++s) {
    const int upperCustomer = 2 * n + 2 * (s - 1);
    const int lowerCustomer = upperCustomer + 1;
    inst.rankings[upperCustomer] = {gadget::location(s, false, true),
                                    gadget::location(s, false, false)};
    inst.rankings[lowerCustomer] = {gadget::location(s, true, true),
                                    gadget::location(s, true, false)};
    spike(upperCustomer, s, M2);
    spike(lowerCustomer, s, M3);
  }

  // Clause-customers: the three satisfying lower-level locations in clause
  // order, then the upper-level location opposing the last literal. Repeated
  // locations keep their first (best) rank.
  for (std::size_t c = 0; c < f.clauses.size(); ++c) {
    const int customer = 4 * n + static_cast<int>(c);
    auto& pref = inst.rankings[customer];
    auto add = [&](int loc) {
      for (int existing : pref)
        if (existing == loc) return;
      pref.push_back(loc);
    };
    for (int lit : f.clauses[c]) add(gadget::location(std::abs(lit), true, lit > 0));
    const int last = f.clauses[c][2];
    add(gadget::location(std::abs(last), false, last < 0));
    spike(customer, 1, 1);
  }

  const Rational threshold = Rational(n) * Rational(M1 + M2) + Rational(1);
  return {std::move(inst), threshold};
}

// TRUE iff the leader can secure at least the threshold profit against an
// optimally reacting follower.
inline bool decide_threshold(const Instance& inst, const Rational& threshold,
                             std::int64_t cap = kDefaultScheduleCap) {
  return brute_force_oracle(inst, SolveVariant::Optimistic, cap).leaderProfit >= threshold;
}

}  // namespace cdflp
