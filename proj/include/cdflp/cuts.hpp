#pragma once

#include <cassert>
#include <optional>
#include <string>
#include <vector>

#include "cdflp/linear.hpp"
#include "cdflp/simulate.hpp"

#include <json.hpp>

namespace cdflp {

enum class CutKind { Tailored, Tightened, NoGood };

enum class ShareLevel { Full, Partial };

// One follower capture of a reference outcome: customer `customer` captured
// through `location` at `period` after last being captured at `windowStart`,
// with the follower holding the full contribution or the 1-rho share.
struct ProfileEntry {
  int customer = 0;
  int period = 0;
  int location = 0;
  int windowStart = 0;
  ShareLevel share = ShareLevel::Full;
};

using CaptureProfile = std::vector<ProfileEntry>;

inline CaptureProfile follower_profile(const JointOutcome& outcome) {
  CaptureProfile profile;
  for (const auto& ev : outcome.events) {
    if (ev.owner == CaptureOwner::LeaderOnly) continue;
    profile.push_back({ev.customer, ev.period, ev.location, ev.windowStart,
                       ev.owner == CaptureOwner::FollowerOnly ? ShareLevel::Full
                                                              : ShareLevel::Partial});
  }
  return profile;
}

// A stored cut with its generating data, evaluable against any candidate
// leader schedule (closed form) or materializable as a linear block for
// model-mode masters. Tailored profiles come from playing z* against the
// generating y'; tightened profiles from playing z* against the empty
// leader schedule.
struct GeneratedCut {
  CutKind kind = CutKind::Tailored;
  std::optional<Schedule> sourceLeader;  // Tailored and NoGood
  Schedule sourceFollower;               // z* (value-function) or z' (no-good)
  CaptureProfile profile;                // value-function kinds only
  const Instance* inst = nullptr;
};

inline GeneratedCut make_tailored_cut(const Instance& inst, const Schedule& yPrime,
                                      const Schedule& zStar) {
  GeneratedCut cut;
  cut.kind = CutKind::Tailored;
  cut.sourceLeader = yPrime;
  cut.sourceFollower = zStar;
  cut.profile = follower_profile(simulate_outcome(inst, yPrime, zStar));
  cut.inst = &inst;
  return cut;
}

inline GeneratedCut make_tightened_cut(const Instance& inst, const Schedule& zStar,
                                       std::optional<Schedule> triggeringLeader = std::nullopt) {
  GeneratedCut cut;
  cut.kind = CutKind::Tightened;
  cut.sourceLeader = std::move(triggeringLeader);
  cut.sourceFollower = zStar;
  cut.profile = follower_profile(simulate_outcome(inst, empty_schedule(inst), zStar));
  cut.inst = &inst;
  return cut;
}

inline GeneratedCut make_no_good_cut(const Instance& inst, const Schedule& yPrime,
                                     const Schedule& zPrime) {
  GeneratedCut cut;
  cut.kind = CutKind::NoGood;
  cut.sourceLeader = yPrime;
  cut.sourceFollower = zPrime;
  cut.inst = &inst;
  return cut;
}

namespace detail {

// Number of leader openings of acceptable locations strictly inside the
// window (windowStart, period).
inline int interior_interceptions(const Instance& inst, const Schedule& y,
                                  const ProfileEntry& e) {
  int count = 0;
  for (int s = e.windowStart + 1; s < e.period; ++s)
    for (int k : inst.rankings[e.customer])
      if (y.opens(k, s)) ++count;
  return count;
}

// Number of leader openings at the capture period strictly preferred to the
// capture location.
inline int better_openings_at_capture(const Instance& inst, const Schedule& y,
                                      const ProfileEntry& e) {
  int count = 0;
  for (int k : inst.rankings[e.customer]) {
    if (k == e.location) break;
    if (y.opens(k, e.period)) ++count;
  }
  return count;
}

}  // namespace detail

// Lower bound on the follower's profit implied by a tailored cut for the
// candidate leader schedule. Each profile contribution is kept unless the
// candidate intercepts it: an acceptable opening inside the window, a
// strictly preferred opening at the capture period, or (for full-share
// entries with rho > 0) co-location at the capture period. Interceptions
// subtract whole contributions, so the result can go negative.
inline Rational tailored_rhs(const GeneratedCut& cut, const Schedule& yCand) {
  if (cut.kind != CutKind::Tailored) throw std::invalid_argument("tailored_rhs: kind mismatch");
  const Instance& inst = *cut.inst;
  Rational rhs;
  for (const auto& e : cut.profile) {
    Rational v = e.share == ShareLevel::Full ? Rational(1) : Rational(1) - inst.rho;
    Rational base = Rational(inst.rewards[e.location]) *
                    Rational(accumulated_demand(inst, e.customer, e.windowStart, e.period)) * v;
    int deductions = detail::interior_interceptions(inst, yCand, e) +
                     detail::better_openings_at_capture(inst, yCand, e);
    if (e.share == ShareLevel::Full && inst.rho > Rational(0) &&
        yCand.opens(e.location, e.period))
      ++deductions;
    rhs += base * (Rational(1) - Rational(deductions));
  }
  return rhs;
}

// Lower bound implied by a tightened cut: starts from the follower's profit
// with z* against an empty leader schedule and discounts, per period of each
// window, exactly the demand the candidate intercepts (fully when it captures
// the customer first or opens a strictly preferred location, at rate rho when
// it merely co-locates at the capture period).
inline Rational tightened_rhs(const GeneratedCut& cut, const Schedule& yCand) {
  if (cut.kind != CutKind::Tightened) throw std::invalid_argument("tightened_rhs: kind mismatch");
  const Instance& inst = *cut.inst;
  Rational rhs;
  for (const auto& e : cut.profile) {
    assert(e.share == ShareLevel::Full);
    const bool betterAtCapture = detail::better_openings_at_capture(inst, yCand, e) > 0;
    const bool coLocated = yCand.opens(e.location, e.period);
    std::int64_t kept = 0;  // demand of window periods with interception term 0
    for (int s = e.windowStart + 1; s <= e.period; ++s) {
      bool intercepted = betterAtCapture;
      for (int sp = s; sp < e.period && !intercepted; ++sp)
        for (int k : inst.rankings[e.customer])
          if (yCand.opens(k, sp)) {
            intercepted = true;
            break;
          }
      if (!intercepted) kept += inst.demand(e.customer, s);
    }
    Rational term(kept);
    if (coLocated) term -= inst.rho * Rational(kept);
    rhs += Rational(inst.rewards[e.location]) * term;
  }
  return rhs;
}

inline Rational value_function_rhs(const GeneratedCut& cut, const Schedule& yCand) {
  return cut.kind == CutKind::Tailored ? tailored_rhs(cut, yCand) : tightened_rhs(cut, yCand);
}

// TRUE iff (y, z) differs from the no-good source pair in at least one
// opening indicator.
inline bool no_good_satisfied(const GeneratedCut& cut, const Schedule& y, const Schedule& z) {
  if (cut.kind != CutKind::NoGood) throw std::invalid_argument("no_good_satisfied: kind mismatch");
  return !(y == *cut.sourceLeader && z == cut.sourceFollower);
}

// Whether a master candidate survives this cut. followerValue must be the
// exact simulated follower profit of the pair.
inline bool cut_admits(const GeneratedCut& cut, const Schedule& y, const Schedule& z,
                       const Rational& followerValue) {
  if (cut.kind == CutKind::NoGood) return no_good_satisfied(cut, y, z);
  return followerValue >= value_function_rhs(cut, y);
}

// ---- materialization as linear blocks over master variables ----

namespace detail {

// The follower objective over every master v variable.
inline std::vector<LinTerm> follower_objective_terms(const Instance& inst) {
  std::vector<LinTerm> terms;
  for (int j = 0; j < inst.customerCount; ++j)
    for (int i : inst.rankings[j])
      for (int t = 1; t <= inst.periodCount; ++t)
        for (int l = 0; l < t; ++l)
          terms.push_back({var_v(l, t, i, j),
                           Rational(inst.rewards[i]) *
                               Rational(accumulated_demand(inst, j, l, t))});
  return terms;
}

inline void add_coefficient(std::map<std::string, Rational>& coeffs, const std::string& var,
                            const Rational& c) {
  coeffs[var] += c;
}

}  // namespace detail

// Single inequality in the master y variables: follower objective plus the
// interception terms of each profile entry must reach the profile's total
// value. No auxiliaries.
inline LinearBlock materialize_tailored(const GeneratedCut& cut, const std::string& tag = "") {
  if (cut.kind != CutKind::Tailored)
    throw std::invalid_argument("materialize_tailored: kind mismatch");
  const Instance& inst = *cut.inst;
  LinearBlock block;
  LinRow row;
  row.name = "tailored" + tag;
  row.op = RelOp::GreaterEq;
  row.terms = detail::follower_objective_terms(inst);

  std::map<std::string, Rational> yCoeffs;
  Rational constant;
  for (const auto& e : cut.profile) {
    Rational v = e.share == ShareLevel::Full ? Rational(1) : Rational(1) - inst.rho;
    Rational base = Rational(inst.rewards[e.location]) *
                    Rational(accumulated_demand(inst, e.customer, e.windowStart, e.period)) * v;
    constant += base;
    for (int s = e.windowStart + 1; s < e.period; ++s)
      for (int k : inst.rankings[e.customer])
        detail::add_coefficient(yCoeffs, var_y(s, k), base);
    for (int k : inst.rankings[e.customer]) {
      if (k == e.location) break;
      detail::add_coefficient(yCoeffs, var_y(e.period, k), base);
    }
    if (e.share == ShareLevel::Full && inst.rho > Rational(0))
      detail::add_coefficient(yCoeffs, var_y(e.period, e.location), base);
  }
  for (const auto& [var, coeff] : yCoeffs)
    if (!coeff.is_zero()) row.terms.push_back({var, coeff});
  row.rhs = constant;
  block.rows.push_back(std::move(row));
  return block;
}

// Declares one interception variable o per (entry, window period) with its
// upper-bound row, one product variable p = y * (1 - o) with its four
// envelope rows whenever the rho discount applies, and the master inequality
// tying the follower objective to the discounted profile value. o and p stay
// continuous. Zero-demand periods contribute nothing and are skipped.
inline LinearBlock materialize_tightened(const GeneratedCut& cut, const std::string& tag = "") {
  if (cut.kind != CutKind::Tightened)
    throw std::invalid_argument("materialize_tightened: kind mismatch");
  const Instance& inst = *cut.inst;
  LinearBlock block;
  LinRow master;
  master.name = "tightened" + tag;
  master.op = RelOp::GreaterEq;
  master.terms = detail::follower_objective_terms(inst);
  Rational constant;

  for (const auto& e : cut.profile) {
    const Rational reward(inst.rewards[e.location]);
    constant +=
        reward * Rational(accumulated_demand(inst, e.customer, e.windowStart, e.period));
    for (int s = e.windowStart + 1; s <= e.period; ++s) {
      const std::int64_t d = inst.demand(e.customer, s);
      if (d == 0) continue;
      const std::string suffix = std::to_string(e.windowStart) + "_" + std::to_string(s) + "_" +
                                 std::to_string(e.period) + "_" + std::to_string(e.location) +
                                 "_" + std::to_string(e.customer) + tag;
      const std::string oName = "o_" + suffix;
      block.auxiliaries.push_back({oName, Rational(0), Rational(1), false});

      LinRow bound;
      bound.name = "bound_" + oName;
      bound.op = RelOp::LessEq;
      bound.rhs = Rational(0);
      std::map<std::string, Rational> coeffs;
      coeffs[oName] = Rational(1);
      for (int sp = s; sp < e.period; ++sp)
        for (int k : inst.rankings[e.customer])
          detail::add_coefficient(coeffs, var_y(sp, k), Rational(-1));
      for (int k : inst.rankings[e.customer]) {
        if (k == e.location) break;
        detail::add_coefficient(coeffs, var_y(e.period, k), Rational(-1));
      }
      for (const auto& [var, coeff] : coeffs)
        if (!coeff.is_zero()) bound.terms.push_back({var, coeff});
      block.rows.push_back(std::move(bound));

      master.terms.push_back({oName, reward * Rational(d)});

      if (inst.rho > Rational(0)) {
        const std::string pName = "p_" + suffix;
        const std::string yName = var_y(e.period, e.location);
        block.auxiliaries.push_back({pName, Rational(0), Rational(1), false});
        block.rows.push_back({"env1_" + pName,
                              {{pName, Rational(1)}, {yName, Rational(-1)}},
                              RelOp::LessEq,
                              Rational(0)});
        block.rows.push_back({"env2_" + pName,
                              {{pName, Rational(1)}, {oName, Rational(1)}},
                              RelOp::LessEq,
                              Rational(1)});
        block.rows.push_back({"env3_" + pName,
                              {{pName, Rational(1)}, {yName, Rational(-1)}, {oName, Rational(1)}},
                              RelOp::GreaterEq,
                              Rational(0)});
        block.rows.push_back({"env4_" + pName, {{pName, Rational(1)}}, RelOp::GreaterEq,
                              Rational(0)});
        master.terms.push_back({pName, inst.rho * reward * Rational(d)});
      }
    }
  }
  master.rhs = constant;
  block.rows.push_back(std::move(master));
  return block;
}

// Requires flipping at least one opening indicator of either player
// relative to the source pair.
inline LinearBlock materialize_no_good(const GeneratedCut& cut, const std::string& tag = "") {
  if (cut.kind != CutKind::NoGood)
    throw std::invalid_argument("materialize_no_good: kind mismatch");
  const Instance& inst = *cut.inst;
  LinearBlock block;
  LinRow row;
  row.name = "nogood" + tag;
  row.op = RelOp::GreaterEq;
  std::int64_t onCount = 0;
  for (int t = 1; t <= inst.periodCount; ++t)
    for (int i = 0; i < inst.locationCount; ++i) {
      const bool yOn = cut.sourceLeader->opens(i, t);
      const bool zOn = cut.sourceFollower.opens(i, t);
      row.terms.push_back({var_y(t, i), yOn ? Rational(-1) : Rational(1)});
      row.terms.push_back({var_z(t, i), zOn ? Rational(-1) : Rational(1)});
      onCount += (yOn ? 1 : 0) + (zOn ? 1 : 0);
    }
  row.rhs = Rational(1) - Rational(onCount);
  block.rows.push_back(std::move(row));
  return block;
}

inline LinearBlock materialize(const GeneratedCut& cut, const std::string& tag = "") {
  switch (cut.kind) {
    case CutKind::Tailored: return materialize_tailored(cut, tag);
    case CutKind::Tightened: return materialize_tightened(cut, tag);
    case CutKind::NoGood: return materialize_no_good(cut, tag);
  }
  throw std::logic_error("materialize: unknown kind");
}

// ---- JSON for solver-trace dumps ----

inline nlohmann::json cut_to_json(const GeneratedCut& cut) {
  nlohmann::json j;
  switch (cut.kind) {
    case CutKind::Tailored: j["kind"] = "tailored"; break;
    case CutKind::Tightened: j["kind"] = "tightened"; break;
    case CutKind::NoGood: j["kind"] = "no-good"; break;
  }
  if (cut.sourceLeader) j["sourceLeader"] = schedule_to_json(*cut.sourceLeader);
  j["sourceFollower"] = schedule_to_json(cut.sourceFollower);
  if (cut.kind != CutKind::NoGood) {
    nlohmann::json entries = nlohmann::json::array();
    for (const auto& e : cut.profile)
      entries.push_back({{"customer", e.customer},
                         {"period", e.period},
                         {"location", e.location},
                         {"windowStart", e.windowStart},
                         {"share", e.share == ShareLevel::Full ? "full" : "partial"}});
    j["profile"] = entries;
  }
  return j;
}

}  // namespace cdflp
