// Acceptance suite: runs every exit criterion end to end on a seeded
// synthetic corpus and the quantified-3SAT gadgets, printing one PASS/FAIL
// line per criterion. Exit status is the number of failed criteria.
//
// Artifacts written to the working directory:
//   acceptance_runs.csv       per-instance runtimes and cut counts
//   acceptance_reduction.txt  per-formula decision vs direct evaluation

#include <chrono>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <vector>

#include "cdflp/generator.hpp"
#include "cdflp/metrics.hpp"
#include "cdflp/sat_reduction.hpp"
#include "cdflp/solver.hpp"
#include "../support/exists_forall_oracle.hpp"

using namespace cdflp;

namespace {

struct Criterion {
  std::string name;
  bool pass = true;
  std::int64_t checks = 0;
  std::int64_t violations = 0;
  std::string note;

  void require(bool ok, const std::string& detail = "") {
    ++checks;
    if (!ok) {
      ++violations;
      pass = false;
      if (!detail.empty() && violations <= 5) {
        if (!note.empty()) note += " | ";
        note += detail;
      }
    }
  }
};

std::string schedule_text(const Schedule& s) {
  std::string out = "[";
  for (int t = 1; t <= s.periods(); ++t) {
    out += "{";
    for (std::size_t k = 0; k < s.at(t).size(); ++k)
      out += (k ? "," : "") + std::to_string(s.at(t)[k]);
    out += "}";
  }
  return out + "]";
}

struct TimedRun {
  BilevelSolution solution;
  std::vector<CutTraceEntry> trace;
  double wallMs = 0;
};

TimedRun timed_solve(const Instance& inst, SolveVariant variant, CutFamily family) {
  TimedRun run;
  SolverConfig config;
  config.cutTrace = &run.trace;
  auto start = std::chrono::steady_clock::now();
  run.solution = solve_bilevel(inst, variant, family, MasterMode::Search, config);
  run.wallMs =
      std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start)
          .count();
  return run;
}

}  // namespace

int main() {
  auto suiteStart = std::chrono::steady_clock::now();

  // ---- seeded synthetic corpus: J in {4,6}, I = J/2, T in {2,3},
  //      rho in {0, 1/4, 1/2, 3/4, 1}, both reward and demand schemes,
  //      seeds 1..3  ->  240 instances ----
  std::vector<GenConfig> corpusConfigs;
  for (int customers : {4, 6})
    for (int periods : {2, 3})
      for (auto rho : {Rational(0), Rational(1, 4), Rational(1, 2), Rational(3, 4), Rational(1)})
        for (RewardScheme reward : {RewardScheme::Identical, RewardScheme::Inverse})
          for (DemandScheme demand : {DemandScheme::Constant, DemandScheme::Sparse})
            for (std::uint64_t seed : {1, 2, 3}) {
              GenConfig cfg;
              cfg.name = "acc-J" + std::to_string(customers) + "-T" + std::to_string(periods) +
                         "-rho" + std::to_string(rho.num()) + "d" + std::to_string(rho.den()) +
                         (reward == RewardScheme::Identical ? "-ident" : "-inv") +
                         (demand == DemandScheme::Constant ? "-const" : "-sparse");
              cfg.customerCount = customers;
              cfg.periodCount = periods;
              cfg.maxTravelMinutes = 30;
              cfg.rewardScheme = reward;
              cfg.demandScheme = demand;
              cfg.rho = rho;
              cfg.seed = seed;
              cfg.populationLo = 1;
              cfg.populationHi = 12;
              cfg.areaKm = 30;
              cfg.speedKmh = 40;
              corpusConfigs.push_back(cfg);
            }

  Criterion oracleEquivalence;
  oracleEquivalence.name = "oracle-equivalence (both variants x both families x search)";
  Criterion cutValidity;
  cutValidity.name = "cut-validity (every generated cut, every feasible leader schedule)";
  Criterion dominance;
  dominance.name = "dominance (tightened >= tailored from identical generating pairs)";
  Criterion noRepeat;
  noRepeat.name = "tightened-no-repeat (no duplicated generating reaction)";
  Criterion reduction;
  reduction.name = "reduction-soundness (decision vs direct quantified evaluation)";
  Criterion metricProps;
  metricProps.name = "metric-properties (gap range, price >= 1, resilience diagonal)";
  Criterion rhoZeroClaim;
  rhoZeroClaim.name = "rho-zero-pessimistic (heuristic gap 100% on every instance)";
  Criterion directional;
  directional.name =
      "directional-substitute (full-scale aggregates are out of reach at desk scale)";
  Criterion crossCheck;
  crossCheck.name = "model-search-cross-check (identical exact values)";

  std::ofstream runsCsv("acceptance_runs.csv");
  runsCsv << "instance,variant,family,wallMs,vfCuts,noGoodCuts,candidates,leaderValue\n";

  double tailoredTimeTotal = 0, tightenedTimeTotal = 0;
  std::int64_t cutCountWins = 0, cutCountTotal = 0;
  std::int64_t instanceIndex = 0;

  std::vector<Instance> crossCheckPool;

  for (const auto& cfg : corpusConfigs) {
    Instance inst = generate_synthetic(cfg);
    ++instanceIndex;
    if (crossCheckPool.size() < 50) crossCheckPool.push_back(inst);

    ScheduleEnumerator leaders(inst, inst.leaderBudget);
    std::vector<Rational> bestFollower(leaders.count());
    for (std::int64_t yi = 0; yi < leaders.count(); ++yi)
      bestFollower[yi] = best_response(inst, leaders.at(yi)).bestFollowerValue;

    BilevelSolution oracleOpt = brute_force_oracle(inst, SolveVariant::Optimistic);
    BilevelSolution oraclePess = brute_force_oracle(inst, SolveVariant::Pessimistic);

    double tailoredMs = 0, tightenedMs = 0;
    std::int64_t tailoredCuts = 0, tightenedCuts = 0;

    for (SolveVariant variant : {SolveVariant::Optimistic, SolveVariant::Pessimistic}) {
      const BilevelSolution& oracle =
          variant == SolveVariant::Optimistic ? oracleOpt : oraclePess;
      for (CutFamily family : {CutFamily::Tailored, CutFamily::Tightened}) {
        TimedRun run = timed_solve(inst, variant, family);

        oracleEquivalence.require(
            run.solution.leaderProfit == oracle.leaderProfit,
            inst.name + " " + variant_name(variant) + ": " +
                run.solution.leaderProfit.to_string() + " vs " +
                oracle.leaderProfit.to_string());

        std::int64_t vfCuts = 0;
        std::vector<Schedule> tightenedSources;
        for (const auto& entry : run.trace) {
          if (entry.cut.kind == CutKind::NoGood) continue;
          ++vfCuts;

          // Validity over every feasible leader schedule, plus the cut-off of
          // the generating infeasible pair.
          for (std::int64_t yi = 0; yi < leaders.count(); ++yi)
            cutValidity.require(
                bestFollower[yi] >= value_function_rhs(entry.cut, leaders.at(yi)),
                inst.name + ": cut admits a better-than-optimal follower value");
          Rational rejectedValue =
              profit_pair(inst, entry.rejectedLeader, entry.rejectedFollower).follower;
          cutValidity.require(
              value_function_rhs(entry.cut, entry.rejectedLeader) > rejectedValue,
              inst.name + ": cut fails to remove its generating pair");

          // Dominance of the tightened form built from the same pair.
          const Schedule& yPrime = *entry.cut.sourceLeader;
          const Schedule& zStar = entry.cut.sourceFollower;
          GeneratedCut pairTailored = make_tailored_cut(inst, yPrime, zStar);
          GeneratedCut pairTightened = make_tightened_cut(inst, zStar, yPrime);
          for (std::int64_t yi = 0; yi < leaders.count(); ++yi)
            dominance.require(tightened_rhs(pairTightened, leaders.at(yi)) >=
                                  tailored_rhs(pairTailored, leaders.at(yi)),
                              inst.name + ": tailored bound exceeds tightened");

          if (entry.cut.kind == CutKind::Tightened)
            tightenedSources.push_back(entry.cut.sourceFollower);
        }
        for (std::size_t a = 0; a < tightenedSources.size(); ++a)
          for (std::size_t b = a + 1; b < tightenedSources.size(); ++b)
            noRepeat.require(!(tightenedSources[a] == tightenedSources[b]),
                             inst.name + ": repeated reaction " +
                                 schedule_text(tightenedSources[a]));

        if (family == CutFamily::Tailored) {
          tailoredMs += run.wallMs;
          tailoredCuts += vfCuts;
        } else {
          tightenedMs += run.wallMs;
          tightenedCuts += vfCuts;
        }
        runsCsv << inst.name << "," << variant_name(variant) << ","
                << (family == CutFamily::Tailored ? "tailored" : "tightened") << ","
                << run.wallMs << "," << vfCuts << "," << run.solution.stats.noGoodCuts << ","
                << run.solution.stats.candidatesExamined << ","
                << run.solution.leaderProfit.to_string() << "\n";
      }
    }

    tailoredTimeTotal += tailoredMs;
    tightenedTimeTotal += tightenedMs;
    ++cutCountTotal;
    if (tightenedCuts <= tailoredCuts) ++cutCountWins;

    // ---- metric properties on this instance ----
    BilevelSolution heuristicOpt = monopolistic_heuristic(inst, SolveVariant::Optimistic);
    if (oracleOpt.leaderProfit > Rational(0)) {
      auto gap = opportunity_gap(oracleOpt.leaderProfit, heuristicOpt.leaderProfit);
      metricProps.require(gap && *gap >= Rational(0) && *gap <= Rational(100),
                          inst.name + ": optimistic gap out of range");
    }
    BilevelSolution coop = solve_cooperative(inst);
    auto price = price_of_competition(coop.leaderProfit + coop.followerProfit,
                                      oracleOpt.leaderProfit, oracleOpt.followerProfit);
    if (price)
      metricProps.require(*price >= Rational(1), inst.name + ": price of competition below 1");

    if (instanceIndex % 12 == 0) {
      for (SolveVariant b : {SolveVariant::Optimistic, SolveVariant::Pessimistic})
        for (auto rho : {Rational(0), Rational(1, 2), Rational(1)}) {
          ScenarioAssumption cell{b, rho};
          auto ratio = resilience_ratio(inst, cell, cell, oracle_solver());
          if (ratio)
            metricProps.require(*ratio == Rational(100),
                                inst.name + ": resilience diagonal not 100");
        }
    }

    // ---- rho = 0 pessimistic claim ----
    if (inst.rho == Rational(0)) {
      BilevelSolution heuristicPess = monopolistic_heuristic(inst, SolveVariant::Pessimistic);
      if (oraclePess.leaderProfit == Rational(0)) {
        // Gap undefined: every schedule is worthless under this truth.
        // Surfaced, not counted against the claim.
        std::cout << "  [rho-zero] " << inst.name
                  << ": pessimistic optimum is 0, gap not applicable\n";
      } else {
        auto gap = opportunity_gap(oraclePess.leaderProfit, heuristicPess.leaderProfit);
        bool holds = gap && *gap == Rational(100);
        if (!holds) {
          std::cout << "  [rho-zero] VIOLATION " << inst.name
                    << ": exact=" << oraclePess.leaderProfit.to_string()
                    << " heuristic=" << heuristicPess.leaderProfit.to_string()
                    << " y'=" << schedule_text(heuristicPess.yStar)
                    << " reaction=" << schedule_text(heuristicPess.zStar) << "\n";
        }
        rhoZeroClaim.require(holds, inst.name + ": heuristic keeps value at rho=0");
      }
    }
  }

  // ---- directional substitute for the full-scale benchmark aggregates ----
  const double meanTailored = tailoredTimeTotal / static_cast<double>(cutCountTotal);
  const double meanTightened = tightenedTimeTotal / static_cast<double>(cutCountTotal);
  directional.require(meanTightened <= meanTailored,
                      "mean wall-time: tightened " + std::to_string(meanTightened) +
                          "ms vs tailored " + std::to_string(meanTailored) + "ms");
  const double winShare =
      static_cast<double>(cutCountWins) / static_cast<double>(cutCountTotal);
  directional.require(winShare >= 0.8, "tightenedCuts <= tailoredCuts on only " +
                                           std::to_string(100 * winShare) + "% of instances");
  directional.note = "tightened mean " + std::to_string(meanTightened) + "ms, tailored mean " +
                     std::to_string(meanTailored) + "ms, cut-count wins " +
                     std::to_string(100 * winShare) + "%";

  // ---- reduction soundness on an exhaustive small-formula family ----
  {
    std::ofstream reductionLog("acceptance_reduction.txt");
    std::int64_t agreements = 0, total = 0;

    // Constants pinned first.
    reduction.require(gadget::m1(3) == 12 && gadget::m2(3) == 8 && gadget::m3(3) == 4,
                      "gadget constants for m=3");
    for (int n = 2; n <= 3; ++n)
      for (std::int64_t m : {1, 2}) {
        SatFormula probe;
        probe.existCount = 1;
        probe.varCount = n;
        for (std::int64_t c = 0; c < m; ++c) probe.clauses.push_back({1, -1, n});
        auto [inst, threshold] = reduce_eafa3sat(probe);
        reduction.require(inst.periodCount == n && inst.locationCount == 4 * n &&
                              inst.customerCount == 4 * n + static_cast<int>(m),
                          "gadget dimensions");
        reduction.require(threshold == Rational(n) * Rational(gadget::m1(m) + gadget::m2(m)) +
                                           Rational(1),
                          "gadget threshold");
      }

    std::vector<SatFormula> family;
    for (int k = 1; k < 2; ++k) {
      std::vector<std::array<int, 3>> pool = {{{1, 2, 2}},    {{1, -2, 2}}, {{-1, 2, -2}},
                                              {{1, 1, -2}},   {{-1, -1, -2}}, {{1, -1, 2}},
                                              {{2, 2, 2}},    {{-2, -2, -2}}, {{1, 1, 1}},
                                              {{-1, -1, 2}}};
      for (const auto& c : pool) {
        SatFormula f;
        f.existCount = k;
        f.varCount = 2;
        f.clauses = {c};
        family.push_back(f);
      }
      for (std::size_t a = 0; a < pool.size(); ++a)
        for (std::size_t b = a + 1; b < pool.size() && a < 7; ++b) {
          SatFormula f;
          f.existCount = k;
          f.varCount = 2;
          f.clauses = {pool[a], pool[b]};
          family.push_back(f);
        }
    }
    for (int k = 1; k <= 2; ++k) {
      std::vector<std::array<int, 3>> pool = {{{1, 2, 3}},  {{1, -2, 3}}, {{-1, 2, -3}},
                                              {{-1, -2, -3}}, {{3, 3, 3}}, {{1, -1, 3}}};
      for (const auto& c : pool) {
        SatFormula f;
        f.existCount = k;
        f.varCount = 3;
        f.clauses = {c};
        family.push_back(f);
      }
      // Two-clause formulas at the larger dimension.
      for (std::size_t a = 0; a < 3; ++a) {
        SatFormula f;
        f.existCount = k;
        f.varCount = 3;
        f.clauses = {pool[a], pool[a + 3]};
        family.push_back(f);
      }
    }

    for (const auto& f : family) {
      auto [inst, threshold] = reduce_eafa3sat(f);
      const bool decided = decide_threshold(inst, threshold);
      const bool direct = cdflp::testing::exists_forall_unsatisfied(f);
      ++total;
      if (decided == direct) ++agreements;
      std::ostringstream line;
      line << "k=" << f.existCount << " n=" << f.varCount << " clauses=";
      for (const auto& c : f.clauses)
        line << "(" << c[0] << "," << c[1] << "," << c[2] << ")";
      line << " decided=" << decided << " direct=" << direct
           << (decided == direct ? "" : "  <-- DISAGREEMENT");
      reductionLog << line.str() << "\n";
      reduction.require(decided == direct, line.str());
    }
    reduction.note = std::to_string(agreements) + "/" + std::to_string(total) +
                     " formulas agree (>= 50 required; disagreements are the documented "
                     "upper-line deviation, see acceptance_reduction.txt)";
    reduction.require(total >= 50, "family too small");
  }

  // ---- model/search cross-check ----
  if (!registered_milp_backend()) {
    crossCheck.note = "SKIPPED: no MILP back-end registered";
  } else {
    crossCheck.note = "back-end: " + registered_milp_backend()->name();
    for (const auto& inst : crossCheckPool)
      for (SolveVariant variant : {SolveVariant::Optimistic, SolveVariant::Pessimistic}) {
        BilevelSolution bySearch =
            solve_bilevel(inst, variant, CutFamily::Tightened, MasterMode::Search);
        BilevelSolution byModel =
            solve_bilevel(inst, variant, CutFamily::Tightened, MasterMode::Model);
        crossCheck.require(bySearch.leaderProfit == byModel.leaderProfit &&
                               bySearch.yStar == byModel.yStar,
                           inst.name + ": modes disagree");
      }
  }

  // ---- report ----
  std::vector<Criterion*> all = {&oracleEquivalence, &cutValidity, &dominance,
                                 &noRepeat,          &reduction,   &metricProps,
                                 &rhoZeroClaim,      &directional, &crossCheck};
  int failed = 0;
  std::cout << "\n";
  for (const Criterion* c : all) {
    std::cout << (c->pass ? "PASS" : "FAIL") << "  " << c->name << "  [" << c->checks
              << " checks";
    if (c->violations > 0) std::cout << ", " << c->violations << " violations";
    std::cout << "]";
    if (!c->note.empty()) std::cout << "  -- " << c->note;
    std::cout << "\n";
    if (!c->pass) ++failed;
  }
  double totalS = std::chrono::duration<double>(std::chrono::steady_clock::now() - suiteStart)
                      .count();
  std::cout << "\n" << corpusConfigs.size() << " corpus instances, " << totalS
            << " s total\n";
  return failed;
}
