// Command-line front door: generate benchmark instances, solve them with the
// branch-and-cut style masters or the brute-force oracle, reduce quantified
// 3SAT formulas to instances, cross-check solvers, and tabulate metrics.

#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "cdflp/generator.hpp"
#include "cdflp/metrics.hpp"
#include "cdflp/sat_reduction.hpp"
#include "cdflp/solver.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace cdflp;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitBadInput = 1;
constexpr int kExitCapExceeded = 2;
constexpr int kExitMismatch = 3;

std::int64_t effective_cap(std::optional<std::int64_t> flagCap) {
  if (flagCap) return *flagCap;
  if (const char* env = std::getenv("CDFLP_CAP")) return std::stoll(env);
  return kDefaultScheduleCap;
}

json load_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  json j;
  in >> j;
  return j;
}

void write_text(const std::string& path, const std::string& text) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << text;
}

Instance load_instance(const std::string& path) {
  Instance inst = instance_from_json(load_json(path));
  auto errors = validate_instance(inst);
  if (!errors.empty())
    throw std::runtime_error(path + ": invalid instance: " + errors.front().message);
  return inst;
}

SolveVariant parse_variant(const std::string& s) {
  if (s == "optimistic") return SolveVariant::Optimistic;
  if (s == "pessimistic") return SolveVariant::Pessimistic;
  throw std::runtime_error("unknown variant: " + s);
}

CutFamily parse_family(const std::string& s) {
  if (s == "tailored") return CutFamily::Tailored;
  if (s == "tightened") return CutFamily::Tightened;
  throw std::runtime_error("unknown cut family: " + s);
}

MasterMode parse_mode(const std::string& s) {
  if (s == "search") return MasterMode::Search;
  if (s == "model") return MasterMode::Model;
  throw std::runtime_error("unknown mode: " + s);
}

std::vector<std::uint64_t> parse_seeds(const std::string& rangeText) {
  auto dots = rangeText.find("..");
  if (dots == std::string::npos) return {std::stoull(rangeText)};
  std::uint64_t lo = std::stoull(rangeText.substr(0, dots));
  std::uint64_t hi = std::stoull(rangeText.substr(dots + 2));
  if (hi < lo) throw std::runtime_error("bad seed range: " + rangeText);
  std::vector<std::uint64_t> seeds;
  for (std::uint64_t s = lo; s <= hi; ++s) seeds.push_back(s);
  return seeds;
}

json run_record(const std::string& instancePath, const Instance& inst,
                const BilevelSolution& sol, double wallMs, const std::string& cuts = "",
                const std::string& mode = "") {
  json j = solution_to_json(sol);
  j["instance"] = instancePath;
  j["instanceName"] = inst.name;
  if (!cuts.empty()) j["cuts"] = cuts;
  if (!mode.empty()) j["mode"] = mode;
  j["wallMs"] = wallMs;
  return j;
}

struct Stopwatch {
  std::chrono::steady_clock::time_point start = std::chrono::steady_clock::now();
  double ms() const {
    return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start)
        .count();
  }
};

int cmd_gen(const std::string& configPath, const std::string& seedSpec,
            const std::string& outDir) {
  GenConfig base = config_from_json(load_json(configPath));
  {
    auto errors = validate_config(base);
    if (!errors.empty()) throw std::runtime_error("config: " + errors.front().message);
  }
  fs::create_directories(outDir);
  std::string manifest = manifest_header() + "\n";
  for (std::uint64_t seed : parse_seeds(seedSpec)) {
    GenConfig cfg = base;
    cfg.seed = seed;
    Instance inst = generate_synthetic(cfg);
    std::string file = inst.name + ".json";
    write_text((fs::path(outDir) / file).string(), instance_to_json(inst).dump(2) + "\n");
    manifest += manifest_row(cfg, inst, file) + "\n";
    std::cout << "wrote " << (fs::path(outDir) / file).string() << "\n";
  }
  write_text((fs::path(outDir) / "manifest.csv").string(), manifest);
  return kExitOk;
}

int cmd_solve(const std::string& instancePath, const std::string& variant,
              const std::string& cuts, const std::string& mode, const std::string& outPath,
              const std::string& tracePath, std::optional<std::int64_t> cap, bool bothCuts) {
  Instance inst = load_instance(instancePath);
  SolverConfig config;
  config.scheduleCap = effective_cap(cap);
  config.bothCutFamilies = bothCuts;
  std::vector<CutTraceEntry> trace;
  if (!tracePath.empty()) config.cutTrace = &trace;

  Stopwatch clock;
  BilevelSolution sol = solve_bilevel(inst, parse_variant(variant), parse_family(cuts),
                                      parse_mode(mode), config);
  json record = run_record(instancePath, inst, sol, clock.ms(), cuts, mode);
  if (!outPath.empty()) write_text(outPath, record.dump(2) + "\n");
  std::cout << record.dump(2) << "\n";

  if (!tracePath.empty()) {
    json cutsJson = json::array();
    for (const auto& entry : trace) {
      json c = cut_to_json(entry.cut);
      c["rejectedLeader"] = schedule_to_json(entry.rejectedLeader);
      c["rejectedFollower"] = schedule_to_json(entry.rejectedFollower);
      cutsJson.push_back(c);
    }
    write_text(tracePath, cutsJson.dump(2) + "\n");
  }
  return kExitOk;
}

int cmd_oracle(const std::string& instancePath, const std::string& variant,
               const std::string& outPath, std::optional<std::int64_t> cap) {
  Instance inst = load_instance(instancePath);
  Stopwatch clock;
  BilevelSolution sol = brute_force_oracle(inst, parse_variant(variant), effective_cap(cap));
  json record = run_record(instancePath, inst, sol, clock.ms());
  if (!outPath.empty()) write_text(outPath, record.dump(2) + "\n");
  std::cout << record.dump(2) << "\n";
  return kExitOk;
}

int cmd_coop(const std::string& instancePath, const std::string& outPath,
             std::optional<std::int64_t> cap) {
  Instance inst = load_instance(instancePath);
  Stopwatch clock;
  BilevelSolution sol = solve_cooperative(inst, effective_cap(cap));
  json record = run_record(instancePath, inst, sol, clock.ms());
  if (!outPath.empty()) write_text(outPath, record.dump(2) + "\n");
  std::cout << record.dump(2) << "\n";
  return kExitOk;
}

int cmd_monopoly(const std::string& instancePath, const std::string& truth,
                 const std::string& outPath, std::optional<std::int64_t> cap) {
  Instance inst = load_instance(instancePath);
  Stopwatch clock;
  BilevelSolution sol = monopolistic_heuristic(inst, parse_variant(truth), effective_cap(cap));
  json record = run_record(instancePath, inst, sol, clock.ms());
  record["truth"] = truth;
  if (!outPath.empty()) write_text(outPath, record.dump(2) + "\n");
  std::cout << record.dump(2) << "\n";
  return kExitOk;
}

int cmd_reduce_sat(const std::string& formulaPath, const std::string& outPath,
                   const std::string& thresholdOut) {
  std::ifstream in(formulaPath);
  if (!in) throw std::runtime_error("cannot open " + formulaPath);
  SatFormula f = parse_formula(in);
  auto [inst, threshold] = reduce_eafa3sat(f);
  write_text(outPath, instance_to_json(inst).dump(2) + "\n");
  std::cout << "threshold " << threshold.to_string() << "\n";
  if (!thresholdOut.empty())
    write_text(thresholdOut, rational_to_json(threshold).dump(2) + "\n");
  return kExitOk;
}

int cmd_verify(const std::string& instancePath, std::optional<std::int64_t> cap) {
  Instance inst = load_instance(instancePath);
  const std::int64_t limit = effective_cap(cap);
  bool allEqual = true;
  for (SolveVariant variant : {SolveVariant::Optimistic, SolveVariant::Pessimistic}) {
    BilevelSolution oracle = brute_force_oracle(inst, variant, limit);
    for (CutFamily family : {CutFamily::Tailored, CutFamily::Tightened})
      for (MasterMode mode : {MasterMode::Search, MasterMode::Model}) {
        SolverConfig config;
        config.scheduleCap = limit;
        BilevelSolution sol = solve_bilevel(inst, variant, family, mode, config);
        const bool match = sol.leaderProfit == oracle.leaderProfit &&
                           sol.followerProfit == oracle.followerProfit;
        std::cout << variant_name(variant) << " "
                  << (family == CutFamily::Tailored ? "tailored" : "tightened") << " "
                  << (mode == MasterMode::Search ? "search" : "model") << ": "
                  << sol.leaderProfit.to_string() << " vs oracle "
                  << oracle.leaderProfit.to_string() << (match ? " OK" : " MISMATCH") << "\n";
        if (!match) allEqual = false;
      }
  }
  return allEqual ? kExitOk : kExitMismatch;
}

// One row per derivable metric for every solved instance found in the
// directory: service quality per run, plus opportunity gap and price of
// competition whenever the needed runs are present together.
int cmd_metrics(const std::string& solutionsDir, const std::string& outPath) {
  struct Record {
    json j;
    std::string variant;
  };
  std::map<std::string, std::vector<Record>> byInstance;
  for (const auto& entry : fs::directory_iterator(solutionsDir)) {
    if (entry.path().extension() != ".json") continue;
    json j = load_json(entry.path().string());
    if (!j.contains("variant") || !j.contains("instance")) continue;
    byInstance[j.value("instanceName", entry.path().stem().string())].push_back(
        {j, j["variant"].get<std::string>()});
  }

  auto resolve_instance = [&](const json& record) -> Instance {
    std::string stored = record["instance"].get<std::string>();
    for (const fs::path& candidate :
         {fs::path(stored), fs::path(solutionsDir) / stored,
          fs::path(solutionsDir) / fs::path(stored).filename()})
      if (fs::exists(candidate)) return load_instance(candidate.string());
    throw std::runtime_error("cannot locate instance file " + stored);
  };

  std::string csv = metrics_csv_header() + "\n";
  for (const auto& [name, records] : byInstance) {
    std::optional<Rational> optimisticExact, pessimisticExact, coopJoint, coopLeader,
        coopFollower, optimisticFollower;
    std::map<std::string, Rational> heuristicByTruth;
    for (const auto& r : records) {
      Rational leader = rational_from_json(r.j["leaderProfit"]);
      Rational follower = rational_from_json(r.j["followerProfit"]);
      if (r.variant == "optimistic" && r.j.value("proofOfOptimality", false)) {
        optimisticExact = leader;
        optimisticFollower = follower;
      }
      if (r.variant == "pessimistic" && r.j.value("proofOfOptimality", false))
        pessimisticExact = leader;
      if (r.variant == "cooperative") {
        coopJoint = leader + follower;
        coopLeader = leader;
        coopFollower = follower;
      }
      if (r.variant == "monopolistic-heuristic")
        heuristicByTruth[r.j.value("truth", "optimistic")] = leader;

      // Service quality of the solved pair.
      Instance inst = resolve_instance(r.j);
      JointOutcome outcome = simulate_outcome(inst, schedule_from_json(r.j["y"]),
                                              schedule_from_json(r.j["z"]));
      ServiceQuality q = service_quality(outcome, inst);
      csv += metrics_csv_row(name, "avg-captures:" + r.variant, q.avgCaptures) + "\n";
      csv += metrics_csv_row(name, "demand-captured-pct:" + r.variant, q.demandCapturedPct) +
             "\n";
    }
    if (optimisticExact && heuristicByTruth.count("optimistic"))
      csv += metrics_csv_row(name, "opportunity-gap:optimistic",
                             opportunity_gap(*optimisticExact,
                                             heuristicByTruth["optimistic"])) +
             "\n";
    if (pessimisticExact && heuristicByTruth.count("pessimistic"))
      csv += metrics_csv_row(name, "opportunity-gap:pessimistic",
                             opportunity_gap(*pessimisticExact,
                                             heuristicByTruth["pessimistic"])) +
             "\n";
    if (coopJoint && optimisticExact && optimisticFollower)
      csv += metrics_csv_row(name, "price-of-competition",
                             price_of_competition(*coopJoint, *optimisticExact,
                                                  *optimisticFollower)) +
             "\n";
  }
  write_text(outPath, csv);
  std::cout << "wrote " << outPath << "\n";
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"competitive dynamic facility location under cumulative demand"};
  app.require_subcommand(1);

  std::string configPath, seedSpec = "1..1", outDir = ".";
  auto* gen = app.add_subcommand("gen", "generate synthetic instances");
  gen->add_option("--config", configPath, "generator config json")->required();
  gen->add_option("--seeds", seedSpec, "seed or range, e.g. 1..5");
  gen->add_option("--seed", seedSpec, "single seed (overrides --seeds)");
  gen->add_option("--out", outDir, "output directory")->required();

  std::string instancePath, variant = "optimistic", cuts = "tightened", mode = "search";
  std::string outPath, tracePath, truth = "optimistic";
  std::optional<std::int64_t> cap;
  bool bothCuts = false;

  auto* solve = app.add_subcommand("solve", "exact bilevel solve with value-function cuts");
  solve->add_option("--instance", instancePath, "instance json")->required();
  solve->add_option("--variant", variant, "optimistic|pessimistic");
  solve->add_option("--cuts", cuts, "tailored|tightened");
  solve->add_option("--mode", mode, "search|model");
  solve->add_option("--out", outPath, "solution json");
  solve->add_option("--trace", tracePath, "dump generated cuts to json");
  solve->add_option("--cap", cap, "enumeration cap per player");
  solve->add_flag("--both-cuts", bothCuts, "emit both cut families per rejection");

  auto* oracle = app.add_subcommand("oracle", "brute-force bilevel reference");
  oracle->add_option("--instance", instancePath, "instance json")->required();
  oracle->add_option("--variant", variant, "optimistic|pessimistic");
  oracle->add_option("--out", outPath, "solution json");
  oracle->add_option("--cap", cap, "enumeration cap per player");

  auto* coop = app.add_subcommand("coop", "joint-profit cooperative solve");
  coop->add_option("--instance", instancePath, "instance json")->required();
  coop->add_option("--out", outPath, "solution json");
  coop->add_option("--cap", cap, "enumeration cap per player");

  auto* monopoly = app.add_subcommand("monopoly", "monopolistic heuristic");
  monopoly->add_option("--instance", instancePath, "instance json")->required();
  monopoly->add_option("--truth", truth, "follower behaviour: optimistic|pessimistic");
  monopoly->add_option("--out", outPath, "solution json");
  monopoly->add_option("--cap", cap, "enumeration cap per player");

  std::string solutionsDir, formulaPath, thresholdOut;
  auto* metrics = app.add_subcommand("metrics", "tabulate metrics from solution files");
  metrics->add_option("--solutions", solutionsDir, "directory of solution json files")
      ->required();
  metrics->add_option("--out", outPath, "report csv")->required();

  auto* reduceSat = app.add_subcommand("reduce-sat", "quantified 3SAT to instance gadget");
  reduceSat->add_option("--formula", formulaPath, "formula file: 'k n m' then m clauses")
      ->required();
  reduceSat->add_option("--out", outPath, "instance json")->required();
  reduceSat->add_option("--threshold-out", thresholdOut, "write threshold json");

  auto* verify = app.add_subcommand("verify", "oracle vs both cut families and modes");
  verify->add_option("--instance", instancePath, "instance json")->required();
  verify->add_option("--cap", cap, "enumeration cap per player");

  CLI11_PARSE(app, argc, argv);

  try {
    if (gen->parsed()) return cmd_gen(configPath, seedSpec, outDir);
    if (solve->parsed())
      return cmd_solve(instancePath, variant, cuts, mode, outPath, tracePath, cap, bothCuts);
    if (oracle->parsed()) return cmd_oracle(instancePath, variant, outPath, cap);
    if (coop->parsed()) return cmd_coop(instancePath, outPath, cap);
    if (monopoly->parsed()) return cmd_monopoly(instancePath, truth, outPath, cap);
    if (metrics->parsed()) return cmd_metrics(solutionsDir, outPath);
    if (reduceSat->parsed()) return cmd_reduce_sat(formulaPath, outPath, thresholdOut);
    if (verify->parsed()) return cmd_verify(instancePath, cap);
  } catch (const cap_exceeded_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitCapExceeded;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitBadInput;
  }
  return kExitBadInput;
}
