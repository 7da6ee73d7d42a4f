#pragma once

#include <functional>
#include <memory>
#include <optional>
#include <vector>

#include "cdflp/model.hpp"
#include "cdflp/search.hpp"

namespace cdflp {

struct backend_unavailable_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct tolerance_violation_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

inline constexpr double kBackendTolerance = 1e-6;

struct LazyHookResult {
  bool accept = false;
  std::vector<LinearBlock> addBlocks;
};

// Called on every integer-feasible incumbent before the back-end may accept
// it. backendFollowerValue is the follower objective as the back-end sees it
// (possibly from floating-point LP values); callers re-check it exactly.
using LazyHook = std::function<LazyHookResult(const MasterCandidate&, double backendFollowerValue)>;

// Contract for mathematical-programming masters. An implementation must
//  (a) solve the model to proven optimality over all installed constraints,
//  (b) surface every integer-feasible incumbent to the hook before accepting,
//  (c) honor LinearBlock additions returned by the hook from then on,
//  (d) work within a 1e-6 numeric tolerance; acceptance equalities are
//      confirmed by the caller against the exact simulator.
class MilpBackend {
 public:
  virtual ~MilpBackend() = default;
  virtual std::string name() const = 0;
  virtual std::optional<MasterCandidate> solve(const Instance& inst, const AbstractModel& model,
                                               const LazyHook& hook,
                                               const SearchLimits& limits) = 0;
};

// Bundled reference back-end: exhausts the integer points of the model in
// descending objective order. At integer schedules the remaining model
// variables are uniquely determined, so exhaustive enumeration over the
// schedule pairs is an exact solve. Installed blocks are checked by
// maximizing their auxiliaries (the block evaluation discipline).
class EnumerationMilpBackend : public MilpBackend {
 public:
  std::string name() const override { return "bundled-enumeration"; }

  std::optional<MasterCandidate> solve(const Instance& inst, const AbstractModel& model,
                                       const LazyHook& hook,
                                       const SearchLimits& limits) override {
    (void)model;  // objective and constraints coincide with the exact simulation
    std::vector<LinearBlock> blocks;
    std::vector<GeneratedCut> noCuts;
    auto acceptor = [&](const MasterCandidate& cand) {
      Assignment values;
      bool haveAssignment = false;
      for (const auto& block : blocks) {
        if (!haveAssignment) {
          values = deterministic_assignment(inst, cand.y, cand.z);
          haveAssignment = true;
        }
        if (!max_auxiliaries_then_check(block, values)) return AcceptorDecision::Reject;
      }
      LazyHookResult result = hook(cand, cand.followerValue.to_double());
      if (result.accept) return AcceptorDecision::Accept;
      for (auto& block : result.addBlocks) blocks.push_back(std::move(block));
      return AcceptorDecision::Reject;
    };
    SearchOutcome outcome = search_solve(inst, noCuts, acceptor, limits);
    return outcome.accepted;
  }
};

// One process-wide back-end slot, pre-filled with the bundled enumeration
// back-end. Registration is not synchronized: register before spawning
// concurrent solves.
inline std::shared_ptr<MilpBackend>& milp_backend_slot() {
  static std::shared_ptr<MilpBackend> slot = std::make_shared<EnumerationMilpBackend>();
  return slot;
}

inline std::shared_ptr<MilpBackend> registered_milp_backend() { return milp_backend_slot(); }

// Replaces the active back-end; nullptr leaves model mode unavailable.
inline void register_milp_backend(std::shared_ptr<MilpBackend> backend) {
  milp_backend_slot() = std::move(backend);
}

inline MasterCandidate model_solve(const Instance& inst, const AbstractModel& model,
                                   const LazyHook& hook, const SearchLimits& limits = {}) {
  auto backend = registered_milp_backend();
  if (!backend) throw backend_unavailable_error("no MILP back-end registered");
  auto result = backend->solve(inst, model, hook, limits);
  if (!result) throw std::logic_error("model_solve: back-end exhausted the model");
  return *result;
}

}  // namespace cdflp
