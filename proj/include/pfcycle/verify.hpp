#pragma once

// Corridor, cycle and branch checks over a seeded ensemble, as run by `pfcycle verify`.

#include <span>
#include <string>
#include <vector>

#include "pfcycle/config.hpp"

namespace pfcycle {

enum class CheckStatus { Pass, Fail, Skipped };
const char* to_string(CheckStatus status) noexcept;

struct CheckResult {
    std::string name;
    CheckStatus status = CheckStatus::Skipped;
    std::string detail;
};

struct VerifyReport {
    std::vector<CheckResult> checks;

    bool any(CheckStatus status) const;
    /// Every check passed and none was skipped.
    bool all_passed() const { return !checks.empty() && !any(CheckStatus::Fail) && !any(CheckStatus::Skipped); }
};

/// Runs the checks that apply to the configured scheme against `runs`.
///   det            cycle means match the designed cycle to 1e-6
///   mult           corridor entrance, no later exits, tail bounds within tail_tol
///   add            additive corridor tail bounds within tail_tol, entrance
///   combined       phase clusters separated by `separation` x their amplitude
///   shifted_*      every run settles on the side of K1 where x0 lies
/// Checks needing a design are Skipped when the design is infeasible.
VerifyReport verify_runs(const RunConfig& config, const ResolvedSystem& system, std::span<const Trajectory> runs);

}  // namespace pfcycle
