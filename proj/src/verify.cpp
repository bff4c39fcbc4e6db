#include "pfcycle/verify.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "pfcycle/detail/format.hpp"
#include "pfcycle/errors.hpp"

namespace pfcycle {

namespace {

using detail::shortest;

CheckResult skipped(std::string name, std::string why) { return {std::move(name), CheckStatus::Skipped, std::move(why)}; }

CheckResult verdict(std::string name, bool ok, std::string detail) {
    return {std::move(name), ok ? CheckStatus::Pass : CheckStatus::Fail, std::move(detail)};
}

double min_width(const PhaseCorridor& c) {
    double w = c.phases.front().width();
    for (const auto& p : c.phases) w = std::min(w, p.width());
    return w;
}

std::int64_t tail_start(const RunConfig& config, const Trajectory& t) {
    const std::int64_t M = t.steps() / t.spec.k;
    return std::min<std::int64_t>(config.transient, M / 2);
}

void corridor_checks(VerifyReport& rep, const RunConfig& config, const PhaseCorridor& corridor,
                     std::span<const Trajectory> runs, const std::string& label) {
    const double eps = config.epsilon_fraction * min_width(corridor);
    int entered = 0;
    int clean = 0;
    int bounded = 0;
    for (const auto& t : runs) {
        const auto c = containment(t, corridor, eps);
        if (c.first_entry_m) ++entered;
        if (c.first_entry_m && c.violations_after_entrance == 0) ++clean;
        const auto ext = liminf_limsup(t, corridor.k, tail_start(config, t));
        if (within_corridor(ext, corridor, config.tail_tol)) ++bounded;
    }
    const int n = static_cast<int>(runs.size());
    auto frac = [n](int v) { return std::to_string(v) + "/" + std::to_string(n); };
    rep.checks.push_back(verdict(label + " entrance", entered == n, "runs entering the corridor: " + frac(entered) +
                                                                        " (epsilon " + shortest(eps) + ")"));
    rep.checks.push_back(verdict(label + " persistence", clean == n, "runs without exits after entrance: " + frac(clean)));
    rep.checks.push_back(verdict(label + " tail bounds", bounded == n,
                                 "runs with per-phase inf/sup inside the corridor (tol " + shortest(config.tail_tol) +
                                     "): " + frac(bounded)));
}

}  // namespace

const char* to_string(CheckStatus status) noexcept {
    switch (status) {
        case CheckStatus::Pass: return "PASS";
        case CheckStatus::Fail: return "FAIL";
        case CheckStatus::Skipped: return "SKIP";
    }
    return "?";
}

bool VerifyReport::any(CheckStatus status) const {
    return std::any_of(checks.begin(), checks.end(), [&](const auto& c) { return c.status == status; });
}

VerifyReport verify_runs(const RunConfig& config, const ResolvedSystem& system, std::span<const Trajectory> runs) {
    VerifyReport rep;
    if (runs.empty()) fail(ErrorKind::Usage, "verify: no runs");
    const auto& spec = system.spec;
    const auto& design = system.design;
    const std::string infeasible = "design infeasible: " + system.design_error;

    switch (spec.scheme) {
        case Scheme::DetPF: {
            if (!design) {
                rep.checks.push_back(skipped("cycle", infeasible));
                break;
            }
            double worst = 0.0;
            for (const auto& t : runs) {
                const auto cyc = extract_cycle(t, spec.k, tail_start(config, t));
                for (int j = 0; j < spec.k; ++j)
                    worst = std::max(worst, std::abs(cyc.mean[j] - design->cycle[j]) + cyc.amplitude[j]);
            }
            rep.checks.push_back(verdict("cycle", worst < 1e-6, "max deviation from the designed cycle " + shortest(worst)));
            break;
        }
        case Scheme::MultNoise: {
            if (!design) {
                rep.checks.push_back(skipped("multiplicative corridor", infeasible));
                break;
            }
            try {
                const auto mc = mult_corridor(*design, spec.ell1);
                corridor_checks(rep, config, mc.corridor, runs, "multiplicative corridor");
            } catch (const Error& e) {
                rep.checks.push_back(skipped("multiplicative corridor", e.what()));
            }
            break;
        }
        case Scheme::AddNoise: {
            if (!design) {
                rep.checks.push_back(skipped("additive corridor", infeasible));
                break;
            }
            try {
                const auto ac = add_corridor(*design, spec.ell2);
                corridor_checks(rep, config, ac.corridor, runs, "additive corridor");
            } catch (const Error& e) {
                rep.checks.push_back(skipped("additive corridor", e.what()));
            }
            break;
        }
        case Scheme::CombinedNoise: {
            int separated = 0;
            double worst = std::numeric_limits<double>::infinity();
            for (const auto& t : runs) {
                const double r = separation_ratio(extract_cycle(t, spec.k, tail_start(config, t)));
                worst = std::min(worst, r);
                if (r > config.separation) ++separated;
            }
            rep.checks.push_back(verdict("blurred cycle", separated == static_cast<int>(runs.size()),
                                         std::to_string(separated) + "/" + std::to_string(runs.size()) +
                                             " runs separated; smallest gap/amplitude ratio " + shortest(worst)));
            break;
        }
        case Scheme::ShiftedDetPF:
        case Scheme::ShiftedNoisy: {
            const Branch start = config.x0 > spec.K1 ? Branch::Upper : config.x0 < spec.K1 ? Branch::Lower : Branch::Centre;
            int kept = 0;
            for (const auto& t : runs) kept += branch_of(t, spec.K1, t.steps() / 2) == start;
            rep.checks.push_back(verdict("branch", kept == static_cast<int>(runs.size()),
                                         std::to_string(kept) + "/" + std::to_string(runs.size()) +
                                             " runs settle on the " + to_string(start) + " side of K1 = " +
                                             shortest(spec.K1) + " where x0 started"));
            break;
        }
    }
    return rep;
}

}  // namespace pfcycle
