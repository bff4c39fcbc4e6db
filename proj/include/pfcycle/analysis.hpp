#pragma once

// Post-run checks: corridor containment with exact entrance times, per-phase
// tail extremes, blurred-cycle extraction and bifurcation sweeps.
//
// Phase j of cycle m is the value x_{mk+j}, j = 1..k; a trajectory of N steps
// holds floor(N / k) complete cycles.

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "pfcycle/design.hpp"
#include "pfcycle/sim.hpp"

namespace pfcycle {

struct PhaseStats {
    double min = 0.0;
    double max = 0.0;
    double mean = 0.0;
};

struct ContainmentReport {
    CorridorKind kind = CorridorKind::Multiplicative;
    double epsilon = 0.0;
    std::int64_t cycles = 0;
    /// Smallest m such that every cycle m' >= m lies inside the widened
    /// corridor; empty when the final cycle is outside.
    std::optional<std::int64_t> entrance_m0;
    /// First cycle that lies inside.
    std::optional<std::int64_t> first_entry_m;
    /// Cycles after first_entry_m that leave the corridor again.
    std::int64_t violations_after_entrance = 0;
    /// Per phase, over cycles m >= entrance_m0 (all cycles if there is none).
    std::vector<PhaseStats> phase_stats;
};

/// Multiplicative corridors are widened to (lo - eps, hi + eps); additive ones
/// to [lo, hi + eps]. Throws Error(Usage) when the corridor was designed for a
/// different (map, k, nu), eps <= 0, or the run has fewer than 10 cycles.
ContainmentReport containment(const Trajectory& traj, const PhaseCorridor& corridor, double epsilon);

/// Per phase (inf, sup) of x_{mk+j} over cycles m >= transient_cycles.
std::vector<Interval> liminf_limsup(const Trajectory& traj, int k, std::int64_t transient_cycles);

/// True when every phase satisfies lo - tol <= inf and sup <= hi + tol.
bool within_corridor(std::span<const Interval> extremes, const PhaseCorridor& corridor, double tol);

struct CycleSummary {
    std::vector<double> mean;       ///< per phase
    std::vector<double> amplitude;  ///< per phase max |x - mean|

    double max_amplitude() const;
};

CycleSummary extract_cycle(const Trajectory& traj, int k, std::int64_t transient_cycles);

/// Smallest ratio, over neighbouring phase clusters sorted by mean, of the gap
/// between their means to the larger of their two amplitudes. Infinite for k = 1
/// or zero amplitudes.
double separation_ratio(const CycleSummary& cycle);

enum class Branch { Lower, Centre, Upper };
const char* to_string(Branch branch) noexcept;

/// Side of K1 on which the mean of x_n, n > transient_steps, lies (Centre
/// within 1e-12).
Branch branch_of(const Trajectory& traj, double K1, std::int64_t transient_steps);

/// Number of groups after sorting `samples` and splitting at gaps larger than tol.
int count_distinct(std::span<const double> samples, double tol);

enum class SweepParam { C, Nu, Ell1, Ell2 };
const char* to_string(SweepParam param) noexcept;
SweepParam sweep_param_from_string(const std::string& name);

struct SweepSpec {
    SweepParam param = SweepParam::C;
    double from = 0.0;
    double to = 0.0;
    int points = 1;

    double value(int i) const;
};

struct X0Policy {
    std::vector<double> x0s;

    static X0Policy fixed(double x0) { return {{x0}}; }
    /// `per_side` evenly spaced points inside (lo, K1) and inside (K1, hi).
    static X0Policy two_sided(double K1, int per_side, double lo = 0.0, double hi = 1.0);
};

struct BifurcationCell {
    double param = 0.0;
    double x0 = 0.0;
    std::vector<double> samples;  ///< the last T values
    bool diverged = false;
    std::string note;
};

struct BifurcationGrid {
    SweepSpec sweep;
    std::int64_t N = 0;
    std::int64_t transient = 0;
    int samples_per_cell = 0;
    std::vector<BifurcationCell> cells;  ///< parameter-major, x0-minor
};

struct BifurcationOptions {
    std::int64_t transient = 1000;
    int samples = 64;
    NoiseModel noise{};  ///< cell i uses substream(noise, i)
    int threads = 0;
};

/// Sweeps one parameter of `base`. N must leave `samples` values after the
/// transient. Throws Error(Usage) when a sweep end yields an invalid system.
BifurcationGrid bifurcate(const SystemSpec& base, const SweepSpec& sweep, const X0Policy& x0_policy, std::int64_t N,
                          const BifurcationOptions& options = {});

/// CSV with header `param,x0,sample_index,x`; diverged cells are omitted.
void write_bifurcation_csv(std::ostream& out, const BifurcationGrid& grid);

}  // namespace pfcycle
