#pragma once

// Controlled recursions. Control fires at step n when k divides n (n = 0, k,
// 2k, ...); all other steps apply plain f. The noisy schemes draw chi only at
// control steps, so trajectories of different length share their prefix.
//
//   DetPF          x' = f(nu x)
//   MultNoise      x' = f((nu + l1 chi) x)
//   AddNoise       x' = max{f(nu x) + l2 chi, 0}
//   CombinedNoise  x' = max{f((nu + l1 chi) x) + l2 chi, 0}
//   ShiftedDetPF   x' = f(K1 + nu (x - K1))
//   ShiftedNoisy   x' = max{f(K1 + (nu + l1 chi)(x - K1)) + l2 chi, 0}

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "pfcycle/maps.hpp"
#include "pfcycle/noise.hpp"

namespace pfcycle {

enum class Scheme { DetPF, MultNoise, AddNoise, CombinedNoise, ShiftedDetPF, ShiftedNoisy };

const char* to_string(Scheme scheme) noexcept;
Scheme scheme_from_string(const std::string& name);

struct SystemSpec {
    Scheme scheme = Scheme::DetPF;
    MapDef map;
    int k = 1;
    double nu = 1.0;
    double ell1 = 0.0;  ///< multiplicative amplitude
    double ell2 = 0.0;  ///< additive amplitude
    double K1 = 0.0;    ///< shift centre (shifted schemes)
    /// Combined/ShiftedNoisy: draw separate chi for the additive term.
    bool independent_noises = false;

    /// Throws Error(Parameter) on inconsistent parameters.
    void validate() const;
    bool noisy() const noexcept;
    bool shifted() const noexcept { return scheme == Scheme::ShiftedDetPF || scheme == Scheme::ShiftedNoisy; }
    bool is_control_step(std::int64_t n) const noexcept { return n % k == 0; }
};

struct StepOutcome {
    double x = 0.0;
    bool clamped = false;  ///< max{., 0} truncation was active
};

/// One application of the scheme at step n. `chi_additive` defaults to `chi`.
StepOutcome step(const SystemSpec& spec, std::int64_t n, double x, double chi = 0.0,
                 std::optional<double> chi_additive = std::nullopt);

struct Trajectory {
    SystemSpec spec;
    double x0 = 0.0;
    NoiseModel noise;
    std::vector<double> values;  ///< x_0 .. x_N
    std::uint64_t clamp_count = 0;
    std::uint64_t noise_draws = 0;

    std::int64_t steps() const noexcept { return static_cast<std::int64_t>(values.size()) - 1; }
    /// True when x_{n+1} was produced by the control branch.
    bool controlled(std::int64_t n) const noexcept { return n < steps() && spec.is_control_step(n); }
    std::vector<std::int64_t> control_steps() const;
};

/// Throws SimulationError (with the step index) on non-finite values or
/// evaluations outside the map's domain.
Trajectory simulate(const SystemSpec& spec, double x0, std::int64_t N, const NoiseModel& noise);

/// Run i uses substream(noise, i). `threads` = 0 picks the hardware
/// concurrency; results do not depend on it.
std::vector<Trajectory> ensemble(const SystemSpec& spec, double x0, std::int64_t N, const NoiseModel& noise, int runs,
                                 int threads = 0);

/// z_{m+1} = max{f^k(nu z_m) + l2 chi_{m+1}, 0}, m = 0..M-1, drawing chi from
/// the same stream layout as simulate() for an AddNoise spec.
std::vector<double> phase_map_sequence(const SystemSpec& spec, double z0, std::int64_t M, const NoiseModel& noise);

/// CSV with header `run,n,x,controlled`; x in shortest round-trip form.
void write_trajectory_csv(std::ostream& out, std::span<const Trajectory> runs);

}  // namespace pfcycle
