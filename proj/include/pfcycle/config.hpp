#pragma once

// Run configuration: an INI file with the sections below. Unknown keys are
// rejected so that typos do not silently fall back to defaults.
//
//   [map]     family, b, and the family's parameters (r | A, B, gamma)
//   [system]  scheme, k, exactly one of nu / x_star / x_hat, ell1, ell2,
//             K1 (number or "auto"), independent_noises
//   [noise]   kind, p, seed
//   [run]     x0, N, runs, transient, threads
//   [output]  directory, formats
//   [design]  ell, delta0, epsilon_fraction, tail_tol, separation
//   [sweep]   param, from, to, points, x0_policy, per_side, x0_lo, x0_hi,
//             transient, samples

#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "pfcycle/analysis.hpp"
#include "pfcycle/design.hpp"
#include "pfcycle/errors.hpp"
#include "pfcycle/sim.hpp"

namespace pfcycle {

struct SweepConfig {
    SweepParam param = SweepParam::C;
    double from = 0.0;
    double to = 0.9;
    int points = 181;
    std::string x0_policy = "fixed";  ///< fixed | two_sided
    int per_side = 10;
    double x0_lo = 0.0;
    double x0_hi = 1.0;
    std::int64_t transient = 1000;
    int samples = 64;
};

struct RunConfig {
    // [map]
    std::string family = "ricker";
    std::map<std::string, double> map_params;
    std::optional<double> b;

    // [system]
    Scheme scheme = Scheme::DetPF;
    int k = 1;
    std::optional<double> nu;
    std::optional<double> x_star;
    std::optional<double> x_hat;
    double ell1 = 0.0;
    double ell2 = 0.0;
    std::optional<double> K1;  ///< empty with K1 = auto
    bool K1_auto = false;
    bool independent_noises = false;

    // [noise]
    NoiseKind noise_kind = NoiseKind::UniformSym;
    double p = 0.5;
    std::uint64_t seed = 1;

    // [run]
    double x0 = 0.5;
    std::int64_t N = 1000;
    int runs = 5;
    std::int64_t transient = 100;  ///< cycles skipped by tail statistics
    int threads = 0;

    // [output]
    std::string directory = "out";
    std::vector<std::string> formats{"csv"};

    // [design]
    std::optional<double> ell;
    std::optional<double> delta0;
    double epsilon_fraction = 0.1;
    double tail_tol = 1e-3;
    double separation = 5.0;

    std::optional<SweepConfig> sweep;

    /// Throws Error(Config) on inconsistent values.
    void validate() const;
    bool wants(const std::string& format) const;
};

RunConfig parse_config(std::istream& in);
RunConfig load_config(const std::string& path);

/// Canonical INI text; parse_config(dump_config(c)) reproduces c exactly.
std::string dump_config(const RunConfig& config);

MapDef build_map(const RunConfig& config);

/// Threshold b from the config, else default_b(map).
double resolve_b(const RunConfig& config, const MapDef& map);

/// First positive fixed point of f found on a uniform scan of (0, domain].
double first_positive_fixed_point(const MapDef& map);

/// The controlled system and, for the unshifted schemes, the cycle design it
/// realizes. When the target cannot be designed, `design` is empty and
/// `design_error` explains why; `spec` is still usable when nu was given.
struct ResolvedSystem {
    SystemSpec spec;
    std::optional<ControlDesign> design;
    std::string design_error;
    ErrorKind design_error_kind = ErrorKind::Design;
};

ResolvedSystem resolve_system(const RunConfig& config);

NoiseModel noise_model(const RunConfig& config);

}  // namespace pfcycle
