#include "pfcycle/sim.hpp"

#include <cmath>
#include <ostream>

#include "pfcycle/detail/format.hpp"
#include "pfcycle/detail/parallel.hpp"
#include "pfcycle/errors.hpp"

namespace pfcycle {

namespace {

StepOutcome truncate(double v) {
    if (v < 0.0) return {0.0, true};
    return {v, false};
}

}  // namespace

const char* to_string(Scheme scheme) noexcept {
    switch (scheme) {
        case Scheme::DetPF: return "det";
        case Scheme::MultNoise: return "mult";
        case Scheme::AddNoise: return "add";
        case Scheme::CombinedNoise: return "combined";
        case Scheme::ShiftedDetPF: return "shifted_det";
        case Scheme::ShiftedNoisy: return "shifted_noisy";
    }
    return "?";
}

Scheme scheme_from_string(const std::string& name) {
    for (auto s : {Scheme::DetPF, Scheme::MultNoise, Scheme::AddNoise, Scheme::CombinedNoise, Scheme::ShiftedDetPF,
                   Scheme::ShiftedNoisy})
        if (name == to_string(s)) return s;
    fail(ErrorKind::Config, "unknown scheme '" + name + "'");
}

bool SystemSpec::noisy() const noexcept {
    return scheme == Scheme::MultNoise || scheme == Scheme::AddNoise || scheme == Scheme::CombinedNoise ||
           scheme == Scheme::ShiftedNoisy;
}

void SystemSpec::validate() const {
    auto bad = [](const std::string& what) { fail(ErrorKind::Parameter, what); };
    if (k < 1) bad("k must be >= 1");
    if (!(nu > 0.0 && nu <= 1.0)) bad("nu must lie in (0, 1]");
    if (!(ell1 >= 0.0) || !std::isfinite(ell1) || !(ell2 >= 0.0) || !std::isfinite(ell2))
        bad("noise amplitudes must be finite and non-negative");
    switch (scheme) {
        case Scheme::DetPF:
        case Scheme::ShiftedDetPF:
            if (ell1 != 0.0 || ell2 != 0.0) bad(std::string(to_string(scheme)) + " takes no noise amplitudes");
            break;
        case Scheme::MultNoise:
            if (ell2 != 0.0) bad("mult scheme takes no additive amplitude");
            break;
        case Scheme::AddNoise:
            if (ell1 != 0.0) bad("add scheme takes no multiplicative amplitude");
            break;
        default: break;
    }
    if ((scheme == Scheme::MultNoise || scheme == Scheme::CombinedNoise) && !(ell1 < nu))
        bad("multiplicative amplitude must stay below nu");
    if (shifted() && !(K1 > 0.0 && K1 <= map.domain_hi())) bad("shift centre K1 must lie in the map's domain");
}

StepOutcome step(const SystemSpec& spec, std::int64_t n, double x, double chi, std::optional<double> chi_additive) {
    const MapDef& f = spec.map;
    if (!spec.is_control_step(n)) return {f(x), false};
    const double chi_add = chi_additive.value_or(chi);
    switch (spec.scheme) {
        case Scheme::DetPF: return {f(spec.nu * x), false};
        case Scheme::MultNoise: return {f((spec.nu + spec.ell1 * chi) * x), false};
        case Scheme::AddNoise: return truncate(f(spec.nu * x) + spec.ell2 * chi_add);
        case Scheme::CombinedNoise: return truncate(f((spec.nu + spec.ell1 * chi) * x) + spec.ell2 * chi_add);
        case Scheme::ShiftedDetPF: return {f(spec.K1 + spec.nu * (x - spec.K1)), false};
        case Scheme::ShiftedNoisy: {
            const double gain = spec.nu + spec.ell1 * chi;
            return truncate(f(spec.K1 + gain * (x - spec.K1)) + spec.ell2 * chi_add);
        }
    }
    return {x, false};
}

std::vector<std::int64_t> Trajectory::control_steps() const {
    std::vector<std::int64_t> out;
    for (std::int64_t n = 0; n < steps(); n += spec.k) out.push_back(n);
    return out;
}

Trajectory simulate(const SystemSpec& spec, double x0, std::int64_t N, const NoiseModel& noise) {
    spec.validate();
    if (!(x0 > 0.0) || !std::isfinite(x0)) fail(ErrorKind::Parameter, "x0 must be positive");
    if (N < 1) fail(ErrorKind::Parameter, "N must be >= 1");

    Trajectory traj{spec, x0, noise, {}, 0, 0};
    traj.values.reserve(static_cast<std::size_t>(N) + 1);
    traj.values.push_back(x0);

    NoiseStream stream(noise);
    const bool noisy = spec.noisy();
    const bool two_draws = spec.independent_noises &&
                           (spec.scheme == Scheme::CombinedNoise || spec.scheme == Scheme::ShiftedNoisy);
    double x = x0;
    for (std::int64_t n = 0; n < N; ++n) {
        double chi = 0.0;
        std::optional<double> chi_add;
        if (noisy && spec.is_control_step(n)) {
            chi = stream.sample();
            if (two_draws) chi_add = stream.sample();
        }
        StepOutcome out;
        try {
            out = step(spec, n, x, chi, chi_add);
        } catch (const Error& e) {
            throw SimulationError(n + 1, "step " + std::to_string(n + 1) + ": " + e.what());
        }
        if (!std::isfinite(out.x) || out.x < 0.0)
            throw SimulationError(n + 1, "step " + std::to_string(n + 1) + ": non-finite or negative value " +
                                             detail::shortest(out.x));
        if (out.clamped) ++traj.clamp_count;
        x = out.x;
        traj.values.push_back(x);
    }
    traj.noise_draws = stream.draws();
    return traj;
}

std::vector<Trajectory> ensemble(const SystemSpec& spec, double x0, std::int64_t N, const NoiseModel& noise, int runs,
                                 int threads) {
    if (runs < 1) fail(ErrorKind::Parameter, "runs must be >= 1");
    std::vector<std::optional<Trajectory>> slots(static_cast<std::size_t>(runs));
    detail::parallel_for(slots.size(), threads,
                         [&](std::size_t i) { slots[i] = simulate(spec, x0, N, substream(noise, i)); });
    std::vector<Trajectory> out;
    out.reserve(slots.size());
    for (auto& s : slots) out.push_back(std::move(*s));
    return out;
}

std::vector<double> phase_map_sequence(const SystemSpec& spec, double z0, std::int64_t M, const NoiseModel& noise) {
    spec.validate();
    if (spec.scheme != Scheme::AddNoise) fail(ErrorKind::Usage, "phase map is defined for the add scheme");
    NoiseStream stream(noise);
    std::vector<double> z{z0};
    z.reserve(static_cast<std::size_t>(M) + 1);
    for (std::int64_t m = 0; m < M; ++m) {
        double g = spec.nu * z.back();
        for (int j = 0; j < spec.k; ++j) g = spec.map(g);
        z.push_back(std::max(g + spec.ell2 * stream.sample(), 0.0));
    }
    return z;
}

void write_trajectory_csv(std::ostream& out, std::span<const Trajectory> runs) {
    out << "run,n,x,controlled\n";
    for (std::size_t r = 0; r < runs.size(); ++r) {
        const auto& t = runs[r];
        for (std::int64_t n = 0; n <= t.steps(); ++n)
            out << r << ',' << n << ',' << detail::shortest(t.values[static_cast<std::size_t>(n)]) << ','
                << (t.controlled(n) ? 1 : 0) << '\n';
    }
}

}  // namespace pfcycle
