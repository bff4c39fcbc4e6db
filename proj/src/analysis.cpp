#include "pfcycle/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <ostream>

#include "pfcycle/detail/format.hpp"
#include "pfcycle/detail/parallel.hpp"
#include "pfcycle/errors.hpp"

namespace pfcycle {

namespace {

double phase_value(const Trajectory& traj, int k, std::int64_t m, int j) {
    return traj.values[static_cast<std::size_t>(m * k + j)];
}

std::int64_t complete_cycles(const Trajectory& traj, int k) {
    if (k < 1) fail(ErrorKind::Usage, "k must be >= 1");
    return traj.steps() / k;
}

}  // namespace

ContainmentReport containment(const Trajectory& traj, const PhaseCorridor& corridor, double epsilon) {
    const int k = corridor.k;
    if (!(epsilon > 0.0)) fail(ErrorKind::Usage, "containment: epsilon must be positive");
    if (traj.spec.k != k || !traj.spec.map.same_as(corridor.map) ||
        std::abs(traj.spec.nu - corridor.nu) > 1e-12 * corridor.nu)
        fail(ErrorKind::Usage, "containment: corridor was designed for a different (map, k, nu)");
    if (corridor.phases.size() != static_cast<std::size_t>(k)) fail(ErrorKind::Usage, "containment: corridor size");

    const std::int64_t M = complete_cycles(traj, k);
    if (M < 10) fail(ErrorKind::Usage, "containment: trajectory shorter than 10 cycles");

    const bool additive = corridor.kind == CorridorKind::Additive;
    auto inside = [&](std::int64_t m) {
        for (int j = 1; j <= k; ++j) {
            const double v = phase_value(traj, k, m, j);
            const auto& iv = corridor.phases[static_cast<std::size_t>(j - 1)];
            const bool ok = additive ? (v >= iv.lo && v <= iv.hi + epsilon)
                                     : (v > iv.lo - epsilon && v < iv.hi + epsilon);
            if (!ok) return false;
        }
        return true;
    };

    ContainmentReport rep;
    rep.kind = corridor.kind;
    rep.epsilon = epsilon;
    rep.cycles = M;

    std::vector<char> in(static_cast<std::size_t>(M));
    for (std::int64_t m = 0; m < M; ++m) in[static_cast<std::size_t>(m)] = inside(m);

    std::int64_t last_violation = -1;
    for (std::int64_t m = M - 1; m >= 0; --m)
        if (!in[static_cast<std::size_t>(m)]) {
            last_violation = m;
            break;
        }
    if (last_violation < M - 1) rep.entrance_m0 = last_violation + 1;

    for (std::int64_t m = 0; m < M; ++m)
        if (in[static_cast<std::size_t>(m)]) {
            rep.first_entry_m = m;
            break;
        }
    if (rep.first_entry_m)
        for (std::int64_t m = *rep.first_entry_m + 1; m < M; ++m)
            if (!in[static_cast<std::size_t>(m)]) ++rep.violations_after_entrance;

    const std::int64_t from = rep.entrance_m0.value_or(0);
    rep.phase_stats.resize(static_cast<std::size_t>(k));
    for (int j = 1; j <= k; ++j) {
        PhaseStats s{std::numeric_limits<double>::infinity(), -std::numeric_limits<double>::infinity(), 0.0};
        for (std::int64_t m = from; m < M; ++m) {
            const double v = phase_value(traj, k, m, j);
            s.min = std::min(s.min, v);
            s.max = std::max(s.max, v);
            s.mean += v;
        }
        s.mean /= static_cast<double>(M - from);
        rep.phase_stats[static_cast<std::size_t>(j - 1)] = s;
    }
    return rep;
}

std::vector<Interval> liminf_limsup(const Trajectory& traj, int k, std::int64_t transient_cycles) {
    const std::int64_t M = complete_cycles(traj, k);
    if (transient_cycles < 0 || transient_cycles >= M)
        fail(ErrorKind::Usage, "liminf_limsup: transient must be below the number of cycles");
    std::vector<Interval> out(static_cast<std::size_t>(k),
                              {std::numeric_limits<double>::infinity(), -std::numeric_limits<double>::infinity()});
    for (std::int64_t m = transient_cycles; m < M; ++m)
        for (int j = 1; j <= k; ++j) {
            auto& iv = out[static_cast<std::size_t>(j - 1)];
            const double v = phase_value(traj, k, m, j);
            iv.lo = std::min(iv.lo, v);
            iv.hi = std::max(iv.hi, v);
        }
    return out;
}

bool within_corridor(std::span<const Interval> extremes, const PhaseCorridor& corridor, double tol) {
    if (extremes.size() != corridor.phases.size()) fail(ErrorKind::Usage, "within_corridor: phase count mismatch");
    for (std::size_t j = 0; j < extremes.size(); ++j)
        if (extremes[j].lo < corridor.phases[j].lo - tol || extremes[j].hi > corridor.phases[j].hi + tol) return false;
    return true;
}

double CycleSummary::max_amplitude() const {
    return amplitude.empty() ? 0.0 : *std::max_element(amplitude.begin(), amplitude.end());
}

CycleSummary extract_cycle(const Trajectory& traj, int k, std::int64_t transient_cycles) {
    const std::int64_t M = complete_cycles(traj, k);
    if (transient_cycles < 0 || transient_cycles >= M)
        fail(ErrorKind::Usage, "extract_cycle: transient must be below the number of cycles");
    CycleSummary out;
    out.mean.assign(static_cast<std::size_t>(k), 0.0);
    out.amplitude.assign(static_cast<std::size_t>(k), 0.0);
    const double count = static_cast<double>(M - transient_cycles);
    for (int j = 1; j <= k; ++j) {
        double sum = 0.0;
        for (std::int64_t m = transient_cycles; m < M; ++m) sum += phase_value(traj, k, m, j);
        const double mean = sum / count;
        double dev = 0.0;
        for (std::int64_t m = transient_cycles; m < M; ++m) dev = std::max(dev, std::abs(phase_value(traj, k, m, j) - mean));
        out.mean[static_cast<std::size_t>(j - 1)] = mean;
        out.amplitude[static_cast<std::size_t>(j - 1)] = dev;
    }
    return out;
}

double separation_ratio(const CycleSummary& cycle) {
    std::vector<std::size_t> order(cycle.mean.size());
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](auto a, auto b) { return cycle.mean[a] < cycle.mean[b]; });
    double ratio = std::numeric_limits<double>::infinity();
    for (std::size_t i = 1; i < order.size(); ++i) {
        const double gap = cycle.mean[order[i]] - cycle.mean[order[i - 1]];
        const double amp = std::max(cycle.amplitude[order[i]], cycle.amplitude[order[i - 1]]);
        if (amp > 0.0) ratio = std::min(ratio, gap / amp);
        else if (gap == 0.0) ratio = 0.0;
    }
    return ratio;
}

const char* to_string(Branch branch) noexcept {
    switch (branch) {
        case Branch::Lower: return "lower";
        case Branch::Centre: return "centre";
        case Branch::Upper: return "upper";
    }
    return "?";
}

Branch branch_of(const Trajectory& traj, double K1, std::int64_t transient_steps) {
    if (transient_steps < 0 || transient_steps >= traj.steps()) fail(ErrorKind::Usage, "branch_of: bad transient");
    double sum = 0.0;
    for (std::int64_t n = transient_steps + 1; n <= traj.steps(); ++n) sum += traj.values[static_cast<std::size_t>(n)];
    const double mean = sum / static_cast<double>(traj.steps() - transient_steps);
    if (std::abs(mean - K1) <= 1e-12) return Branch::Centre;
    return mean > K1 ? Branch::Upper : Branch::Lower;
}

int count_distinct(std::span<const double> samples, double tol) {
    if (samples.empty()) return 0;
    std::vector<double> s(samples.begin(), samples.end());
    std::sort(s.begin(), s.end());
    int groups = 1;
    for (std::size_t i = 1; i < s.size(); ++i)
        if (s[i] - s[i - 1] > tol) ++groups;
    return groups;
}

const char* to_string(SweepParam param) noexcept {
    switch (param) {
        case SweepParam::C: return "c";
        case SweepParam::Nu: return "nu";
        case SweepParam::Ell1: return "ell1";
        case SweepParam::Ell2: return "ell2";
    }
    return "?";
}

SweepParam sweep_param_from_string(const std::string& name) {
    for (auto p : {SweepParam::C, SweepParam::Nu, SweepParam::Ell1, SweepParam::Ell2})
        if (name == to_string(p)) return p;
    fail(ErrorKind::Usage, "unknown sweep parameter '" + name + "' (expected c, nu, ell1 or ell2)");
}

double SweepSpec::value(int i) const {
    if (points <= 1) return from;
    return from + (to - from) * static_cast<double>(i) / static_cast<double>(points - 1);
}

X0Policy X0Policy::two_sided(double K1, int per_side, double lo, double hi) {
    if (per_side < 1 || !(lo < K1 && K1 < hi)) fail(ErrorKind::Usage, "two-sided x0 policy needs lo < K1 < hi");
    X0Policy p;
    for (int i = 1; i <= per_side; ++i) p.x0s.push_back(lo + (K1 - lo) * i / (per_side + 1));
    for (int i = 1; i <= per_side; ++i) p.x0s.push_back(K1 + (hi - K1) * i / (per_side + 1));
    return p;
}

namespace {

SystemSpec with_param(SystemSpec spec, SweepParam param, double v) {
    switch (param) {
        case SweepParam::C: spec.nu = 1.0 - v; break;
        case SweepParam::Nu: spec.nu = v; break;
        case SweepParam::Ell1: spec.ell1 = v; break;
        case SweepParam::Ell2: spec.ell2 = v; break;
    }
    return spec;
}

}  // namespace

BifurcationGrid bifurcate(const SystemSpec& base, const SweepSpec& sweep, const X0Policy& x0_policy, std::int64_t N,
                          const BifurcationOptions& options) {
    if (sweep.points < 1) fail(ErrorKind::Usage, "sweep needs at least one point");
    if (!std::isfinite(sweep.from) || !std::isfinite(sweep.to)) fail(ErrorKind::Usage, "sweep range must be finite");
    if (x0_policy.x0s.empty()) fail(ErrorKind::Usage, "sweep needs at least one initial value");
    if (options.samples < 1 || options.transient < 0 || N - options.samples < options.transient)
        fail(ErrorKind::Usage, "sweep: N must cover the transient plus the sampled tail");
    for (double end : {sweep.from, sweep.to}) {
        try {
            with_param(base, sweep.param, end).validate();
        } catch (const Error& e) {
            fail(ErrorKind::Usage, std::string("invalid sweep range: ") + e.what());
        }
    }

    BifurcationGrid grid{sweep, N, options.transient, options.samples, {}};
    const std::size_t nx = x0_policy.x0s.size();
    const std::size_t cells = static_cast<std::size_t>(sweep.points) * nx;
    grid.cells.resize(cells);
    detail::parallel_for(cells, options.threads, [&](std::size_t c) {
        const double pv = sweep.value(static_cast<int>(c / nx));
        const double x0 = x0_policy.x0s[c % nx];
        auto& cell = grid.cells[c];
        cell.param = pv;
        cell.x0 = x0;
        try {
            const auto traj = simulate(with_param(base, sweep.param, pv), x0, N, substream(options.noise, c));
            cell.samples.assign(traj.values.end() - options.samples, traj.values.end());
        } catch (const Error& e) {
            cell.diverged = true;
            cell.note = e.what();
        }
    });
    return grid;
}

void write_bifurcation_csv(std::ostream& out, const BifurcationGrid& grid) {
    out << "param,x0,sample_index,x\n";
    for (const auto& cell : grid.cells) {
        if (cell.diverged) continue;
        for (std::size_t i = 0; i < cell.samples.size(); ++i)
            out << detail::shortest(cell.param) << ',' << detail::shortest(cell.x0) << ',' << i << ','
                << detail::shortest(cell.samples[i]) << '\n';
    }
}

}  // namespace pfcycle
