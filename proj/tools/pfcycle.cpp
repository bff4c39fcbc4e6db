// pfcycle: design, simulate, sweep and verify proportional-feedback cycles
// from an INI run configuration. Exit codes: 0 ok, 2 configuration or usage
// error, 3 infeasible design, 4 numeric failure, 5 verification failure.

#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "pfcycle/config.hpp"
#include "pfcycle/detail/format.hpp"
#include "pfcycle/verify.hpp"
#include "svg.hpp"

namespace fs = std::filesystem;
using json = nlohmann::ordered_json;
using namespace pfcycle;
using detail::shortest;

namespace {

enum Exit { kOk = 0, kConfig = 2, kInfeasible = 3, kNumeric = 4, kVerifyFailed = 5 };

int exit_code(ErrorKind kind) {
    switch (kind) {
        case ErrorKind::Config:
        case ErrorKind::Usage: return kConfig;
        case ErrorKind::Range:
        case ErrorKind::Certification:
        case ErrorKind::Design:
        case ErrorKind::NoiseBound:
        case ErrorKind::Parameter: return kInfeasible;
        case ErrorKind::Domain:
        case ErrorKind::Numeric: return kNumeric;
    }
    return kNumeric;
}

struct Options {
    std::string config_path;
    std::optional<std::uint64_t> seed;
    std::optional<std::string> out;
    std::optional<std::string> format;
    std::optional<int> threads;
    bool dump = false;
    std::optional<std::string> param;
    std::optional<double> from, to;
    std::optional<int> points;
};

RunConfig effective_config(const Options& o) {
    RunConfig c = load_config(o.config_path);
    if (o.seed) c.seed = *o.seed;
    if (o.out) c.directory = *o.out;
    if (o.threads) c.threads = *o.threads;
    if (o.format) {
        c.formats.clear();
        std::stringstream ss(*o.format);
        for (std::string f; std::getline(ss, f, ',');)
            if (!f.empty()) c.formats.push_back(f);
    }
    if (o.param || o.from || o.to || o.points) {
        SweepConfig w = c.sweep.value_or(SweepConfig{});
        if (o.param) w.param = sweep_param_from_string(*o.param);
        if (o.from) w.from = *o.from;
        if (o.to) w.to = *o.to;
        if (o.points) w.points = *o.points;
        c.sweep = w;
    }
    c.validate();
    return c;
}

fs::path output_dir(const RunConfig& c) {
    fs::path dir(c.directory);
    fs::create_directories(dir);
    return dir;
}

std::ofstream open_out(const fs::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error(ErrorKind::Config, "cannot write " + path.string());
    return out;
}

void warn_noise(const RunConfig& c, const SystemSpec& spec) {
    if (spec.noisy() && !noise_model(c).zero_mean())
        std::cerr << "warning: two-point noise with p = " << shortest(c.p)
                  << " has non-zero mean; the corridor results assume centred noise\n";
}

json interval_list(const std::vector<Interval>& v) {
    json a = json::array();
    for (const auto& i : v) a.push_back({i.lo, i.hi});
    return a;
}

std::string title_for(const RunConfig& c, const SystemSpec& s) {
    std::string t = c.family + ", " + to_string(s.scheme) + ", k=" + std::to_string(s.k) + ", nu=" + shortest(s.nu);
    if (s.ell1 > 0) t += ", l1=" + shortest(s.ell1);
    if (s.ell2 > 0) t += ", l2=" + shortest(s.ell2);
    return t;
}

// Corridor to draw over the trajectories, when the theory supplies one.
std::optional<PhaseCorridor> plot_corridor(const RunConfig& c, const ResolvedSystem& sys) {
    if (!sys.design) return std::nullopt;
    try {
        if (sys.spec.scheme == Scheme::MultNoise) return mult_corridor(*sys.design, sys.spec.ell1).corridor;
        if (sys.spec.scheme == Scheme::AddNoise) return add_corridor(*sys.design, sys.spec.ell2).corridor;
        if (c.ell) return mult_corridor(*sys.design, *c.ell).corridor;
    } catch (const Error&) {
    }
    return std::nullopt;
}

int cmd_design(const RunConfig& c) {
    const auto sys = resolve_system(c);
    if (!sys.design) {
        std::cerr << "design: " << (sys.spec.shifted() ? sys.design_error : "infeasible: " + sys.design_error) << '\n';
        return kInfeasible;
    }
    const auto& d = *sys.design;
    const auto& chain = d.chain();
    const auto bound = max_delta0_bound(d);

    json j;
    j["map"] = {{"family", c.family}, {"params", c.map_params}};
    j["b"] = chain.b();
    j["k"] = d.k();
    j["f_b"] = chain.f_b();
    j["b_k"] = chain.b_k();
    j["psi_zero"] = d.psi.psi_zero();
    j["psi_bk"] = d.psi.psi_bk();
    j["nu"] = d.nu;
    j["x_hat"] = d.x_hat;
    j["x_star"] = d.x_star;
    j["cycle"] = d.cycle;
    j["ell_max"] = max_mult_noise(d);
    j["delta0"] = {{"value", bound.value},
                   {"edge_margin", bound.edge_margin},
                   {"peak_gap", bound.peak_gap},
                   {"peak_x", bound.peak_x}};

    std::cout << "map        " << c.family;
    for (const auto& [k, v] : c.map_params) std::cout << ' ' << k << '=' << shortest(v);
    std::cout << "\nb          " << shortest(chain.b()) << "\nk          " << d.k() << "\nf(b)       "
              << shortest(chain.f_b()) << "\nb_k        " << shortest(chain.b_k()) << "\ngain range ("
              << shortest(d.psi.psi_zero()) << ", " << shortest(d.psi.psi_bk()) << ")\nnu         " << shortest(d.nu)
              << "\nx_hat      " << shortest(d.x_hat) << "\nx_star     " << shortest(d.x_star) << "\ncycle     ";
    for (double v : d.cycle) std::cout << ' ' << shortest(v);
    std::cout << "\nell_max    " << shortest(max_mult_noise(d)) << "\ndelta0_max " << shortest(bound.value) << '\n';

    // Corridor amplitudes default to the configured noise levels.
    std::optional<double> ell = c.ell, delta0 = c.delta0;
    if (!ell && c.ell1 > 0) ell = c.ell1;
    if (!delta0 && c.ell2 > 0) delta0 = c.ell2;
    int code = kOk;
    if (ell) {
        try {
            const auto mc = mult_corridor(d, *ell);
            j["mult_corridor"] = {{"ell", mc.ell}, {"y_lo", mc.y_lo}, {"y_hi", mc.y_hi},
                                  {"phases", interval_list(mc.corridor.phases)}};
            std::cout << "mult corridor ell=" << shortest(mc.ell) << " y in [" << shortest(mc.y_lo) << ", "
                      << shortest(mc.y_hi) << "]\n";
        } catch (const Error& e) {
            std::cerr << "design: " << e.what() << '\n';
            code = kInfeasible;
        }
    }
    if (delta0) {
        try {
            const auto ac = add_corridor(d, *delta0);
            j["add_corridor"] = {{"delta0", ac.delta0}, {"y1", ac.y1}, {"y2", ac.y2},
                                 {"y3", ac.y3 ? json(*ac.y3) : json(nullptr)}, {"x_hat1", ac.x_hat1},
                                 {"x_hat2", ac.x_hat2}, {"phases", interval_list(ac.corridor.phases)}};
            std::cout << "add corridor delta0=" << shortest(ac.delta0) << " x_hat in [" << shortest(ac.x_hat1) << ", "
                      << shortest(ac.x_hat2) << "]\n";
        } catch (const Error& e) {
            std::cerr << "design: " << e.what() << '\n';
            code = kInfeasible;
        }
    }
    auto out = open_out(output_dir(c) / "design.json");
    out << j.dump(2) << '\n';
    return code;
}

int cmd_simulate(const RunConfig& c) {
    const auto sys = resolve_system(c);
    warn_noise(c, sys.spec);
    const auto runs = ensemble(sys.spec, c.x0, c.N, noise_model(c), c.runs, c.threads);
    const auto dir = output_dir(c);
    if (c.wants("csv")) {
        auto out = open_out(dir / "trajectories.csv");
        write_trajectory_csv(out, runs);
    }
    if (c.wants("svg")) {
        const auto corridor = plot_corridor(c, sys);
        auto out = open_out(dir / "trajectories.svg");
        tools::write_trajectory_svg(out, runs, corridor ? &*corridor : nullptr, title_for(c, sys.spec));
    }
    for (std::size_t r = 0; r < runs.size(); ++r)
        std::cout << "run " << r << ": x_N = " << shortest(runs[r].values.back())
                  << ", truncations = " << runs[r].clamp_count << '\n';
    return kOk;
}

int cmd_bifurcate(const RunConfig& c) {
    const auto sys = resolve_system(c);
    warn_noise(c, sys.spec);
    const SweepConfig w = c.sweep.value_or(SweepConfig{});
    X0Policy policy = X0Policy::fixed(c.x0);
    if (w.x0_policy == "two_sided") {
        if (!sys.spec.shifted()) throw Error(ErrorKind::Usage, "two-sided x0 policy needs a shifted scheme");
        policy = X0Policy::two_sided(sys.spec.K1, w.per_side, w.x0_lo, w.x0_hi);
    }
    BifurcationOptions opt;
    opt.transient = w.transient;
    opt.samples = w.samples;
    opt.noise = noise_model(c);
    opt.threads = c.threads;
    const auto grid =
        bifurcate(sys.spec, SweepSpec{w.param, w.from, w.to, w.points}, policy, w.transient + w.samples, opt);
    const auto dir = output_dir(c);
    if (c.wants("csv")) {
        auto out = open_out(dir / "bifurcation.csv");
        write_bifurcation_csv(out, grid);
    }
    if (c.wants("svg")) {
        auto out = open_out(dir / "bifurcation.svg");
        tools::write_bifurcation_svg(out, grid, c.family + ", " + to_string(sys.spec.scheme));
    }
    int diverged = 0;
    for (const auto& cell : grid.cells) diverged += cell.diverged;
    std::cout << grid.cells.size() << " cells, " << diverged << " diverged\n";
    return kOk;
}

int cmd_verify(const RunConfig& c) {
    const auto sys = resolve_system(c);
    warn_noise(c, sys.spec);
    const auto runs = ensemble(sys.spec, c.x0, c.N, noise_model(c), c.runs, c.threads);
    const auto rep = verify_runs(c, sys, runs);
    json j = json::array();
    for (const auto& ch : rep.checks) {
        std::cout << to_string(ch.status) << "  " << ch.name << ": " << ch.detail << '\n';
        j.push_back({{"check", ch.name}, {"status", to_string(ch.status)}, {"detail", ch.detail}});
    }
    auto out = open_out(output_dir(c) / "verify.json");
    out << j.dump(2) << '\n';
    if (rep.any(CheckStatus::Fail)) return kVerifyFailed;
    if (rep.any(CheckStatus::Skipped)) return kInfeasible;
    return kOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Proportional-feedback cycle design and simulation"};
    app.require_subcommand(0, 1);
    Options o;
    app.add_option("-c,--config", o.config_path, "INI run configuration")->required()->check(CLI::ExistingFile);
    app.add_option("--seed", o.seed, "override noise.seed");
    app.add_option("--out", o.out, "override output.directory");
    app.add_option("--format", o.format, "override output.formats (csv[,svg])");
    app.add_option("--threads", o.threads, "worker threads (0 = all cores)")->check(CLI::NonNegativeNumber);
    app.add_flag("--dump-config", o.dump, "print the effective configuration and exit");

    auto* design = app.add_subcommand("design", "print the gain, cycle and noise bounds");
    auto* simulate = app.add_subcommand("simulate", "write trajectories of the seeded ensemble");
    auto* bif = app.add_subcommand("bifurcate", "sweep a parameter and sample attractors");
    auto* verify = app.add_subcommand("verify", "check the corridor theorems on the ensemble");
    bif->add_option("--param", o.param, "c, nu, ell1 or ell2");
    bif->add_option("--from", o.from);
    bif->add_option("--to", o.to);
    bif->add_option("--points", o.points)->check(CLI::PositiveNumber);
    for (auto* sub : {design, simulate, bif, verify}) sub->fallthrough();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kOk : kConfig;
    }
    if (!o.dump && app.get_subcommands().empty()) {
        std::cerr << "a subcommand is required (design, simulate, bifurcate or verify)\n";
        return kConfig;
    }

    try {
        const RunConfig c = effective_config(o);
        if (o.dump) {
            std::cout << dump_config(c);
            return kOk;
        }
        if (*design) return cmd_design(c);
        if (*simulate) return cmd_simulate(c);
        if (*bif) return cmd_bifurcate(c);
        return cmd_verify(c);
    } catch (const Error& e) {
        std::cerr << "error (" << to_string(e.kind()) << "): " << e.what() << '\n';
        return exit_code(e.kind());
    } catch (const fs::filesystem_error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kConfig;
    }
}
