#include "pfcycle/config.hpp"

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include "pfcycle/calculus.hpp"
#include "pfcycle/detail/format.hpp"
#include "pfcycle/errors.hpp"

namespace pfcycle {

namespace pt = boost::property_tree;

namespace {

[[noreturn]] void config_error(const std::string& what) { fail(ErrorKind::Config, what); }

std::string trim(std::string s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return {};
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

double to_double(const std::string& key, const std::string& text) {
    const std::string s = trim(text);
    double v = 0.0;
    const char* first = s.data();
    // from_chars rejects a leading '+'.
    if (!s.empty() && s.front() == '+') ++first;
    auto [ptr, ec] = std::from_chars(first, s.data() + s.size(), v);
    if (ec != std::errc{} || ptr != s.data() + s.size() || s.empty() || !std::isfinite(v))
        config_error("'" + key + "': expected a finite number, got '" + s + "'");
    return v;
}

template <class Int>
Int to_int(const std::string& key, const std::string& text) {
    const std::string s = trim(text);
    Int v{};
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc{} || ptr != s.data() + s.size() || s.empty())
        config_error("'" + key + "': expected an integer, got '" + s + "'");
    return v;
}

bool to_bool(const std::string& key, const std::string& text) {
    const std::string s = trim(text);
    if (s == "true" || s == "1" || s == "yes") return true;
    if (s == "false" || s == "0" || s == "no") return false;
    config_error("'" + key + "': expected true or false, got '" + s + "'");
}

std::vector<std::string> split_list(const std::string& text) {
    std::vector<std::string> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ','))
        if (auto t = trim(item); !t.empty()) out.push_back(t);
    return out;
}

std::set<std::string> map_param_names(const std::string& family) {
    if (family == "ricker" || family == "logistic") return {"r"};
    if (family == "quail") return {"A", "B", "gamma"};
    return {};
}

class Section {
public:
    Section(const pt::ptree& tree, std::string name, std::set<std::string> allowed)
        : name_(std::move(name)) {
        if (auto child = tree.get_child_optional(name_)) node_ = &*child;
        if (!node_) return;
        for (const auto& [key, value] : *node_) {
            if (!value.empty()) config_error("[" + name_ + "] must not contain nested keys");
            if (!allowed.count(key)) config_error("[" + name_ + "]: unknown key '" + key + "'");
        }
    }

    bool present() const { return node_ != nullptr; }

    std::optional<std::string> raw(const std::string& key) const {
        if (!node_) return std::nullopt;
        if (auto v = node_->get_optional<std::string>(pt::ptree::path_type(key, '\0'))) return trim(*v);
        return std::nullopt;
    }
    std::string qual(const std::string& key) const { return name_ + "." + key; }

    void read(const std::string& key, double& out) const {
        if (auto v = raw(key)) out = to_double(qual(key), *v);
    }
    void read(const std::string& key, std::optional<double>& out) const {
        if (auto v = raw(key)) out = to_double(qual(key), *v);
    }
    template <class Int>
        requires std::is_integral_v<Int>
    void read(const std::string& key, Int& out) const {
        if (auto v = raw(key)) out = to_int<Int>(qual(key), *v);
    }
    void read(const std::string& key, bool& out) const {
        if (auto v = raw(key)) out = to_bool(qual(key), *v);
    }
    void read(const std::string& key, std::string& out) const {
        if (auto v = raw(key)) out = *v;
    }

    const pt::ptree* node() const { return node_; }

private:
    std::string name_;
    const pt::ptree* node_ = nullptr;
};

}  // namespace

bool RunConfig::wants(const std::string& format) const {
    return std::find(formats.begin(), formats.end(), format) != formats.end();
}

void RunConfig::validate() const {
    try {
        map_family_from_string(family);
    } catch (const Error& e) {
        config_error(e.what());
    }
    const auto names = map_param_names(family);
    for (const auto& [key, value] : map_params)
        if (!names.count(key)) config_error("[map]: '" + key + "' is not a parameter of " + family);
    if (b && !(*b > 0.0)) config_error("map.b must be positive");

    const int targets = int(nu.has_value()) + int(x_star.has_value()) + int(x_hat.has_value());
    if (targets != 1) config_error("[system]: give exactly one of nu, x_star, x_hat");
    const bool shifted = scheme == Scheme::ShiftedDetPF || scheme == Scheme::ShiftedNoisy;
    if (shifted && !nu) config_error("[system]: shifted schemes take nu directly");
    if (!shifted && (K1 || K1_auto)) config_error("[system]: K1 applies to shifted schemes only");
    if (shifted && !K1 && !K1_auto) config_error("[system]: shifted schemes need K1 (a number or auto)");
    if (k < 1) config_error("system.k must be >= 1");
    if (!(ell1 >= 0.0) || !(ell2 >= 0.0)) config_error("noise amplitudes must be >= 0");
    if (noise_kind == NoiseKind::TwoPoint && !(p > 0.0 && p <= 1.0)) config_error("noise.p must lie in (0, 1]");
    if (!(x0 > 0.0)) config_error("run.x0 must be positive");
    if (N < 1) config_error("run.N must be >= 1");
    if (runs < 1) config_error("run.runs must be >= 1");
    if (transient < 0) config_error("run.transient must be >= 0");
    if (threads < 0) config_error("run.threads must be >= 0");
    for (const auto& f : formats)
        if (f != "csv" && f != "svg") config_error("output.formats: unknown format '" + f + "'");
    if (ell && !(*ell > 0.0)) config_error("design.ell must be positive");
    if (delta0 && !(*delta0 > 0.0)) config_error("design.delta0 must be positive");
    if (!(epsilon_fraction > 0.0 && epsilon_fraction <= 1.0)) config_error("design.epsilon_fraction must lie in (0, 1]");
    if (!(tail_tol >= 0.0)) config_error("design.tail_tol must be >= 0");
    if (!(separation > 0.0)) config_error("design.separation must be positive");
    if (sweep) {
        if (sweep->points < 1) config_error("sweep.points must be >= 1");
        if (sweep->x0_policy != "fixed" && sweep->x0_policy != "two_sided")
            config_error("sweep.x0_policy must be fixed or two_sided");
        if (sweep->per_side < 1) config_error("sweep.per_side must be >= 1");
        if (sweep->samples < 1 || sweep->transient < 0) config_error("sweep: samples >= 1 and transient >= 0");
    }
}

RunConfig parse_config(std::istream& in) {
    pt::ptree tree;
    try {
        pt::ini_parser::read_ini(in, tree);
    } catch (const pt::ini_parser_error& e) {
        config_error(std::string("malformed configuration: ") + e.what());
    }
    const std::set<std::string> sections{"map", "system", "noise", "run", "output", "design", "sweep"};
    for (const auto& [name, node] : tree) {
        if (!sections.count(name)) config_error("unknown section [" + name + "]");
        if (node.empty()) config_error("key '" + name + "' outside a section");
    }

    RunConfig c;

    {
        std::string family = c.family;
        if (auto m = tree.get_child_optional("map"))
            if (auto f = m->get_optional<std::string>("family")) family = trim(*f);
        std::set<std::string> allowed = map_param_names(family);
        allowed.insert({"family", "b"});
        Section s(tree, "map", allowed);
        if (!s.present()) config_error("missing [map] section");
        s.read("family", c.family);
        s.read("b", c.b);
        for (const auto& key : map_param_names(family))
            if (auto v = s.raw(key)) c.map_params[key] = to_double(s.qual(key), *v);
    }
    {
        Section s(tree, "system", {"scheme", "k", "nu", "x_star", "x_hat", "ell1", "ell2", "K1", "independent_noises"});
        if (!s.present()) config_error("missing [system] section");
        if (auto v = s.raw("scheme")) {
            try {
                c.scheme = scheme_from_string(*v);
            } catch (const Error& e) {
                config_error(e.what());
            }
        }
        s.read("k", c.k);
        s.read("nu", c.nu);
        s.read("x_star", c.x_star);
        s.read("x_hat", c.x_hat);
        s.read("ell1", c.ell1);
        s.read("ell2", c.ell2);
        if (auto v = s.raw("K1")) {
            if (*v == "auto") c.K1_auto = true;
            else c.K1 = to_double("system.K1", *v);
        }
        s.read("independent_noises", c.independent_noises);
    }
    {
        Section s(tree, "noise", {"kind", "p", "seed"});
        if (auto v = s.raw("kind")) {
            try {
                c.noise_kind = noise_kind_from_string(*v);
            } catch (const Error& e) {
                config_error(e.what());
            }
        }
        s.read("p", c.p);
        s.read("seed", c.seed);
    }
    {
        Section s(tree, "run", {"x0", "N", "runs", "transient", "threads"});
        s.read("x0", c.x0);
        s.read("N", c.N);
        s.read("runs", c.runs);
        s.read("transient", c.transient);
        s.read("threads", c.threads);
    }
    {
        Section s(tree, "output", {"directory", "formats"});
        s.read("directory", c.directory);
        if (auto v = s.raw("formats")) c.formats = split_list(*v);
    }
    {
        Section s(tree, "design", {"ell", "delta0", "epsilon_fraction", "tail_tol", "separation"});
        s.read("ell", c.ell);
        s.read("delta0", c.delta0);
        s.read("epsilon_fraction", c.epsilon_fraction);
        s.read("tail_tol", c.tail_tol);
        s.read("separation", c.separation);
    }
    {
        Section s(tree, "sweep",
                  {"param", "from", "to", "points", "x0_policy", "per_side", "x0_lo", "x0_hi", "transient", "samples"});
        if (s.present()) {
            SweepConfig w;
            if (auto v = s.raw("param")) {
                try {
                    w.param = sweep_param_from_string(*v);
                } catch (const Error& e) {
                    config_error(e.what());
                }
            }
            s.read("from", w.from);
            s.read("to", w.to);
            s.read("points", w.points);
            s.read("x0_policy", w.x0_policy);
            s.read("per_side", w.per_side);
            s.read("x0_lo", w.x0_lo);
            s.read("x0_hi", w.x0_hi);
            s.read("transient", w.transient);
            s.read("samples", w.samples);
            c.sweep = w;
        }
    }
    c.validate();
    return c;
}

RunConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) config_error("cannot open configuration '" + path + "'");
    return parse_config(in);
}

std::string dump_config(const RunConfig& c) {
    using detail::shortest;
    std::ostringstream out;
    out << "[map]\nfamily = " << c.family << '\n';
    for (const auto& [key, value] : c.map_params) out << key << " = " << shortest(value) << '\n';
    if (c.b) out << "b = " << shortest(*c.b) << '\n';

    out << "\n[system]\nscheme = " << to_string(c.scheme) << "\nk = " << c.k << '\n';
    if (c.nu) out << "nu = " << shortest(*c.nu) << '\n';
    if (c.x_star) out << "x_star = " << shortest(*c.x_star) << '\n';
    if (c.x_hat) out << "x_hat = " << shortest(*c.x_hat) << '\n';
    out << "ell1 = " << shortest(c.ell1) << "\nell2 = " << shortest(c.ell2) << '\n';
    if (c.K1_auto) out << "K1 = auto\n";
    else if (c.K1) out << "K1 = " << shortest(*c.K1) << '\n';
    out << "independent_noises = " << (c.independent_noises ? "true" : "false") << '\n';

    out << "\n[noise]\nkind = " << to_string(c.noise_kind) << "\np = " << shortest(c.p) << "\nseed = " << c.seed
        << '\n';

    out << "\n[run]\nx0 = " << shortest(c.x0) << "\nN = " << c.N << "\nruns = " << c.runs
        << "\ntransient = " << c.transient << "\nthreads = " << c.threads << '\n';

    out << "\n[output]\ndirectory = " << c.directory << "\nformats = ";
    for (std::size_t i = 0; i < c.formats.size(); ++i) out << (i ? "," : "") << c.formats[i];
    out << '\n';

    out << "\n[design]\n";
    if (c.ell) out << "ell = " << shortest(*c.ell) << '\n';
    if (c.delta0) out << "delta0 = " << shortest(*c.delta0) << '\n';
    out << "epsilon_fraction = " << shortest(c.epsilon_fraction) << "\ntail_tol = " << shortest(c.tail_tol)
        << "\nseparation = " << shortest(c.separation) << '\n';

    if (c.sweep) {
        const auto& w = *c.sweep;
        out << "\n[sweep]\nparam = " << to_string(w.param) << "\nfrom = " << shortest(w.from)
            << "\nto = " << shortest(w.to) << "\npoints = " << w.points << "\nx0_policy = " << w.x0_policy
            << "\nper_side = " << w.per_side << "\nx0_lo = " << shortest(w.x0_lo) << "\nx0_hi = " << shortest(w.x0_hi)
            << "\ntransient = " << w.transient << "\nsamples = " << w.samples << '\n';
    }
    return out.str();
}

MapDef build_map(const RunConfig& config) {
    return MapDef::from_params(map_family_from_string(config.family), config.map_params);
}

double resolve_b(const RunConfig& config, const MapDef& map) { return config.b ? *config.b : default_b(map); }

double first_positive_fixed_point(const MapDef& map) {
    constexpr int kGrid = 100000;
    const double hi = std::isfinite(map.domain_hi()) ? map.domain_hi() : 100.0;
    const double dx = hi / kGrid;
    double prev_x = dx;
    double prev = map(prev_x) - prev_x;
    for (int i = 2; i <= kGrid; ++i) {
        const double x = dx * i;
        const double h = map(x) - x;
        if (h == 0.0) return x;
        if ((prev < 0.0) != (h < 0.0)) return find_fixed_point(map, prev_x, x);
        prev = h;
        prev_x = x;
    }
    fail(ErrorKind::Design, map.name() + ": no positive fixed point found for K1 = auto");
}

ResolvedSystem resolve_system(const RunConfig& config) {
    config.validate();
    const MapDef map = build_map(config);
    SystemSpec spec{config.scheme, map, config.k, 1.0, config.ell1, config.ell2, 0.0, config.independent_noises};

    if (spec.shifted()) {
        spec.nu = *config.nu;
        spec.K1 = config.K1 ? *config.K1 : first_positive_fixed_point(map);
        return {spec, std::nullopt, "shifted schemes have no cycle design", ErrorKind::Design};
    }

    std::optional<ControlDesign> design;
    std::string why;
    ErrorKind why_kind = ErrorKind::Design;
    try {
        PsiFunction psi(build_chain(map, resolve_b(config, map), config.k));
        if (config.x_star) design = design_gain(psi, *config.x_star);
        else if (config.x_hat) design = design_from_xhat(psi, *config.x_hat);
        else design = design_from_nu(psi, *config.nu);
    } catch (const Error& e) {
        // Without a prescribed gain the system itself is undefined.
        if (!config.nu) throw;
        why = e.what();
        why_kind = e.kind();
    }
    spec.nu = design ? design->nu : *config.nu;
    // Keep the prescribed gain bit-exact when one was given.
    if (config.nu) spec.nu = *config.nu;
    return {spec, design, why, why_kind};
}

NoiseModel noise_model(const RunConfig& config) {
    NoiseModel m;
    m.kind = config.noise_kind;
    m.p = config.p;
    m.seed = config.seed;
    return m;
}

}  // namespace pfcycle
