#include "pfcycle/maps.hpp"

#include <algorithm>
#include <cmath>

#include "pfcycle/detail/bisect.hpp"
#include "pfcycle/detail/format.hpp"
#include "pfcycle/errors.hpp"

namespace pfcycle {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

std::string fmt_x(double x) { return detail::shortest(x); }

// Upper end of the scan window for searches that need a finite horizon.
double scan_horizon(const MapDef& map) { return std::isfinite(map.domain_hi()) ? map.domain_hi() : 10.0; }

template <class F>
Assumption1Certificate certify_rule(F&& f, double b, int resolution, double tail_bound) {
    Assumption1Certificate cert;
    cert.b = b;
    cert.grid_resolution = resolution;
    cert.tail_bound = tail_bound;

    auto reject = [&](std::string reason, double x) {
        cert.verdict = Verdict::Fail;
        cert.reason = std::move(reason);
        cert.violation_x = x;
        return cert;
    };

    // Geometric refinement towards zero, then the uniform grid on (0, b].
    const double h = b / resolution;
    std::vector<double> grid;
    grid.reserve(static_cast<std::size_t>(resolution) + 20);
    for (int i = 20; i >= 1; --i) grid.push_back(std::ldexp(h, -i));
    for (int i = 1; i < resolution; ++i) grid.push_back(h * i);
    grid.push_back(b);

    double x_prev = 0.0, f_prev = 0.0, ratio_prev = kInf;
    for (double x : grid) {
        double fx;
        try {
            fx = f(x);
        } catch (const Error& e) {
            return reject(std::string("evaluation failed: ") + e.what(), x);
        }
        if (!(fx > f_prev)) return reject("f not strictly increasing between " + fmt_x(x_prev) + " and " + fmt_x(x), x);
        const double ratio = fx / x;
        if (ratio > ratio_prev * (1.0 + kRatioRelTol))
            return reject("f(x)/x not decreasing between " + fmt_x(x_prev) + " and " + fmt_x(x), x);
        x_prev = x;
        f_prev = fx;
        ratio_prev = ratio;
    }

    const double fb = f_prev;
    if (!(fb > b)) return reject("f(b) <= b", b);

    const double slope_b = fb / b;
    const double step = (tail_bound - b) / resolution;
    for (int i = 1; i <= resolution; ++i) {
        const double x = (i == resolution) ? tail_bound : b + step * i;
        double fx;
        try {
            fx = f(x);
        } catch (const Error& e) {
            return reject(std::string("tail evaluation failed: ") + e.what(), x);
        }
        if (!(fx / x < slope_b)) return reject("f(b)/b <= f(x)/x at x = " + fmt_x(x), x);
    }

    cert.verdict = Verdict::Pass;
    return cert;
}

}  // namespace

const char* to_string(MapFamily family) noexcept {
    switch (family) {
        case MapFamily::Ricker: return "ricker";
        case MapFamily::LogisticTruncated: return "logistic";
        case MapFamily::Quail: return "quail";
        case MapFamily::Cubic45: return "cubic45";
        case MapFamily::Cubic6: return "cubic6";
        case MapFamily::Custom: return "custom";
    }
    return "?";
}

MapFamily map_family_from_string(const std::string& name) {
    for (auto fam : {MapFamily::Ricker, MapFamily::LogisticTruncated, MapFamily::Quail, MapFamily::Cubic45,
                     MapFamily::Cubic6})
        if (name == to_string(fam)) return fam;
    fail(ErrorKind::Config, "unknown map family '" + name + "'");
}

MapDef::MapDef(MapFamily family, std::string name, std::map<std::string, double> params, double domain_hi)
    : family_(family), name_(std::move(name)), params_(std::move(params)), domain_hi_(domain_hi) {}

MapDef MapDef::ricker(double r) {
    if (!(r > 0.0) || !std::isfinite(r)) fail(ErrorKind::Parameter, "ricker: r must be positive");
    MapDef m(MapFamily::Ricker, "ricker", {{"r", r}}, kInf);
    m.c0_ = r;
    return m;
}

MapDef MapDef::logistic(double r) {
    if (!(r > 0.0) || !std::isfinite(r)) fail(ErrorKind::Parameter, "logistic: r must be positive");
    MapDef m(MapFamily::LogisticTruncated, "logistic", {{"r", r}}, kInf);
    m.c0_ = r;
    return m;
}

MapDef MapDef::quail(double A, double B, double gamma) {
    if (!(A > 0.0) || !(B > 0.0) || !(gamma > 1.0))
        fail(ErrorKind::Parameter, "quail: requires A > 0, B > 0, gamma > 1");
    MapDef m(MapFamily::Quail, "quail", {{"A", A}, {"B", B}, {"gamma", gamma}}, kInf);
    m.c0_ = A;
    m.c1_ = B;
    m.c2_ = gamma;
    return m;
}

MapDef MapDef::cubic45() {
    MapDef m(MapFamily::Cubic45, "cubic45", {}, 1.0);
    m.c0_ = 4.5;
    return m;
}

MapDef MapDef::cubic6() {
    MapDef m(MapFamily::Cubic6, "cubic6", {}, 1.0);
    m.c0_ = 6.0;
    return m;
}

MapDef MapDef::custom(std::string name, Rule rule, double domain_hi) {
    if (!rule) fail(ErrorKind::Parameter, "custom map needs an evaluation rule");
    if (!(domain_hi > 0.0)) fail(ErrorKind::Parameter, "custom map needs a positive domain");
    MapDef m(MapFamily::Custom, std::move(name), {}, domain_hi);
    m.rule_ = std::move(rule);
    return m;
}

MapDef MapDef::from_params(MapFamily family, const std::map<std::string, double>& params) {
    auto get = [&](const char* key, std::optional<double> fallback = {}) {
        auto it = params.find(key);
        if (it != params.end()) return it->second;
        if (fallback) return *fallback;
        fail(ErrorKind::Config, std::string("map parameter '") + key + "' missing for " + to_string(family));
    };
    switch (family) {
        case MapFamily::Ricker: return ricker(get("r"));
        case MapFamily::LogisticTruncated: return logistic(get("r"));
        case MapFamily::Quail: return quail(get("A", 0.55), get("B", 3.45), get("gamma", 9.0));
        case MapFamily::Cubic45: return cubic45();
        case MapFamily::Cubic6: return cubic6();
        case MapFamily::Custom: break;
    }
    fail(ErrorKind::Config, "custom maps cannot be built from a configuration");
}

double MapDef::param(const std::string& key) const {
    auto it = params_.find(key);
    if (it == params_.end()) fail(ErrorKind::Usage, name_ + " has no parameter '" + key + "'");
    return it->second;
}

double MapDef::operator()(double x) const {
    if (!(x >= 0.0) || !(x <= domain_hi_) || !std::isfinite(x))
        fail(ErrorKind::Domain, name_ + ": argument " + fmt_x(x) + " outside [0, " + fmt_x(domain_hi_) + "]");
    // Every family is written as x * (per-capita rate) so fixed points are
    // reproduced exactly where the rate evaluates to 1.
    switch (family_) {
        case MapFamily::Ricker: return x * std::exp(c0_ * (1.0 - x));
        case MapFamily::LogisticTruncated: return std::max(x * (c0_ * (1.0 - x)), 0.0);
        case MapFamily::Quail: return x * (c0_ + c1_ / (1.0 + std::pow(x, c2_)));
        case MapFamily::Cubic45:
        case MapFamily::Cubic6: return x * (c0_ * x * (1.0 - x));
        case MapFamily::Custom: return rule_(x);
    }
    return 0.0;
}

bool MapDef::same_as(const MapDef& other) const {
    return family_ == other.family_ && name_ == other.name_ && params_ == other.params_ &&
           domain_hi_ == other.domain_hi_;
}

std::vector<MapDef> registered_maps() {
    return {MapDef::ricker(2.8), MapDef::logistic(3.8), MapDef::quail_camwa(), MapDef::cubic45(), MapDef::cubic6()};
}

std::vector<MapDef> assumption1_maps() {
    return {MapDef::ricker(1.5), MapDef::ricker(2.8), MapDef::ricker(3.5), MapDef::logistic(3.8),
            MapDef::quail_camwa()};
}

Assumption1Certificate certify_assumption1(const MapDef& map, double b, int resolution, double tail_bound) {
    if (!(b > 0.0) || !std::isfinite(b)) fail(ErrorKind::Usage, "certify: b must be positive");
    if (resolution < 1000) fail(ErrorKind::Usage, "certify: resolution must be at least 1000");
    if (!(tail_bound > b)) fail(ErrorKind::Usage, "certify: tail_bound must exceed b");
    return certify_rule(map, b, resolution, tail_bound);
}

double default_tail_bound(const MapDef& map, double b) {
    const double floor = map.family() == MapFamily::Quail ? 100.0 : 10.0;
    return std::min(std::max(10.0 * b, floor), map.domain_hi());
}

std::optional<double> first_local_max(const MapDef& map) {
    constexpr int kGrid = 100000;
    const double hi = scan_horizon(map);
    const double dx = hi / kGrid;
    double f_prev = map(0.0);
    for (int i = 1; i <= kGrid; ++i) {
        const double x = dx * i;
        const double fx = map(x);
        if (fx <= f_prev) {
            // Peak lies in (x - 2dx, x); refine on the sign of the forward difference.
            const double lo = std::max(0.0, x - 2.0 * dx);
            auto decreasing = [&](double t) {
                const double h = 1e-7 * std::max(1.0, t);
                if (t + h > map.domain_hi()) return true;
                return map(t + h) - map(t) <= 0.0;
            };
            if (decreasing(lo)) return lo;
            return detail::bisect(decreasing, lo, x).x;
        }
        f_prev = fx;
    }
    return std::nullopt;
}

double default_b(const MapDef& map) {
    auto passes = [&](double b) {
        const double tail = default_tail_bound(map, b);
        if (!(tail > b)) return false;
        return certify_assumption1(map, b, 10000, tail).passed();
    };

    double start;
    switch (map.family()) {
        case MapFamily::Ricker: start = 1.0 / map.param("r"); break;
        case MapFamily::LogisticTruncated: start = 0.5; break;
        default: start = first_local_max(map).value_or(scan_horizon(map)); break;
    }
    double b = start;
    for (int i = 0; i < 60; ++i, b *= 0.5)
        if (passes(b)) return b;
    fail(ErrorKind::Certification,
         map.name() + ": no threshold b <= " + fmt_x(start) + " satisfies the monotone-branch hypothesis");
}

double find_fixed_point(const MapDef& map, double lo, double hi) {
    const double h_lo = map(lo) - lo;
    const double h_hi = map(hi) - hi;
    if ((h_lo > 0.0) == (h_hi > 0.0)) fail(ErrorKind::Range, "find_fixed_point: f(x) - x has no sign change");
    const bool hi_positive = h_hi > 0.0;
    return detail::bisect([&](double x) { return (map(x) - x > 0.0) == hi_positive; }, lo, hi).x;
}

}  // namespace pfcycle
