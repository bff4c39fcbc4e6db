#pragma once

// One-dimensional population maps f : [0, domain_hi] -> [0, inf) with f(0) = 0,
// and a grid certifier for the monotone-branch hypothesis the control design
// relies on: f increasing and f(x)/x decreasing on (0, b], f(b) > b, and
// f(b)/b > f(x)/x beyond b.

#include <functional>
#include <limits>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace pfcycle {

enum class MapFamily { Ricker, LogisticTruncated, Quail, Cubic45, Cubic6, Custom };

const char* to_string(MapFamily family) noexcept;
MapFamily map_family_from_string(const std::string& name);

class MapDef {
public:
    using Rule = std::function<double(double)>;

    /// x e^{r(1-x)}
    static MapDef ricker(double r);
    /// max{r x (1-x), 0}
    static MapDef logistic(double r);
    /// x (A + B / (1 + x^gamma)); the bobwhite quail model.
    static MapDef quail(double A, double B, double gamma);
    /// Quail map with A = 0.55, B = 3.45, gamma = 9.
    static MapDef quail_camwa() { return quail(0.55, 3.45, 9.0); }
    /// 9/2 x^2 (1-x) on [0, 1].
    static MapDef cubic45();
    /// 6 x^2 (1-x) on [0, 1].
    static MapDef cubic6();
    /// Code-level map. `rule` must satisfy rule(0) = 0 and rule(x) >= 0.
    static MapDef custom(std::string name, Rule rule,
                         double domain_hi = std::numeric_limits<double>::infinity());

    /// Builds a registered family from named parameters (config files).
    static MapDef from_params(MapFamily family, const std::map<std::string, double>& params);

    MapFamily family() const noexcept { return family_; }
    const std::string& name() const noexcept { return name_; }
    const std::map<std::string, double>& params() const noexcept { return params_; }
    double param(const std::string& key) const;
    double domain_hi() const noexcept { return domain_hi_; }

    /// f(x). Throws Error(Domain) for x < 0, x > domain_hi or non-finite x.
    double operator()(double x) const;

    /// Same family and parameters (Custom maps compare by name).
    bool same_as(const MapDef& other) const;

private:
    MapDef(MapFamily family, std::string name, std::map<std::string, double> params, double domain_hi);

    MapFamily family_;
    std::string name_;
    std::map<std::string, double> params_;
    double domain_hi_;
    // Cached coefficients: Ricker {r}, Logistic {r}, Quail {A, B, gamma}, Cubic {a}.
    double c0_ = 0.0, c1_ = 0.0, c2_ = 0.0;
    Rule rule_;
};

inline double eval_map(const MapDef& map, double x) { return map(x); }

/// The five registered families at the parameter values used in the examples.
std::vector<MapDef> registered_maps();

/// Registered maps for which the monotone-branch hypothesis holds
/// (Ricker r in {1.5, 2.8, 3.5}, logistic r = 3.8, quail (0.55, 3.45, 9)).
/// The two cubic maps have f(x)/x increasing near zero and are excluded.
std::vector<MapDef> assumption1_maps();

enum class Verdict { Pass, Fail };

struct Assumption1Certificate {
    double b = 0.0;
    int grid_resolution = 0;
    double tail_bound = 0.0;
    Verdict verdict = Verdict::Fail;
    std::string reason;                 ///< empty on Pass
    std::optional<double> violation_x;  ///< first offending grid point on Fail

    bool passed() const noexcept { return verdict == Verdict::Pass; }
};

/// Relative slack for the f(x)/x decrease test. Maps like the quail model have
/// f(x)/x flat to machine precision near zero, so exact strictness is not observable.
inline constexpr double kRatioRelTol = 1e-12;

Assumption1Certificate certify_assumption1(const MapDef& map, double b, int resolution, double tail_bound);

/// Tail horizon used when the caller does not supply one: max(10 b, 10), or
/// max(10 b, 100) for the quail family; clipped to the map's domain.
double default_tail_bound(const MapDef& map, double b);

/// Threshold b for which certification passes at resolution 10^4.
/// Ricker: 1/r. Logistic: 1/2. Others: the first local maximum of f (located by
/// bisection on the sign of f(x + h) - f(x)), then halved until certification passes.
/// Throws Error(Certification) when no threshold is found.
double default_b(const MapDef& map);

/// First local maximum of f on (0, domain], if any.
std::optional<double> first_local_max(const MapDef& map);

/// Root of f(x) - x in [lo, hi] by bisection; requires a sign change.
double find_fixed_point(const MapDef& map, double lo, double hi);

}  // namespace pfcycle
