#pragma once

// Control synthesis for proportional-feedback cycle stabilization.
//
// For a target x* in (0, f(b)) the gain nu = Psi_k(f^{-k}(x*)) makes x* a
// fixed point of g(x) = f^k(nu x); applying x -> f(nu x) every k-th step then
// produces the k-cycle f(x_hat), ..., f^k(x_hat) = x* with x_hat = nu x*.
// The corridors bound where noisy trajectories are eventually trapped.

#include <functional>
#include <optional>
#include <vector>

#include "pfcycle/calculus.hpp"

namespace pfcycle {

struct ControlDesign {
    PsiFunction psi;
    double x_star = 0.0;
    double x_hat = 0.0;
    double nu = 0.0;
    std::vector<double> cycle;  ///< f^1(x_hat) .. f^k(x_hat)

    const IterateChain& chain() const noexcept { return psi.chain(); }
    const MapDef& map() const noexcept { return psi.chain().map(); }
    int k() const noexcept { return psi.k(); }
    /// g(x) = f^k(nu x).
    double g(double x) const { return iterate(map(), k(), nu * x); }
};

/// Design for a target value x* in (0, f(b)). Throws Error(Range) outside it.
ControlDesign design_gain(const PsiFunction& psi_fn, double x_star);
ControlDesign design_gain(const IterateChain& chain, double x_star);
/// Design for a cycle base point x_hat in (0, b_k); x* = f^k(x_hat).
ControlDesign design_from_xhat(const PsiFunction& psi_fn, double x_hat);
/// Design for a prescribed gain nu in (Psi_k(0), Psi_k(b_k)).
ControlDesign design_from_nu(const PsiFunction& psi_fn, double nu);

struct Interval {
    double lo = 0.0;
    double hi = 0.0;
    double width() const noexcept { return hi - lo; }
    bool contains(const Interval& inner) const noexcept { return lo <= inner.lo && inner.hi <= hi; }
};

enum class CorridorKind { Multiplicative, Additive };

/// Per-phase trapping intervals [f^j(lo), f^j(hi)], j = 1..k, with the
/// (map, k, nu) they were designed for.
struct PhaseCorridor {
    CorridorKind kind = CorridorKind::Multiplicative;
    MapDef map;
    int k = 1;
    double nu = 0.0;
    std::vector<Interval> phases;
};

/// Largest multiplicative amplitude the theory admits: min{Psi_k(b_k) - nu, nu - Psi_k(0)}.
double max_mult_noise(const ControlDesign& design);

struct MultCorridor {
    double ell = 0.0;
    double y_lo = 0.0;  ///< Psi_k^{-1}(nu - ell)
    double y_hi = 0.0;  ///< Psi_k^{-1}(nu + ell)
    PhaseCorridor corridor;
};

/// Throws Error(NoiseBound) unless 0 < ell < max_mult_noise(design).
MultCorridor mult_corridor(const ControlDesign& design, double ell);

struct Delta0Bound {
    double edge_margin = 0.0;  ///< upper - g(upper)
    double peak_gap = 0.0;     ///< max over [0, x*] of g(x) - x
    double peak_x = 0.0;       ///< where the peak gap is attained
    double value = 0.0;        ///< min of the two, clamped at zero
    bool noise_tolerant() const noexcept { return value > 0.0; }
};

/// Admissible additive level for an arbitrary g with fixed point x_star and
/// upper scan end `upper`; the peak is located on `grid` cells and refined by
/// golden-section search.
Delta0Bound delta0_bound(const std::function<double(double)>& g, double x_star, double upper, int grid);

/// delta0_bound for g(x) = f^k(nu x) and upper = b_k / nu. Requires grid >= 1000.
Delta0Bound max_delta0_bound(const ControlDesign& design, int grid = 10000);
inline double max_delta0(const ControlDesign& design, int grid = 10000) { return max_delta0_bound(design, grid).value; }

struct AddCorridor {
    double delta0 = 0.0;
    double y1 = 0.0;  ///< sup{x in [0, x*] : g(x) - x >= delta0}
    double y2 = 0.0;  ///< inf{x in [x*, b_k/nu] : g(x) - x <= -delta0}
    /// inf{x in [x*, y3_scan_bound] : g(x) - delta0 <= y1}; empty when the scan finds no crossing.
    std::optional<double> y3;
    double y3_scan_bound = 0.0;
    double x_hat1 = 0.0;  ///< nu y1
    double x_hat2 = 0.0;  ///< nu y2
    double grid_tol = 0.0;
    PhaseCorridor corridor;
};

/// Throws Error(NoiseBound) unless 0 < delta0 <= max_delta0(design, grid).
/// `tail_bound` defaults to default_tail_bound(map, b) / nu.
AddCorridor add_corridor(const ControlDesign& design, double delta0, int grid = 10000,
                         std::optional<double> tail_bound = std::nullopt);

}  // namespace pfcycle
