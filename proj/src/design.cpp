#include "pfcycle/design.hpp"

#include <algorithm>
#include <cmath>

#include "pfcycle/detail/bisect.hpp"
#include "pfcycle/detail/format.hpp"
#include "pfcycle/errors.hpp"

namespace pfcycle {

namespace {

constexpr double kFixedPointTol = 1e-8;

ControlDesign finish_design(const PsiFunction& psi_fn, double x_hat, double x_star, double nu) {
    const auto& chain = psi_fn.chain();
    if (!(x_hat > 0.0 && x_hat < chain.b_k()))
        fail(ErrorKind::Range, "design: cycle base point outside (0, b_k)");
    if (!(nu > psi_fn.psi_zero() && nu < psi_fn.psi_bk()))
        fail(ErrorKind::Range, "design: gain outside (Psi_k(0), Psi_k(b_k))");

    std::vector<double> cycle;
    cycle.reserve(static_cast<std::size_t>(chain.k()));
    double x = x_hat;
    for (int j = 1; j <= chain.k(); ++j) cycle.push_back(x = chain.map()(x));

    ControlDesign d{psi_fn, x_star, x_hat, nu, std::move(cycle)};
    const double residual = std::abs(d.g(x_star) - x_star);
    if (!(residual < kFixedPointTol))
        fail(ErrorKind::Numeric, "design: fixed-point residual " + detail::shortest(residual) + " too large");
    return d;
}

std::vector<Interval> phase_images(const MapDef& map, int k, double lo, double hi) {
    std::vector<Interval> out;
    out.reserve(static_cast<std::size_t>(k));
    for (int j = 1; j <= k; ++j) {
        lo = map(lo);
        hi = map(hi);
        out.push_back({lo, hi});
    }
    return out;
}

}  // namespace

ControlDesign design_gain(const PsiFunction& psi_fn, double x_star) {
    const auto& chain = psi_fn.chain();
    if (!(x_star > 0.0 && x_star < chain.f_b()))
        fail(ErrorKind::Range, "target " + detail::shortest(x_star) + " outside (0, f(b)) = (0, " +
                                   detail::shortest(chain.f_b()) + ")");
    const double x_hat = inverse_iterate(chain, chain.k(), x_star);
    return finish_design(psi_fn, x_hat, x_star, psi_raw(chain, x_hat));
}

ControlDesign design_gain(const IterateChain& chain, double x_star) { return design_gain(PsiFunction(chain), x_star); }

ControlDesign design_from_xhat(const PsiFunction& psi_fn, double x_hat) {
    const auto& chain = psi_fn.chain();
    if (!(x_hat > 0.0 && x_hat < chain.b_k()))
        fail(ErrorKind::Range, "cycle base point " + detail::shortest(x_hat) + " outside (0, b_k) = (0, " +
                                   detail::shortest(chain.b_k()) + ")");
    const double x_star = iterate(chain, chain.k(), x_hat);
    return finish_design(psi_fn, x_hat, x_star, x_hat / x_star);
}

ControlDesign design_from_nu(const PsiFunction& psi_fn, double nu) {
    const double x_hat = psi_inverse(psi_fn, nu);
    const double x_star = iterate(psi_fn.chain(), psi_fn.k(), x_hat);
    return finish_design(psi_fn, x_hat, x_star, nu);
}

double max_mult_noise(const ControlDesign& design) {
    return std::min(design.psi.psi_bk() - design.nu, design.nu - design.psi.psi_zero());
}

MultCorridor mult_corridor(const ControlDesign& design, double ell) {
    const double ell_max = max_mult_noise(design);
    if (!(ell > 0.0 && ell < ell_max))
        fail(ErrorKind::NoiseBound, "multiplicative amplitude " + detail::shortest(ell) + " outside (0, " +
                                        detail::shortest(ell_max) + ")");
    const double y_lo = psi_inverse(design.psi, design.nu - ell);
    const double y_hi = psi_inverse(design.psi, design.nu + ell);
    if (!(y_lo > 0.0 && y_lo <= design.x_hat && design.x_hat <= y_hi && y_hi < design.chain().b_k() && y_lo < y_hi))
        fail(ErrorKind::Numeric, "mult_corridor: endpoints out of order");
    return MultCorridor{ell, y_lo, y_hi,
                        PhaseCorridor{CorridorKind::Multiplicative, design.map(), design.k(), design.nu,
                                      phase_images(design.map(), design.k(), y_lo, y_hi)}};
}

Delta0Bound delta0_bound(const std::function<double(double)>& g, double x_star, double upper, int grid) {
    if (grid < 1000) fail(ErrorKind::Usage, "delta0: grid must be at least 1000");
    if (!(x_star > 0.0 && upper > x_star)) fail(ErrorKind::Usage, "delta0: need 0 < x* < upper");

    Delta0Bound out;
    out.edge_margin = upper - g(upper);

    auto gap = [&](double x) { return g(x) - x; };
    const double dx = x_star / grid;
    int best = 0;
    double best_gap = gap(0.0);
    for (int i = 1; i <= grid; ++i) {
        const double v = gap(dx * i);
        if (v > best_gap) {
            best_gap = v;
            best = i;
        }
    }
    const double a = dx * std::max(best - 1, 0);
    const double b = dx * std::min(best + 1, grid);
    const double refined = detail::golden_max(gap, a, b);
    out.peak_x = dx * best;
    out.peak_gap = best_gap;
    if (const double v = gap(refined); v > best_gap) {
        out.peak_gap = v;
        out.peak_x = refined;
    }
    out.value = std::max(0.0, std::min(out.edge_margin, out.peak_gap));
    return out;
}

Delta0Bound max_delta0_bound(const ControlDesign& design, int grid) {
    return delta0_bound([&](double x) { return design.g(x); }, design.x_star, design.chain().b_k() / design.nu, grid);
}

AddCorridor add_corridor(const ControlDesign& design, double delta0, int grid, std::optional<double> tail_bound) {
    const auto bound = max_delta0_bound(design, grid);
    if (!(delta0 > 0.0 && delta0 <= bound.value))
        fail(ErrorKind::NoiseBound, "additive level " + detail::shortest(delta0) + " outside (0, " +
                                        detail::shortest(bound.value) + "]");

    const double x_star = design.x_star;
    const double upper = design.chain().b_k() / design.nu;
    auto g = [&](double x) { return design.g(x); };

    // y1: last grid point in [0, x*] where g(x) - x >= delta0, refined towards x*.
    const double dx1 = x_star / grid;
    auto h1_neg = [&](double x) { return g(x) - x - delta0 < 0.0; };
    double lo1 = -1.0;
    for (int i = grid; i >= 0; --i)
        if (!h1_neg(dx1 * i)) {
            lo1 = dx1 * i;
            break;
        }
    if (lo1 < 0.0) lo1 = bound.peak_x;  // peak narrower than a grid cell
    const double hi1 = std::min(x_star, dx1 * (std::floor(lo1 / dx1) + 1.0));
    const double y1 = detail::bisect(h1_neg, lo1, hi1).x;

    // y2: first grid point in [x*, b_k/nu] where g(x) - x <= -delta0.
    const double dx2 = (upper - x_star) / grid;
    auto h2_le = [&](double x) { return g(x) - x + delta0 <= 0.0; };
    std::optional<double> hi2;
    for (int i = 1; i <= grid; ++i) {
        const double x = (i == grid) ? upper : x_star + dx2 * i;
        if (h2_le(x)) {
            hi2 = x;
            break;
        }
    }
    if (!hi2) fail(ErrorKind::Numeric, "add_corridor: no crossing below b_k/nu");
    const double y2 = detail::bisect(h2_le, std::max(x_star, *hi2 - dx2), *hi2).x;

    // y3: first crossing of g(x) - delta0 <= y1 on [x*, tail].
    double tail = tail_bound.value_or(default_tail_bound(design.map(), design.chain().b()) / design.nu);
    tail = std::min(tail, design.map().domain_hi() / design.nu);
    std::optional<double> y3;
    auto h3_le = [&](double x) { return g(x) - delta0 <= y1; };
    if (h3_le(x_star)) {
        y3 = x_star;
    } else if (tail > x_star) {
        const double dx3 = (tail - x_star) / grid;
        for (int i = 1; i <= grid; ++i) {
            const double x = (i == grid) ? tail : x_star + dx3 * i;
            if (h3_le(x)) {
                y3 = detail::bisect(h3_le, x - dx3, x).x;
                break;
            }
        }
    }

    const double x_hat1 = design.nu * y1;
    const double x_hat2 = design.nu * y2;
    if (!(y1 < x_star && x_star < y2 && x_hat1 > 0.0 && x_hat2 < design.chain().b_k() * (1.0 + 1e-12)))
        fail(ErrorKind::Numeric, "add_corridor: endpoints out of order");

    return AddCorridor{delta0,
                       y1,
                       y2,
                       y3,
                       tail,
                       x_hat1,
                       x_hat2,
                       std::max(dx1, dx2),
                       PhaseCorridor{CorridorKind::Additive, design.map(), design.k(), design.nu,
                                     phase_images(design.map(), design.k(), x_hat1, x_hat2)}};
}

}  // namespace pfcycle
