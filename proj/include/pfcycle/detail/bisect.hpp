#pragma once

#include <cmath>

namespace pfcycle::detail {

struct BisectResult {
    double x = 0.0;
    double width = 0.0;  ///< final bracket width
    int iterations = 0;
};

/// Bisection on a bracket where `above(lo)` is false and `above(hi)` is true.
/// Runs until the bracket cannot be split in double precision or `max_iter` is
/// reached; returns the midpoint of the final bracket.
template <class Pred>
BisectResult bisect(Pred&& above, double lo, double hi, int max_iter = 200) {
    int it = 0;
    for (; it < max_iter; ++it) {
        const double mid = lo + 0.5 * (hi - lo);
        if (mid <= lo || mid >= hi) break;
        if (above(mid))
            hi = mid;
        else
            lo = mid;
    }
    return {lo + 0.5 * (hi - lo), hi - lo, it};
}

/// Golden-section search for a maximum of a unimodal function on [a, b].
template <class F>
double golden_max(F&& fn, double a, double b, int max_iter = 100) {
    const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
    double c = b - inv_phi * (b - a);
    double d = a + inv_phi * (b - a);
    double fc = fn(c), fd = fn(d);
    for (int i = 0; i < max_iter && (b - a) > 1e-15 * (1.0 + std::abs(a) + std::abs(b)); ++i) {
        if (fc >= fd) {
            b = d;
            d = c;
            fd = fc;
            c = b - inv_phi * (b - a);
            fc = fn(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + inv_phi * (b - a);
            fd = fn(d);
        }
    }
    return fc >= fd ? c : d;
}

}  // namespace pfcycle::detail
