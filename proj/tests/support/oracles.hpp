#pragma once

// Reference computations written independently of the library: plain
// bisection on closed brackets, closed forms, and small case generators.

#include <cmath>
#include <cstdint>
#include <functional>
#include <random>
#include <vector>

#include "pfcycle/maps.hpp"

namespace oracle {

/// Root of h on [lo, hi] with h(lo) <= 0 <= h(hi) (or the reverse), by 300
/// halvings of the bracket.
inline double root(const std::function<double(double)>& h, double lo, double hi) {
    const bool rising = h(lo) <= 0.0;
    for (int i = 0; i < 300; ++i) {
        const double mid = 0.5 * (lo + hi);
        if ((h(mid) <= 0.0) == rising) lo = mid;
        else hi = mid;
    }
    return 0.5 * (lo + hi);
}

inline double fk(const pfcycle::MapDef& f, int k, double x) {
    for (int i = 0; i < k; ++i) x = f(x);
    return x;
}

/// b_1 = b, b_{j+1} solves f(x) = b_j on [0, b_j].
inline std::vector<double> b_chain(const pfcycle::MapDef& f, double b, int k) {
    std::vector<double> out{b};
    for (int j = 1; j < k; ++j) {
        const double target = out.back();
        out.push_back(root([&](double x) { return f(x) - target; }, 0.0, target));
    }
    return out;
}

/// f^{-k}(y) on [0, b_k] by bisection on f^k itself.
inline double inverse_fk(const pfcycle::MapDef& f, int k, double bk, double y) {
    return root([&](double x) { return fk(f, k, x) - y; }, 0.0, bk);
}

namespace ricker {
inline double psi1(double r, double x) { return std::exp(-r * (1.0 - x)); }
inline double psi1_zero(double r) { return std::exp(-r); }
inline double psi1_inverse(double r, double nu) { return 1.0 + std::log(nu) / r; }
}  // namespace ricker

/// Case generator for hand-rolled property tests.
class Gen {
public:
    explicit Gen(std::uint64_t seed) : eng_(seed) {}
    double uniform(double a, double b) { return std::uniform_real_distribution<double>(a, b)(eng_); }
    int integer(int a, int b) { return std::uniform_int_distribution<int>(a, b)(eng_); }
    template <class T>
    const T& pick(const std::vector<T>& v) {
        return v[static_cast<std::size_t>(integer(0, static_cast<int>(v.size()) - 1))];
    }

private:
    std::mt19937 eng_;
};

}  // namespace oracle
