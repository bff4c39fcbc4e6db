#pragma once

// Iterates of f restricted to its increasing branch.
//
// With b certified, f maps [0, b] increasingly onto [0, f(b)]. The chain
// b_1 = b, b_{j+1} = f^{-1}(b_j) gives nested brackets on which f^j is
// increasing, and Psi_k(x) = x / f^k(x) is increasing on (0, b_k).

#include <vector>

#include "pfcycle/maps.hpp"

namespace pfcycle {

/// Absolute tolerance guaranteed by every inversion on x.
inline constexpr double kTolInv = 1e-12;
/// Convergence tolerance of the Psi_k(0) limit.
inline constexpr double kTolLimit = 1e-10;

class IterateChain {
public:
    const MapDef& map() const noexcept { return map_; }
    double b() const noexcept { return b_seq_.front(); }
    int k() const noexcept { return static_cast<int>(b_seq_.size()); }
    /// b_j for j in [1, k].
    double b_at(int j) const;
    double b_k() const noexcept { return b_seq_.back(); }
    const std::vector<double>& b_seq() const noexcept { return b_seq_; }
    /// f(b), the upper end of the reachable target range.
    double f_b() const noexcept { return f_b_; }

private:
    friend IterateChain build_chain(const MapDef&, double, int);
    friend IterateChain build_chain_unchecked(const MapDef&, double, int);
    IterateChain(MapDef map, std::vector<double> b_seq, double f_b)
        : map_(std::move(map)), b_seq_(std::move(b_seq)), f_b_(f_b) {}

    MapDef map_;
    std::vector<double> b_seq_;
    double f_b_;
};

/// Certifies (map, b) at resolution 10^4 with the default tail horizon, then
/// fills b_1 > b_2 > ... > b_k > 0. Throws Error(Design) when certification fails.
IterateChain build_chain(const MapDef& map, double b, int k);

/// As build_chain, but trusts the caller's threshold (no certification pass).
IterateChain build_chain_unchecked(const MapDef& map, double b, int k);

/// f^j(x) by j-fold composition, for any x >= 0 in the map's domain.
double iterate(const MapDef& map, int j, double x);
/// f^j(x) with j in [1, k].
double iterate(const IterateChain& chain, int j, double x);

/// The unique x in [0, b_j] with f^j(x) = y, for 0 <= y <= f(b); computed as j
/// nested single-step bisections, step i inside [0, b_i].
double inverse_iterate(const IterateChain& chain, int j, double y);

class PsiFunction {
public:
    explicit PsiFunction(IterateChain chain);

    const IterateChain& chain() const noexcept { return chain_; }
    int k() const noexcept { return chain_.k(); }
    /// lim_{x -> 0+} x / f^k(x).
    double psi_zero() const noexcept { return psi_zero_; }
    /// Psi_k(b_k) = b_k / f(b).
    double psi_bk() const noexcept { return psi_bk_; }

private:
    IterateChain chain_;
    double psi_zero_;
    double psi_bk_;
};

/// x / f^k(x) for x in (0, b_k).
double psi(const PsiFunction& psi_fn, double x);

/// x / f^k(x) without the domain check (used by scans that touch b_k itself).
double psi_raw(const IterateChain& chain, double x);

/// Numerical Psi_k(0): evaluates at x = b_k 2^{-i} with one Richardson step per
/// level, stops once successive extrapolants differ by less than kTolLimit.
/// Returns 0 once the values drop below kTolLimit (f^k(x)/x unbounded near 0).
double psi_zero_limit(const IterateChain& chain);
inline double psi_zero_limit(const PsiFunction& psi_fn) { return psi_fn.psi_zero(); }

/// Unique x in (0, b_k) with Psi_k(x) = mu. Throws Error(Range) unless
/// psi_zero < mu < psi_bk.
double psi_inverse(const PsiFunction& psi_fn, double mu);

}  // namespace pfcycle
