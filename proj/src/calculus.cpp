#include "pfcycle/calculus.hpp"

#include <cmath>
#include <string>

#include "pfcycle/detail/bisect.hpp"
#include "pfcycle/detail/format.hpp"
#include "pfcycle/errors.hpp"

namespace pfcycle {

namespace {

// Solves f(x) = y for x in [0, hi], given 0 <= y <= f(hi) and f increasing there.
double invert_step(const MapDef& map, double y, double hi) {
    if (y == 0.0) return 0.0;
    if (!(map(hi) >= y)) fail(ErrorKind::Range, "inverse: target above f on the bracket");
    auto res = detail::bisect([&](double x) { return map(x) >= y; }, 0.0, hi);
    if (res.width > kTolInv) fail(ErrorKind::Numeric, "inverse: bisection did not converge");
    return res.x;
}

void check_phase(const IterateChain& chain, int j) {
    if (j < 1 || j > chain.k())
        fail(ErrorKind::Usage, "phase index " + std::to_string(j) + " outside [1, " + std::to_string(chain.k()) + "]");
}

}  // namespace

double IterateChain::b_at(int j) const {
    check_phase(*this, j);
    return b_seq_[static_cast<std::size_t>(j - 1)];
}

IterateChain build_chain(const MapDef& map, double b, int k) {
    if (k < 1) fail(ErrorKind::Usage, "build_chain: k must be >= 1");
    const double tail = default_tail_bound(map, b);
    if (!(b > 0.0) || !(tail > b)) fail(ErrorKind::Design, map.name() + ": threshold b out of range");
    const auto cert = certify_assumption1(map, b, 10000, tail);
    if (!cert.passed()) fail(ErrorKind::Design, map.name() + ": threshold b rejected: " + cert.reason);
    return build_chain_unchecked(map, b, k);
}

IterateChain build_chain_unchecked(const MapDef& map, double b, int k) {
    if (k < 1) fail(ErrorKind::Usage, "build_chain: k must be >= 1");
    std::vector<double> seq{b};
    seq.reserve(static_cast<std::size_t>(k));
    for (int j = 2; j <= k; ++j) {
        const double prev = seq.back();
        const double next = invert_step(map, prev, prev);
        if (!(next > 0.0 && next < prev)) fail(ErrorKind::Numeric, "build_chain: b_j sequence not strictly decreasing");
        seq.push_back(next);
    }
    const double f_b = map(b);
    return IterateChain(map, std::move(seq), f_b);
}

double iterate(const MapDef& map, int j, double x) {
    for (int i = 0; i < j; ++i) x = map(x);
    return x;
}

double iterate(const IterateChain& chain, int j, double x) {
    check_phase(chain, j);
    return iterate(chain.map(), j, x);
}

double inverse_iterate(const IterateChain& chain, int j, double y) {
    check_phase(chain, j);
    if (!(y >= 0.0) || !(y <= chain.f_b())) fail(ErrorKind::Range, "inverse_iterate: target outside [0, f(b)]");
    double x = y;
    for (int i = 1; i <= j; ++i) x = invert_step(chain.map(), x, chain.b_at(i));
    return x;
}

double psi_raw(const IterateChain& chain, double x) { return x / iterate(chain.map(), chain.k(), x); }

double psi_zero_limit(const IterateChain& chain) {
    double x = chain.b_k();
    double prev = psi_raw(chain, x);
    double prev_extrap = std::nan("");
    for (int i = 0; i < 1100; ++i) {
        x *= 0.5;
        if (x == 0.0) break;
        const double v = psi_raw(chain, x);
        if (!std::isfinite(v)) break;
        if (v < kTolLimit) return 0.0;
        if (v > prev * (1.0 + 1e-9)) fail(ErrorKind::Numeric, "psi_zero_limit: Psi_k not monotone near zero");
        const double extrap = 2.0 * v - prev;
        if (std::abs(extrap - prev_extrap) < kTolLimit) return std::max(extrap, 0.0);
        prev = v;
        prev_extrap = extrap;
    }
    fail(ErrorKind::Numeric, "psi_zero_limit: no convergence");
}

PsiFunction::PsiFunction(IterateChain chain)
    : chain_(std::move(chain)), psi_zero_(psi_zero_limit(chain_)), psi_bk_(psi_raw(chain_, chain_.b_k())) {
    if (!(psi_zero_ >= 0.0 && psi_zero_ < psi_bk_ && psi_bk_ < 1.0))
        fail(ErrorKind::Numeric, "Psi_k range violates 0 <= Psi(0) < Psi(b_k) < 1");
}

double psi(const PsiFunction& psi_fn, double x) {
    if (!(x > 0.0 && x < psi_fn.chain().b_k())) fail(ErrorKind::Domain, "psi: argument outside (0, b_k)");
    return psi_raw(psi_fn.chain(), x);
}

double psi_inverse(const PsiFunction& psi_fn, double mu) {
    if (!(mu > psi_fn.psi_zero() && mu < psi_fn.psi_bk()))
        fail(ErrorKind::Range, "gain " + detail::shortest(mu) + " outside the admissible interval (" +
                                   detail::shortest(psi_fn.psi_zero()) + ", " + detail::shortest(psi_fn.psi_bk()) + ")");
    const auto& chain = psi_fn.chain();
    auto res = detail::bisect([&](double x) { return psi_raw(chain, x) >= mu; }, 0.0, chain.b_k());
    if (res.width > kTolInv) fail(ErrorKind::Numeric, "psi_inverse: bisection did not converge");
    return res.x;
}

}  // namespace pfcycle
