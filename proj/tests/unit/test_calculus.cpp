#include <doctest.h>

#include <cmath>

#include "../support/oracles.hpp"
#include "pfcycle/calculus.hpp"
#include "pfcycle/errors.hpp"

using namespace pfcycle;

namespace {

template <class F>
ErrorKind kind_of(F&& fn) {
    try {
        fn();
    } catch (const Error& e) {
        return e.kind();
    }
    return ErrorKind::Usage;
}

}  // namespace

TEST_CASE("b-chain of the Ricker map against plain bisection") {
    const auto f = MapDef::ricker(2.8);
    const auto chain = build_chain(f, 1.0 / 2.8, 4);
    const auto ref = oracle::b_chain(f, 1.0 / 2.8, 4);
    REQUIRE(chain.k() == 4);
    for (int j = 1; j <= 4; ++j) CHECK(chain.b_at(j) == doctest::Approx(ref[j - 1]).epsilon(1e-12));
    CHECK(chain.b_at(2) == doctest::Approx(0.023174).epsilon(1e-4));
    CHECK(chain.b_at(3) == doctest::Approx(0.0014148).epsilon(1e-4));
    CHECK(chain.f_b() == doctest::Approx(std::exp(1.8) / 2.8).epsilon(1e-14));
    for (int j = 2; j <= 4; ++j) CHECK(chain.b_at(j) < chain.b_at(j - 1));
}

TEST_CASE("build_chain rejects uncertified thresholds") {
    CHECK(kind_of([] { build_chain(MapDef::ricker(2.8), 0.6, 3); }) == ErrorKind::Design);
    CHECK(kind_of([] { build_chain(MapDef::cubic45(), 0.5, 1); }) == ErrorKind::Design);
    CHECK(kind_of([] { build_chain(MapDef::ricker(2.8), 0.2, 0); }) == ErrorKind::Usage);
}

TEST_CASE("iterate composes f and checks the phase index") {
    const auto f = MapDef::ricker(2.0);
    CHECK(iterate(f, 0, 0.3) == 0.3);
    CHECK(iterate(f, 3, 0.3) == f(f(f(0.3))));
    const auto chain = build_chain(f, 0.5, 2);
    CHECK(iterate(chain, 2, 0.1) == f(f(0.1)));
    CHECK(kind_of([&] { iterate(chain, 3, 0.1); }) == ErrorKind::Usage);
    CHECK(kind_of([&] { iterate(chain, 0, 0.1); }) == ErrorKind::Usage);
    CHECK(kind_of([&] { chain.b_at(5); }) == ErrorKind::Usage);
}

TEST_CASE("inverse_iterate inverts f^j on the monotone branch") {
    const auto f = MapDef::quail_camwa();
    const auto chain = build_chain(f, default_b(f), 3);
    CHECK(inverse_iterate(chain, 3, 0.0) == 0.0);
    // f is flat at its peak, so x is only resolved to about sqrt(machine epsilon) there.
    CHECK(inverse_iterate(chain, 1, chain.f_b()) == doctest::Approx(chain.b()).epsilon(1e-6));
    for (int j = 1; j <= 3; ++j) {
        const double y = 0.37 * chain.f_b();
        const double x = inverse_iterate(chain, j, y);
        CHECK(x <= chain.b_at(j));
        CHECK(iterate(f, j, x) == doctest::Approx(y).epsilon(1e-10));
        CHECK(x == doctest::Approx(oracle::inverse_fk(f, j, chain.b_at(j), y)).epsilon(1e-10));
    }
    CHECK(kind_of([&] { inverse_iterate(chain, 2, -0.1); }) == ErrorKind::Range);
    CHECK(kind_of([&] { inverse_iterate(chain, 2, chain.f_b() * 1.001); }) == ErrorKind::Range);
}

TEST_CASE("psi limits at zero equal f'(0)^{-k}") {
    // Ricker: f'(0) = e^r. Quail: f'(0) = A + B. Logistic: f'(0) = r.
    CHECK(PsiFunction(build_chain(MapDef::ricker(2.8), 1.0 / 2.8, 3)).psi_zero() ==
          doctest::Approx(std::exp(-8.4)).epsilon(1e-8));
    const auto q = MapDef::quail_camwa();
    CHECK(PsiFunction(build_chain(q, default_b(q), 3)).psi_zero() == doctest::Approx(1.0 / 64.0).epsilon(1e-8));
    CHECK(PsiFunction(build_chain(MapDef::logistic(3.8), 0.5, 2)).psi_zero() ==
          doctest::Approx(1.0 / (3.8 * 3.8)).epsilon(1e-8));
}

TEST_CASE("psi_bk is b_k / f(b)") {
    const auto chain = build_chain(MapDef::ricker(2.8), 1.0 / 2.8, 3);
    const PsiFunction psi_fn(chain);
    CHECK(psi_fn.psi_bk() == doctest::Approx(chain.b_k() / chain.f_b()).epsilon(1e-12));
    CHECK(psi_fn.psi_bk() == doctest::Approx(6.548e-4).epsilon(1e-3));
    CHECK(psi_fn.psi_bk() < 1.0);
}

TEST_CASE("Ricker k = 1 closed forms") {
    for (double r : {1.5, 2.8, 3.5}) {
        const PsiFunction psi_fn(build_chain(MapDef::ricker(r), 1.0 / r, 1));
        CHECK(psi_fn.psi_zero() == doctest::Approx(oracle::ricker::psi1_zero(r)).epsilon(1e-9));
        for (int i = 1; i < 20; ++i) {
            const double x = i / 20.0 / r;
            CHECK(psi(psi_fn, x) == doctest::Approx(oracle::ricker::psi1(r, x)).epsilon(1e-12));
            const double nu = oracle::ricker::psi1(r, x);
            CHECK(psi_inverse(psi_fn, nu) == doctest::Approx(oracle::ricker::psi1_inverse(r, nu)).epsilon(1e-10));
        }
    }
}

TEST_CASE("psi domain and range errors") {
    const PsiFunction psi_fn(build_chain(MapDef::ricker(2.8), 1.0 / 2.8, 3));
    CHECK(kind_of([&] { psi(psi_fn, 0.0); }) == ErrorKind::Domain);
    CHECK(kind_of([&] { psi(psi_fn, psi_fn.chain().b_k()); }) == ErrorKind::Domain);
    CHECK(kind_of([&] { psi_inverse(psi_fn, psi_fn.psi_zero()); }) == ErrorKind::Range);
    CHECK(kind_of([&] { psi_inverse(psi_fn, psi_fn.psi_bk()); }) == ErrorKind::Range);
    CHECK(kind_of([&] { psi_inverse(psi_fn, 0.002); }) == ErrorKind::Range);
}

TEST_CASE("property: psi strictly increasing and psi_inverse its inverse") {
    oracle::Gen gen(7);
    const auto maps = assumption1_maps();
    for (int trial = 0; trial < 60; ++trial) {
        const auto& f = gen.pick(maps);
        const int k = gen.integer(1, 4);
        const PsiFunction psi_fn(build_chain(f, default_b(f), k));
        const double bk = psi_fn.chain().b_k();
        double x = gen.uniform(0.0, bk), y = gen.uniform(0.0, bk);
        if (x > y) std::swap(x, y);
        if (x <= 0.0 || y - x < 1e-12 * bk) continue;
        INFO(f.name() << " k=" << k << " x=" << x << " y=" << y);
        CHECK(psi(psi_fn, x) < psi(psi_fn, y));
        CHECK(psi(psi_fn, x) > psi_fn.psi_zero());
        CHECK(psi(psi_fn, y) < psi_fn.psi_bk());
        CHECK(psi_inverse(psi_fn, psi(psi_fn, x)) == doctest::Approx(x).epsilon(1e-8));
    }
}
