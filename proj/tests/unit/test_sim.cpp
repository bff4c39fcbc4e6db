#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <sstream>

#include "../support/oracles.hpp"
#include "pfcycle/design.hpp"
#include "pfcycle/errors.hpp"
#include "pfcycle/sim.hpp"

using namespace pfcycle;

namespace {

SystemSpec ricker_spec(Scheme s, double nu, double l1 = 0.0, double l2 = 0.0, int k = 3) {
    return SystemSpec{s, MapDef::ricker(2.8), k, nu, l1, l2};
}

SystemSpec cubic_shifted(Scheme s, double nu, double l1 = 0.0, double l2 = 0.0, int k = 1) {
    return SystemSpec{s, MapDef::cubic45(), k, nu, l1, l2, 1.0 / 3.0};
}

NoiseModel seeded(std::uint64_t seed) {
    NoiseModel m;
    m.seed = seed;
    return m;
}

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

TEST_CASE("step examples") {
    const auto det = ricker_spec(Scheme::DetPF, 0.002);
    CHECK(step(det, 1, 1.0).x == 1.0);
    CHECK(step(det, 0, 1.0).x == MapDef::ricker(2.8)(0.002));

    auto add = ricker_spec(Scheme::AddNoise, 0.002, 0.0, 5.0);
    const auto clamped = step(add, 0, 0.5, -1.0);
    CHECK(clamped.x == 0.0);
    CHECK(clamped.clamped);

    const auto toc = cubic_shifted(Scheme::ShiftedDetPF, 0.7);
    CHECK(step(toc, 0, 1.0 / 3.0).x == 1.0 / 3.0);

    const auto mult0 = ricker_spec(Scheme::MultNoise, 0.002);
    CHECK(step(mult0, 0, 0.7, 0.9).x == step(det, 0, 0.7).x);
}

TEST_CASE("combined noise shares one draw unless asked otherwise") {
    const auto f = MapDef::ricker(2.8);
    auto spec = ricker_spec(Scheme::CombinedNoise, 0.02, 0.001, 0.01);
    CHECK(step(spec, 0, 0.5, 0.4).x == f((0.02 + 0.001 * 0.4) * 0.5) + 0.01 * 0.4);
    CHECK(step(spec, 0, 0.5, 0.4, -0.2).x == f((0.02 + 0.001 * 0.4) * 0.5) + 0.01 * -0.2);

    const auto t1 = simulate(spec, 0.5, 30, seeded(1));
    CHECK(t1.noise_draws == 10);
    spec.independent_noises = true;
    const auto t2 = simulate(spec, 0.5, 30, seeded(1));
    CHECK(t2.noise_draws == 20);
}

TEST_CASE("shifted noisy perturbs both occurrences of nu") {
    const auto f = MapDef::cubic45();
    const auto spec = cubic_shifted(Scheme::ShiftedNoisy, 0.7, 0.01, 0.002);
    const double K1 = 1.0 / 3.0, x = 0.6, chi = -0.5;
    const double gain = 0.7 + 0.01 * chi;
    CHECK(step(spec, 0, x, chi).x == f(K1 + gain * (x - K1)) + 0.002 * chi);
}

TEST_CASE("spec validation") {
    CHECK(kind_of([] { ricker_spec(Scheme::DetPF, 0.5, 0.1).validate(); }) == ErrorKind::Parameter);
    CHECK(kind_of([] { ricker_spec(Scheme::MultNoise, 0.5, 0.0, 0.1).validate(); }) == ErrorKind::Parameter);
    CHECK(kind_of([] { ricker_spec(Scheme::AddNoise, 0.5, 0.1).validate(); }) == ErrorKind::Parameter);
    CHECK(kind_of([] { ricker_spec(Scheme::MultNoise, 0.01, 0.01).validate(); }) == ErrorKind::Parameter);
    CHECK(kind_of([] { ricker_spec(Scheme::CombinedNoise, 0.01, 0.02, 0.1).validate(); }) == ErrorKind::Parameter);
    CHECK(kind_of([] { ricker_spec(Scheme::DetPF, 0.0).validate(); }) == ErrorKind::Parameter);
    CHECK(kind_of([] { ricker_spec(Scheme::DetPF, 1.5).validate(); }) == ErrorKind::Parameter);
    CHECK(kind_of([] { ricker_spec(Scheme::DetPF, 0.5, 0.0, 0.0, 0).validate(); }) == ErrorKind::Parameter);
    CHECK(kind_of([] { ricker_spec(Scheme::AddNoise, 0.5, 0.0, -0.1).validate(); }) == ErrorKind::Parameter);
    auto toc = cubic_shifted(Scheme::ShiftedDetPF, 0.7);
    toc.K1 = 1.5;
    CHECK(kind_of([&] { toc.validate(); }) == ErrorKind::Parameter);
    CHECK(kind_of([] { simulate(ricker_spec(Scheme::DetPF, 0.5), 0.0, 10, {}); }) == ErrorKind::Parameter);
    CHECK(kind_of([] { simulate(ricker_spec(Scheme::DetPF, 0.5), 0.5, 0, {}); }) == ErrorKind::Parameter);
    CHECK(scheme_from_string("shifted_noisy") == Scheme::ShiftedNoisy);
    CHECK(kind_of([] { scheme_from_string("pulse"); }) == ErrorKind::Config);
}

TEST_CASE("control schedule fires when k divides n") {
    const auto t = simulate(ricker_spec(Scheme::MultNoise, 0.002, 0.0001), 0.5, 10, seeded(3));
    CHECK(t.control_steps() == std::vector<std::int64_t>{0, 3, 6, 9});
    CHECK(t.controlled(0));
    CHECK_FALSE(t.controlled(1));
    CHECK(t.controlled(9));
    CHECK_FALSE(t.controlled(10));
    CHECK(t.noise_draws == 4);
    CHECK(t.values.size() == 11);
    CHECK(t.values[0] == 0.5);
}

TEST_CASE("noise-off schemes reduce to deterministic PF bitwise") {
    const auto det = simulate(ricker_spec(Scheme::DetPF, 0.002), 0.5, 500, seeded(1));
    CHECK(simulate(ricker_spec(Scheme::MultNoise, 0.002), 0.5, 500, seeded(1)).values == det.values);
    CHECK(simulate(ricker_spec(Scheme::AddNoise, 0.002), 0.5, 500, seeded(1)).values == det.values);
    CHECK(simulate(ricker_spec(Scheme::CombinedNoise, 0.002), 0.5, 500, seeded(1)).values == det.values);
    const auto toc = simulate(cubic_shifted(Scheme::ShiftedDetPF, 0.7), 0.6, 200, seeded(1));
    CHECK(simulate(cubic_shifted(Scheme::ShiftedNoisy, 0.7), 0.6, 200, seeded(1)).values == toc.values);
}

TEST_CASE("different lengths share their prefix") {
    const auto spec = ricker_spec(Scheme::CombinedNoise, 0.002, 0.0001, 0.0005);
    const auto a = simulate(spec, 0.5, 100, seeded(8));
    const auto b = simulate(spec, 0.5, 250, seeded(8));
    CHECK(std::equal(a.values.begin(), a.values.end(), b.values.begin()));
}

TEST_CASE("additive noise keeps values non-negative and counts truncations") {
    const auto spec = ricker_spec(Scheme::AddNoise, 0.002, 0.0, 1.0, 1);
    const auto t = simulate(spec, 0.5, 2000, seeded(4));
    CHECK(*std::min_element(t.values.begin(), t.values.end()) >= 0.0);
    CHECK(t.clamp_count > 0);
}

TEST_CASE("numeric failures carry the step index") {
    const auto explode = MapDef::custom("explode", [](double x) { return x * 1e200; });
    try {
        simulate(SystemSpec{Scheme::DetPF, explode, 1, 1.0}, 1.0, 10, {});
        FAIL("expected a SimulationError");
    } catch (const SimulationError& e) {
        CHECK(e.step() == 2);
        CHECK(e.kind() == ErrorKind::Numeric);
    }
    const auto leave = MapDef::custom("leave", [](double x) { return x + 2.0; }, 1.0);
    try {
        simulate(SystemSpec{Scheme::DetPF, leave, 1, 1.0}, 0.5, 10, {});
        FAIL("expected a SimulationError");
    } catch (const SimulationError& e) {
        CHECK(e.step() == 2);
    }
}

TEST_CASE("phase map matches the subsampled additive recursion for k = 1") {
    const auto spec = ricker_spec(Scheme::AddNoise, 0.3, 0.0, 0.05, 1);
    const auto t = simulate(spec, 0.5, 400, seeded(6));
    const auto z = phase_map_sequence(spec, 0.5, 400, seeded(6));
    REQUIRE(z.size() == t.values.size());
    double worst = 0.0;
    for (std::size_t m = 0; m < z.size(); ++m) worst = std::max(worst, std::abs(z[m] - t.values[m]));
    CHECK(worst < 1e-12);
    CHECK_THROWS_AS(phase_map_sequence(ricker_spec(Scheme::MultNoise, 0.3, 0.01), 0.5, 10, {}), Error);
}

TEST_CASE("deterministic PF from several starts converges to the 3-cycle") {
    // Fixed point of g(z) = f^3(nu z) near the top of the cycle, by bisection.
    const auto f = MapDef::ricker(2.8);
    const double nu = 0.002;
    const double z = oracle::root([&](double x) { return oracle::fk(f, 3, nu * x) - x; }, 1.4, 1.7);
    for (double x0 : {0.1, 0.5, 2.0}) {
        const auto t = simulate(ricker_spec(Scheme::DetPF, nu), x0, 3000, {});
        for (std::int64_t m = 990; m < 1000; ++m) {
            CHECK(std::abs(t.values[3 * m + 3] - z) < 1e-6);
            CHECK(std::abs(t.values[3 * m + 1] - f(nu * z)) < 1e-6);
        }
    }
}

TEST_CASE("deterministic PF reaches a designed cycle") {
    const auto d = design_from_nu(PsiFunction(build_chain(MapDef::ricker(2.8), 1.0 / 2.8, 3)), 0.0005);
    const auto t = simulate(ricker_spec(Scheme::DetPF, d.nu), 0.5, 3000, {});
    for (int j = 1; j <= 3; ++j) CHECK(t.values[2997 + j] == doctest::Approx(d.cycle[j - 1]).epsilon(1e-9));
}

TEST_CASE("ensembles use substreams and do not depend on threads") {
    const auto spec = ricker_spec(Scheme::MultNoise, 0.0005, 0.0001);
    const auto serial = ensemble(spec, 0.5, 300, seeded(10), 6, 1);
    const auto parallel = ensemble(spec, 0.5, 300, seeded(10), 6, 4);
    REQUIRE(serial.size() == 6);
    for (std::size_t i = 0; i < 6; ++i) {
        CHECK(serial[i].values == parallel[i].values);
        CHECK(serial[i].values == simulate(spec, 0.5, 300, substream(seeded(10), i)).values);
    }
    CHECK(serial[0].values != serial[1].values);
    CHECK_THROWS_AS(ensemble(spec, 0.5, 300, seeded(10), 0), Error);
}

TEST_CASE("trajectory CSV") {
    const auto t = simulate(ricker_spec(Scheme::DetPF, 0.5, 0.0, 0.0, 2), 0.25, 3, {});
    std::ostringstream out;
    write_trajectory_csv(out, std::span(&t, 1));
    std::istringstream in(out.str());
    std::string line;
    std::getline(in, line);
    CHECK(line == "run,n,x,controlled");
    std::getline(in, line);
    CHECK(line == "0,0,0.25,1");
    std::getline(in, line);
    const auto f = MapDef::ricker(2.8);
    std::ostringstream expect;
    expect.precision(17);
    CHECK(std::stod(line.substr(4, line.size() - 6)) == f(0.5 * 0.25));
    CHECK(line.back() == '0');
    int rows = 2;
    while (std::getline(in, line)) ++rows;
    CHECK(rows == 4);
}
