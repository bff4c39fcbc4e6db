#include <doctest.h>

#include <cmath>

#include "../support/oracles.hpp"
#include "pfcycle/errors.hpp"
#include "pfcycle/maps.hpp"

using namespace pfcycle;

namespace {

ErrorKind kind_of(const std::function<void()>& fn) {
    try {
        fn();
    } catch (const Error& e) {
        return e.kind();
    }
    FAIL("expected an Error");
    return ErrorKind::Usage;
}

}  // namespace

TEST_CASE("ricker evaluates x exp(r(1-x))") {
    const auto f = MapDef::ricker(2.8);
    CHECK(f(0.0) == 0.0);
    CHECK(f(1.0) == 1.0);
    for (double x : {0.1, 0.357, 2.0, 7.5}) CHECK(f(x) == doctest::Approx(x * std::exp(2.8 * (1.0 - x))).epsilon(1e-15));
    CHECK(f.param("r") == 2.8);
    CHECK(f.name() == "ricker");
}

TEST_CASE("logistic is truncated at zero beyond 1") {
    const auto f = MapDef::logistic(3.8);
    CHECK(f(0.5) == doctest::Approx(0.95));
    CHECK(f(1.0) == 0.0);
    CHECK(f(1.5) == 0.0);
}

TEST_CASE("quail map and its default parameters") {
    const auto f = MapDef::quail_camwa();
    CHECK(f(1.0) == doctest::Approx(0.55 + 3.45 / 2.0));
    const auto g = MapDef::from_params(MapFamily::Quail, {});
    CHECK(g.same_as(f));
    const auto h = MapDef::from_params(MapFamily::Quail, {{"gamma", 8.0}});
    CHECK_FALSE(h.same_as(f));
}

TEST_CASE("cubic maps hit their fixed points exactly") {
    const auto f = MapDef::cubic45();
    const double third = 1.0 / 3.0;
    CHECK(f(third) == third);
    CHECK(f(2.0 / 3.0) == doctest::Approx(2.0 / 3.0).epsilon(1e-15));
    CHECK(f(1.0) == 0.0);
    const auto g = MapDef::cubic6();
    const double K1 = (1.0 - 1.0 / std::sqrt(3.0)) / 2.0;
    CHECK(find_fixed_point(g, 0.1, 0.3) == doctest::Approx(K1).epsilon(1e-13));
}

TEST_CASE("evaluation outside the domain is a domain error") {
    const auto f = MapDef::cubic45();
    CHECK(kind_of([&] { f(1.0000001); }) == ErrorKind::Domain);
    CHECK(kind_of([&] { f(-1e-300); }) == ErrorKind::Domain);
    CHECK(kind_of([&] { MapDef::ricker(1.0)(std::nan("")); }) == ErrorKind::Domain);
    CHECK(kind_of([&] { MapDef::ricker(1.0)(INFINITY); }) == ErrorKind::Domain);
}

TEST_CASE("bad parameters are rejected") {
    CHECK(kind_of([] { MapDef::ricker(0.0); }) == ErrorKind::Parameter);
    CHECK(kind_of([] { MapDef::ricker(-1.0); }) == ErrorKind::Parameter);
    CHECK(kind_of([] { MapDef::logistic(NAN); }) == ErrorKind::Parameter);
    CHECK(kind_of([] { MapDef::quail(0.5, 3.0, 1.0); }) == ErrorKind::Parameter);
    CHECK(kind_of([] { MapDef::custom("none", {}); }) == ErrorKind::Parameter);
    CHECK(kind_of([] { MapDef::from_params(MapFamily::Ricker, {}); }) == ErrorKind::Config);
    CHECK(kind_of([] { MapDef::from_params(MapFamily::Custom, {}); }) == ErrorKind::Config);
    CHECK(kind_of([] { MapDef::ricker(2.0).param("A"); }) == ErrorKind::Usage);
}

TEST_CASE("family names round-trip") {
    for (auto fam : {MapFamily::Ricker, MapFamily::LogisticTruncated, MapFamily::Quail, MapFamily::Cubic45,
                     MapFamily::Cubic6})
        CHECK(map_family_from_string(to_string(fam)) == fam);
    CHECK(kind_of([] { map_family_from_string("tent"); }) == ErrorKind::Config);
}

TEST_CASE("custom maps compare by name") {
    const auto a = MapDef::custom("half", [](double x) { return 0.5 * x; });
    const auto b = MapDef::custom("half", [](double x) { return 0.5 * x; });
    CHECK(a(4.0) == 2.0);
    CHECK(a.same_as(b));
    CHECK_FALSE(a.same_as(MapDef::ricker(2.0)));
}

TEST_CASE("certifier accepts the monotone branch and rejects beyond the peak") {
    const auto f = MapDef::ricker(2.8);
    const auto ok = certify_assumption1(f, 1.0 / 2.8, 10000, 10.0);
    CHECK(ok.passed());
    CHECK(ok.reason.empty());

    const auto past_peak = certify_assumption1(f, 0.6, 10000, 10.0);
    CHECK_FALSE(past_peak.passed());
    REQUIRE(past_peak.violation_x.has_value());
    CHECK(*past_peak.violation_x > 1.0 / 2.8);
    CHECK(*past_peak.violation_x <= 0.6);

    // f(b) <= b: Ricker with r = 0.5 never exceeds the diagonal for x >= 1.
    CHECK_FALSE(certify_assumption1(MapDef::ricker(0.5), 2.0, 10000, 20.0).passed());
}

TEST_CASE("cubic maps fail the ratio test near zero") {
    for (const auto& f : {MapDef::cubic45(), MapDef::cubic6()}) {
        const auto cert = certify_assumption1(f, 0.5, 10000, 1.0);
        CHECK_FALSE(cert.passed());
        CHECK(cert.reason.find("f(x)/x") != std::string::npos);
        CHECK(kind_of([&] { default_b(f); }) == ErrorKind::Certification);
    }
}

TEST_CASE("certifier usage errors") {
    const auto f = MapDef::ricker(2.0);
    CHECK(kind_of([&] { certify_assumption1(f, 0.0, 10000, 10.0); }) == ErrorKind::Usage);
    CHECK(kind_of([&] { certify_assumption1(f, 0.5, 999, 10.0); }) == ErrorKind::Usage);
    CHECK(kind_of([&] { certify_assumption1(f, 0.5, 10000, 0.5); }) == ErrorKind::Usage);
}

TEST_CASE("default thresholds") {
    CHECK(default_b(MapDef::ricker(2.8)) == 1.0 / 2.8);
    CHECK(default_b(MapDef::logistic(3.8)) == 0.5);

    // Quail: first local maximum, against a dense-grid argmax.
    const auto q = MapDef::quail_camwa();
    double best_x = 0.0, best = 0.0;
    for (int i = 1; i <= 2000000; ++i) {
        const double x = 2.0 * i / 2000000.0;
        const double v = q(x);
        if (v < best) break;
        best = v;
        best_x = x;
    }
    CHECK(default_b(q) == doctest::Approx(best_x).epsilon(1e-5));
    CHECK(default_b(q) == doctest::Approx(0.81079).epsilon(1e-4));
}

TEST_CASE("first local maximum") {
    CHECK(*first_local_max(MapDef::ricker(2.8)) == doctest::Approx(1.0 / 2.8).epsilon(1e-6));
    CHECK(*first_local_max(MapDef::cubic45()) == doctest::Approx(2.0 / 3.0).epsilon(1e-6));
    CHECK_FALSE(first_local_max(MapDef::custom("line", [](double x) { return 2.0 * x; }, 5.0)).has_value());
}

TEST_CASE("find_fixed_point needs a sign change") {
    const auto f = MapDef::ricker(2.8);
    CHECK(find_fixed_point(f, 0.5, 2.0) == doctest::Approx(1.0).epsilon(1e-14));
    CHECK_THROWS_AS(find_fixed_point(f, 2.0, 3.0), Error);
}

TEST_CASE("registry: every monotone-branch map certifies at its default b") {
    for (const auto& f : assumption1_maps()) {
        const double b = default_b(f);
        INFO(f.name());
        CHECK(certify_assumption1(f, b, 10000, default_tail_bound(f, b)).passed());
        CHECK(f(b) > b);
    }
    CHECK(registered_maps().size() == 5);
}

TEST_CASE("property: f increasing and f(x)/x decreasing on (0, b]") {
    oracle::Gen gen(11);
    const auto maps = assumption1_maps();
    for (int trial = 0; trial < 200; ++trial) {
        const auto& f = gen.pick(maps);
        const double b = default_b(f);
        double x = gen.uniform(1e-6, b), y = gen.uniform(1e-6, b);
        if (x > y) std::swap(x, y);
        if (y - x < 1e-9) continue;
        INFO(f.name() << " x=" << x << " y=" << y);
        CHECK(f(x) < f(y));
        CHECK(f(y) / y <= f(x) / x * (1.0 + kRatioRelTol));
    }
}
