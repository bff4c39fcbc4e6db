#include <doctest.h>

#include <sstream>

#include "pfcycle/config.hpp"
#include "pfcycle/verify.hpp"

using namespace pfcycle;

namespace {

VerifyReport run(const std::string& name) {
    const auto c = load_config(std::string(PF_CONFIG_DIR) + "/" + name + ".ini");
    const auto sys = resolve_system(c);
    const auto runs = ensemble(sys.spec, c.x0, c.N, noise_model(c), c.runs, c.threads);
    return verify_runs(c, sys, runs);
}

int count(const VerifyReport& r, CheckStatus s) {
    int n = 0;
    for (const auto& c : r.checks) n += c.status == s;
    return n;
}

}  // namespace

TEST_CASE("in-range multiplicative configs pass every check") {
    for (const char* name : {"fig1_left_in_range", "fig2_a_in_range"}) {
        INFO(name);
        const auto rep = run(name);
        CHECK(rep.checks.size() == 3);
        CHECK(rep.all_passed());
    }
}

TEST_CASE("infeasible designs skip the corridor checks") {
    for (const char* name : {"fig1_left", "fig1_right", "fig2_a", "fig2_b"}) {
        INFO(name);
        const auto rep = run(name);
        CHECK(count(rep, CheckStatus::Skipped) >= 1);
        CHECK(count(rep, CheckStatus::Pass) == 0);
        CHECK_FALSE(rep.all_passed());
    }
}

TEST_CASE("combined noise keeps the three phase clusters apart") {
    CHECK(run("fig2_c").all_passed());
    CHECK(run("fig2_c_in_range").all_passed());
}

TEST_CASE("shifted configs settle on the side of K1 where they start") {
    for (const char* name : {"fig3", "fig4_a", "fig4_b", "fig4_c", "fig5_a", "fig5_b", "fig6_a", "fig6_b", "fig7",
                             "fig8_a", "fig8_b"}) {
        INFO(name);
        CHECK(run(name).all_passed());
    }
}

TEST_CASE("a larger additive level near K1 lets runs escape to the other side") {
    const auto rep = run("fig5_c");
    REQUIRE(rep.checks.size() == 1);
    CHECK(rep.checks[0].status == CheckStatus::Fail);
}

TEST_CASE("the additive corridor is entered but its phase bounds do not hold") {
    // Noise enters at the first phase of each cycle, before k - 1 further map
    // applications, so the per-phase images of [y1, y2] are too narrow.
    const auto rep = run("fig2_b_in_range");
    REQUIRE(rep.checks.size() == 3);
    CHECK(rep.checks[0].status == CheckStatus::Pass);
    CHECK(rep.checks[2].status == CheckStatus::Fail);
}

TEST_CASE("the whole pipeline is reproducible") {
    const auto c = load_config(std::string(PF_CONFIG_DIR) + "/fig6_a.ini");
    const auto sys = resolve_system(c);
    auto csv = [&](int threads) {
        std::ostringstream out;
        write_trajectory_csv(out, ensemble(sys.spec, c.x0, c.N, noise_model(c), c.runs, threads));
        return out.str();
    };
    CHECK(csv(1) == csv(3));
}
