#include "doctest.h"

#include <chrono>
#include <cmath>
#include <numbers>

#include "bellri/error.hpp"
#include "bellri/optimizer.hpp"
#include "bellri/qmodel.hpp"

using namespace bellri;
using namespace bellri::optimizer;

namespace {

const double kTsirelson = 2.0 * std::numbers::sqrt2;

// Pearson CHSH on the slice a0 = x, a1 = cos t x + sin t y, state
// cos a|00> + sin a|11> with cos 2a sin t = eta, Bob optimal in the xy plane:
// 2 sin 2a (cos t/2 + sin t/2).
double slice_oracle(double eta, int points) {
    double best = 0.0;
    const double t0 = std::asin(eta);
    for (int k = 0; k <= points; ++k) {
        const double t = t0 + (std::numbers::pi / 2 - t0) * k / points;
        const double c2a = eta / std::sin(t);
        const double s2a = std::sqrt(std::max(0.0, 1.0 - c2a * c2a));
        best = std::max(best, 2.0 * s2a * (std::cos(t / 2) + std::sin(t / 2)));
    }
    return best;
}

}  // namespace

TEST_SUITE("optimizer") {

TEST_CASE("parameter round trip and total decoding") {
    std::vector<double> x{0.3, -7.0, 12.0, 1.0, 2.0, 3.0, 4.0, 5.0, 6.0};
    const auto p = ScenarioParams::unflatten(x);
    CHECK(p.flatten() == x);
    const auto sc = p.decode();
    CHECK_NOTHROW(sc.validate());
    CHECK(sc.dims == std::vector<std::size_t>{2, 2});
    CHECK_THROWS_AS(ScenarioParams::unflatten(std::vector<double>(8)), MalformedInput);
}

TEST_CASE("slice oracle reproduces a direct evaluation") {
    // t = pi/2, cos 2a = eta = 0.5
    const double a = 0.5 * std::acos(0.5);
    ScenarioParams p;
    p.schmidt_angle = a;
    p.observables[0] = {std::numbers::pi / 2, 0.0};
    p.observables[1] = {std::numbers::pi / 2, std::numbers::pi / 2};
    // Bob along T(a0 + a1) and T(a0 - a1), T = diag(s, -s, 1)
    p.observables[2] = {std::numbers::pi / 2, -std::numbers::pi / 4};
    p.observables[3] = {std::numbers::pi / 2, std::numbers::pi / 4};
    const auto sc = p.decode();
    const auto m = qmodel::moments(sc);
    CHECK(m.alice.eta == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(std::abs(m.chsh()) == doctest::Approx(2.0 * std::sin(2 * a) * std::numbers::sqrt2).epsilon(1e-12));
    CHECK(slice_oracle(0.5, 2000) == doctest::Approx(kTsirelson * std::sqrt(0.75)).epsilon(1e-6));
}

TEST_CASE("nelder mead finds a quadratic maximum") {
    const VectorObjective f = [](std::span<const double> x) {
        return -(x[0] - 1.0) * (x[0] - 1.0) - 2.0 * (x[1] + 2.0) * (x[1] + 2.0);
    };
    const auto r = nelder_mead_max(f, {0.0, 0.0}, 0.5, 2000, 1e-14);
    CHECK(r.x[0] == doctest::Approx(1.0).epsilon(1e-5));
    CHECK(r.x[1] == doctest::Approx(-2.0).epsilon(1e-5));
    CHECK(r.value <= 0.0);
    CHECK(r.trajectory_max == r.value);
    CHECK(r.evaluations <= 2000 + 3);
}

TEST_CASE("non-finite objective aborts with a dump") {
    const VectorObjective f = [](std::span<const double> x) { return x[0] > 0.2 ? std::nan("") : x[0]; };
    try {
        (void)nelder_mead_max(f, {0.0}, 0.5, 100, 1e-12);
        FAIL("expected NonFiniteObjective");
    } catch (const NonFiniteObjective& e) {
        CHECK(std::string(e.what()).find("[") != std::string::npos);
    }
}

TEST_CASE("constant objective") {
    OptConfig cfg;
    cfg.restarts = 3;
    const auto r = maximize([](const qmodel::QuantumScenario&) { return 1.25; }, cfg);
    CHECK(r.best_value == 1.25);
    CHECK(r.best_restart == 0);
    CHECK(r.trace.size() == 3);
}

TEST_CASE("chsh maximum reaches the Tsirelson value without overshooting") {
    OptConfig cfg;
    cfg.restarts = 8;
    cfg.seed = 3;
    const auto r = maximize(chsh_objective, cfg);
    CHECK(r.best_value >= kTsirelson - 1e-6);
    CHECK(r.best_value <= kTsirelson + 1e-9);
    CHECK(r.trajectory_max <= kTsirelson + 1e-9);
    CHECK(std::abs(chsh_objective(r.best_params.decode()) - r.best_value) <= 1e-12);
    for (std::size_t i = 0; i < r.trace.size(); ++i) CHECK(r.trace[i] <= r.best_value);
}

TEST_CASE("results are reproducible and schedule independent") {
    OptConfig cfg;
    cfg.restarts = 4;
    cfg.max_evals = 800;
    cfg.seed = 11;
    const auto a = maximize(chsh_objective, cfg);
    const auto b = maximize(chsh_objective, cfg);
    cfg.parallel = false;
    const auto c = maximize(chsh_objective, cfg);
    CHECK(a.best_value == b.best_value);
    CHECK(a.best_params.flatten() == b.best_params.flatten());
    CHECK(a.trace == c.trace);
    CHECK(a.best_params.flatten() == c.best_params.flatten());
    CHECK(a.evaluations == c.evaluations);
    cfg.seed = 12;
    CHECK(maximize(chsh_objective, cfg).trace != a.trace);
}

TEST_CASE("degenerate scenarios score zero") {
    ScenarioParams p;  // product state |00>, every observable along z
    CHECK(chsh_objective(p.decode()) == 0.0);
}

TEST_CASE("eta-constrained maximum matches the slice oracle") {
    OptConfig cfg;
    cfg.restarts = 8;
    cfg.seed = 5;
    const std::array<double, 1> grid{0.5};
    const auto pts = trace_eta_curve(grid, cfg);
    REQUIRE(pts.size() == 1);
    CHECK(pts[0].feasible);
    CHECK(std::abs(pts[0].achieved_eta - 0.5) <= 1e-3);
    CHECK(std::abs(pts[0].max_chsh - slice_oracle(0.5, 4000)) <= 5e-3);
    CHECK(pts[0].max_chsh <= pts[0].bound + 5e-3);
}

TEST_CASE("eta curve endpoints") {
    OptConfig cfg;
    cfg.restarts = 6;
    cfg.seed = 9;
    const std::array<double, 3> grid{0.0, 1.0 / std::numbers::sqrt2, 1.0};
    const auto pts = trace_eta_curve(grid, cfg);
    CHECK(pts[0].max_chsh == doctest::Approx(kTsirelson).epsilon(1e-3));
    CHECK(std::abs(pts[1].max_chsh - 2.0) <= 5e-3);
    CHECK(pts[2].bound == 0.0);
    // the curve is vertical at eta = 1, so compare against the eta actually reached
    CHECK(pts[2].feasible);
    const double reached = std::min(1.0, std::abs(pts[2].achieved_eta));
    CHECK(std::abs(pts[2].max_chsh) <= kTsirelson * std::sqrt(1.0 - reached * reached) + 5e-3);
    CHECK(std::abs(pts[2].max_chsh) <= 0.05);
    CHECK(pts[0].max_chsh >= pts[1].max_chsh - 5e-3);
    CHECK(pts[1].max_chsh >= pts[2].max_chsh - 5e-3);
}

}
