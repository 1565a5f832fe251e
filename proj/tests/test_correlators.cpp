#include "doctest.h"

#include <cmath>
#include <numbers>
#include <random>

#include "bellri/correlators.hpp"
#include "bellri/error.hpp"
#include "helpers.hpp"

using namespace bellri;

namespace {

// Singlet probabilities for spin measurements in the x-z plane at angles
// a_i, b_j, from dense projectors.
ProbabilityTable singlet_table(std::array<double, 2> a, std::array<double, 2> b) {
    using Eigen::Matrix2cd;
    Matrix2cd sx, sz;
    sx << 0, 1, 1, 0;
    sz << 1, 0, 0, -1;
    Eigen::Vector4cd psi(0, 1, -1, 0);
    psi /= std::sqrt(2.0);
    ProbabilityTable pt;
    pt.outcomes_a = {-1.0, 1.0};
    pt.outcomes_b = {-1.0, 1.0};
    auto proj = [&](double angle, double outcome) {
        const Matrix2cd s = std::cos(angle) * sz + std::sin(angle) * sx;
        return Matrix2cd(0.5 * (Matrix2cd::Identity() + outcome * s));
    };
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) {
            pt.p[i][j] = {{0, 0}, {0, 0}};
            for (int x = 0; x < 2; ++x)
                for (int y = 0; y < 2; ++y) {
                    const Matrix2cd pa = proj(a[i], pt.outcomes_a[x]);
                    const Matrix2cd pb = proj(b[j], pt.outcomes_b[y]);
                    Eigen::Matrix4cd k;
                    for (int r = 0; r < 2; ++r)
                        for (int c = 0; c < 2; ++c) k.block<2, 2>(2 * r, 2 * c) = pa(r, c) * pb;
                    pt.p[i][j][x][y] = (psi.adjoint() * k * psi)(0, 0).real();
                }
            // remove rounding so the table sums to 1 within 1e-12
            double s = 0;
            for (auto& row : pt.p[i][j])
                for (double v : row) s += v;
            for (auto& row : pt.p[i][j])
                for (double& v : row) v /= s;
        }
    return pt;
}

ProbabilityTable random_table(std::mt19937_64& rng, std::size_t na, std::size_t nb) {
    std::uniform_real_distribution<double> u(0.0, 1.0);
    std::normal_distribution<double> g;
    ProbabilityTable pt;
    for (std::size_t x = 0; x < na; ++x) pt.outcomes_a.push_back(g(rng));
    for (std::size_t y = 0; y < nb; ++y) pt.outcomes_b.push_back(g(rng));
    for (auto& row : pt.p)
        for (auto& t : row) {
            t.assign(na, std::vector<double>(nb));
            double s = 0;
            for (auto& r : t)
                for (double& v : r) s += (v = u(rng));
            for (auto& r : t)
                for (double& v : r) v /= s;
        }
    return pt;
}

}  // namespace

TEST_SUITE("correlators") {

TEST_CASE("pr box probability table") {
    const auto ct = from_probability_table(pr_box_probability_table());
    const Mat2 rho = ct.pearson_values();
    CHECK(rho[0][0] == 1.0);
    CHECK(rho[0][1] == 1.0);
    CHECK(rho[1][0] == 1.0);
    CHECK(rho[1][1] == -1.0);
    for (int k = 0; k < 2; ++k) {
        CHECK(ct.mean_a[k] == 0.0);
        CHECK(ct.mean_b[k] == 0.0);
    }
    CHECK(ct.binary_pm1);
    CHECK(chsh(ct) == 4.0);
    const auto ns = check_no_signaling(pr_box_probability_table(), 1e-12);
    CHECK(ns.pass);
    CHECK(ns.max_discrepancy_a == 0.0);
    CHECK(ns.max_discrepancy_b == 0.0);
}

TEST_CASE("independent uniform outcomes") {
    const auto ct = from_probability_table(uniform_probability_table());
    for (int i = 0; i < 2; ++i) {
        CHECK(ct.var_a[i] == 1.0);
        CHECK(ct.var_b[i] == 1.0);
        for (int j = 0; j < 2; ++j) CHECK(*ct.pearson[i][j] == 0.0);
    }
    CHECK(chsh(zero_table()) == 0.0);
    CHECK(check_no_signaling(uniform_probability_table(), 0.0).pass);
}

TEST_CASE("singlet table at the optimal angles") {
    const double pi = std::numbers::pi;
    const std::array<double, 2> a{0.0, pi / 2}, b{pi / 4, -pi / 4};
    const auto ct = from_probability_table(singlet_table(a, b));
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) CHECK(*ct.pearson[i][j] == doctest::Approx(-std::cos(a[i] - b[j])).epsilon(1e-12));
    CHECK(std::abs(std::abs(chsh(ct)) - 2 * std::numbers::sqrt2) < 1e-12);
    CHECK(check_no_signaling(singlet_table(a, b), 1e-12).pass);
}

TEST_CASE("tsirelson fixture") {
    CHECK(chsh(tsirelson_table()) == doctest::Approx(2 * std::numbers::sqrt2).epsilon(1e-15));
}

TEST_CASE("signaling table is located") {
    ProbabilityTable pt = uniform_probability_table();
    pt.p[1][1] = {{0.5, 0.0}, {0.25, 0.25}};
    pt.p[0][1] = {{0.4, 0.1}, {0.1, 0.4}};
    pt.p[0][0] = {{0.45, 0.25}, {0.05, 0.25}};
    const auto rep = check_no_signaling(pt, 1e-9);
    CHECK_FALSE(rep.pass);
    CHECK(rep.max_discrepancy_a == doctest::Approx(0.2));
    CHECK(rep.max_discrepancy_b == doctest::Approx(0.25));
    CHECK(rep.location.find("bob setting 1") == 0);
    CHECK_FALSE(rep.location.empty());
}

TEST_CASE("malformed tables are rejected") {
    ProbabilityTable pt = uniform_probability_table();
    pt.p[0][0][0][0] = 0.3;
    CHECK_THROWS_AS(from_probability_table(pt), MalformedInput);
    pt = uniform_probability_table();
    pt.p[1][0][0][0] = -0.25;
    pt.p[1][0][1][1] = 0.75;
    CHECK_THROWS_AS(pt.validate(), MalformedInput);
    pt = uniform_probability_table();
    pt.p[0][1].pop_back();
    CHECK_THROWS_AS(pt.validate(), MalformedInput);
    CHECK_THROWS_AS(CorrelatorTable::from_pearson({{{1.5, 0}, {0, 0}}}), MalformedInput);
}

TEST_CASE("deterministic setting leaves Pearson undefined") {
    ProbabilityTable pt = uniform_probability_table();
    pt.p[0][0] = {{0.0, 0.0}, {0.5, 0.5}};
    pt.p[0][1] = {{0.0, 0.0}, {0.5, 0.5}};
    const auto ct = from_probability_table(pt);
    CHECK(ct.degenerate);
    CHECK_FALSE(ct.pearson[0][0].has_value());
    CHECK_FALSE(ct.pearson_defined());
    CHECK_THROWS_AS(ct.pearson_values(), DegenerateData);
    CHECK_THROWS_AS(chsh(ct), DegenerateData);
}

TEST_CASE("variance mismatch across contexts is flagged, not fatal") {
    ProbabilityTable pt;
    pt.outcomes_a = {-1.0, 1.0};
    pt.outcomes_b = {-1.0, 1.0};
    pt.p[0][0] = {{0.25, 0.25}, {0.25, 0.25}};
    pt.p[0][1] = {{0.45, 0.45}, {0.05, 0.05}};  // Alice's marginal moves with Bob's setting
    pt.p[1][0] = {{0.25, 0.25}, {0.25, 0.25}};
    pt.p[1][1] = {{0.25, 0.25}, {0.25, 0.25}};
    const auto ct = from_probability_table(pt);
    CHECK(ct.signaling_in_variance);
    CHECK(ct.pearson_defined());
}

TEST_CASE("pearson entries obey Cauchy-Schwarz on random tables") {
    std::mt19937_64 rng(21);
    for (int t = 0; t < 1000; ++t) {
        const auto ct = from_probability_table(random_table(rng, 2 + t % 3, 2 + (t / 3) % 3));
        for (const auto& row : ct.pearson)
            for (const auto& v : row)
                if (v) CHECK(std::abs(*v) <= 1.0 + 1e-12);
    }
}

TEST_CASE("pearson is invariant under a common affine relabeling") {
    std::mt19937_64 rng(22);
    std::uniform_real_distribution<double> scale(0.1, 5.0), shift(-3.0, 3.0);
    for (int t = 0; t < 200; ++t) {
        const auto pt = random_table(rng, 3, 2);
        auto moved = pt;
        const double alpha = scale(rng), beta = shift(rng);
        for (double& v : moved.outcomes_a) v = alpha * v + beta;
        for (double& v : moved.outcomes_b) v = alpha * v + beta;
        const auto a = from_probability_table(pt).pearson_values();
        const auto b = from_probability_table(moved).pearson_values();
        for (int i = 0; i < 2; ++i)
            for (int j = 0; j < 2; ++j) CHECK(std::abs(a[i][j] - b[i][j]) < 1e-10);
    }
}

}
