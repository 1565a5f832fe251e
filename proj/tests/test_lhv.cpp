#include "doctest.h"

#include <cmath>
#include <random>

#include "bellri/error.hpp"
#include "bellri/lhv.hpp"
#include "bellri/linalg.hpp"
#include "bellri/ri.hpp"

using namespace bellri;
using namespace bellri::lhv;

namespace {

LhvEnsemble random_ensemble(std::mt19937_64& rng, double sparsity = 0.0) {
    std::uniform_real_distribution<double> u(0.0, 1.0);
    std::array<double, kVertexCount> w{};
    double total = 0.0;
    for (double& x : w) {
        x = u(rng) < sparsity ? 0.0 : -std::log(1.0 - u(rng));
        total += x;
    }
    if (total == 0.0) {
        w[0] = 1.0;
        total = 1.0;
    }
    for (double& x : w) x /= total;
    // renormalize against rounding so the constructor's 1e-12 check cannot trip
    double s = 0.0;
    for (double x : w) s += x;
    w[0] += 1.0 - s;
    if (w[0] < 0.0) w[0] = 0.0;
    return LhvEnsemble(w);
}

}  // namespace

TEST_SUITE("lhv") {

TEST_CASE("vertex enumeration") {
    const auto vs = enumerate_vertices();
    CHECK(vs[0].a0 == -1);
    CHECK(vs[0].b1 == -1);
    CHECK(vs[15].a0 == 1);
    CHECK(vs[8].a0 == 1);
    CHECK(vs[8].a1 == -1);
    for (std::size_t v = 0; v < kVertexCount; ++v) {
        CHECK(vertex_index(vs[v]) == v);
        const auto e = vertex_correlators(vs[v]);
        CHECK(std::abs(chsh(e)) == 2.0);
        CHECK(max_chsh(e) == 2.0);
        CHECK(is_local(e));
    }
}

TEST_CASE("ensemble validation") {
    std::array<double, kVertexCount> w{};
    CHECK_THROWS_AS(LhvEnsemble{w}, MalformedInput);
    w[0] = 1.5;
    w[1] = -0.5;
    CHECK_THROWS_AS(LhvEnsemble{w}, MalformedInput);
    w = {};
    w[3] = std::nan("");
    CHECK_THROWS_AS(LhvEnsemble{w}, MalformedInput);
    CHECK_THROWS_AS(LhvEnsemble::point_mass(16), MalformedInput);
}

TEST_CASE("uniform ensemble is uncorrelated") {
    const auto lc = correlators_of(LhvEnsemble::uniform());
    for (int i = 0; i < 2; ++i) {
        CHECK(lc.table.mean_a[i] == 0.0);
        CHECK(lc.table.var_a[i] == 1.0);
        for (int j = 0; j < 2; ++j) CHECK(lc.table.correlator[i][j] == 0.0);
    }
    CHECK(lc.r == 0.0);
    REQUIRE(lc.r_normalized);
    CHECK(*lc.r_normalized == 0.0);
}

TEST_CASE("point mass is deterministic and degenerate") {
    const auto lc = correlators_of(LhvEnsemble::point_mass(15));
    CHECK(lc.table.degenerate);
    CHECK_FALSE(lc.r_normalized);
    CHECK(lc.table.correlator[1][1] == 1.0);
    CHECK(product_cov_matrix(LhvEnsemble::point_mass(15)).degenerate);
}

TEST_CASE("even mixture of all-plus and all-minus") {
    std::array<double, kVertexCount> w{};
    w[0] = 0.5;
    w[15] = 0.5;
    const LhvEnsemble ens(w);
    const auto lc = correlators_of(ens);
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) CHECK(lc.table.correlator[i][j] == 1.0);
    CHECK(chsh(lc.table.correlator) == 2.0);
    CHECK(is_local(lc.table.correlator));
    // perfectly correlated A0, A1: the uncertainty block is singular
    CHECK(lc.r * lc.r == doctest::Approx(lc.table.var_a[0] * lc.table.var_a[1]));
}

TEST_CASE("is_local rejects out-of-range and nonlocal data") {
    CHECK_FALSE(is_local(pr_box_table().correlator));
    CHECK(max_chsh(pr_box_table().correlator) == 4.0);
    CHECK_THROWS_AS(is_local(Mat2{{{1.2, 0.0}, {0.0, 0.0}}}), MalformedInput);
    const double h = 1.0 / std::sqrt(2.0);
    CHECK_FALSE(is_local(Mat2{{{h, h}, {h, -h}}}));
}

TEST_CASE("random ensembles are sound") {
    std::mt19937_64 rng(41);
    const std::array<double, 4> u{1.0, 1.0, 1.0, -1.0};
    int with_witness = 0;
    for (int t = 0; t < 1000; ++t) {
        const auto ens = random_ensemble(rng, t % 3 == 0 ? 0.6 : 0.0);
        const auto lc = correlators_of(ens);
        CHECK(is_local(lc.table.correlator));
        CHECK(std::abs(chsh(lc.table.correlator)) <= 2.0 + 1e-12);

        const auto pc = product_cov_matrix(ens);
        CHECK(linalg::is_psd(pc.matrix));
        double contraction = 0.0;
        for (int a = 0; a < 4; ++a)
            for (int b = 0; b < 4; ++b) contraction += u[a] * pc.matrix(a, b) * u[b];
        CHECK(std::abs(contraction - (4.0 - pc.chsh * pc.chsh)) <= 1e-9);
        CHECK(std::abs(pc.chsh - chsh(lc.table.correlator)) <= 1e-14);

        if (lc.table.degenerate) continue;
        CHECK(ri::tlm_check(lc.table).pass);
        const auto f = ri::ri_feasible_bipartite(lc.table);
        CHECK(f.feasible);
        REQUIRE(lc.r_normalized);
        CHECK(f.alice[0].contains(*lc.r_normalized));
        CHECK(f.alice[1].contains(*lc.r_normalized));
        ++with_witness;
    }
    CHECK(with_witness > 600);
}

TEST_CASE("full-support ensembles never saturate the uncertainty block") {
    std::mt19937_64 rng(42);
    for (int t = 0; t < 1000; ++t) {
        const auto lc = correlators_of(random_ensemble(rng));
        const double gap = lc.table.var_a[0] * lc.table.var_a[1] - lc.r * lc.r;
        CHECK(gap >= 1e-12);
    }
}

TEST_CASE("non-deterministic but perfectly correlated settings saturate") {
    // A0 = A1 = +-1 with equal weight; B fixed. Some weight lies in (0,1) yet
    // Delta0^2 Delta1^2 = r^2.
    std::array<double, kVertexCount> w{};
    w[vertex_index({-1, -1, 1, 1})] = 0.5;
    w[vertex_index({1, 1, 1, 1})] = 0.5;
    const auto lc = correlators_of(LhvEnsemble(w));
    CHECK(lc.table.var_a[0] * lc.table.var_a[1] - lc.r * lc.r == 0.0);
}

TEST_CASE("block matrix contractions") {
    std::mt19937_64 rng(43);
    std::uniform_real_distribution<double> d(-1.0, 1.0);
    const std::array<double, 4> u{1.0, 1.0, 1.0, -1.0};
    for (int t = 0; t < 200; ++t) {
        Mat2 rho{};
        for (auto& row : rho)
            for (double& v : row) v = d(rng);
        const double rp = d(rng);
        const auto m = local_block_matrix(rho, rp);
        double c = 0.0;
        for (int a = 0; a < 4; ++a)
            for (int b = 0; b < 4; ++b) c += u[a] * m(a, b) * u[b];
        const double s = rho[0][0] + rho[1][0] - rho[0][1] + rho[1][1];
        CHECK(std::abs(c - (4.0 - s * s)) < 1e-12);

        // block-diagonal variant: PSD iff r' lies in both of Alice's intervals
        const auto ct = CorrelatorTable::from_pearson(rho);
        const auto i0 = ri::r_interval_bipartite(ct, 0);
        const auto i1 = ri::r_interval_bipartite(ct, 1);
        const double margin = std::min({std::abs(rp - i0.lo), std::abs(rp - i0.hi), std::abs(rp - i1.lo),
                                        std::abs(rp - i1.hi)});
        if (margin < 1e-6) continue;
        CHECK(linalg::is_psd(quantum_block_matrix(rho, rp)) == (i0.contains(rp, 0) && i1.contains(rp, 0)));
    }
}

}
