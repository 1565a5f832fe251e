#include "doctest.h"

#include <cmath>
#include <numbers>
#include <random>

#include "bellri/error.hpp"
#include "bellri/linalg.hpp"
#include "bellri/qmodel.hpp"
#include "bellri/ri.hpp"

using namespace bellri;

namespace {

Mat2 random_rho(std::mt19937_64& rng, double lim = 1.0) {
    std::uniform_real_distribution<double> u(-lim, lim);
    Mat2 m{};
    for (auto& row : m)
        for (double& v : row) v = u(rng);
    return m;
}

TripartiteCorrelatorTable zero_tripartite() { return TripartiteCorrelatorTable{}; }

}  // namespace

TEST_SUITE("ri") {

TEST_CASE("tsirelson intervals touch at the origin") {
    const auto ct = tsirelson_table();
    const auto i0 = ri::r_interval_bipartite(ct, 0);
    const auto i1 = ri::r_interval_bipartite(ct, 1);
    CHECK(i0.lo == doctest::Approx(0.0).epsilon(1e-15));
    CHECK(i0.hi == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(i1.lo == doctest::Approx(-1.0).epsilon(1e-15));
    CHECK(i1.hi == doctest::Approx(0.0).epsilon(1e-15));
    CHECK(i0.context == "j=0");
    const auto f = ri::ri_feasible_bipartite(ct);
    CHECK(f.feasible);
    REQUIRE(f.witness_r);
    CHECK(std::abs(*f.witness_r) < 1e-15);
}

TEST_CASE("uncorrelated table allows every r") {
    const auto ct = zero_table();
    for (int j = 0; j < 2; ++j) {
        const auto iv = ri::r_interval_bipartite(ct, j);
        CHECK(iv.lo == -1.0);
        CHECK(iv.hi == 1.0);
    }
    const auto t = ri::tlm_check(ct);
    CHECK(t.pass);
    CHECK(t.slack[0] == 2.0);
    CHECK(t.slack[1] == 2.0);
    CHECK(ri::epsilon_gap(ct) == 0.0);
}

TEST_CASE("pr box intervals are disjoint points") {
    const auto ct = pr_box_table();
    const auto i0 = ri::r_interval_bipartite(ct, 0);
    const auto i1 = ri::r_interval_bipartite(ct, 1);
    CHECK(i0.lo == 1.0);
    CHECK(i0.hi == 1.0);
    CHECK(i1.lo == -1.0);
    CHECK(i1.hi == -1.0);
    CHECK_FALSE(ri::ri_feasible_bipartite(ct).feasible);
    const auto t = ri::tlm_check(ct);
    CHECK_FALSE(t.pass);
    CHECK(t.lhs[0] == 2.0);
    CHECK(t.rhs[0] == 0.0);
    CHECK(ri::epsilon_gap(ct) == 2.0);
}

TEST_CASE("tsirelson saturates both rows") {
    const auto t = ri::tlm_check(tsirelson_table());
    CHECK(t.pass);
    CHECK(t.lhs[0] == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(t.rhs[0] == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(std::abs(t.slack[0]) < 1e-15);
    CHECK(std::abs(t.slack[1]) < 1e-15);
    CHECK(ri::epsilon_gap(tsirelson_table()) == 0.0);
}

TEST_CASE("interval membership equals psd of the normalized matrix") {
    std::mt19937_64 rng(31);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    int checked = 0;
    for (int t = 0; t < 500; ++t) {
        const Mat2 rho = random_rho(rng);
        const auto ct = CorrelatorTable::from_pearson(rho);
        for (int j = 0; j < 2; ++j) {
            const auto iv = ri::r_interval_bipartite(ct, j);
            const double rp = u(rng);
            if (std::abs(rp - iv.lo) < 1e-6 || std::abs(rp - iv.hi) < 1e-6) continue;
            CHECK(iv.contains(rp, 0.0) == linalg::is_psd(ri::ri_matrix(rho, j, rp)));
            ++checked;
        }
    }
    CHECK(checked > 900);
}

TEST_CASE("ri feasibility implies the quantum bound on random tables") {
    std::mt19937_64 rng(32);
    int feasible = 0;
    for (int t = 0; t < 5000; ++t) {
        const auto ct = CorrelatorTable::from_pearson(random_rho(rng));
        const auto v = ri::classify(ct);
        if (v.ri_feasible) {
            ++feasible;
            CHECK(v.quantum_compatible);
        }
        // the bound row for Alice is exactly the intersection of her intervals
        const auto f = ri::ri_feasible_bipartite(ct);
        const auto tl = ri::tlm_check(ct);
        CHECK(f.alice_feasible == (tl.slack[0] >= -1e-9));
        CHECK(f.bob_feasible == (tl.slack[1] >= -1e-9));
    }
    CHECK(feasible > 100);
}

TEST_CASE("epsilon is the set distance between the intervals") {
    std::mt19937_64 rng(33);
    for (int t = 0; t < 2000; ++t) {
        const auto ct = CorrelatorTable::from_pearson(random_rho(rng));
        const auto a = ri::r_interval_bipartite(ct, 0);
        const auto b = ri::r_interval_bipartite(ct, 1);
        const double gap = std::max(0.0, std::max(a.lo, b.lo) - std::min(a.hi, b.hi));
        CHECK(std::abs(ri::epsilon_gap(ct) - gap) < 1e-12);
    }
}

TEST_CASE("classify reports hierarchy and violated condition") {
    const auto pr = ri::classify(pr_box_table());
    REQUIRE(pr.local);
    CHECK_FALSE(*pr.local);
    CHECK_FALSE(pr.quantum_compatible);
    CHECK_FALSE(pr.ri_feasible);
    CHECK(pr.epsilon == 2.0);
    CHECK(pr.violated == "tlm row 1");

    const auto ts = ri::classify(tsirelson_table());
    CHECK(ts.quantum_compatible);
    CHECK(ts.ri_feasible);
    CHECK(ts.violated.empty());

    const auto un = ri::classify(from_probability_table(uniform_probability_table()));
    REQUIRE(un.local);
    CHECK(*un.local);
}

TEST_CASE("degenerate tables are refused") {
    auto ct = CorrelatorTable::from_pearson({{{0.1, 0.2}, {0.3, 0.4}}}, {0.0, 1.0});
    CHECK_THROWS_AS(ri::r_interval_bipartite(ct, 0), DegenerateData);
    CHECK_THROWS_AS(ri::tlm_check(ct), DegenerateData);
    CHECK_THROWS_AS(ri::epsilon_gap(ct), DegenerateData);
    CHECK_THROWS_AS(ri::classify(ct), DegenerateData);
}

TEST_CASE("tripartite intervals without Charlie reduce to the bipartite ones") {
    std::mt19937_64 rng(34);
    for (int t = 0; t < 200; ++t) {
        TripartiteCorrelatorTable tct;
        tct.ab = random_rho(rng);
        const auto res = ri::lemma1_intervals(tct);
        const auto ct = CorrelatorTable::from_pearson(tct.ab);
        for (const auto& c : res.contexts) {
            REQUIRE(c.interval);
            const auto b = ri::r_interval_bipartite(ct, c.j);
            CHECK(std::abs(c.interval->lo - b.lo) < 1e-15);
            CHECK(std::abs(c.interval->hi - b.hi) < 1e-15);
        }
        CHECK(res.common_r.has_value() == ri::ri_feasible_bipartite(ct).alice_feasible);
    }
}

TEST_CASE("tripartite intervals for all-zero data") {
    const auto res = ri::lemma1_intervals(zero_tripartite());
    REQUIRE(res.contexts.size() == 4);
    for (const auto& c : res.contexts) {
        CHECK(c.interval->lo == -1.0);
        CHECK(c.interval->hi == 1.0);
    }
    REQUIRE(res.common_r);
    CHECK(*res.common_r == 0.0);
}

TEST_CASE("embedded Alice-Charlie PR box pins r to (-1)^k") {
    TripartiteCorrelatorTable tct;
    tct.ac = {{{1.0, 1.0}, {1.0, -1.0}}};
    const auto res = ri::lemma1_intervals(tct);
    for (const auto& c : res.contexts) {
        REQUIRE(c.interval);
        const double expect = c.k == 0 ? 1.0 : -1.0;
        CHECK(c.interval->lo == expect);
        CHECK(c.interval->hi == expect);
    }
    CHECK_FALSE(res.common_r);
}

TEST_CASE("tripartite preconditions") {
    TripartiteCorrelatorTable tct;
    tct.bc[1][0] = 0.2;
    CHECK_THROWS_AS(ri::lemma1_intervals(tct), PreconditionViolated);
    const std::array<std::pair<int, int>, 2> ok{{{0, 0}, {1, 1}}};
    CHECK_NOTHROW(ri::lemma1_intervals(tct, ok));

    TripartiteCorrelatorTable bad;
    bad.ab[0][0] = 0.9;
    bad.ac[0][0] = 0.9;
    const auto res = ri::lemma1_intervals(bad);
    CHECK_FALSE(res.contexts[0].feasible);
    CHECK_FALSE(res.contexts[0].interval);
    CHECK_FALSE(res.common_r);
}

TEST_CASE("tripartite intervals agree pointwise with psd of the 4x4 block") {
    std::mt19937_64 rng(35);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    for (int t = 0; t < 300; ++t) {
        TripartiteCorrelatorTable tct;
        tct.ab = random_rho(rng, 0.7);
        tct.ac = random_rho(rng, 0.7);
        const auto res = ri::lemma1_intervals(tct);
        for (const auto& c : res.contexts) {
            const double rp = u(rng);
            const bool psd = linalg::is_psd(ri::tripartite_matrix(tct, c.j, c.k, rp));
            if (!c.feasible) {
                CHECK_FALSE(psd);
                continue;
            }
            if (std::abs(rp - c.interval->lo) < 1e-6 || std::abs(rp - c.interval->hi) < 1e-6) continue;
            CHECK(c.interval->contains(rp, 0.0) == psd);
        }
    }
}

TEST_CASE("g examples and domain") {
    CHECK(ri::g_theta(std::numbers::pi / 4, 1.3, 1.3) == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(ri::g_theta(0.0, 2.0, 1.0) == 2.0);
    CHECK_THROWS_AS(ri::g_theta(0.1, 0.0, 1.0), PreconditionViolated);
    CHECK_THROWS_AS(ri::g_theta(0.1, 1.0, -1.0), PreconditionViolated);
    CHECK_THROWS_AS(ri::g_theta(4.0, 1.0, 1.0), PreconditionViolated);
    CHECK_THROWS_AS(ri::min_g_over_family(0.0, {}), PreconditionViolated);
}

TEST_CASE("g is bounded by r' sin 2theta and the saturating member reaches the witness") {
    using namespace qmodel;
    // Alice's reduced state is maximally mixed; A0 = sigma_z, A1 = s (cos t sigma_z + sin t sigma_x).
    const StateVector singlet{0.0, 1.0 / std::numbers::sqrt2, -1.0 / std::numbers::sqrt2, 0.0};
    std::vector<ri::SigmaPair> family;
    std::vector<double> r_primes;
    std::size_t saturating = 0;
    for (double s : {0.5, 0.8, 1.0, 1.25, 2.0})
        for (double tau : {0.0, 0.3, 0.9, 1.4}) {
            const auto a1 = Observable::bloch(s * std::sin(tau), 0.0, s * std::cos(tau));
            const auto sc = make_bipartite(QuantumState::pure(singlet), {Observable::pauli_z(), a1},
                                           {Observable::pauli_z(), Observable::pauli_x()});
            const auto m = moments(sc);
            if (s == 1.0 && tau == 0.0) saturating = family.size();
            family.push_back({std::sqrt(m.alice.var[0]), std::sqrt(m.alice.var[1])});
            r_primes.push_back(m.alice.nu);
        }
    for (double theta = -std::numbers::pi; theta <= std::numbers::pi; theta += 0.05)
        for (std::size_t t = 0; t < family.size(); ++t)
            CHECK(ri::g_theta(theta, family[t].sigma0, family[t].sigma1) >=
                  std::max(0.0, r_primes[t] * std::sin(2 * theta)) - 1e-12);

    const auto best = ri::min_g_over_family(std::numbers::pi / 4, family);
    const auto sc = make_bipartite(QuantumState::pure(singlet), {Observable::pauli_z(), Observable::pauli_z()},
                                   {Observable::pauli_z(), Observable::pauli_x()});
    const auto witness = ri::ri_feasible_bipartite(moments(sc).table()).witness_r;
    REQUIRE(witness);
    CHECK(std::abs(best.value - *witness) < 1e-6);
    CHECK(family[best.argmin].sigma0 == doctest::Approx(family[saturating].sigma0));
}

TEST_CASE("pr box demonstration") {
    const auto demo = ri::pr_box_demo();
    for (const auto& c : demo.contexts) {
        const double expect = c.k == 0 ? 1.0 : -1.0;
        CHECK(c.r == expect);
        CHECK(c.psd_at_r);
        CHECK_FALSE(c.psd_at_zero);
        CHECK(c.signal_a0a1 == expect);
        // a unit Alice-Bob correlation would leave a negative Schur diagonal
        CHECK(c.residual_diagonal_unit_ab[0] < 0.0);
    }
    CHECK(demo.forced_rho_ab == 0.0);
    CHECK(demo.ri_violated);
}

}
