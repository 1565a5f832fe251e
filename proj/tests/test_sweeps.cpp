#include "doctest.h"

#include <random>

#include "bellri/sweeps.hpp"

using namespace bellri;
using namespace bellri::sweeps;

TEST_SUITE("sweeps") {

TEST_CASE("per-sample streams are distinct and stable") {
    CHECK(sampling::stream_seed(0, 0) != sampling::stream_seed(0, 1));
    CHECK(sampling::stream_seed(0, 1) != sampling::stream_seed(1, 0));
    auto a = sampling::make_rng(7, 3);
    auto b = sampling::make_rng(7, 3);
    CHECK(a() == b());
}

TEST_CASE("map_samples is schedule independent") {
    auto fn = [](sampling::Rng& rng, std::size_t k) { return double(rng() % 1000) + 0.5 * double(k); };
    CHECK(map_samples(257, 4, fn, Mode::serial) == map_samples(257, 4, fn, Mode::parallel));
    CHECK(map_samples(0, 4, fn, Mode::parallel).empty());
}

TEST_CASE("tlm sweep serial equals parallel") {
    const auto s = tlm_samples(400, 21, 2, 4, Mode::serial);
    const auto p = tlm_samples(400, 21, 2, 4, Mode::parallel);
    REQUIRE(s.size() == p.size());
    for (std::size_t k = 0; k < s.size(); ++k) {
        CHECK(s[k].slack == p[k].slack);
        CHECK(s[k].pass == p[k].pass);
    }
    const auto sum = summarize(s);
    CHECK(sum.samples == 400);
    CHECK(sum.failures == 0);
    CHECK(sum.worst_slack >= -1e-9);
    CHECK(s[sum.worst_index].slack == sum.worst_slack);
}

TEST_CASE("eta-tightening sweep serial equals parallel") {
    const auto s = theorem2_samples(300, 22, 2, 4, Mode::serial);
    const auto p = theorem2_samples(300, 22, 2, 4, Mode::parallel);
    for (std::size_t k = 0; k < s.size(); ++k) {
        CHECK(s[k].eta_a == p[k].eta_a);
        CHECK(s[k].row1_rhs == p[k].row1_rhs);
        CHECK(s[k].pass);
        CHECK(s[k].row1_rhs <= s[k].row1_rhs_eta0 + 1e-12);
    }
}

TEST_CASE("covariance margins are nonnegative") {
    const auto s = cov_psd_margins(300, 23, 2, 4, Mode::serial);
    CHECK(s == cov_psd_margins(300, 23, 2, 4, Mode::parallel));
    for (double m : s) CHECK(m >= -1e-9);
}

TEST_CASE("batch classification matches one-by-one") {
    std::mt19937_64 rng(24);
    std::uniform_real_distribution<double> u(-1, 1);
    std::vector<CorrelatorTable> tables;
    for (int t = 0; t < 200; ++t) tables.push_back(CorrelatorTable::from_pearson({{{u(rng), u(rng)}, {u(rng), u(rng)}}}));
    const auto par = classify_batch(tables, 1e-9, Mode::parallel);
    const auto ser = classify_batch(tables, 1e-9, Mode::serial);
    for (std::size_t k = 0; k < tables.size(); ++k) {
        const auto one = ri::classify(tables[k]);
        CHECK(par[k].ri_feasible == one.ri_feasible);
        CHECK(par[k].quantum_compatible == one.quantum_compatible);
        CHECK(par[k].epsilon == one.epsilon);
        CHECK(ser[k].epsilon == one.epsilon);
    }
}

}
