#include "bellri/ri.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "bellri/error.hpp"
#include "bellri/lhv.hpp"

namespace bellri::ri {
namespace {

double root_product(double a, double b) { return std::sqrt(std::max(0.0, (1.0 - a * a) * (1.0 - b * b))); }

RInterval make_interval(double center, double half, std::string context) {
    return RInterval{center - half, center + half, std::move(context)};
}

}  // namespace

RInterval r_interval_bipartite(const CorrelatorTable& ct, int j) {
    if (j < 0 || j > 1) throw MalformedInput("setting index must be 0 or 1");
    const auto& p = ct.pearson;
    if (!p[0][j] || !p[1][j]) throw DegenerateData("r interval needs rho_0j and rho_1j");
    const double a = *p[0][j];
    const double b = *p[1][j];
    return make_interval(a * b, root_product(a, b), "j=" + std::to_string(j));
}

RInterval r_interval_swapped(const CorrelatorTable& ct, int i) {
    if (i < 0 || i > 1) throw MalformedInput("setting index must be 0 or 1");
    const auto& p = ct.pearson;
    if (!p[i][0] || !p[i][1]) throw DegenerateData("swapped r interval needs rho_i0 and rho_i1");
    const double a = *p[i][0];
    const double b = *p[i][1];
    return make_interval(a * b, root_product(a, b), "i=" + std::to_string(i));
}

linalg::SymmetricMatrix ri_matrix(const Mat2& rho, int j, double r_prime) {
    linalg::SymmetricMatrix m = linalg::SymmetricMatrix::identity(3);
    m.set(0, 1, rho[1][j]);
    m.set(0, 2, rho[0][j]);
    m.set(1, 2, r_prime);
    return m;
}

TlmResult tlm_check(const Mat2& rho, double tol) {
    TlmResult res;
    res.lhs[0] = std::abs(rho[0][0] * rho[1][0] - rho[0][1] * rho[1][1]);
    res.rhs[0] = root_product(rho[0][0], rho[1][0]) + root_product(rho[0][1], rho[1][1]);
    res.lhs[1] = std::abs(rho[0][0] * rho[0][1] - rho[1][0] * rho[1][1]);
    res.rhs[1] = root_product(rho[0][0], rho[0][1]) + root_product(rho[1][0], rho[1][1]);
    for (int r = 0; r < 2; ++r) res.slack[r] = res.rhs[r] - res.lhs[r];
    res.pass = res.slack[0] >= -tol && res.slack[1] >= -tol;
    return res;
}

TlmResult tlm_check(const CorrelatorTable& ct, double tol) { return tlm_check(ct.pearson_values(), tol); }

RiFeasibility ri_feasible_bipartite(const CorrelatorTable& ct, double slack) {
    ct.pearson_values();  // throws on degenerate data
    RiFeasibility res;
    res.alice = {r_interval_bipartite(ct, 0), r_interval_bipartite(ct, 1)};
    res.bob = {r_interval_swapped(ct, 0), r_interval_swapped(ct, 1)};

    auto meet = [slack](const std::array<RInterval, 2>& iv, bool& ok) -> std::optional<double> {
        const double lo = std::max(iv[0].lo, iv[1].lo);
        const double hi = std::min(iv[0].hi, iv[1].hi);
        ok = lo <= hi + slack;
        if (!ok) return std::nullopt;
        return 0.5 * (lo + hi);
    };
    res.witness_r = meet(res.alice, res.alice_feasible);
    res.witness_r_bar = meet(res.bob, res.bob_feasible);
    res.feasible = res.alice_feasible && res.bob_feasible;
    return res;
}

double epsilon_gap(const Mat2& rho) {
    const double c0 = rho[0][0] * rho[1][0];
    const double c1 = rho[0][1] * rho[1][1];
    const double h0 = root_product(rho[0][0], rho[1][0]);
    const double h1 = root_product(rho[0][1], rho[1][1]);
    const double d = c0 - c1;
    if (std::abs(d) <= h0 + h1) return 0.0;
    double best = std::abs(d + h0 + h1);
    for (double s0 : {1.0, -1.0})
        for (double s1 : {1.0, -1.0}) best = std::min(best, std::abs(d + s0 * h0 + s1 * h1));
    return best;
}

double epsilon_gap(const CorrelatorTable& ct) { return epsilon_gap(ct.pearson_values()); }

Verdict classify(const CorrelatorTable& ct, double tol) {
    const Mat2 rho = ct.pearson_values();
    Verdict v;
    v.chsh = chsh(rho);
    if (ct.binary_pm1) v.local = lhv::is_local(ct.correlator, tol);

    const TlmResult tlm = tlm_check(rho, tol);
    v.quantum_compatible = tlm.pass;

    const RiFeasibility ri = ri_feasible_bipartite(ct, tol);
    v.ri_feasible = ri.feasible;
    v.witness_r = ri.witness_r;
    v.epsilon = epsilon_gap(rho);
    for (const auto& iv : ri.alice) v.intervals.push_back(iv);
    for (const auto& iv : ri.bob) v.intervals.push_back(iv);

    if (!tlm.pass)
        v.violated = tlm.slack[0] < -tol ? "tlm row 1" : "tlm row 2";
    else if (!ri.alice_feasible)
        v.violated = "alice r-intervals disjoint";
    else if (!ri.bob_feasible)
        v.violated = "bob r-intervals disjoint";
    return v;
}

// ---------------------------------------------------------------------------

std::array<std::pair<int, int>, 4> all_contexts() { return {{{0, 0}, {0, 1}, {1, 0}, {1, 1}}}; }

Lemma1Result lemma1_intervals(const TripartiteCorrelatorTable& tct, std::span<const std::pair<int, int>> contexts) {
    tct.validate();
    Lemma1Result res;
    bool all_feasible = true;
    double max_lo = -std::numeric_limits<double>::infinity();
    double min_hi = std::numeric_limits<double>::infinity();
    for (const auto& [j, k] : contexts) {
        if (j < 0 || j > 1 || k < 0 || k > 1) throw MalformedInput("context indices must be 0 or 1");
        if (std::abs(tct.bc[j][k]) > kSlack)
            throw PreconditionViolated("rho^BC_" + std::to_string(j) + std::to_string(k) +
                                       " must vanish for the interval construction");
        Lemma1Context c;
        c.j = j;
        c.k = k;
        for (int i = 0; i < 2; ++i)
            c.diagonal[i] = 1.0 - tct.ab[i][j] * tct.ab[i][j] - tct.ac[i][k] * tct.ac[i][k];
        c.feasible = c.diagonal[0] >= -kSlack && c.diagonal[1] >= -kSlack;
        if (c.feasible) {
            const double center = tct.ab[0][j] * tct.ab[1][j] + tct.ac[0][k] * tct.ac[1][k];
            const double half = std::sqrt(std::max(0.0, c.diagonal[0]) * std::max(0.0, c.diagonal[1]));
            c.interval = make_interval(center, half, "j=" + std::to_string(j) + ",k=" + std::to_string(k));
            max_lo = std::max(max_lo, c.interval->lo);
            min_hi = std::min(min_hi, c.interval->hi);
        } else {
            all_feasible = false;
        }
        res.contexts.push_back(std::move(c));
    }
    if (all_feasible && !contexts.empty()) {
        res.max_lo = max_lo;
        res.min_hi = min_hi;
        if (max_lo <= min_hi + kSlack) res.common_r = 0.5 * (max_lo + min_hi);
    }
    return res;
}

Lemma1Result lemma1_intervals(const TripartiteCorrelatorTable& tct) {
    const auto ctx = all_contexts();
    return lemma1_intervals(tct, ctx);
}

linalg::SymmetricMatrix tripartite_matrix(const TripartiteCorrelatorTable& tct, int j, int k, double r_prime) {
    linalg::SymmetricMatrix m = linalg::SymmetricMatrix::identity(4);
    m.set(0, 1, tct.bc[j][k]);
    m.set(0, 2, tct.ac[1][k]);
    m.set(0, 3, tct.ac[0][k]);
    m.set(1, 2, tct.ab[1][j]);
    m.set(1, 3, tct.ab[0][j]);
    m.set(2, 3, r_prime);
    return m;
}

// ---------------------------------------------------------------------------

double g_theta(double theta, double sigma0, double sigma1) {
    if (!(sigma0 > 0.0) || !(sigma1 > 0.0) || !std::isfinite(sigma0) || !std::isfinite(sigma1))
        throw PreconditionViolated("g(theta) needs positive standard deviations");
    if (!(std::abs(theta) <= std::numbers::pi)) throw PreconditionViolated("theta must lie in [-pi, pi]");
    const double c = std::cos(theta);
    const double s = std::sin(theta);
    return c * c * sigma0 / sigma1 + s * s * sigma1 / sigma0;
}

GMinimum min_g_over_family(double theta, std::span<const SigmaPair> family) {
    if (family.empty()) throw PreconditionViolated("empty parameter family");
    GMinimum best{g_theta(theta, family[0].sigma0, family[0].sigma1), 0};
    for (std::size_t t = 1; t < family.size(); ++t) {
        const double g = g_theta(theta, family[t].sigma0, family[t].sigma1);
        if (g < best.value) best = {g, t};
    }
    return best;
}

// ---------------------------------------------------------------------------

namespace {

// Order (B_j, C_k, A_1, A_0). Alice-Charlie PR box: C(A_i, C_k) = (-1)^{ik}.
linalg::SymmetricMatrix pr_matrix(int k, double rho_ab1, double rho_ab0, double r) {
    const double sk = (k == 1) ? -1.0 : 1.0;
    linalg::SymmetricMatrix m = linalg::SymmetricMatrix::identity(4);
    m.set(0, 2, rho_ab1);
    m.set(0, 3, rho_ab0);
    m.set(1, 2, sk);
    m.set(1, 3, 1.0);
    m.set(2, 3, r);
    return m;
}

}  // namespace

PrBoxDemo pr_box_demo() {
    PrBoxDemo demo;
    double forced = 0.0;
    std::size_t idx = 0;
    for (const auto& [j, k] : all_contexts()) {
        PrContext c;
        c.j = j;
        c.k = k;
        const auto residual0 = linalg::schur_complement(pr_matrix(k, 0.0, 0.0, 0.0), 2);
        // Residual off-diagonal is r - C(A1,Ck) C(A0,Ck); its diagonal vanishes,
        // so PSD needs the off-diagonal to vanish too.
        c.r = -residual0(0, 1);
        c.det_at_zero = linalg::determinant(residual0);
        c.psd_at_r = linalg::is_psd(pr_matrix(k, 0.0, 0.0, c.r));
        c.psd_at_zero = linalg::is_psd(pr_matrix(k, 0.0, 0.0, 0.0));
        const auto residual_unit = linalg::schur_complement(pr_matrix(k, 1.0, 1.0, c.r), 2);
        c.residual_diagonal_unit_ab = {residual_unit(0, 0), residual_unit(1, 1)};
        // diag(rho) = diag(0) - rho^2, so |rho^AB| <= sqrt(diag(0)).
        forced = std::max({forced, std::sqrt(std::max(0.0, residual0(0, 0))),
                           std::sqrt(std::max(0.0, residual0(1, 1)))});
        const double sk = (k == 1) ? -1.0 : 1.0;
        c.signal_a0a1 = 1.0 * sk;
        demo.contexts[idx++] = c;
    }
    demo.forced_rho_ab = forced;
    demo.ri_violated = demo.contexts[0].r != demo.contexts[1].r;
    return demo;
}

}  // namespace bellri::ri
