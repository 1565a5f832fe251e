#include "bellri/multiparty.hpp"

#include <cmath>
#include <string>

#include "bellri/error.hpp"

namespace bellri::multiparty {
namespace {

void check_index(int v) {
    if (v < 0 || v > 1) throw MalformedInput("setting index must be 0 or 1");
}

}  // namespace

ZetaArgs zeta_args(const TripartiteCorrelatorTable& t, int i, int j, int l, int k) {
    for (int v : {i, j, l, k}) check_index(v);
    return {t.ab[i][l], t.ab[j][l], t.ac[i][k], t.ac[j][k], t.bc[l][k]};
}

double zeta(const ZetaArgs& a) {
    const double den = 1.0 - a.bc_lk * a.bc_lk;
    if (!(std::abs(a.bc_lk) < 1.0 - 1e-12)) throw PreconditionViolated("zeta needs |rho^BC| < 1");
    const double num = a.ac_ik * a.ac_jk - a.bc_lk * a.ab_il * a.ac_jk - a.bc_lk * a.ab_jl * a.ac_ik + a.ab_il * a.ab_jl;
    return num / den;
}

double zeta(const TripartiteCorrelatorTable& t, int i, int j, int l, int k) { return zeta(zeta_args(t, i, j, l, k)); }

namespace {

struct ZetaHalf {
    double center = 0.0;
    double half = 0.0;
    bool clamped = false;
    bool empty = false;
};

ZetaHalf zeta_half(const TripartiteCorrelatorTable& t, int l, int k, double tol) {
    ZetaHalf z;
    z.center = zeta(t, 0, 1, l, k);
    const double d1 = 1.0 - zeta(t, 1, 1, l, k);
    const double d0 = 1.0 - zeta(t, 0, 0, l, k);
    double rad = d1 * d0;
    if (d1 < -tol || d0 < -tol) {
        z.empty = true;
        return z;
    }
    if (rad < 0.0) {
        if (rad < -tol) {
            z.empty = true;
            return z;
        }
        rad = 0.0;
        z.clamped = true;
    }
    if (d1 < 0.0 || d0 < 0.0) {
        z.clamped = true;
        rad = 0.0;
    }
    z.half = std::sqrt(rad);
    return z;
}

}  // namespace

std::optional<ri::RInterval> zeta_interval(const TripartiteCorrelatorTable& t, int l, int k) {
    const ZetaHalf z = zeta_half(t, l, k, 1e-9);
    if (z.empty) return std::nullopt;
    return ri::RInterval{z.center - z.half, z.center + z.half, "l=" + std::to_string(l) + ",k=" + std::to_string(k)};
}

Theorem4Result theorem4_check(const TripartiteCorrelatorTable& t, Context first, Context second, double tol) {
    const ZetaHalf a = zeta_half(t, first.l, first.k, tol);
    const ZetaHalf b = zeta_half(t, second.l, second.k, tol);
    Theorem4Result res;
    res.lhs = std::abs(a.center - b.center);
    res.rhs = a.half + b.half;
    res.clamped = a.clamped || b.clamped;
    res.pass = !a.empty && !b.empty && res.lhs <= res.rhs + tol;
    return res;
}

MonogamyResult monogamy_check(double chsh_ab, double chsh_ac, double tol) {
    if (!std::isfinite(chsh_ab) || !std::isfinite(chsh_ac)) throw MalformedInput("CHSH values must be finite");
    MonogamyResult res;
    res.sum_sq = chsh_ab * chsh_ab + chsh_ac * chsh_ac;
    res.sum_abs = std::abs(chsh_ab) + std::abs(chsh_ac);
    res.pass_sq = res.sum_sq <= 8.0 + tol;
    res.pass_abs = res.sum_abs <= 4.0 + tol;
    return res;
}

void NPartyCorrelators::validate() const {
    if (experimenters.empty() || experimenters.size() > kMaxExperimenters)
        throw MalformedInput("between 1 and " + std::to_string(kMaxExperimenters) + " experimenters are supported");
    for (const auto& e : experimenters)
        for (const auto* pair : {&e.first, &e.second})
            for (double v : *pair)
                if (!std::isfinite(v) || std::abs(v) > 1.0 + 1e-12)
                    throw MalformedInput("Pearson entries must lie in [-1, 1]");
}

linalg::SymmetricMatrix build_multipartite_matrix(const NPartyCorrelators& npc, double r_prime, int context) {
    npc.validate();
    check_index(context);
    const std::size_t n = npc.size();
    linalg::SymmetricMatrix m = linalg::SymmetricMatrix::identity(n + 2);
    for (std::size_t s = 0; s < n; ++s) {
        const auto& rho = context == 0 ? npc.experimenters[s].first : npc.experimenters[s].second;
        m.set(s, n, rho[0]);
        m.set(s, n + 1, rho[1]);
    }
    m.set(n, n + 1, r_prime);
    return m;
}

linalg::SymmetricMatrix rank_sum_residual(const NPartyCorrelators& npc, double r_prime, int context) {
    npc.validate();
    check_index(context);
    double s00 = 0.0, s01 = 0.0, s11 = 0.0;
    for (const auto& e : npc.experimenters) {
        const auto& rho = context == 0 ? e.first : e.second;
        s00 += rho[0] * rho[0];
        s01 += rho[0] * rho[1];
        s11 += rho[1] * rho[1];
    }
    return linalg::SymmetricMatrix{{1.0 - s00, r_prime - s01}, {r_prime - s01, 1.0 - s11}};
}

NPartyResult nparty_bound_check(const NPartyCorrelators& npc, double r_prime, double tol) {
    npc.validate();
    if (!(std::abs(r_prime) <= 1.0)) throw PreconditionViolated("r' must lie in [-1, 1]");
    for (int c = 0; c < 2; ++c)
        if (!linalg::is_psd(build_multipartite_matrix(npc, r_prime, c), tol))
            throw PreconditionViolated("multipartite matrix is not PSD for context " + std::to_string(c));

    const double n = double(npc.size());
    NPartyResult res;
    for (const auto& e : npc.experimenters) {
        res.chsh.push_back(e.chsh());
        res.sum_abs += std::abs(e.chsh());
    }
    res.refined_bound = std::sqrt(2.0 * n) * (std::sqrt(1.0 + r_prime) + std::sqrt(1.0 - r_prime));
    res.bound = 2.0 * std::sqrt(2.0 * n);
    for (int c = 0; c < 2; ++c)
        for (int sign = 0; sign < 2; ++sign) {
            const double s = sign == 0 ? 1.0 : -1.0;
            double sum = 0.0;
            for (const auto& e : npc.experimenters) {
                const auto& rho = c == 0 ? e.first : e.second;
                sum += (rho[0] + s * rho[1]) * (rho[0] + s * rho[1]);
            }
            res.rank_links[c][sign] = 2.0 * (1.0 + s * r_prime) >= sum - tol;
        }
    res.pass_refined = res.sum_abs <= res.refined_bound + tol;
    res.pass_bound = res.refined_bound <= res.bound + tol;
    res.pass = res.pass_refined && res.pass_bound;
    for (const auto& c : res.rank_links)
        for (bool b : c) res.pass = res.pass && b;
    return res;
}

StarData star_correlators(const qmodel::QuantumScenario& sc) {
    if (sc.parties() < 2) throw MalformedInput("star scenario needs at least one experimenter");
    StarData out;
    for (std::size_t s = 1; s < sc.parties(); ++s) {
        const auto m = qmodel::moments(sc, 0, s);
        out.npc.experimenters.push_back({{m.pearson[0][0], m.pearson[1][0]}, {m.pearson[0][1], m.pearson[1][1]}});
        out.r_prime = m.alice.nu;
    }
    out.npc.validate();
    return out;
}

}  // namespace bellri::multiparty
