#pragma once

// Tripartite and star-shaped n-party consequences of relativistic
// independence: the zeta bound, monogamy of CHSH violations, and the
// n-experimenter sum bound.

#include <array>
#include <cstddef>
#include <vector>

#include "bellri/correlators.hpp"
#include "bellri/linalg.hpp"
#include "bellri/qmodel.hpp"
#include "bellri/ri.hpp"

namespace bellri::multiparty {

/// Inputs of zeta_ij(l,k) for a fixed (i, j, l, k).
struct ZetaArgs {
    double ab_il = 0.0;
    double ab_jl = 0.0;
    double ac_ik = 0.0;
    double ac_jk = 0.0;
    double bc_lk = 0.0;
};

ZetaArgs zeta_args(const TripartiteCorrelatorTable& t, int i, int j, int l, int k);

/// [ac_ik ac_jk - bc ab_il ac_jk - bc ab_jl ac_ik + ab_il ab_jl] / (1 - bc^2).
/// PreconditionViolated if |bc| >= 1 - 1e-12.
double zeta(const ZetaArgs& a);
double zeta(const TripartiteCorrelatorTable& t, int i, int j, int l, int k);

/// Range of r' allowed by the (l,k) context: centre zeta_01, half-width
/// sqrt((1 - zeta_11)(1 - zeta_00)). Radicands within -1e-9 clamp to 0; more
/// negative ones leave the interval empty (nullopt).
std::optional<ri::RInterval> zeta_interval(const TripartiteCorrelatorTable& t, int l, int k);

struct Context {
    int l = 0;  ///< Bob's setting
    int k = 0;  ///< Charlie's setting
};

struct Theorem4Result {
    double lhs = 0.0;  ///< |zeta_01(l,k) - zeta_01(l',k')|
    double rhs = 0.0;
    bool clamped = false;
    bool pass = false;
};

Theorem4Result theorem4_check(const TripartiteCorrelatorTable& t, Context first, Context second, double tol = 1e-9);

struct MonogamyResult {
    double sum_sq = 0.0;
    double sum_abs = 0.0;
    bool pass_sq = false;
    bool pass_abs = false;
};

MonogamyResult monogamy_check(double chsh_ab, double chsh_ac, double tol = 1e-9);

/// Pearson pairs of experimenter s: (rho^s_{0,i_s}, rho^s_{1,i_s}) and
/// (rho^s_{0,j_s}, rho^s_{1,j_s}).
struct ExperimenterData {
    std::array<double, 2> first{};
    std::array<double, 2> second{};

    double chsh() const { return first[0] + first[1] + second[0] - second[1]; }
};

inline constexpr std::size_t kMaxExperimenters = 8;

struct NPartyCorrelators {
    std::vector<ExperimenterData> experimenters;

    /// 1..kMaxExperimenters entries, each finite in [-1, 1].
    void validate() const;
    std::size_t size() const { return experimenters.size(); }
};

/// (n+2)x(n+2) matrix: identity over the experimenters, the Pearson border,
/// and the trailing Alice block [[1, r'], [r', 1]] in order (A0, A1).
/// `context` 0 uses each experimenter's first setting, 1 the second.
linalg::SymmetricMatrix build_multipartite_matrix(const NPartyCorrelators& npc, double r_prime, int context);

/// [[1, r'], [r', 1]] minus the sum of rank-one terms rho_s rho_s^T.
linalg::SymmetricMatrix rank_sum_residual(const NPartyCorrelators& npc, double r_prime, int context);

struct NPartyResult {
    std::vector<double> chsh;
    double sum_abs = 0.0;
    double refined_bound = 0.0;  ///< sqrt(2n)(sqrt(1+r') + sqrt(1-r'))
    double bound = 0.0;          ///< 2 sqrt(2n)
    /// 2(1 +- r') >= sum_s (rho_0 +- rho_1)^2, per context and sign
    std::array<std::array<bool, 2>, 2> rank_links{};
    bool pass_refined = false;
    bool pass_bound = false;
    bool pass = false;
};

/// PreconditionViolated if r' lies outside [-1, 1] or either context matrix
/// fails the PSD test at `tol`.
NPartyResult nparty_bound_check(const NPartyCorrelators& npc, double r_prime, double tol = 1e-9);

struct StarData {
    NPartyCorrelators npc;
    double r_prime = 0.0;  ///< Alice's nu
};

/// Pearson pairs of a star scenario (party 0 = Alice, parties 1..n the
/// experimenters; setting 0 is the first context, setting 1 the second).
StarData star_correlators(const qmodel::QuantumScenario& sc);

}  // namespace bellri::multiparty
