#pragma once

// Relativistic-independence feasibility for two-setting Pearson data.
//
// Alice's uncertainty block [[1, r'], [r', 1]] must dominate the rank-one
// correlation term for each of Bob's settings j. For fixed j that holds iff
// r' lies in a closed interval centred at rho_0j rho_1j with half-width
// sqrt((1 - rho_0j^2)(1 - rho_1j^2)); RI asks for one r' in all of them.

#include <array>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "bellri/correlators.hpp"
#include "bellri/linalg.hpp"

namespace bellri::ri {

/// Closed-interval slack used for intersections and inequality checks.
inline constexpr double kSlack = 1e-9;

struct RInterval {
    double lo = 0.0;
    double hi = 0.0;
    std::string context;

    double center() const { return 0.5 * (lo + hi); }
    double half_width() const { return 0.5 * (hi - lo); }
    bool contains(double r, double slack = kSlack) const { return r >= lo - slack && r <= hi + slack; }
};

/// Admissible r' for Alice given Bob's setting j (context "j=<j>").
RInterval r_interval_bipartite(const CorrelatorTable& ct, int j);
/// Role-swapped interval for Bob's r-bar given Alice's setting i ("i=<i>").
RInterval r_interval_swapped(const CorrelatorTable& ct, int i);

/// Normalized 3x3 RI matrix [[1, rho_1j, rho_0j], [rho_1j, 1, r'], [rho_0j, r', 1]].
linalg::SymmetricMatrix ri_matrix(const Mat2& rho, int j, double r_prime);

struct TlmResult {
    bool pass = false;
    std::array<double, 2> lhs{};
    std::array<double, 2> rhs{};
    /// rhs - lhs per row
    std::array<double, 2> slack{};
};

/// Both rows of the Landau-type bound on Pearson correlators.
TlmResult tlm_check(const CorrelatorTable& ct, double tol = kSlack);
TlmResult tlm_check(const Mat2& rho, double tol = kSlack);

struct RiFeasibility {
    bool feasible = false;
    bool alice_feasible = false;
    bool bob_feasible = false;
    std::optional<double> witness_r;      ///< midpoint of Alice's intersection
    std::optional<double> witness_r_bar;  ///< midpoint of Bob's intersection
    std::array<RInterval, 2> alice{};
    std::array<RInterval, 2> bob{};
};

RiFeasibility ri_feasible_bipartite(const CorrelatorTable& ct, double slack = kSlack);

/// Set distance between Alice's two intervals; zero when they meet.
double epsilon_gap(const CorrelatorTable& ct);
double epsilon_gap(const Mat2& rho);

/// Aggregate classification of a bipartite table.
struct Verdict {
    std::optional<bool> local;  ///< unknown unless outcomes are +-1
    bool quantum_compatible = false;
    bool ri_feasible = false;
    std::optional<double> witness_r;
    double epsilon = 0.0;
    double chsh = 0.0;
    std::vector<RInterval> intervals;
    std::string violated;  ///< first violated condition, empty if none
};

Verdict classify(const CorrelatorTable& ct, double tol = kSlack);

// --- Tripartite intervals -------------------------------------------------

struct Lemma1Context {
    int j = 0;
    int k = 0;
    bool feasible = true;           ///< diagonal conditions hold
    std::array<double, 2> diagonal{};  ///< 1 - (rho^AB_ij)^2 - (rho^AC_ik)^2, i = 0,1
    std::optional<RInterval> interval;
};

struct Lemma1Result {
    std::vector<Lemma1Context> contexts;
    std::optional<double> common_r;
    std::optional<double> max_lo;
    std::optional<double> min_hi;
};

/// The four (j,k) contexts in order (0,0),(0,1),(1,0),(1,1).
std::array<std::pair<int, int>, 4> all_contexts();

/// Requires rho^BC_jk = 0 (within 1e-9) on every supplied context; otherwise
/// PreconditionViolated. A negative diagonal condition marks the context
/// infeasible and suppresses common_r rather than raising.
Lemma1Result lemma1_intervals(const TripartiteCorrelatorTable& tct,
                              std::span<const std::pair<int, int>> contexts);
Lemma1Result lemma1_intervals(const TripartiteCorrelatorTable& tct);

/// Normalized 4x4 block (C_k, B_j, A_1, A_0) for a context at trial r'.
linalg::SymmetricMatrix tripartite_matrix(const TripartiteCorrelatorTable& tct, int j, int k, double r_prime);

// --- Measurability --------------------------------------------------------

/// cos^2(theta) s0/s1 + sin^2(theta) s1/s0.
double g_theta(double theta, double sigma0, double sigma1);

struct SigmaPair {
    double sigma0 = 1.0;
    double sigma1 = 1.0;
};

struct GMinimum {
    double value = 0.0;
    std::size_t argmin = 0;
};

/// min over a family of local parameter settings tau of g(theta, tau).
GMinimum min_g_over_family(double theta, std::span<const SigmaPair> family);

// --- PR box ---------------------------------------------------------------

struct PrContext {
    int j = 0;
    int k = 0;
    double r = 0.0;                 ///< the unique admissible r_jk
    double det_at_zero = 0.0;       ///< det of the Schur residual at r = 0
    bool psd_at_r = false;
    bool psd_at_zero = false;
    std::array<double, 2> residual_diagonal_unit_ab{};  ///< Schur diagonal if rho^AB were 1
    double signal_a0a1 = 0.0;       ///< C(A0,Ck) C(A1,Ck)
};

struct PrBoxDemo {
    std::array<PrContext, 4> contexts{};
    double forced_rho_ab = 0.0;
    bool ri_violated = false;
};

/// Alice-Charlie PR box with an uncorrelated Bob: PSD forces rho^AB = 0 and
/// pins r_jk = (-1)^k, so Alice's block depends on Charlie's setting.
PrBoxDemo pr_box_demo();

}  // namespace bellri::ri
