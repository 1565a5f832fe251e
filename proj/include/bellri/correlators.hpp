#pragma once

#include <array>
#include <optional>
#include <string>
#include <vector>

namespace bellri {

using Mat2 = std::array<std::array<double, 2>, 2>;
using OptMat2 = std::array<std::array<std::optional<double>, 2>, 2>;

/// Variances at or below this are treated as zero (deterministic setting).
inline constexpr double kZeroVariance = 1e-12;

/// Joint outcome distributions p(a,b|i,j) for two settings per party.
///
/// p[i][j] is a |outcomes_a| x |outcomes_b| table indexed [a][b].
struct ProbabilityTable {
    std::vector<double> outcomes_a;
    std::vector<double> outcomes_b;
    std::array<std::array<std::vector<std::vector<double>>, 2>, 2> p;

    /// Throws MalformedInput on shape errors, negative or non-finite entries,
    /// or a setting pair whose total differs from 1 by more than 1e-12.
    void validate() const;
};

/// One- and two-point moments of a bipartite two-setting scenario.
///
/// When built from a probability table the per-setting moments are taken from
/// the j = 0 (resp. i = 0) context; pearson[i][j] always uses the moments of
/// its own (i,j) context.
struct CorrelatorTable {
    std::array<double, 2> mean_a{};
    std::array<double, 2> mean_b{};
    std::array<double, 2> var_a{1.0, 1.0};
    std::array<double, 2> var_b{1.0, 1.0};
    Mat2 cov{};
    OptMat2 pearson{};
    /// Raw two-point correlators <A_i B_j>.
    Mat2 correlator{};
    /// Outcomes are known to be +-1 (probability input over {-1,+1}, or
    /// moments consistent with var = 1 - mean^2).
    bool binary_pm1 = false;
    bool degenerate = false;
    bool signaling_in_variance = false;

    bool pearson_defined() const;
    /// All four Pearson entries; throws DegenerateData if any is undefined.
    Mat2 pearson_values() const;

    /// Table from Pearson entries with optional variances/means (defaults: unit
    /// variances, zero means).
    static CorrelatorTable from_pearson(const Mat2& rho, std::array<double, 2> var_a = {1.0, 1.0},
                                        std::array<double, 2> var_b = {1.0, 1.0},
                                        std::array<double, 2> mean_a = {0.0, 0.0},
                                        std::array<double, 2> mean_b = {0.0, 0.0});
};

CorrelatorTable from_probability_table(const ProbabilityTable& pt);

/// rho00 + rho10 + rho01 - rho11 on Pearson entries.
double chsh(const CorrelatorTable& ct);
/// Same combination on an arbitrary 2x2 array (raw correlators, say).
double chsh(const Mat2& e);

struct NoSignalingReport {
    double max_discrepancy_a = 0.0;  ///< over i and Alice outcomes, |p(a|i,0) - p(a|i,1)|
    double max_discrepancy_b = 0.0;
    std::string location;            ///< where the worst discrepancy sits, empty if none
    bool pass = true;
};

NoSignalingReport check_no_signaling(const ProbabilityTable& pt, double tol);

/// Pairwise Pearson blocks of a tripartite two-setting scenario.
/// ab[i][j] = rho(A_i,B_j), ac[i][k] = rho(A_i,C_k), bc[j][k] = rho(B_j,C_k).
struct TripartiteCorrelatorTable {
    Mat2 ab{};
    Mat2 ac{};
    Mat2 bc{};
    std::array<double, 2> var_a{1.0, 1.0};
    std::array<double, 2> var_b{1.0, 1.0};
    std::array<double, 2> var_c{1.0, 1.0};

    void validate() const;
};

/// Canonical fixtures.
ProbabilityTable pr_box_probability_table();
ProbabilityTable uniform_probability_table();
/// rho_ij = (-1)^{ij} / sqrt(2): the Tsirelson point.
CorrelatorTable tsirelson_table();
CorrelatorTable pr_box_table();
CorrelatorTable zero_table();

}  // namespace bellri
