#pragma once

// Local hidden variables for the two-setting, two-outcome scenario.
//
// Vertex ordering: index v = 8*bit(a0) + 4*bit(a1) + 2*bit(b0) + bit(b1),
// with bit 0 <-> -1 and bit 1 <-> +1. Index 0 is (-,-,-,-), 15 is (+,+,+,+).

#include <array>
#include <optional>

#include "bellri/correlators.hpp"
#include "bellri/linalg.hpp"

namespace bellri::lhv {

struct DeterministicStrategy {
    int a0 = 1, a1 = 1, b0 = 1, b1 = 1;

    int a(int i) const { return i == 0 ? a0 : a1; }
    int b(int j) const { return j == 0 ? b0 : b1; }
};

inline constexpr std::size_t kVertexCount = 16;

std::array<DeterministicStrategy, kVertexCount> enumerate_vertices();
std::size_t vertex_index(const DeterministicStrategy& s);

/// Raw correlators <A_i B_j> of a single vertex.
Mat2 vertex_correlators(const DeterministicStrategy& s);

class LhvEnsemble {
public:
    /// Throws MalformedInput unless weights are finite, non-negative and sum
    /// to 1 within 1e-12.
    explicit LhvEnsemble(const std::array<double, kVertexCount>& weights);

    static LhvEnsemble point_mass(std::size_t vertex);
    static LhvEnsemble uniform();

    const std::array<double, kVertexCount>& weights() const { return weights_; }

private:
    std::array<double, kVertexCount> weights_;
};

struct LhvCorrelators {
    CorrelatorTable table;
    double r = 0.0;                        ///< C(A0, A1)
    std::optional<double> r_normalized;    ///< C(A0, A1) / (Delta0 Delta1)
};

LhvCorrelators correlators_of(const LhvEnsemble& ens);

/// Correlation-polytope membership via the eight CHSH facets.
/// Throws MalformedInput if some |E_ij| > 1 + tol.
bool is_local(const Mat2& e, double tol = 1e-9);

/// Largest of the eight signed CHSH combinations.
double max_chsh(const Mat2& e);

struct ProductCovariance {
    /// Covariance of the products (A0B0, A1B0, A0B1, A1B1).
    linalg::SymmetricMatrix matrix{4};
    /// Some single-party variance is (numerically) zero.
    bool degenerate = false;
    /// Raw CHSH E00 + E10 + E01 - E11.
    double chsh = 0.0;
};

/// Covariance of the four outcome products; u M u^T = 4 - B^2 holds exactly
/// for u = (1, 1, 1, -1) because the CHSH random variable is +-2 on every vertex.
ProductCovariance product_cov_matrix(const LhvEnsemble& ens);

/// Block matrix [[N - R0 R0^T, R0 R1^T], [R1 R0^T, N - R1 R1^T]] with
/// N = [[1, r'], [r', 1]] and R_j = (rho_0j, rho_1j).
linalg::SymmetricMatrix local_block_matrix(const Mat2& rho, double r_prime);

/// Block-diagonal variant (zero off-diagonal blocks); PSD iff r' lies in both
/// of Alice's r-intervals.
linalg::SymmetricMatrix quantum_block_matrix(const Mat2& rho, double r_prime);

}  // namespace bellri::lhv
