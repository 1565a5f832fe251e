#pragma once

// Finite-dimensional quantum scenarios: a state on a tensor product of party
// spaces (Alice first, then Bob, then Charlie, ...) and two observables per
// party. Every expectation is evaluated from the vectors X|psi>, so a product
// <X Y> of Hermitian X, Y is the inner product of X|psi> and Y|psi>; mixed
// states are handled as a weighted sum over their eigenvectors.

#include <array>
#include <complex>
#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "bellri/correlators.hpp"
#include "bellri/linalg.hpp"

namespace bellri::qmodel {

using linalg::cplx;
using linalg::ComplexMatrix;
using StateVector = std::vector<cplx>;

inline constexpr std::size_t kMaxPartyDim = 32;
inline constexpr std::size_t kMaxTotalDim = 4096;
/// Variances at or below this are treated as zero.
inline constexpr double kMinVariance = 1e-12;

class Observable {
public:
    /// Validates Hermiticity within 1e-12 (relative to the largest entry),
    /// finiteness and dimension 2..kMaxPartyDim; symmetrizes exactly.
    explicit Observable(const ComplexMatrix& m);

    static Observable pauli_x();
    static Observable pauli_y();
    static Observable pauli_z();
    /// n . sigma for a (not necessarily unit) real 3-vector.
    static Observable bloch(double nx, double ny, double nz);
    /// n . sigma with n = (sin t cos p, sin t sin p, cos t).
    static Observable bloch_angles(double theta, double phi);

    std::size_t dim() const { return m_.rows(); }
    const ComplexMatrix& matrix() const { return m_; }

private:
    ComplexMatrix m_;
};

class QuantumState {
public:
    /// Pure state; norm must be 1 within 1e-12.
    static QuantumState pure(StateVector amplitudes);
    /// Pure state after normalization; throws on a zero vector.
    static QuantumState normalized(StateVector amplitudes);
    /// Density matrix: trace 1 within 1e-12, PSD within 1e-10.
    static QuantumState mixed(const linalg::HermitianMatrix& rho);

    std::size_t dim() const { return dim_; }
    bool is_pure() const { return components_.size() == 1 && pure_; }
    /// sqrt(p_k) |v_k>, so that rho = sum_k |c_k><c_k|.
    const std::vector<StateVector>& components() const { return components_; }

private:
    std::size_t dim_ = 0;
    bool pure_ = false;
    std::vector<StateVector> components_;
};

struct QuantumScenario {
    std::vector<std::size_t> dims;                    ///< per party, Alice first
    QuantumState state;
    std::vector<std::array<Observable, 2>> observables;  ///< per party, settings 0 and 1

    /// Throws MalformedInput if dims, observables and state disagree.
    void validate() const;
    std::size_t parties() const { return dims.size(); }
};

/// Two-party scenario helper (dims taken from the observables).
QuantumScenario make_bipartite(QuantumState state, std::array<Observable, 2> alice, std::array<Observable, 2> bob);

/// Apply a local operator on `party` to a state vector of the full space.
StateVector apply_local(const ComplexMatrix& op, std::size_t party, std::span<const std::size_t> dims,
                        std::span<const cplx> psi);

/// Expectation of a single local operator.
cplx expectation(const QuantumScenario& sc, std::size_t party, const ComplexMatrix& op);

struct PartyMoments {
    std::array<double, 2> mean{};
    std::array<double, 2> var{};
    cplx z{};          ///< <X0 X1>
    double eta = 0.0;  ///< (1/2i)<[X0,X1]> / (Delta0 Delta1)
    double nu = 0.0;   ///< (1/2<{X0,X1}> - <X0><X1>) / (Delta0 Delta1)
    cplx r_q{};        ///< <X1 X0> - <X1><X0>
};

struct QuantumMoments {
    PartyMoments alice;
    PartyMoments bob;
    Mat2 correlator{};  ///< <A_i B_j>
    Mat2 cov{};
    Mat2 pearson{};

    CorrelatorTable table() const;
    double chsh() const;
};

/// Party-level moments; DegenerateData names the zero-variance observable.
PartyMoments party_moments(const QuantumScenario& sc, std::size_t party);

/// Moments of the pair (party_a, party_b), by default Alice and Bob.
QuantumMoments moments(const QuantumScenario& sc, std::size_t party_a = 0, std::size_t party_b = 1);

/// Pairwise Pearson blocks of parties 0, 1, 2.
TripartiteCorrelatorTable tripartite_table(const QuantumScenario& sc);

struct InequalitySides {
    double lhs = 0.0;
    double rhs = 0.0;
    bool pass = false;
};

/// Schrodinger-Robertson relation of a party's two observables.
InequalitySides sr_check(const QuantumScenario& sc, std::size_t party = 0, double tol = 1e-9);

/// 3x3 covariance block (B_j, A_1, A_0) with complex r_Q off-diagonal.
linalg::HermitianMatrix quantum_cov_matrix(const QuantumScenario& sc, int j);
/// Same block normalized by the standard deviations.
linalg::HermitianMatrix normalized_cov_matrix(const QuantumScenario& sc, int j);

struct Theorem2Result {
    std::array<InequalitySides, 2> rows{};
    /// Per Bob setting j: (1-rho_1j^2)(1-rho_0j^2) >= (nu - rho_0j rho_1j)^2 + eta^2.
    std::array<InequalitySides, 2> ns{};
    /// Some radicand was negative but within tolerance and got clamped to 0.
    bool clamped = false;
    bool pass = false;
};

Theorem2Result theorem2_check(const QuantumScenario& sc, double tol = 1e-9);

/// The rows with eta forced to 0, for comparison.
std::array<double, 2> theorem1_rhs(const QuantumMoments& m);

/// For +-1 observables with zero means: SR relation of the products
/// A_0 B_j and A_1 B_j, evaluated on the operators themselves.
InequalitySides product_sr_check(const QuantumScenario& sc, int j, double tol = 1e-9);

struct TsirelsonEtaResult {
    double chsh = 0.0;
    double eta_a = 0.0;
    double eta_b = 0.0;
    double bound = 0.0;
    bool pass = false;
};

/// |B| <= 2 sqrt(2) sqrt(1 - max(eta_A^2, eta_B^2)).
TsirelsonEtaResult tsirelson_eta_bound(const QuantumScenario& sc, double tol = 1e-9);

struct Theorem3Result {
    double chsh_term = 0.0;  ///< (B / 2 sqrt 2)^2
    double r_term = 0.0;     ///< |<A0 A1> - <A0><A1>|^2 / (Delta0 Delta1)^2
    double total = 0.0;
    /// rho_ij = (-1)^{ij} rho within 1e-9: the configuration the bound is proven for.
    bool symmetric_configuration = false;
    bool pass = false;
};

Theorem3Result theorem3_check(const QuantumScenario& sc, double tol = 1e-9);

enum class UrSign { plus, minus, automatic };

struct HigherMomentResult {
    double lhs = 0.0;           ///< Delta^2(A1) + Delta^2(A0)
    double rhs_basic = 0.0;     ///< 2 |Re C(A1, A0)|
    double rhs_enhanced = 0.0;  ///< -2 s Re C(A1,A0) + |C(A1,D) + s C(A0,D)|^2 / Delta^2(D)
    int sign = 1;               ///< the s actually used
    bool pass = false;
};

/// Uncertainty relation sharpened by D = A_i^m. `automatic` picks
/// s = -sgn(Re C(A1,A0)), for which the Re C term equals the basic bound.
/// DegenerateData if Delta^2(D) <= 1e-12.
HigherMomentResult higher_moment_ur(const QuantumScenario& sc, int i, int m, UrSign sign = UrSign::automatic,
                                    double tol = 1e-9);

/// Truncated harmonic-oscillator quadratures (hbar = 1): x = (a + a^dag)/sqrt2,
/// p = i (a^dag - a)/sqrt2 on levels 0..dim-1.
ComplexMatrix oscillator_x(std::size_t dim);
ComplexMatrix oscillator_p(std::size_t dim);

ComplexMatrix matrix_power(const ComplexMatrix& m, int power);

}  // namespace bellri::qmodel
