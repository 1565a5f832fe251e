#include "bellri/qmodel.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "bellri/error.hpp"

namespace bellri::qmodel {
namespace {

using Applied = std::vector<StateVector>;  // one vector per state component

cplx dot(const StateVector& a, const StateVector& b) {
    cplx s{};
    for (std::size_t k = 0; k < a.size(); ++k) s += std::conj(a[k]) * b[k];
    return s;
}

Applied apply_all(const QuantumScenario& sc, std::size_t party, const ComplexMatrix& op) {
    Applied out;
    out.reserve(sc.state.components().size());
    for (const auto& c : sc.state.components()) out.push_back(apply_local(op, party, sc.dims, c));
    return out;
}

// <psi| X |psi> from X|psi>.
cplx mean_of(const QuantumScenario& sc, const Applied& x) {
    cplx s{};
    const auto& comps = sc.state.components();
    for (std::size_t c = 0; c < comps.size(); ++c) s += dot(comps[c], x[c]);
    return s;
}

// <X Y> from X|psi> and Y|psi> for Hermitian X.
cplx overlap(const Applied& x, const Applied& y) {
    cplx s{};
    for (std::size_t c = 0; c < x.size(); ++c) s += dot(x[c], y[c]);
    return s;
}

std::string observable_name(std::size_t party, int setting) {
    static const char* names = "ABCDEFGH";
    const char p = party < 8 ? names[party] : 'M';
    return std::string(1, p) + std::to_string(setting);
}

double clamp_unit(double x) { return std::clamp(x, -1.0, 1.0); }

ComplexMatrix pauli(int which) {
    const cplx i{0.0, 1.0};
    switch (which) {
    case 0: return ComplexMatrix{{0.0, 1.0}, {1.0, 0.0}};
    case 1: return ComplexMatrix{{0.0, -i}, {i, 0.0}};
    default: return ComplexMatrix{{1.0, 0.0}, {0.0, -1.0}};
    }
}

struct PartyData {
    std::array<Applied, 2> applied;
    PartyMoments m;
};

// The uncertainty relations need no normalization, so they may skip the
// variance check; eta and nu are left at 0 in that case.
PartyData party_data(const QuantumScenario& sc, std::size_t party, bool require_variance = true) {
    PartyData d;
    for (int i = 0; i < 2; ++i) d.applied[i] = apply_all(sc, party, sc.observables[party][i].matrix());
    PartyMoments& m = d.m;
    for (int i = 0; i < 2; ++i) {
        m.mean[i] = mean_of(sc, d.applied[i]).real();
        m.var[i] = overlap(d.applied[i], d.applied[i]).real() - m.mean[i] * m.mean[i];
        if (require_variance && !(m.var[i] > kMinVariance))
            throw DegenerateData("variance of " + observable_name(party, i) + " vanishes");
    }
    m.z = overlap(d.applied[0], d.applied[1]);
    if (m.var[0] > kMinVariance && m.var[1] > kMinVariance) {
        const double s = std::sqrt(m.var[0] * m.var[1]);
        m.eta = m.z.imag() / s;
        m.nu = (m.z.real() - m.mean[0] * m.mean[1]) / s;
    }
    m.r_q = std::conj(m.z) - m.mean[0] * m.mean[1];
    return d;
}

QuantumMoments pair_moments(const QuantumScenario& sc, const PartyData& a, const PartyData& b) {
    QuantumMoments out;
    out.alice = a.m;
    out.bob = b.m;
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) {
            out.correlator[i][j] = overlap(a.applied[i], b.applied[j]).real();
            out.cov[i][j] = out.correlator[i][j] - a.m.mean[i] * b.m.mean[j];
            out.pearson[i][j] = clamp_unit(out.cov[i][j] / std::sqrt(a.m.var[i] * b.m.var[j]));
        }
    (void)sc;
    return out;
}

double clamped_sqrt(double x, double tol, bool& clamped, bool& negative) {
    if (x >= 0.0) return std::sqrt(x);
    if (x >= -tol) {
        clamped = true;
        return 0.0;
    }
    negative = true;
    return 0.0;
}

}  // namespace

// ---------------------------------------------------------------------------

Observable::Observable(const ComplexMatrix& m) {
    if (!m.square()) throw MalformedInput("observable must be square");
    if (m.rows() < 2 || m.rows() > kMaxPartyDim)
        throw MalformedInput("observable dimension must lie in 2.." + std::to_string(kMaxPartyDim));
    m_ = linalg::HermitianMatrix::from_dense(m, 1e-12).dense();
}

Observable Observable::pauli_x() { return Observable(pauli(0)); }
Observable Observable::pauli_y() { return Observable(pauli(1)); }
Observable Observable::pauli_z() { return Observable(pauli(2)); }

Observable Observable::bloch(double nx, double ny, double nz) {
    ComplexMatrix m(2, 2);
    const std::array<double, 3> n{nx, ny, nz};
    for (int a = 0; a < 3; ++a) m += cplx(n[a]) * pauli(a);
    return Observable(m);
}

Observable Observable::bloch_angles(double theta, double phi) {
    return bloch(std::sin(theta) * std::cos(phi), std::sin(theta) * std::sin(phi), std::cos(theta));
}

QuantumState QuantumState::pure(StateVector amplitudes) {
    if (amplitudes.empty()) throw MalformedInput("empty state vector");
    double norm2 = 0.0;
    for (const auto& a : amplitudes) {
        if (!std::isfinite(a.real()) || !std::isfinite(a.imag())) throw MalformedInput("non-finite amplitude");
        norm2 += std::norm(a);
    }
    if (std::abs(std::sqrt(norm2) - 1.0) > 1e-12) throw MalformedInput("state vector must have unit norm");
    QuantumState s;
    s.dim_ = amplitudes.size();
    s.pure_ = true;
    s.components_.push_back(std::move(amplitudes));
    return s;
}

QuantumState QuantumState::normalized(StateVector amplitudes) {
    double norm2 = 0.0;
    for (const auto& a : amplitudes) norm2 += std::norm(a);
    if (!(norm2 > 0.0) || !std::isfinite(norm2)) throw MalformedInput("cannot normalize a zero or non-finite vector");
    const double inv = 1.0 / std::sqrt(norm2);
    for (auto& a : amplitudes) a *= inv;
    return pure(std::move(amplitudes));
}

QuantumState QuantumState::mixed(const linalg::HermitianMatrix& rho) {
    if (!rho.all_finite()) throw MalformedInput("density matrix has non-finite entries");
    if (std::abs(rho.dense().trace().real() - 1.0) > 1e-12) throw MalformedInput("density matrix must have unit trace");
    const auto eig = linalg::eigen_decompose(rho);
    if (eig.values.front() < -1e-10) throw MalformedInput("density matrix is not positive semidefinite");
    QuantumState s;
    s.dim_ = rho.size();
    for (std::size_t k = 0; k < eig.values.size(); ++k) {
        const double p = eig.values[k];
        if (p <= 1e-15) continue;
        StateVector v(s.dim_);
        const double w = std::sqrt(p);
        for (std::size_t r = 0; r < s.dim_; ++r) v[r] = w * eig.vectors(r, k);
        s.components_.push_back(std::move(v));
    }
    s.pure_ = s.components_.size() == 1;
    return s;
}

void QuantumScenario::validate() const {
    if (dims.size() < 2) throw MalformedInput("a scenario needs at least two parties");
    if (observables.size() != dims.size()) throw MalformedInput("one observable pair per party is required");
    std::size_t total = 1;
    for (std::size_t p = 0; p < dims.size(); ++p) {
        if (dims[p] < 2 || dims[p] > kMaxPartyDim) throw MalformedInput("party dimension out of range");
        for (const auto& o : observables[p])
            if (o.dim() != dims[p])
                throw MalformedInput("observable of party " + std::to_string(p) + " does not match its dimension");
        total *= dims[p];
        if (total > kMaxTotalDim) throw MalformedInput("total Hilbert-space dimension too large");
    }
    if (state.dim() != total) throw MalformedInput("state dimension does not match the product of party dimensions");
}

QuantumScenario make_bipartite(QuantumState state, std::array<Observable, 2> alice, std::array<Observable, 2> bob) {
    QuantumScenario sc{{alice[0].dim(), bob[0].dim()}, std::move(state), {std::move(alice), std::move(bob)}};
    sc.validate();
    return sc;
}

StateVector apply_local(const ComplexMatrix& op, std::size_t party, std::span<const std::size_t> dims,
                        std::span<const cplx> psi) {
    std::size_t outer = 1, inner = 1;
    for (std::size_t q = 0; q < party; ++q) outer *= dims[q];
    for (std::size_t q = party + 1; q < dims.size(); ++q) inner *= dims[q];
    const std::size_t d = dims[party];
    const std::size_t block = d * inner;
    StateVector out(psi.size());
    for (std::size_t o = 0; o < outer; ++o) {
        const std::size_t base = o * block;
        for (std::size_t a = 0; a < d; ++a)
            for (std::size_t b = 0; b < d; ++b) {
                const cplx w = op(a, b);
                if (w == cplx{}) continue;
                const cplx* src = psi.data() + base + b * inner;
                cplx* dst = out.data() + base + a * inner;
                for (std::size_t s = 0; s < inner; ++s) dst[s] += w * src[s];
            }
    }
    return out;
}

cplx expectation(const QuantumScenario& sc, std::size_t party, const ComplexMatrix& op) {
    return mean_of(sc, apply_all(sc, party, op));
}

CorrelatorTable QuantumMoments::table() const {
    CorrelatorTable ct;
    ct.mean_a = alice.mean;
    ct.mean_b = bob.mean;
    ct.var_a = alice.var;
    ct.var_b = bob.var;
    ct.cov = cov;
    ct.correlator = correlator;
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) ct.pearson[i][j] = pearson[i][j];
    return ct;
}

double QuantumMoments::chsh() const { return bellri::chsh(pearson); }

PartyMoments party_moments(const QuantumScenario& sc, std::size_t party) {
    sc.validate();
    if (party >= sc.parties()) throw MalformedInput("party index out of range");
    return party_data(sc, party).m;
}

QuantumMoments moments(const QuantumScenario& sc, std::size_t party_a, std::size_t party_b) {
    sc.validate();
    if (party_a >= sc.parties() || party_b >= sc.parties() || party_a == party_b)
        throw MalformedInput("invalid party pair");
    return pair_moments(sc, party_data(sc, party_a), party_data(sc, party_b));
}

TripartiteCorrelatorTable tripartite_table(const QuantumScenario& sc) {
    sc.validate();
    if (sc.parties() < 3) throw MalformedInput("tripartite table needs three parties");
    const PartyData a = party_data(sc, 0), b = party_data(sc, 1), c = party_data(sc, 2);
    const auto ab = pair_moments(sc, a, b), ac = pair_moments(sc, a, c), bc = pair_moments(sc, b, c);
    TripartiteCorrelatorTable t;
    t.ab = ab.pearson;
    t.ac = ac.pearson;
    t.bc = bc.pearson;
    t.var_a = a.m.var;
    t.var_b = b.m.var;
    t.var_c = c.m.var;
    return t;
}

InequalitySides sr_check(const QuantumScenario& sc, std::size_t party, double tol) {
    const PartyMoments m = party_moments(sc, party);
    const double anti = m.z.real() - m.mean[0] * m.mean[1];
    InequalitySides out;
    out.lhs = m.var[0] * m.var[1];
    out.rhs = anti * anti + m.z.imag() * m.z.imag();
    out.pass = out.lhs - out.rhs >= -tol * std::max(1.0, out.lhs);
    return out;
}

linalg::HermitianMatrix quantum_cov_matrix(const QuantumScenario& sc, int j) {
    if (j < 0 || j > 1) throw MalformedInput("setting index must be 0 or 1");
    const QuantumMoments q = moments(sc);
    linalg::HermitianMatrix m(3);
    m.set(0, 0, q.bob.var[j]);
    m.set(1, 1, q.alice.var[1]);
    m.set(2, 2, q.alice.var[0]);
    m.set(0, 1, q.cov[1][j]);
    m.set(0, 2, q.cov[0][j]);
    m.set(1, 2, q.alice.r_q);
    return m;
}

linalg::HermitianMatrix normalized_cov_matrix(const QuantumScenario& sc, int j) {
    const auto raw = quantum_cov_matrix(sc, j);
    linalg::HermitianMatrix m(3);
    std::array<double, 3> s{};
    for (int k = 0; k < 3; ++k) s[k] = std::sqrt(raw(k, k).real());
    for (int a = 0; a < 3; ++a)
        for (int b = a; b < 3; ++b) m.set(a, b, a == b ? cplx(1.0) : raw(a, b) / (s[a] * s[b]));
    return m;
}

std::array<double, 2> theorem1_rhs(const QuantumMoments& m) {
    const Mat2& p = m.pearson;
    auto term = [](double a, double b) { return std::sqrt(std::max(0.0, (1 - a * a) * (1 - b * b))); };
    return {term(p[0][0], p[1][0]) + term(p[0][1], p[1][1]), term(p[0][0], p[0][1]) + term(p[1][0], p[1][1])};
}

Theorem2Result theorem2_check(const QuantumScenario& sc, double tol) {
    const QuantumMoments q = moments(sc);
    const Mat2& p = q.pearson;
    Theorem2Result res;
    bool negative = false;
    const double ea2 = q.alice.eta * q.alice.eta;
    const double eb2 = q.bob.eta * q.bob.eta;

    res.rows[0].lhs = std::abs(p[0][0] * p[1][0] - p[0][1] * p[1][1]);
    res.rows[1].lhs = std::abs(p[0][0] * p[0][1] - p[1][0] * p[1][1]);
    for (int j = 0; j < 2; ++j)
        res.rows[0].rhs +=
            clamped_sqrt((1 - p[0][j] * p[0][j]) * (1 - p[1][j] * p[1][j]) - ea2, tol, res.clamped, negative);
    for (int i = 0; i < 2; ++i)
        res.rows[1].rhs +=
            clamped_sqrt((1 - p[i][0] * p[i][0]) * (1 - p[i][1] * p[i][1]) - eb2, tol, res.clamped, negative);
    for (auto& r : res.rows) r.pass = !negative && r.rhs - r.lhs >= -tol;

    for (int j = 0; j < 2; ++j) {
        auto& ns = res.ns[j];
        ns.lhs = (1 - p[1][j] * p[1][j]) * (1 - p[0][j] * p[0][j]);
        const double d = q.alice.nu - p[0][j] * p[1][j];
        ns.rhs = d * d + ea2;
        ns.pass = ns.lhs - ns.rhs >= -tol;
    }
    res.pass = res.rows[0].pass && res.rows[1].pass && res.ns[0].pass && res.ns[1].pass;
    return res;
}

InequalitySides product_sr_check(const QuantumScenario& sc, int j, double tol) {
    if (j < 0 || j > 1) throw MalformedInput("setting index must be 0 or 1");
    sc.validate();
    // X_i = A_i B_j as a vector X_i|psi>.
    std::array<Applied, 2> x;
    for (int i = 0; i < 2; ++i) {
        x[i] = apply_all(sc, 0, sc.observables[0][i].matrix());
        for (auto& v : x[i]) v = apply_local(sc.observables[1][j].matrix(), 1, sc.dims, v);
    }
    // The product of commuting Hermitian factors is Hermitian.
    std::array<double, 2> mean{}, var{};
    for (int i = 0; i < 2; ++i) {
        mean[i] = mean_of(sc, x[i]).real();
        var[i] = overlap(x[i], x[i]).real() - mean[i] * mean[i];
    }
    const cplx z = overlap(x[0], x[1]);
    const double anti = z.real() - mean[0] * mean[1];
    InequalitySides out;
    out.lhs = var[0] * var[1];
    out.rhs = anti * anti + z.imag() * z.imag();
    out.pass = out.lhs - out.rhs >= -tol;
    return out;
}

TsirelsonEtaResult tsirelson_eta_bound(const QuantumScenario& sc, double tol) {
    const QuantumMoments q = moments(sc);
    TsirelsonEtaResult res;
    res.chsh = q.chsh();
    res.eta_a = q.alice.eta;
    res.eta_b = q.bob.eta;
    const double e2 = std::min(1.0, std::max(res.eta_a * res.eta_a, res.eta_b * res.eta_b));
    res.bound = 2.0 * std::numbers::sqrt2 * std::sqrt(1.0 - e2);
    res.pass = std::abs(res.chsh) <= res.bound + tol;
    return res;
}

Theorem3Result theorem3_check(const QuantumScenario& sc, double tol) {
    const QuantumMoments q = moments(sc);
    Theorem3Result res;
    const double b = q.chsh() / (2.0 * std::numbers::sqrt2);
    res.chsh_term = b * b;
    res.r_term = q.alice.nu * q.alice.nu + q.alice.eta * q.alice.eta;
    res.total = res.chsh_term + res.r_term;
    const double rho = q.pearson[0][0];
    res.symmetric_configuration = true;
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) {
            const double target = (i * j == 1) ? -rho : rho;
            if (std::abs(q.pearson[i][j] - target) > 1e-9) res.symmetric_configuration = false;
        }
    res.pass = res.total <= 1.0 + tol;
    return res;
}

HigherMomentResult higher_moment_ur(const QuantumScenario& sc, int i, int m, UrSign sign, double tol) {
    if (i < 0 || i > 1) throw MalformedInput("setting index must be 0 or 1");
    if (m < 2) throw MalformedInput("moment order must exceed 1");
    sc.validate();
    const PartyData a = party_data(sc, 0, false);
    const Applied d = apply_all(sc, 0, matrix_power(sc.observables[0][i].matrix(), m));
    const double mean_d = mean_of(sc, d).real();
    const double var_d = overlap(d, d).real() - mean_d * mean_d;
    if (!(var_d > 1e-12)) throw DegenerateData("A" + std::to_string(i) + "^" + std::to_string(m) + " has zero variance");

    // C(X, D) = <X D> - <X><D>, complex in general.
    const cplx c1 = overlap(a.applied[1], d) - a.m.mean[1] * mean_d;
    const cplx c0 = overlap(a.applied[0], d) - a.m.mean[0] * mean_d;
    const double re_c = a.m.r_q.real();

    HigherMomentResult res;
    res.lhs = a.m.var[0] + a.m.var[1];
    res.rhs_basic = 2.0 * std::abs(re_c);
    switch (sign) {
    case UrSign::plus: res.sign = 1; break;
    case UrSign::minus: res.sign = -1; break;
    case UrSign::automatic: res.sign = re_c > 0.0 ? -1 : 1; break;
    }
    res.rhs_enhanced = -2.0 * res.sign * re_c + std::norm(c1 + double(res.sign) * c0) / var_d;
    res.pass = res.lhs - res.rhs_enhanced >= -tol * std::max(1.0, res.lhs);
    return res;
}

ComplexMatrix oscillator_x(std::size_t dim) {
    ComplexMatrix x(dim, dim);
    for (std::size_t n = 1; n < dim; ++n) {
        const double v = std::sqrt(double(n) / 2.0);
        x(n - 1, n) = v;
        x(n, n - 1) = v;
    }
    return x;
}

ComplexMatrix oscillator_p(std::size_t dim) {
    ComplexMatrix p(dim, dim);
    for (std::size_t n = 1; n < dim; ++n) {
        const double v = std::sqrt(double(n) / 2.0);
        // a|n> = sqrt(n)|n-1>, p = i(a^dag - a)/sqrt2
        p(n - 1, n) = cplx(0.0, -v);
        p(n, n - 1) = cplx(0.0, v);
    }
    return p;
}

ComplexMatrix matrix_power(const ComplexMatrix& m, int power) {
    if (power < 0) throw MalformedInput("negative matrix power");
    ComplexMatrix out = ComplexMatrix::identity(m.rows());
    for (int k = 0; k < power; ++k) out = out * m;
    return out;
}

}  // namespace bellri::qmodel
