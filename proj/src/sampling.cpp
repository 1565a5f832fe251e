#include "bellri/sampling.hpp"

#include <cmath>
#include <numbers>

#include "bellri/error.hpp"

namespace bellri::sampling {

std::uint64_t stream_seed(std::uint64_t seed, std::uint64_t index) {
    std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (index + 1);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

Rng make_rng(std::uint64_t seed, std::uint64_t index) { return Rng(stream_seed(seed, index)); }

qmodel::StateVector random_state_vector(std::size_t dim, Rng& rng) {
    std::normal_distribution<double> g;
    qmodel::StateVector v(dim);
    for (auto& a : v) {
        const double re = g(rng);
        const double im = g(rng);
        a = {re, im};
    }
    double n2 = 0.0;
    for (const auto& a : v) n2 += std::norm(a);
    const double inv = 1.0 / std::sqrt(n2);
    for (auto& a : v) a *= inv;
    return v;
}

qmodel::QuantumState random_pure_state(std::size_t dim, Rng& rng) {
    return qmodel::QuantumState::normalized(random_state_vector(dim, rng));
}

qmodel::Observable random_gue_observable(std::size_t dim, Rng& rng) {
    std::normal_distribution<double> g;
    linalg::ComplexMatrix m(dim, dim);
    for (std::size_t r = 0; r < dim; ++r)
        for (std::size_t c = 0; c < dim; ++c) {
            const double re = g(rng);
            const double im = g(rng);
            m(r, c) = {re, im};
        }
    linalg::ComplexMatrix h = m + m.adjoint();
    h *= linalg::cplx(0.5);
    return qmodel::Observable(h);
}

std::array<double, 3> random_unit_vector(Rng& rng) {
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    std::uniform_real_distribution<double> a(0.0, 2.0 * std::numbers::pi);
    const double z = u(rng);
    const double phi = a(rng);
    const double s = std::sqrt(std::max(0.0, 1.0 - z * z));
    return {s * std::cos(phi), s * std::sin(phi), z};
}

qmodel::Observable random_qubit_observable(Rng& rng) {
    const auto n = random_unit_vector(rng);
    return qmodel::Observable::bloch(n[0], n[1], n[2]);
}

qmodel::QuantumScenario random_scenario(std::span<const std::size_t> dims, Rng& rng, ObservableKind kind) {
    std::size_t total = 1;
    for (auto d : dims) total *= d;
    qmodel::QuantumState state = random_pure_state(total, rng);
    std::vector<std::array<qmodel::Observable, 2>> obs;
    for (auto d : dims) {
        auto draw = [&] {
            if (kind == ObservableKind::bloch && d == 2) return random_qubit_observable(rng);
            return random_gue_observable(d, rng);
        };
        qmodel::Observable o0 = draw();
        qmodel::Observable o1 = draw();
        obs.push_back({std::move(o0), std::move(o1)});
    }
    qmodel::QuantumScenario sc{std::vector<std::size_t>(dims.begin(), dims.end()), std::move(state), std::move(obs)};
    sc.validate();
    return sc;
}

qmodel::QuantumScenario random_bipartite(std::size_t lo, std::size_t hi, Rng& rng, ObservableKind kind) {
    std::uniform_int_distribution<std::size_t> pick(lo, hi);
    const std::size_t da = pick(rng);
    const std::size_t db = pick(rng);
    const std::array<std::size_t, 2> dims{da, db};
    return random_scenario(dims, rng, kind);
}

namespace {

using Vec3 = std::array<double, 3>;

Vec3 cross(const Vec3& a, const Vec3& b) {
    return {a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]};
}

double norm3(const Vec3& a) { return std::sqrt(a[0] * a[0] + a[1] * a[1] + a[2] * a[2]); }

linalg::ComplexMatrix pauli(int a) {
    return (a == 0 ? qmodel::Observable::pauli_x() : a == 1 ? qmodel::Observable::pauli_y()
                                                            : qmodel::Observable::pauli_z())
        .matrix();
}

// Covariance of local operators X on party p and Y on party q in a pure state.
double local_cov(const qmodel::StateVector& psi, std::span<const std::size_t> dims, std::size_t p,
                 const linalg::ComplexMatrix& x, std::size_t q, const linalg::ComplexMatrix& y) {
    auto inner = [](const qmodel::StateVector& a, const qmodel::StateVector& b) {
        linalg::cplx s{};
        for (std::size_t k = 0; k < a.size(); ++k) s += std::conj(a[k]) * b[k];
        return s;
    };
    const auto xp = qmodel::apply_local(x, p, dims, psi);
    const auto yp = qmodel::apply_local(y, q, dims, psi);
    return inner(xp, yp).real() - inner(psi, xp).real() * inner(psi, yp).real();
}

}  // namespace

qmodel::QuantumScenario random_uncorrelated_bc(Rng& rng) {
    const std::array<std::size_t, 3> dims{2, 2, 2};
    for (int attempt = 0; attempt < 1000; ++attempt) {
        const auto psi = random_state_vector(8, rng);
        const Vec3 b0 = random_unit_vector(rng);
        const auto b0m = qmodel::Observable::bloch(b0[0], b0[1], b0[2]).matrix();

        Vec3 u{};
        for (int a = 0; a < 3; ++a) u[a] = local_cov(psi, dims, 1, b0m, 2, pauli(a));
        // orthonormal pair spanning the plane orthogonal to u
        Vec3 e1 = cross(u, random_unit_vector(rng));
        if (norm3(u) < 1e-9) e1 = random_unit_vector(rng);
        const double n1 = norm3(e1);
        if (n1 < 1e-6) continue;
        for (double& v : e1) v /= n1;
        Vec3 e2 = norm3(u) < 1e-9 ? cross(e1, random_unit_vector(rng)) : cross(u, e1);
        const double n2 = norm3(e2);
        if (n2 < 1e-6) continue;
        for (double& v : e2) v /= n2;

        std::uniform_real_distribution<double> angle(0.0, 2.0 * std::numbers::pi);
        std::array<Vec3, 2> c{};
        for (auto& ck : c) {
            const double t = angle(rng);
            for (int a = 0; a < 3; ++a) ck[a] = std::cos(t) * e1[a] + std::sin(t) * e2[a];
        }
        std::array<Vec3, 2> w{};
        for (int k = 0; k < 2; ++k) {
            const auto ckm = qmodel::Observable::bloch(c[k][0], c[k][1], c[k][2]).matrix();
            for (int a = 0; a < 3; ++a) w[k][a] = local_cov(psi, dims, 1, pauli(a), 2, ckm);
        }
        Vec3 b1 = cross(w[0], w[1]);
        const double nb = norm3(b1);
        if (nb < 1e-6) continue;
        for (double& v : b1) v /= nb;

        std::vector<std::array<qmodel::Observable, 2>> obs;
        obs.push_back({random_qubit_observable(rng), random_qubit_observable(rng)});
        obs.push_back({qmodel::Observable::bloch(b0[0], b0[1], b0[2]), qmodel::Observable::bloch(b1[0], b1[1], b1[2])});
        obs.push_back({qmodel::Observable::bloch(c[0][0], c[0][1], c[0][2]),
                       qmodel::Observable::bloch(c[1][0], c[1][1], c[1][2])});
        qmodel::QuantumScenario sc{{2, 2, 2}, qmodel::QuantumState::normalized(psi), std::move(obs)};
        sc.validate();
        return sc;
    }
    throw DegenerateData("could not draw an uncorrelated Bob-Charlie scenario");
}

qmodel::QuantumScenario random_star_scenario(std::size_t n, Rng& rng) {
    if (n < 1 || n > 4) throw MalformedInput("star scenario supports 1..4 experimenters");
    const std::size_t da = std::size_t{1} << n;
    // pair s couples Alice's qubit s with experimenter s
    std::vector<qmodel::StateVector> pairs;
    for (std::size_t s = 0; s < n; ++s) pairs.push_back(random_state_vector(4, rng));

    const std::size_t total = da << n;
    qmodel::StateVector psi(total);
    for (std::size_t idx = 0; idx < total; ++idx) {
        const std::size_t a = idx >> n;            // Alice's n bits, qubit 0 most significant
        const std::size_t e = idx & (da - 1);      // experimenters' bits, experimenter 1 most significant
        linalg::cplx amp = 1.0;
        for (std::size_t s = 0; s < n; ++s) {
            const std::size_t shift = n - 1 - s;
            amp *= pairs[s][2 * ((a >> shift) & 1U) + ((e >> shift) & 1U)];
        }
        psi[idx] = amp;
    }

    std::normal_distribution<double> g;
    auto alice_observable = [&] {
        linalg::ComplexMatrix m(da, da);
        for (std::size_t s = 0; s < n; ++s) {
            const auto local = random_qubit_observable(rng).matrix();
            linalg::ComplexMatrix term = linalg::ComplexMatrix::identity(1);
            for (std::size_t q = 0; q < n; ++q)
                term = linalg::kron(term, q == s ? local : linalg::ComplexMatrix::identity(2));
            term *= linalg::cplx(g(rng));
            m += term;
        }
        return qmodel::Observable(m);
    };

    std::vector<std::array<qmodel::Observable, 2>> obs;
    qmodel::Observable a0 = alice_observable();
    qmodel::Observable a1 = alice_observable();
    obs.push_back({std::move(a0), std::move(a1)});
    std::vector<std::size_t> dims{da};
    for (std::size_t s = 0; s < n; ++s) {
        dims.push_back(2);
        obs.push_back({random_qubit_observable(rng), random_qubit_observable(rng)});
    }
    qmodel::QuantumScenario sc{std::move(dims), qmodel::QuantumState::normalized(std::move(psi)), std::move(obs)};
    sc.validate();
    return sc;
}

}  // namespace bellri::sampling
