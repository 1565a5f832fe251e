#include "bellri/lhv.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "bellri/error.hpp"

namespace bellri::lhv {
namespace {

int sign_of_bit(std::size_t v, int shift) { return ((v >> shift) & 1U) ? 1 : -1; }

}  // namespace

std::array<DeterministicStrategy, kVertexCount> enumerate_vertices() {
    std::array<DeterministicStrategy, kVertexCount> out{};
    for (std::size_t v = 0; v < kVertexCount; ++v)
        out[v] = {sign_of_bit(v, 3), sign_of_bit(v, 2), sign_of_bit(v, 1), sign_of_bit(v, 0)};
    return out;
}

std::size_t vertex_index(const DeterministicStrategy& s) {
    auto bit = [](int x) -> std::size_t { return x > 0 ? 1 : 0; };
    return 8 * bit(s.a0) + 4 * bit(s.a1) + 2 * bit(s.b0) + bit(s.b1);
}

Mat2 vertex_correlators(const DeterministicStrategy& s) {
    Mat2 e{};
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) e[i][j] = s.a(i) * s.b(j);
    return e;
}

LhvEnsemble::LhvEnsemble(const std::array<double, kVertexCount>& weights) : weights_(weights) {
    double total = 0.0;
    for (double w : weights_) {
        if (!std::isfinite(w) || w < 0.0) throw MalformedInput("ensemble weights must be finite and non-negative");
        total += w;
    }
    if (std::abs(total - 1.0) > 1e-12) throw MalformedInput("ensemble weights must sum to 1");
}

LhvEnsemble LhvEnsemble::point_mass(std::size_t vertex) {
    if (vertex >= kVertexCount) throw MalformedInput("vertex index out of range");
    std::array<double, kVertexCount> w{};
    w[vertex] = 1.0;
    return LhvEnsemble(w);
}

LhvEnsemble LhvEnsemble::uniform() {
    std::array<double, kVertexCount> w{};
    w.fill(1.0 / kVertexCount);
    return LhvEnsemble(w);
}

LhvCorrelators correlators_of(const LhvEnsemble& ens) {
    const auto vertices = enumerate_vertices();
    // Moments of the variables (A0, A1, B0, B1).
    std::array<double, 4> mean{};
    std::array<std::array<double, 4>, 4> second{};
    for (std::size_t v = 0; v < kVertexCount; ++v) {
        const double w = ens.weights()[v];
        if (w == 0.0) continue;
        const auto& s = vertices[v];
        const std::array<double, 4> x{double(s.a0), double(s.a1), double(s.b0), double(s.b1)};
        for (int p = 0; p < 4; ++p) {
            mean[p] += w * x[p];
            for (int q = 0; q < 4; ++q) second[p][q] += w * x[p] * x[q];
        }
    }
    auto cov = [&](int p, int q) { return second[p][q] - mean[p] * mean[q]; };

    LhvCorrelators out;
    CorrelatorTable& ct = out.table;
    ct.binary_pm1 = true;
    for (int k = 0; k < 2; ++k) {
        ct.mean_a[k] = mean[k];
        ct.mean_b[k] = mean[2 + k];
        ct.var_a[k] = std::max(0.0, cov(k, k));
        ct.var_b[k] = std::max(0.0, cov(2 + k, 2 + k));
    }
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) {
            ct.correlator[i][j] = second[i][2 + j];
            ct.cov[i][j] = cov(i, 2 + j);
            if (ct.var_a[i] > kZeroVariance && ct.var_b[j] > kZeroVariance)
                ct.pearson[i][j] = std::clamp(ct.cov[i][j] / std::sqrt(ct.var_a[i] * ct.var_b[j]), -1.0, 1.0);
            else
                ct.degenerate = true;
        }
    out.r = cov(0, 1);
    if (ct.var_a[0] > kZeroVariance && ct.var_a[1] > kZeroVariance)
        out.r_normalized = std::clamp(out.r / std::sqrt(ct.var_a[0] * ct.var_a[1]), -1.0, 1.0);
    return out;
}

double max_chsh(const Mat2& e) {
    const std::array<double, 4> x{e[0][0], e[0][1], e[1][0], e[1][1]};
    double best = -std::numeric_limits<double>::infinity();
    for (int minus = 0; minus < 4; ++minus) {
        double s = 0.0;
        for (int t = 0; t < 4; ++t) s += (t == minus) ? -x[t] : x[t];
        best = std::max({best, s, -s});
    }
    return best;
}

bool is_local(const Mat2& e, double tol) {
    for (const auto& row : e)
        for (double v : row)
            if (!std::isfinite(v) || std::abs(v) > 1.0 + tol) throw MalformedInput("correlator outside [-1, 1]");
    return max_chsh(e) <= 2.0 + tol;
}

ProductCovariance product_cov_matrix(const LhvEnsemble& ens) {
    const auto vertices = enumerate_vertices();
    // products ordered (A0B0, A1B0, A0B1, A1B1)
    auto products = [](const DeterministicStrategy& s) {
        return std::array<double, 4>{double(s.a0 * s.b0), double(s.a1 * s.b0), double(s.a0 * s.b1),
                                     double(s.a1 * s.b1)};
    };
    std::array<double, 4> mean{};
    std::array<std::array<double, 4>, 4> second{};
    for (std::size_t v = 0; v < kVertexCount; ++v) {
        const double w = ens.weights()[v];
        if (w == 0.0) continue;
        const auto p = products(vertices[v]);
        for (int a = 0; a < 4; ++a) {
            mean[a] += w * p[a];
            for (int b = 0; b < 4; ++b) second[a][b] += w * p[a] * p[b];
        }
    }
    ProductCovariance out;
    for (int a = 0; a < 4; ++a)
        for (int b = a; b < 4; ++b) out.matrix.set(a, b, second[a][b] - mean[a] * mean[b]);
    out.chsh = mean[0] + mean[1] + mean[2] - mean[3];

    const auto lc = correlators_of(ens);
    for (int k = 0; k < 2; ++k)
        if (lc.table.var_a[k] <= kZeroVariance || lc.table.var_b[k] <= kZeroVariance) out.degenerate = true;
    return out;
}

namespace {

linalg::SymmetricMatrix block_matrix(const Mat2& rho, double r_prime, double off_scale) {
    // Within each block, order (A0, A1) to match R_j = (rho_0j, rho_1j).
    linalg::SymmetricMatrix m(4);
    const std::array<std::array<double, 2>, 2> n{{{1.0, r_prime}, {r_prime, 1.0}}};
    for (int j = 0; j < 2; ++j)
        for (int a = 0; a < 2; ++a)
            for (int b = a; b < 2; ++b) m.set(2 * j + a, 2 * j + b, n[a][b] - rho[a][j] * rho[b][j]);
    for (int a = 0; a < 2; ++a)
        for (int b = 0; b < 2; ++b) m.set(a, 2 + b, off_scale * rho[a][0] * rho[b][1]);
    return m;
}

}  // namespace

linalg::SymmetricMatrix local_block_matrix(const Mat2& rho, double r_prime) { return block_matrix(rho, r_prime, 1.0); }

linalg::SymmetricMatrix quantum_block_matrix(const Mat2& rho, double r_prime) {
    return block_matrix(rho, r_prime, 0.0);
}

}  // namespace bellri::lhv
