#pragma once

#include <Eigen/Dense>
#include <random>

#include "bellri/linalg.hpp"
#include "bellri/qmodel.hpp"

namespace testing {

using bellri::linalg::cplx;

inline Eigen::MatrixXd to_eigen(const bellri::linalg::SymmetricMatrix& m) {
    Eigen::MatrixXd e(m.size(), m.size());
    for (std::size_t i = 0; i < m.size(); ++i)
        for (std::size_t j = 0; j < m.size(); ++j) e(i, j) = m(i, j);
    return e;
}

inline Eigen::MatrixXcd to_eigen(const bellri::linalg::ComplexMatrix& m) {
    Eigen::MatrixXcd e(m.rows(), m.cols());
    for (std::size_t i = 0; i < m.rows(); ++i)
        for (std::size_t j = 0; j < m.cols(); ++j) e(i, j) = m(i, j);
    return e;
}

inline Eigen::MatrixXcd to_eigen(const bellri::linalg::HermitianMatrix& m) { return to_eigen(m.dense()); }

inline bellri::linalg::SymmetricMatrix random_symmetric(std::size_t n, std::mt19937_64& rng) {
    std::normal_distribution<double> g;
    bellri::linalg::SymmetricMatrix m(n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i; j < n; ++j) m.set(i, j, g(rng));
    return m;
}

/// G G^T scaled: PSD, generically positive definite.
inline bellri::linalg::SymmetricMatrix random_psd(std::size_t n, std::size_t rank, std::mt19937_64& rng) {
    std::normal_distribution<double> g;
    Eigen::MatrixXd a(n, rank);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t k = 0; k < rank; ++k) a(i, k) = g(rng);
    const Eigen::MatrixXd p = a * a.transpose();
    bellri::linalg::SymmetricMatrix m(n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i; j < n; ++j) m.set(i, j, p(i, j));
    return m;
}

/// Dense oracle: full operator I x .. x op x .. x I via Kronecker products.
inline Eigen::MatrixXcd embed(const bellri::linalg::ComplexMatrix& op, std::size_t party,
                              const std::vector<std::size_t>& dims) {
    Eigen::MatrixXcd out = Eigen::MatrixXcd::Identity(1, 1);
    for (std::size_t q = 0; q < dims.size(); ++q) {
        const Eigen::MatrixXcd f = q == party ? to_eigen(op) : Eigen::MatrixXcd::Identity(dims[q], dims[q]);
        Eigen::MatrixXcd k(out.rows() * f.rows(), out.cols() * f.cols());
        for (Eigen::Index i = 0; i < out.rows(); ++i)
            for (Eigen::Index j = 0; j < out.cols(); ++j) k.block(i * f.rows(), j * f.cols(), f.rows(), f.cols()) = out(i, j) * f;
        out = k;
    }
    return out;
}

/// Dense oracle for the density matrix of a scenario.
inline Eigen::MatrixXcd density(const bellri::qmodel::QuantumState& s) {
    Eigen::MatrixXcd rho = Eigen::MatrixXcd::Zero(s.dim(), s.dim());
    for (const auto& c : s.components()) {
        Eigen::VectorXcd v(c.size());
        for (std::size_t k = 0; k < c.size(); ++k) v(k) = c[k];
        rho += v * v.adjoint();
    }
    return rho;
}

inline cplx dense_expectation(const bellri::qmodel::QuantumScenario& sc, const Eigen::MatrixXcd& op) {
    return (density(sc.state) * op).trace();
}

}  // namespace testing
