#pragma once

// Small dense matrix kernel. Everything here is sized for the handful of
// covariance blocks and few-qubit operators the rest of the library builds;
// no attempt is made to be fast for large n.

#include <complex>
#include <cstddef>
#include <initializer_list>
#include <vector>

namespace bellri::linalg {

using cplx = std::complex<double>;

inline double conj_value(double x) { return x; }
inline cplx conj_value(const cplx& z) { return std::conj(z); }
inline double real_value(double x) { return x; }
inline double real_value(const cplx& z) { return z.real(); }

/// Row-major dense matrix.
template <class T>
class Matrix {
public:
    Matrix() = default;
    Matrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols, T{}) {}
    Matrix(std::initializer_list<std::initializer_list<T>> rows);

    static Matrix identity(std::size_t n);

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }
    bool square() const { return rows_ == cols_; }

    T& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
    const T& operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

    const std::vector<T>& data() const { return data_; }
    std::vector<T>& data() { return data_; }

    Matrix adjoint() const;
    T trace() const;
    bool all_finite() const;
    double max_abs() const;

    Matrix& operator+=(const Matrix& other);
    Matrix& operator-=(const Matrix& other);
    Matrix& operator*=(T scale);

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<T> data_;
};

template <class T>
Matrix<T> operator*(const Matrix<T>& a, const Matrix<T>& b);
template <class T>
Matrix<T> operator+(Matrix<T> a, const Matrix<T>& b) { return a += b; }
template <class T>
Matrix<T> operator-(Matrix<T> a, const Matrix<T>& b) { return a -= b; }
template <class T>
Matrix<T> operator*(T s, Matrix<T> a) { return a *= s; }

/// Kronecker product, left factor outermost.
template <class T>
Matrix<T> kron(const Matrix<T>& a, const Matrix<T>& b);

/// Frobenius norm.
template <class T>
double frobenius_norm(const Matrix<T>& m);

/// Square matrix equal to its own (conjugate) transpose.
///
/// The invariant entries(i,j) == conj(entries(j,i)) holds bit-exactly: the
/// constructors symmetrize and `set` writes both triangles. Diagonal entries
/// carry no imaginary part.
template <class T>
class SelfAdjointMatrix {
public:
    explicit SelfAdjointMatrix(std::size_t n = 1);
    SelfAdjointMatrix(std::initializer_list<std::initializer_list<T>> rows);

    static SelfAdjointMatrix identity(std::size_t n);

    /// Validates near-symmetry (relative `tol`) and finiteness, then averages
    /// the two triangles. Throws MalformedInput on failure.
    static SelfAdjointMatrix from_dense(const Matrix<T>& m, double tol = 1e-12);

    std::size_t size() const { return dense_.rows(); }
    T operator()(std::size_t i, std::size_t j) const { return dense_(i, j); }
    void set(std::size_t i, std::size_t j, T value);

    const Matrix<T>& dense() const { return dense_; }
    bool all_finite() const { return dense_.all_finite(); }

private:
    Matrix<T> dense_;
};

using SymmetricMatrix = SelfAdjointMatrix<double>;
using HermitianMatrix = SelfAdjointMatrix<cplx>;
using RealMatrix = Matrix<double>;
using ComplexMatrix = Matrix<cplx>;

template <class T>
struct EigenDecomposition {
    std::vector<double> values;  ///< ascending
    Matrix<T> vectors;           ///< column k belongs to values[k]
    int sweeps = 0;
};

/// Cyclic Jacobi eigendecomposition. Complex pivots are first rotated to the
/// real axis with a diagonal phase, then annihilated by a real rotation.
template <class T>
EigenDecomposition<T> eigen_decompose(const SelfAdjointMatrix<T>& m);

/// Eigenvalues in ascending order.
template <class T>
std::vector<double> eigenvalues(const SelfAdjointMatrix<T>& m);

template <class T>
double spectral_norm(const SelfAdjointMatrix<T>& m);

template <class T>
double determinant(const SelfAdjointMatrix<T>& m);

inline constexpr double kDefaultPsdTol = 1e-9;

/// True iff lambda_min >= -tol * max(1, ||m||_2).
template <class T>
bool is_psd(const SelfAdjointMatrix<T>& m, double tol = kDefaultPsdTol);

/// D - C A^{-1} C^H for the partition [[A, C^H], [C, D]] with A the leading
/// `split` x `split` block. A must be positive definite; a non-positive
/// Cholesky pivot raises DegeneratePivot (no pseudo-inverse fallback).
template <class T>
SelfAdjointMatrix<T> schur_complement(const SelfAdjointMatrix<T>& m, std::size_t split);

/// Q^H m Q restricted to the permutation given (new index k <- old perm[k]).
template <class T>
SelfAdjointMatrix<T> permute(const SelfAdjointMatrix<T>& m, const std::vector<std::size_t>& perm);

}  // namespace bellri::linalg
