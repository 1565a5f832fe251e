#include "bellri/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "bellri/error.hpp"

namespace bellri::linalg {
namespace {

bool finite(double x) { return std::isfinite(x); }
bool finite(const cplx& z) { return std::isfinite(z.real()) && std::isfinite(z.imag()); }

constexpr int kMaxSweeps = 100;

}  // namespace

template <class T>
Matrix<T>::Matrix(std::initializer_list<std::initializer_list<T>> rows) {
    rows_ = rows.size();
    cols_ = rows_ == 0 ? 0 : rows.begin()->size();
    data_.reserve(rows_ * cols_);
    for (const auto& row : rows) {
        if (row.size() != cols_) throw MalformedInput("ragged matrix literal");
        data_.insert(data_.end(), row.begin(), row.end());
    }
}

template <class T>
Matrix<T> Matrix<T>::identity(std::size_t n) {
    Matrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = T{1};
    return m;
}

template <class T>
Matrix<T> Matrix<T>::adjoint() const {
    Matrix out(cols_, rows_);
    for (std::size_t i = 0; i < rows_; ++i)
        for (std::size_t j = 0; j < cols_; ++j) out(j, i) = conj_value((*this)(i, j));
    return out;
}

template <class T>
T Matrix<T>::trace() const {
    T t{};
    for (std::size_t i = 0; i < std::min(rows_, cols_); ++i) t += (*this)(i, i);
    return t;
}

template <class T>
bool Matrix<T>::all_finite() const {
    return std::all_of(data_.begin(), data_.end(), [](const T& x) { return finite(x); });
}

template <class T>
double Matrix<T>::max_abs() const {
    double m = 0.0;
    for (const auto& x : data_) m = std::max(m, std::abs(x));
    return m;
}

template <class T>
Matrix<T>& Matrix<T>::operator+=(const Matrix& other) {
    if (rows_ != other.rows_ || cols_ != other.cols_) throw MalformedInput("shape mismatch in +=");
    for (std::size_t k = 0; k < data_.size(); ++k) data_[k] += other.data_[k];
    return *this;
}

template <class T>
Matrix<T>& Matrix<T>::operator-=(const Matrix& other) {
    if (rows_ != other.rows_ || cols_ != other.cols_) throw MalformedInput("shape mismatch in -=");
    for (std::size_t k = 0; k < data_.size(); ++k) data_[k] -= other.data_[k];
    return *this;
}

template <class T>
Matrix<T>& Matrix<T>::operator*=(T scale) {
    for (auto& x : data_) x *= scale;
    return *this;
}

template <class T>
Matrix<T> operator*(const Matrix<T>& a, const Matrix<T>& b) {
    if (a.cols() != b.rows()) throw MalformedInput("shape mismatch in product");
    Matrix<T> out(a.rows(), b.cols());
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t k = 0; k < a.cols(); ++k) {
            const T aik = a(i, k);
            if (aik == T{}) continue;
            for (std::size_t j = 0; j < b.cols(); ++j) out(i, j) += aik * b(k, j);
        }
    return out;
}

template <class T>
Matrix<T> kron(const Matrix<T>& a, const Matrix<T>& b) {
    Matrix<T> out(a.rows() * b.rows(), a.cols() * b.cols());
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < a.cols(); ++j)
            for (std::size_t k = 0; k < b.rows(); ++k)
                for (std::size_t l = 0; l < b.cols(); ++l)
                    out(i * b.rows() + k, j * b.cols() + l) = a(i, j) * b(k, l);
    return out;
}

template <class T>
double frobenius_norm(const Matrix<T>& m) {
    double s = 0.0;
    for (const auto& x : m.data()) s += std::norm(x);
    return std::sqrt(s);
}

// ---------------------------------------------------------------------------

template <class T>
SelfAdjointMatrix<T>::SelfAdjointMatrix(std::size_t n) : dense_(n, n) {
    if (n == 0) throw MalformedInput("matrix dimension must be at least 1");
}

template <class T>
SelfAdjointMatrix<T>::SelfAdjointMatrix(std::initializer_list<std::initializer_list<T>> rows)
    : SelfAdjointMatrix(from_dense(Matrix<T>(rows))) {}

template <class T>
SelfAdjointMatrix<T> SelfAdjointMatrix<T>::identity(std::size_t n) {
    SelfAdjointMatrix m(n);
    for (std::size_t i = 0; i < n; ++i) m.dense_(i, i) = T{1};
    return m;
}

template <class T>
SelfAdjointMatrix<T> SelfAdjointMatrix<T>::from_dense(const Matrix<T>& m, double tol) {
    if (!m.square() || m.rows() == 0) throw MalformedInput("self-adjoint matrix must be square and non-empty");
    if (!m.all_finite()) throw MalformedInput("matrix has non-finite entries");
    const double scale = std::max(1.0, m.max_abs());
    const std::size_t n = m.rows();
    SelfAdjointMatrix out(n);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i; j < n; ++j) {
            const T a = m(i, j);
            const T b = conj_value(m(j, i));
            if (std::abs(a - b) > tol * scale)
                throw MalformedInput("matrix is not self-adjoint at (" + std::to_string(i) + "," +
                                     std::to_string(j) + ")");
            out.set(i, j, (a + b) / 2.0);
        }
    }
    return out;
}

template <class T>
void SelfAdjointMatrix<T>::set(std::size_t i, std::size_t j, T value) {
    if (i == j) {
        dense_(i, i) = T{real_value(value)};
        return;
    }
    dense_(i, j) = value;
    dense_(j, i) = conj_value(value);
}

// ---------------------------------------------------------------------------

template <class T>
EigenDecomposition<T> eigen_decompose(const SelfAdjointMatrix<T>& m) {
    if (!m.all_finite()) throw MalformedInput("matrix has non-finite entries");
    const std::size_t n = m.size();
    Matrix<T> a = m.dense();
    Matrix<T> v = Matrix<T>::identity(n);
    const double total = frobenius_norm(a);

    int sweep = 0;
    for (; sweep < kMaxSweeps; ++sweep) {
        double off = 0.0;
        for (std::size_t p = 0; p < n; ++p)
            for (std::size_t q = p + 1; q < n; ++q) off += std::norm(a(p, q));
        if (off == 0.0 || std::sqrt(off) <= 1e-17 * total) break;

        for (std::size_t p = 0; p < n; ++p) {
            for (std::size_t q = p + 1; q < n; ++q) {
                const T apq = a(p, q);
                const double mag = std::abs(apq);
                if (mag < 1e-300) continue;
                const double app = real_value(a(p, p));
                const double aqq = real_value(a(q, q));
                // After the first few sweeps, drop pivots below the diagonal's resolution.
                if (sweep > 3 && std::abs(app) + 100.0 * mag == std::abs(app) &&
                    std::abs(aqq) + 100.0 * mag == std::abs(aqq)) {
                    a(p, q) = T{};
                    a(q, p) = T{};
                    continue;
                }
                const T phase = apq / mag;
                const T phase_c = conj_value(phase);
                const double theta = (aqq - app) / (2.0 * mag);
                double t;
                if (std::abs(theta) > 1e150)
                    t = 1.0 / (2.0 * theta);
                else
                    t = (theta >= 0.0 ? 1.0 : -1.0) / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
                const double c = 1.0 / std::sqrt(1.0 + t * t);
                const double s = t * c;

                // J = diag-phase * real rotation: J_pp=c, J_pq=s, J_qp=-s*conj(e), J_qq=c*conj(e)
                for (std::size_t k = 0; k < n; ++k) {
                    const T akp = a(k, p);
                    const T akq = a(k, q);
                    a(k, p) = c * akp - s * phase_c * akq;
                    a(k, q) = s * akp + c * phase_c * akq;
                }
                for (std::size_t k = 0; k < n; ++k) {
                    const T apk = a(p, k);
                    const T aqk = a(q, k);
                    a(p, k) = c * apk - s * phase * aqk;
                    a(q, k) = s * apk + c * phase * aqk;
                }
                for (std::size_t k = 0; k < n; ++k) {
                    const T vkp = v(k, p);
                    const T vkq = v(k, q);
                    v(k, p) = c * vkp - s * phase_c * vkq;
                    v(k, q) = s * vkp + c * phase_c * vkq;
                }
                a(p, q) = T{};
                a(q, p) = T{};
                a(p, p) = T{real_value(a(p, p))};
                a(q, q) = T{real_value(a(q, q))};
            }
        }
    }

    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(),
              [&](std::size_t x, std::size_t y) { return real_value(a(x, x)) < real_value(a(y, y)); });

    EigenDecomposition<T> out;
    out.sweeps = sweep;
    out.values.resize(n);
    out.vectors = Matrix<T>(n, n);
    for (std::size_t k = 0; k < n; ++k) {
        out.values[k] = real_value(a(order[k], order[k]));
        for (std::size_t i = 0; i < n; ++i) out.vectors(i, k) = v(i, order[k]);
    }
    return out;
}

template <class T>
std::vector<double> eigenvalues(const SelfAdjointMatrix<T>& m) {
    return eigen_decompose(m).values;
}

template <class T>
double spectral_norm(const SelfAdjointMatrix<T>& m) {
    const auto ev = eigenvalues(m);
    return std::max(std::abs(ev.front()), std::abs(ev.back()));
}

template <class T>
double determinant(const SelfAdjointMatrix<T>& m) {
    const auto ev = eigenvalues(m);
    return std::accumulate(ev.begin(), ev.end(), 1.0, std::multiplies<>());
}

template <class T>
bool is_psd(const SelfAdjointMatrix<T>& m, double tol) {
    if (!(tol >= 0.0) || !std::isfinite(tol)) throw MalformedInput("psd tolerance must be a finite non-negative number");
    if (!m.all_finite()) throw MalformedInput("matrix has non-finite entries");
    const auto ev = eigenvalues(m);
    const double norm = std::max(std::abs(ev.front()), std::abs(ev.back()));
    return ev.front() >= -tol * std::max(1.0, norm);
}

template <class T>
SelfAdjointMatrix<T> schur_complement(const SelfAdjointMatrix<T>& m, std::size_t split) {
    const std::size_t n = m.size();
    if (split == 0 || split >= n) throw MalformedInput("schur split must lie strictly inside the matrix");
    if (!m.all_finite()) throw MalformedInput("matrix has non-finite entries");
    const std::size_t rest = n - split;

    double diag_scale = 1.0;
    for (std::size_t i = 0; i < split; ++i) diag_scale = std::max(diag_scale, std::abs(real_value(m(i, i))));

    // Cholesky A = L L^H of the leading block.
    Matrix<T> l(split, split);
    for (std::size_t j = 0; j < split; ++j) {
        double d = real_value(m(j, j));
        for (std::size_t k = 0; k < j; ++k) d -= std::norm(l(j, k));
        if (!(d > 1e-12 * diag_scale))
            throw DegeneratePivot("leading block is not positive definite (pivot " + std::to_string(j) + ")");
        const double ljj = std::sqrt(d);
        l(j, j) = T{ljj};
        for (std::size_t i = j + 1; i < split; ++i) {
            T s = m(i, j);
            for (std::size_t k = 0; k < j; ++k) s -= l(i, k) * conj_value(l(j, k));
            l(i, j) = s / ljj;
        }
    }

    // X = L^{-1} B, B the upper-right block (split x rest).
    Matrix<T> x(split, rest);
    for (std::size_t c = 0; c < rest; ++c) {
        for (std::size_t i = 0; i < split; ++i) {
            T s = m(i, split + c);
            for (std::size_t k = 0; k < i; ++k) s -= l(i, k) * x(k, c);
            x(i, c) = s / l(i, i);
        }
    }

    Matrix<T> out(rest, rest);
    for (std::size_t i = 0; i < rest; ++i)
        for (std::size_t j = 0; j < rest; ++j) {
            T s = m(split + i, split + j);
            for (std::size_t k = 0; k < split; ++k) s -= conj_value(x(k, i)) * x(k, j);
            out(i, j) = s;
        }
    return SelfAdjointMatrix<T>::from_dense(out, 1e-9);
}

template <class T>
SelfAdjointMatrix<T> permute(const SelfAdjointMatrix<T>& m, const std::vector<std::size_t>& perm) {
    const std::size_t n = m.size();
    if (perm.size() != n) throw MalformedInput("permutation length mismatch");
    std::vector<bool> seen(n, false);
    for (auto p : perm) {
        if (p >= n || seen[p]) throw MalformedInput("not a permutation");
        seen[p] = true;
    }
    SelfAdjointMatrix<T> out(n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i; j < n; ++j) out.set(i, j, m(perm[i], perm[j]));
    return out;
}

#define BELLRI_INSTANTIATE(T)                                                                  \
    template class Matrix<T>;                                                                  \
    template Matrix<T> operator*(const Matrix<T>&, const Matrix<T>&);                          \
    template Matrix<T> kron(const Matrix<T>&, const Matrix<T>&);                               \
    template double frobenius_norm(const Matrix<T>&);                                          \
    template class SelfAdjointMatrix<T>;                                                       \
    template EigenDecomposition<T> eigen_decompose(const SelfAdjointMatrix<T>&);               \
    template std::vector<double> eigenvalues(const SelfAdjointMatrix<T>&);                     \
    template double spectral_norm(const SelfAdjointMatrix<T>&);                                \
    template double determinant(const SelfAdjointMatrix<T>&);                                  \
    template bool is_psd(const SelfAdjointMatrix<T>&, double);                                 \
    template SelfAdjointMatrix<T> schur_complement(const SelfAdjointMatrix<T>&, std::size_t);  \
    template SelfAdjointMatrix<T> permute(const SelfAdjointMatrix<T>&, const std::vector<std::size_t>&);

BELLRI_INSTANTIATE(double)
BELLRI_INSTANTIATE(cplx)

#undef BELLRI_INSTANTIATE

}  // namespace bellri::linalg
