// SPDX-License-Identifier: Apache-2.0
#ifndef TSFUZZY_LINALG_HPP
#define TSFUZZY_LINALG_HPP

#include <cmath>
#include <cstddef>
#include <limits>
#include <span>
#include <vector>

#include "errors.hpp"

namespace tsfuzzy::linalg {

/// Dense row-major matrix of doubles. Sized for the small problems this
/// library works on (tens of columns, hundreds of rows).
class Matrix {
public:
    Matrix() = default;

    Matrix(std::size_t rows, std::size_t cols, double value = 0.0)
        : rows_(rows), cols_(cols), data_(rows * cols, value) {}

    static Matrix identity(std::size_t n) {
        Matrix m(n, n);
        for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
        return m;
    }

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }
    bool empty() const { return data_.empty(); }

    double& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
    double operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

    std::span<double> row(std::size_t i) { return {data_.data() + i * cols_, cols_}; }
    std::span<const double> row(std::size_t i) const { return {data_.data() + i * cols_, cols_}; }

    std::vector<double> column(std::size_t j) const {
        std::vector<double> out(rows_);
        for (std::size_t i = 0; i < rows_; ++i) out[i] = (*this)(i, j);
        return out;
    }

    friend bool operator==(const Matrix&, const Matrix&) = default;

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<double> data_;
};

inline double dot(std::span<const double> a, std::span<const double> b) {
    if (a.size() != b.size()) throw shape_error("dot: length mismatch");
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

inline double squared_norm(std::span<const double> a) {
    double s = 0.0;
    for (double v : a) s += v * v;
    return s;
}

inline std::vector<double> matvec(const Matrix& a, std::span<const double> x) {
    if (a.cols() != x.size()) throw shape_error("matvec: width mismatch");
    std::vector<double> out(a.rows(), 0.0);
    for (std::size_t i = 0; i < a.rows(); ++i) out[i] = dot(a.row(i), x);
    return out;
}

inline Matrix matmul(const Matrix& a, const Matrix& b) {
    if (a.cols() != b.rows()) throw shape_error("matmul: inner dimensions mismatch");
    Matrix out(a.rows(), b.cols());
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t k = 0; k < a.cols(); ++k) {
            const double aik = a(i, k);
            if (aik == 0.0) continue;
            for (std::size_t j = 0; j < b.cols(); ++j) out(i, j) += aik * b(k, j);
        }
    return out;
}

inline Matrix transpose(const Matrix& a) {
    Matrix out(a.cols(), a.rows());
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < a.cols(); ++j) out(j, i) = a(i, j);
    return out;
}

inline double trace(const Matrix& a) {
    if (a.rows() != a.cols()) throw shape_error("trace: matrix must be square");
    double s = 0.0;
    for (std::size_t i = 0; i < a.rows(); ++i) s += a(i, i);
    return s;
}

/// Symmetric selection: keeps the listed rows and columns, in the given order.
inline Matrix select_symmetric(const Matrix& a, std::span<const std::size_t> keep) {
    if (a.rows() != a.cols()) throw shape_error("select_symmetric: matrix must be square");
    Matrix out(keep.size(), keep.size());
    for (std::size_t i = 0; i < keep.size(); ++i)
        for (std::size_t j = 0; j < keep.size(); ++j) {
            if (keep[i] >= a.rows() || keep[j] >= a.rows())
                throw shape_error("select_symmetric: index out of range");
            out(i, j) = a(keep[i], keep[j]);
        }
    return out;
}

struct SymmetricEigen {
    std::vector<double> values; // unsorted, one per dimension
    Matrix vectors;             // eigenvectors in columns, A = V diag(values) V^T
};

/// Cyclic Jacobi eigendecomposition of a symmetric matrix. Quadratically
/// convergent; the sweep cap is far beyond what small matrices need.
inline SymmetricEigen jacobi_eigen(Matrix a, int max_sweeps = 64) {
    const std::size_t n = a.rows();
    if (a.cols() != n) throw shape_error("jacobi_eigen: matrix must be square");
    Matrix v = Matrix::identity(n);
    if (n < 2) return {n == 1 ? std::vector<double>{a(0, 0)} : std::vector<double>{}, v};

    double frob = 0.0;
    for (std::size_t i = 0; i < n; ++i) frob += squared_norm(a.row(i));
    frob = std::sqrt(frob);
    const double stop = std::numeric_limits<double>::epsilon() * std::max(frob, 1e-300);

    for (int sweep = 0; sweep < max_sweeps; ++sweep) {
        double off = 0.0;
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = i + 1; j < n; ++j) off += a(i, j) * a(i, j);
        if (std::sqrt(off) <= stop) break;

        for (std::size_t p = 0; p < n; ++p) {
            for (std::size_t q = p + 1; q < n; ++q) {
                const double apq = a(p, q);
                if (apq == 0.0) continue;
                const double theta = (a(q, q) - a(p, p)) / (2.0 * apq);
                const double t = (theta >= 0.0 ? 1.0 : -1.0) /
                                 (std::abs(theta) + std::sqrt(theta * theta + 1.0));
                const double c = 1.0 / std::sqrt(t * t + 1.0);
                const double s = t * c;
                // A <- J^T A J with J = I except J(p,p)=J(q,q)=c, J(p,q)=s, J(q,p)=-s
                for (std::size_t k = 0; k < n; ++k) {
                    const double akp = a(k, p);
                    const double akq = a(k, q);
                    a(k, p) = c * akp - s * akq;
                    a(k, q) = s * akp + c * akq;
                }
                for (std::size_t k = 0; k < n; ++k) {
                    const double apk = a(p, k);
                    const double aqk = a(q, k);
                    a(p, k) = c * apk - s * aqk;
                    a(q, k) = s * apk + c * aqk;
                }
                for (std::size_t k = 0; k < n; ++k) {
                    const double vkp = v(k, p);
                    const double vkq = v(k, q);
                    v(k, p) = c * vkp - s * vkq;
                    v(k, q) = s * vkp + c * vkq;
                }
            }
        }
    }

    std::vector<double> values(n);
    for (std::size_t i = 0; i < n; ++i) values[i] = a(i, i);
    return {std::move(values), std::move(v)};
}

struct Cholesky {
    Matrix lower;
    bool ok = false;
    std::size_t failed_index = 0; // first non-positive pivot when !ok
};

/// Lower-triangular Cholesky factorization of a symmetric positive-definite
/// matrix. Does not throw; callers decide what a failed pivot means.
inline Cholesky cholesky(const Matrix& a) {
    const std::size_t n = a.rows();
    if (a.cols() != n) throw shape_error("cholesky: matrix must be square");
    Cholesky result;
    result.lower = Matrix(n, n);
    Matrix& l = result.lower;
    for (std::size_t j = 0; j < n; ++j) {
        double d = a(j, j);
        for (std::size_t k = 0; k < j; ++k) d -= l(j, k) * l(j, k);
        if (!(d > 0.0)) {
            result.ok = false;
            result.failed_index = j;
            return result;
        }
        l(j, j) = std::sqrt(d);
        for (std::size_t i = j + 1; i < n; ++i) {
            double s = a(i, j);
            for (std::size_t k = 0; k < j; ++k) s -= l(i, k) * l(j, k);
            l(i, j) = s / l(j, j);
        }
    }
    result.ok = true;
    result.failed_index = n;
    return result;
}

inline double column_mean(const Matrix& a, std::size_t j) {
    if (a.rows() == 0) throw shape_error("column_mean: empty matrix");
    double s = 0.0;
    for (std::size_t i = 0; i < a.rows(); ++i) s += a(i, j);
    return s / static_cast<double>(a.rows());
}

/// Biased (population) variance of one column.
inline double column_variance(const Matrix& a, std::size_t j) {
    const double mean = column_mean(a, j);
    double s = 0.0;
    for (std::size_t i = 0; i < a.rows(); ++i) {
        const double d = a(i, j) - mean;
        s += d * d;
    }
    return s / static_cast<double>(a.rows());
}

} // namespace tsfuzzy::linalg

#endif // TSFUZZY_LINALG_HPP
