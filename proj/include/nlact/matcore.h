// Copyright 2026 The nlact Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef NLACT_MATCORE_H
#define NLACT_MATCORE_H

#include <cmath>
#include <complex>
#include <cstddef>
#include <initializer_list>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <type_traits>
#include <vector>

namespace nlact {

using cplx = std::complex<double>;

/// Threshold below which a negative eigenvalue is treated as round-off.
inline constexpr double kPsdClampTol = 1e-10;

/// Dense row-major matrix. Sizes in this code base never exceed a few dozen
/// rows, so there is no attempt at blocking or vectorization.
template <typename T>
class Matrix {
   public:
    Matrix() = default;
    Matrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols) {
    }
    Matrix(std::size_t rows, std::size_t cols, std::vector<T> data)
        : rows_(rows), cols_(cols), data_(std::move(data)) {
        if (data_.size() != rows_ * cols_) {
            throw std::invalid_argument(
                "Matrix: entry count " + std::to_string(data_.size()) + " != " + std::to_string(rows_) + "x" +
                std::to_string(cols_));
        }
    }
    Matrix(std::initializer_list<std::initializer_list<T>> rows) : rows_(rows.size()) {
        cols_ = rows_ == 0 ? 0 : rows.begin()->size();
        data_.reserve(rows_ * cols_);
        for (const auto &r : rows) {
            if (r.size() != cols_) {
                throw std::invalid_argument("Matrix: ragged initializer");
            }
            data_.insert(data_.end(), r.begin(), r.end());
        }
    }

    static Matrix identity(std::size_t n) {
        Matrix m(n, n);
        for (std::size_t i = 0; i < n; i++) {
            m(i, i) = T(1);
        }
        return m;
    }
    static Matrix diagonal(std::span<const double> d) {
        Matrix m(d.size(), d.size());
        for (std::size_t i = 0; i < d.size(); i++) {
            m(i, i) = T(d[i]);
        }
        return m;
    }

    std::size_t rows() const {
        return rows_;
    }
    std::size_t cols() const {
        return cols_;
    }
    bool is_square() const {
        return rows_ == cols_;
    }

    T &operator()(std::size_t i, std::size_t j) {
        return data_[i * cols_ + j];
    }
    const T &operator()(std::size_t i, std::size_t j) const {
        return data_[i * cols_ + j];
    }
    std::span<T> data() {
        return data_;
    }
    std::span<const T> data() const {
        return data_;
    }

    Matrix &operator+=(const Matrix &o) {
        check_same_shape(o);
        for (std::size_t k = 0; k < data_.size(); k++) {
            data_[k] += o.data_[k];
        }
        return *this;
    }
    Matrix &operator-=(const Matrix &o) {
        check_same_shape(o);
        for (std::size_t k = 0; k < data_.size(); k++) {
            data_[k] -= o.data_[k];
        }
        return *this;
    }
    Matrix &operator*=(T s) {
        for (auto &v : data_) {
            v *= s;
        }
        return *this;
    }

    friend Matrix operator+(Matrix a, const Matrix &b) {
        return a += b;
    }
    friend Matrix operator-(Matrix a, const Matrix &b) {
        return a -= b;
    }
    friend Matrix operator-(Matrix a) {
        return a *= T(-1);
    }
    friend Matrix operator*(T s, Matrix a) {
        return a *= s;
    }
    friend Matrix operator*(Matrix a, T s) {
        return a *= s;
    }
    friend Matrix operator*(const Matrix &a, const Matrix &b) {
        if (a.cols_ != b.rows_) {
            throw std::invalid_argument("Matrix product: inner dimension mismatch");
        }
        Matrix r(a.rows_, b.cols_);
        for (std::size_t i = 0; i < a.rows_; i++) {
            for (std::size_t k = 0; k < a.cols_; k++) {
                T aik = a(i, k);
                if (aik == T(0)) {
                    continue;
                }
                for (std::size_t j = 0; j < b.cols_; j++) {
                    r(i, j) += aik * b(k, j);
                }
            }
        }
        return r;
    }
    bool operator==(const Matrix &) const = default;

    Matrix transpose() const {
        Matrix r(cols_, rows_);
        for (std::size_t i = 0; i < rows_; i++) {
            for (std::size_t j = 0; j < cols_; j++) {
                r(j, i) = (*this)(i, j);
            }
        }
        return r;
    }
    Matrix conj() const {
        Matrix r = *this;
        if constexpr (!std::is_arithmetic_v<T>) {
            for (auto &v : r.data_) {
                v = std::conj(v);
            }
        }
        return r;
    }
    Matrix adjoint() const {
        return transpose().conj();
    }
    T trace() const {
        T t{};
        for (std::size_t i = 0; i < std::min(rows_, cols_); i++) {
            t += (*this)(i, i);
        }
        return t;
    }
    /// Frobenius norm.
    double norm() const {
        double s = 0;
        for (const auto &v : data_) {
            s += std::norm(v);
        }
        return std::sqrt(s);
    }
    double max_abs() const {
        double m = 0;
        for (const auto &v : data_) {
            m = std::max(m, static_cast<double>(std::abs(v)));
        }
        return m;
    }
    /// Largest entrywise deviation from the conjugate transpose.
    double hermiticity_error() const {
        if (!is_square()) {
            return INFINITY;
        }
        double e = 0;
        for (std::size_t i = 0; i < rows_; i++) {
            for (std::size_t j = i; j < cols_; j++) {
                T d = (*this)(i, j) - conj_scalar((*this)(j, i));
                e = std::max(e, static_cast<double>(std::abs(d)));
            }
        }
        return e;
    }
    bool is_hermitian(double tol = 1e-12) const {
        return hermiticity_error() <= tol;
    }

    static T conj_scalar(T v) {
        if constexpr (std::is_arithmetic_v<T>) {
            return v;
        } else {
            return std::conj(v);
        }
    }

   private:
    void check_same_shape(const Matrix &o) const {
        if (rows_ != o.rows_ || cols_ != o.cols_) {
            throw std::invalid_argument("Matrix: shape mismatch");
        }
    }

    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<T> data_;
};

using CMatrix = Matrix<cplx>;
using RMatrix = Matrix<double>;

/// Largest entrywise |a - b|. Shapes must agree.
template <typename T>
double max_abs_diff(const Matrix<T> &a, const Matrix<T> &b) {
    return (a - b).max_abs();
}

CMatrix to_complex(const RMatrix &m);
RMatrix real_part(const CMatrix &m);
RMatrix imag_part(const CMatrix &m);

/// (A⊗B)[i·r_B+k, j·c_B+l] = A[i,j]·B[k,l].
template <typename T>
Matrix<T> kron(const Matrix<T> &a, const Matrix<T> &b) {
    Matrix<T> r(a.rows() * b.rows(), a.cols() * b.cols());
    for (std::size_t i = 0; i < a.rows(); i++) {
        for (std::size_t j = 0; j < a.cols(); j++) {
            T aij = a(i, j);
            for (std::size_t k = 0; k < b.rows(); k++) {
                for (std::size_t l = 0; l < b.cols(); l++) {
                    r(i * b.rows() + k, j * b.cols() + l) = aij * b(k, l);
                }
            }
        }
    }
    return r;
}

/// Reduced operator on the subsystems listed in `keep` (any order; the result
/// keeps the original subsystem ordering).
CMatrix partial_trace(const CMatrix &m, std::span<const std::size_t> dims, std::span<const std::size_t> keep);

/// Transposes the indices of one subsystem.
CMatrix partial_transpose(const CMatrix &m, std::span<const std::size_t> dims, std::size_t subsystem);

template <typename T>
struct EigenDecomposition {
    std::vector<double> values;  // ascending
    Matrix<T> vectors;           // columns are eigenvectors
};

/// Cyclic Jacobi eigensolver for Hermitian matrices. Throws
/// std::invalid_argument when the input is not Hermitian within
/// 1e-10·max(1, max|H|).
EigenDecomposition<cplx> herm_eig(const CMatrix &h);
EigenDecomposition<double> sym_eig(const RMatrix &h);

double min_eigenvalue(const CMatrix &h);
double min_eigenvalue(const RMatrix &h);

/// Applies f to the spectrum: V·diag(f(λ))·V†.
template <typename T, typename F>
Matrix<T> spectral_map(const EigenDecomposition<T> &e, F &&f) {
    std::size_t n = e.values.size();
    Matrix<T> r(n, n);
    for (std::size_t k = 0; k < n; k++) {
        double fk = f(e.values[k]);
        if (fk == 0) {
            continue;
        }
        for (std::size_t i = 0; i < n; i++) {
            T vik = e.vectors(i, k) * fk;
            for (std::size_t j = 0; j < n; j++) {
                r(i, j) += vik * Matrix<T>::conj_scalar(e.vectors(j, k));
            }
        }
    }
    return r;
}

/// Principal square root of a PSD matrix. Eigenvalues in [-1e-10, 0) are
/// clamped; anything more negative throws std::invalid_argument.
CMatrix psd_sqrt(const CMatrix &h);
RMatrix psd_sqrt(const RMatrix &h);

/// [[A, -B], [B, A]] for H = A + iB.
RMatrix real_embed(const CMatrix &h);

/// Lower-triangular L with L·Lᵀ = A, or nullopt if A is not numerically
/// positive definite.
std::optional<RMatrix> cholesky(const RMatrix &a);
/// Solves L·Lᵀ·x = b.
std::vector<double> cholesky_solve(const RMatrix &l, std::span<const double> b);
RMatrix lower_triangular_inverse(const RMatrix &l);

struct Svd {
    RMatrix u;
    std::vector<double> s;
    RMatrix v;  // A = U·diag(s)·Vᵀ
};
/// One-sided Jacobi SVD of a square matrix. Small singular values keep high
/// relative accuracy, which matters for interior-point scaling near the
/// optimum.
Svd svd_jacobi(const RMatrix &a);

}  // namespace nlact

#endif
