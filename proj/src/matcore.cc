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

#include "nlact/matcore.h"

#include <algorithm>
#include <numeric>

namespace nlact {

namespace {

std::size_t checked_total_dim(const CMatrix &m, std::span<const std::size_t> dims) {
    if (!m.is_square()) {
        throw std::invalid_argument("expected a square matrix");
    }
    std::size_t total = 1;
    for (auto d : dims) {
        if (d == 0) {
            throw std::invalid_argument("subsystem dimension must be positive");
        }
        total *= d;
    }
    if (total != m.rows()) {
        throw std::invalid_argument(
            "subsystem dimensions multiply to " + std::to_string(total) + " but matrix has size " +
            std::to_string(m.rows()));
    }
    return total;
}

// Digits of a flat index in the mixed radix given by dims (first subsystem is
// most significant).
std::vector<std::size_t> digits_of(std::size_t index, std::span<const std::size_t> dims) {
    std::vector<std::size_t> out(dims.size());
    for (std::size_t k = dims.size(); k-- > 0;) {
        out[k] = index % dims[k];
        index /= dims[k];
    }
    return out;
}

double real_of(double v) {
    return v;
}
double real_of(cplx v) {
    return v.real();
}

template <typename T>
EigenDecomposition<T> jacobi_eig(Matrix<T> a) {
    const std::size_t n = a.rows();
    Matrix<T> v = Matrix<T>::identity(n);
    const double scale = a.norm();
    for (int sweep = 0; sweep < 100 && scale > 0; sweep++) {
        double off = 0;
        for (std::size_t p = 0; p < n; p++) {
            for (std::size_t q = p + 1; q < n; q++) {
                off += std::norm(a(p, q));
            }
        }
        if (std::sqrt(off) <= 1e-17 * scale) {
            break;
        }
        for (std::size_t p = 0; p < n; p++) {
            for (std::size_t q = p + 1; q < n; q++) {
                double apq = std::abs(a(p, q));
                if (apq <= 1e-300) {
                    continue;
                }
                double app = real_of(a(p, p));
                double aqq = real_of(a(q, q));
                T phase = a(p, q) / apq;
                T phase_c = Matrix<T>::conj_scalar(phase);
                double tau = (aqq - app) / (2 * apq);
                double t = (tau >= 0 ? 1.0 : -1.0) / (std::abs(tau) + std::sqrt(1 + tau * tau));
                double c = 1 / std::sqrt(1 + t * t);
                double s = t * c;
                // J = diag(1, e^{-iφ}) on (p,q) followed by a real rotation.
                T jpp = T(c);
                T jpq = T(s);
                T jqp = -s * phase_c;
                T jqq = c * phase_c;
                for (std::size_t k = 0; k < n; k++) {
                    T akp = a(k, p);
                    T akq = a(k, q);
                    a(k, p) = akp * jpp + akq * jqp;
                    a(k, q) = akp * jpq + akq * jqq;
                }
                for (std::size_t k = 0; k < n; k++) {
                    T apk = a(p, k);
                    T aqk = a(q, k);
                    a(p, k) = Matrix<T>::conj_scalar(jpp) * apk + Matrix<T>::conj_scalar(jqp) * aqk;
                    a(q, k) = Matrix<T>::conj_scalar(jpq) * apk + Matrix<T>::conj_scalar(jqq) * aqk;
                }
                a(p, q) = T(0);
                a(q, p) = T(0);
                a(p, p) = T(real_of(a(p, p)));
                a(q, q) = T(real_of(a(q, q)));
                for (std::size_t k = 0; k < n; k++) {
                    T vkp = v(k, p);
                    T vkq = v(k, q);
                    v(k, p) = vkp * jpp + vkq * jqp;
                    v(k, q) = vkp * jpq + vkq * jqq;
                }
            }
        }
    }
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](std::size_t i, std::size_t j) {
        return real_of(a(i, i)) < real_of(a(j, j));
    });
    EigenDecomposition<T> out{std::vector<double>(n), Matrix<T>(n, n)};
    for (std::size_t k = 0; k < n; k++) {
        out.values[k] = real_of(a(order[k], order[k]));
        for (std::size_t i = 0; i < n; i++) {
            out.vectors(i, k) = v(i, order[k]);
        }
    }
    return out;
}

template <typename T>
void require_hermitian(const Matrix<T> &h, const char *what) {
    if (!h.is_square()) {
        throw std::invalid_argument(std::string(what) + ": matrix is not square");
    }
    double tol = 1e-10 * std::max(1.0, h.max_abs());
    double err = h.hermiticity_error();
    if (!(err <= tol)) {
        throw std::invalid_argument(std::string(what) + ": matrix is not Hermitian (error " + std::to_string(err) + ")");
    }
}

template <typename T>
Matrix<T> symmetrized(const Matrix<T> &h) {
    return 0.5 * (h + h.adjoint());
}

template <typename T>
Matrix<T> psd_sqrt_impl(const EigenDecomposition<T> &e) {
    for (double l : e.values) {
        if (l < -kPsdClampTol) {
            throw std::invalid_argument("psd_sqrt: eigenvalue " + std::to_string(l) + " is below -1e-10");
        }
    }
    return spectral_map(e, [](double l) {
        return l > 0 ? std::sqrt(l) : 0.0;
    });
}

}  // namespace

CMatrix to_complex(const RMatrix &m) {
    CMatrix r(m.rows(), m.cols());
    for (std::size_t k = 0; k < m.data().size(); k++) {
        r.data()[k] = m.data()[k];
    }
    return r;
}

RMatrix real_part(const CMatrix &m) {
    RMatrix r(m.rows(), m.cols());
    for (std::size_t k = 0; k < m.data().size(); k++) {
        r.data()[k] = m.data()[k].real();
    }
    return r;
}

RMatrix imag_part(const CMatrix &m) {
    RMatrix r(m.rows(), m.cols());
    for (std::size_t k = 0; k < m.data().size(); k++) {
        r.data()[k] = m.data()[k].imag();
    }
    return r;
}

CMatrix partial_trace(const CMatrix &m, std::span<const std::size_t> dims, std::span<const std::size_t> keep) {
    std::size_t total = checked_total_dim(m, dims);
    std::vector<bool> kept(dims.size(), false);
    for (auto k : keep) {
        if (k >= dims.size()) {
            throw std::invalid_argument("partial_trace: subsystem index out of range");
        }
        kept[k] = true;
    }
    std::size_t kept_dim = 1;
    for (std::size_t k = 0; k < dims.size(); k++) {
        if (kept[k]) {
            kept_dim *= dims[k];
        }
    }
    // Split each flat index into its kept and traced parts.
    std::vector<std::size_t> kept_index(total);
    std::vector<std::size_t> traced_index(total);
    for (std::size_t i = 0; i < total; i++) {
        auto d = digits_of(i, dims);
        std::size_t ki = 0;
        std::size_t ti = 0;
        for (std::size_t k = 0; k < dims.size(); k++) {
            if (kept[k]) {
                ki = ki * dims[k] + d[k];
            } else {
                ti = ti * dims[k] + d[k];
            }
        }
        kept_index[i] = ki;
        traced_index[i] = ti;
    }
    CMatrix out(kept_dim, kept_dim);
    for (std::size_t r = 0; r < total; r++) {
        for (std::size_t c = 0; c < total; c++) {
            if (traced_index[r] == traced_index[c]) {
                out(kept_index[r], kept_index[c]) += m(r, c);
            }
        }
    }
    return out;
}

CMatrix partial_transpose(const CMatrix &m, std::span<const std::size_t> dims, std::size_t subsystem) {
    std::size_t total = checked_total_dim(m, dims);
    if (subsystem >= dims.size()) {
        throw std::invalid_argument("partial_transpose: subsystem index out of range");
    }
    std::size_t stride = 1;
    for (std::size_t k = subsystem + 1; k < dims.size(); k++) {
        stride *= dims[k];
    }
    std::size_t d = dims[subsystem];
    CMatrix out(total, total);
    for (std::size_t r = 0; r < total; r++) {
        std::size_t dr = (r / stride) % d;
        for (std::size_t c = 0; c < total; c++) {
            std::size_t dc = (c / stride) % d;
            std::size_t r2 = r + (dc - dr) * stride;
            std::size_t c2 = c + (dr - dc) * stride;
            out(r2, c2) = m(r, c);
        }
    }
    return out;
}

EigenDecomposition<cplx> herm_eig(const CMatrix &h) {
    require_hermitian(h, "herm_eig");
    return jacobi_eig(symmetrized(h));
}

EigenDecomposition<double> sym_eig(const RMatrix &h) {
    require_hermitian(h, "sym_eig");
    return jacobi_eig(symmetrized(h));
}

double min_eigenvalue(const CMatrix &h) {
    auto e = herm_eig(h);
    return e.values.empty() ? 0.0 : e.values.front();
}

double min_eigenvalue(const RMatrix &h) {
    auto e = sym_eig(h);
    return e.values.empty() ? 0.0 : e.values.front();
}

CMatrix psd_sqrt(const CMatrix &h) {
    return psd_sqrt_impl(herm_eig(h));
}

RMatrix psd_sqrt(const RMatrix &h) {
    return psd_sqrt_impl(sym_eig(h));
}

RMatrix real_embed(const CMatrix &h) {
    if (!h.is_square()) {
        throw std::invalid_argument("real_embed: matrix is not square");
    }
    std::size_t n = h.rows();
    RMatrix r(2 * n, 2 * n);
    for (std::size_t i = 0; i < n; i++) {
        for (std::size_t j = 0; j < n; j++) {
            double a = h(i, j).real();
            double b = h(i, j).imag();
            r(i, j) = a;
            r(i + n, j + n) = a;
            r(i, j + n) = -b;
            r(i + n, j) = b;
        }
    }
    return r;
}

std::optional<RMatrix> cholesky(const RMatrix &a) {
    if (!a.is_square()) {
        throw std::invalid_argument("cholesky: matrix is not square");
    }
    std::size_t n = a.rows();
    RMatrix l(n, n);
    for (std::size_t j = 0; j < n; j++) {
        double d = a(j, j);
        for (std::size_t k = 0; k < j; k++) {
            d -= l(j, k) * l(j, k);
        }
        if (!(d > 0)) {
            return std::nullopt;
        }
        double ljj = std::sqrt(d);
        l(j, j) = ljj;
        for (std::size_t i = j + 1; i < n; i++) {
            double s = a(i, j);
            for (std::size_t k = 0; k < j; k++) {
                s -= l(i, k) * l(j, k);
            }
            l(i, j) = s / ljj;
        }
    }
    return l;
}

std::vector<double> cholesky_solve(const RMatrix &l, std::span<const double> b) {
    std::size_t n = l.rows();
    if (b.size() != n) {
        throw std::invalid_argument("cholesky_solve: size mismatch");
    }
    std::vector<double> y(b.begin(), b.end());
    for (std::size_t i = 0; i < n; i++) {
        for (std::size_t k = 0; k < i; k++) {
            y[i] -= l(i, k) * y[k];
        }
        y[i] /= l(i, i);
    }
    for (std::size_t i = n; i-- > 0;) {
        for (std::size_t k = i + 1; k < n; k++) {
            y[i] -= l(k, i) * y[k];
        }
        y[i] /= l(i, i);
    }
    return y;
}

RMatrix lower_triangular_inverse(const RMatrix &l) {
    std::size_t n = l.rows();
    RMatrix inv(n, n);
    for (std::size_t j = 0; j < n; j++) {
        inv(j, j) = 1 / l(j, j);
        for (std::size_t i = j + 1; i < n; i++) {
            double s = 0;
            for (std::size_t k = j; k < i; k++) {
                s -= l(i, k) * inv(k, j);
            }
            inv(i, j) = s / l(i, i);
        }
    }
    return inv;
}

Svd svd_jacobi(const RMatrix &a) {
    if (!a.is_square()) {
        throw std::invalid_argument("svd_jacobi: matrix is not square");
    }
    std::size_t n = a.rows();
    RMatrix u = a;
    RMatrix v = RMatrix::identity(n);
    for (int sweep = 0; sweep < 80; sweep++) {
        bool rotated = false;
        for (std::size_t p = 0; p < n; p++) {
            for (std::size_t q = p + 1; q < n; q++) {
                double alpha = 0;
                double beta = 0;
                double gamma = 0;
                for (std::size_t i = 0; i < n; i++) {
                    alpha += u(i, p) * u(i, p);
                    beta += u(i, q) * u(i, q);
                    gamma += u(i, p) * u(i, q);
                }
                if (std::abs(gamma) <= 1e-16 * std::sqrt(alpha * beta) || gamma == 0) {
                    continue;
                }
                rotated = true;
                double zeta = (beta - alpha) / (2 * gamma);
                double t = (zeta >= 0 ? 1.0 : -1.0) / (std::abs(zeta) + std::sqrt(1 + zeta * zeta));
                double c = 1 / std::sqrt(1 + t * t);
                double s = c * t;
                for (std::size_t i = 0; i < n; i++) {
                    double up = u(i, p);
                    double uq = u(i, q);
                    u(i, p) = c * up - s * uq;
                    u(i, q) = s * up + c * uq;
                    double vp = v(i, p);
                    double vq = v(i, q);
                    v(i, p) = c * vp - s * vq;
                    v(i, q) = s * vp + c * vq;
                }
            }
        }
        if (!rotated) {
            break;
        }
    }
    Svd out{RMatrix(n, n), std::vector<double>(n), v};
    for (std::size_t k = 0; k < n; k++) {
        double s = 0;
        for (std::size_t i = 0; i < n; i++) {
            s += u(i, k) * u(i, k);
        }
        s = std::sqrt(s);
        out.s[k] = s;
        for (std::size_t i = 0; i < n; i++) {
            out.u(i, k) = s > 0 ? u(i, k) / s : 0.0;
        }
    }
    return out;
}

}  // namespace nlact
