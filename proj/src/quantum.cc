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

#include "nlact/quantum.h"

#include <algorithm>
#include <cmath>
#include <limits>

namespace nlact {

namespace {

const cplx kI(0, 1);

std::vector<std::size_t> digits_of(std::size_t index, std::span<const std::size_t> dims) {
    std::vector<std::size_t> out(dims.size());
    for (std::size_t k = dims.size(); k-- > 0;) {
        out[k] = index % dims[k];
        index /= dims[k];
    }
    return out;
}

// Re Tr(A·B) for Hermitian A and B.
double trace_product(const CMatrix &a, const CMatrix &b) {
    double s = 0;
    for (std::size_t i = 0; i < a.rows(); i++) {
        for (std::size_t j = 0; j < a.cols(); j++) {
            s += (a(i, j) * b(j, i)).real();
        }
    }
    return s;
}

const std::vector<std::size_t> kTwoQubits{2, 2};

void require_two_qubit(const DensityMatrix &rho, const char *what) {
    if (rho.dim() != 4) {
        throw std::invalid_argument(std::string(what) + ": expected a two-qubit (4×4) state");
    }
}

}  // namespace

DensityMatrix::DensityMatrix(CMatrix m, std::vector<std::size_t> dims) : dims_(std::move(dims)) {
    if (!m.is_square() || m.rows() == 0) {
        throw std::invalid_argument("DensityMatrix: matrix must be square and non-empty");
    }
    std::size_t total = 1;
    for (auto d : dims_) {
        total *= d;
    }
    if (dims_.empty() || total != m.rows()) {
        throw std::invalid_argument("DensityMatrix: dims do not multiply to the matrix size");
    }
    if (m.hermiticity_error() > kStateTol) {
        throw std::invalid_argument("DensityMatrix: matrix is not Hermitian within 1e-10");
    }
    m_ = 0.5 * (m + m.adjoint());
    double tr = m_.trace().real();
    if (std::abs(tr - 1) > kStateTol) {
        throw std::invalid_argument("DensityMatrix: trace " + std::to_string(tr) + " differs from 1");
    }
    double lmin = min_eigenvalue(m_);
    if (lmin < -kStateTol) {
        throw std::invalid_argument("DensityMatrix: negative eigenvalue " + std::to_string(lmin));
    }
}

double DensityMatrix::purity() const {
    return trace_product(m_, m_);
}

Observable::Observable(CMatrix m, std::string label) : m_(std::move(m)), label_(std::move(label)) {
    if (!m_.is_square() || m_.hermiticity_error() > 1e-10) {
        throw std::invalid_argument("Observable '" + label_ + "' is not Hermitian");
    }
    m_ = 0.5 * (m_ + m_.adjoint());
    auto e = herm_eig(m_);
    if (e.values.front() < -1 - 1e-10 || e.values.back() > 1 + 1e-10) {
        throw std::invalid_argument("Observable '" + label_ + "' has spectrum outside [-1, 1]");
    }
}

CMatrix Observable::eigenprojector(std::size_t outcome) const {
    if (outcome > 1) {
        throw std::invalid_argument("Observable: outcome must be 0 (+1) or 1 (-1)");
    }
    auto e = herm_eig(m_);
    bool has_plus = false;
    bool has_minus = false;
    for (double l : e.values) {
        if (std::abs(l - 1) <= 1e-9) {
            has_plus = true;
        } else if (std::abs(l + 1) <= 1e-9) {
            has_minus = true;
        } else {
            throw std::invalid_argument("Observable '" + label_ + "' is not a ±1 observable");
        }
    }
    if (!has_plus || !has_minus) {
        throw std::invalid_argument("Observable '" + label_ + "' has a degenerate ±1 spectrum");
    }
    double target = outcome == 0 ? 1.0 : -1.0;
    return spectral_map(e, [&](double l) {
        return std::abs(l - target) <= 1e-9 ? 1.0 : 0.0;
    });
}

Povm::Povm(std::vector<CMatrix> effects, std::vector<std::string> labels)
    : effects_(std::move(effects)), labels_(std::move(labels)) {
    if (effects_.empty()) {
        throw std::invalid_argument("Povm: no effects");
    }
    std::size_t d = effects_.front().rows();
    CMatrix total(d, d);
    for (auto &e : effects_) {
        if (!e.is_square() || e.rows() != d) {
            throw std::invalid_argument("Povm: effects have inconsistent shapes");
        }
        if (e.hermiticity_error() > 1e-10) {
            throw std::invalid_argument("Povm: effect is not Hermitian");
        }
        e = 0.5 * (e + e.adjoint());
        if (min_eigenvalue(e) < -1e-10) {
            throw std::invalid_argument("Povm: effect is not PSD");
        }
        total += e;
    }
    if (max_abs_diff(total, CMatrix::identity(d)) > 1e-9) {
        throw std::invalid_argument("Povm: effects do not sum to the identity");
    }
    if (!labels_.empty() && labels_.size() != effects_.size()) {
        throw std::invalid_argument("Povm: label count does not match effect count");
    }
}

Isometry::Isometry(CMatrix v) : v_(std::move(v)) {
    if (v_.rows() != 4 || v_.cols() != 2) {
        throw std::invalid_argument("Isometry: expected a 4×2 matrix");
    }
    if (max_abs_diff(v_.adjoint() * v_, CMatrix::identity(2)) > 1e-12) {
        throw std::invalid_argument("Isometry: V†V differs from I₂");
    }
}

namespace pauli {
CMatrix i() {
    return CMatrix::identity(2);
}
CMatrix x() {
    return CMatrix{{0, 1}, {1, 0}};
}
CMatrix y() {
    return CMatrix{{0, -kI}, {kI, 0}};
}
CMatrix z() {
    return CMatrix{{1, 0}, {0, -1}};
}
}  // namespace pauli

BroadcastSettings table1_settings() {
    using namespace pauli;
    const double r2 = std::sqrt(2.0);
    const double r3 = std::sqrt(3.0);
    return BroadcastSettings{
        {Observable((-x() - z()) * cplx(1 / r2), "A0"), Observable((x() - z()) * cplx(1 / r2), "A1"),
         Observable(-y(), "A2")},
        {Observable((r2 * x() + y()) * cplx(1 / r3), "B0"), Observable((r2 * x() - y()) * cplx(1 / r3), "B1")},
        {Observable(z(), "C0"), Observable(x(), "C1")},
    };
}

DensityMatrix isotropic_state(double alpha) {
    if (!(alpha >= -1.0 / 3 - 1e-15 && alpha <= 1 + 1e-15)) {
        throw std::invalid_argument("isotropic_state: alpha must lie in [-1/3, 1]");
    }
    CMatrix phi(4, 1);
    phi(0, 0) = M_SQRT1_2;
    phi(3, 0) = M_SQRT1_2;
    CMatrix m = cplx(alpha) * (phi * phi.adjoint()) + cplx((1 - alpha) / 4) * CMatrix::identity(4);
    return DensityMatrix(m, kTwoQubits);
}

DensityMatrix phi_plus_state() {
    return isotropic_state(1);
}

DensityMatrix maximally_mixed_state(std::span<const std::size_t> dims) {
    std::size_t total = 1;
    for (auto d : dims) {
        total *= d;
    }
    return DensityMatrix(CMatrix::identity(total) * cplx(1.0 / total), {dims.begin(), dims.end()});
}

DensityMatrix depolarize_qubit(const DensityMatrix &rho, std::size_t subsystem, double p) {
    const auto &dims = rho.dims();
    if (subsystem >= dims.size()) {
        throw std::invalid_argument("depolarize_qubit: subsystem index out of range");
    }
    if (!(p >= 0 && p <= 1)) {
        throw std::invalid_argument("depolarize_qubit: p must lie in [0, 1]");
    }
    std::vector<std::size_t> keep;
    for (std::size_t k = 0; k < dims.size(); k++) {
        if (k != subsystem) {
            keep.push_back(k);
        }
    }
    CMatrix reduced = partial_trace(rho.matrix(), dims, keep);
    std::size_t n = rho.dim();
    std::size_t d = dims[subsystem];
    CMatrix noise(n, n);
    for (std::size_t r = 0; r < n; r++) {
        auto dr = digits_of(r, dims);
        for (std::size_t c = 0; c < n; c++) {
            auto dc = digits_of(c, dims);
            if (dr[subsystem] != dc[subsystem]) {
                continue;
            }
            std::size_t rr = 0;
            std::size_t cc = 0;
            for (auto k : keep) {
                rr = rr * dims[k] + dr[k];
                cc = cc * dims[k] + dc[k];
            }
            noise(r, c) = reduced(rr, cc) / static_cast<double>(d);
        }
    }
    return DensityMatrix(cplx(1 - p) * rho.matrix() + cplx(p) * noise, dims);
}

double fidelity(const DensityMatrix &rho, const DensityMatrix &sigma) {
    if (rho.dim() != sigma.dim()) {
        throw std::invalid_argument("fidelity: dimension mismatch");
    }
    CMatrix s = psd_sqrt(rho.matrix());
    CMatrix inner = s * sigma.matrix() * s;
    inner = 0.5 * (inner + inner.adjoint());
    auto e = herm_eig(inner);
    // Eigenvalues at roundoff level would otherwise contribute √ε each.
    const double floor = 64 * std::numeric_limits<double>::epsilon() * std::max(e.values.back(), 0.0);
    double root = 0;
    for (double l : e.values) {
        root += l > floor ? std::sqrt(l) : 0.0;
    }
    return std::clamp(root * root, 0.0, 1.0);
}

AlphaFit best_fit_alpha(const DensityMatrix &rho) {
    require_two_qubit(rho, "best_fit_alpha");
    auto f = [&](double a) {
        return fidelity(rho, isotropic_state(a));
    };
    const double inv_phi = (std::sqrt(5.0) - 1) / 2;
    double lo = -1.0 / 3;
    double hi = 1.0;
    double x1 = hi - inv_phi * (hi - lo);
    double x2 = lo + inv_phi * (hi - lo);
    double f1 = f(x1);
    double f2 = f(x2);
    while (hi - lo > 1e-6) {
        if (f1 < f2) {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + inv_phi * (hi - lo);
            f2 = f(x2);
        } else {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - inv_phi * (hi - lo);
            f1 = f(x1);
        }
    }
    AlphaFit best{0.5 * (lo + hi), 0};
    best.fidelity = f(best.alpha);
    // The optimum may sit on an endpoint (pure or maximally anti-correlated
    // input); the bracket then collapses onto it.
    for (double edge : {-1.0 / 3, 1.0}) {
        if (std::abs(edge - best.alpha) < 1e-5) {
            double fe = f(edge);
            if (fe >= best.fidelity) {
                best = {edge, fe};
            }
        }
    }
    return best;
}

Isometry broadcast_isometry() {
    CMatrix v(4, 2);
    v(0, 0) = M_SQRT1_2;
    v(3, 0) = -M_SQRT1_2;
    v(1, 1) = -M_SQRT1_2;
    v(2, 1) = -M_SQRT1_2;
    return Isometry(v);
}

DensityMatrix apply_isometry_second(const DensityMatrix &rho, const Isometry &v) {
    require_two_qubit(rho, "apply_isometry_second");
    CMatrix k = kron(pauli::i(), v.matrix());
    return DensityMatrix(k * rho.matrix() * k.adjoint(), {2, 2, 2});
}

Behavior born_behavior(const DensityMatrix &rho_abc, const BroadcastSettings &settings) {
    if (rho_abc.dim() != 8) {
        throw std::invalid_argument("born_behavior: expected a three-qubit (8×8) state");
    }
    std::array<std::array<CMatrix, 2>, kAliceSettings> pa;
    std::array<std::array<CMatrix, 2>, kBobSettings> pb;
    std::array<std::array<CMatrix, 2>, kCharlieSettings> pc;
    for (std::size_t o = 0; o < 2; o++) {
        for (std::size_t x = 0; x < kAliceSettings; x++) {
            pa[x][o] = settings.alice[x].eigenprojector(o);
        }
        for (std::size_t y = 0; y < kBobSettings; y++) {
            pb[y][o] = settings.bob[y].eigenprojector(o);
        }
        for (std::size_t z = 0; z < kCharlieSettings; z++) {
            pc[z][o] = settings.charlie[z].eigenprojector(o);
        }
    }
    ProbabilityTable p{};
    for (std::size_t x = 0; x < kAliceSettings; x++) {
        for (std::size_t y = 0; y < kBobSettings; y++) {
            for (std::size_t z = 0; z < kCharlieSettings; z++) {
                for (std::size_t a = 0; a < 2; a++) {
                    for (std::size_t b = 0; b < 2; b++) {
                        CMatrix ab = kron(pa[x][a], pb[y][b]);
                        for (std::size_t c = 0; c < 2; c++) {
                            double v = trace_product(kron(ab, pc[z][c]), rho_abc.matrix());
                            // Round-off can push zero probabilities to -1e-17.
                            p[Behavior::index(x, y, z, a, b, c)] = std::max(v, 0.0);
                        }
                    }
                }
            }
        }
    }
    return Behavior(p);
}

Povm effective_povm(const Isometry &v, const Observable &b, const Observable &c) {
    std::vector<CMatrix> effects;
    std::vector<std::string> labels;
    for (std::size_t ob = 0; ob < 2; ob++) {
        for (std::size_t oc = 0; oc < 2; oc++) {
            CMatrix proj = kron(b.eigenprojector(ob), c.eigenprojector(oc));
            effects.push_back(v.matrix().adjoint() * proj * v.matrix());
            labels.push_back(std::to_string(ob) + std::to_string(oc));
        }
    }
    return Povm(std::move(effects), std::move(labels));
}

std::vector<Povm> effective_povms(const Isometry &v, const BroadcastSettings &settings) {
    std::vector<Povm> out;
    for (std::size_t y = 0; y < kBobSettings; y++) {
        for (std::size_t z = 0; z < kCharlieSettings; z++) {
            out.push_back(effective_povm(v, settings.bob[y], settings.charlie[z]));
        }
    }
    return out;
}

CMatrix Assemblage::marginal(std::size_t setting) const {
    const auto &row = members.at(setting);
    CMatrix total(row.front().rows(), row.front().cols());
    for (const auto &m : row) {
        total += m;
    }
    return total;
}

Assemblage assemblage(const DensityMatrix &rho, std::span<const Povm> povms) {
    require_two_qubit(rho, "assemblage");
    Assemblage out;
    std::vector<std::size_t> keep{0};
    for (const auto &povm : povms) {
        if (povm.dim() != 2) {
            throw std::invalid_argument("assemblage: POVMs must act on a qubit");
        }
        std::vector<CMatrix> row;
        for (const auto &e : povm.effects()) {
            CMatrix s = partial_trace(rho.matrix() * kron(pauli::i(), e), kTwoQubits, keep);
            row.push_back(0.5 * (s + s.adjoint()));
        }
        out.members.push_back(std::move(row));
    }
    return out;
}

}  // namespace nlact
