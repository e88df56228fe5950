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

#include "nlact/certify.h"

#include <algorithm>
#include <cmath>
#include <random>

namespace nlact {

namespace {

void require_choi_shape(const ChoiPair &choi) {
    if (choi.j1.rows() != 4 || choi.j1.cols() != 4 || choi.j2.rows() != 4 || choi.j2.cols() != 4) {
        throw std::invalid_argument("ChoiPair: J1 and J2 must be 4×4");
    }
}

// Tr_out J as a 2×2 matrix: (Tr_out J)[k,l] = Σ_m J[2k+m, 2l+m].
CMatrix trace_out(const CMatrix &j) {
    CMatrix t(2, 2);
    for (std::size_t k = 0; k < 2; k++) {
        for (std::size_t l = 0; l < 2; l++) {
            t(k, l) = j(2 * k, 2 * l) + j(2 * k + 1, 2 * l + 1);
        }
    }
    return t;
}

// (I₂⊗Λ)(M) for a two-qubit operator M, Λ acting on the second qubit.
CMatrix apply_second(const ChoiPair &choi, const CMatrix &m) {
    CMatrix out(4, 4);
    for (std::size_t i = 0; i < 2; i++) {
        for (std::size_t j = 0; j < 2; j++) {
            for (std::size_t k = 0; k < 2; k++) {
                for (std::size_t l = 0; l < 2; l++) {
                    cplx v = m(2 * i + k, 2 * j + l);
                    if (v == cplx(0)) {
                        continue;
                    }
                    for (std::size_t kp = 0; kp < 2; kp++) {
                        for (std::size_t lp = 0; lp < 2; lp++) {
                            out(2 * i + kp, 2 * j + lp) +=
                                v * (choi.j1(2 * k + kp, 2 * l + lp) + choi.j2(2 * l + kp, 2 * k + lp));
                        }
                    }
                }
            }
        }
    }
    return out;
}

CMatrix reference_state() {
    return isotropic_state(kLhvReferenceAlpha).matrix();
}

SolverDiagnostics diagnostics(const SdpSolution &s) {
    return {to_string(s.status), s.iterations, s.duality_gap, s.max_residual, s.dropped_constraints};
}

SdpSolution solve_or_throw(const SdpProblem &p, const SdpOptions &opts, const char *what) {
    SdpSolution s = solve(p, opts);
    if (s.status != SdpStatus::Optimal) {
        std::string msg = std::string(what) + ": solver returned " + to_string(s.status);
        if (!s.message.empty()) {
            msg += " (" + s.message + ")";
        }
        throw SolverError(msg, std::move(s));
    }
    return s;
}

struct EtaProblem {
    SdpProblem problem;
    HermBlock j1, j2, r, q;
    ScalarId eta;
};

EtaProblem build_eta_problem(const DensityMatrix &rho_exp) {
    if (rho_exp.dim() != 4) {
        throw std::invalid_argument("lhv_certificate: expected a two-qubit state");
    }
    EtaProblem ep;
    SdpProblem &p = ep.problem;
    ep.j1 = p.add_hermitian_block("J1", 4);
    ep.j2 = p.add_hermitian_block("J2", 4);
    ep.r = p.add_hermitian_block("rho_ppt", 4);
    ep.q = p.add_hermitian_block("rho_ppt_pt", 4);
    ep.eta = p.add_scalar("eta", 0, kEtaCap);
    p.set_objective(LinearForm().add(ep.eta, 1));

    const CMatrix w = reference_state();
    const std::vector<std::size_t> dims{2, 2};
    const CMatrix w_pt = partial_transpose(w, dims, 1);
    const CMatrix noise = CMatrix::identity(4) * cplx(0.25);
    const CMatrix shifted = rho_exp.matrix() - noise;

    // η·(ρ_exp − I/4) − (I⊗Λ̃)(W) − ρ̃ = −I/4, entrywise on the upper triangle.
    for (std::size_t i = 0; i < 2; i++) {
        for (std::size_t kp = 0; kp < 2; kp++) {
            std::size_t row = 2 * i + kp;
            for (std::size_t j = 0; j < 2; j++) {
                for (std::size_t lp = 0; lp < 2; lp++) {
                    std::size_t col = 2 * j + lp;
                    if (col < row) {
                        continue;
                    }
                    ComplexLinearForm f;
                    f.add(ep.eta, shifted(row, col));
                    for (std::size_t k = 0; k < 2; k++) {
                        for (std::size_t l = 0; l < 2; l++) {
                            f.add(ep.j1, 2 * k + kp, 2 * l + lp, -w(2 * i + k, 2 * j + l));
                            f.add(ep.j2, 2 * k + kp, 2 * l + lp, -w_pt(2 * i + k, 2 * j + l));
                        }
                    }
                    f.add(ep.r, row, col, -1);
                    p.add_constraint(f, -noise(row, col), row == col);
                }
            }
        }
    }
    // conj(Tr_out J̃1) + Tr_out J̃2 + Tr(ρ̃)·I = I, i.e. Λ̃ is trace preserving
    // up to q = 1 − Tr ρ̃.
    for (std::size_t k = 0; k < 2; k++) {
        for (std::size_t l = k; l < 2; l++) {
            ComplexLinearForm f;
            for (std::size_t m = 0; m < 2; m++) {
                f.add(ep.j1, 2 * l + m, 2 * k + m, 1);
                f.add(ep.j2, 2 * k + m, 2 * l + m, 1);
                if (k == l) {
                    for (std::size_t d = 0; d < 4; d++) {
                        f.add(ep.r, d, d, 1.0 / 2);
                    }
                }
            }
            p.add_constraint(f, k == l ? 1.0 : 0.0, k == l);
        }
    }
    // The auxiliary block equals the partial transpose of ρ̃:
    // Q[(i,k),(j,l)] = ρ̃[(i,l),(j,k)].
    for (std::size_t u = 0; u < 4; u++) {
        for (std::size_t v = u; v < 4; v++) {
            std::size_t i = u / 2, k = u % 2, j = v / 2, l = v % 2;
            ComplexLinearForm f;
            f.add(ep.q, u, v, 1);
            f.add(ep.r, 2 * i + l, 2 * j + k, -1);
            p.add_constraint(f, 0, u == v);
        }
    }
    return ep;
}

void require_qubit_members(const std::vector<std::vector<CMatrix>> &members) {
    if (members.empty()) {
        throw std::invalid_argument("no settings given");
    }
    for (const auto &row : members) {
        if (row.empty()) {
            throw std::invalid_argument("a setting has no outcomes");
        }
        for (const auto &m : row) {
            if (m.rows() != 2 || m.cols() != 2) {
                throw std::invalid_argument("members must be 2×2");
            }
            if (m.hermiticity_error() > 1e-10) {
                throw std::invalid_argument("member is not Hermitian");
            }
            if (min_eigenvalue(cplx(0.5) * (m + m.adjoint())) < -1e-10) {
                throw std::invalid_argument("member is not PSD");
            }
        }
    }
}

}  // namespace

CMatrix apply_map(const ChoiPair &choi, const CMatrix &x) {
    require_choi_shape(choi);
    if (x.rows() != 2 || x.cols() != 2) {
        throw std::invalid_argument("apply_map: expected a 2×2 operator");
    }
    CMatrix out(2, 2);
    for (std::size_t k = 0; k < 2; k++) {
        for (std::size_t l = 0; l < 2; l++) {
            for (std::size_t kp = 0; kp < 2; kp++) {
                for (std::size_t lp = 0; lp < 2; lp++) {
                    out(kp, lp) += x(k, l) * (choi.j1(2 * k + kp, 2 * l + lp) + choi.j2(2 * l + kp, 2 * k + lp));
                }
            }
        }
    }
    return out;
}

CMatrix apply_adjoint_map(const ChoiPair &choi, const CMatrix &e) {
    require_choi_shape(choi);
    if (e.rows() != 2 || e.cols() != 2) {
        throw std::invalid_argument("apply_adjoint_map: expected a 2×2 operator");
    }
    CMatrix t1(2, 2);
    CMatrix t2(2, 2);
    for (std::size_t k = 0; k < 2; k++) {
        for (std::size_t l = 0; l < 2; l++) {
            for (std::size_t kp = 0; kp < 2; kp++) {
                for (std::size_t m = 0; m < 2; m++) {
                    t1(k, l) += e(kp, m) * choi.j1(2 * k + m, 2 * l + kp);
                    t2(k, l) += e(kp, m) * choi.j2(2 * k + m, 2 * l + kp);
                }
            }
        }
    }
    return t1.transpose() + t2;
}

CMatrix apply_positive_map(const ChoiPair &choi, const CMatrix &m, std::span<const std::size_t> dims,
                           std::size_t on_subsystem) {
    require_choi_shape(choi);
    if (on_subsystem >= dims.size() || dims[on_subsystem] != 2) {
        throw std::invalid_argument("apply_positive_map: target subsystem must be a qubit");
    }
    std::size_t total = 1;
    for (auto d : dims) {
        total *= d;
    }
    if (!m.is_square() || m.rows() != total) {
        throw std::invalid_argument("apply_positive_map: dims do not match the operator");
    }
    // Index stride of the target qubit.
    std::size_t stride = 1;
    for (std::size_t k = on_subsystem + 1; k < dims.size(); k++) {
        stride *= dims[k];
    }
    CMatrix out(total, total);
    for (std::size_t r = 0; r < total; r++) {
        std::size_t k = (r / stride) % 2;
        std::size_t r0 = r - k * stride;
        for (std::size_t c = 0; c < total; c++) {
            cplx v = m(r, c);
            if (v == cplx(0)) {
                continue;
            }
            std::size_t l = (c / stride) % 2;
            std::size_t c0 = c - l * stride;
            for (std::size_t kp = 0; kp < 2; kp++) {
                for (std::size_t lp = 0; lp < 2; lp++) {
                    out(r0 + kp * stride, c0 + lp * stride) +=
                        v * (choi.j1(2 * k + kp, 2 * l + lp) + choi.j2(2 * l + kp, 2 * k + lp));
                }
            }
        }
    }
    return out;
}

CMatrix apply_positive_map(const ChoiPair &choi, const DensityMatrix &rho, std::size_t on_subsystem) {
    return apply_positive_map(choi, rho.matrix(), rho.dims(), on_subsystem);
}

double trace_preservation_error(const ChoiPair &choi) {
    require_choi_shape(choi);
    CMatrix t = trace_out(choi.j1).conj() + trace_out(choi.j2) - CMatrix::identity(2) * cplx(choi.q);
    return t.max_abs();
}

SdpProblem lhv_certificate_problem(const DensityMatrix &rho_exp) {
    return build_eta_problem(rho_exp).problem;
}

CertificateResult lhv_certificate(const DensityMatrix &rho_exp, const SdpOptions &opts) {
    EtaProblem ep = build_eta_problem(rho_exp);
    SdpSolution s = solve_or_throw(ep.problem, opts, "lhv_certificate");
    CertificateResult r;
    r.eta = s.scalar(ep.eta);
    r.rho_ppt = s.hermitian(ep.r);
    r.q = 1 - r.rho_ppt.trace().real();
    r.choi = {s.hermitian(ep.j1), s.hermitian(ep.j2), r.q};
    r.solver = diagnostics(s);
    return r;
}

CertificateCheck verify_certificate(const CertificateResult &cert, const DensityMatrix &rho_exp, double residual_tol,
                                    double psd_tol) {
    CertificateCheck c;
    auto fail = [&](std::string msg) {
        c.ok = false;
        c.issues.push_back(std::move(msg));
    };
    if (rho_exp.dim() != 4 || cert.rho_ppt.rows() != 4 || cert.rho_ppt.cols() != 4) {
        fail("shape mismatch");
        return c;
    }
    require_choi_shape(cert.choi);
    CMatrix noise = CMatrix::identity(4) * cplx(0.25);
    CMatrix lhs = cplx(cert.eta) * rho_exp.matrix() + cplx(1 - cert.eta) * noise;
    CMatrix rhs = apply_second(cert.choi, isotropic_state(cert.reference_alpha).matrix()) + cert.rho_ppt;
    c.decomposition_residual = max_abs_diff(lhs, rhs);
    if (c.decomposition_residual > residual_tol) {
        fail("decomposition residual " + std::to_string(c.decomposition_residual));
    }
    c.trace_preservation_residual = trace_preservation_error(cert.choi);
    if (c.trace_preservation_residual > residual_tol) {
        fail("trace-preservation residual " + std::to_string(c.trace_preservation_residual));
    }
    c.trace_residual = std::abs(cert.rho_ppt.trace().real() - (1 - cert.q));
    if (c.trace_residual > residual_tol) {
        fail("Tr(rho_ppt) differs from 1 − q");
    }
    if (cert.q < -psd_tol || cert.q > 1 + psd_tol) {
        fail("q outside [0, 1]");
    }
    auto herm = [](const CMatrix &m) {
        return cplx(0.5) * (m + m.adjoint());
    };
    const std::vector<std::size_t> dims{2, 2};
    c.min_eig_j1 = min_eigenvalue(herm(cert.choi.j1));
    c.min_eig_j2 = min_eigenvalue(herm(cert.choi.j2));
    c.min_eig_rho_ppt = min_eigenvalue(herm(cert.rho_ppt));
    c.min_eig_rho_ppt_pt = min_eigenvalue(herm(partial_transpose(cert.rho_ppt, dims, 1)));
    if (c.min_eig_j1 < -psd_tol || c.min_eig_j2 < -psd_tol) {
        fail("Choi matrix is not PSD");
    }
    if (c.min_eig_rho_ppt < -psd_tol) {
        fail("rho_ppt is not PSD");
    }
    if (c.min_eig_rho_ppt_pt < -psd_tol) {
        fail("partial transpose of rho_ppt is not PSD");
    }
    return c;
}

double max_deterministic_mixing(const std::vector<std::vector<CMatrix>> &members, const SdpOptions &opts) {
    require_qubit_members(members);
    // Outcomes with a zero member can never be produced by a feasible
    // decomposition; dropping them keeps the remaining problem strictly
    // feasible, which the interior-point method relies on.
    std::vector<std::vector<std::size_t>> live(members.size());
    std::size_t n_lambda = 1;
    for (std::size_t s = 0; s < members.size(); s++) {
        for (std::size_t o = 0; o < members[s].size(); o++) {
            if (members[s][o].max_abs() > 1e-12) {
                live[s].push_back(o);
            }
        }
        if (live[s].empty()) {
            throw std::invalid_argument("a setting has only zero members");
        }
        n_lambda *= live[s].size();
        if (n_lambda > 4096) {
            throw std::invalid_argument("too many deterministic strategies");
        }
    }
    SdpProblem p;
    std::vector<HermBlock> g;
    for (std::size_t lam = 0; lam < n_lambda; lam++) {
        g.push_back(p.add_hermitian_block("G" + std::to_string(lam), 2));
    }
    ScalarId t = p.add_scalar("t", 0, 1);
    p.set_objective(LinearForm().add(t, 1));
    // digit(λ, s): position in live[s] of the outcome λ assigns to setting s.
    auto digit = [&](std::size_t lam, std::size_t s) {
        for (std::size_t k = 0; k < s; k++) {
            lam /= live[k].size();
        }
        return lam % live[s].size();
    };
    for (std::size_t s = 0; s < members.size(); s++) {
        for (std::size_t d = 0; d < live[s].size(); d++) {
            const CMatrix &m = members[s][live[s][d]];
            double tr = m.trace().real();
            CMatrix white = CMatrix::identity(2) * cplx(tr / 2);
            CMatrix pull = m - white;
            for (std::size_t r = 0; r < 2; r++) {
                for (std::size_t c = r; c < 2; c++) {
                    ComplexLinearForm f;
                    for (std::size_t lam = 0; lam < n_lambda; lam++) {
                        if (digit(lam, s) == d) {
                            f.add(g[lam], r, c, 1);
                        }
                    }
                    f.add(t, -pull(r, c));
                    p.add_constraint(f, white(r, c), r == c);
                }
            }
        }
    }
    SdpSolution sol = solve_or_throw(p, opts, "max_deterministic_mixing");
    return std::clamp(sol.scalar(t), 0.0, 1.0);
}

LhsResult lhs_certificate(const Assemblage &assemblage, const SdpOptions &opts) {
    if (assemblage.settings() == 0) {
        throw std::invalid_argument("lhs_certificate: empty assemblage");
    }
    require_qubit_members(assemblage.members);
    CMatrix reference = assemblage.marginal(0);
    for (std::size_t s = 1; s < assemblage.settings(); s++) {
        if (max_abs_diff(assemblage.marginal(s), reference) > 1e-9) {
            throw std::invalid_argument("lhs_certificate: assemblage marginals depend on the setting");
        }
    }
    double t = max_deterministic_mixing(assemblage.members, opts);
    return {t >= 1 - 1e-6, t};
}

double povm_noise_robustness(std::span<const Povm> povms, const SdpOptions &opts) {
    std::vector<std::vector<CMatrix>> members;
    for (const auto &p : povms) {
        if (p.dim() != 2) {
            throw std::invalid_argument("povm_noise_robustness: POVMs must act on a qubit");
        }
        members.push_back(p.effects());
    }
    return max_deterministic_mixing(members, opts);
}

ChoiPair random_positive_tp_map(std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> normal;
    auto ginibre_psd = [&]() {
        CMatrix g(4, 4);
        for (std::size_t i = 0; i < 4; i++) {
            for (std::size_t j = 0; j < 4; j++) {
                g(i, j) = cplx(normal(rng), normal(rng));
            }
        }
        return g * g.adjoint();
    };
    // Random weights so that both the CP and the CP∘T parts vary in size.
    std::uniform_real_distribution<double> unit(0, 1);
    CMatrix j1 = ginibre_psd() * cplx(unit(rng));
    CMatrix j2 = ginibre_psd() * cplx(unit(rng));
    CMatrix n = trace_out(j1).conj() + trace_out(j2);
    CMatrix p = spectral_map(herm_eig(cplx(0.5) * (n + n.adjoint())), [](double l) {
        return 1 / std::sqrt(l);
    });
    // J2 → (P⊗I)·J2·(P⊗I) and J1 → (P̄⊗I)·J1·(P̄⊗I)† give
    // conj(Tr_out J1) + Tr_out J2 = P·N·P = I.
    CMatrix a2 = kron(p, pauli::i());
    CMatrix a1 = kron(p.conj(), pauli::i());
    ChoiPair out{a1 * j1 * a1.adjoint(), a2 * j2 * a2.adjoint(), 1.0};
    out.j1 = cplx(0.5) * (out.j1 + out.j1.adjoint());
    out.j2 = cplx(0.5) * (out.j2 + out.j2.adjoint());
    return out;
}

}  // namespace nlact
