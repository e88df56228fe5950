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

#ifndef NLACT_CERTIFY_H
#define NLACT_CERTIFY_H

#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "nlact/quantum.h"
#include "nlact/sdp.h"

namespace nlact {

/// Visibility up to which the two-qubit isotropic state is known to admit a
/// local-hidden-variable model for all projective measurements. The value is
/// taken from the published LHV construction for W_α (Designolle et al.,
/// 2023) and is used here as a trusted input, not re-derived.
inline constexpr double kLhvReferenceAlpha = 0.6875;

/// Upper bound imposed on η. The white-noise line through I₄/4 leaves the
/// state space at η = 3 (the α = −1/3 end of the isotropic family), so the
/// cap only binds for states at or very near the maximally mixed state.
inline constexpr double kEtaCap = 3.0;

/// Decomposable map Λ(X) = Tr_in[(Xᵀ⊗I)·J1] + Tr_in[(X⊗I)·J2], i.e. a CP map
/// with Choi matrix J1 plus a CP map with Choi matrix J2 composed with the
/// transposition. Choi convention: J(Φ) = Σ_ij |i⟩⟨j| ⊗ Φ(|i⟩⟨j|).
///
/// The map is trace preserving up to the factor q:
/// conj(Tr_out J1) + Tr_out J2 = q·I₂.
struct ChoiPair {
    CMatrix j1;
    CMatrix j2;
    double q = 1;
};

/// Single-qubit action of the map.
CMatrix apply_map(const ChoiPair &choi, const CMatrix &x);

/// Heisenberg-picture (adjoint) map, Tr[E·Λ(X)] = Tr[Λ†(E)·X]:
/// Λ†(E) = (Tr_out[(I⊗E)·J1])ᵀ + Tr_out[(I⊗E)·J2].
CMatrix apply_adjoint_map(const ChoiPair &choi, const CMatrix &e);

/// Applies the map to one qubit of a multi-qubit operator (subsystem index in
/// rho.dims()).
CMatrix apply_positive_map(const ChoiPair &choi, const DensityMatrix &rho, std::size_t on_subsystem);
CMatrix apply_positive_map(const ChoiPair &choi, const CMatrix &m, std::span<const std::size_t> dims,
                           std::size_t on_subsystem);

/// conj(Tr_out J1) + Tr_out J2 − q·I₂, largest entry magnitude.
double trace_preservation_error(const ChoiPair &choi);

/// Thrown when an SDP does not reach optimality.
class SolverError : public std::runtime_error {
   public:
    SolverError(const std::string &what, SdpSolution solution)
        : std::runtime_error(what), solution_(std::move(solution)) {
    }
    const SdpSolution &solution() const {
        return solution_;
    }

   private:
    SdpSolution solution_;
};

struct SolverDiagnostics {
    std::string status;
    std::size_t iterations = 0;
    double duality_gap = 0;
    double max_residual = 0;
    std::size_t dropped_constraints = 0;
};

/// Result of the η certificate:
///   η·ρ_exp + (1−η)·I₄/4 = (I₂⊗Λ)(W_ref) + ρ̃_ppt,
/// where Λ is positive and trace preserving up to q, ρ̃_ppt and its partial
/// transpose are PSD with Tr ρ̃_ppt = 1 − q. η ≥ 1 certifies an LHV model for
/// ρ_exp under all two-outcome measurements.
struct CertificateResult {
    double eta = 0;
    double q = 0;
    /// Choi matrices with q absorbed (they describe q·Λ).
    ChoiPair choi;
    CMatrix rho_ppt;
    double reference_alpha = kLhvReferenceAlpha;
    SolverDiagnostics solver;
};

CertificateResult lhv_certificate(const DensityMatrix &rho_exp, const SdpOptions &opts = {});

/// Builds the η SDP without solving it (for inspection and export).
SdpProblem lhv_certificate_problem(const DensityMatrix &rho_exp);

struct CertificateCheck {
    bool ok = true;
    double decomposition_residual = 0;
    double trace_preservation_residual = 0;
    double trace_residual = 0;
    double min_eig_j1 = 0;
    double min_eig_j2 = 0;
    double min_eig_rho_ppt = 0;
    double min_eig_rho_ppt_pt = 0;
    std::vector<std::string> issues;
};

/// Re-verifies a certificate against ρ_exp from its stored matrices alone:
/// decomposition residual ≤ residual_tol, PSD conditions ≥ −psd_tol.
CertificateCheck verify_certificate(const CertificateResult &cert, const DensityMatrix &rho_exp,
                                    double residual_tol = 1e-7, double psd_tol = 1e-8);

/// Largest t ∈ [0, 1] for which the members t·M + (1−t)·Tr(M)·I₂/2 of every
/// setting admit a common decomposition Σ_λ D_λ(o|s)·G_λ with G_λ ⪰ 0 and
/// deterministic responses λ (mixed-radix digits, setting 0 least
/// significant).
double max_deterministic_mixing(const std::vector<std::vector<CMatrix>> &members, const SdpOptions &opts = {});

struct LhsResult {
    bool unsteerable;
    double noise_margin;
};

/// Local-hidden-state test; unsteerable iff the admissible mixing t reaches
/// 1 − 1e-6.
LhsResult lhs_certificate(const Assemblage &assemblage, const SdpOptions &opts = {});

/// White-noise joint-measurability robustness of qubit POVMs.
double povm_noise_robustness(std::span<const Povm> povms, const SdpOptions &opts = {});

/// Random decomposable map with q = 1 (positive and trace preserving).
ChoiPair random_positive_tp_map(std::uint64_t seed);

}  // namespace nlact

#endif
