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

#ifndef NLACT_QUANTUM_H
#define NLACT_QUANTUM_H

#include <array>
#include <span>
#include <string>
#include <vector>

#include "nlact/behavior.h"
#include "nlact/matcore.h"

namespace nlact {

/// Computational basis convention: |H⟩ ≡ |0⟩, |V⟩ ≡ |1⟩, two-qubit order
/// HH, HV, VH, VV.
inline constexpr double kStateTol = 1e-10;

/// Trace-one PSD operator on a tensor product of subsystems.
class DensityMatrix {
   public:
    /// Throws std::invalid_argument unless the matrix is Hermitian, has unit
    /// trace and no eigenvalue below -1e-10 (all within kStateTol), and dims
    /// multiply to its size.
    DensityMatrix(CMatrix m, std::vector<std::size_t> dims);

    const CMatrix &matrix() const {
        return m_;
    }
    const std::vector<std::size_t> &dims() const {
        return dims_;
    }
    std::size_t dim() const {
        return m_.rows();
    }
    double purity() const;

   private:
    CMatrix m_;
    std::vector<std::size_t> dims_;
};

/// Hermitian operator with spectrum in [-1, 1].
class Observable {
   public:
    Observable(CMatrix m, std::string label = {});

    const CMatrix &matrix() const {
        return m_;
    }
    const std::string &label() const {
        return label_;
    }
    /// Projector onto the +1 (outcome 0) or -1 (outcome 1) eigenspace. Throws
    /// std::invalid_argument unless the spectrum is exactly {+1, -1}.
    CMatrix eigenprojector(std::size_t outcome) const;

   private:
    CMatrix m_;
    std::string label_;
};

/// Effects that are each PSD (1e-10) and sum to the identity (1e-9).
class Povm {
   public:
    explicit Povm(std::vector<CMatrix> effects, std::vector<std::string> labels = {});

    const std::vector<CMatrix> &effects() const {
        return effects_;
    }
    const std::vector<std::string> &labels() const {
        return labels_;
    }
    std::size_t size() const {
        return effects_.size();
    }
    std::size_t dim() const {
        return effects_.front().rows();
    }

   private:
    std::vector<CMatrix> effects_;
    std::vector<std::string> labels_;
};

/// 4×2 matrix with V†V = I₂.
class Isometry {
   public:
    explicit Isometry(CMatrix v);
    const CMatrix &matrix() const {
        return v_;
    }

   private:
    CMatrix v_;
};

namespace pauli {
CMatrix i();
CMatrix x();
CMatrix y();
CMatrix z();
}  // namespace pauli

/// Per-party ±1 observables of the broadcast scenario.
struct BroadcastSettings {
    std::array<Observable, kAliceSettings> alice;
    std::array<Observable, kBobSettings> bob;
    std::array<Observable, kCharlieSettings> charlie;
};

/// Settings that maximize the broadcast inequality for the channel returned
/// by broadcast_isometry().
BroadcastSettings table1_settings();

/// α|Φ⁺⟩⟨Φ⁺| + (1−α)I₄/4 for α ∈ [−1/3, 1].
DensityMatrix isotropic_state(double alpha);
DensityMatrix phi_plus_state();
DensityMatrix maximally_mixed_state(std::span<const std::size_t> dims);

/// (1−p)ρ + p·(I/d placed on `subsystem`) ⊗ Tr_subsystem(ρ).
DensityMatrix depolarize_qubit(const DensityMatrix &rho, std::size_t subsystem, double p);

/// (Tr√(√ρ σ √ρ))², clamped into [0, 1].
double fidelity(const DensityMatrix &rho, const DensityMatrix &sigma);

struct AlphaFit {
    double alpha;
    double fidelity;
};
/// Maximizes F(ρ, W_α) over α ∈ [−1/3, 1] by golden-section search.
AlphaFit best_fit_alpha(const DensityMatrix &rho);

/// V = ((|HH⟩−|VV⟩)/√2)⟨H| − ((|HV⟩+|VH⟩)/√2)⟨V|.
Isometry broadcast_isometry();

/// (I₂⊗V)·ρ·(I₂⊗V)† for a two-qubit ρ; the result has dims (2, 2, 2).
DensityMatrix apply_isometry_second(const DensityMatrix &rho, const Isometry &v);

/// Born-rule behavior of a three-qubit state under dichotomic settings.
Behavior born_behavior(const DensityMatrix &rho_abc, const BroadcastSettings &settings);

/// Qubit POVM V†(Π_b⊗Π_c)V, effects ordered by outcome 2b+c.
Povm effective_povm(const Isometry &v, const Observable &b, const Observable &c);

/// Effective POVMs for the (y,z) settings in order (0,0), (0,1), (1,0), (1,1).
std::vector<Povm> effective_povms(const Isometry &v, const BroadcastSettings &settings);

/// Collection σ[s][o] of subnormalized operators steered on the first
/// subsystem, for measurement setting s and outcome o.
struct Assemblage {
    std::vector<std::vector<CMatrix>> members;

    std::size_t settings() const {
        return members.size();
    }
    /// Σ_o σ[s][o]; identical across s for a no-signalling assemblage.
    CMatrix marginal(std::size_t setting) const;
};

/// σ[s][o] = Tr₂[ρ·(I⊗E_{o|s})] for POVMs measured on the second qubit.
Assemblage assemblage(const DensityMatrix &rho, std::span<const Povm> povms);

}  // namespace nlact

#endif
