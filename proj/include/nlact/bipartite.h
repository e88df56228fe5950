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

#ifndef NLACT_BIPARTITE_H
#define NLACT_BIPARTITE_H

#include <array>

#include "nlact/quantum.h"

namespace nlact {

/// A CHSH value must exceed 2 by this margin to count as a violation.
inline constexpr double kChshViolationMargin = 1e-9;

/// t_ij = Tr[ρ(σ_i⊗σ_j)] with (σ_1, σ_2, σ_3) = (X, Y, Z).
RMatrix correlation_matrix(const DensityMatrix &rho);

/// 2√(m₁ + m₂) for the two largest eigenvalues of T·Tᵀ: the maximal CHSH
/// value reachable with projective measurements.
double horodecki_max_chsh(const DensityMatrix &rho);

bool violates_chsh(double value);

struct PptResult {
    bool separable;
    double min_eig;
};
/// Positive-partial-transpose test; exact for two qubits.
PptResult ppt_check(const DensityMatrix &rho);

struct ChshSettings {
    std::array<Observable, 2> alice;
    std::array<Observable, 2> bob;
};
/// ⟨A₀B₀⟩ + ⟨A₀B₁⟩ + ⟨A₁B₀⟩ − ⟨A₁B₁⟩ for ±1 observables.
double chsh_value(const DensityMatrix &rho, const ChshSettings &settings);

}  // namespace nlact

#endif
