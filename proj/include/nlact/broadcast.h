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

#ifndef NLACT_BROADCAST_H
#define NLACT_BROADCAST_H

#include <array>
#include <iosfwd>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "nlact/behavior.h"
#include "nlact/quantum.h"

namespace nlact {

/// Local (broadcast-compatible) bound on the ten-term correlator sum S.
inline constexpr double kBroadcastLocalBound = 4.0;

/// ⟨A_xB_yC_z⟩ = Σ (−1)^{a+b+c} p(a,b,c|x,y,z).
double correlator(const Behavior &behavior, std::size_t x, std::size_t y, std::size_t z);

/// ⟨A_xB_y⟩ computed on the given Charlie-setting slice.
double two_party_correlator_slice(const Behavior &behavior, std::size_t x, std::size_t y, std::size_t z);

/// ⟨A_xB_y⟩ on the z = 0 slice. For exact (non count-derived) behaviors the
/// AB marginal must not depend on z within 1e-9; otherwise throws
/// std::invalid_argument.
double two_party_correlator(const Behavior &behavior, std::size_t x, std::size_t y);

struct InequalityTerm {
    std::string label;
    double coefficient;
    double value;
};

struct InequalityResult {
    /// Signed correlator sum; at most 4 for broadcast-local behaviors.
    double S = 0;
    /// S − 4; at most 0 for broadcast-local behaviors.
    double I_B = 0;
    std::array<InequalityTerm, 10> terms;
    /// Binomial standard error of S for count-derived behaviors.
    std::optional<double> S_std;
    /// ⟨A₂B₀⟩ and ⟨A₂B₁⟩ evaluated on the z = 1 slice, for comparison with the
    /// z = 0 values used in S.
    std::array<double, 2> pair_terms_z1{};
};

/// S = ⟨A₀B₀C₀⟩ + ⟨A₀B₁C₁⟩ + ⟨A₁B₁C₁⟩ − ⟨A₁B₀C₀⟩ + ⟨A₀B₀C₁⟩ + ⟨A₀B₁C₀⟩
///   + ⟨A₁B₀C₁⟩ − ⟨A₁B₁C₀⟩ − 2⟨A₂B₀⟩ + 2⟨A₂B₁⟩, and I_B = S − 4.
InequalityResult broadcast_value(const Behavior &behavior);

/// Partial-distinguishability model of the broadcast channel:
/// ρ(v) = v·ρ + (1−v)·Σ_k Q_k ρ Q_k with Q_k = I₂⊗V|k⟩⟨k|V†, which removes the
/// coherence between the two branches of the isometry.
DensityMatrix degrade_visibility(const DensityMatrix &rho_abc, const Isometry &v, double visibility);

/// Three-qubit state after sending the second qubit of W_α through the
/// broadcast isometry with interference visibility v.
DensityMatrix broadcast_state(double alpha, double visibility = 1.0);

/// S predicted for W_α with Table 1 settings and visibility v.
double ideal_curve(double alpha, double visibility = 1.0);

/// No-signalling residuals between the broadcast outputs. For every Alice
/// setting x:
///   bob[(x,z,c)]     = |p(c|x,0,z) − p(c|x,1,z)|  (Bob's input seen by Charlie)
///   charlie[(x,y,b)] = |p(b|x,y,0) − p(b|x,y,1)|  (Charlie's input seen by Bob)
/// with index order ((x·2 + z)·2 + c) and ((x·2 + y)·2 + b) respectively.
struct NsResiduals {
    std::vector<double> bob;
    std::vector<double> charlie;
    double mean = 0;
    double max = 0;
};
NsResiduals no_signalling_residuals(const Behavior &behavior);

Behavior behavior_from_counts(const CountTable &counts);

/// Multinomial counts with `per_setting` events in every (x,y,z) cell.
CountTable sample_counts(const Behavior &behavior, std::uint64_t per_setting, std::mt19937_64 &rng);

/// CSV with header x,y,z,a,b,c,count. Missing rows read as zero counts.
void write_counts_csv(std::ostream &out, const CountTable &counts);
CountTable read_counts_csv(std::istream &in);

}  // namespace nlact

#endif
