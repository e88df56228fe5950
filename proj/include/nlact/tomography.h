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

#ifndef NLACT_TOMOGRAPHY_H
#define NLACT_TOMOGRAPHY_H

#include <array>
#include <cstdint>
#include <random>
#include <span>
#include <vector>

#include "nlact/quantum.h"

namespace nlact {

/// Pauli measurement basis of one qubit.
enum class PauliBasis { X = 0, Y = 1, Z = 2 };

char basis_letter(PauliBasis b);

/// Single-qubit projector onto the +1 (outcome 0) or −1 (outcome 1)
/// eigenvector of the chosen Pauli operator.
CMatrix pauli_projector(PauliBasis basis, std::size_t outcome);

/// One two-qubit product-basis setting. Outcomes are ordered 2·a + b with a
/// the first qubit's outcome and b the second's. Counts are stored as real
/// numbers so that exact frequencies can be fed through the same path.
struct TomoSetting {
    std::array<PauliBasis, 2> bases;
    std::array<CMatrix, 4> projectors;
    std::array<double, 4> counts{};

    double total() const {
        return counts[0] + counts[1] + counts[2] + counts[3];
    }
};

/// Counts over the 9 product settings (bases ordered XX, XY, ..., ZZ). The
/// stored projectors are the nominal ones used for reconstruction.
struct MeasurementRecord {
    std::vector<TomoSetting> settings;
};

/// The 9 nominal settings (36 projectors) with zero counts.
std::vector<TomoSetting> pauli_settings();

/// Draws multinomial counts for `shots` trials over the given probabilities
/// (renormalized after clipping negatives to zero).
std::vector<std::uint64_t> sample_multinomial(std::span<const double> probs, std::uint64_t shots, std::mt19937_64 &rng);

/// Multinomial counts from Born probabilities in each of the 9 settings. A
/// shot count of 0 stores the exact probabilities instead of counts.
MeasurementRecord simulate_tomography(const DensityMatrix &rho, std::uint64_t shots_per_basis, std::uint64_t seed);

/// As above, but counts are drawn with `actual` projectors (one set of 4 per
/// nominal setting) while the record keeps the nominal ones. This models a
/// miscalibrated apparatus that is analysed as if it were ideal.
MeasurementRecord simulate_tomography(const DensityMatrix &rho, std::uint64_t shots_per_basis,
                                      std::span<const std::array<CMatrix, 4>> actual, std::mt19937_64 &rng);

struct MleOptions {
    double dilution = 0.5;
    double gain_tol = 1e-10;
    std::size_t max_iter = 5000;
};

struct MleResult {
    CMatrix rho;
    std::size_t iterations = 0;
    /// Frequency-weighted log-likelihood after each accepted step.
    std::vector<double> log_likelihood;
};

/// Diluted RρR maximum-likelihood iteration. Throws std::invalid_argument if
/// the settings with counts do not span the two-qubit operator space.
MleResult mle_iterate(const MeasurementRecord &record, const MleOptions &opts = {});

DensityMatrix mle_reconstruct(const MeasurementRecord &record);

}  // namespace nlact

#endif
