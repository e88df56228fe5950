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

#include "nlact/tomography.h"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace nlact {

namespace {

constexpr std::array<PauliBasis, 3> kBases{PauliBasis::X, PauliBasis::Y, PauliBasis::Z};

double born(const CMatrix &rho, const CMatrix &proj) {
    double s = 0;
    for (std::size_t i = 0; i < rho.rows(); i++) {
        for (std::size_t j = 0; j < rho.cols(); j++) {
            s += (rho(i, j) * proj(j, i)).real();
        }
    }
    return s;
}

// Real coordinates of a 4×4 Hermitian matrix: Re of the upper triangle and Im
// of the strict upper triangle, 16 numbers in total.
std::array<double, 16> hermitian_coordinates(const CMatrix &h) {
    std::array<double, 16> v{};
    std::size_t k = 0;
    for (std::size_t i = 0; i < 4; i++) {
        for (std::size_t j = i; j < 4; j++) {
            v[k++] = h(i, j).real();
            if (j > i) {
                v[k++] = h(i, j).imag();
            }
        }
    }
    return v;
}

void require_informationally_complete(const MeasurementRecord &record) {
    RMatrix gram(16, 16);
    for (const auto &s : record.settings) {
        if (s.total() <= 0) {
            continue;
        }
        for (const auto &p : s.projectors) {
            auto v = hermitian_coordinates(p);
            for (std::size_t i = 0; i < 16; i++) {
                for (std::size_t j = 0; j < 16; j++) {
                    gram(i, j) += v[i] * v[j];
                }
            }
        }
    }
    auto e = sym_eig(gram);
    double top = std::max(e.values.back(), 1e-300);
    std::size_t rank = std::count_if(e.values.begin(), e.values.end(), [&](double l) {
        return l > 1e-9 * top;
    });
    if (rank < 16) {
        throw std::invalid_argument("mle_reconstruct: measurement record is informationally incomplete (rank " +
                                    std::to_string(rank) + " of 16)");
    }
}

struct Likelihood {
    double value;
    CMatrix r;
};

Likelihood evaluate(const MeasurementRecord &record, const CMatrix &rho) {
    Likelihood out{0, CMatrix(4, 4)};
    std::size_t active = 0;
    for (const auto &s : record.settings) {
        double n = s.total();
        if (n <= 0) {
            continue;
        }
        active++;
        for (std::size_t k = 0; k < 4; k++) {
            if (s.counts[k] <= 0) {
                continue;
            }
            double f = s.counts[k] / n;
            double p = std::max(born(rho, s.projectors[k]), 1e-300);
            out.value += f * std::log(p);
            out.r += cplx(f / p) * s.projectors[k];
        }
    }
    out.value /= static_cast<double>(active);
    out.r *= cplx(1.0 / static_cast<double>(active));
    return out;
}

}  // namespace

char basis_letter(PauliBasis b) {
    return "XYZ"[static_cast<int>(b)];
}

CMatrix pauli_projector(PauliBasis basis, std::size_t outcome) {
    if (outcome > 1) {
        throw std::invalid_argument("pauli_projector: outcome must be 0 or 1");
    }
    double sign = outcome == 0 ? 1.0 : -1.0;
    CMatrix p = CMatrix::identity(2);
    switch (basis) {
        case PauliBasis::X:
            p += cplx(sign) * pauli::x();
            break;
        case PauliBasis::Y:
            p += cplx(sign) * pauli::y();
            break;
        case PauliBasis::Z:
            p += cplx(sign) * pauli::z();
            break;
    }
    return cplx(0.5) * p;
}

std::vector<TomoSetting> pauli_settings() {
    std::vector<TomoSetting> out;
    for (auto ba : kBases) {
        for (auto bb : kBases) {
            TomoSetting s{{ba, bb}, {}, {}};
            for (std::size_t a = 0; a < 2; a++) {
                for (std::size_t b = 0; b < 2; b++) {
                    s.projectors[2 * a + b] = kron(pauli_projector(ba, a), pauli_projector(bb, b));
                }
            }
            out.push_back(std::move(s));
        }
    }
    return out;
}

std::vector<std::uint64_t> sample_multinomial(std::span<const double> probs, std::uint64_t shots, std::mt19937_64 &rng) {
    const std::size_t n = probs.size();
    if (n == 0) {
        throw std::invalid_argument("sample_multinomial: no categories");
    }
    std::vector<double> p(n);
    double total = 0;
    for (std::size_t k = 0; k < n; k++) {
        p[k] = std::max(probs[k], 0.0);
        total += p[k];
    }
    if (!(total > 0)) {
        throw std::invalid_argument("sample_multinomial: probabilities sum to zero");
    }
    // Sequential conditional binomials: category k takes Bin(left, p_k / mass_left).
    std::vector<std::uint64_t> counts(n);
    std::uint64_t left = shots;
    double mass_left = 1.0;
    for (std::size_t k = 0; k + 1 < n && left > 0; k++) {
        double q = p[k] / total;
        double cond = mass_left > 0 ? std::clamp(q / mass_left, 0.0, 1.0) : 0.0;
        std::binomial_distribution<std::uint64_t> draw(left, cond);
        counts[k] = draw(rng);
        left -= counts[k];
        mass_left -= q;
    }
    counts[n - 1] += left;
    return counts;
}

MeasurementRecord simulate_tomography(const DensityMatrix &rho, std::uint64_t shots_per_basis, std::uint64_t seed) {
    std::vector<std::array<CMatrix, 4>> actual;
    for (const auto &s : pauli_settings()) {
        actual.push_back(s.projectors);
    }
    std::mt19937_64 rng(seed);
    return simulate_tomography(rho, shots_per_basis, actual, rng);
}

MeasurementRecord simulate_tomography(const DensityMatrix &rho, std::uint64_t shots_per_basis,
                                      std::span<const std::array<CMatrix, 4>> actual, std::mt19937_64 &rng) {
    if (rho.dim() != 4) {
        throw std::invalid_argument("simulate_tomography: expected a two-qubit state");
    }
    MeasurementRecord record{pauli_settings()};
    if (actual.size() != record.settings.size()) {
        throw std::invalid_argument("simulate_tomography: need one projector set per nominal setting");
    }
    for (std::size_t s = 0; s < record.settings.size(); s++) {
        std::array<double, 4> probs{};
        for (std::size_t k = 0; k < 4; k++) {
            probs[k] = std::max(born(rho.matrix(), actual[s][k]), 0.0);
        }
        auto &counts = record.settings[s].counts;
        if (shots_per_basis == 0) {
            double total = probs[0] + probs[1] + probs[2] + probs[3];
            for (std::size_t k = 0; k < 4; k++) {
                counts[k] = probs[k] / total;
            }
        } else {
            auto drawn = sample_multinomial(probs, shots_per_basis, rng);
            for (std::size_t k = 0; k < 4; k++) {
                counts[k] = static_cast<double>(drawn[k]);
            }
        }
    }
    return record;
}

MleResult mle_iterate(const MeasurementRecord &record, const MleOptions &opts) {
    for (const auto &s : record.settings) {
        for (const auto &p : s.projectors) {
            if (p.rows() != 4 || p.cols() != 4) {
                throw std::invalid_argument("mle_reconstruct: projectors must be 4×4");
            }
        }
        for (double c : s.counts) {
            if (!(c >= 0) || !std::isfinite(c)) {
                throw std::invalid_argument("mle_reconstruct: counts must be finite and nonnegative");
            }
        }
    }
    require_informationally_complete(record);

    MleResult out;
    out.rho = CMatrix::identity(4) * cplx(0.25);
    Likelihood cur = evaluate(record, out.rho);
    out.log_likelihood.push_back(cur.value);
    double eps = opts.dilution;
    const CMatrix id = CMatrix::identity(4);
    while (out.iterations < opts.max_iter) {
        CMatrix step = cplx(1 / (1 + eps)) * (id + cplx(eps) * cur.r);
        CMatrix next = step * out.rho * step.adjoint();
        next *= cplx(1 / next.trace().real());
        next = cplx(0.5) * (next + next.adjoint());
        Likelihood cand = evaluate(record, next);
        out.iterations++;
        if (cand.value < cur.value) {
            // Too long a step; the diluted map is monotone for small enough ε.
            eps *= 0.5;
            if (eps < 1e-12) {
                break;
            }
            continue;
        }
        double gain = cand.value - cur.value;
        out.rho = std::move(next);
        cur = std::move(cand);
        out.log_likelihood.push_back(cur.value);
        if (gain < opts.gain_tol) {
            break;
        }
    }
    return out;
}

DensityMatrix mle_reconstruct(const MeasurementRecord &record) {
    MleResult r = mle_iterate(record);
    // Remove any round-off negativity before wrapping as a state.
    auto e = herm_eig(r.rho);
    CMatrix clean = spectral_map(e, [](double l) {
        return std::max(l, 0.0);
    });
    clean *= cplx(1 / clean.trace().real());
    return DensityMatrix(clean, {2, 2});
}

}  // namespace nlact
