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

#include "nlact/broadcast.h"

#include <cmath>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include "nlact/tomography.h"

namespace nlact {

namespace {

struct TripleTerm {
    std::size_t x, y, z;
    double coefficient;
};

constexpr std::array<TripleTerm, 8> kTripleTerms{{
    {0, 0, 0, +1},
    {0, 1, 1, +1},
    {1, 1, 1, +1},
    {1, 0, 0, -1},
    {0, 0, 1, +1},
    {0, 1, 0, +1},
    {1, 0, 1, +1},
    {1, 1, 0, -1},
}};

struct PairTerm {
    std::size_t x, y;
    double coefficient;
};

constexpr std::array<PairTerm, 2> kPairTerms{{{2, 0, -2}, {2, 1, +2}}};

double sign(std::size_t bit) {
    return bit == 0 ? 1.0 : -1.0;
}

void check_setting(std::size_t x, std::size_t y, std::size_t z) {
    if (x >= kAliceSettings || y >= kBobSettings || z >= kCharlieSettings) {
        throw std::invalid_argument("setting index out of range");
    }
}

// p_AB(a,b|x,y,z) summed over c.
double ab_marginal(const Behavior &bh, std::size_t x, std::size_t y, std::size_t z, std::size_t a, std::size_t b) {
    return bh.p(x, y, z, a, b, 0) + bh.p(x, y, z, a, b, 1);
}

}  // namespace

double correlator(const Behavior &behavior, std::size_t x, std::size_t y, std::size_t z) {
    check_setting(x, y, z);
    double e = 0;
    for (std::size_t a = 0; a < 2; a++) {
        for (std::size_t b = 0; b < 2; b++) {
            for (std::size_t c = 0; c < 2; c++) {
                e += sign(a) * sign(b) * sign(c) * behavior.p(x, y, z, a, b, c);
            }
        }
    }
    return e;
}

double two_party_correlator_slice(const Behavior &behavior, std::size_t x, std::size_t y, std::size_t z) {
    check_setting(x, y, z);
    double e = 0;
    for (std::size_t a = 0; a < 2; a++) {
        for (std::size_t b = 0; b < 2; b++) {
            e += sign(a) * sign(b) * ab_marginal(behavior, x, y, z, a, b);
        }
    }
    return e;
}

double two_party_correlator(const Behavior &behavior, std::size_t x, std::size_t y) {
    check_setting(x, y, 0);
    if (!behavior.is_count_derived()) {
        for (std::size_t a = 0; a < 2; a++) {
            for (std::size_t b = 0; b < 2; b++) {
                double d = std::abs(ab_marginal(behavior, x, y, 0, a, b) - ab_marginal(behavior, x, y, 1, a, b));
                if (d > 1e-9) {
                    throw std::invalid_argument("two_party_correlator: AB marginal depends on Charlie's setting (" +
                                                std::to_string(d) + ")");
                }
            }
        }
    }
    return two_party_correlator_slice(behavior, x, y, 0);
}

InequalityResult broadcast_value(const Behavior &behavior) {
    InequalityResult r;
    double var = 0;
    const bool counted = behavior.is_count_derived();
    std::size_t k = 0;
    for (const auto &t : kTripleTerms) {
        double e = correlator(behavior, t.x, t.y, t.z);
        r.terms[k++] = {"A" + std::to_string(t.x) + "B" + std::to_string(t.y) + "C" + std::to_string(t.z),
                        t.coefficient, e};
        r.S += t.coefficient * e;
        if (counted) {
            double n = static_cast<double>(behavior.setting_total(t.x, t.y, t.z));
            var += t.coefficient * t.coefficient * (1 - e * e) / n;
        }
    }
    for (std::size_t j = 0; j < kPairTerms.size(); j++) {
        const auto &t = kPairTerms[j];
        double e = two_party_correlator(behavior, t.x, t.y);
        r.terms[k++] = {"A" + std::to_string(t.x) + "B" + std::to_string(t.y), t.coefficient, e};
        r.S += t.coefficient * e;
        r.pair_terms_z1[j] = two_party_correlator_slice(behavior, t.x, t.y, 1);
        if (counted) {
            double n = static_cast<double>(behavior.setting_total(t.x, t.y, 0));
            var += t.coefficient * t.coefficient * (1 - e * e) / n;
        }
    }
    r.I_B = r.S - kBroadcastLocalBound;
    if (counted) {
        r.S_std = std::sqrt(var);
    }
    return r;
}

DensityMatrix degrade_visibility(const DensityMatrix &rho_abc, const Isometry &v, double visibility) {
    if (rho_abc.dim() != 8) {
        throw std::invalid_argument("degrade_visibility: expected a three-qubit state");
    }
    if (!(visibility >= 0 && visibility <= 1)) {
        throw std::invalid_argument("degrade_visibility: visibility must lie in [0, 1]");
    }
    CMatrix dephased(8, 8);
    for (std::size_t k = 0; k < 2; k++) {
        CMatrix col(4, 1);
        for (std::size_t i = 0; i < 4; i++) {
            col(i, 0) = v.matrix()(i, k);
        }
        CMatrix q = kron(pauli::i(), col * col.adjoint());
        dephased += q * rho_abc.matrix() * q;
    }
    return DensityMatrix(cplx(visibility) * rho_abc.matrix() + cplx(1 - visibility) * dephased, rho_abc.dims());
}

DensityMatrix broadcast_state(double alpha, double visibility) {
    Isometry v = broadcast_isometry();
    return degrade_visibility(apply_isometry_second(isotropic_state(alpha), v), v, visibility);
}

double ideal_curve(double alpha, double visibility) {
    return broadcast_value(born_behavior(broadcast_state(alpha, visibility), table1_settings())).S;
}

NsResiduals no_signalling_residuals(const Behavior &behavior) {
    NsResiduals r;
    auto p_c = [&](std::size_t x, std::size_t y, std::size_t z, std::size_t c) {
        double s = 0;
        for (std::size_t a = 0; a < 2; a++) {
            for (std::size_t b = 0; b < 2; b++) {
                s += behavior.p(x, y, z, a, b, c);
            }
        }
        return s;
    };
    auto p_b = [&](std::size_t x, std::size_t y, std::size_t z, std::size_t b) {
        double s = 0;
        for (std::size_t a = 0; a < 2; a++) {
            for (std::size_t c = 0; c < 2; c++) {
                s += behavior.p(x, y, z, a, b, c);
            }
        }
        return s;
    };
    for (std::size_t x = 0; x < kAliceSettings; x++) {
        for (std::size_t z = 0; z < 2; z++) {
            for (std::size_t c = 0; c < 2; c++) {
                r.bob.push_back(std::abs(p_c(x, 0, z, c) - p_c(x, 1, z, c)));
            }
        }
        for (std::size_t y = 0; y < 2; y++) {
            for (std::size_t b = 0; b < 2; b++) {
                r.charlie.push_back(std::abs(p_b(x, y, 0, b) - p_b(x, y, 1, b)));
            }
        }
    }
    double sum = 0;
    for (const auto *set : {&r.bob, &r.charlie}) {
        for (double e : *set) {
            sum += e;
            r.max = std::max(r.max, e);
        }
    }
    r.mean = sum / static_cast<double>(r.bob.size() + r.charlie.size());
    return r;
}

Behavior behavior_from_counts(const CountTable &counts) {
    return Behavior::from_counts(counts);
}

CountTable sample_counts(const Behavior &behavior, std::uint64_t per_setting, std::mt19937_64 &rng) {
    CountTable out{};
    const auto &p = behavior.probabilities();
    for (std::size_t s = 0; s < kBehaviorSize / 8; s++) {
        auto drawn = sample_multinomial(std::span<const double>(p.data() + s * 8, 8), per_setting, rng);
        for (std::size_t o = 0; o < 8; o++) {
            out[s * 8 + o] = drawn[o];
        }
    }
    return out;
}

void write_counts_csv(std::ostream &out, const CountTable &counts) {
    out << "x,y,z,a,b,c,count\n";
    for (std::size_t x = 0; x < kAliceSettings; x++) {
        for (std::size_t y = 0; y < 2; y++) {
            for (std::size_t z = 0; z < 2; z++) {
                for (std::size_t a = 0; a < 2; a++) {
                    for (std::size_t b = 0; b < 2; b++) {
                        for (std::size_t c = 0; c < 2; c++) {
                            out << x << ',' << y << ',' << z << ',' << a << ',' << b << ',' << c << ','
                                << counts[Behavior::index(x, y, z, a, b, c)] << '\n';
                        }
                    }
                }
            }
        }
    }
}

CountTable read_counts_csv(std::istream &in) {
    std::string line;
    if (!std::getline(in, line)) {
        throw std::invalid_argument("counts CSV: empty input");
    }
    if (!line.empty() && line.back() == '\r') {
        line.pop_back();
    }
    if (line != "x,y,z,a,b,c,count") {
        throw std::invalid_argument("counts CSV: expected header x,y,z,a,b,c,count");
    }
    CountTable counts{};
    std::array<bool, kBehaviorSize> seen{};
    std::size_t lineno = 1;
    while (std::getline(in, line)) {
        lineno++;
        if (!line.empty() && line.back() == '\r') {
            line.pop_back();
        }
        if (line.empty()) {
            continue;
        }
        std::istringstream row(line);
        std::array<long long, 7> v{};
        for (std::size_t k = 0; k < 7; k++) {
            std::string field;
            if (!std::getline(row, field, k < 6 ? ',' : '\n')) {
                throw std::invalid_argument("counts CSV line " + std::to_string(lineno) + ": too few fields");
            }
            try {
                std::size_t used = 0;
                v[k] = std::stoll(field, &used);
                if (used != field.size()) {
                    throw std::invalid_argument("trailing characters");
                }
            } catch (const std::exception &) {
                throw std::invalid_argument("counts CSV line " + std::to_string(lineno) + ": bad number '" + field +
                                            "'");
            }
        }
        const long long limits[6] = {3, 2, 2, 2, 2, 2};
        for (std::size_t k = 0; k < 6; k++) {
            if (v[k] < 0 || v[k] >= limits[k]) {
                throw std::invalid_argument("counts CSV line " + std::to_string(lineno) + ": index out of range");
            }
        }
        if (v[6] < 0) {
            throw std::invalid_argument("counts CSV line " + std::to_string(lineno) + ": negative count");
        }
        std::size_t idx = Behavior::index(v[0], v[1], v[2], v[3], v[4], v[5]);
        if (seen[idx]) {
            throw std::invalid_argument("counts CSV line " + std::to_string(lineno) + ": duplicate cell");
        }
        seen[idx] = true;
        counts[idx] = static_cast<std::uint64_t>(v[6]);
    }
    return counts;
}

}  // namespace nlact
