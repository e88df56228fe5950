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

#include "nlact/bipartite.h"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace nlact {

namespace {

void require_two_qubit(const DensityMatrix &rho, const char *what) {
    if (rho.dim() != 4) {
        throw std::invalid_argument(std::string(what) + ": expected a two-qubit state");
    }
}

double expectation(const DensityMatrix &rho, const CMatrix &op) {
    return (rho.matrix() * op).trace().real();
}

}  // namespace

RMatrix correlation_matrix(const DensityMatrix &rho) {
    require_two_qubit(rho, "correlation_matrix");
    const std::array<CMatrix, 3> s{pauli::x(), pauli::y(), pauli::z()};
    RMatrix t(3, 3);
    for (std::size_t i = 0; i < 3; i++) {
        for (std::size_t j = 0; j < 3; j++) {
            t(i, j) = expectation(rho, kron(s[i], s[j]));
        }
    }
    return t;
}

double horodecki_max_chsh(const DensityMatrix &rho) {
    RMatrix t = correlation_matrix(rho);
    RMatrix ttt = t * t.transpose();
    auto e = sym_eig(0.5 * (ttt + ttt.transpose()));
    double m = std::max(e.values[2], 0.0) + std::max(e.values[1], 0.0);
    return 2 * std::sqrt(m);
}

bool violates_chsh(double value) {
    return value > 2 + kChshViolationMargin;
}

PptResult ppt_check(const DensityMatrix &rho) {
    require_two_qubit(rho, "ppt_check");
    std::vector<std::size_t> dims{2, 2};
    double lmin = min_eigenvalue(partial_transpose(rho.matrix(), dims, 1));
    return {lmin >= -kPsdClampTol, lmin};
}

double chsh_value(const DensityMatrix &rho, const ChshSettings &settings) {
    require_two_qubit(rho, "chsh_value");
    auto corr = [&](std::size_t x, std::size_t y) {
        // Route through the eigenprojectors so non-±1 observables are rejected.
        CMatrix a = settings.alice[x].eigenprojector(0) - settings.alice[x].eigenprojector(1);
        CMatrix b = settings.bob[y].eigenprojector(0) - settings.bob[y].eigenprojector(1);
        return expectation(rho, kron(a, b));
    };
    return corr(0, 0) + corr(0, 1) + corr(1, 0) - corr(1, 1);
}

}  // namespace nlact
