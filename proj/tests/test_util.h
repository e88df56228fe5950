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

#ifndef NLACT_TESTS_TEST_UTIL_H
#define NLACT_TESTS_TEST_UTIL_H

#include <random>

#include "nlact/matcore.h"

namespace nlact::testing {

inline CMatrix random_complex(std::size_t rows, std::size_t cols, std::mt19937_64 &rng) {
    std::normal_distribution<double> g;
    CMatrix m(rows, cols);
    for (auto &v : m.data()) {
        v = cplx(g(rng), g(rng));
    }
    return m;
}

inline CMatrix random_hermitian(std::size_t n, std::mt19937_64 &rng) {
    CMatrix g = random_complex(n, n, rng);
    return 0.5 * (g + g.adjoint());
}

/// Ginibre-distributed density matrix of full rank (almost surely).
inline CMatrix random_density(std::size_t n, std::mt19937_64 &rng) {
    CMatrix g = random_complex(n, n, rng);
    CMatrix r = g * g.adjoint();
    return r * cplx(1.0 / r.trace().real());
}

inline CMatrix random_pure(std::size_t n, std::mt19937_64 &rng) {
    CMatrix v = random_complex(n, 1, rng);
    CMatrix r = v * v.adjoint();
    return r * cplx(1.0 / r.trace().real());
}

/// Haar-ish unitary from Gram-Schmidt on a Ginibre matrix.
inline CMatrix random_unitary(std::size_t n, std::mt19937_64 &rng) {
    CMatrix g = random_complex(n, n, rng);
    for (std::size_t j = 0; j < n; j++) {
        for (std::size_t k = 0; k < j; k++) {
            cplx dot = 0;
            for (std::size_t i = 0; i < n; i++) {
                dot += std::conj(g(i, k)) * g(i, j);
            }
            for (std::size_t i = 0; i < n; i++) {
                g(i, j) -= dot * g(i, k);
            }
        }
        double nrm = 0;
        for (std::size_t i = 0; i < n; i++) {
            nrm += std::norm(g(i, j));
        }
        nrm = std::sqrt(nrm);
        for (std::size_t i = 0; i < n; i++) {
            g(i, j) /= nrm;
        }
    }
    return g;
}

}  // namespace nlact::testing

#endif
