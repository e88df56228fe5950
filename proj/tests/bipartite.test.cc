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

#include <cmath>

#include "gtest/gtest.h"
#include "test_util.h"

using namespace nlact;
using namespace nlact::testing;

namespace {

const std::vector<std::size_t> kPair{2, 2};

Observable spin(double theta) {
    // cos θ Z + sin θ X
    return Observable(cplx(std::cos(theta)) * pauli::z() + cplx(std::sin(theta)) * pauli::x());
}

}  // namespace

TEST(correlation_matrix, isotropic_state_is_diagonal) {
    RMatrix t = correlation_matrix(isotropic_state(0.4));
    EXPECT_NEAR(t(0, 0), 0.4, 1e-15);
    EXPECT_NEAR(t(1, 1), -0.4, 1e-15);
    EXPECT_NEAR(t(2, 2), 0.4, 1e-15);
    EXPECT_NEAR(t(0, 1), 0.0, 1e-15);
}

TEST(horodecki, closed_form_on_isotropic_family) {
    for (int k = 0; k <= 20; k++) {
        double a = k / 20.0;
        EXPECT_NEAR(horodecki_max_chsh(isotropic_state(a)), 2 * std::sqrt(2.0) * a, 1e-12) << a;
    }
    EXPECT_NEAR(horodecki_max_chsh(isotropic_state(M_SQRT1_2)), 2.0, 1e-12);
    EXPECT_FALSE(violates_chsh(horodecki_max_chsh(isotropic_state(M_SQRT1_2))));
    EXPECT_TRUE(violates_chsh(horodecki_max_chsh(isotropic_state(0.72))));
}

TEST(horodecki, upper_bounds_explicit_chsh_settings) {
    std::mt19937_64 rng(13);
    std::uniform_real_distribution<double> angle(0, 2 * M_PI);
    for (int t = 0; t < 50; t++) {
        DensityMatrix rho(random_density(4, rng), kPair);
        double bound = horodecki_max_chsh(rho);
        ChshSettings s{{spin(angle(rng)), spin(angle(rng))}, {spin(angle(rng)), spin(angle(rng))}};
        EXPECT_LE(std::abs(chsh_value(rho, s)), bound + 1e-12);
    }
}

TEST(horodecki, attained_by_optimal_settings_for_phi_plus) {
    // A = Z, X and B = (Z ± X)/√2 reach Tsirelson's bound on Φ+.
    ChshSettings s{{spin(0), spin(M_PI / 2)}, {spin(M_PI / 4), spin(-M_PI / 4)}};
    EXPECT_NEAR(chsh_value(phi_plus_state(), s), 2 * std::sqrt(2.0), 1e-12);
    EXPECT_NEAR(horodecki_max_chsh(phi_plus_state()), 2 * std::sqrt(2.0), 1e-12);
}

TEST(ppt, isotropic_boundary_at_one_third) {
    for (int k = 0; k <= 20; k++) {
        double a = k / 20.0;
        PptResult r = ppt_check(isotropic_state(a));
        // Partial transpose spectrum: (1+α)/4 (×3) and (1−3α)/4.
        EXPECT_NEAR(r.min_eig, std::min((1 + a) / 4, (1 - 3 * a) / 4), 1e-12) << a;
        EXPECT_EQ(r.separable, a <= 1.0 / 3) << a;
    }
    EXPECT_TRUE(ppt_check(isotropic_state(1.0 / 3)).separable);
    EXPECT_FALSE(ppt_check(isotropic_state(1.0 / 3 + 1e-8)).separable);
}

TEST(ppt, product_states_are_separable) {
    std::mt19937_64 rng(17);
    for (int t = 0; t < 10; t++) {
        CMatrix m = kron(random_density(2, rng), random_density(2, rng));
        EXPECT_TRUE(ppt_check(DensityMatrix(m, kPair)).separable);
    }
}

TEST(bipartite, rejects_non_two_qubit_input) {
    std::vector<std::size_t> three{2, 2, 2};
    EXPECT_THROW(horodecki_max_chsh(maximally_mixed_state(three)), std::invalid_argument);
    EXPECT_THROW(ppt_check(maximally_mixed_state(three)), std::invalid_argument);
}
