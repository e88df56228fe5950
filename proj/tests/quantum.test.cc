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

#include "nlact/quantum.h"

#include <cmath>
#include <stdexcept>

#include "gtest/gtest.h"
#include "test_util.h"

using namespace nlact;
using namespace nlact::testing;

namespace {

const cplx I(0, 1);
const std::vector<std::size_t> kPair{2, 2};
const std::vector<std::size_t> kTriple{2, 2, 2};

CMatrix phi_plus_vector() {
    CMatrix v(4, 1);
    v(0, 0) = M_SQRT1_2;
    v(3, 0) = M_SQRT1_2;
    return v;
}

double expectation(const CMatrix &rho, const CMatrix &op) {
    return (rho * op).trace().real();
}

}  // namespace

TEST(density_matrix, accepts_valid_states) {
    std::mt19937_64 rng(1);
    DensityMatrix rho(random_density(4, rng), kPair);
    EXPECT_EQ(rho.dim(), 4u);
    EXPECT_LE(rho.purity(), 1.0 + 1e-12);
    EXPECT_GE(rho.purity(), 0.25 - 1e-12);
}

TEST(density_matrix, rejects_invalid_matrices) {
    CMatrix not_hermitian{{0.5, 0.1}, {0.0, 0.5}};
    EXPECT_THROW(DensityMatrix(not_hermitian, {2}), std::invalid_argument);
    CMatrix wrong_trace{{0.6, 0}, {0, 0.6}};
    EXPECT_THROW(DensityMatrix(wrong_trace, {2}), std::invalid_argument);
    CMatrix negative{{1.2, 0}, {0, -0.2}};
    EXPECT_THROW(DensityMatrix(negative, {2}), std::invalid_argument);
    EXPECT_THROW(DensityMatrix(CMatrix::identity(4) * cplx(0.25), {2, 3}), std::invalid_argument);
}

TEST(observable, eigenprojectors_of_paulis) {
    Observable x(pauli::x());
    CMatrix plus = 0.5 * (CMatrix::identity(2) + pauli::x());
    CMatrix minus = 0.5 * (CMatrix::identity(2) - pauli::x());
    EXPECT_LT(max_abs_diff(x.eigenprojector(0), plus), 1e-12);
    EXPECT_LT(max_abs_diff(x.eigenprojector(1), minus), 1e-12);
    Observable y(pauli::y());
    EXPECT_LT(max_abs_diff(y.eigenprojector(0), 0.5 * (CMatrix::identity(2) + pauli::y())), 1e-12);
}

TEST(observable, rejects_non_dichotomic_spectrum) {
    CMatrix m{{1, 0}, {0, 0.5}};
    EXPECT_THROW(Observable(m).eigenprojector(0), std::invalid_argument);
    EXPECT_THROW(Observable(CMatrix::identity(2)).eigenprojector(0), std::invalid_argument);
}

TEST(povm, validates_completeness_and_positivity) {
    std::vector<CMatrix> good{0.5 * (CMatrix::identity(2) + pauli::z()), 0.5 * (CMatrix::identity(2) - pauli::z())};
    EXPECT_NO_THROW(Povm{good});
    std::vector<CMatrix> incomplete{0.5 * (CMatrix::identity(2) + pauli::z())};
    EXPECT_THROW(Povm{incomplete}, std::invalid_argument);
    std::vector<CMatrix> negative{pauli::z(), CMatrix::identity(2) - pauli::z()};
    EXPECT_THROW(Povm{negative}, std::invalid_argument);
}

TEST(isotropic_state, overlap_with_phi_plus) {
    for (double a : {-1.0 / 3, 0.0, 0.25, 0.6875, 1.0}) {
        DensityMatrix w = isotropic_state(a);
        CMatrix v = phi_plus_vector();
        double overlap = (v.adjoint() * w.matrix() * v)(0, 0).real();
        EXPECT_NEAR(overlap, (1 + 3 * a) / 4, 1e-14) << a;
        EXPECT_NEAR(w.matrix().trace().real(), 1.0, 1e-14);
    }
    EXPECT_THROW(isotropic_state(1.1), std::invalid_argument);
    EXPECT_THROW(isotropic_state(-0.5), std::invalid_argument);
}

TEST(isotropic_state, correlations_are_alpha_times_paulis) {
    // ⟨XX⟩ = α, ⟨YY⟩ = −α, ⟨ZZ⟩ = α for the Φ+ family.
    const double a = 0.37;
    CMatrix w = isotropic_state(a).matrix();
    EXPECT_NEAR(expectation(w, kron(pauli::x(), pauli::x())), a, 1e-14);
    EXPECT_NEAR(expectation(w, kron(pauli::y(), pauli::y())), -a, 1e-14);
    EXPECT_NEAR(expectation(w, kron(pauli::z(), pauli::z())), a, 1e-14);
}

TEST(depolarize_qubit, maps_phi_plus_to_isotropic) {
    DensityMatrix out = depolarize_qubit(phi_plus_state(), 1, 0.3);
    EXPECT_LT(max_abs_diff(out.matrix(), isotropic_state(0.7).matrix()), 1e-14);
}

TEST(fidelity, pure_state_overlap_and_symmetry) {
    std::mt19937_64 rng(3);
    DensityMatrix rho(random_density(4, rng), kPair);
    DensityMatrix sigma(random_density(4, rng), kPair);
    EXPECT_NEAR(fidelity(rho, rho), 1.0, 1e-10);
    EXPECT_NEAR(fidelity(rho, sigma), fidelity(sigma, rho), 1e-10);
    double pure = (phi_plus_vector().adjoint() * rho.matrix() * phi_plus_vector())(0, 0).real();
    EXPECT_NEAR(fidelity(rho, phi_plus_state()), pure, 1e-10);
}

TEST(best_fit_alpha, recovers_isotropic_parameter) {
    // The fidelity is quadratic at its maximum, so a search on its values
    // resolves α to about √ε.
    for (double a : {0.1, 0.423, 0.5, 0.637, 0.862}) {
        AlphaFit fit = best_fit_alpha(isotropic_state(a));
        EXPECT_NEAR(fit.alpha, a, 1e-6) << a;
        EXPECT_NEAR(fit.fidelity, 1.0, 1e-10);
    }
    EXPECT_NEAR(best_fit_alpha(phi_plus_state()).alpha, 1.0, 1e-6);
}

TEST(best_fit_alpha, white_noise_mixture_stays_isotropic) {
    CMatrix m = 0.9 * isotropic_state(0.7).matrix() + cplx(0.1 / 4) * CMatrix::identity(4);
    AlphaFit fit = best_fit_alpha(DensityMatrix(m, kPair));
    EXPECT_NEAR(fit.alpha, 0.63, 1e-3);
}

TEST(table1_settings, observables_match_definitions) {
    BroadcastSettings s = table1_settings();
    const double r2 = std::sqrt(2.0), r3 = std::sqrt(3.0);
    EXPECT_LT(max_abs_diff(s.alice[0].matrix(), cplx(-1 / r2) * (pauli::x() + pauli::z())), 1e-14);
    EXPECT_LT(max_abs_diff(s.alice[1].matrix(), cplx(1 / r2) * (pauli::x() - pauli::z())), 1e-14);
    EXPECT_LT(max_abs_diff(s.alice[2].matrix(), cplx(-1) * pauli::y()), 1e-14);
    EXPECT_LT(max_abs_diff(s.bob[0].matrix(), cplx(1 / r3) * (cplx(r2) * pauli::x() + pauli::y())), 1e-14);
    EXPECT_LT(max_abs_diff(s.bob[1].matrix(), cplx(1 / r3) * (cplx(r2) * pauli::x() - pauli::y())), 1e-14);
    EXPECT_LT(max_abs_diff(s.charlie[0].matrix(), pauli::z()), 1e-14);
    EXPECT_LT(max_abs_diff(s.charlie[1].matrix(), pauli::x()), 1e-14);
    for (const auto *obs : {&s.alice[0], &s.alice[1], &s.alice[2], &s.bob[0], &s.bob[1]}) {
        EXPECT_LT(max_abs_diff(obs->matrix() * obs->matrix(), CMatrix::identity(2)), 1e-14);
    }
}

TEST(broadcast_isometry, columns_and_isometry_property) {
    CMatrix v = broadcast_isometry().matrix();
    ASSERT_EQ(v.rows(), 4u);
    ASSERT_EQ(v.cols(), 2u);
    EXPECT_NEAR(v(0, 0).real(), M_SQRT1_2, 1e-15);
    EXPECT_NEAR(v(3, 0).real(), -M_SQRT1_2, 1e-15);
    EXPECT_NEAR(v(1, 1).real(), -M_SQRT1_2, 1e-15);
    EXPECT_NEAR(v(2, 1).real(), -M_SQRT1_2, 1e-15);
    EXPECT_LT(max_abs_diff(v.adjoint() * v, CMatrix::identity(2)), 1e-15);
}

TEST(isometry, rejects_non_isometries) {
    CMatrix v(4, 2);
    v(0, 0) = 1;
    v(1, 1) = 2;
    EXPECT_THROW(Isometry{v}, std::invalid_argument);
}

TEST(apply_isometry_second, preserves_trace_and_first_marginal) {
    std::mt19937_64 rng(5);
    DensityMatrix rho(random_density(4, rng), kPair);
    DensityMatrix out = apply_isometry_second(rho, broadcast_isometry());
    EXPECT_EQ(out.dims(), kTriple);
    std::vector<std::size_t> keep{0};
    EXPECT_LT(max_abs_diff(partial_trace(out.matrix(), kTriple, keep), partial_trace(rho.matrix(), kPair, keep)),
              1e-13);
}

TEST(born_behavior, matches_direct_pauli_expectations) {
    // Correlators from the behavior agree with Tr[ρ (A⊗B⊗C)] computed from the
    // observables themselves.
    std::mt19937_64 rng(7);
    DensityMatrix rho(random_density(8, rng), kTriple);
    BroadcastSettings s = table1_settings();
    Behavior bh = born_behavior(rho, s);
    for (std::size_t x = 0; x < 3; x++) {
        for (std::size_t y = 0; y < 2; y++) {
            for (std::size_t z = 0; z < 2; z++) {
                double e = 0;
                for (std::size_t a = 0; a < 2; a++) {
                    for (std::size_t b = 0; b < 2; b++) {
                        for (std::size_t c = 0; c < 2; c++) {
                            e += ((a + b + c) % 2 ? -1.0 : 1.0) * bh.p(x, y, z, a, b, c);
                        }
                    }
                }
                CMatrix op = kron(kron(s.alice[x].matrix(), s.bob[y].matrix()), s.charlie[z].matrix());
                EXPECT_NEAR(e, expectation(rho.matrix(), op), 1e-12);
            }
        }
    }
}

TEST(effective_povms, are_valid_povms_reproducing_born_rule) {
    Isometry v = broadcast_isometry();
    BroadcastSettings s = table1_settings();
    auto povms = effective_povms(v, s);
    ASSERT_EQ(povms.size(), 4u);
    std::mt19937_64 rng(9);
    DensityMatrix rho(random_density(4, rng), kPair);
    Behavior bh = born_behavior(apply_isometry_second(rho, v), s);
    for (std::size_t y = 0; y < 2; y++) {
        for (std::size_t z = 0; z < 2; z++) {
            const Povm &m = povms[2 * y + z];
            CMatrix sum(2, 2);
            for (const auto &e : m.effects()) {
                sum += e;
                EXPECT_GE(min_eigenvalue(e), -1e-14);
            }
            EXPECT_LT(max_abs_diff(sum, CMatrix::identity(2)), 1e-14);
            for (std::size_t a = 0; a < 2; a++) {
                for (std::size_t b = 0; b < 2; b++) {
                    for (std::size_t c = 0; c < 2; c++) {
                        CMatrix op = kron(s.alice[0].eigenprojector(a), m.effects()[2 * b + c]);
                        EXPECT_NEAR(bh.p(0, y, z, a, b, c), expectation(rho.matrix(), op), 1e-12);
                    }
                }
            }
        }
    }
}

TEST(assemblage, marginal_is_alice_reduced_state) {
    auto povms = effective_povms(broadcast_isometry(), table1_settings());
    std::mt19937_64 rng(11);
    DensityMatrix rho(random_density(4, rng), kPair);
    Assemblage as = assemblage(rho, povms);
    ASSERT_EQ(as.settings(), 4u);
    std::vector<std::size_t> keep{0};
    CMatrix reduced = partial_trace(rho.matrix(), kPair, keep);
    for (std::size_t s = 0; s < as.settings(); s++) {
        EXPECT_LT(max_abs_diff(as.marginal(s), reduced), 1e-13);
        for (const auto &m : as.members[s]) {
            EXPECT_GE(min_eigenvalue(m), -1e-13);
        }
    }
}
