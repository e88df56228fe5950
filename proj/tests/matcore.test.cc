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

#include "nlact/matcore.h"

#include "gtest/gtest.h"
#include "test_util.h"

using namespace nlact;
using namespace nlact::testing;

namespace {

const cplx I(0, 1);
const CMatrix kId2 = CMatrix::identity(2);
const CMatrix kX{{0, 1}, {1, 0}};
const CMatrix kY{{0, -I}, {I, 0}};
const CMatrix kZ{{1, 0}, {0, -1}};

CMatrix phi_plus_projector() {
    CMatrix v(4, 1);
    v(0, 0) = M_SQRT1_2;
    v(3, 0) = M_SQRT1_2;
    return v * v.adjoint();
}

// Built by hand so matcore tests do not depend on the quantum module.
CMatrix isotropic(double alpha) {
    return alpha * phi_plus_projector() + ((1 - alpha) / 4) * CMatrix::identity(4);
}

const std::vector<std::size_t> kQubitPair{2, 2};

}  // namespace

TEST(kron, identity_and_pauli_products) {
    EXPECT_EQ(kron(kId2, kId2), CMatrix::identity(4));
    CMatrix zz = kron(kZ, kZ);
    std::vector<double> d{1, -1, -1, 1};
    EXPECT_EQ(zz, CMatrix::diagonal(d));
}

TEST(kron, xx_stabilizes_phi_plus) {
    CMatrix v(4, 1);
    v(0, 0) = M_SQRT1_2;
    v(3, 0) = M_SQRT1_2;
    CMatrix w = kron(kX, kX) * v;
    EXPECT_LT(max_abs_diff(w, v), 1e-15);
}

TEST(kron, shape_and_entry_layout) {
    std::mt19937_64 rng(1);
    CMatrix a = random_complex(2, 3, rng);
    CMatrix b = random_complex(4, 5, rng);
    CMatrix k = kron(a, b);
    ASSERT_EQ(k.rows(), 8u);
    ASSERT_EQ(k.cols(), 15u);
    EXPECT_EQ(k(1 * 4 + 2, 2 * 5 + 3), a(1, 2) * b(2, 3));
}

TEST(kron, associative_and_bilinear) {
    std::mt19937_64 rng(2);
    for (int trial = 0; trial < 20; trial++) {
        CMatrix a = random_complex(2, 2, rng);
        CMatrix b = random_complex(3, 2, rng);
        CMatrix c = random_complex(2, 3, rng);
        EXPECT_LT(max_abs_diff(kron(kron(a, b), c), kron(a, kron(b, c))), 1e-12);
        CMatrix a2 = random_complex(2, 2, rng);
        cplx s(0.3, -1.7);
        EXPECT_LT(max_abs_diff(kron(s * a + a2, b), s * kron(a, b) + kron(a2, b)), 1e-12);
        EXPECT_LT(max_abs_diff(kron(b, s * a + a2), s * kron(b, a) + kron(b, a2)), 1e-12);
    }
}

TEST(partial_trace, product_state_factorizes) {
    std::mt19937_64 rng(3);
    for (int trial = 0; trial < 20; trial++) {
        CMatrix rho = random_density(2, rng);
        CMatrix sigma = random_hermitian(3, rng);
        std::vector<std::size_t> dims{2, 3};
        std::vector<std::size_t> keep0{0};
        std::vector<std::size_t> keep1{1};
        CMatrix prod = kron(rho, sigma);
        EXPECT_LT(max_abs_diff(partial_trace(prod, dims, keep0), rho * sigma.trace()), 1e-12);
        EXPECT_LT(max_abs_diff(partial_trace(prod, dims, keep1), sigma * rho.trace()), 1e-12);
    }
}

TEST(partial_trace, maximally_entangled_marginal) {
    std::vector<std::size_t> keep{1};
    EXPECT_LT(max_abs_diff(partial_trace(phi_plus_projector(), kQubitPair, keep), 0.5 * kId2), 1e-15);
}

TEST(partial_trace, isotropic_marginal_by_direct_summation) {
    CMatrix w = isotropic(0.5);
    // Oracle: (Tr_2 W)[i,j] = Σ_k W[2i+k, 2j+k].
    CMatrix expect(2, 2);
    for (std::size_t i = 0; i < 2; i++) {
        for (std::size_t j = 0; j < 2; j++) {
            for (std::size_t k = 0; k < 2; k++) {
                expect(i, j) += w(2 * i + k, 2 * j + k);
            }
        }
    }
    std::vector<std::size_t> keep{0};
    CMatrix got = partial_trace(w, kQubitPair, keep);
    EXPECT_LT(max_abs_diff(got, expect), 1e-15);
    EXPECT_LT(max_abs_diff(got, 0.5 * kId2), 1e-15);
}

TEST(partial_trace, three_party_keeps_order_and_trace) {
    std::mt19937_64 rng(4);
    CMatrix m = random_density(8, rng);
    std::vector<std::size_t> dims{2, 2, 2};
    std::vector<std::size_t> keep{2, 0};
    CMatrix r = partial_trace(m, dims, keep);
    EXPECT_NEAR(std::abs(r.trace() - m.trace()), 0, 1e-12);
    // Same as tracing out the middle qubit by hand.
    CMatrix expect(4, 4);
    for (std::size_t a = 0; a < 2; a++) {
        for (std::size_t c = 0; c < 2; c++) {
            for (std::size_t a2 = 0; a2 < 2; a2++) {
                for (std::size_t c2 = 0; c2 < 2; c2++) {
                    for (std::size_t b = 0; b < 2; b++) {
                        expect(2 * a + c, 2 * a2 + c2) += m(4 * a + 2 * b + c, 4 * a2 + 2 * b + c2);
                    }
                }
            }
        }
    }
    EXPECT_LT(max_abs_diff(r, expect), 1e-14);
}

TEST(partial_trace, dimension_mismatch_throws) {
    std::vector<std::size_t> dims{2, 3};
    std::vector<std::size_t> keep{0};
    EXPECT_THROW(partial_trace(CMatrix::identity(4), dims, keep), std::invalid_argument);
    std::vector<std::size_t> bad_keep{5};
    EXPECT_THROW(partial_trace(CMatrix::identity(4), kQubitPair, bad_keep), std::invalid_argument);
}

TEST(partial_transpose, product_case) {
    std::mt19937_64 rng(5);
    CMatrix rho = random_density(2, rng);
    CMatrix sigma = random_density(2, rng);
    EXPECT_LT(max_abs_diff(partial_transpose(kron(rho, sigma), kQubitPair, 1), kron(rho, sigma.transpose())), 1e-15);
    EXPECT_LT(max_abs_diff(partial_transpose(kron(rho, sigma), kQubitPair, 0), kron(rho.transpose(), sigma)), 1e-15);
}

TEST(partial_transpose, entangled_spectrum) {
    EXPECT_NEAR(min_eigenvalue(partial_transpose(phi_plus_projector(), kQubitPair, 1)), -0.5, 1e-12);
    EXPECT_NEAR(min_eigenvalue(partial_transpose(isotropic(1.0 / 3), kQubitPair, 1)), 0.0, 1e-12);
}

TEST(partial_transpose, involution_trace_and_hermiticity) {
    std::mt19937_64 rng(6);
    std::vector<std::size_t> dims{2, 3, 2};
    for (int trial = 0; trial < 20; trial++) {
        CMatrix h = random_hermitian(12, rng);
        for (std::size_t s = 0; s < 3; s++) {
            CMatrix t = partial_transpose(h, dims, s);
            EXPECT_LT(max_abs_diff(partial_transpose(t, dims, s), h), 1e-15);
            EXPECT_LT(std::abs(t.trace() - h.trace()), 1e-12);
            EXPECT_TRUE(t.is_hermitian(1e-12));
        }
    }
}

TEST(herm_eig, paulis) {
    auto z = herm_eig(kZ);
    EXPECT_NEAR(z.values[0], -1, 1e-15);
    EXPECT_NEAR(z.values[1], 1, 1e-15);

    auto x = herm_eig(kX);
    EXPECT_NEAR(x.values[0], -1, 1e-15);
    EXPECT_NEAR(x.values[1], 1, 1e-15);
    // Eigenvectors (|0⟩∓|1⟩)/√2 up to phase.
    cplx minus_overlap = (x.vectors(0, 0) - x.vectors(1, 0)) * M_SQRT1_2;
    cplx plus_overlap = (x.vectors(0, 1) + x.vectors(1, 1)) * M_SQRT1_2;
    EXPECT_NEAR(std::abs(minus_overlap), 1, 1e-14);
    EXPECT_NEAR(std::abs(plus_overlap), 1, 1e-14);

    auto y = herm_eig(kY);
    EXPECT_NEAR(y.values[0], -1, 1e-15);
    EXPECT_NEAR(y.values[1], 1, 1e-15);
}

TEST(herm_eig, isotropic_spectrum) {
    for (double alpha : {-1.0 / 3, 0.0, 0.25, 0.6875, 1.0}) {
        auto e = herm_eig(isotropic(alpha));
        std::vector<double> expect{(1 - alpha) / 4, (1 - alpha) / 4, (1 - alpha) / 4, (1 + 3 * alpha) / 4};
        std::sort(expect.begin(), expect.end());
        for (std::size_t k = 0; k < 4; k++) {
            EXPECT_NEAR(e.values[k], expect[k], 1e-14) << alpha;
        }
    }
}

TEST(herm_eig, reconstruction_and_residuals_up_to_32) {
    std::mt19937_64 rng(7);
    for (std::size_t n : {1u, 2u, 3u, 5u, 8u, 16u, 32u}) {
        CMatrix h = random_hermitian(n, rng);
        auto e = herm_eig(h);
        ASSERT_TRUE(std::is_sorted(e.values.begin(), e.values.end()));
        CMatrix recon = spectral_map(e, [](double l) {
            return l;
        });
        double scale = h.norm();
        EXPECT_LT(max_abs_diff(recon, h), 1e-10 * scale) << n;
        EXPECT_LT(max_abs_diff(e.vectors.adjoint() * e.vectors, CMatrix::identity(n)), 1e-12) << n;
        for (std::size_t k = 0; k < n; k++) {
            CMatrix v(n, 1);
            for (std::size_t i = 0; i < n; i++) {
                v(i, 0) = e.vectors(i, k);
            }
            EXPECT_LT((h * v - e.values[k] * v).norm(), 1e-10 * scale);
        }
    }
}

TEST(herm_eig, rejects_non_hermitian) {
    CMatrix m{{1, 2}, {0, 1}};
    EXPECT_THROW(herm_eig(m), std::invalid_argument);
    EXPECT_THROW(herm_eig(CMatrix(2, 3)), std::invalid_argument);
}

TEST(sym_eig, real_reconstruction) {
    std::mt19937_64 rng(8);
    std::normal_distribution<double> g;
    for (std::size_t n : {2u, 4u, 9u, 20u}) {
        RMatrix a(n, n);
        for (std::size_t i = 0; i < n; i++) {
            for (std::size_t j = i; j < n; j++) {
                a(i, j) = a(j, i) = g(rng);
            }
        }
        auto e = sym_eig(a);
        RMatrix recon = spectral_map(e, [](double l) {
            return l;
        });
        EXPECT_LT(max_abs_diff(recon, a), 1e-12 * a.norm());
    }
}

TEST(psd_sqrt, closed_forms) {
    EXPECT_LT(max_abs_diff(psd_sqrt(CMatrix::identity(4)), CMatrix::identity(4)), 1e-15);
    std::vector<double> d41{4, 1};
    std::vector<double> d21{2, 1};
    EXPECT_LT(max_abs_diff(psd_sqrt(CMatrix::diagonal(d41)), CMatrix::diagonal(d21)), 1e-15);
    CMatrix w1 = isotropic(1);
    CMatrix r = psd_sqrt(w1);
    EXPECT_LT(max_abs_diff(r * r, w1), 1e-12);
}

TEST(psd_sqrt, random_squares_back) {
    std::mt19937_64 rng(9);
    for (int trial = 0; trial < 20; trial++) {
        CMatrix h = random_density(6, rng);
        CMatrix r = psd_sqrt(h);
        EXPECT_LT(max_abs_diff(r * r, h), 1e-9);
        EXPECT_GE(min_eigenvalue(r), -1e-12);
    }
}

TEST(psd_sqrt, clamps_roundoff_and_rejects_indefinite) {
    std::vector<double> tiny{1, -1e-12};
    EXPECT_NO_THROW(psd_sqrt(CMatrix::diagonal(tiny)));
    std::vector<double> neg{1, -1e-6};
    EXPECT_THROW(psd_sqrt(CMatrix::diagonal(neg)), std::invalid_argument);
}

TEST(real_embed, sigma_y) {
    RMatrix e = real_embed(kY);
    RMatrix expect{{0, 0, 0, 1}, {0, 0, -1, 0}, {0, -1, 0, 0}, {1, 0, 0, 0}};
    EXPECT_EQ(e, expect);
    auto s = sym_eig(e);
    std::vector<double> want{-1, -1, 1, 1};
    for (std::size_t k = 0; k < 4; k++) {
        EXPECT_NEAR(s.values[k], want[k], 1e-14);
    }
}

TEST(real_embed, real_diagonal_duplicates) {
    std::vector<double> d{3, -2, 5};
    RMatrix e = real_embed(CMatrix::diagonal(d));
    std::vector<double> dd{3, -2, 5, 3, -2, 5};
    EXPECT_EQ(e, RMatrix::diagonal(dd));
}

TEST(real_embed, isotropic_spectrum_doubles) {
    auto s = sym_eig(real_embed(isotropic(0.5)));
    ASSERT_EQ(s.values.size(), 8u);
    for (std::size_t k = 0; k < 6; k++) {
        EXPECT_NEAR(s.values[k], 0.125, 1e-14);
    }
    EXPECT_NEAR(s.values[6], 0.625, 1e-14);
    EXPECT_NEAR(s.values[7], 0.625, 1e-14);
}

TEST(real_embed, psd_iff_hermitian_psd) {
    std::mt19937_64 rng(10);
    for (int trial = 0; trial < 50; trial++) {
        CMatrix h = random_hermitian(4, rng);
        // Shift by a random amount so both signs of the minimum occur.
        double shift = std::uniform_real_distribution<double>(-3, 3)(rng);
        h += shift * CMatrix::identity(4);
        double lh = min_eigenvalue(h);
        double le = min_eigenvalue(real_embed(h));
        EXPECT_NEAR(lh, le, 1e-12);
        EXPECT_EQ(lh >= 0, le >= -1e-13);
        auto eh = herm_eig(h);
        auto ee = sym_eig(real_embed(h));
        for (std::size_t k = 0; k < 4; k++) {
            EXPECT_NEAR(ee.values[2 * k], eh.values[k], 1e-12);
            EXPECT_NEAR(ee.values[2 * k + 1], eh.values[k], 1e-12);
        }
    }
}

TEST(cholesky, solve_and_reject) {
    RMatrix a{{4, 2, 0}, {2, 5, 1}, {0, 1, 3}};
    auto l = cholesky(a);
    ASSERT_TRUE(l.has_value());
    EXPECT_LT(max_abs_diff(*l * l->transpose(), a), 1e-14);
    std::vector<double> b{1, 2, 3};
    auto x = cholesky_solve(*l, b);
    for (std::size_t i = 0; i < 3; i++) {
        double s = 0;
        for (std::size_t j = 0; j < 3; j++) {
            s += a(i, j) * x[j];
        }
        EXPECT_NEAR(s, b[i], 1e-14);
    }
    EXPECT_LT(max_abs_diff(lower_triangular_inverse(*l) * *l, RMatrix::identity(3)), 1e-14);
    RMatrix indefinite{{1, 2}, {2, 1}};
    EXPECT_FALSE(cholesky(indefinite).has_value());
}

TEST(svd_jacobi, reconstructs_with_small_singular_values) {
    std::mt19937_64 rng(11);
    std::normal_distribution<double> g;
    for (std::size_t n : {1u, 3u, 8u}) {
        RMatrix a(n, n);
        for (auto &v : a.data()) {
            v = g(rng);
        }
        // Make one column tiny so the smallest singular value is ~1e-9.
        for (std::size_t i = 0; i < n; i++) {
            a(i, 0) *= 1e-9;
        }
        Svd s = svd_jacobi(a);
        RMatrix recon = s.u * RMatrix::diagonal(s.s) * s.v.transpose();
        EXPECT_LT(max_abs_diff(recon, a), 1e-14);
        EXPECT_LT(max_abs_diff(s.v.transpose() * s.v, RMatrix::identity(n)), 1e-14);
        EXPECT_LT(max_abs_diff(s.u.transpose() * s.u, RMatrix::identity(n)), 1e-12);
    }
}
