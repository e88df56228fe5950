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

#include "nlact/harness.h"

#include <cmath>
#include <set>
#include <sstream>

#include "gtest/gtest.h"
#include "nlact/broadcast.h"
#include "test_util.h"

using namespace nlact;
using namespace nlact::testing;

namespace {

// A small, fast noise model with every error source active.
NoiseModel light_noise() {
    NoiseModel m;
    m.shots_per_basis = 2000;
    m.broadcast_counts_per_setting = 500;
    return m;
}

std::string jsonl(const std::vector<TrialRecord> &records) {
    std::ostringstream out;
    write_trials_jsonl(out, records);
    return out.str();
}

std::string summary_csv(double alpha, const MonteCarloSummary &s) {
    std::ostringstream out;
    write_summary_csv(out, alpha, s);
    return out.str();
}

}  // namespace

TEST(trial_seed, deterministic_and_distinct) {
    EXPECT_EQ(trial_seed(7, 3), trial_seed(7, 3));
    std::set<std::uint64_t> seen;
    for (std::size_t i = 0; i < 1000; i++) {
        seen.insert(trial_seed(7, i));
    }
    EXPECT_EQ(seen.size(), 1000u);
    EXPECT_NE(trial_seed(7, 0), trial_seed(8, 0));
}

TEST(waveplate, nominal_settings_give_pauli_projectors) {
    for (PauliBasis b : {PauliBasis::X, PauliBasis::Y, PauliBasis::Z}) {
        auto angles = waveplate_setting(b);
        for (std::size_t o = 0; o < 2; o++) {
            CMatrix p = waveplate_projector(angles[0], angles[1], 0, 0, o);
            EXPECT_LT(max_abs_diff(p, pauli_projector(b, o)), 1e-12) << basis_letter(b) << o;
        }
    }
}

TEST(waveplate, errors_tilt_the_measured_basis) {
    // The Y setting uses both plates non-trivially.
    auto angles = waveplate_setting(PauliBasis::Y);
    CMatrix nominal = pauli_projector(PauliBasis::Y, 0);
    CMatrix tilted = waveplate_projector(angles[0] + 1.0, angles[1], 0, 0, 0);
    CMatrix retarded = waveplate_projector(angles[0], angles[1], 0.05, 0, 0);
    EXPECT_GT(max_abs_diff(tilted, nominal), 1e-3);
    EXPECT_GT(max_abs_diff(retarded, nominal), 1e-3);
    // Still a rank-one projector completing to the identity.
    CMatrix other = waveplate_projector(angles[0] + 1.0, angles[1], 0, 0, 1);
    EXPECT_LT(max_abs_diff(tilted + other, CMatrix::identity(2)), 1e-14);
    EXPECT_LT(max_abs_diff(tilted * tilted, tilted), 1e-14);
}

TEST(noise_model, validation) {
    NoiseModel m;
    EXPECT_NO_THROW(m.validate());
    m.waveplate_angle_sigma = -0.1;
    EXPECT_THROW(m.validate(), std::invalid_argument);
    m = NoiseModel{};
    m.hom_visibility = 1.2;
    EXPECT_THROW(m.validate(), std::invalid_argument);
}

TEST(run_montecarlo, noiseless_trials_are_identical_and_exact) {
    const double alpha = 0.8;
    MonteCarloResult r = run_montecarlo(alpha, NoiseModel::noiseless(), 3, 11);
    ASSERT_EQ(r.records.size(), 3u);
    for (const auto &rec : r.records) {
        EXPECT_EQ(rec.alpha, r.records[0].alpha);
        EXPECT_EQ(rec.eta, r.records[0].eta);
        EXPECT_EQ(rec.S, r.records[0].S);
        // The MLE stops once the log-likelihood gain drops below 1e-10; the
        // likelihood is quadratic at its maximum, leaving ~1e-5 in α.
        EXPECT_NEAR(rec.alpha, alpha, 1e-4);
        EXPECT_NEAR(rec.eta, kLhvReferenceAlpha / alpha, 1e-4);
        EXPECT_NEAR(rec.S, 4 * std::sqrt(3.0) * alpha, 1e-12);
        EXPECT_LT(rec.ns_max, 1e-12);
    }
    for (const ColumnSummary *c : {&r.summary.alpha, &r.summary.fidelity, &r.summary.S, &r.summary.I_B,
                                   &r.summary.eta, &r.summary.max_chsh}) {
        EXPECT_EQ(c->std, 0.0);
    }
}

TEST(run_montecarlo, fixed_seed_gives_identical_output) {
    MonteCarloResult a = run_montecarlo(0.637, light_noise(), 4, 5);
    MonteCarloResult b = run_montecarlo(0.637, light_noise(), 4, 5);
    EXPECT_EQ(jsonl(a.records), jsonl(b.records));
    EXPECT_EQ(summary_csv(0.637, a.summary), summary_csv(0.637, b.summary));
    MonteCarloResult c = run_montecarlo(0.637, light_noise(), 4, 6);
    EXPECT_NE(jsonl(a.records), jsonl(c.records));
}

TEST(run_montecarlo, worker_count_does_not_change_records) {
    MonteCarloResult serial = run_montecarlo(0.637, light_noise(), 5, 21, 1);
    MonteCarloResult parallel = run_montecarlo(0.637, light_noise(), 5, 21, 3);
    EXPECT_EQ(jsonl(serial.records), jsonl(parallel.records));
}

TEST(run_montecarlo, records_are_internally_consistent) {
    MonteCarloResult r = run_montecarlo(0.637, light_noise(), 4, 33);
    for (const auto &rec : r.records) {
        EXPECT_EQ(rec.I_B, rec.S - 4);
        EXPECT_TRUE(rec.certificate_ok);
        EXPECT_GE(rec.visibility, 0.0);
        EXPECT_LE(rec.visibility, 1.0);
        for (double v : {rec.alpha, rec.fidelity, rec.eta, rec.max_chsh, rec.S, rec.ns_mean}) {
            EXPECT_TRUE(std::isfinite(v));
        }
        // Re-verify the certificate from the serialized state alone.
        DensityMatrix state = state_from_json(json::parse(trial_to_json(rec).dump())["state"]);
        CertificateResult cert = lhv_certificate(state);
        EXPECT_NEAR(cert.eta, rec.eta, 1e-7);
        CertificateCheck check = verify_certificate(cert, state);
        EXPECT_TRUE(check.ok);
        EXPECT_LT(check.decomposition_residual, 1e-7);
    }
}

TEST(run_montecarlo, alpha_spread_is_small_but_nonzero) {
    NoiseModel m;
    m.shots_per_basis = 100000;
    MonteCarloResult r = run_montecarlo(0.65, m, 12, 2);
    EXPECT_GT(r.summary.alpha.std, 0.0);
    EXPECT_LT(r.summary.alpha.std, 0.02);
    EXPECT_NEAR(r.summary.alpha.mean, 0.65, 0.03);
}

TEST(run_montecarlo, rejects_bad_arguments) {
    EXPECT_THROW(run_montecarlo(0.5, NoiseModel::noiseless(), 0, 1), std::invalid_argument);
    EXPECT_THROW(run_montecarlo(1.5, NoiseModel::noiseless(), 1, 1), std::invalid_argument);
}

TEST(summary_csv, one_simulated_row_and_reference_annotations) {
    MonteCarloResult r = run_montecarlo(0.637, NoiseModel::noiseless(), 1, 1);
    std::string csv = summary_csv(0.637, r.summary);
    std::istringstream in(csv);
    std::string line;
    std::vector<std::string> lines;
    while (std::getline(in, line)) {
        lines.push_back(line);
    }
    ASSERT_EQ(lines.size(), 8u);
    EXPECT_EQ(lines[0].substr(0, 18), "row,kind,trials,ta");
    EXPECT_EQ(lines[1].substr(0, 14), "sim,simulated,");
    EXPECT_EQ(lines[3].substr(0, 12), "b,reference,");
    EXPECT_NE(lines[3].find("4.24"), std::string::npos);
    EXPECT_NE(lines[3].find("1.014"), std::string::npos);
}

TEST(sweep_alpha, closed_form_rows) {
    const double threshold = 1 / std::sqrt(3.0);
    auto rows = sweep_alpha({kLhvReferenceAlpha, M_SQRT1_2, threshold, 0.0}, 1.0);
    ASSERT_EQ(rows.size(), 4u);
    EXPECT_EQ(rows[0].alpha, 0.0);
    EXPECT_EQ(rows[1].alpha, threshold);
    EXPECT_NEAR(rows[1].I_B, 0.0, 1e-9);
    EXPECT_NEAR(rows[2].eta, 1.0, 1e-3);
    EXPECT_NEAR(rows[3].max_chsh, 2.0, 1e-9);
}

TEST(sweep_alpha, monotone_on_grid) {
    auto rows = sweep_alpha(parse_alpha_range("0:1:0.05"), 1.0);
    ASSERT_EQ(rows.size(), 21u);
    for (std::size_t k = 1; k < rows.size(); k++) {
        EXPECT_GT(rows[k].S, rows[k - 1].S);
        EXPECT_GT(rows[k].max_chsh, rows[k - 1].max_chsh);
        EXPECT_LE(rows[k].eta, rows[k - 1].eta + 1e-7);
    }
}

TEST(parse_alpha_range, inclusive_grid) {
    auto g = parse_alpha_range("0:1:0.05");
    ASSERT_EQ(g.size(), 21u);
    EXPECT_EQ(g.front(), 0.0);
    EXPECT_NEAR(g.back(), 1.0, 1e-15);
    EXPECT_EQ(parse_alpha_range("0.2:0.2:0.1").size(), 1u);
    EXPECT_THROW(parse_alpha_range("0:1"), std::invalid_argument);
    EXPECT_THROW(parse_alpha_range("0:1:0"), std::invalid_argument);
    EXPECT_THROW(parse_alpha_range("a:1:0.1"), std::invalid_argument);
}

TEST(config, defaults_overrides_and_validation) {
    MonteCarloConfig c = config_from_json(json::parse(R"({"target_alpha": 0.5, "trials": 10,
        "noise": {"shots_per_basis": 500, "hom_visibility": 0.9}, "output": {"csv": "a.csv"}})"));
    EXPECT_EQ(c.target_alpha, 0.5);
    EXPECT_EQ(c.trials, 10u);
    EXPECT_EQ(c.noise.shots_per_basis, 500u);
    EXPECT_EQ(c.noise.hom_visibility, 0.9);
    EXPECT_EQ(c.noise.waveplate_angle_sigma, NoiseModel{}.waveplate_angle_sigma);
    EXPECT_EQ(c.csv_path, "a.csv");
    EXPECT_EQ(c.jsonl_path, MonteCarloConfig{}.jsonl_path);

    MonteCarloConfig back = config_from_json(config_to_json(c));
    EXPECT_EQ(config_to_json(back), config_to_json(c));

    EXPECT_THROW(config_from_json(json::parse(R"({"trails": 3})")), std::invalid_argument);
    EXPECT_THROW(config_from_json(json::parse(R"({"noise": {"shots": 3}})")), std::invalid_argument);
    EXPECT_THROW(config_from_json(json::parse(R"({"trials": 0})")), std::invalid_argument);
    EXPECT_THROW(config_from_json(json::parse(R"({"trials": -2})")), std::invalid_argument);
    EXPECT_THROW(config_from_json(json::parse(R"({"noise": {"repeatability_sigma": -1}})")),
                 std::invalid_argument);
    EXPECT_THROW(config_from_json(json::parse(R"([1, 2])")), std::invalid_argument);
}

TEST(serialize, state_round_trip_is_exact) {
    std::mt19937_64 rng(3);
    std::vector<std::size_t> dims{2, 2};
    DensityMatrix rho(random_density(4, rng), dims);
    DensityMatrix back = state_from_json(json::parse(state_to_json(rho).dump()));
    EXPECT_EQ(back.matrix(), rho.matrix());
    EXPECT_EQ(back.dims(), rho.dims());
}

TEST(serialize, state_without_imaginary_part) {
    json j = json::parse(R"({"dims": [2], "re": [0.75, 0, 0, 0.25]})");
    DensityMatrix rho = state_from_json(j);
    EXPECT_EQ(rho.matrix()(0, 0), cplx(0.75));
    EXPECT_THROW(state_from_json(json::parse(R"({"dims": [2], "re": [1, 0, 0]})")), std::invalid_argument);
    EXPECT_THROW(state_from_json(json::parse(R"({"re": [1]})")), std::invalid_argument);
    EXPECT_THROW(state_from_json(json::parse(R"({"dims": [2], "re": [0.5, 0, 0, 0.6]})")), std::invalid_argument);
}

TEST(serialize, behavior_round_trip) {
    Behavior exact = born_behavior(broadcast_state(0.7), table1_settings());
    Behavior back = behavior_from_json(json::parse(behavior_to_json(exact).dump()));
    EXPECT_EQ(back.probabilities(), exact.probabilities());
    EXPECT_FALSE(back.is_count_derived());

    std::mt19937_64 rng(1);
    Behavior counted = behavior_from_counts(sample_counts(exact, 100, rng));
    Behavior counted_back = behavior_from_json(json::parse(behavior_to_json(counted).dump()));
    EXPECT_TRUE(counted_back.is_count_derived());
    EXPECT_EQ(counted_back.counts(), counted.counts());
}
