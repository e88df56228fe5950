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

// Monte Carlo error propagation and parameter sweeps.
//
// One Monte Carlo trial simulates a complete experiment on W_α:
//   1. draw a calibration of the tomography wave plates (angle offsets and
//      retardance errors, fixed for the trial) and an interference
//      visibility for the broadcast channel;
//   2. set each of the 9 Pauli settings with additional repeatability jitter
//      and draw multinomial counts from the resulting (miscalibrated)
//      projectors;
//   3. reconstruct the state by maximum likelihood, assuming nominal
//      projectors, and evaluate α fit, fidelity, η certificate and maximal
//      CHSH value on the reconstruction;
//   4. send W_α through the broadcast channel at the drawn visibility, draw
//      fourfold counts for the 12 broadcast settings and evaluate S, I_B and
//      the no-signalling residuals from the counts.

#ifndef NLACT_HARNESS_H
#define NLACT_HARNESS_H

#include <array>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "nlact/certify.h"
#include "nlact/quantum.h"
#include "nlact/serialize.h"
#include "nlact/tomography.h"

namespace nlact {

struct NoiseModel {
    /// Events per tomography setting; 0 uses exact probabilities.
    std::uint64_t shots_per_basis = 10000;
    /// Per-trial calibration offset of every wave-plate angle (degrees).
    double waveplate_angle_sigma = 0.1;
    /// Per-trial retardance error of every wave plate (radians).
    double waveplate_retardance_sigma = 0.005;
    /// Additional jitter each time a wave plate is moved to a setting
    /// (degrees).
    double repeatability_sigma = 0.05;
    /// Two-photon interference visibility of the broadcast channel, drawn per
    /// trial from N(mean, sigma²) and clipped to [0, 1].
    double hom_visibility = 0.97;
    double hom_visibility_sigma = 0.03;
    /// Fourfold events per broadcast setting (x,y,z); 0 uses exact
    /// probabilities.
    std::uint64_t broadcast_counts_per_setting = 817;

    /// No systematics, exact probabilities and ideal visibility.
    static NoiseModel noiseless();
    /// Throws std::invalid_argument on negative sigmas or a visibility
    /// outside [0, 1].
    void validate() const;
};

struct TrialRecord {
    std::size_t trial = 0;
    std::uint64_t seed = 0;
    DensityMatrix state = maximally_mixed_state(std::vector<std::size_t>{2, 2});
    double alpha = 0;
    double fidelity = 0;
    double eta = 0;
    double max_chsh = 0;
    double visibility = 0;
    double S = 0;
    double I_B = 0;
    double ns_mean = 0;
    double ns_max = 0;
    /// Decomposition residual of the η certificate, re-checked on the
    /// reconstructed state.
    double certificate_residual = 0;
    bool certificate_ok = false;
    std::size_t mle_iterations = 0;
};

struct ColumnSummary {
    double mean = 0;
    /// Sample standard deviation (zero for a single trial).
    double std = 0;
};

struct MonteCarloSummary {
    std::size_t trials = 0;
    ColumnSummary alpha, fidelity, S, I_B, eta, max_chsh, ns_mean;
    /// Fraction of trials with η ≥ 1.
    double eta_at_least_one = 0;
};

struct MonteCarloResult {
    std::vector<TrialRecord> records;
    MonteCarloSummary summary;
};

/// Failure of one trial; `solver_failure` distinguishes SDP failures from
/// other errors.
class TrialError : public std::runtime_error {
   public:
    TrialError(std::size_t trial, bool solver_failure, const std::string &what)
        : std::runtime_error("trial " + std::to_string(trial) + ": " + what),
          trial_(trial),
          solver_failure_(solver_failure) {
    }
    std::size_t trial() const {
        return trial_;
    }
    bool solver_failure() const {
        return solver_failure_;
    }

   private:
    std::size_t trial_;
    bool solver_failure_;
};

/// Counter-based seed for trial i: SplitMix64 of the master seed advanced i+1
/// steps. Independent of execution order and worker count.
std::uint64_t trial_seed(std::uint64_t master_seed, std::size_t trial);

/// Nominal (quarter-wave, half-wave) plate angles in degrees that turn the
/// given Pauli eigenbasis into the H/V basis of a polarizing beam splitter.
std::array<double, 2> waveplate_setting(PauliBasis basis);

/// Projector onto the transmitted (H) port after a quarter-wave plate at
/// angle q followed by a half-wave plate at angle h (degrees), with the given
/// retardance errors (radians); outcome 1 is the reflected (V) port.
CMatrix waveplate_projector(double q_deg, double h_deg, double qwp_retardance_error, double hwp_retardance_error,
                            std::size_t outcome);

TrialRecord run_trial(double target_alpha, const NoiseModel &model, std::size_t trial, std::uint64_t master_seed);

/// Runs `trials` independent trials on `workers` threads (0 = hardware
/// concurrency). Records are returned in trial order; the result does not
/// depend on the worker count.
MonteCarloResult run_montecarlo(double target_alpha, const NoiseModel &model, std::size_t trials,
                                std::uint64_t seed, std::size_t workers = 1);

MonteCarloSummary summarize(const std::vector<TrialRecord> &records);

struct SweepRow {
    double alpha;
    double S;
    double I_B;
    double eta;
    double max_chsh;
};

/// Noiseless pipeline per α (sorted ascending): S and I_B at the given
/// visibility, η of W_α and its maximal CHSH value.
std::vector<SweepRow> sweep_alpha(std::vector<double> alphas, double visibility, const SdpOptions &opts = {});

/// Parses "start:stop:step" into an inclusive grid (the endpoint is included
/// when it lies within step·1e-9 of the grid).
std::vector<double> parse_alpha_range(const std::string &range);

struct MonteCarloConfig {
    double target_alpha = 0.637;
    std::size_t trials = 2000;
    std::uint64_t seed = 1;
    std::size_t workers = 1;
    NoiseModel noise;
    std::string csv_path = "montecarlo.csv";
    std::string jsonl_path = "montecarlo.jsonl";
};

/// Fields: target_alpha, trials, seed, workers, noise {shots_per_basis,
/// waveplate_angle_sigma, waveplate_retardance_sigma, repeatability_sigma,
/// hom_visibility, hom_visibility_sigma, broadcast_counts_per_setting},
/// output {csv, jsonl}. Omitted fields take the defaults above; unknown
/// fields are rejected.
MonteCarloConfig config_from_json(const json &j);
json config_to_json(const MonteCarloConfig &config);

/// Summary table with one simulated row followed by reference rows from the
/// published experiment (annotations only). Six significant digits.
void write_summary_csv(std::ostream &out, double target_alpha, const MonteCarloSummary &summary);

/// One JSON object per trial, 17 significant digits.
void write_trials_jsonl(std::ostream &out, const std::vector<TrialRecord> &records);
json trial_to_json(const TrialRecord &record);

void write_sweep_csv(std::ostream &out, const std::vector<SweepRow> &rows);

}  // namespace nlact

#endif
