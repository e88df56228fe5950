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

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <exception>
#include <mutex>
#include <ostream>
#include <random>
#include <sstream>
#include <thread>

#include "nlact/bipartite.h"
#include "nlact/broadcast.h"

namespace nlact {

namespace {

constexpr double kDegree = M_PI / 180.0;

// Draws from N(0, sigma²); a zero sigma yields exactly zero without touching
// the generator's distribution state.
double gaussian(std::mt19937_64 &rng, double sigma) {
    if (sigma == 0) {
        return 0;
    }
    return std::normal_distribution<double>(0.0, sigma)(rng);
}

// Wave plate with fast axis at angle θ and retardance δ.
CMatrix waveplate(double theta, double delta) {
    const double c = std::cos(theta);
    const double s = std::sin(theta);
    CMatrix r{{c, -s}, {s, c}};
    CMatrix d{{1, 0}, {0, std::polar(1.0, delta)}};
    return r * d * r.transpose();
}

// Calibration of one analysis arm: angle offsets and retardance errors of the
// quarter- and half-wave plate.
struct ArmCalibration {
    double qwp_offset = 0;
    double hwp_offset = 0;
    double qwp_retardance = 0;
    double hwp_retardance = 0;
};

ArmCalibration draw_calibration(const NoiseModel &m, std::mt19937_64 &rng) {
    ArmCalibration a;
    a.qwp_offset = gaussian(rng, m.waveplate_angle_sigma);
    a.hwp_offset = gaussian(rng, m.waveplate_angle_sigma);
    a.qwp_retardance = gaussian(rng, m.waveplate_retardance_sigma);
    a.hwp_retardance = gaussian(rng, m.waveplate_retardance_sigma);
    return a;
}

// Projectors of one arm set to `basis`, including repeatability jitter.
std::array<CMatrix, 2> arm_projectors(PauliBasis basis, const ArmCalibration &cal, const NoiseModel &m,
                                      std::mt19937_64 &rng) {
    auto nominal = waveplate_setting(basis);
    double q = nominal[0] + cal.qwp_offset + gaussian(rng, m.repeatability_sigma);
    double h = nominal[1] + cal.hwp_offset + gaussian(rng, m.repeatability_sigma);
    return {waveplate_projector(q, h, cal.qwp_retardance, cal.hwp_retardance, 0),
            waveplate_projector(q, h, cal.qwp_retardance, cal.hwp_retardance, 1)};
}

std::string format6(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.6g", v);
    return buf;
}

ColumnSummary column(const std::vector<TrialRecord> &records, double TrialRecord::*field) {
    // Shifted by the first value so that identical columns give exactly
    // that value and a zero spread.
    ColumnSummary c;
    const double n = static_cast<double>(records.size());
    const double shift = records.front().*field;
    double sum = 0;
    for (const auto &r : records) {
        sum += r.*field - shift;
    }
    c.mean = shift + sum / n;
    if (records.size() > 1) {
        double ss = 0;
        for (const auto &r : records) {
            double d = r.*field - c.mean;
            ss += d * d;
        }
        c.std = std::sqrt(ss / (n - 1));
    }
    return c;
}

// Published values (mean, uncertainty) of the six experimental states.
struct ReferenceRow {
    const char *label;
    double alpha, alpha_err, fidelity, fidelity_err, S, S_err, eta, eta_err;
};

constexpr std::array<ReferenceRow, 6> kReferenceRows{{
    {"a", 0.423, 0.003, 0.9974, 0.0004, 2.84, 0.15, 1.49, 0.02},
    {"b", 0.637, 0.004, 0.995, 0.003, 4.24, 0.09, 1.014, 0.007},
    {"c", 0.661, 0.003, 0.997, 0.002, 4.27, 0.11, 0.997, 0.006},
    {"d", 0.675, 0.004, 0.997, 0.003, 4.34, 0.15, 0.972, 0.006},
    {"e", 0.726, 0.008, 0.993, 0.003, 4.83, 0.18, 0.89, 0.01},
    {"f", 0.862, 0.008, 0.991, 0.006, 5.69, 0.19, 0.775, 0.006},
}};

}  // namespace

NoiseModel NoiseModel::noiseless() {
    NoiseModel m;
    m.shots_per_basis = 0;
    m.waveplate_angle_sigma = 0;
    m.waveplate_retardance_sigma = 0;
    m.repeatability_sigma = 0;
    m.hom_visibility = 1;
    m.hom_visibility_sigma = 0;
    m.broadcast_counts_per_setting = 0;
    return m;
}

void NoiseModel::validate() const {
    auto sigma = [](double v, const char *name) {
        if (!(v >= 0) || !std::isfinite(v)) {
            throw std::invalid_argument(std::string("noise model: ") + name + " must be a finite value ≥ 0");
        }
    };
    sigma(waveplate_angle_sigma, "waveplate_angle_sigma");
    sigma(waveplate_retardance_sigma, "waveplate_retardance_sigma");
    sigma(repeatability_sigma, "repeatability_sigma");
    sigma(hom_visibility_sigma, "hom_visibility_sigma");
    if (!(hom_visibility >= 0 && hom_visibility <= 1)) {
        throw std::invalid_argument("noise model: hom_visibility must lie in [0, 1]");
    }
}

std::uint64_t trial_seed(std::uint64_t master_seed, std::size_t trial) {
    std::uint64_t z = master_seed + (static_cast<std::uint64_t>(trial) + 1) * 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

std::array<double, 2> waveplate_setting(PauliBasis basis) {
    switch (basis) {
        case PauliBasis::X:
            return {45.0, 22.5};
        case PauliBasis::Y:
            return {0.0, -22.5};
        case PauliBasis::Z:
            return {0.0, 0.0};
    }
    throw std::invalid_argument("waveplate_setting: unknown basis");
}

CMatrix waveplate_projector(double q_deg, double h_deg, double qwp_retardance_error, double hwp_retardance_error,
                            std::size_t outcome) {
    if (outcome > 1) {
        throw std::invalid_argument("waveplate_projector: outcome must be 0 or 1");
    }
    CMatrix u = waveplate(h_deg * kDegree, M_PI + hwp_retardance_error) *
                waveplate(q_deg * kDegree, M_PI / 2 + qwp_retardance_error);
    // Analysed state U†|H⟩ or U†|V⟩.
    CMatrix v(2, 1);
    v(0, 0) = std::conj(u(outcome, 0));
    v(1, 0) = std::conj(u(outcome, 1));
    return v * v.adjoint();
}

TrialRecord run_trial(double target_alpha, const NoiseModel &model, std::size_t trial, std::uint64_t master_seed) {
    TrialRecord rec;
    rec.trial = trial;
    rec.seed = trial_seed(master_seed, trial);
    std::mt19937_64 rng(rec.seed);

    std::array<ArmCalibration, 2> cal{draw_calibration(model, rng), draw_calibration(model, rng)};
    double v = model.hom_visibility + gaussian(rng, model.hom_visibility_sigma);
    rec.visibility = std::clamp(v, 0.0, 1.0);

    // Tomography with miscalibrated analysers, reconstructed as if ideal.
    std::vector<std::array<CMatrix, 4>> actual;
    for (const auto &s : pauli_settings()) {
        auto first = arm_projectors(s.bases[0], cal[0], model, rng);
        auto second = arm_projectors(s.bases[1], cal[1], model, rng);
        std::array<CMatrix, 4> p;
        for (std::size_t a = 0; a < 2; a++) {
            for (std::size_t b = 0; b < 2; b++) {
                p[2 * a + b] = kron(first[a], second[b]);
            }
        }
        actual.push_back(std::move(p));
    }
    const DensityMatrix target = isotropic_state(target_alpha);
    MeasurementRecord data = simulate_tomography(target, model.shots_per_basis, actual, rng);
    MleResult mle = mle_iterate(data);
    rec.mle_iterations = mle.iterations;
    rec.state = mle_reconstruct(data);

    AlphaFit fit = best_fit_alpha(rec.state);
    rec.alpha = fit.alpha;
    rec.fidelity = fit.fidelity;
    rec.max_chsh = horodecki_max_chsh(rec.state);
    CertificateResult cert = lhv_certificate(rec.state);
    rec.eta = cert.eta;
    CertificateCheck check = verify_certificate(cert, rec.state);
    rec.certificate_residual = check.decomposition_residual;
    rec.certificate_ok = check.ok;

    // Broadcast measurement on the prepared state.
    Behavior exact = born_behavior(broadcast_state(target_alpha, rec.visibility), table1_settings());
    Behavior observed = model.broadcast_counts_per_setting == 0
                            ? exact
                            : behavior_from_counts(sample_counts(exact, model.broadcast_counts_per_setting, rng));
    InequalityResult ineq = broadcast_value(observed);
    rec.S = ineq.S;
    rec.I_B = ineq.I_B;
    NsResiduals ns = no_signalling_residuals(observed);
    rec.ns_mean = ns.mean;
    rec.ns_max = ns.max;
    return rec;
}

MonteCarloResult run_montecarlo(double target_alpha, const NoiseModel &model, std::size_t trials,
                                std::uint64_t seed, std::size_t workers) {
    if (trials == 0) {
        throw std::invalid_argument("run_montecarlo: trials must be at least 1");
    }
    if (!(target_alpha >= -1.0 / 3 && target_alpha <= 1)) {
        throw std::invalid_argument("run_montecarlo: target_alpha must lie in [-1/3, 1]");
    }
    model.validate();
    if (workers == 0) {
        workers = std::max(1u, std::thread::hardware_concurrency());
    }
    workers = std::min(workers, trials);

    std::vector<std::optional<TrialRecord>> slots(trials);
    std::atomic<std::size_t> next{0};
    std::atomic<bool> failed{false};
    std::exception_ptr first_error;
    std::size_t first_error_trial = trials;
    std::mutex error_mutex;

    auto work = [&] {
        for (;;) {
            std::size_t i = next.fetch_add(1);
            if (i >= trials || failed.load()) {
                return;
            }
            try {
                slots[i] = run_trial(target_alpha, model, i, seed);
            } catch (const SolverError &e) {
                std::lock_guard<std::mutex> lock(error_mutex);
                failed = true;
                if (i < first_error_trial) {
                    first_error_trial = i;
                    first_error = std::make_exception_ptr(TrialError(i, true, e.what()));
                }
            } catch (const std::exception &e) {
                std::lock_guard<std::mutex> lock(error_mutex);
                failed = true;
                if (i < first_error_trial) {
                    first_error_trial = i;
                    first_error = std::make_exception_ptr(TrialError(i, false, e.what()));
                }
            }
        }
    };
    if (workers == 1) {
        work();
    } else {
        std::vector<std::thread> pool;
        for (std::size_t w = 0; w < workers; w++) {
            pool.emplace_back(work);
        }
        for (auto &t : pool) {
            t.join();
        }
    }
    if (first_error) {
        std::rethrow_exception(first_error);
    }

    MonteCarloResult result;
    result.records.reserve(trials);
    for (auto &s : slots) {
        result.records.push_back(std::move(*s));
    }
    result.summary = summarize(result.records);
    return result;
}

MonteCarloSummary summarize(const std::vector<TrialRecord> &records) {
    if (records.empty()) {
        throw std::invalid_argument("summarize: no records");
    }
    MonteCarloSummary s;
    s.trials = records.size();
    s.alpha = column(records, &TrialRecord::alpha);
    s.fidelity = column(records, &TrialRecord::fidelity);
    s.S = column(records, &TrialRecord::S);
    s.I_B = column(records, &TrialRecord::I_B);
    s.eta = column(records, &TrialRecord::eta);
    s.max_chsh = column(records, &TrialRecord::max_chsh);
    s.ns_mean = column(records, &TrialRecord::ns_mean);
    std::size_t local = 0;
    for (const auto &r : records) {
        local += r.eta >= 1 ? 1 : 0;
    }
    s.eta_at_least_one = static_cast<double>(local) / static_cast<double>(records.size());
    return s;
}

std::vector<SweepRow> sweep_alpha(std::vector<double> alphas, double visibility, const SdpOptions &opts) {
    for (double a : alphas) {
        if (!(a >= 0 && a <= 1)) {
            throw std::invalid_argument("sweep_alpha: α values must lie in [0, 1]");
        }
    }
    if (!(visibility >= 0 && visibility <= 1)) {
        throw std::invalid_argument("sweep_alpha: visibility must lie in [0, 1]");
    }
    std::sort(alphas.begin(), alphas.end());
    std::vector<SweepRow> rows;
    rows.reserve(alphas.size());
    for (double a : alphas) {
        SweepRow r;
        r.alpha = a;
        r.S = ideal_curve(a, visibility);
        r.I_B = r.S - kBroadcastLocalBound;
        DensityMatrix w = isotropic_state(a);
        r.eta = lhv_certificate(w, opts).eta;
        r.max_chsh = horodecki_max_chsh(w);
        rows.push_back(r);
    }
    return rows;
}

std::vector<double> parse_alpha_range(const std::string &range) {
    std::vector<double> parts;
    std::stringstream ss(range);
    std::string item;
    while (std::getline(ss, item, ':')) {
        try {
            std::size_t used = 0;
            parts.push_back(std::stod(item, &used));
            if (used != item.size()) {
                throw std::invalid_argument("trailing characters");
            }
        } catch (const std::exception &) {
            throw std::invalid_argument("α range '" + range + "': bad number '" + item + "'");
        }
    }
    if (parts.size() != 3) {
        throw std::invalid_argument("α range '" + range + "': expected start:stop:step");
    }
    const double start = parts[0], stop = parts[1], step = parts[2];
    if (!(step > 0) || !(stop >= start)) {
        throw std::invalid_argument("α range '" + range + "': need step > 0 and stop ≥ start");
    }
    const auto n = static_cast<std::size_t>(std::floor((stop - start) / step + 1e-9));
    std::vector<double> out;
    for (std::size_t k = 0; k <= n; k++) {
        out.push_back(std::min(start + static_cast<double>(k) * step, stop));
    }
    return out;
}

MonteCarloConfig config_from_json(const json &j) {
    if (!j.is_object()) {
        throw std::invalid_argument("config: expected a JSON object");
    }
    auto reject_unknown = [](const json &obj, std::initializer_list<const char *> known, const std::string &where) {
        for (auto it = obj.begin(); it != obj.end(); ++it) {
            if (std::none_of(known.begin(), known.end(), [&](const char *k) { return it.key() == k; })) {
                throw std::invalid_argument("config: unknown field '" + where + it.key() + "'");
            }
        }
    };
    reject_unknown(j, {"target_alpha", "trials", "seed", "workers", "noise", "output"}, "");
    auto get_number = [](const json &obj, const char *name, double &out) {
        if (obj.contains(name)) {
            if (!obj[name].is_number()) {
                throw std::invalid_argument(std::string("config: '") + name + "' must be a number");
            }
            out = obj[name].get<double>();
        }
    };
    auto get_count = [](const json &obj, const char *name, auto &out) {
        if (obj.contains(name)) {
            if (!obj[name].is_number_unsigned()) {
                throw std::invalid_argument(std::string("config: '") + name + "' must be a nonnegative integer");
            }
            out = obj[name].get<std::remove_reference_t<decltype(out)>>();
        }
    };
    MonteCarloConfig c;
    get_number(j, "target_alpha", c.target_alpha);
    get_count(j, "trials", c.trials);
    get_count(j, "seed", c.seed);
    get_count(j, "workers", c.workers);
    if (j.contains("noise")) {
        const json &n = j["noise"];
        if (!n.is_object()) {
            throw std::invalid_argument("config: 'noise' must be an object");
        }
        reject_unknown(n,
                       {"shots_per_basis", "waveplate_angle_sigma", "waveplate_retardance_sigma",
                        "repeatability_sigma", "hom_visibility", "hom_visibility_sigma",
                        "broadcast_counts_per_setting"},
                       "noise.");
        get_count(n, "shots_per_basis", c.noise.shots_per_basis);
        get_number(n, "waveplate_angle_sigma", c.noise.waveplate_angle_sigma);
        get_number(n, "waveplate_retardance_sigma", c.noise.waveplate_retardance_sigma);
        get_number(n, "repeatability_sigma", c.noise.repeatability_sigma);
        get_number(n, "hom_visibility", c.noise.hom_visibility);
        get_number(n, "hom_visibility_sigma", c.noise.hom_visibility_sigma);
        get_count(n, "broadcast_counts_per_setting", c.noise.broadcast_counts_per_setting);
    }
    if (j.contains("output")) {
        const json &o = j["output"];
        if (!o.is_object()) {
            throw std::invalid_argument("config: 'output' must be an object");
        }
        reject_unknown(o, {"csv", "jsonl"}, "output.");
        for (auto [name, dest] : {std::pair{"csv", &c.csv_path}, std::pair{"jsonl", &c.jsonl_path}}) {
            if (o.contains(name)) {
                if (!o[name].is_string()) {
                    throw std::invalid_argument(std::string("config: 'output.") + name + "' must be a string");
                }
                *dest = o[name].get<std::string>();
            }
        }
    }
    if (c.trials == 0) {
        throw std::invalid_argument("config: trials must be at least 1");
    }
    if (!(c.target_alpha >= -1.0 / 3 && c.target_alpha <= 1)) {
        throw std::invalid_argument("config: target_alpha must lie in [-1/3, 1]");
    }
    c.noise.validate();
    return c;
}

json config_to_json(const MonteCarloConfig &c) {
    return {
        {"target_alpha", c.target_alpha},
        {"trials", c.trials},
        {"seed", c.seed},
        {"workers", c.workers},
        {"noise",
         {
             {"shots_per_basis", c.noise.shots_per_basis},
             {"waveplate_angle_sigma", c.noise.waveplate_angle_sigma},
             {"waveplate_retardance_sigma", c.noise.waveplate_retardance_sigma},
             {"repeatability_sigma", c.noise.repeatability_sigma},
             {"hom_visibility", c.noise.hom_visibility},
             {"hom_visibility_sigma", c.noise.hom_visibility_sigma},
             {"broadcast_counts_per_setting", c.noise.broadcast_counts_per_setting},
         }},
        {"output", {{"csv", c.csv_path}, {"jsonl", c.jsonl_path}}},
    };
}

void write_summary_csv(std::ostream &out, double target_alpha, const MonteCarloSummary &s) {
    out << "row,kind,trials,target_alpha,alpha,alpha_std,fidelity,fidelity_std,S,S_std,I_B,I_B_std,eta,eta_std,"
           "max_chsh,max_chsh_std,ns_mean,ns_mean_std,eta_at_least_one\n";
    auto pair = [](const ColumnSummary &c) { return format6(c.mean) + "," + format6(c.std); };
    out << "sim,simulated," << s.trials << ',' << format6(target_alpha) << ',' << pair(s.alpha) << ','
        << pair(s.fidelity) << ',' << pair(s.S) << ',' << pair(s.I_B) << ',' << pair(s.eta) << ','
        << pair(s.max_chsh) << ',' << pair(s.ns_mean) << ',' << format6(s.eta_at_least_one) << '\n';
    // Published values: annotations for comparison, never used as targets.
    for (const auto &r : kReferenceRows) {
        out << r.label << ",reference,,," << format6(r.alpha) << ',' << format6(r.alpha_err) << ','
            << format6(r.fidelity) << ',' << format6(r.fidelity_err) << ',' << format6(r.S) << ','
            << format6(r.S_err) << ',' << format6(r.S - kBroadcastLocalBound) << ',' << format6(r.S_err) << ','
            << format6(r.eta) << ',' << format6(r.eta_err) << ",,,,,\n";
    }
}

json trial_to_json(const TrialRecord &r) {
    return {
        {"trial", r.trial},
        {"seed", r.seed},
        {"alpha", r.alpha},
        {"fidelity", r.fidelity},
        {"eta", r.eta},
        {"max_chsh", r.max_chsh},
        {"visibility", r.visibility},
        {"S", r.S},
        {"I_B", r.I_B},
        {"ns_mean", r.ns_mean},
        {"ns_max", r.ns_max},
        {"certificate_residual", r.certificate_residual},
        {"certificate_ok", r.certificate_ok},
        {"mle_iterations", r.mle_iterations},
        {"state", state_to_json(r.state)},
    };
}

void write_trials_jsonl(std::ostream &out, const std::vector<TrialRecord> &records) {
    for (const auto &r : records) {
        out << trial_to_json(r).dump() << '\n';
    }
}

void write_sweep_csv(std::ostream &out, const std::vector<SweepRow> &rows) {
    out << "alpha,S,I_B,eta,max_chsh\n";
    for (const auto &r : rows) {
        out << format6(r.alpha) << ',' << format6(r.S) << ',' << format6(r.I_B) << ',' << format6(r.eta) << ','
            << format6(r.max_chsh) << '\n';
    }
}

}  // namespace nlact
