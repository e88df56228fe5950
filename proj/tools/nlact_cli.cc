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

// Command-line front end.
//
// Exit codes: 0 success, 1 validation error (bad arguments, malformed or
// invalid input, failed certificate check), 2 solver failure.

#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "nlact/bipartite.h"
#include "nlact/broadcast.h"
#include "nlact/certify.h"
#include "nlact/harness.h"
#include "nlact/serialize.h"

using namespace nlact;

namespace {

constexpr int kExitValidation = 1;
constexpr int kExitSolver = 2;

// Writes text to `path`, or to stdout when the path is empty or "-".
void emit(const std::string &path, const std::string &text) {
    if (path.empty() || path == "-") {
        std::cout << text;
        return;
    }
    std::ofstream out(path);
    if (!out || !(out << text)) {
        throw std::invalid_argument("cannot write '" + path + "'");
    }
}

std::ofstream open_output(const std::string &path) {
    std::ofstream out(path);
    if (!out) {
        throw std::invalid_argument("cannot write '" + path + "'");
    }
    return out;
}

json witness_report(const DensityMatrix &rho) {
    RMatrix t = correlation_matrix(rho);
    json rows = json::array();
    for (std::size_t i = 0; i < 3; i++) {
        rows.push_back({t(i, 0), t(i, 1), t(i, 2)});
    }
    double chsh = horodecki_max_chsh(rho);
    PptResult ppt = ppt_check(rho);
    return {
        {"max_chsh", chsh},
        {"violates_chsh", violates_chsh(chsh)},
        {"correlation_matrix", rows},
        {"ppt", {{"separable", ppt.separable}, {"min_eigenvalue", ppt.min_eig}}},
    };
}

json broadcast_report(const Behavior &behavior) {
    InequalityResult r = broadcast_value(behavior);
    NsResiduals ns = no_signalling_residuals(behavior);
    json terms = json::array();
    for (const auto &t : r.terms) {
        terms.push_back({{"label", t.label}, {"coefficient", t.coefficient}, {"value", t.value}});
    }
    json j = {
        {"S", r.S},
        {"I_B", r.I_B},
        {"violates", r.I_B > 0},
        {"terms", terms},
        {"pair_terms_z1", r.pair_terms_z1},
        {"no_signalling", {{"bob", ns.bob}, {"charlie", ns.charlie}, {"mean", ns.mean}, {"max", ns.max}}},
    };
    if (r.S_std) {
        j["S_std"] = *r.S_std;
    }
    return j;
}

}  // namespace

int main(int argc, char **argv) {
    CLI::App app{"nlact: nonlocality-activation toolkit"};
    app.require_subcommand(1);

    // sweep
    auto *sweep = app.add_subcommand("sweep", "Noiseless S, I_B, η and max CHSH as functions of α (CSV)");
    std::string sweep_alphas = "0:1:0.05";
    double sweep_visibility = 1.0;
    std::string sweep_out;
    sweep->add_option("--alphas", sweep_alphas, "Grid start:stop:step")->capture_default_str();
    sweep->add_option("--visibility", sweep_visibility, "Interference visibility of the broadcast channel")
        ->capture_default_str();
    sweep->add_option("-o,--out", sweep_out, "Output CSV (default: stdout)");

    // state
    auto *state = app.add_subcommand("state", "Write the isotropic state W_α as JSON");
    double state_alpha = 0;
    std::string state_out;
    state->add_option("--alpha", state_alpha, "Pure-state fraction α")->required();
    state->add_option("-o,--out", state_out, "Output JSON (default: stdout)");

    // certify
    auto *certify = app.add_subcommand("certify", "Compute the η locality certificate of a two-qubit state");
    std::string certify_state, certify_out, certify_sdpa;
    certify->add_option("state", certify_state, "State JSON")->required();
    certify->add_option("-o,--out", certify_out, "Output certificate JSON (default: stdout)");
    certify->add_option("--sdpa", certify_sdpa, "Also write the SDP in SDPA sparse format");

    // witness
    auto *witness = app.add_subcommand("witness", "Horodecki CHSH and PPT report of a two-qubit state");
    std::string witness_state;
    witness->add_option("state", witness_state, "State JSON")->required();

    // broadcast
    auto *broadcast =
        app.add_subcommand("broadcast", "Broadcast inequality and no-signalling residuals of a state or count table");
    std::string broadcast_state_path, broadcast_counts;
    double broadcast_visibility = 1.0;
    broadcast->add_option("state", broadcast_state_path,
                          "Two-qubit state (sent through the broadcast channel) or three-qubit state JSON");
    broadcast->add_option("--counts", broadcast_counts, "Count table CSV (x,y,z,a,b,c,count) instead of a state");
    broadcast->add_option("--visibility", broadcast_visibility, "Channel visibility for two-qubit input")
        ->capture_default_str();

    // montecarlo
    auto *montecarlo = app.add_subcommand("montecarlo", "Monte Carlo error analysis (summary CSV + per-trial JSONL)");
    std::string mc_config;
    std::optional<std::size_t> mc_workers;
    montecarlo->add_option("config", mc_config, "Configuration JSON")->required();
    montecarlo->add_option("--workers", mc_workers, "Override the worker count");

    // robustness
    auto *robustness =
        app.add_subcommand("robustness", "White-noise joint-measurability robustness of the effective POVMs");

    // verify
    auto *verify_cmd = app.add_subcommand("verify", "Re-check a certificate against a state without re-solving");
    std::string verify_cert, verify_state;
    verify_cmd->add_option("certificate", verify_cert, "Certificate JSON")->required();
    verify_cmd->add_option("state", verify_state, "State JSON")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError &e) {
        int code = app.exit(e);
        return code == 0 ? 0 : kExitValidation;
    }

    try {
        if (*sweep) {
            auto rows = sweep_alpha(parse_alpha_range(sweep_alphas), sweep_visibility);
            std::ostringstream out;
            write_sweep_csv(out, rows);
            emit(sweep_out, out.str());
        } else if (*state) {
            emit(state_out, state_to_json(isotropic_state(state_alpha)).dump(2) + "\n");
        } else if (*certify) {
            DensityMatrix rho = state_from_json(read_json_file(certify_state));
            if (!certify_sdpa.empty()) {
                std::ofstream out = open_output(certify_sdpa);
                write_sdpa(out, lhv_certificate_problem(rho));
            }
            CertificateResult cert = lhv_certificate(rho);
            CertificateCheck check = verify_certificate(cert, rho);
            emit(certify_out, certificate_to_json(cert, check).dump(2) + "\n");
            if (!check.ok) {
                for (const auto &issue : check.issues) {
                    std::cerr << "certificate check: " << issue << '\n';
                }
                return kExitSolver;
            }
        } else if (*witness) {
            std::cout << witness_report(state_from_json(read_json_file(witness_state))).dump(2) << '\n';
        } else if (*broadcast) {
            if (broadcast_state_path.empty() == broadcast_counts.empty()) {
                throw std::invalid_argument("broadcast: give exactly one of a state file or --counts");
            }
            Behavior behavior = Behavior::uniform();
            if (!broadcast_counts.empty()) {
                std::ifstream in(broadcast_counts);
                if (!in) {
                    throw std::invalid_argument("cannot open '" + broadcast_counts + "'");
                }
                behavior = behavior_from_counts(read_counts_csv(in));
            } else {
                DensityMatrix rho = state_from_json(read_json_file(broadcast_state_path));
                Isometry v = broadcast_isometry();
                if (rho.dim() == 4) {
                    rho = degrade_visibility(apply_isometry_second(rho, v), v, broadcast_visibility);
                } else if (rho.dim() != 8) {
                    throw std::invalid_argument("broadcast: expected a two- or three-qubit state");
                }
                behavior = born_behavior(rho, table1_settings());
            }
            std::cout << broadcast_report(behavior).dump(2) << '\n';
        } else if (*montecarlo) {
            MonteCarloConfig cfg = config_from_json(read_json_file(mc_config));
            if (mc_workers) {
                cfg.workers = *mc_workers;
            }
            MonteCarloResult result = run_montecarlo(cfg.target_alpha, cfg.noise, cfg.trials, cfg.seed, cfg.workers);
            {
                std::ofstream csv = open_output(cfg.csv_path);
                write_summary_csv(csv, cfg.target_alpha, result.summary);
            }
            {
                std::ofstream jsonl = open_output(cfg.jsonl_path);
                write_trials_jsonl(jsonl, result.records);
            }
            std::ostringstream summary;
            write_summary_csv(summary, cfg.target_alpha, result.summary);
            std::cout << summary.str();
        } else if (*robustness) {
            auto povms = effective_povms(broadcast_isometry(), table1_settings());
            std::cout << json{{"robustness", povm_noise_robustness(povms)}}.dump(2) << '\n';
        } else if (*verify_cmd) {
            CertificateResult cert = certificate_from_json(read_json_file(verify_cert));
            DensityMatrix rho = state_from_json(read_json_file(verify_state));
            CertificateCheck check = verify_certificate(cert, rho);
            json report = certificate_to_json(cert, check)["residuals"];
            report["eta"] = cert.eta;
            report["issues"] = check.issues;
            std::cout << report.dump(2) << '\n';
            return check.ok ? 0 : kExitValidation;
        }
    } catch (const SolverError &e) {
        std::cerr << "solver failure: " << e.what() << '\n';
        return kExitSolver;
    } catch (const TrialError &e) {
        std::cerr << (e.solver_failure() ? "solver failure: " : "error: ") << e.what() << '\n';
        return e.solver_failure() ? kExitSolver : kExitValidation;
    } catch (const json::exception &e) {
        std::cerr << "error: malformed JSON: " << e.what() << '\n';
        return kExitValidation;
    } catch (const std::exception &e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitValidation;
    }
    return 0;
}
