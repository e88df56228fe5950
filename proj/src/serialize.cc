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

#include "nlact/serialize.h"

#include <cmath>
#include <fstream>
#include <stdexcept>

namespace nlact {

namespace {

const json &field(const json &j, const char *name) {
    if (!j.is_object()) {
        throw std::invalid_argument(std::string("expected a JSON object containing '") + name + "'");
    }
    auto it = j.find(name);
    if (it == j.end()) {
        throw std::invalid_argument(std::string("missing field '") + name + "'");
    }
    return *it;
}

double number(const json &j, const char *name) {
    const json &v = field(j, name);
    if (!v.is_number()) {
        throw std::invalid_argument(std::string("field '") + name + "' must be a number");
    }
    double d = v.get<double>();
    if (!std::isfinite(d)) {
        throw std::invalid_argument(std::string("field '") + name + "' must be finite");
    }
    return d;
}

std::size_t count(const json &j, const char *name) {
    const json &v = field(j, name);
    if (!v.is_number_unsigned() && !(v.is_number_integer() && v.get<long long>() >= 0)) {
        throw std::invalid_argument(std::string("field '") + name + "' must be a nonnegative integer");
    }
    return v.get<std::size_t>();
}

std::vector<double> number_array(const json &v, const char *name, std::size_t expected) {
    if (!v.is_array()) {
        throw std::invalid_argument(std::string("field '") + name + "' must be an array");
    }
    if (v.size() != expected) {
        throw std::invalid_argument(std::string("field '") + name + "' has " + std::to_string(v.size()) +
                                    " entries, expected " + std::to_string(expected));
    }
    std::vector<double> out;
    out.reserve(expected);
    for (const auto &e : v) {
        if (!e.is_number()) {
            throw std::invalid_argument(std::string("field '") + name + "' must contain only numbers");
        }
        double d = e.get<double>();
        if (!std::isfinite(d)) {
            throw std::invalid_argument(std::string("field '") + name + "' contains a non-finite value");
        }
        out.push_back(d);
    }
    return out;
}

void split(const CMatrix &m, json &j) {
    json re = json::array();
    json im = json::array();
    for (const auto &v : m.data()) {
        re.push_back(v.real());
        im.push_back(v.imag());
    }
    j["re"] = std::move(re);
    j["im"] = std::move(im);
}

CMatrix join(const json &j, std::size_t rows, std::size_t cols) {
    std::vector<double> re = number_array(field(j, "re"), "re", rows * cols);
    std::vector<double> im(rows * cols, 0.0);
    if (j.contains("im")) {
        im = number_array(j["im"], "im", rows * cols);
    }
    CMatrix m(rows, cols);
    for (std::size_t k = 0; k < rows * cols; k++) {
        m.data()[k] = cplx(re[k], im[k]);
    }
    return m;
}

}  // namespace

json matrix_to_json(const CMatrix &m) {
    json j;
    j["rows"] = m.rows();
    j["cols"] = m.cols();
    split(m, j);
    return j;
}

CMatrix matrix_from_json(const json &j) {
    return join(j, count(j, "rows"), count(j, "cols"));
}

json state_to_json(const DensityMatrix &rho) {
    json j;
    j["dims"] = rho.dims();
    split(rho.matrix(), j);
    return j;
}

DensityMatrix state_from_json(const json &j) {
    const json &d = field(j, "dims");
    if (!d.is_array() || d.empty()) {
        throw std::invalid_argument("field 'dims' must be a nonempty array");
    }
    std::vector<std::size_t> dims;
    std::size_t n = 1;
    for (const auto &e : d) {
        if (!e.is_number_unsigned() || e.get<std::size_t>() == 0) {
            throw std::invalid_argument("field 'dims' must contain positive integers");
        }
        dims.push_back(e.get<std::size_t>());
        n *= dims.back();
    }
    return DensityMatrix(join(j, n, n), dims);
}

json behavior_to_json(const Behavior &behavior) {
    json j;
    j["settings"] = {kAliceSettings, kBobSettings, kCharlieSettings};
    j["outcomes"] = {2, 2, 2};
    j["order"] = "x,y,z,a,b,c";
    j["p"] = behavior.probabilities();
    if (behavior.counts()) {
        j["counts"] = *behavior.counts();
    }
    return j;
}

Behavior behavior_from_json(const json &j) {
    const json expected_settings = {kAliceSettings, kBobSettings, kCharlieSettings};
    const json expected_outcomes = {2, 2, 2};
    if (field(j, "settings") != expected_settings || field(j, "outcomes") != expected_outcomes) {
        throw std::invalid_argument("behavior: only settings [3,2,2] with binary outcomes are supported");
    }
    if (j.contains("order") && j["order"] != "x,y,z,a,b,c") {
        throw std::invalid_argument("behavior: unsupported index order");
    }
    if (j.contains("counts")) {
        const json &c = j["counts"];
        if (!c.is_array() || c.size() != kBehaviorSize) {
            throw std::invalid_argument("behavior: 'counts' must have " + std::to_string(kBehaviorSize) +
                                        " entries");
        }
        CountTable counts{};
        for (std::size_t k = 0; k < kBehaviorSize; k++) {
            if (!c[k].is_number_unsigned()) {
                throw std::invalid_argument("behavior: 'counts' must contain nonnegative integers");
            }
            counts[k] = c[k].get<std::uint64_t>();
        }
        return Behavior::from_counts(counts);
    }
    std::vector<double> p = number_array(field(j, "p"), "p", kBehaviorSize);
    ProbabilityTable table{};
    std::copy(p.begin(), p.end(), table.begin());
    return Behavior(table);
}

json certificate_to_json(const CertificateResult &cert, const CertificateCheck &check) {
    json j;
    j["eta"] = cert.eta;
    j["q"] = cert.q;
    j["reference_alpha"] = cert.reference_alpha;
    j["j1"] = matrix_to_json(cert.choi.j1);
    j["j2"] = matrix_to_json(cert.choi.j2);
    j["rho_ppt"] = matrix_to_json(cert.rho_ppt);
    j["residuals"] = {
        {"ok", check.ok},
        {"decomposition", check.decomposition_residual},
        {"trace_preservation", check.trace_preservation_residual},
        {"trace", check.trace_residual},
        {"min_eig_j1", check.min_eig_j1},
        {"min_eig_j2", check.min_eig_j2},
        {"min_eig_rho_ppt", check.min_eig_rho_ppt},
        {"min_eig_rho_ppt_pt", check.min_eig_rho_ppt_pt},
    };
    j["solver"] = {
        {"status", cert.solver.status},
        {"iterations", cert.solver.iterations},
        {"duality_gap", cert.solver.duality_gap},
        {"max_residual", cert.solver.max_residual},
        {"dropped_constraints", cert.solver.dropped_constraints},
    };
    return j;
}

CertificateResult certificate_from_json(const json &j) {
    CertificateResult c;
    c.eta = number(j, "eta");
    c.q = number(j, "q");
    c.choi.q = c.q;
    c.reference_alpha = number(j, "reference_alpha");
    c.choi.j1 = matrix_from_json(field(j, "j1"));
    c.choi.j2 = matrix_from_json(field(j, "j2"));
    c.rho_ppt = matrix_from_json(field(j, "rho_ppt"));
    for (const auto *m : {&c.choi.j1, &c.choi.j2, &c.rho_ppt}) {
        if (m->rows() != 4 || m->cols() != 4) {
            throw std::invalid_argument("certificate: J1, J2 and rho_ppt must be 4×4");
        }
    }
    if (j.contains("solver")) {
        const json &s = j["solver"];
        c.solver.status = field(s, "status").get<std::string>();
        c.solver.iterations = count(s, "iterations");
        c.solver.duality_gap = number(s, "duality_gap");
        c.solver.max_residual = number(s, "max_residual");
        c.solver.dropped_constraints = count(s, "dropped_constraints");
    }
    return c;
}

json read_json_file(const std::string &path) {
    std::ifstream in(path);
    if (!in) {
        throw std::invalid_argument("cannot open '" + path + "'");
    }
    try {
        return json::parse(in);
    } catch (const json::exception &e) {
        throw std::invalid_argument("'" + path + "' is not valid JSON: " + e.what());
    }
}

void write_json_file(const std::string &path, const json &j) {
    std::ofstream out(path);
    if (!out) {
        throw std::runtime_error("cannot write '" + path + "'");
    }
    out << j.dump(2) << '\n';
    if (!out) {
        throw std::runtime_error("failed writing '" + path + "'");
    }
}

}  // namespace nlact
