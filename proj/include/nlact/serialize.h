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

// JSON encodings of states, behaviors and certificates.
//
// Numbers are written with the shortest representation that reads back to
// the identical double (at most 17 significant digits), so every encoded
// value round-trips exactly. Decoders throw std::invalid_argument with a
// description of the offending field.

#ifndef NLACT_SERIALIZE_H
#define NLACT_SERIALIZE_H

#include <string>

#include "json.hpp"
#include "nlact/behavior.h"
#include "nlact/certify.h"
#include "nlact/quantum.h"

namespace nlact {

using json = nlohmann::json;

/// {"rows": r, "cols": c, "re": [...], "im": [...]} with row-major entries.
/// "im" may be omitted on input (all zeros).
json matrix_to_json(const CMatrix &m);
CMatrix matrix_from_json(const json &j);

/// {"dims": [...], "re": [...], "im": [...]} with row-major entries; "im"
/// may be omitted on input.
json state_to_json(const DensityMatrix &rho);
DensityMatrix state_from_json(const json &j);

/// {"settings": [3,2,2], "outcomes": [2,2,2], "order": "x,y,z,a,b,c",
///  "p": [...], "counts": [...]?}. Counts are present only for count-derived
/// behaviors, and are authoritative on input when present.
json behavior_to_json(const Behavior &behavior);
Behavior behavior_from_json(const json &j);

/// Certificate with η, q, Choi matrices, ρ̃_ppt, solver diagnostics and the
/// residuals of an independent re-check against `rho_exp`.
json certificate_to_json(const CertificateResult &cert, const CertificateCheck &check);
CertificateResult certificate_from_json(const json &j);

/// Reads and parses a JSON file; throws std::invalid_argument if the file
/// cannot be opened or parsed.
json read_json_file(const std::string &path);
void write_json_file(const std::string &path, const json &j);

}  // namespace nlact

#endif
