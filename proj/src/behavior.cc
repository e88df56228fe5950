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

#include "nlact/behavior.h"

#include <cmath>
#include <stdexcept>
#include <string>

namespace nlact {

namespace {

void check_indices(std::size_t x, std::size_t y, std::size_t z) {
    if (x >= kAliceSettings || y >= kBobSettings || z >= kCharlieSettings) {
        throw std::invalid_argument("behavior setting index out of range");
    }
}

}  // namespace

Behavior::Behavior(const ProbabilityTable &p) : p_(p) {
    for (std::size_t s = 0; s < kBehaviorSize / 8; s++) {
        double total = 0;
        for (std::size_t o = 0; o < 8; o++) {
            double v = p_[s * 8 + o];
            if (!(v >= 0) || !std::isfinite(v)) {
                throw std::invalid_argument("behavior entry " + std::to_string(s * 8 + o) + " is negative or not finite");
            }
            total += v;
        }
        if (std::abs(total - 1) > 1e-9) {
            throw std::invalid_argument(
                "behavior setting cell " + std::to_string(s) + " sums to " + std::to_string(total));
        }
    }
}

Behavior Behavior::uniform() {
    ProbabilityTable p;
    p.fill(1.0 / 8);
    return Behavior(p);
}

Behavior Behavior::from_counts(const CountTable &counts) {
    Behavior b;
    ProbabilityTable err{};
    for (std::size_t s = 0; s < kBehaviorSize / 8; s++) {
        std::uint64_t total = 0;
        for (std::size_t o = 0; o < 8; o++) {
            total += counts[s * 8 + o];
        }
        if (total == 0) {
            throw std::invalid_argument("counts: setting cell " + std::to_string(s) + " has no events");
        }
        double n = static_cast<double>(total);
        for (std::size_t o = 0; o < 8; o++) {
            double c = static_cast<double>(counts[s * 8 + o]);
            b.p_[s * 8 + o] = c / n;
            err[s * 8 + o] = std::sqrt(c) / n;
        }
    }
    b.counts_ = counts;
    b.errors_ = err;
    return b;
}

double Behavior::p(std::size_t x, std::size_t y, std::size_t z, std::size_t a, std::size_t b, std::size_t c) const {
    check_indices(x, y, z);
    if (a > 1 || b > 1 || c > 1) {
        throw std::invalid_argument("behavior outcome index out of range");
    }
    return p_[index(x, y, z, a, b, c)];
}

std::uint64_t Behavior::setting_total(std::size_t x, std::size_t y, std::size_t z) const {
    check_indices(x, y, z);
    if (!counts_) {
        return 0;
    }
    std::uint64_t total = 0;
    std::size_t base = setting_index(x, y, z) * 8;
    for (std::size_t o = 0; o < 8; o++) {
        total += (*counts_)[base + o];
    }
    return total;
}

}  // namespace nlact
