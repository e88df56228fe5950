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

#ifndef NLACT_BEHAVIOR_H
#define NLACT_BEHAVIOR_H

#include <array>
#include <cstddef>
#include <cstdint>
#include <optional>

namespace nlact {

inline constexpr std::size_t kAliceSettings = 3;
inline constexpr std::size_t kBobSettings = 2;
inline constexpr std::size_t kCharlieSettings = 2;
inline constexpr std::size_t kBehaviorSize = kAliceSettings * kBobSettings * kCharlieSettings * 8;

using ProbabilityTable = std::array<double, kBehaviorSize>;
using CountTable = std::array<std::uint64_t, kBehaviorSize>;

/// Tripartite behavior p(a,b,c|x,y,z) with x∈{0,1,2} and binary y, z, a, b,
/// c. Outcome 0 corresponds to the +1 eigenvalue of the measured observable.
///
/// Storage is flat with index ((((x·2+y)·2+z)·2+a)·2+b)·2+c.
class Behavior {
   public:
    /// Validates nonnegativity and per-setting normalization (1e-9).
    explicit Behavior(const ProbabilityTable &p);

    static Behavior uniform();
    /// Normalizes each (x,y,z) cell and attaches Poissonian errors √n/N.
    /// Throws std::invalid_argument on an empty setting cell.
    static Behavior from_counts(const CountTable &counts);

    static constexpr std::size_t index(std::size_t x, std::size_t y, std::size_t z, std::size_t a, std::size_t b,
                                       std::size_t c) {
        return ((((x * 2 + y) * 2 + z) * 2 + a) * 2 + b) * 2 + c;
    }
    static constexpr std::size_t setting_index(std::size_t x, std::size_t y, std::size_t z) {
        return (x * 2 + y) * 2 + z;
    }

    double p(std::size_t x, std::size_t y, std::size_t z, std::size_t a, std::size_t b, std::size_t c) const;
    const ProbabilityTable &probabilities() const {
        return p_;
    }

    bool is_count_derived() const {
        return counts_.has_value();
    }
    const std::optional<CountTable> &counts() const {
        return counts_;
    }
    const std::optional<ProbabilityTable> &standard_errors() const {
        return errors_;
    }
    /// Total events in a setting cell; only meaningful for count-derived
    /// behaviors.
    std::uint64_t setting_total(std::size_t x, std::size_t y, std::size_t z) const;

   private:
    Behavior() = default;

    ProbabilityTable p_{};
    std::optional<CountTable> counts_;
    std::optional<ProbabilityTable> errors_;
};

}  // namespace nlact

#endif
