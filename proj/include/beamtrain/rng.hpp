// SPDX-License-Identifier: Apache-2.0
//
// beamtrain - near-field beam training and sparse channel reconstruction
// Copyright (C) 2026 beamtrain project
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------

#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <random>

#include "beamtrain/geometry.hpp"

namespace beamtrain {

inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

/// Derives an independent stream seed from a base seed and up to two tags.
/// Trials seeded this way can run in any order, or in parallel, and still
/// reproduce the serial results bit for bit.
inline std::uint64_t derive_stream(std::uint64_t base, std::uint64_t tag_a,
                                   std::uint64_t tag_b = 0) {
    return splitmix64(splitmix64(splitmix64(base) ^ tag_a) ^ tag_b);
}

/// Seeded random source. The variate transforms are written out here rather
/// than taken from <random> distributions so that a given seed produces the
/// same stream on every standard library.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    std::uint64_t next_u64() { return engine_(); }

    /// Uniform on [0, 1).
    double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    /// Circularly symmetric complex Gaussian with E|z|^2 = 1.
    std::complex<double> complex_normal() {
        // Magnitude from the inverse CDF of Rayleigh(1/sqrt(2)), phase uniform.
        const double u1 = (static_cast<double>(next_u64() >> 11) + 1.0) * 0x1.0p-53; // (0, 1]
        const double u2 = static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
        const double mag = std::sqrt(-std::log(u1));
        return std::polar(mag, 2.0 * kPi * u2);
    }

private:
    std::mt19937_64 engine_;
};

} // namespace beamtrain
