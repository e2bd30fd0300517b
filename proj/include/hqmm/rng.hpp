// Copyright 2026 The hqmm Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cstdint>
#include <random>

namespace hqmm {

/// Identifier recorded in run reports so a run can be audited and replayed.
inline constexpr const char* kGeneratorId =
    "mt19937_64; trajectory seed = splitmix64(master_seed + (index + 1) * 0x9E3779B97F4A7C15); "
    "uniform = (next >> 11) * 2^-53";

/// splitmix64 finalizer.
constexpr std::uint64_t splitmix64(std::uint64_t x) noexcept {
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

/// Per-trajectory seed. Depends only on (master_seed, index), never on the
/// schedule that runs the trajectory.
constexpr std::uint64_t trajectory_seed(std::uint64_t master_seed, std::uint64_t index) noexcept {
    return splitmix64(master_seed + (index + 1) * 0x9E3779B97F4A7C15ULL);
}

/// Uniform variates in [0, 1) with 53 random bits. The conversion is spelled
/// out instead of using std::uniform_real_distribution, whose output is not
/// specified identically across standard libraries.
class UniformSource {
public:
    explicit UniformSource(std::uint64_t seed) : engine_(seed) {}

    double next() noexcept { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

private:
    std::mt19937_64 engine_;
};

}  // namespace hqmm
