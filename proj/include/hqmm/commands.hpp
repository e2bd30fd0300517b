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

// Subcommands behind the hqmm executable. Each writes its data file plus a
// sibling "<out>.report.json" run report and returns the process exit code;
// failures propagate as hqmm::Error and map through exit_code_for.

#include "hqmm/error.hpp"

#include <cstdint>
#include <filesystem>
#include <optional>
#include <ostream>
#include <string>

namespace hqmm {

namespace exit_code {
inline constexpr int kSuccess = 0;
inline constexpr int kFail = 1;
inline constexpr int kValidation = 2;
inline constexpr int kIo = 3;
inline constexpr int kNumeric = 4;
}  // namespace exit_code

int exit_code_for(ErrorKind kind) noexcept;

/// 17 significant digits, '.' separator, always with a decimal point or
/// exponent ("1.0", "0.10000000000000001").
std::string format_double(double x);

/// Fixed notation with 12 digits after the point.
std::string format_probability(double p);

std::filesystem::path report_path(const std::filesystem::path& out);

struct ProbOptions {
    std::filesystem::path model;
    std::string sequence;
    std::optional<std::filesystem::path> out;
};

struct SampleOptions {
    std::filesystem::path model;
    std::size_t length = 0;
    std::size_t n = 1;
    std::uint64_t seed = 0;
    std::filesystem::path out;
    unsigned threads = 1;
};

struct EvolveOptions {
    std::filesystem::path model;
    double t_final = 0.0;
    std::size_t steps = 1;
    std::filesystem::path out;
};

struct DiscretizeOptions {
    std::filesystem::path model;
    std::filesystem::path out;
};

using CompareOptions = SampleOptions;

int cmd_prob(const ProbOptions& opt, std::ostream& out, std::ostream& err);
int cmd_sample(const SampleOptions& opt, std::ostream& out, std::ostream& err);
int cmd_evolve(const EvolveOptions& opt, std::ostream& out, std::ostream& err);
int cmd_discretize(const DiscretizeOptions& opt, std::ostream& out, std::ostream& err);
int cmd_compare(const CompareOptions& opt, std::ostream& out, std::ostream& err);

}  // namespace hqmm
