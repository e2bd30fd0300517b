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

// JSON model files:
//
//   {"format_version": "1", "kind": "hmm" | "hqmm" | "open_system", "<kind>": {...}}
//
// Complex numbers are [re, im] pairs and matrices are row-major nested arrays.

#include "hqmm/hmm.hpp"
#include "hqmm/hqmm.hpp"
#include "hqmm/lindblad.hpp"

#include <filesystem>
#include <string>
#include <string_view>
#include <variant>

namespace hqmm {

inline constexpr const char* kFormatVersion = "1";

/// Open-system description plus the initial state the commands start from.
struct OpenSystemModel {
    OpenSystemSpec spec;
    DensityMatrix initial;
};

using Model = std::variant<Hmm, Hqmm, OpenSystemModel>;

std::string_view kind_name(const Model& model);

/// Throws Parse for malformed documents, Validation or DimensionMismatch
/// when the decoded model violates its invariants.
Model parse_model_text(std::string_view text);

struct LoadedModel {
    Model model;
    std::string digest;  // "sha256:<hex>" of the file bytes
};

/// Throws Io when the file cannot be read.
LoadedModel load_model(const std::filesystem::path& path);

std::string serialize_model(const Model& model);

std::string sha256_hex(std::string_view bytes);

std::string read_file(const std::filesystem::path& path);
void write_file(const std::filesystem::path& path, std::string_view bytes);

}  // namespace hqmm
