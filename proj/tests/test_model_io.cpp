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

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "hqmm/error.hpp"
#include "hqmm/model_io.hpp"
#include "support/test_support.hpp"

#include <filesystem>

using namespace hqmm;

namespace {

const std::filesystem::path kModels = HQMM_MODELS_DIR;

ErrorKind kind_of(std::string_view text) {
    try {
        parse_model_text(text);
    } catch (const Error& e) {
        return e.kind();
    }
    FAIL("expected an error");
    return ErrorKind::Parse;
}

}  // namespace

TEST_CASE("bundled models load") {
    for (const char* name : {"identity", "two_state_hmm", "amplitude_damping", "decay", "decay_feedback",
                             "driven_decay", "free"}) {
        CAPTURE(name);
        const auto loaded = load_model(kModels / (std::string(name) + ".json"));
        CHECK(loaded.digest.rfind("sha256:", 0) == 0);
        CHECK(loaded.digest.size() == 7 + 64);
    }
    CHECK(kind_name(load_model(kModels / "two_state_hmm.json").model) == "hmm");
    CHECK(kind_name(load_model(kModels / "identity.json").model) == "hqmm");
    const auto decay = load_model(kModels / "decay.json");
    REQUIRE(std::holds_alternative<OpenSystemModel>(decay.model));
    const auto& os = std::get<OpenSystemModel>(decay.model);
    CHECK(os.spec.dt() == 0.01);
    CHECK(os.initial == DensityMatrix::basis_state(2, 1));
}

TEST_CASE("invalid models are rejected with the right kind") {
    try {
        load_model(kModels / "bad_column_hmm.json");
        FAIL("expected validation error");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::Validation);
        CHECK(std::string(e.what()).find("column-stochasticity") != std::string::npos);
    }
    try {
        load_model(kModels / "broken_feedback.json");
        FAIL("expected validation error");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::Validation);
        CHECK(std::string(e.what()).find("unitary") != std::string::npos);
    }

    CHECK(kind_of("{not json") == ErrorKind::Parse);
    CHECK(kind_of(R"({"format_version":"2","kind":"hmm","hmm":{}})") == ErrorKind::Parse);
    CHECK(kind_of(R"({"format_version":"1","kind":"nope"})") == ErrorKind::Parse);
    CHECK(kind_of(R"({"format_version":"1","kind":"hmm",
        "hmm":{"transitions":[{"symbol":"a","matrix":[[1.0]]}],"initial":[1.0]},
        "hqmm":{}})") == ErrorKind::Parse);
    CHECK(kind_of(R"({"format_version":"1","kind":"hmm",
        "hmm":{"transitions":[{"symbol":"a","matrix":[[1.0,0.0]]}],"initial":[1.0]}})") ==
          ErrorKind::DimensionMismatch);
    CHECK(kind_of(R"({"format_version":"1","kind":"hqmm",
        "hqmm":{"kraus":[{"symbol":"0","matrix":[[[1.0,0.0]]]}],"initial":[[[0.5,0.0]]]}})") ==
          ErrorKind::Validation);
    CHECK_THROWS_AS(load_model(kModels / "does_not_exist.json"), Error);
    try {
        load_model(kModels / "does_not_exist.json");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::Io);
    }
}

TEST_CASE("serialize and parse agree") {
    for (const char* name : {"two_state_hmm", "amplitude_damping", "driven_decay"}) {
        CAPTURE(name);
        const Model m = load_model(kModels / (std::string(name) + ".json")).model;
        const std::string once = serialize_model(m);
        const std::string twice = serialize_model(parse_model_text(once));
        CHECK(once == twice);
    }
    // Discretized sets keep their relaxed completeness tolerance.
    const auto disc = discretize(specs::decay(1.0, 0.04));
    const Model q = Hqmm(disc.kraus, DensityMatrix::basis_state(2, 1));
    const Model back = parse_model_text(serialize_model(q));
    CHECK(std::get<Hqmm>(back).kraus().completeness_tol() == disc.kraus.completeness_tol());
}

TEST_CASE("sha256") {
    CHECK(sha256_hex("") == "e3b0c44298fc1c149afbf4c8996fb92427ae41e4649b934ca495991b7852b855");
    CHECK(sha256_hex("abc") == "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
}
