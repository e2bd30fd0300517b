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
#include "hqmm/hmm.hpp"
#include "support/test_support.hpp"

#include <cmath>

using namespace hqmm;

namespace {

Hmm single_state() {
    return Hmm(Alphabet({"a"}), {RealMatrix::Ones(1, 1)}, RealVector::Ones(1));
}

Hmm two_state() {
    RealMatrix ta(2, 2), tb(2, 2);
    ta << 0.5, 0.0, 0.0, 0.5;
    tb << 0.0, 0.5, 0.5, 0.0;
    RealVector p(2);
    p << 1.0, 0.0;
    return Hmm(Alphabet({"a", "b"}), {ta, tb}, p);
}

Sequence seq(std::initializer_list<const char*> s) { return Sequence(s.begin(), s.end()); }

}  // namespace

TEST_CASE("hmm_sequence_probability") {
    CHECK(hmm_sequence_probability(single_state(), seq({"a", "a", "a"})) == 1.0);
    CHECK(hmm_sequence_probability(two_state(), seq({"a"})) == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(hmm_sequence_probability(two_state(), {}) == 1.0);

    double total = 0.0;
    for (const auto& s : hqmm::testing::all_sequences(two_state().alphabet(), 2)) {
        total += hmm_sequence_probability(two_state(), s);
    }
    CHECK(total == doctest::Approx(1.0).epsilon(1e-15));

    try {
        hmm_sequence_probability(two_state(), seq({"c"}));
        FAIL("expected unknown symbol");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::UnknownSymbol);
    }
}

TEST_CASE("hmm_step") {
    RealVector d(2);
    d << 0.3, 0.7;
    const Hmm id(Alphabet({"a"}), {RealMatrix::Identity(2, 2)}, d);
    CHECK(hmm_step(id, d, "a") == d);

    RealVector start(2);
    start << 1.0, 0.0;
    const RealVector out = hmm_step(two_state(), start, "b");
    CHECK(out(0) == 0.0);
    CHECK(out(1) == 0.5);
    CHECK(hmm_step(two_state(), RealVector::Zero(2), "a").isZero());
    CHECK_THROWS_AS(hmm_step(two_state(), start, "z"), Error);
}

TEST_CASE("hmm_enumerate") {
    const auto e0 = hmm_enumerate(two_state(), 0);
    REQUIRE(e0.size() == 1);
    CHECK(e0.begin()->first.empty());
    CHECK(e0.begin()->second == 1.0);

    const auto det = hmm_enumerate(single_state(), 2);
    REQUIRE(det.size() == 1);
    CHECK(det.at(seq({"a", "a"})) == 1.0);

    const auto two = hmm_enumerate(two_state(), 2);
    for (const auto* s : {"aa", "ab", "ba", "bb"}) {
        CHECK(two.at(seq({std::string(1, s[0]).c_str(), std::string(1, s[1]).c_str()})) ==
              doctest::Approx(0.25).epsilon(1e-15));
    }

    CHECK_THROWS_AS(hmm_enumerate(two_state(), 20), Error);
}

TEST_CASE("hmm_sample") {
    const auto s = hmm_sample(single_state(), 5, 1);
    CHECK(s == Sequence(5, "a"));
    CHECK(hmm_sample(two_state(), 0, 1).empty());
    CHECK(hmm_sample(two_state(), 20, 99) == hmm_sample(two_state(), 20, 99));
}

TEST_CASE("hmm_sample frequencies match the exact distribution") {
    const Hmm model = two_state();
    const auto exact = hmm_enumerate(model, 3);
    std::map<Sequence, int> counts;
    const int n = 100000;
    for (int i = 0; i < n; ++i) ++counts[hmm_sample(model, 3, 1000 + static_cast<std::uint64_t>(i))];
    for (const auto& [s, p] : exact) {
        const double f = static_cast<double>(counts[s]) / n;
        const double se = std::sqrt(p * (1 - p) / n);
        CHECK(std::abs(f - p) <= 4 * se);
    }
}

TEST_CASE("invalid HMMs are rejected") {
    RealMatrix t(2, 2);
    t << 0.4, 0.0, 0.0, 0.4;
    RealVector p(2);
    p << 1.0, 0.0;
    CHECK_THROWS_AS(Hmm(Alphabet({"a"}), {t}, p), Error);
    RealMatrix neg(1, 1);
    neg << -1.0;
    CHECK_THROWS_AS(Hmm(Alphabet({"a"}), {neg}, RealVector::Ones(1)), Error);
    CHECK_THROWS_AS(Hmm(Alphabet({"a"}), {RealMatrix::Ones(1, 1)}, RealVector::Constant(1, 0.5)), Error);
    CHECK_THROWS_AS(Alphabet({"a", "a"}), Error);
}

TEST_CASE("random HMMs: normalization and enumerate consistency") {
    std::mt19937_64 rng(5);
    for (int trial = 0; trial < 60; ++trial) {
        const Hmm m = hqmm::testing::random_hmm(rng, 1 + trial % 4, 1 + trial % 3);
        for (std::size_t len = 0; len <= 4; ++len) {
            const auto all = hmm_enumerate(m, len);
            double total = 0.0;
            for (const auto& [s, p] : all) {
                total += p;
                CHECK(p == hmm_sequence_probability(m, s));
                CHECK(std::abs(p - hqmm::testing::oracle_hmm_probability(m, s)) <= 1e-12);
            }
            CHECK(std::abs(total - 1.0) <= 1e-9);
        }
    }
}
