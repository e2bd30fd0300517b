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

#include "hqmm/ensemble.hpp"
#include "hqmm/error.hpp"
#include "support/test_support.hpp"

#include <cmath>

using namespace hqmm;
using hqmm::testing::diag2;
using hqmm::testing::max_abs_diff;

namespace {

const DensityMatrix kExcited = DensityMatrix::basis_state(2, 1);

Hqmm amplitude_damping(double p) {
    ComplexMatrix k1 = ComplexMatrix::Zero(2, 2);
    k1(0, 1) = std::sqrt(p);
    return Hqmm(LabeledKrausSet({{"0", diag2(1.0, std::sqrt(1.0 - p))}, {"1", k1}}), kExcited);
}

}  // namespace

TEST_CASE("identity channel ensemble") {
    const Hqmm id(LabeledKrausSet({{"0", ops::identity(2)}}), kExcited);
    const auto r = run_ensemble(id, {100, 2, 3, true, 1});
    CHECK(r.distribution.total() == 100);
    CHECK(r.distribution.count({"0", "0"}) == 100);
    CHECK(r.distribution.frequency({"0", "0"}) == 1.0);
    CHECK(r.distribution.standard_error({"0", "0"}) == 0.0);
    CHECK(r.final_states.size() == 100);
    CHECK(max_abs_diff(r.average_state.matrix(), kExcited.matrix()) < 1e-15);
}

TEST_CASE("amplitude damping single step frequency") {
    const auto r = run_ensemble(amplitude_damping(0.1), {100000, 1, 11, false, 0});
    CHECK(std::abs(r.distribution.frequency({"1"}) - 0.1) <= 0.004);
    CHECK(r.final_states.empty());
    // Average conditional state equals the unconditional channel output.
    CHECK(std::abs(r.average_state.matrix()(0, 0).real() - r.distribution.frequency({"1"})) < 1e-12);
}

TEST_CASE("ensembles do not depend on the thread count") {
    std::mt19937_64 rng(5);
    const Hqmm m = hqmm::testing::random_hqmm(rng, 3, 3, 2);
    const auto one = run_ensemble(m, {3000, 4, 99, true, 1});
    for (unsigned threads : {2u, 4u, 0u}) {
        const auto other = run_ensemble(m, {3000, 4, 99, true, threads});
        CHECK(other.distribution == one.distribution);
        CHECK(other.average_state == one.average_state);
        REQUIRE(other.final_states.size() == one.final_states.size());
        for (std::size_t i = 0; i < one.final_states.size(); ++i) CHECK(other.final_states[i] == one.final_states[i]);
    }
    const auto reseeded = run_ensemble(m, {3000, 4, 100, false, 1});
    CHECK(!(reseeded.distribution == one.distribution));
}

TEST_CASE("empirical distribution bookkeeping") {
    EmpiricalDistribution a;
    a.add({"x"}, 3);
    a.add({"y"});
    CHECK(a.total() == 4);
    CHECK(a.frequency({"x"}) == 0.75);
    CHECK(a.frequency({"z"}) == 0.0);
    CHECK(a.standard_error({"x"}) == doctest::Approx(std::sqrt(0.75 * 0.25 / 4)).epsilon(1e-15));
    EmpiricalDistribution b;
    b.add({"y"}, 4);
    a.merge(b);
    CHECK(a.count({"y"}) == 5);
    CHECK(a.total() == 8);
}

TEST_CASE("total_variation") {
    EmpiricalDistribution e;
    e.add({"a"}, 1);
    e.add({"b"}, 1);
    CHECK(total_variation(e, {{{"a"}, 0.5}, {{"b"}, 0.5}}) == 0.0);
    EmpiricalDistribution only_a;
    only_a.add({"a"}, 10);
    EmpiricalDistribution only_b;
    only_b.add({"b"}, 10);
    CHECK(total_variation(only_a, only_b) == 1.0);
    CHECK(total_variation(only_a, {{{"b"}, 1.0}}) == 1.0);
    CHECK(total_variation(only_a, only_a) == 0.0);
    CHECK(total_variation_noise_floor({{{"a"}, 0.5}, {{"b"}, 0.5}}, 100) == doctest::Approx(0.05).epsilon(1e-14));
}

TEST_CASE("embedded HMM sampling matches the exact distribution") {
    std::mt19937_64 rng(21);
    const Hmm h = hqmm::testing::random_hmm(rng, 3, 2);
    const auto exact = hmm_enumerate(h, 3);
    const auto r = run_ensemble(embed_hmm(h), {100000, 3, 4, false, 0});
    CHECK(total_variation(r.distribution, exact) <= 0.02);
}

TEST_CASE("total variation shrinks with the ensemble size") {
    // Exactly complete set, so the enumeration is a normalized distribution.
    const Hqmm m = amplitude_damping(0.3);
    const auto exact = hqmm_enumerate(m, 2);
    std::vector<double> tv;
    for (std::size_t n : {1000u, 10000u, 100000u}) {
        const auto r = run_ensemble(m, {n, 2, 17, false, 0});
        tv.push_back(total_variation(r.distribution, exact));
        CHECK(tv.back() <= 3.0 * total_variation_noise_floor(exact, n) + 1e-12);
    }
    CHECK(tv[2] < tv[0]);
}

TEST_CASE("average state is a density matrix") {
    std::mt19937_64 rng(31);
    for (int trial = 0; trial < 5; ++trial) {
        const Hqmm m = hqmm::testing::random_hqmm(rng, 3, 2, 2);
        const auto r = run_ensemble(m, {500, 3, static_cast<std::uint64_t>(trial), false, 1});
        CHECK(std::abs(r.average_state.matrix().trace().real() - 1.0) <= 1e-10);
        CHECK(hermitian_eigenvalues(r.average_state.matrix()).minCoeff() >= -1e-10);
    }
}

TEST_CASE("ensemble_vs_master") {
    const OpenSystemSpec free(ComplexMatrix::Zero(2, 2), {}, 0.01);
    const auto z = ensemble_vs_master(free, kExcited, {100, 100, 1, false, 1}, 1.0);
    CHECK(z.trace_distance < 1e-12);
    CHECK(z.pass);

    for (const auto& feedback : {ops::identity(2), ops::sigma_x()}) {
        const auto spec = specs::decay(1.0, 0.01, feedback);
        const auto cmp = ensemble_vs_master(spec, kExcited, {10000, 100, 2024, false, 0}, 1.0);
        CHECK(cmp.statistical_bound == doctest::Approx(0.03).epsilon(1e-14));
        CHECK(cmp.bias_bound == doctest::Approx(0.01).epsilon(1e-14));
        CHECK(cmp.pass);
        CHECK(cmp.trace_distance <= cmp.statistical_bound + cmp.bias_bound);
    }
    CHECK_THROWS_AS(ensemble_vs_master(specs::decay(1.0, 0.01), kExcited, {10, 50, 1, false, 1}, 1.0), Error);
}
