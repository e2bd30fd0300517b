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

// Classical hidden Markov model with symbol-labelled substochastic
// transition matrices. Distributions are column vectors and matrices act on
// the left, so a sequence a, b, c has weight 1ᵀ T_c T_b T_a p₀.

#include "hqmm/alphabet.hpp"
#include "hqmm/linalg.hpp"

#include <cstdint>
#include <map>
#include <vector>

namespace hqmm {

class Hmm {
public:
    /// transitions[m] belongs to alphabet.label(m). Validates nonnegativity,
    /// column-stochasticity of Σ_m T_m and normalization of `initial`, all to
    /// 1e-10.
    Hmm(Alphabet alphabet, std::vector<RealMatrix> transitions, RealVector initial);

    Index num_states() const noexcept { return initial_.size(); }
    const Alphabet& alphabet() const noexcept { return alphabet_; }
    const std::vector<RealMatrix>& transitions() const noexcept { return transitions_; }
    const RealMatrix& transition(SymbolIndex m) const { return transitions_.at(m); }
    const RealVector& initial() const noexcept { return initial_; }

private:
    Alphabet alphabet_;
    std::vector<RealMatrix> transitions_;
    RealVector initial_;
};

double hmm_sequence_probability(const Hmm& model, const Sequence& seq);

/// T_symbol · dist. Its 1-norm is the probability of emitting `symbol`.
RealVector hmm_step(const Hmm& model, const RealVector& dist, const Symbol& symbol);

/// Sequential conditional sampling; one uniform draw per step, inverse CDF in
/// alphabet order.
Sequence hmm_sample(const Hmm& model, std::size_t length, std::uint64_t seed);

std::map<Sequence, double> hmm_enumerate(const Hmm& model, std::size_t length);

}  // namespace hqmm
