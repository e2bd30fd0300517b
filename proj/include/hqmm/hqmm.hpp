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

// Hidden quantum Markov models: an initial density matrix plus a complete set
// of Kraus operators, each labelled by the output symbol it produces. Several
// operators may share a label; the per-symbol map is then
// E_s(ρ) = Σ_{k labelled s} K_k ρ K_k†.

#include "hqmm/alphabet.hpp"
#include "hqmm/hmm.hpp"
#include "hqmm/linalg.hpp"

#include <cstdint>
#include <map>
#include <vector>

namespace hqmm {

struct KrausOperator {
    Symbol symbol;
    ComplexMatrix matrix;
};

inline constexpr double kDefaultCompletenessTol = 1e-10;

class LabeledKrausSet {
public:
    /// Symbols form an alphabet in order of first appearance. Throws
    /// Validation when ‖Σ K†K − I‖_F exceeds completeness_tol.
    explicit LabeledKrausSet(std::vector<KrausOperator> operators,
                             double completeness_tol = kDefaultCompletenessTol);

    /// Explicit alphabet; every operator label must belong to it. Symbols
    /// without operators are allowed and are never emitted.
    LabeledKrausSet(Alphabet alphabet, std::vector<KrausOperator> operators,
                    double completeness_tol = kDefaultCompletenessTol);

    Index dim() const noexcept { return dim_; }
    const std::vector<KrausOperator>& operators() const noexcept { return operators_; }
    const Alphabet& alphabet() const noexcept { return alphabet_; }
    double completeness_tol() const noexcept { return completeness_tol_; }

    /// Operator indices carrying the given symbol.
    const std::vector<std::size_t>& operators_for(SymbolIndex s) const { return by_symbol_.at(s); }

    /// Σ_{k labelled s} K_k ρ K_k† on an arbitrary operator.
    ComplexMatrix apply_symbol(SymbolIndex s, const ComplexMatrix& rho) const;

    /// Σ_k K_k ρ K_k†, output symbol ignored.
    ComplexMatrix apply_all(const ComplexMatrix& rho) const;

private:
    std::vector<KrausOperator> operators_;
    Alphabet alphabet_;
    std::vector<std::vector<std::size_t>> by_symbol_;
    Index dim_ = 0;
    double completeness_tol_ = kDefaultCompletenessTol;
};

/// ‖Σ_k K_k†K_k − I‖_F
double completeness_defect(const LabeledKrausSet& kraus);
double completeness_defect(const std::vector<KrausOperator>& operators);

class Hqmm {
public:
    Hqmm(LabeledKrausSet kraus, DensityMatrix initial);

    const LabeledKrausSet& kraus() const noexcept { return kraus_; }
    const DensityMatrix& initial() const noexcept { return initial_; }
    const Alphabet& alphabet() const noexcept { return kraus_.alphabet(); }
    Index dim() const noexcept { return kraus_.dim(); }

private:
    LabeledKrausSet kraus_;
    DensityMatrix initial_;
};

/// Tr(E_{s_L} ∘ ⋯ ∘ E_{s_1}(ρ₀)). Empty sequence gives 1.
double sequence_probability(const Hqmm& model, const Sequence& seq);

/// Σ_k K_k ρ K_k†. The output trace may differ from 1 by at most the model's
/// completeness tolerance, which is also the tolerance the result is checked
/// against.
DensityMatrix apply_channel(const Hqmm& model, const DensityMatrix& rho);

struct ConditionalState {
    DensityMatrix state;
    double probability;
};

/// Renormalized post-emission state and the emission probability. Throws
/// SymbolProbabilityZero when Tr σ ≤ 1e-14.
ConditionalState conditional_state(const Hqmm& model, const DensityMatrix& rho, const Symbol& symbol);

struct HqmmSample {
    Sequence symbols;
    DensityMatrix final_state;
};

/// Emits symbols by inverse CDF over the alphabet (one uniform per step) and
/// continues from the renormalized conditional state. For discretized sets,
/// whose emission probabilities sum to 1 + O(Δt²), the draw is made against
/// their actual total.
HqmmSample hqmm_sample(const Hqmm& model, std::size_t length, std::uint64_t seed);

std::map<Sequence, double> hqmm_enumerate(const Hqmm& model, std::size_t length);

/// HQMM reproducing the HMM exactly: K_{m,i,j} = √((T_m)_{ji}) |j⟩⟨i| for each
/// nonzero entry, labelled m, and ρ₀ = diag(p₀).
Hqmm embed_hmm(const Hmm& model);

namespace detail {

struct IndexedTrajectory {
    std::vector<SymbolIndex> symbols;
    ComplexMatrix final_state;
};

/// Sampling core shared with the ensemble engine; works on symbol indices.
IndexedTrajectory sample_indexed(const Hqmm& model, std::size_t length, std::uint64_t seed);

}  // namespace detail

}  // namespace hqmm
