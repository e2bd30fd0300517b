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

#include "hqmm/hqmm.hpp"

#include "hqmm/error.hpp"
#include "hqmm/rng.hpp"

#include <cmath>
#include <functional>
#include <string>

namespace hqmm {

namespace {

constexpr double kZeroProbability = 1e-14;

std::vector<Symbol> labels_in_order(const std::vector<KrausOperator>& ops) {
    std::vector<Symbol> labels;
    for (const auto& op : ops) {
        bool seen = false;
        for (const auto& l : labels) seen = seen || l == op.symbol;
        if (!seen) labels.push_back(op.symbol);
    }
    return labels;
}

void require_same_dim(Index a, Index b, const char* what) {
    if (a != b) {
        throw Error(ErrorKind::DimensionMismatch, std::string(what) + ": dimension " +
                                                      std::to_string(a) + " vs " + std::to_string(b));
    }
}

// Tolerance for traces of states propagated by a set with defect ε over one
// step: |Tr((ΣK†K − I)ρ)| ≤ ‖ΣK†K − I‖_op ≤ ε for unit-trace ρ.
double trace_tolerance(const LabeledKrausSet& kraus) {
    return std::max(kTraceTol, kraus.completeness_tol() + 1e-12);
}

}  // namespace

double completeness_defect(const std::vector<KrausOperator>& operators) {
    if (operators.empty()) return 0.0;
    const Index d = operators.front().matrix.rows();
    ComplexMatrix sum = ComplexMatrix::Zero(d, d);
    for (const auto& op : operators) sum += op.matrix.adjoint() * op.matrix;
    return (sum - ComplexMatrix::Identity(d, d)).norm();
}

double completeness_defect(const LabeledKrausSet& kraus) { return completeness_defect(kraus.operators()); }

LabeledKrausSet::LabeledKrausSet(std::vector<KrausOperator> operators, double completeness_tol)
    : LabeledKrausSet(Alphabet(labels_in_order(operators)), operators, completeness_tol) {}

LabeledKrausSet::LabeledKrausSet(Alphabet alphabet, std::vector<KrausOperator> operators,
                                 double completeness_tol)
    : operators_(std::move(operators)), alphabet_(std::move(alphabet)), completeness_tol_(completeness_tol) {
    if (operators_.empty()) throw Error(ErrorKind::Validation, "Kraus set needs at least one operator");
    if (!(completeness_tol_ > 0.0) || !std::isfinite(completeness_tol_)) {
        throw Error(ErrorKind::Validation, "completeness tolerance must be positive and finite");
    }
    dim_ = operators_.front().matrix.rows();
    for (const auto& op : operators_) {
        require_square_finite(op.matrix, "Kraus operator '" + op.symbol + "'");
        require_same_dim(op.matrix.rows(), dim_, "Kraus operators");
    }
    by_symbol_.resize(alphabet_.size());
    for (std::size_t k = 0; k < operators_.size(); ++k) {
        by_symbol_[alphabet_.index_of(operators_[k].symbol)].push_back(k);
    }
    const double defect = completeness_defect(operators_);
    if (defect > completeness_tol_) {
        throw Error(ErrorKind::Validation, "Kraus completeness violated: ‖ΣK†K − I‖_F = " +
                                               std::to_string(defect) + " exceeds tolerance " +
                                               std::to_string(completeness_tol_));
    }
}

ComplexMatrix LabeledKrausSet::apply_symbol(SymbolIndex s, const ComplexMatrix& rho) const {
    ComplexMatrix out = ComplexMatrix::Zero(dim_, dim_);
    for (std::size_t k : by_symbol_.at(s)) {
        const ComplexMatrix& K = operators_[k].matrix;
        out.noalias() += K * rho * K.adjoint();
    }
    return out;
}

ComplexMatrix LabeledKrausSet::apply_all(const ComplexMatrix& rho) const {
    ComplexMatrix out = ComplexMatrix::Zero(dim_, dim_);
    for (const auto& op : operators_) out.noalias() += op.matrix * rho * op.matrix.adjoint();
    return out;
}

Hqmm::Hqmm(LabeledKrausSet kraus, DensityMatrix initial)
    : kraus_(std::move(kraus)), initial_(std::move(initial)) {
    require_same_dim(kraus_.dim(), initial_.dim(), "HQMM initial state and Kraus operators");
}

double sequence_probability(const Hqmm& model, const Sequence& seq) {
    const auto idx = model.alphabet().encode(seq);
    ComplexMatrix sigma = model.initial().matrix();
    for (SymbolIndex s : idx) sigma = model.kraus().apply_symbol(s, sigma);
    return clip_probability(sigma.trace().real());
}

DensityMatrix apply_channel(const Hqmm& model, const DensityMatrix& rho) {
    require_same_dim(model.dim(), rho.dim(), "apply_channel");
    return DensityMatrix::from_evolved(model.kraus().apply_all(rho.matrix()), trace_tolerance(model.kraus()));
}

ConditionalState conditional_state(const Hqmm& model, const DensityMatrix& rho, const Symbol& symbol) {
    require_same_dim(model.dim(), rho.dim(), "conditional_state");
    const SymbolIndex s = model.alphabet().index_of(symbol);
    const ComplexMatrix sigma = model.kraus().apply_symbol(s, rho.matrix());
    const double p = clip_probability(sigma.trace().real());
    if (p <= kZeroProbability) {
        throw Error(ErrorKind::SymbolProbabilityZero,
                    "symbol '" + symbol + "' has probability " + std::to_string(p) + " in this state");
    }
    return {DensityMatrix::from_evolved(sigma / p), p};
}

namespace detail {

IndexedTrajectory sample_indexed(const Hqmm& model, std::size_t length, std::uint64_t seed) {
    UniformSource rng(seed);
    const LabeledKrausSet& kraus = model.kraus();
    const std::size_t k = kraus.alphabet().size();
    std::vector<ComplexMatrix> candidates(k);
    std::vector<double> weights(k);

    IndexedTrajectory out;
    out.symbols.reserve(length);
    ComplexMatrix current = model.initial().matrix();
    for (std::size_t step = 0; step < length; ++step) {
        double total = 0.0;
        for (std::size_t s = 0; s < k; ++s) {
            candidates[s] = kraus.apply_symbol(static_cast<SymbolIndex>(s), current);
            const double p = clip_probability(candidates[s].trace().real());
            weights[s] = p > kZeroProbability ? p : 0.0;
            total += weights[s];
        }
        if (!(total > 0.0)) {
            throw Error(ErrorKind::NumericFailure, "no symbol has positive probability");
        }
        const double target = rng.next() * total;
        std::size_t chosen = k;
        double cumulative = 0.0;
        for (std::size_t s = 0; s < k; ++s) {
            cumulative += weights[s];
            if (weights[s] > 0.0 && target < cumulative) {
                chosen = s;
                break;
            }
        }
        if (chosen == k) {
            for (std::size_t s = k; s-- > 0;) {
                if (weights[s] > 0.0) {
                    chosen = s;
                    break;
                }
            }
        }
        current = hermitize(candidates[chosen] / weights[chosen]);
        out.symbols.push_back(static_cast<SymbolIndex>(chosen));
    }
    out.final_state = std::move(current);
    return out;
}

}  // namespace detail

HqmmSample hqmm_sample(const Hqmm& model, std::size_t length, std::uint64_t seed) {
    auto traj = detail::sample_indexed(model, length, seed);
    if (length == 0) return {Sequence{}, model.initial()};
    return {model.alphabet().decode(traj.symbols), DensityMatrix::from_evolved(traj.final_state)};
}

std::map<Sequence, double> hqmm_enumerate(const Hqmm& model, std::size_t length) {
    const Alphabet& alphabet = model.alphabet();
    check_enumeration_size(alphabet.size(), length);
    std::map<Sequence, double> out;
    Sequence prefix;
    std::function<void(const ComplexMatrix&)> visit = [&](const ComplexMatrix& sigma) {
        if (prefix.size() == length) {
            out.emplace(prefix, clip_probability(sigma.trace().real()));
            return;
        }
        for (std::size_t s = 0; s < alphabet.size(); ++s) {
            prefix.push_back(alphabet.label(s));
            visit(model.kraus().apply_symbol(static_cast<SymbolIndex>(s), sigma));
            prefix.pop_back();
        }
    };
    visit(model.initial().matrix());
    return out;
}

Hqmm embed_hmm(const Hmm& model) {
    const Index n = model.num_states();
    std::vector<KrausOperator> ops;
    for (std::size_t m = 0; m < model.alphabet().size(); ++m) {
        const RealMatrix& t = model.transition(static_cast<SymbolIndex>(m));
        for (Index i = 0; i < n; ++i) {
            for (Index j = 0; j < n; ++j) {
                if (t(j, i) == 0.0) continue;
                ComplexMatrix k = ComplexMatrix::Zero(n, n);
                k(j, i) = std::sqrt(t(j, i));
                ops.push_back({model.alphabet().label(m), std::move(k)});
            }
        }
    }
    ComplexMatrix rho = ComplexMatrix::Zero(n, n);
    for (Index i = 0; i < n; ++i) rho(i, i) = model.initial()(i);
    return Hqmm(LabeledKrausSet(model.alphabet(), std::move(ops)), DensityMatrix(std::move(rho)));
}

}  // namespace hqmm
