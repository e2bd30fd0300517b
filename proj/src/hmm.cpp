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

#include "hqmm/hmm.hpp"

#include "hqmm/error.hpp"
#include "hqmm/rng.hpp"

#include <cmath>
#include <functional>
#include <string>

namespace hqmm {

Hmm::Hmm(Alphabet alphabet, std::vector<RealMatrix> transitions, RealVector initial)
    : alphabet_(std::move(alphabet)), transitions_(std::move(transitions)), initial_(std::move(initial)) {
    const Index n = initial_.size();
    if (n < 1) throw Error(ErrorKind::Validation, "HMM needs at least one state");
    if (transitions_.size() != alphabet_.size()) {
        throw Error(ErrorKind::DimensionMismatch, "HMM has " + std::to_string(transitions_.size()) +
                                                      " transition matrices for " +
                                                      std::to_string(alphabet_.size()) + " symbols");
    }
    RealMatrix total = RealMatrix::Zero(n, n);
    for (std::size_t m = 0; m < transitions_.size(); ++m) {
        const RealMatrix& t = transitions_[m];
        if (t.rows() != n || t.cols() != n) {
            throw Error(ErrorKind::DimensionMismatch, "transition matrix for '" + alphabet_.label(m) +
                                                          "' is not " + std::to_string(n) + "x" +
                                                          std::to_string(n));
        }
        if (!t.allFinite()) {
            throw Error(ErrorKind::Validation, "transition matrix for '" + alphabet_.label(m) +
                                                   "' has non-finite entries");
        }
        if (t.minCoeff() < 0.0) {
            throw Error(ErrorKind::Validation, "transition matrix for '" + alphabet_.label(m) +
                                                   "' has negative entries");
        }
        total += t;
    }
    for (Index j = 0; j < n; ++j) {
        const double s = total.col(j).sum();
        if (std::abs(s - 1.0) > 1e-10) {
            throw Error(ErrorKind::Validation,
                        "column-stochasticity violated: column " + std::to_string(j) +
                            " of the summed transition matrices sums to " + std::to_string(s));
        }
    }
    if (!initial_.allFinite() || initial_.minCoeff() < 0.0) {
        throw Error(ErrorKind::Validation, "initial distribution must be finite and nonnegative");
    }
    if (std::abs(initial_.sum() - 1.0) > 1e-10) {
        throw Error(ErrorKind::Validation, "initial distribution sums to " +
                                               std::to_string(initial_.sum()) + ", not 1");
    }
}

double hmm_sequence_probability(const Hmm& model, const Sequence& seq) {
    const auto idx = model.alphabet().encode(seq);
    RealVector v = model.initial();
    for (SymbolIndex m : idx) v = model.transition(m) * v;
    return clip_probability(v.sum());
}

RealVector hmm_step(const Hmm& model, const RealVector& dist, const Symbol& symbol) {
    const SymbolIndex m = model.alphabet().index_of(symbol);
    if (dist.size() != model.num_states()) {
        throw Error(ErrorKind::DimensionMismatch, "distribution length does not match the HMM");
    }
    if (dist.size() > 0 && dist.minCoeff() < 0.0) {
        throw Error(ErrorKind::Validation, "distribution has negative entries");
    }
    return model.transition(m) * dist;
}

Sequence hmm_sample(const Hmm& model, std::size_t length, std::uint64_t seed) {
    UniformSource rng(seed);
    const std::size_t k = model.alphabet().size();
    std::vector<RealVector> candidates(k);
    std::vector<double> weights(k);
    RealVector current = model.initial();
    Sequence out;
    out.reserve(length);
    for (std::size_t step = 0; step < length; ++step) {
        double total = 0.0;
        for (std::size_t m = 0; m < k; ++m) {
            candidates[m] = model.transition(static_cast<SymbolIndex>(m)) * current;
            weights[m] = candidates[m].sum();
            total += weights[m];
        }
        const double target = rng.next() * total;
        std::size_t chosen = k;
        double cumulative = 0.0;
        for (std::size_t m = 0; m < k; ++m) {
            cumulative += weights[m];
            if (weights[m] > 0.0 && target < cumulative) {
                chosen = m;
                break;
            }
        }
        if (chosen == k) {
            // Roundoff put the draw past the last bin.
            for (std::size_t m = k; m-- > 0;) {
                if (weights[m] > 0.0) {
                    chosen = m;
                    break;
                }
            }
        }
        current = candidates[chosen] / weights[chosen];
        out.push_back(model.alphabet().label(chosen));
    }
    return out;
}

std::map<Sequence, double> hmm_enumerate(const Hmm& model, std::size_t length) {
    check_enumeration_size(model.alphabet().size(), length);
    std::map<Sequence, double> out;
    Sequence prefix;
    std::function<void(const RealVector&)> visit = [&](const RealVector& v) {
        if (prefix.size() == length) {
            out.emplace(prefix, clip_probability(v.sum()));
            return;
        }
        for (std::size_t m = 0; m < model.alphabet().size(); ++m) {
            prefix.push_back(model.alphabet().label(m));
            visit(RealVector(model.transition(static_cast<SymbolIndex>(m)) * v));
            prefix.pop_back();
        }
    };
    visit(model.initial());
    return out;
}

}  // namespace hqmm
