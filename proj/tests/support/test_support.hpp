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

// Random model generators and brute-force oracles for the test suites. The
// oracles deliberately avoid the library's evaluation paths.

#include "hqmm/hmm.hpp"
#include "hqmm/hqmm.hpp"
#include "hqmm/linalg.hpp"

#include <cmath>
#include <random>
#include <vector>

namespace hqmm::testing {

inline ComplexMatrix random_complex(std::mt19937_64& rng, Index dim) {
    std::normal_distribution<double> g(0.0, 1.0);
    ComplexMatrix m(dim, dim);
    for (Index i = 0; i < dim; ++i)
        for (Index j = 0; j < dim; ++j) m(i, j) = Complex(g(rng), g(rng));
    return m;
}

inline ComplexMatrix random_hermitian(std::mt19937_64& rng, Index dim) {
    const ComplexMatrix a = random_complex(rng, dim);
    return 0.5 * (a + a.adjoint());
}

inline DensityMatrix random_density(std::mt19937_64& rng, Index dim) {
    const ComplexMatrix a = random_complex(rng, dim);
    ComplexMatrix rho = a * a.adjoint();
    rho /= rho.trace().real();
    return DensityMatrix(hermitize(rho));
}

/// Uniform entries, then every column of Σ_m T_m normalized to 1.
inline Hmm random_hmm(std::mt19937_64& rng, Index states, std::size_t symbols) {
    std::uniform_real_distribution<double> u(0.0, 1.0);
    std::vector<RealMatrix> t(symbols, RealMatrix(states, states));
    for (auto& m : t)
        for (Index i = 0; i < states; ++i)
            for (Index j = 0; j < states; ++j) m(i, j) = u(rng);
    for (Index j = 0; j < states; ++j) {
        double s = 0.0;
        for (const auto& m : t) s += m.col(j).sum();
        for (auto& m : t) m.col(j) /= s;
    }
    RealVector p(states);
    for (Index i = 0; i < states; ++i) p(i) = u(rng);
    p /= p.sum();
    std::vector<Symbol> labels;
    for (std::size_t m = 0; m < symbols; ++m) labels.push_back(std::string(1, static_cast<char>('a' + m)));
    return Hmm(Alphabet(labels), std::move(t), std::move(p));
}

/// Random complete Kraus set: K_k = A_k S^{-1/2} with S = Σ A_k†A_k.
inline std::vector<KrausOperator> random_kraus_ops(std::mt19937_64& rng, Index dim, std::size_t symbols,
                                                  std::size_t per_symbol_max) {
    std::uniform_int_distribution<std::size_t> count(1, per_symbol_max);
    std::vector<KrausOperator> ops;
    for (std::size_t s = 0; s < symbols; ++s) {
        const std::size_t n = count(rng);
        for (std::size_t k = 0; k < n; ++k) ops.push_back({std::to_string(s), random_complex(rng, dim)});
    }
    ComplexMatrix sum = ComplexMatrix::Zero(dim, dim);
    for (const auto& op : ops) sum += op.matrix.adjoint() * op.matrix;
    Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(sum);
    const ComplexMatrix inv_sqrt = es.eigenvectors() *
                                   es.eigenvalues().cwiseSqrt().cwiseInverse().cast<Complex>().asDiagonal() *
                                   es.eigenvectors().adjoint();
    for (auto& op : ops) op.matrix = op.matrix * inv_sqrt;
    return ops;
}

inline Hqmm random_hqmm(std::mt19937_64& rng, Index dim, std::size_t symbols, std::size_t per_symbol_max) {
    return Hqmm(LabeledKrausSet(random_kraus_ops(rng, dim, symbols, per_symbol_max)), random_density(rng, dim));
}

/// All |alphabet|^length sequences.
inline std::vector<Sequence> all_sequences(const Alphabet& alphabet, std::size_t length) {
    std::vector<Sequence> out{Sequence{}};
    for (std::size_t step = 0; step < length; ++step) {
        std::vector<Sequence> next;
        for (const auto& prefix : out) {
            for (const auto& s : alphabet.labels()) {
                Sequence seq = prefix;
                seq.push_back(s);
                next.push_back(std::move(seq));
            }
        }
        out = std::move(next);
    }
    return out;
}

/// Σ over every path of individual operators (k_1, ..., k_L) with matching
/// labels of Tr(K_{k_L}⋯K_{k_1} ρ K_{k_1}†⋯K_{k_L}†): the literal product
/// form, expanded over operators sharing a label.
inline double oracle_sequence_probability(const Hqmm& model, const Sequence& seq) {
    const auto& ops = model.kraus().operators();
    double total = 0.0;
    std::vector<std::size_t> path;
    auto rec = [&](auto&& self, std::size_t pos) -> void {
        if (pos == seq.size()) {
            ComplexMatrix prod = ComplexMatrix::Identity(model.dim(), model.dim());
            for (std::size_t k : path) prod = ops[k].matrix * prod;
            total += (prod * model.initial().matrix() * prod.adjoint()).trace().real();
            return;
        }
        for (std::size_t k = 0; k < ops.size(); ++k) {
            if (ops[k].symbol != seq[pos]) continue;
            path.push_back(k);
            self(self, pos + 1);
            path.pop_back();
        }
    };
    rec(rec, 0);
    return total;
}

/// Forward product η · T_{s_L} ⋯ T_{s_1} p₀ evaluated right-to-left on
/// the matrices (not on vectors).
inline double oracle_hmm_probability(const Hmm& model, const Sequence& seq) {
    RealMatrix prod = RealMatrix::Identity(model.num_states(), model.num_states());
    for (const auto& s : seq) prod = model.transition(model.alphabet().index_of(s)) * prod;
    return (prod * model.initial()).sum();
}

/// Truncated Taylor series Σ_{k<terms} a^k / k!.
inline ComplexMatrix taylor_exp(const ComplexMatrix& a, int terms = 50) {
    ComplexMatrix sum = ComplexMatrix::Identity(a.rows(), a.cols());
    ComplexMatrix term = sum;
    for (int k = 1; k < terms; ++k) {
        term = term * a / static_cast<double>(k);
        sum += term;
    }
    return sum;
}

/// ‖Σ K†K − I‖_F of the two-level decay discretization in closed form:
/// K₀†K₀ + K₁†K₁ − I = diag(0, e^{−κΔt} + κΔt − 1).
inline double oracle_decay_defect(double kappa, double dt) {
    return std::abs(std::expm1(-kappa * dt) + kappa * dt);
}

inline ComplexMatrix diag2(Complex a, Complex b) {
    ComplexMatrix m = ComplexMatrix::Zero(2, 2);
    m(0, 0) = a;
    m(1, 1) = b;
    return m;
}

inline double max_abs_diff(const ComplexMatrix& a, const ComplexMatrix& b) {
    return (a - b).cwiseAbs().maxCoeff();
}

}  // namespace hqmm::testing
