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

#include "hqmm/ensemble.hpp"

#include "hqmm/error.hpp"

#include <atomic>
#include <cmath>
#include <exception>
#include <mutex>
#include <set>
#include <thread>

namespace hqmm {

void EmpiricalDistribution::add(const Sequence& seq, std::uint64_t count) {
    if (count == 0) return;
    counts_[seq] += count;
    total_ += count;
}

void EmpiricalDistribution::merge(const EmpiricalDistribution& other) {
    for (const auto& [seq, c] : other.counts_) add(seq, c);
}

std::uint64_t EmpiricalDistribution::count(const Sequence& seq) const {
    const auto it = counts_.find(seq);
    return it == counts_.end() ? 0 : it->second;
}

double EmpiricalDistribution::frequency(const Sequence& seq) const {
    if (total_ == 0) return 0.0;
    return static_cast<double>(count(seq)) / static_cast<double>(total_);
}

double EmpiricalDistribution::standard_error(const Sequence& seq) const {
    if (total_ == 0) return 0.0;
    const double f = frequency(seq);
    return std::sqrt(f * (1.0 - f) / static_cast<double>(total_));
}

namespace {

constexpr std::size_t kBlockSize = 256;

struct BlockResult {
    std::map<std::vector<SymbolIndex>, std::uint64_t> counts;
    ComplexMatrix state_sum;
    std::vector<ComplexMatrix> states;
};

BlockResult run_block(const Hqmm& model, const EnsembleConfig& cfg, std::size_t begin, std::size_t end) {
    BlockResult out;
    out.state_sum = ComplexMatrix::Zero(model.dim(), model.dim());
    for (std::size_t i = begin; i < end; ++i) {
        auto traj = detail::sample_indexed(model, cfg.length, trajectory_seed(cfg.master_seed, i));
        ++out.counts[traj.symbols];
        out.state_sum += traj.final_state;
        if (cfg.record_states) out.states.push_back(std::move(traj.final_state));
    }
    return out;
}

}  // namespace

EnsembleResult run_ensemble(const Hqmm& model, const EnsembleConfig& cfg) {
    if (cfg.num_trajectories < 1) {
        throw Error(ErrorKind::Validation, "ensemble needs at least one trajectory");
    }
    const std::size_t n = cfg.num_trajectories;
    const std::size_t num_blocks = (n + kBlockSize - 1) / kBlockSize;
    std::vector<BlockResult> blocks(num_blocks);

    unsigned threads = cfg.threads == 0 ? std::max(1u, std::thread::hardware_concurrency()) : cfg.threads;
    threads = static_cast<unsigned>(std::min<std::size_t>(threads, num_blocks));

    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;
    auto worker = [&] {
        try {
            for (std::size_t b = next++; b < num_blocks; b = next++) {
                const std::size_t begin = b * kBlockSize;
                blocks[b] = run_block(model, cfg, begin, std::min(n, begin + kBlockSize));
            }
        } catch (...) {
            std::lock_guard lock(failure_mutex);
            if (!failure) failure = std::current_exception();
            next = num_blocks;
        }
    };
    if (threads <= 1) {
        worker();
    } else {
        std::vector<std::jthread> pool;
        pool.reserve(threads);
        for (unsigned t = 0; t < threads; ++t) pool.emplace_back(worker);
    }
    if (failure) std::rethrow_exception(failure);

    // Merge strictly in block order.
    std::map<std::vector<SymbolIndex>, std::uint64_t> counts;
    ComplexMatrix sum = ComplexMatrix::Zero(model.dim(), model.dim());
    std::vector<DensityMatrix> finals;
    for (auto& block : blocks) {
        for (const auto& [seq, c] : block.counts) counts[seq] += c;
        sum += block.state_sum;
        for (const auto& s : block.states) finals.push_back(DensityMatrix::from_evolved(s));
    }

    EmpiricalDistribution dist;
    for (const auto& [seq, c] : counts) dist.add(model.alphabet().decode(seq), c);
    std::map<Sequence, double> errors;
    for (const auto& [seq, c] : dist.counts()) errors.emplace(seq, dist.standard_error(seq));

    return EnsembleResult{std::move(dist), DensityMatrix::from_evolved(sum / static_cast<double>(n)),
                          std::move(errors), std::move(finals), kGeneratorId};
}

double total_variation(const EmpiricalDistribution& emp, const std::map<Sequence, double>& exact) {
    double acc = 0.0;
    for (const auto& [seq, p] : exact) acc += std::abs(emp.frequency(seq) - p);
    for (const auto& [seq, c] : emp.counts()) {
        if (exact.find(seq) == exact.end()) acc += emp.frequency(seq);
    }
    return 0.5 * acc;
}

double total_variation(const EmpiricalDistribution& a, const EmpiricalDistribution& b) {
    std::set<Sequence> support;
    for (const auto& [seq, c] : a.counts()) support.insert(seq);
    for (const auto& [seq, c] : b.counts()) support.insert(seq);
    double acc = 0.0;
    for (const auto& seq : support) acc += std::abs(a.frequency(seq) - b.frequency(seq));
    return 0.5 * acc;
}

double total_variation_noise_floor(const EmpiricalDistribution& a, const EmpiricalDistribution& b) {
    std::set<Sequence> support;
    for (const auto& [seq, c] : a.counts()) support.insert(seq);
    for (const auto& [seq, c] : b.counts()) support.insert(seq);
    double acc = 0.0;
    for (const auto& seq : support) {
        const double ea = a.standard_error(seq);
        const double eb = b.standard_error(seq);
        acc += std::sqrt(ea * ea + eb * eb);
    }
    return 0.5 * acc;
}

double total_variation_noise_floor(const std::map<Sequence, double>& exact, std::uint64_t n) {
    if (n == 0) return 0.0;
    double acc = 0.0;
    for (const auto& [seq, p] : exact) acc += std::sqrt(p * std::max(0.0, 1.0 - p) / static_cast<double>(n));
    return 0.5 * acc;
}

double discretization_bias_constant(const OpenSystemSpec& spec, double t_final) {
    double max_rate = 0.0;
    for (const auto& ch : spec.channels()) {
        const ComplexMatrix j = effective_jump_operator(ch);
        max_rate = std::max(max_rate, hermitian_spectral_norm(j.adjoint() * j));
    }
    return kDiscretizationBiasConstant * std::max(1.0, t_final * max_rate);
}

EnsembleComparison ensemble_vs_master(const OpenSystemSpec& spec, const DensityMatrix& initial,
                                      const EnsembleConfig& cfg, double t_final) {
    const std::size_t steps = steps_for(t_final, spec.dt());
    if (steps != cfg.length) {
        throw Error(ErrorKind::Validation, "t_final must equal length * dt (" + std::to_string(cfg.length) +
                                               " steps configured, " + std::to_string(steps) + " implied)");
    }
    const Discretization disc = discretize(spec);
    const Hqmm model(disc.kraus, initial);
    EnsembleResult result = run_ensemble(model, cfg);
    DensityMatrix reference = rk4_evolve(spec, initial, t_final, std::max<std::size_t>(1, 100 * steps));
    const double distance = trace_distance(result.average_state, reference);
    const double statistical = 3.0 / std::sqrt(static_cast<double>(cfg.num_trajectories));
    const double bias = discretization_bias_constant(spec, t_final) * spec.dt();
    return EnsembleComparison{distance,
                              statistical,
                              bias,
                              distance <= statistical + bias,
                              std::move(result.average_state),
                              std::move(reference),
                              std::move(result.distribution)};
}

}  // namespace hqmm
