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

#include "hqmm/alphabet.hpp"
#include "hqmm/hqmm.hpp"
#include "hqmm/lindblad.hpp"
#include "hqmm/linalg.hpp"
#include "hqmm/rng.hpp"

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace hqmm {

struct EnsembleConfig {
    std::size_t num_trajectories = 1;
    std::size_t length = 0;
    std::uint64_t master_seed = 0;
    bool record_states = false;
    /// Worker threads; 0 picks std::thread::hardware_concurrency(). Results do
    /// not depend on this value.
    unsigned threads = 1;
};

/// Exact integer counts of sampled sequences.
class EmpiricalDistribution {
public:
    void add(const Sequence& seq, std::uint64_t count = 1);
    void merge(const EmpiricalDistribution& other);

    const std::map<Sequence, std::uint64_t>& counts() const noexcept { return counts_; }
    std::uint64_t total() const noexcept { return total_; }
    std::uint64_t count(const Sequence& seq) const;
    double frequency(const Sequence& seq) const;

    /// √(f(1−f)/N) for the empirical frequency f.
    double standard_error(const Sequence& seq) const;

    bool operator==(const EmpiricalDistribution&) const = default;

private:
    std::map<Sequence, std::uint64_t> counts_;
    std::uint64_t total_ = 0;
};

struct EnsembleResult {
    EmpiricalDistribution distribution;
    DensityMatrix average_state;  // mean of final conditional states
    std::map<Sequence, double> standard_errors;
    std::vector<DensityMatrix> final_states;  // filled when record_states
    std::string generator = kGeneratorId;
};

/// Trajectory i is sampled with trajectory_seed(master_seed, i). Trajectories
/// are grouped into fixed blocks whose partial sums are combined in block
/// order, so the result is bit-identical for any thread count.
EnsembleResult run_ensemble(const Hqmm& model, const EnsembleConfig& cfg);

/// ½ Σ |f(seq) − p(seq)| over the union of supports.
double total_variation(const EmpiricalDistribution& emp, const std::map<Sequence, double>& exact);

/// ½ Σ |f_a(seq) − f_b(seq)|.
double total_variation(const EmpiricalDistribution& a, const EmpiricalDistribution& b);

/// Statistical scale of the distance between two independent empirical
/// distributions: ½ Σ_seq √(f_a(1−f_a)/N_a + f_b(1−f_b)/N_b).
double total_variation_noise_floor(const EmpiricalDistribution& a, const EmpiricalDistribution& b);

/// Statistical scale of the distance between an empirical distribution and
/// the exact one: ½ Σ_seq √(p(1−p)/N).
double total_variation_noise_floor(const std::map<Sequence, double>& exact, std::uint64_t n);

/// C in the C·Δt discretization allowance of ensemble_vs_master, in units of
/// the product of t_final and the largest jump rate.
inline constexpr double kDiscretizationBiasConstant = 1.0;

struct EnsembleComparison {
    double trace_distance;
    double statistical_bound;  // 3/√N
    double bias_bound;         // C·Δt
    bool pass;
    DensityMatrix average_state;
    DensityMatrix reference_state;
    EmpiricalDistribution distribution;
};

/// Ensemble average of the discretized model against RK4 (100 substeps per
/// Δt). PASS when distance ≤ 3/√N + C·Δt with C = kDiscretizationBiasConstant
/// · t_final · max_m ‖J_m†J_m‖ (at least kDiscretizationBiasConstant).
/// Requires t_final = cfg.length · spec.dt().
EnsembleComparison ensemble_vs_master(const OpenSystemSpec& spec, const DensityMatrix& initial,
                                      const EnsembleConfig& cfg, double t_final);

/// Bias constant actually used by ensemble_vs_master for this system.
double discretization_bias_constant(const OpenSystemSpec& spec, double t_final);

}  // namespace hqmm
