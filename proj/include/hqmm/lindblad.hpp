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

// Open quantum systems with instantaneous feedback. Each feedback channel m
// collects jump terms ξ·L and a unitary back-action R_m applied whenever the
// bath registers outcome m, giving the effective jump operator
// J_m = R_m Σ ξ L. With every R_m = I this reduces to the feedback-free
// Lindblad equation.

#include "hqmm/alphabet.hpp"
#include "hqmm/hqmm.hpp"
#include "hqmm/linalg.hpp"

#include <functional>
#include <span>
#include <string>
#include <vector>

namespace hqmm {

/// Reserved label of the no-jump Kraus operator K₀.
inline const Symbol kNoJumpSymbol = "0";

struct JumpTerm {
    Complex amplitude;  // ξ, units of √rate
    ComplexMatrix op;   // L
};

struct FeedbackChannel {
    Symbol symbol;
    ComplexMatrix feedback;  // R_m
    std::vector<JumpTerm> terms;
};

class OpenSystemSpec {
public:
    /// Validates: H_int Hermitian to 1e-10, every R_m unitary to 1e-10, every
    /// channel non-empty with matching dims, channel symbols distinct and
    /// different from "0", dt > 0.
    OpenSystemSpec(ComplexMatrix hamiltonian, std::vector<FeedbackChannel> channels, double dt);

    Index dim() const noexcept { return hamiltonian_.rows(); }
    const ComplexMatrix& hamiltonian() const noexcept { return hamiltonian_; }
    const std::vector<FeedbackChannel>& channels() const noexcept { return channels_; }
    double dt() const noexcept { return dt_; }

    OpenSystemSpec with_dt(double dt) const;

    /// Same terms with every feedback unitary replaced by the identity.
    OpenSystemSpec without_feedback() const;

private:
    ComplexMatrix hamiltonian_;
    std::vector<FeedbackChannel> channels_;
    double dt_;
};

/// J_m = R_m · Σ_terms ξ L.
ComplexMatrix effective_jump_operator(const FeedbackChannel& channel);

/// H_cond = H_int − (i/2) Σ_m J_m† J_m. The R_m cancel in J_m†J_m, so H_cond
/// does not see the feedback.
ComplexMatrix conditional_hamiltonian(const OpenSystemSpec& spec);

/// −i[H_int, ρ] − ½ Σ_m {J_m†J_m, ρ} + Σ_m J_m ρ J_m†.
ComplexMatrix master_rhs(const OpenSystemSpec& spec, const ComplexMatrix& rho);

/// Classic RK4 on master_rhs with `steps` equal steps. Throws NumericFailure
/// if the trace drifts by more than 1e-8.
DensityMatrix rk4_evolve(const OpenSystemSpec& spec, const DensityMatrix& rho0, double t_final,
                         std::size_t steps);

/// Same integration, reporting (t, state) after every step (and at t = 0).
/// The last reported state equals rk4_evolve's result.
void rk4_trajectory(const OpenSystemSpec& spec, const DensityMatrix& rho0, double t_final,
                    std::size_t steps, const std::function<void(double, const DensityMatrix&)>& observer);

inline constexpr double kDtErrorThreshold = 0.5;
inline constexpr double kDtWarnThreshold = 0.1;

struct Discretization {
    LabeledKrausSet kraus;
    double defect;            // ‖Σ K†K − I‖_F
    double defect_constant;   // defect / Δt², the C in defect ≤ C·Δt²
    double stiffness;         // Δt · max_m ‖J_m†J_m‖
    std::vector<std::string> warnings;
};

/// K₀ = exp(−i H_cond Δt) labelled "0", and K_m = √Δt · J_m labelled m.
/// The resulting set is registered with its own measured defect as its
/// completeness tolerance; it is not renormalized. Throws DtTooLarge when
/// Δt·max‖J†J‖ > 0.5 and warns above 0.1.
Discretization discretize(const OpenSystemSpec& spec);

struct ConsistencyPoint {
    double dt;
    std::size_t steps;
    double distance;  // trace distance to the RK4 reference
};

/// Iterates the discretized channel t_final/Δt times for each Δt in the
/// ladder and compares with an RK4 reference of `reference_steps` steps.
/// Each t_final/Δt must be an integer to 1e-9 relative.
std::vector<ConsistencyPoint> channel_vs_master_consistency(const OpenSystemSpec& spec,
                                                            const DensityMatrix& rho0, double t_final,
                                                            std::span<const double> dts,
                                                            std::size_t reference_steps = 10000);

/// Number of Δt steps spanning t_final; Validation error unless integral.
std::size_t steps_for(double t_final, double dt);

namespace specs {

/// Two-level decay in (g, e) ordering: H_int = 0, one channel "1" with
/// ξ = √κ, L = σ⁻ and the given feedback unitary.
OpenSystemSpec decay(double kappa, double dt, const ComplexMatrix& feedback = ops::identity(2));

}  // namespace specs

}  // namespace hqmm
