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

#include "hqmm/lindblad.hpp"

#include "hqmm/error.hpp"

#include <cmath>
#include <optional>
#include <set>
#include <sstream>

namespace hqmm {

namespace {

// Precomputed pieces of the generator shared by every RHS evaluation.
struct MasterGenerator {
    ComplexMatrix hamiltonian;
    std::vector<ComplexMatrix> jumps;
    std::vector<ComplexMatrix> jumps_dag;
    ComplexMatrix decay;  // Σ J†J

    explicit MasterGenerator(const OpenSystemSpec& spec) : hamiltonian(spec.hamiltonian()) {
        const Index d = spec.dim();
        decay = ComplexMatrix::Zero(d, d);
        for (const auto& ch : spec.channels()) {
            jumps.push_back(effective_jump_operator(ch));
            jumps_dag.push_back(jumps.back().adjoint());
            decay += jumps_dag.back() * jumps.back();
        }
    }

    ComplexMatrix operator()(const ComplexMatrix& rho) const {
        const Complex i(0.0, 1.0);
        ComplexMatrix out = -i * (hamiltonian * rho - rho * hamiltonian);
        out -= 0.5 * (decay * rho + rho * decay);
        for (std::size_t k = 0; k < jumps.size(); ++k) out.noalias() += jumps[k] * rho * jumps_dag[k];
        return out;
    }
};

void require_dim(Index got, Index want, const char* what) {
    if (got != want) {
        throw Error(ErrorKind::DimensionMismatch, std::string(what) + " has dimension " +
                                                      std::to_string(got) + ", system has " +
                                                      std::to_string(want));
    }
}

}  // namespace

OpenSystemSpec::OpenSystemSpec(ComplexMatrix hamiltonian, std::vector<FeedbackChannel> channels, double dt)
    : hamiltonian_(std::move(hamiltonian)), channels_(std::move(channels)), dt_(dt) {
    require_square_finite(hamiltonian_, "H_int");
    const double herm = hermiticity_defect(hamiltonian_);
    if (herm > kHermitianTol) {
        throw Error(ErrorKind::Validation, "H_int is not Hermitian (defect " + std::to_string(herm) + ")");
    }
    if (!(dt_ > 0.0) || !std::isfinite(dt_)) {
        throw Error(ErrorKind::Validation, "dt must be positive and finite");
    }
    std::set<Symbol> seen;
    for (const auto& ch : channels_) {
        if (ch.symbol.empty()) throw Error(ErrorKind::Validation, "channel symbol must be non-empty");
        if (ch.symbol == kNoJumpSymbol) {
            throw Error(ErrorKind::Validation, "channel symbol \"0\" is reserved for the no-jump operator");
        }
        if (!seen.insert(ch.symbol).second) {
            throw Error(ErrorKind::Validation, "duplicate channel symbol '" + ch.symbol + "'");
        }
        require_square_finite(ch.feedback, "feedback unitary for '" + ch.symbol + "'");
        require_dim(ch.feedback.rows(), dim(), "feedback unitary");
        if (!validate_unitary(ch.feedback, 1e-10)) {
            throw Error(ErrorKind::Validation, "feedback operator for channel '" + ch.symbol + "' is not unitary");
        }
        if (ch.terms.empty()) {
            throw Error(ErrorKind::Validation, "channel '" + ch.symbol + "' has no jump terms");
        }
        for (const auto& term : ch.terms) {
            if (!std::isfinite(term.amplitude.real()) || !std::isfinite(term.amplitude.imag())) {
                throw Error(ErrorKind::Validation, "jump amplitude in channel '" + ch.symbol + "' is not finite");
            }
            require_square_finite(term.op, "jump operator in channel '" + ch.symbol + "'");
            require_dim(term.op.rows(), dim(), "jump operator");
        }
    }
}

OpenSystemSpec OpenSystemSpec::with_dt(double dt) const { return OpenSystemSpec(hamiltonian_, channels_, dt); }

OpenSystemSpec OpenSystemSpec::without_feedback() const {
    auto channels = channels_;
    for (auto& ch : channels) ch.feedback = ComplexMatrix::Identity(dim(), dim());
    return OpenSystemSpec(hamiltonian_, std::move(channels), dt_);
}

ComplexMatrix effective_jump_operator(const FeedbackChannel& channel) {
    const Index d = channel.feedback.rows();
    ComplexMatrix sum = ComplexMatrix::Zero(d, d);
    for (const auto& term : channel.terms) sum += term.amplitude * term.op;
    return channel.feedback * sum;
}

ComplexMatrix conditional_hamiltonian(const OpenSystemSpec& spec) {
    const MasterGenerator gen(spec);
    return spec.hamiltonian() - Complex(0.0, 0.5) * gen.decay;
}

ComplexMatrix master_rhs(const OpenSystemSpec& spec, const ComplexMatrix& rho) {
    require_dim(rho.rows(), spec.dim(), "state");
    require_dim(rho.cols(), spec.dim(), "state");
    return MasterGenerator(spec)(rho);
}

void rk4_trajectory(const OpenSystemSpec& spec, const DensityMatrix& rho0, double t_final,
                    std::size_t steps, const std::function<void(double, const DensityMatrix&)>& observer) {
    require_dim(rho0.dim(), spec.dim(), "initial state");
    if (steps < 1) throw Error(ErrorKind::Validation, "RK4 needs at least one step");
    if (!(t_final >= 0.0) || !std::isfinite(t_final)) {
        throw Error(ErrorKind::Validation, "t_final must be finite and nonnegative");
    }
    const MasterGenerator rhs(spec);
    const double h = t_final / static_cast<double>(steps);
    ComplexMatrix rho = rho0.matrix();
    if (observer) observer(0.0, rho0);
    for (std::size_t n = 0; n < steps; ++n) {
        const ComplexMatrix k1 = rhs(rho);
        const ComplexMatrix k2 = rhs(rho + (0.5 * h) * k1);
        const ComplexMatrix k3 = rhs(rho + (0.5 * h) * k2);
        const ComplexMatrix k4 = rhs(rho + h * k3);
        rho += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
        const double drift = std::abs(rho.trace() - Complex(1.0, 0.0));
        if (!(drift <= 1e-8)) {
            throw Error(ErrorKind::NumericFailure, "RK4 trace drifted by " + std::to_string(drift) +
                                                       " at step " + std::to_string(n + 1));
        }
        if (observer) {
            const double t = (n + 1 == steps) ? t_final : h * static_cast<double>(n + 1);
            observer(t, DensityMatrix::from_evolved(rho, 1e-8));
        }
    }
}

DensityMatrix rk4_evolve(const OpenSystemSpec& spec, const DensityMatrix& rho0, double t_final,
                         std::size_t steps) {
    std::optional<DensityMatrix> last;
    rk4_trajectory(spec, rho0, t_final, steps, [&](double, const DensityMatrix& rho) { last = rho; });
    return *last;
}

Discretization discretize(const OpenSystemSpec& spec) {
    const double dt = spec.dt();
    std::vector<ComplexMatrix> jumps;
    double max_rate = 0.0;
    for (const auto& ch : spec.channels()) {
        jumps.push_back(effective_jump_operator(ch));
        max_rate = std::max(max_rate, hermitian_spectral_norm(jumps.back().adjoint() * jumps.back()));
    }
    const double stiffness = dt * max_rate;
    std::vector<std::string> warnings;
    if (stiffness > kDtErrorThreshold) {
        throw Error(ErrorKind::DtTooLarge, "dt * max ||J^dag J|| = " + std::to_string(stiffness) +
                                               " exceeds " + std::to_string(kDtErrorThreshold));
    }
    if (stiffness > kDtWarnThreshold) {
        std::ostringstream msg;
        msg << "dt * max ||J^dag J|| = " << stiffness << " exceeds " << kDtWarnThreshold
            << "; discretization error may be large";
        warnings.push_back(msg.str());
    }

    std::vector<KrausOperator> ops;
    ops.push_back({kNoJumpSymbol, matrix_exp(Complex(0.0, -dt) * conditional_hamiltonian(spec))});
    for (std::size_t m = 0; m < jumps.size(); ++m) {
        ops.push_back({spec.channels()[m].symbol, std::sqrt(dt) * jumps[m]});
    }
    const double defect = completeness_defect(ops);
    const double tol = std::max(kDefaultCompletenessTol, defect * (1.0 + 1e-9) + 1e-14);
    return Discretization{LabeledKrausSet(std::move(ops), tol), defect, defect / (dt * dt), stiffness,
                          std::move(warnings)};
}

std::size_t steps_for(double t_final, double dt) {
    const double ratio = t_final / dt;
    const double rounded = std::round(ratio);
    if (!(t_final >= 0.0) || !(dt > 0.0) || std::abs(ratio - rounded) > 1e-9 * std::max(1.0, ratio)) {
        throw Error(ErrorKind::Validation, "t_final = " + std::to_string(t_final) +
                                               " is not an integer multiple of dt = " + std::to_string(dt));
    }
    return static_cast<std::size_t>(rounded);
}

std::vector<ConsistencyPoint> channel_vs_master_consistency(const OpenSystemSpec& spec,
                                                            const DensityMatrix& rho0, double t_final,
                                                            std::span<const double> dts,
                                                            std::size_t reference_steps) {
    const DensityMatrix reference = rk4_evolve(spec, rho0, t_final, reference_steps);
    std::vector<ConsistencyPoint> out;
    out.reserve(dts.size());
    for (double dt : dts) {
        const std::size_t steps = steps_for(t_final, dt);
        const Discretization disc = discretize(spec.with_dt(dt));
        ComplexMatrix rho = rho0.matrix();
        for (std::size_t n = 0; n < steps; ++n) rho = disc.kraus.apply_all(rho);
        out.push_back({dt, steps, trace_norm_distance(hermitize(rho), reference.matrix())});
    }
    return out;
}

namespace specs {

OpenSystemSpec decay(double kappa, double dt, const ComplexMatrix& feedback) {
    FeedbackChannel ch{"1", feedback, {JumpTerm{Complex(std::sqrt(kappa), 0.0), ops::sigma_minus()}}};
    return OpenSystemSpec(ComplexMatrix::Zero(2, 2), {std::move(ch)}, dt);
}

}  // namespace specs

}  // namespace hqmm
