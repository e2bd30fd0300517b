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

// Dense complex linear algebra shared by every model type. hbar = 1 throughout,
// so energies and rates carry units of inverse time.

#include <Eigen/Dense>

#include <complex>
#include <string_view>

namespace hqmm {

using Complex = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;
using RealMatrix = Eigen::MatrixXd;
using RealVector = Eigen::VectorXd;
using Index = Eigen::Index;

inline constexpr double kHermitianTol = 1e-10;
inline constexpr double kTraceTol = 1e-10;
inline constexpr double kPsdFloor = 1e-10;

/// Throws DimensionMismatch for non-square or empty input and Validation for
/// NaN/Inf entries. `what` names the offending operator in the message.
void require_square_finite(const ComplexMatrix& a, std::string_view what);

bool all_finite(const ComplexMatrix& a) noexcept;

ComplexMatrix dagger(const ComplexMatrix& a);
Complex trace(const ComplexMatrix& a);

/// (a + a†) / 2
ComplexMatrix hermitize(const ComplexMatrix& a);

/// ‖a − a†‖_F
double hermiticity_defect(const ComplexMatrix& a);

/// Scaling-and-squaring Pade exponential. Throws NumericFailure when the input
/// or the result is not finite.
ComplexMatrix matrix_exp(const ComplexMatrix& a);

/// true iff ‖a†a − I‖_F ≤ tol.
bool validate_unitary(const ComplexMatrix& a, double tol);

/// Ascending eigenvalues of the Hermitian part of `a`.
RealVector hermitian_eigenvalues(const ComplexMatrix& a);

/// Largest eigenvalue magnitude of a Hermitian matrix (spectral norm).
double hermitian_spectral_norm(const ComplexMatrix& a);

/// Half the trace norm of a − b for Hermitian (not necessarily normalized)
/// operators. Used where channel-iterated states carry a small trace defect.
double trace_norm_distance(const ComplexMatrix& a, const ComplexMatrix& b);

/// Hermitian, unit-trace, positive semidefinite operator.
class DensityMatrix {
public:
    /// Strict construction: Hermitian to 1e-10, trace 1 to 1e-10, minimum
    /// eigenvalue ≥ −1e-10. Throws Validation otherwise.
    explicit DensityMatrix(ComplexMatrix mat);

    /// For numerically evolved data. Re-Hermitizes, clips eigenvalues in
    /// [−1e-10, 0) to zero (rescaling to the pre-clip trace) and checks the
    /// trace against `trace_tol`. Eigenvalues below the floor or a trace
    /// outside tolerance raise NumericFailure.
    static DensityMatrix from_evolved(const ComplexMatrix& mat, double trace_tol = kTraceTol);

    /// |k⟩⟨k| in dimension dim.
    static DensityMatrix basis_state(Index dim, Index k);

    /// |ψ⟩⟨ψ| / ⟨ψ|ψ⟩.
    static DensityMatrix pure(const ComplexVector& psi);

    const ComplexMatrix& matrix() const noexcept { return mat_; }
    Index dim() const noexcept { return mat_.rows(); }

    bool operator==(const DensityMatrix& other) const { return mat_ == other.mat_; }

private:
    struct Unchecked {};
    DensityMatrix(ComplexMatrix mat, Unchecked) : mat_(std::move(mat)) {}

    ComplexMatrix mat_;
};

/// (1/2) Σ |λ_i(a − b)|. Throws DimensionMismatch on differing dims.
double trace_distance(const DensityMatrix& a, const DensityMatrix& b);

namespace ops {

/// Standard two-level operators in (g, e) ordering: |g⟩ = index 0.
ComplexMatrix identity(Index dim);
ComplexMatrix sigma_minus();  // |g⟩⟨e|
ComplexMatrix sigma_plus();   // |e⟩⟨g|
ComplexMatrix sigma_x();
ComplexMatrix sigma_y();
ComplexMatrix sigma_z();

}  // namespace ops

}  // namespace hqmm
