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

#include "hqmm/linalg.hpp"

#include "hqmm/error.hpp"

#include <unsupported/Eigen/MatrixFunctions>

#include <cmath>
#include <string>

namespace hqmm {

bool all_finite(const ComplexMatrix& a) noexcept {
    for (Index j = 0; j < a.cols(); ++j) {
        for (Index i = 0; i < a.rows(); ++i) {
            const Complex z = a(i, j);
            if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) return false;
        }
    }
    return true;
}

void require_square_finite(const ComplexMatrix& a, std::string_view what) {
    if (a.rows() < 1 || a.rows() != a.cols()) {
        throw Error(ErrorKind::DimensionMismatch,
                    std::string(what) + " must be a non-empty square matrix, got " +
                        std::to_string(a.rows()) + "x" + std::to_string(a.cols()));
    }
    if (!all_finite(a)) {
        throw Error(ErrorKind::Validation, std::string(what) + " has non-finite entries");
    }
}

ComplexMatrix dagger(const ComplexMatrix& a) { return a.adjoint(); }

Complex trace(const ComplexMatrix& a) { return a.trace(); }

ComplexMatrix hermitize(const ComplexMatrix& a) { return 0.5 * (a + a.adjoint()); }

double hermiticity_defect(const ComplexMatrix& a) { return (a - a.adjoint()).norm(); }

ComplexMatrix matrix_exp(const ComplexMatrix& a) {
    if (a.rows() != a.cols()) {
        throw Error(ErrorKind::DimensionMismatch, "matrix_exp requires a square matrix");
    }
    if (!all_finite(a)) {
        throw Error(ErrorKind::NumericFailure, "matrix_exp input has non-finite entries");
    }
    ComplexMatrix result = a.exp();
    if (!all_finite(result)) {
        throw Error(ErrorKind::NumericFailure,
                    "matrix_exp did not converge (norm " + std::to_string(a.norm()) + ")");
    }
    return result;
}

bool validate_unitary(const ComplexMatrix& a, double tol) {
    if (a.rows() != a.cols() || !all_finite(a)) return false;
    const ComplexMatrix defect = a.adjoint() * a - ComplexMatrix::Identity(a.rows(), a.cols());
    return defect.norm() <= tol;
}

RealVector hermitian_eigenvalues(const ComplexMatrix& a) {
    Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(hermitize(a), Eigen::EigenvaluesOnly);
    if (solver.info() != Eigen::Success) {
        throw Error(ErrorKind::NumericFailure, "Hermitian eigenvalue solver failed");
    }
    return solver.eigenvalues();
}

double hermitian_spectral_norm(const ComplexMatrix& a) {
    return hermitian_eigenvalues(a).cwiseAbs().maxCoeff();
}

double trace_norm_distance(const ComplexMatrix& a, const ComplexMatrix& b) {
    if (a.rows() != b.rows() || a.cols() != b.cols()) {
        throw Error(ErrorKind::DimensionMismatch, "trace distance between operators of different dims");
    }
    return 0.5 * hermitian_eigenvalues(a - b).cwiseAbs().sum();
}

DensityMatrix::DensityMatrix(ComplexMatrix mat) : mat_(std::move(mat)) {
    require_square_finite(mat_, "density matrix");
    const double herm = hermiticity_defect(mat_);
    if (herm > kHermitianTol) {
        throw Error(ErrorKind::Validation,
                    "density matrix is not Hermitian (defect " + std::to_string(herm) + ")");
    }
    const Complex tr = mat_.trace();
    if (std::abs(tr - Complex(1.0, 0.0)) > kTraceTol) {
        throw Error(ErrorKind::Validation, "density matrix trace is not 1 (trace " +
                                               std::to_string(tr.real()) + ")");
    }
    const double min_eig = hermitian_eigenvalues(mat_).minCoeff();
    if (min_eig < -kPsdFloor) {
        throw Error(ErrorKind::Validation, "density matrix is not positive semidefinite "
                                           "(min eigenvalue " + std::to_string(min_eig) + ")");
    }
}

DensityMatrix DensityMatrix::from_evolved(const ComplexMatrix& mat, double trace_tol) {
    require_square_finite(mat, "evolved state");
    ComplexMatrix h = hermitize(mat);
    Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(h);
    if (solver.info() != Eigen::Success) {
        throw Error(ErrorKind::NumericFailure, "Hermitian eigenvalue solver failed");
    }
    const RealVector& eig = solver.eigenvalues();
    if (eig.minCoeff() < -kPsdFloor) {
        throw Error(ErrorKind::NumericFailure, "evolved state lost positivity (min eigenvalue " +
                                                   std::to_string(eig.minCoeff()) + ")");
    }
    if (eig.minCoeff() < 0.0) {
        const double before = eig.sum();
        RealVector clipped = eig.cwiseMax(0.0);
        const double after = clipped.sum();
        if (after > 0.0) clipped *= before / after;
        h = solver.eigenvectors() * clipped.cast<Complex>().asDiagonal() *
            solver.eigenvectors().adjoint();
        h = hermitize(h);
    }
    const double tr = h.trace().real();
    if (!(std::abs(tr - 1.0) <= trace_tol)) {
        throw Error(ErrorKind::NumericFailure,
                    "evolved state trace drifted to " + std::to_string(tr));
    }
    return DensityMatrix(std::move(h), Unchecked{});
}

DensityMatrix DensityMatrix::basis_state(Index dim, Index k) {
    if (dim < 1 || k < 0 || k >= dim) {
        throw Error(ErrorKind::DimensionMismatch, "basis state index out of range");
    }
    ComplexMatrix m = ComplexMatrix::Zero(dim, dim);
    m(k, k) = 1.0;
    return DensityMatrix(std::move(m), Unchecked{});
}

DensityMatrix DensityMatrix::pure(const ComplexVector& psi) {
    const double n2 = psi.squaredNorm();
    if (psi.size() < 1 || !(n2 > 0.0) || !std::isfinite(n2)) {
        throw Error(ErrorKind::Validation, "pure state needs a non-zero finite vector");
    }
    return DensityMatrix(ComplexMatrix(psi * psi.adjoint() / n2));
}

double trace_distance(const DensityMatrix& a, const DensityMatrix& b) {
    if (a.dim() != b.dim()) {
        throw Error(ErrorKind::DimensionMismatch, "trace distance between states of dims " +
                                                      std::to_string(a.dim()) + " and " +
                                                      std::to_string(b.dim()));
    }
    return trace_norm_distance(a.matrix(), b.matrix());
}

namespace ops {

ComplexMatrix identity(Index dim) { return ComplexMatrix::Identity(dim, dim); }

ComplexMatrix sigma_minus() {
    ComplexMatrix m = ComplexMatrix::Zero(2, 2);
    m(0, 1) = 1.0;
    return m;
}

ComplexMatrix sigma_plus() { return sigma_minus().adjoint(); }

ComplexMatrix sigma_x() {
    ComplexMatrix m(2, 2);
    m << 0.0, 1.0, 1.0, 0.0;
    return m;
}

ComplexMatrix sigma_y() {
    ComplexMatrix m(2, 2);
    m << 0.0, Complex(0.0, -1.0), Complex(0.0, 1.0), 0.0;
    return m;
}

ComplexMatrix sigma_z() {
    ComplexMatrix m(2, 2);
    m << 1.0, 0.0, 0.0, -1.0;
    return m;
}

}  // namespace ops

}  // namespace hqmm
