// Copyright 2026 The cstomo Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <complex>

#include <Eigen/Dense>

namespace cstomo {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;
using RealVector = Eigen::VectorXd;

/// Spectral decomposition A = V diag(values) V*, eigenvalues sorted descending.
struct EigenDecomposition {
  RealVector values;
  Matrix vectors;
};

/// A Hermitian, unit-trace, positive-semidefinite matrix.
///
/// Instances are either validated on construction (`from_matrix`) or produced
/// by `project_density_cone`, so holders may rely on the invariants without
/// rechecking. The stored matrix is exactly Hermitian.
class DensityMatrix {
 public:
  static constexpr double kTraceTol = 1e-9;
  static constexpr double kEigTol = 1e-9;

  /// Checks finiteness, Hermiticity (1e-12 absolute), trace and spectrum;
  /// throws InvalidArgument naming the measured deviation otherwise.
  static DensityMatrix from_matrix(const Matrix& m);

  /// The maximally mixed state I/d.
  static DensityMatrix maximally_mixed(Eigen::Index d);

  const Matrix& matrix() const noexcept { return m_; }
  Eigen::Index dim() const noexcept { return m_.rows(); }

 private:
  explicit DensityMatrix(Matrix m) : m_(std::move(m)) {}
  friend DensityMatrix project_density_cone(const Matrix& h);
  friend DensityMatrix pure_density(const Vector& psi);

  Matrix m_;
};

/// Kronecker product; block (j, k) of the result is a(j, k) * b.
Matrix kron(const Matrix& a, const Matrix& b);

/// n-fold Kronecker power (n >= 1).
Matrix kron_power(const Matrix& a, int n);

/// z z*.
Matrix outer(const Vector& z);

/// |psi><psi| for a unit vector; throws if |psi| deviates from 1 by more than 1e-10.
DensityMatrix pure_density(const Vector& psi);

/// Largest entrywise |h(j,k) - conj(h(k,j))|.
double hermitian_asymmetry(const Matrix& h);

/// (h + h*) / 2. Throws InvalidArgument when h is not square or its asymmetry exceeds 1e-6.
Matrix hermitian_part(const Matrix& h);

/// Eigendecomposition of a Hermitian matrix (symmetrized first).
/// Throws SolverError when the eigensolver does not converge.
EigenDecomposition herm_eig(const Matrix& h);

/// Euclidean projection onto the probability simplex {w >= 0, sum w = 1}.
RealVector project_simplex(const RealVector& v);

/// Frobenius-nearest density matrix: eigendecompose, project the spectrum
/// onto the simplex, recompose.
DensityMatrix project_density_cone(const Matrix& h);

/// Re Tr(a b). Throws DimensionError on shape mismatch and InvalidArgument if the
/// imaginary part exceeds 1e-10 relative to |a|_F |b|_F (non-Hermitian operands).
double trace_inner(const Matrix& a, const Matrix& b);

/// |a - b|_F. Throws DimensionError on shape mismatch.
double frobenius_distance(const Matrix& a, const Matrix& b);

/// True when every entry is finite.
bool all_finite(const Matrix& m);

}  // namespace cstomo
